//! Published reference figures next to the values this model computes.
//!
//! All figures use the default array (512 rows, 8 blocks, 1 ns clock,
//! `T_w = T`). Patterns longer than three characters shrink the data width
//! to `W = 130 - (p - 1)` so the physical row stays 130 cells wide, and the
//! memory follows with `n = W`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::acam::ArrayGeometry;
use crate::cost::{blocks_for_text, breakdown, Breakdown, CostReport, EnergyParams, TimingParams};

/// Characters in the reference whole-genome-slice workload.
pub const MILLION_CHARS: usize = 1_000_000;

/// Physical cells per aCAM row in the reference design.
pub const ROW_CELLS: usize = 130;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Tolerance {
    Exact,
    /// Allowed relative error, e.g. `0.01` for 1 %.
    Relative(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceRow {
    pub key: &'static str,
    pub label: &'static str,
    pub unit: &'static str,
    pub computed: f64,
    pub reference: f64,
    pub tolerance: Tolerance,
}

impl ReferenceRow {
    pub fn relative_error(&self) -> f64 {
        (self.computed - self.reference) / self.reference
    }

    pub fn passes(&self) -> bool {
        match self.tolerance {
            Tolerance::Exact => (self.computed - self.reference).abs() < 1e-9,
            Tolerance::Relative(r) => self.relative_error().abs() <= r,
        }
    }

    /// Passing, but further off than half a percent.
    pub fn discrepancy(&self) -> bool {
        self.relative_error().abs() > 0.005
    }
}

/// Default geometry widened or narrowed for pattern length `p`.
pub fn reference_geometry(p: usize) -> ArrayGeometry {
    ArrayGeometry {
        data_width: ROW_CELLS - (p - 1),
        pattern_len: p,
        ..ArrayGeometry::default()
    }
}

/// Closed-form cost of searching `chars` characters with a `p`-long pattern.
pub fn reference_cost(p: usize, chars: usize) -> CostReport {
    let geometry = reference_geometry(p);
    let k = blocks_for_text(chars, &geometry);
    CostReport::predicted(&TimingParams::new(&geometry, k, 1.0), &EnergyParams::default())
}

pub fn reference_rows() -> Vec<ReferenceRow> {
    let p3 = reference_cost(3, MILLION_CHARS);
    let p5 = reference_cost(5, MILLION_CHARS);
    let p10 = reference_cost(10, MILLION_CHARS);
    let row = |key, label, unit, computed, reference, tolerance| ReferenceRow {
        key,
        label,
        unit,
        computed,
        reference,
        tolerance,
    };
    use Tolerance::*;
    vec![
        row("t_load", "load time", "ns", p3.latency.t_load_ns, 4096.0, Exact),
        row("dt12", "search + write", "ns", p3.latency.dt12_ns, 128.5, Exact),
        row("dt23", "read + detect", "ns", p3.latency.dt23_ns, 1024.625, Exact),
        row("dt34", "reset", "ns", p3.latency.dt34_ns, 1.0, Exact),
        row(
            "per_block",
            "per-block total",
            "ns",
            p3.latency.per_block_ns,
            1150.0,
            Relative(0.01),
        ),
        row(
            "total_p3",
            "1M chars, p=3",
            "us",
            p3.latency.search_ns / 1000.0,
            147.7,
            Relative(0.005),
        ),
        row(
            "total_p5",
            "1M chars, p=5",
            "us",
            p5.latency.search_ns / 1000.0,
            144.4,
            Relative(0.05),
        ),
        row(
            "total_p10",
            "1M chars, p=10",
            "us",
            p10.latency.search_ns / 1000.0,
            148.393,
            Relative(0.05),
        ),
        row(
            "energy_p3",
            "energy per block, p=3",
            "nJ",
            p3.energy.per_block_nj,
            5.2,
            Relative(0.01),
        ),
        row(
            "energy_p5",
            "energy per block, p=5",
            "nJ",
            p5.energy.per_block_nj,
            5.09,
            Relative(0.03),
        ),
        row(
            "energy_p10",
            "energy per block, p=10",
            "nJ",
            p10.energy.per_block_nj,
            4.9,
            Relative(0.03),
        ),
        row(
            "energy_per_char",
            "energy per character, p=3",
            "pJ",
            p3.energy.per_char_pj,
            0.61,
            Relative(0.10),
        ),
    ]
}

/// Latency and energy shares for the default `p = 3` block.
pub fn reference_breakdown() -> Breakdown {
    breakdown(&reference_cost(3, MILLION_CHARS))
}

pub fn render_rows(rows: &[ReferenceRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<28} {:>14} {:>14} {:>5} {:>9}  status",
        "figure", "computed", "reference", "unit", "error"
    );
    for r in rows {
        let status = match (r.passes(), r.discrepancy()) {
            (false, _) => "FAIL",
            (true, true) => "PASS (discrepancy)",
            (true, false) => "PASS",
        };
        let _ = writeln!(
            out,
            "{:<28} {:>14.3} {:>14.3} {:>5} {:>+8.2}%  {}",
            r.label,
            r.computed,
            r.reference,
            r.unit,
            r.relative_error() * 100.0,
            status
        );
    }
    out
}

pub fn render_breakdown(b: &Breakdown) -> String {
    let pct = |x: f64| format!("{:.3}%", x * 100.0);
    let mut out = String::new();
    let _ = writeln!(out, "latency share  search+write {}", pct(b.latency_write_search));
    let _ = writeln!(out, "latency share  read+detect  {}", pct(b.latency_read_detect));
    let _ = writeln!(out, "latency share  reset        {}", pct(b.latency_reset));
    let _ = writeln!(out, "energy share   write        {}", pct(b.energy_write));
    let _ = writeln!(out, "energy share   reset        {}", pct(b.energy_reset));
    let _ = writeln!(out, "energy share   read         {}", pct(b.energy_read));
    let _ = writeln!(out, "energy share   search       {}", pct(b.energy_search));
    let _ = writeln!(out, "energy share   detect       {}", pct(b.energy_detect));
    out
}
