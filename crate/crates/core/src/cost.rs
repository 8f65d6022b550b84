//! Latency and energy accounting.
//!
//! Per searched block the accelerator spends
//!
//! ```text
//! load (once)        t_load = 8 * M * T_w
//! search || write    dt12   = (W + 0.5) * T
//! read || detect     dt23   = 0.125 * (m * n + 5) * T
//! reset              dt34   = T
//! ```
//!
//! and `K` blocks take `t_load + K * (dt12 + dt23 + dt34)`. The closed form
//! is sometimes printed as `(t_1 + K * dt14) * T`; the trailing `T` is a
//! unit slip since `t_1` is already a time, and it is dropped here.
//!
//! Energy is charged per metered cycle: each phase's reference per-block
//! energy divided by that phase's reference cycle count, times the cycles
//! actually spent.

use serde::Serialize;

use crate::acam::ArrayGeometry;

/// Memristor programming steps per aCAM row: four characters, two devices.
pub const LOAD_STEPS_PER_ROW: u64 = 8;

/// Detector ticks per memory-read clock.
pub const DETECTOR_CLOCK_DIVISION: f64 = 8.0;

/// Post-stream detector ticks per block.
pub const DETECTOR_TAIL_TICKS: u64 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimingParams {
    pub clock_ns: f64,
    pub write_ns: f64,
    pub rows: usize,
    pub data_width: usize,
    pub pattern_len: usize,
    pub mem_rows: usize,
    pub mem_cols: usize,
    pub searched_blocks: usize,
}

impl TimingParams {
    /// Memory sized to one block: `m = M / B`, `n = W`. `T_w` defaults to `T`.
    pub fn new(geometry: &ArrayGeometry, searched_blocks: usize, clock_ns: f64) -> Self {
        TimingParams {
            clock_ns,
            write_ns: clock_ns,
            rows: geometry.rows,
            data_width: geometry.data_width,
            pattern_len: geometry.pattern_len,
            mem_rows: geometry.rows_per_block(),
            mem_cols: geometry.data_width,
            searched_blocks,
        }
    }

    /// Physical row width `N = W + p - 1`.
    pub fn total_cols(&self) -> usize {
        self.data_width + self.pattern_len - 1
    }
}

/// Cycle counts, either metered during a scan or predicted in closed form.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CycleCounts {
    pub blocks: u64,
    pub load_steps: u64,
    pub search_cycles: u64,
    pub column_writes: u64,
    pub piso_loads: u64,
    pub bits_read: u64,
    /// Detector clocks, running at 8x the memory-read clock.
    pub detector_ticks: u64,
    pub reset_cycles: u64,
    /// Memristor SETs; data dependent, so never predicted.
    pub set_events: u64,
}

impl CycleCounts {
    pub fn predicted(params: &TimingParams) -> Self {
        let k = params.searched_blocks as u64;
        let (m, n) = (params.mem_rows as u64, params.mem_cols as u64);
        let w = params.data_width as u64;
        CycleCounts {
            blocks: k,
            load_steps: LOAD_STEPS_PER_ROW * params.rows as u64,
            search_cycles: k * w,
            column_writes: k * w,
            piso_loads: k * m * n.div_ceil(8),
            bits_read: k * m * n,
            detector_ticks: k * (m * n + DETECTOR_TAIL_TICKS),
            reset_cycles: k,
            set_events: 0,
        }
    }

    /// Compares everything except the data-dependent SET count.
    pub fn same_schedule(&self, other: &CycleCounts) -> bool {
        CycleCounts { set_events: 0, ..*self }
            == CycleCounts {
                set_events: 0,
                ..*other
            }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Latency {
    pub t_load_ns: f64,
    pub dt12_ns: f64,
    pub dt23_ns: f64,
    pub dt34_ns: f64,
    pub per_block_ns: f64,
    pub blocks: u64,
    /// `K * per_block`, load excluded.
    pub search_ns: f64,
    pub total_ns: f64,
}

impl Latency {
    fn assemble(t_load_ns: f64, dt12_ns: f64, dt23_ns: f64, dt34_ns: f64, blocks: u64) -> Self {
        let per_block_ns = dt12_ns + dt23_ns + dt34_ns;
        let search_ns = blocks as f64 * per_block_ns;
        Latency {
            t_load_ns,
            dt12_ns,
            dt23_ns,
            dt34_ns,
            per_block_ns,
            blocks,
            search_ns,
            total_ns: t_load_ns + search_ns,
        }
    }
}

/// Closed-form latency.
pub fn latency(params: &TimingParams) -> Latency {
    let t = params.clock_ns;
    let mn = (params.mem_rows * params.mem_cols) as f64;
    Latency::assemble(
        LOAD_STEPS_PER_ROW as f64 * params.rows as f64 * params.write_ns,
        (params.data_width as f64 + 0.5) * t,
        (mn + DETECTOR_TAIL_TICKS as f64) * t / DETECTOR_CLOCK_DIVISION,
        t,
        params.searched_blocks as u64,
    )
}

/// Latency rebuilt from metered cycles; per-block phases are averages.
pub fn latency_from_cycles(counts: &CycleCounts, clock_ns: f64, write_ns: f64) -> Latency {
    let k = counts.blocks.max(1) as f64;
    Latency::assemble(
        counts.load_steps as f64 * write_ns,
        (counts.search_cycles as f64 / k + 0.5) * clock_ns,
        counts.detector_ticks as f64 / k * clock_ns / DETECTOR_CLOCK_DIVISION,
        counts.reset_cycles as f64 / k * clock_ns,
        counts.blocks,
    )
}

/// Cycles per block at which the reference energies were characterised.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceCycles {
    pub write: f64,
    pub reset: f64,
    pub read_ticks: f64,
    pub search: f64,
    pub detect_ticks: f64,
}

impl Default for ReferenceCycles {
    /// A 64 x 128 memory behind a 128-column search.
    fn default() -> Self {
        let ticks = (64.0 * 128.0) + DETECTOR_TAIL_TICKS as f64;
        ReferenceCycles {
            write: 128.0,
            reset: 1.0,
            read_ticks: ticks,
            search: 128.0,
            detect_ticks: ticks,
        }
    }
}

/// Per-block phase energies (nJ) at the reference cycle counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyParams {
    pub write_nj: f64,
    pub reset_nj: f64,
    pub read_nj: f64,
    pub search_nj: f64,
    pub detect_nj: f64,
    /// Assumed energy of a single memristor SET, pJ.
    pub set_pj: f64,
    pub reference: ReferenceCycles,
}

impl Default for EnergyParams {
    fn default() -> Self {
        EnergyParams {
            write_nj: 1.228,
            reset_nj: 1.228,
            read_nj: 0.82,
            search_nj: 1.1769,
            detect_nj: 0.7709,
            set_pj: 1.0,
            reference: ReferenceCycles::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Energy {
    pub write_nj: f64,
    pub reset_nj: f64,
    pub read_nj: f64,
    pub search_nj: f64,
    pub detect_nj: f64,
    pub total_nj: f64,
    pub per_block_nj: f64,
    /// Total divided by the number of match-index cells read (`K * m * n`).
    pub per_char_pj: f64,
    /// Data-dependent estimate: metered SETs times `set_pj`.
    pub set_estimate_nj: f64,
}

pub fn energy(params: &EnergyParams, counts: &CycleCounts) -> Energy {
    let r = &params.reference;
    let scale = |nj: f64, reference: f64, metered: u64| nj / reference * metered as f64;
    let write_nj = scale(params.write_nj, r.write, counts.column_writes);
    let reset_nj = scale(params.reset_nj, r.reset, counts.reset_cycles);
    let read_nj = scale(params.read_nj, r.read_ticks, counts.detector_ticks);
    let search_nj = scale(params.search_nj, r.search, counts.search_cycles);
    let detect_nj = scale(params.detect_nj, r.detect_ticks, counts.detector_ticks);
    let total_nj = write_nj + reset_nj + read_nj + search_nj + detect_nj;
    Energy {
        write_nj,
        reset_nj,
        read_nj,
        search_nj,
        detect_nj,
        total_nj,
        per_block_nj: total_nj / counts.blocks.max(1) as f64,
        per_char_pj: if counts.bits_read == 0 {
            0.0
        } else {
            total_nj * 1000.0 / counts.bits_read as f64
        },
        set_estimate_nj: counts.set_events as f64 * params.set_pj / 1000.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostReport {
    pub cycles: CycleCounts,
    pub latency: Latency,
    pub energy: Energy,
}

impl CostReport {
    pub fn from_cycles(counts: CycleCounts, clock_ns: f64, write_ns: f64, params: &EnergyParams) -> Self {
        CostReport {
            cycles: counts,
            latency: latency_from_cycles(&counts, clock_ns, write_ns),
            energy: energy(params, &counts),
        }
    }

    pub fn predicted(timing: &TimingParams, params: &EnergyParams) -> Self {
        let counts = CycleCounts::predicted(timing);
        CostReport {
            cycles: counts,
            latency: latency(timing),
            energy: energy(params, &counts),
        }
    }
}

/// Proportional shares. The overlapped phases are merged on the latency side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Breakdown {
    pub latency_write_search: f64,
    pub latency_read_detect: f64,
    pub latency_reset: f64,
    pub energy_write: f64,
    pub energy_reset: f64,
    pub energy_read: f64,
    pub energy_search: f64,
    pub energy_detect: f64,
}

pub fn breakdown(report: &CostReport) -> Breakdown {
    let l = &report.latency;
    let e = &report.energy;
    let share = |part: f64, whole: f64| if whole > 0.0 { part / whole } else { 0.0 };
    Breakdown {
        latency_write_search: share(l.dt12_ns, l.per_block_ns),
        latency_read_detect: share(l.dt23_ns, l.per_block_ns),
        latency_reset: share(l.dt34_ns, l.per_block_ns),
        energy_write: share(e.write_nj, e.total_nj),
        energy_reset: share(e.reset_nj, e.total_nj),
        energy_read: share(e.read_nj, e.total_nj),
        energy_search: share(e.search_nj, e.total_nj),
        energy_detect: share(e.detect_nj, e.total_nj),
    }
}

/// Blocks searched when a text of `chars` characters fills as many whole
/// arrays of `geometry` as it needs.
pub fn blocks_for_text(chars: usize, geometry: &ArrayGeometry) -> usize {
    chars.div_ceil(geometry.capacity()) * geometry.blocks
}
