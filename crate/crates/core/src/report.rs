//! Flat key-value scan report.
//!
//! Times are in ns, energies in nJ (per-character energy in pJ), all rounded
//! to three decimals so reports are byte-stable. Blocks are 1-based.

use serde::{Deserialize, Serialize};

use crate::cost::breakdown;
use crate::pipeline::{DetectorMode, ScanRequest, ScanResult};
use crate::seqio::Classification;

/// Keys present in every serialized report, in output order.
pub const REPORT_KEYS: &[&str] = &[
    "pattern",
    "disease",
    "gene",
    "text_length",
    "mode",
    "blocks",
    "global_max",
    "per_block_max",
    "classification",
    "overlapping_ranges",
    "t_load_ns",
    "dt12_ns",
    "dt23_ns",
    "dt34_ns",
    "per_block_ns",
    "search_ns",
    "total_ns",
    "energy_write_nj",
    "energy_reset_nj",
    "energy_read_nj",
    "energy_search_nj",
    "energy_detect_nj",
    "energy_total_nj",
    "energy_per_block_nj",
    "energy_per_char_pj",
    "energy_set_estimate_nj",
    "search_cycles",
    "column_writes",
    "set_events",
    "piso_loads",
    "bits_read",
    "detector_ticks",
    "reset_cycles",
    "share_latency_write_search",
    "share_latency_read_detect",
    "share_latency_reset",
    "cycles_match_prediction",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub pattern: String,
    pub disease: Option<String>,
    pub gene: Option<String>,
    pub text_length: usize,
    pub mode: String,
    pub blocks: Vec<usize>,
    pub global_max: u32,
    pub per_block_max: Vec<u32>,
    pub classification: Option<Classification>,
    pub overlapping_ranges: Option<bool>,
    pub t_load_ns: f64,
    pub dt12_ns: f64,
    pub dt23_ns: f64,
    pub dt34_ns: f64,
    pub per_block_ns: f64,
    pub search_ns: f64,
    pub total_ns: f64,
    pub energy_write_nj: f64,
    pub energy_reset_nj: f64,
    pub energy_read_nj: f64,
    pub energy_search_nj: f64,
    pub energy_detect_nj: f64,
    pub energy_total_nj: f64,
    pub energy_per_block_nj: f64,
    pub energy_per_char_pj: f64,
    pub energy_set_estimate_nj: f64,
    pub search_cycles: u64,
    pub column_writes: u64,
    pub set_events: u64,
    pub piso_loads: u64,
    pub bits_read: u64,
    pub detector_ticks: u64,
    pub reset_cycles: u64,
    pub share_latency_write_search: f64,
    pub share_latency_read_detect: f64,
    pub share_latency_reset: f64,
    pub cycles_match_prediction: bool,
}

fn r3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

impl ScanReport {
    pub fn new(request: &ScanRequest, result: &ScanResult) -> Self {
        let l = &result.cost.latency;
        let e = &result.cost.energy;
        let c = &result.cost.cycles;
        let shares = breakdown(&result.cost);
        ScanReport {
            pattern: request.pattern.to_string(),
            disease: request.disease.as_ref().map(|d| d.name.clone()),
            gene: request.disease.as_ref().map(|d| d.gene.clone()),
            text_length: request.text.len(),
            mode: match request.detector {
                DetectorMode::Functional => "functional",
                DetectorMode::CycleAccurate => "cycle",
            }
            .to_owned(),
            blocks: result.blocks.iter().map(|b| b + 1).collect(),
            global_max: result.global_max,
            per_block_max: result.per_block_max.iter().map(|&(_, m)| m).collect(),
            classification: result.classification,
            overlapping_ranges: request.disease.as_ref().map(|d| d.overlapping()),
            t_load_ns: r3(l.t_load_ns),
            dt12_ns: r3(l.dt12_ns),
            dt23_ns: r3(l.dt23_ns),
            dt34_ns: r3(l.dt34_ns),
            per_block_ns: r3(l.per_block_ns),
            search_ns: r3(l.search_ns),
            total_ns: r3(l.total_ns),
            energy_write_nj: r3(e.write_nj),
            energy_reset_nj: r3(e.reset_nj),
            energy_read_nj: r3(e.read_nj),
            energy_search_nj: r3(e.search_nj),
            energy_detect_nj: r3(e.detect_nj),
            energy_total_nj: r3(e.total_nj),
            energy_per_block_nj: r3(e.per_block_nj),
            energy_per_char_pj: r3(e.per_char_pj),
            energy_set_estimate_nj: r3(e.set_estimate_nj),
            search_cycles: c.search_cycles,
            column_writes: c.column_writes,
            set_events: c.set_events,
            piso_loads: c.piso_loads,
            bits_read: c.bits_read,
            detector_ticks: c.detector_ticks,
            reset_cycles: c.reset_cycles,
            share_latency_write_search: r3(shares.latency_write_search),
            share_latency_read_detect: r3(shares.latency_read_detect),
            share_latency_reset: r3(shares.latency_reset),
            cycles_match_prediction: c.same_schedule(&result.predicted),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acam::ArrayGeometry;
    use crate::pipeline::scan;
    use crate::seqio::{builtin_catalog, find_disease};

    fn sample() -> (ScanRequest, ScanResult) {
        let htt = find_disease(&builtin_catalog(), "Huntington's disease")
            .unwrap()
            .clone();
        let text = format!("GATTACA{}TTGA", "CAG".repeat(45)).parse().unwrap();
        let req = ScanRequest::new(text, htt.pattern.clone())
            .with_geometry(ArrayGeometry::new(16, 16, 3, 4).unwrap())
            .with_disease(htt);
        let res = scan(&req).unwrap();
        (req, res)
    }

    #[test]
    fn keys_match_documented_order() {
        let (req, res) = sample();
        let value = serde_json::to_value(ScanReport::new(&req, &res)).unwrap();
        let keys: Vec<&str> = value.as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = REPORT_KEYS.to_vec();
        expected.sort_unstable();
        let mut got = keys.clone();
        got.sort_unstable();
        assert_eq!(got, expected);
        let text = ScanReport::new(&req, &res).to_json();
        let mut last = 0;
        for key in REPORT_KEYS {
            let at = text.find(&format!("\"{key}\"")).unwrap();
            assert!(at >= last, "{key} out of order");
            last = at;
        }
    }

    #[test]
    fn report_is_deterministic_and_round_trips() {
        let (req, res) = sample();
        let a = ScanReport::new(&req, &res).to_json();
        let (req2, res2) = sample();
        assert_eq!(a, ScanReport::new(&req2, &res2).to_json());
        let back: ScanReport = serde_json::from_str(&a).unwrap();
        assert_eq!(back, ScanReport::new(&req, &res));
    }

    #[test]
    fn contents() {
        let (req, res) = sample();
        let r = ScanReport::new(&req, &res);
        assert_eq!(r.global_max, 45);
        assert_eq!(r.classification, Some(Classification::Disease));
        assert_eq!(r.gene.as_deref(), Some("HTT"));
        assert_eq!(r.blocks.first(), Some(&1));
        assert!(r.cycles_match_prediction);
        assert_eq!(r.dt12_ns, 16.5);
    }
}
