//! Tandem-repeat pattern detector.
//!
//! The match-index bit stream is split into `p` phase classes by bit index
//! modulo `p`; a run of `k` consecutive ones inside one class means the
//! pattern occurs `k` times back to back. Each class owns a pointer block
//! (8-bit counter plus max register), and the global maximum is the largest
//! max register.
//!
//! [`detect_functional`] evaluates this directly for any `p`. The [`fsm`]
//! module clocks the three-pointer hardware detector cycle by cycle.

pub mod fsm;
pub mod oracle;

pub use fsm::{
    render_csv, render_table, run_cycle_accurate, run_driven, CycleRecord, CycleRun, DetectorState, FsmState,
    FLUSH_CYCLES, POINTERS,
};
pub use oracle::oracle_max_tandem;

use serde::Serialize;

/// Counter and max register of one pointer. Both saturate at 255.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PointerBlock {
    pub counter: u8,
    pub max: u8,
}

impl PointerBlock {
    pub fn increment(&mut self) {
        self.counter = self.counter.saturating_add(1);
    }

    /// The comparator in front of the max register only lets larger values in.
    pub fn compare(&mut self) {
        self.max = self.max.max(self.counter);
    }

    pub fn reset(&mut self) {
        self.counter = 0;
    }
}

/// Longest phase-aligned run of ones, saturated at 255.
///
/// Bit `i` (0-based) is handled by pointer `(i + 1) mod p`. A zero folds the
/// pointer's counter into its max register and clears it; the end of the
/// stream folds every counter.
pub fn detect_functional(bits: &[bool], p: usize) -> u32 {
    assert!(p >= 1, "pattern length must be positive");
    let mut pointers = vec![PointerBlock::default(); p];
    for (i, &bit) in bits.iter().enumerate() {
        let ptr = &mut pointers[(i + 1) % p];
        if bit {
            ptr.increment();
        } else {
            ptr.compare();
            ptr.reset();
        }
    }
    pointers
        .iter_mut()
        .map(|ptr| {
            ptr.compare();
            u32::from(ptr.max)
        })
        .max()
        .unwrap_or(0)
}
