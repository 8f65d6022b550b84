//! Cycle-accurate model of the three-pointer detector.
//!
//! The controller is a Moore machine. Each clock it samples `(X, D)` and
//! moves to the state that names the next pointer in round-robin order and
//! the value it received: `S(2k)` when pointer `k` saw a one, `S(2k-1)` when
//! it saw a zero. The datapath then acts on the new state:
//!
//! * `S(2k)` raises `Ck` and the counter increments on the clock edge.
//! * `S(2k-1)` enables pointer `k`'s comparator; the matching `Rk` is raised
//!   one clock later, so the max register always sees the counter before it
//!   is cleared. Pointer `k` is next visited three clocks later.
//! * `Initial` and `Exit` raise `CLR`. Entering `Exit` (any input with `D`
//!   high) folds the three max registers into the global maximum.
//!
//! The input sampled together with `D` is not counted. After the last data
//! bit, [`run_cycle_accurate`] feeds four zeros and then a fifth zero with
//! `D` high, [`FLUSH_CYCLES`] in total.

use std::fmt;
use std::fmt::Write;

use super::PointerBlock;
use crate::error::{Error, Result};

pub const POINTERS: usize = 3;

/// Clocks spent after the last data bit: four flush zeros plus the exit.
pub const FLUSH_CYCLES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FsmState {
    Initial,
    /// Pointer `k` (1-based) received a one.
    One(usize),
    /// Pointer `k` (1-based) received a zero.
    Zero(usize),
    Exit,
}

impl FsmState {
    fn pointer(self) -> Option<usize> {
        match self {
            FsmState::One(k) | FsmState::Zero(k) => Some(k),
            _ => None,
        }
    }

    fn clears(self) -> bool {
        matches!(self, FsmState::Initial | FsmState::Exit)
    }

    pub fn next(self, x: bool, d: bool) -> Result<FsmState> {
        if self == FsmState::Exit {
            return Err(Error::SteppedAfterExit);
        }
        if d {
            return Ok(FsmState::Exit);
        }
        let k = self.pointer().map_or(1, |k| k % POINTERS + 1);
        Ok(if x { FsmState::One(k) } else { FsmState::Zero(k) })
    }
}

impl fmt::Display for FsmState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FsmState::Initial => f.write_str("Initial"),
            FsmState::One(k) => write!(f, "S{}", 2 * k),
            FsmState::Zero(k) => write!(f, "S{}", 2 * k - 1),
            FsmState::Exit => f.write_str("Exit"),
        }
    }
}

/// Everything observable about one detector clock.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleRecord {
    pub cycle: usize,
    pub from: FsmState,
    pub to: FsmState,
    pub x: bool,
    pub d: bool,
    pub increment: [bool; POINTERS],
    pub reset: [bool; POINTERS],
    pub compare: [bool; POINTERS],
    pub clear: bool,
    pub counters: [u8; POINTERS],
    pub maxes: [u8; POINTERS],
    pub global_max: u8,
}

impl CycleRecord {
    /// Human-readable description of what the new state does.
    pub fn action(&self) -> String {
        match self.to {
            FsmState::One(k) => {
                format!("Increment ctr{k} (C{k}=1): ctr{k}={}", self.counters[k - 1])
            }
            FsmState::Zero(k) => format!(
                "Update max{k}: max{k}:={}; Reset ctr{k} (R{k}=1): ctr{k}=0",
                self.maxes[k - 1]
            ),
            FsmState::Exit => format!("Global max = {}", self.global_max),
            FsmState::Initial => "Clear".to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectorState {
    pub pointers: [PointerBlock; POINTERS],
    pub state: FsmState,
    pub global_max: u8,
    pub clear: bool,
    pending_reset: Option<usize>,
    cycle: usize,
}

impl Default for DetectorState {
    fn default() -> Self {
        DetectorState {
            pointers: [PointerBlock::default(); POINTERS],
            state: FsmState::Initial,
            global_max: 0,
            clear: true,
            pending_reset: None,
            cycle: 0,
        }
    }
}

impl DetectorState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cycles(&self) -> usize {
        self.cycle
    }

    /// Advances one clock.
    pub fn step(&mut self, x: bool, d: bool) -> Result<CycleRecord> {
        let from = self.state;
        let to = from.next(x, d)?;

        let mut increment = [false; POINTERS];
        let mut compare = [false; POINTERS];
        let mut reset = [false; POINTERS];
        match to {
            FsmState::One(k) => increment[k - 1] = true,
            FsmState::Zero(k) => compare[k - 1] = true,
            _ => {}
        }
        if let Some(k) = self.pending_reset.take() {
            reset[k - 1] = true;
        }
        let clear = to.clears();

        for (i, ptr) in self.pointers.iter_mut().enumerate() {
            if compare[i] {
                ptr.compare();
            }
            if clear || reset[i] {
                ptr.reset();
            } else if increment[i] {
                ptr.increment();
            }
        }
        if to == FsmState::Exit {
            // two-comparator tree
            let [a, b, c] = self.pointers.map(|p| p.max);
            self.global_max = a.max(b).max(c);
        }
        if let FsmState::Zero(k) = to {
            self.pending_reset = Some(k);
        }
        self.state = to;
        self.clear = clear;
        self.cycle += 1;

        Ok(CycleRecord {
            cycle: self.cycle,
            from,
            to,
            x,
            d,
            increment,
            reset,
            compare,
            clear,
            counters: self.pointers.map(|p| p.counter),
            maxes: self.pointers.map(|p| p.max),
            global_max: self.global_max,
        })
    }
}

/// Result of clocking the detector until it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleRun {
    pub global_max: u32,
    pub exited: bool,
    pub trace: Vec<CycleRecord>,
}

impl CycleRun {
    pub fn ticks(&self) -> usize {
        self.trace.len()
    }
}

/// Drives explicit `(X, D)` pairs, stopping at `Exit`. Inputs left after
/// the exit are an error.
pub fn run_driven(inputs: &[(bool, bool)]) -> Result<CycleRun> {
    let mut det = DetectorState::new();
    let mut trace = Vec::with_capacity(inputs.len());
    for &(x, d) in inputs {
        trace.push(det.step(x, d)?);
    }
    Ok(CycleRun {
        global_max: u32::from(det.global_max),
        exited: det.state == FsmState::Exit,
        trace,
    })
}

/// Streams `bits`, then the flush zeros and the exit cycle.
pub fn run_cycle_accurate(bits: &[bool]) -> CycleRun {
    let inputs: Vec<(bool, bool)> = bits
        .iter()
        .map(|&x| (x, false))
        .chain(std::iter::repeat_n((false, false), FLUSH_CYCLES - 1))
        .chain(std::iter::once((false, true)))
        .collect();
    run_driven(&inputs).expect("the exit input is the last one")
}

fn flag(b: bool) -> char {
    if b {
        '1'
    } else {
        '0'
    }
}

/// One line per clock:
/// `cycle,state,x,d,C1,C2,C3,R1,R2,R3,ctr1,ctr2,ctr3,max1,max2,max3`.
/// Register columns hold values after the clock edge.
pub fn render_csv(trace: &[CycleRecord]) -> String {
    let mut out = String::from("cycle,state,x,d,C1,C2,C3,R1,R2,R3,ctr1,ctr2,ctr3,max1,max2,max3\n");
    for r in trace {
        let _ = write!(out, "{},{},{},{}", r.cycle, r.to, flag(r.x), flag(r.d));
        for b in r.increment.iter().chain(&r.reset) {
            let _ = write!(out, ",{}", flag(*b));
        }
        for v in r.counters.iter().chain(&r.maxes) {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

/// Transition table: current state and input, next state, action.
pub fn render_table(trace: &[CycleRecord]) -> String {
    let mut out = String::from("current;xD | next | action\n");
    for r in trace {
        let _ = writeln!(
            out,
            "{}; {}{} | {} | {}",
            r.from,
            flag(r.x),
            flag(r.d),
            r.to,
            r.action()
        );
    }
    out
}
