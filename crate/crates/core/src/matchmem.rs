//! 1T1R match-index memory.
//!
//! Tags are written one column per search cycle (all rows in parallel, column
//! selector advancing monotonically), read back row-major through an 8-bit
//! parallel-in serial-out register, then reset to HRS in a single cycle.
//! Selectors, sense amplifiers and drivers exist here only as ordering
//! contracts.

use std::fmt;

use serde::Serialize;

use crate::acam::TagVector;
use crate::bits::{bits_to_string, BitMatrix};
use crate::error::{Error, Result};

/// Cells latched per PISO load.
pub const PISO_WIDTH: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellState {
    /// Low-resistive: a match was recorded.
    Lrs,
    Hrs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Mode {
    Idle,
    Write,
    Read,
    Reset,
}

impl Mode {
    fn successor(self) -> Mode {
        match self {
            Mode::Idle => Mode::Write,
            Mode::Write => Mode::Read,
            Mode::Read => Mode::Reset,
            Mode::Reset => Mode::Idle,
        }
    }
}

/// Activity counters accumulated over the memory's lifetime.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct MemoryCounters {
    pub column_writes: u64,
    pub set_events: u64,
    pub piso_loads: u64,
    pub bits_read: u64,
    pub reset_cycles: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    Mode { from: Mode, to: Mode },
    WriteColumn { col: usize, bits: String },
    Read { bits: usize, loads: usize },
    Reset,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Mode { from, to } => write!(f, "mode {from:?}->{to:?}"),
            TraceEvent::WriteColumn { col, bits } => write!(f, "write col={col} tags={bits}"),
            TraceEvent::Read { bits, loads } => write!(f, "read bits={bits} loads={loads}"),
            TraceEvent::Reset => f.write_str("reset"),
        }
    }
}

/// Serial bit stream emitted by the PISO, in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReadStream(Vec<bool>);

impl ReadStream {
    pub fn new(bits: Vec<bool>) -> Self {
        ReadStream(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.0
    }

    pub fn extend(&mut self, other: &ReadStream) {
        self.0.extend_from_slice(&other.0);
    }
}

impl fmt::Display for ReadStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&bits_to_string(&self.0))
    }
}

#[derive(Default)]
struct Piso {
    latched: [bool; PISO_WIDTH],
    len: usize,
}

impl Piso {
    fn load(&mut self, cells: &[CellState]) {
        debug_assert!(cells.len() <= PISO_WIDTH);
        for (slot, &c) in self.latched.iter_mut().zip(cells) {
            *slot = c == CellState::Lrs;
        }
        self.len = cells.len();
    }

    fn shift_out(&self, out: &mut Vec<bool>) {
        out.extend_from_slice(&self.latched[..self.len]);
    }
}

#[derive(Debug, Clone)]
pub struct MatchIndexMemory {
    rows: usize,
    cols: usize,
    cells: Vec<CellState>,
    mode: Mode,
    next_col: usize,
    counters: MemoryCounters,
    trace: Option<Vec<TraceEvent>>,
}

impl MatchIndexMemory {
    pub fn new(rows: usize, cols: usize) -> Self {
        MatchIndexMemory {
            rows,
            cols,
            cells: vec![CellState::Hrs; rows * cols],
            mode: Mode::Idle,
            next_col: 0,
            counters: MemoryCounters::default(),
            trace: None,
        }
    }

    /// Records every mode change, column write, read and reset.
    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn counters(&self) -> MemoryCounters {
        self.counters
    }

    pub fn cell(&self, row: usize, col: usize) -> CellState {
        self.cells[row * self.cols + col]
    }

    pub fn trace(&self) -> &[TraceEvent] {
        self.trace.as_deref().unwrap_or(&[])
    }

    fn record(&mut self, event: TraceEvent) {
        if let Some(t) = self.trace.as_mut() {
            t.push(event);
        }
    }

    fn require(&self, expected: Mode) -> Result<()> {
        if self.mode != expected {
            return Err(Error::ModeViolation {
                expected,
                actual: self.mode,
            });
        }
        Ok(())
    }

    /// Only the cycle Idle -> Write -> Read -> Reset -> Idle is allowed.
    pub fn set_mode(&mut self, mode: Mode) -> Result<()> {
        if self.mode.successor() != mode {
            return Err(Error::IllegalTransition {
                from: self.mode,
                to: mode,
            });
        }
        let from = self.mode;
        self.mode = mode;
        if mode == Mode::Write {
            self.next_col = 0;
        }
        self.record(TraceEvent::Mode { from, to: mode });
        Ok(())
    }

    /// SETs the rows whose tag bit is high in column `col` (0-based).
    pub fn write_column(&mut self, col: usize, tag: &TagVector) -> Result<()> {
        self.require(Mode::Write)?;
        if col != self.next_col || col >= self.cols {
            return Err(Error::OutOfOrderColumn {
                expected: self.next_col,
                got: col,
            });
        }
        if tag.len() != self.rows {
            return Err(Error::TagLengthMismatch {
                expected: self.rows,
                actual: tag.len(),
            });
        }
        if (0..self.rows).any(|r| self.cell(r, col) == CellState::Lrs) {
            return Err(Error::DirtyColumn(col));
        }
        for (row, &bit) in tag.bits().iter().enumerate() {
            if bit {
                self.cells[row * self.cols + col] = CellState::Lrs;
                self.counters.set_events += 1;
            }
        }
        self.next_col += 1;
        self.counters.column_writes += 1;
        self.record(TraceEvent::WriteColumn {
            col,
            bits: bits_to_string(tag.bits()),
        });
        Ok(())
    }

    /// Streams the whole array. The row selector advances only after every
    /// column group of the current row has passed through the PISO.
    pub fn read_all(&mut self) -> Result<ReadStream> {
        self.require(Mode::Read)?;
        let mut out = Vec::with_capacity(self.rows * self.cols);
        let mut piso = Piso::default();
        let mut loads = 0;
        for row in 0..self.rows {
            let row_cells = &self.cells[row * self.cols..(row + 1) * self.cols];
            for group in row_cells.chunks(PISO_WIDTH) {
                piso.load(group);
                piso.shift_out(&mut out);
                loads += 1;
            }
        }
        self.counters.piso_loads += loads as u64;
        self.counters.bits_read += out.len() as u64;
        self.record(TraceEvent::Read { bits: out.len(), loads });
        Ok(ReadStream(out))
    }

    /// Returns every cell to HRS in one cycle.
    pub fn reset_all(&mut self) -> Result<()> {
        self.require(Mode::Reset)?;
        self.cells.fill(CellState::Hrs);
        self.counters.reset_cycles += 1;
        self.record(TraceEvent::Reset);
        Ok(())
    }

    /// Writes a whole matrix column by column; the memory must be idle.
    pub fn write_matrix(&mut self, matrix: &BitMatrix) -> Result<()> {
        self.set_mode(Mode::Write)?;
        for col in 0..matrix.cols() {
            self.write_column(col, &TagVector::new(matrix.column(col)))?;
        }
        Ok(())
    }

    pub fn snapshot(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.cell(r, c) == CellState::Lrs);
            }
        }
        m
    }
}
