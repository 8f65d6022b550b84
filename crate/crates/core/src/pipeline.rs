//! End-to-end control flow: load the text once, then for every active block
//! run search + column writes, stream the memory into the detector and reset
//! it. Cycles are metered as they happen and priced by [`crate::cost`].

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::acam::{load_text, AcamArray, ArrayGeometry};
use crate::cost::{CostReport, CycleCounts, EnergyParams, TimingParams, DETECTOR_TAIL_TICKS, LOAD_STEPS_PER_ROW};
use crate::detector::{detect_functional, run_cycle_accurate, CycleRecord, POINTERS};
use crate::error::{Error, Result};
use crate::matchmem::{MatchIndexMemory, MemoryCounters, Mode, ReadStream};
use crate::seqio::{classify, Classification, DiseaseEntry, DnaSequence, Pattern};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DetectorMode {
    #[default]
    Functional,
    CycleAccurate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MemoryMode {
    /// One memory shared by all blocks; blocks run one after another.
    #[default]
    Shared,
    /// A private memory per block, processed concurrently.
    PerBlock,
}

#[derive(Debug, Clone)]
pub struct ScanRequest {
    pub text: DnaSequence,
    pub pattern: Pattern,
    pub geometry: ArrayGeometry,
    /// 0-based block indices. `None` selects every block holding text.
    pub active_blocks: Option<BTreeSet<usize>>,
    pub clock_ns: f64,
    pub write_ns: f64,
    pub energy: EnergyParams,
    pub detector: DetectorMode,
    pub memory: MemoryMode,
    pub disease: Option<DiseaseEntry>,
    pub keep_traces: bool,
}

impl ScanRequest {
    /// Default array geometry with `p` taken from the pattern, 1 ns clock.
    pub fn new(text: DnaSequence, pattern: Pattern) -> Self {
        let geometry = ArrayGeometry {
            pattern_len: pattern.len(),
            ..ArrayGeometry::default()
        };
        ScanRequest {
            text,
            pattern,
            geometry,
            active_blocks: None,
            clock_ns: 1.0,
            write_ns: 1.0,
            energy: EnergyParams::default(),
            detector: DetectorMode::default(),
            memory: MemoryMode::default(),
            disease: None,
            keep_traces: false,
        }
    }

    pub fn with_geometry(mut self, geometry: ArrayGeometry) -> Self {
        self.geometry = geometry;
        self
    }

    pub fn with_blocks(mut self, blocks: impl IntoIterator<Item = usize>) -> Self {
        self.active_blocks = Some(blocks.into_iter().collect());
        self
    }

    pub fn with_disease(mut self, entry: DiseaseEntry) -> Self {
        self.disease = Some(entry);
        self
    }

    pub fn with_detector(mut self, mode: DetectorMode) -> Self {
        self.detector = mode;
        self
    }

    pub fn with_memory(mut self, mode: MemoryMode) -> Self {
        self.memory = mode;
        self
    }
}

#[derive(Debug, Clone)]
pub struct ScanResult {
    pub global_max: u32,
    /// `(block, max)` with each block's stream detected on its own.
    pub per_block_max: Vec<(usize, u32)>,
    pub classification: Option<Classification>,
    pub cost: CostReport,
    pub predicted: CycleCounts,
    pub blocks: Vec<usize>,
    /// Memory trace lines (only with `keep_traces`).
    pub memory_trace: Vec<String>,
    /// Detector clocks in cycle-accurate mode (only with `keep_traces`).
    pub detector_trace: Vec<CycleRecord>,
}

struct BlockOutcome {
    block: usize,
    stream: ReadStream,
    search_cycles: u64,
    memory: MemoryCounters,
    trace: Vec<String>,
}

fn process_block(
    array: &AcamArray,
    memory: &mut MatchIndexMemory,
    block: usize,
    pattern: &Pattern,
) -> Result<BlockOutcome> {
    let before = memory.counters();
    let trace_start = memory.trace().len();
    let width = array.geometry().data_width;
    let mut search_cycles = 0;

    memory.set_mode(Mode::Write)?;
    for window in 0..width {
        let tags = array.search_cycle(block, window, pattern)?;
        search_cycles += 1;
        memory.write_column(window, &tags)?;
    }
    memory.set_mode(Mode::Read)?;
    let stream = memory.read_all()?;
    memory.set_mode(Mode::Reset)?;
    memory.reset_all()?;
    memory.set_mode(Mode::Idle)?;

    let after = memory.counters();
    let trace = memory.trace()[trace_start..]
        .iter()
        .map(|e| format!("block {} {e}", block + 1))
        .collect();
    Ok(BlockOutcome {
        block,
        stream,
        search_cycles,
        memory: MemoryCounters {
            column_writes: after.column_writes - before.column_writes,
            set_events: after.set_events - before.set_events,
            piso_loads: after.piso_loads - before.piso_loads,
            bits_read: after.bits_read - before.bits_read,
            reset_cycles: after.reset_cycles - before.reset_cycles,
        },
        trace,
    })
}

/// Splits sorted block indices into runs of consecutive indices.
fn consecutive_runs(blocks: &[usize]) -> Vec<std::ops::Range<usize>> {
    let mut runs = Vec::new();
    let mut start = 0;
    for i in 1..=blocks.len() {
        if i == blocks.len() || blocks[i] != blocks[i - 1] + 1 {
            runs.push(start..i);
            start = i;
        }
    }
    runs
}

pub fn scan(request: &ScanRequest) -> Result<ScanResult> {
    let geometry = request.geometry;
    if geometry.pattern_len != request.pattern.len() {
        return Err(Error::PatternLengthMismatch {
            expected: geometry.pattern_len,
            actual: request.pattern.len(),
        });
    }
    if request.detector == DetectorMode::CycleAccurate && request.pattern.len() != POINTERS {
        return Err(Error::UnsupportedPatternLength(request.pattern.len()));
    }
    let array = load_text(&request.text, geometry)?;
    let blocks: Vec<usize> = match &request.active_blocks {
        Some(set) => set.iter().copied().collect(),
        None => array.occupied_blocks(),
    };
    if blocks.is_empty() {
        return Err(Error::NoActiveBlocks);
    }
    if let Some(&b) = blocks.iter().find(|&&b| b >= geometry.blocks) {
        return Err(Error::BlockOutOfRange {
            block: b,
            blocks: geometry.blocks,
        });
    }

    let (m, n) = (geometry.rows_per_block(), geometry.data_width);
    let outcomes: Vec<BlockOutcome> = match request.memory {
        MemoryMode::Shared => {
            let mut memory = MatchIndexMemory::new(m, n);
            if request.keep_traces {
                memory = memory.with_trace();
            }
            blocks
                .iter()
                .map(|&b| process_block(&array, &mut memory, b, &request.pattern))
                .collect::<Result<_>>()?
        }
        MemoryMode::PerBlock => blocks
            .par_iter()
            .map(|&b| {
                let mut memory = MatchIndexMemory::new(m, n);
                if request.keep_traces {
                    memory = memory.with_trace();
                }
                process_block(&array, &mut memory, b, &request.pattern)
            })
            .collect::<Result<_>>()?,
    };

    let p = request.pattern.len();
    let mut global_max = 0;
    let mut detector_trace = Vec::new();
    for run in consecutive_runs(&blocks) {
        let mut stream = ReadStream::default();
        for o in &outcomes[run] {
            stream.extend(&o.stream);
        }
        let found = match request.detector {
            DetectorMode::Functional => detect_functional(stream.bits(), p),
            DetectorMode::CycleAccurate => {
                let cycle_run = run_cycle_accurate(stream.bits());
                if request.keep_traces {
                    detector_trace.extend(cycle_run.trace);
                }
                cycle_run.global_max
            }
        };
        global_max = global_max.max(found);
    }

    let mut counts = CycleCounts {
        blocks: blocks.len() as u64,
        load_steps: LOAD_STEPS_PER_ROW * geometry.rows as u64,
        ..CycleCounts::default()
    };
    for o in &outcomes {
        counts.search_cycles += o.search_cycles;
        counts.column_writes += o.memory.column_writes;
        counts.set_events += o.memory.set_events;
        counts.piso_loads += o.memory.piso_loads;
        counts.bits_read += o.memory.bits_read;
        // the detector holds through the tail of blocks that continue a run
        counts.detector_ticks += o.stream.len() as u64 + DETECTOR_TAIL_TICKS;
        counts.reset_cycles += o.memory.reset_cycles;
    }
    let mut timing = TimingParams::new(&geometry, blocks.len(), request.clock_ns);
    timing.write_ns = request.write_ns;
    let predicted = CycleCounts::predicted(&timing);
    if !counts.same_schedule(&predicted) {
        return Err(Error::InvariantViolation(format!(
            "metered cycles {counts:?} differ from the closed form {predicted:?}"
        )));
    }

    Ok(ScanResult {
        global_max,
        per_block_max: outcomes
            .iter()
            .map(|o| (o.block, detect_functional(o.stream.bits(), p)))
            .collect(),
        classification: request.disease.as_ref().map(|e| classify(global_max, e)),
        cost: CostReport::from_cycles(counts, request.clock_ns, request.write_ns, &request.energy),
        predicted,
        blocks,
        memory_trace: outcomes.into_iter().flat_map(|o| o.trace).collect(),
        detector_trace,
    })
}

/// Gene to block assignment (0-based blocks).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BlockMap {
    genes: BTreeMap<String, BTreeSet<usize>>,
}

impl BlockMap {
    /// Blocks must exist and must not be shared between genes.
    pub fn new<I, S>(assignments: I, blocks: usize) -> Result<Self>
    where
        I: IntoIterator<Item = (S, BTreeSet<usize>)>,
        S: Into<String>,
    {
        let mut owner: BTreeMap<usize, String> = BTreeMap::new();
        let mut genes: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
        for (gene, set) in assignments {
            let gene = gene.into();
            for &b in &set {
                if b >= blocks {
                    return Err(Error::BlockOutOfRange { block: b, blocks });
                }
                if let Some(first) = owner.get(&b) {
                    if *first != gene {
                        return Err(Error::OverlappingAssignment {
                            block: b,
                            first: first.clone(),
                            second: gene,
                        });
                    }
                }
                owner.insert(b, gene.clone());
            }
            genes.entry(gene).or_default().extend(set);
        }
        Ok(BlockMap { genes })
    }

    /// Parses `GENE=1,2` lines with 1-based block numbers. `#` starts a comment.
    pub fn parse(text: &str, blocks: usize) -> Result<Self> {
        let mut assignments = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |reason: String| Error::InvalidCatalogLine { line: idx + 1, reason };
            let (gene, list) = line.split_once('=').ok_or_else(|| bad("expected GENE=blocks".into()))?;
            let set = list
                .split(',')
                .map(|s| match s.trim().parse::<usize>() {
                    Ok(b) if b >= 1 => Ok(b - 1),
                    _ => Err(bad(format!("bad block number {:?}", s.trim()))),
                })
                .collect::<Result<BTreeSet<usize>>>()?;
            assignments.push((gene.trim().to_owned(), set));
        }
        BlockMap::new(assignments, blocks)
    }

    pub fn blocks_for_gene(&self, gene: &str) -> Result<&BTreeSet<usize>> {
        self.genes
            .get(gene)
            .ok_or_else(|| Error::GeneNotMapped(gene.to_owned()))
    }

    pub fn blocks_for(&self, entry: &DiseaseEntry) -> Result<&BTreeSet<usize>> {
        self.blocks_for_gene(&entry.gene)
    }
}
