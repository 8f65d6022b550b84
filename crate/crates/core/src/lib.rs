//! Behavioral simulator of an analog-CAM accelerator for tandem-repeat
//! detection in DNA.
//!
//! The text is stored once in a 2-bit analog CAM array. For each active
//! block, every window offset is searched in one cycle and the resulting tag
//! vector is written into a memristive match-index memory. The memory is then
//! streamed bit-serially into a pointer-based pattern detector that reports
//! the longest back-to-back run of the pattern. [`cost`] prices the metered
//! cycles in time and energy.
//!
//! ```
//! use dnacam::{scan, ScanRequest};
//!
//! let text = "TTCAGCAGCAGCAGTT".parse().unwrap();
//! let pattern = "CAG".parse().unwrap();
//! let result = scan(&ScanRequest::new(text, pattern)).unwrap();
//! assert_eq!(result.global_max, 4);
//! ```

pub mod acam;
pub mod bits;
pub mod cost;
pub mod detector;
pub mod error;
pub mod matchmem;
pub mod pipeline;
pub mod reference;
pub mod report;
pub mod seqio;

pub use acam::{load_text, AcamArray, ArrayGeometry, Cell, SearchDrive, TagVector, Voltage};
pub use bits::BitMatrix;
pub use cost::{CostReport, CycleCounts, EnergyParams, TimingParams};
pub use detector::{detect_functional, oracle_max_tandem, run_cycle_accurate, run_driven};
pub use error::{Error, Result};
pub use matchmem::{MatchIndexMemory, Mode, ReadStream};
pub use pipeline::{scan, BlockMap, DetectorMode, MemoryMode, ScanRequest, ScanResult};
pub use report::ScanReport;
pub use seqio::{
    builtin_catalog, classify, find_disease, parse_catalog, parse_text, Classification, DiseaseEntry, DnaSequence,
    InputFormat, Nucleotide, Pattern, RepeatRange,
};
