//! Sequence ingestion and the repeat-expansion disease catalog.
//!
//! Text and patterns are restricted to the four nucleotides. Ambiguity
//! codes such as `N` are rejected since the array has no wildcard storage.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Nucleotide {
    A,
    C,
    G,
    T,
}

impl Nucleotide {
    pub const ALL: [Nucleotide; 4] = [Nucleotide::A, Nucleotide::C, Nucleotide::G, Nucleotide::T];

    /// Accepts upper or lower case.
    pub fn from_byte(byte: u8) -> Option<Self> {
        match byte {
            b'A' | b'a' => Some(Nucleotide::A),
            b'C' | b'c' => Some(Nucleotide::C),
            b'G' | b'g' => Some(Nucleotide::G),
            b'T' | b't' => Some(Nucleotide::T),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Nucleotide::A => 'A',
            Nucleotide::C => 'C',
            Nucleotide::G => 'G',
            Nucleotide::T => 'T',
        }
    }
}

impl fmt::Display for Nucleotide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

fn write_symbols(f: &mut fmt::Formatter<'_>, symbols: &[Nucleotide]) -> fmt::Result {
    use fmt::Write;
    for n in symbols {
        f.write_char(n.as_char())?;
    }
    Ok(())
}

/// A validated, non-empty DNA text.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DnaSequence(Vec<Nucleotide>);

impl DnaSequence {
    pub fn new(symbols: Vec<Nucleotide>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(DnaSequence(symbols))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Nucleotide] {
        &self.0
    }
}

impl FromStr for DnaSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_text(s.as_bytes(), InputFormat::Raw)
    }
}

impl fmt::Display for DnaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbols(f, &self.0)
    }
}

/// The searched pattern. Its length is checked against an array's data
/// width when the array is loaded.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern(Vec<Nucleotide>);

impl Pattern {
    pub fn new(symbols: Vec<Nucleotide>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Pattern(symbols))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Nucleotide] {
        &self.0
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let seq = parse_text(s.as_bytes(), InputFormat::Raw)?;
        Ok(Pattern(seq.0))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbols(f, &self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputFormat {
    #[default]
    Raw,
    Fasta,
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "raw" => Ok(InputFormat::Raw),
            "fasta" => Ok(InputFormat::Fasta),
            other => Err(format!("unknown input format {other:?} (expected raw or fasta)")),
        }
    }
}

/// Parses raw or FASTA text into a sequence.
///
/// Whitespace and line breaks are skipped in both formats; in FASTA mode
/// lines starting with `>` are headers and dropped. Records are concatenated.
/// Positions in [`Error::InvalidCharacter`] are 1-based offsets into `raw`.
pub fn parse_text(raw: &[u8], format: InputFormat) -> Result<DnaSequence> {
    let mut symbols = Vec::with_capacity(raw.len());
    let mut offset = 0;
    for line in raw.split_inclusive(|&b| b == b'\n') {
        let header = format == InputFormat::Fasta && line.first() == Some(&b'>');
        if !header {
            for (i, &byte) in line.iter().enumerate() {
                if byte.is_ascii_whitespace() {
                    continue;
                }
                match Nucleotide::from_byte(byte) {
                    Some(n) => symbols.push(n),
                    None => {
                        return Err(Error::InvalidCharacter {
                            position: offset + i + 1,
                            byte,
                        })
                    }
                }
            }
        }
        offset += line.len();
    }
    DnaSequence::new(symbols)
}

/// Inclusive repeat-count interval; `None` marks an open end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RepeatRange {
    pub lo: Option<u32>,
    pub hi: Option<u32>,
}

impl RepeatRange {
    pub const fn new(lo: Option<u32>, hi: Option<u32>) -> Self {
        RepeatRange { lo, hi }
    }

    pub const fn bounded(lo: u32, hi: u32) -> Self {
        RepeatRange::new(Some(lo), Some(hi))
    }

    pub fn contains(&self, count: u32) -> bool {
        self.lo.is_none_or(|lo| count >= lo) && self.hi.is_none_or(|hi| count <= hi)
    }
}

impl fmt::Display for RepeatRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.lo, self.hi) {
            (Some(lo), Some(hi)) => write!(f, "{lo}-{hi}"),
            (None, Some(hi)) => write!(f, "<={hi}"),
            (Some(lo), None) => write!(f, ">={lo}"),
            (None, None) => write!(f, "any"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Normal,
    Indeterminate,
    Disease,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Normal => "normal",
            Classification::Indeterminate => "indeterminate",
            Classification::Disease => "disease",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiseaseEntry {
    pub name: String,
    pub gene: String,
    pub pattern: Pattern,
    pub normal: RepeatRange,
    pub disease: RepeatRange,
}

impl DiseaseEntry {
    pub fn new(name: &str, gene: &str, pattern: &str, normal: RepeatRange, disease: RepeatRange) -> Result<Self> {
        let pattern: Pattern = pattern.parse()?;
        if !(3..=4).contains(&pattern.len()) {
            return Err(Error::InvalidCatalogLine {
                line: 0,
                reason: format!("pattern {pattern} must have length 3 or 4"),
            });
        }
        for range in [normal, disease] {
            if let (Some(lo), Some(hi)) = (range.lo, range.hi) {
                if lo > hi {
                    return Err(Error::InvalidCatalogLine {
                        line: 0,
                        reason: format!("inverted range {lo}-{hi}"),
                    });
                }
            }
        }
        Ok(DiseaseEntry {
            name: name.to_owned(),
            gene: gene.to_owned(),
            pattern,
            normal,
            disease,
        })
    }

    /// True when some count lies in both ranges. Only the JPH3 row of the
    /// built-in catalog has this property.
    pub fn overlapping(&self) -> bool {
        let lo = self.normal.lo.unwrap_or(0).max(self.disease.lo.unwrap_or(0));
        let hi = self
            .normal
            .hi
            .unwrap_or(u32::MAX)
            .min(self.disease.hi.unwrap_or(u32::MAX));
        lo <= hi
    }

    pub fn classify(&self, count: u32) -> Classification {
        classify(count, self)
    }
}

/// Disease wins when the ranges overlap.
pub fn classify(count: u32, entry: &DiseaseEntry) -> Classification {
    if entry.disease.contains(count) {
        Classification::Disease
    } else if entry.normal.contains(count) {
        Classification::Normal
    } else {
        Classification::Indeterminate
    }
}

const BUILTIN: &[(&str, &str, &str, RepeatRange, RepeatRange)] = &[
    (
        "Ataxia syndrome",
        "FMR1",
        "CGG",
        RepeatRange::bounded(6, 54),
        RepeatRange::bounded(55, 200),
    ),
    (
        "Friedreich's ataxia",
        "FXN",
        "GAA",
        RepeatRange::bounded(5, 33),
        RepeatRange::bounded(66, 1300),
    ),
    (
        "Huntington's disease",
        "HTT",
        "CAG",
        RepeatRange::new(None, Some(26)),
        RepeatRange::new(Some(41), None),
    ),
    (
        "Fragile XE syndrome",
        "AFF2",
        "CCG",
        RepeatRange::bounded(6, 25),
        RepeatRange::new(Some(201), None),
    ),
    (
        "Myotonic dystrophy 2",
        "DMPK",
        "CCTG",
        RepeatRange::bounded(11, 26),
        RepeatRange::bounded(75, 11000),
    ),
    (
        "Spinocerebellar ataxia 1",
        "ATXN1",
        "CAG",
        RepeatRange::bounded(6, 35),
        RepeatRange::new(Some(39), None),
    ),
    (
        "Huntington's disease-like 2",
        "JPH3",
        "CTG",
        RepeatRange::bounded(6, 28),
        RepeatRange::bounded(4, 60),
    ),
    (
        "Spinal and bulbar muscular atrophy",
        "AR",
        "CAG",
        RepeatRange::bounded(11, 24),
        RepeatRange::bounded(40, 62),
    ),
    (
        "Dentatorubral-pallidoluysian atrophy",
        "ATN1",
        "CAG",
        RepeatRange::bounded(7, 25),
        RepeatRange::bounded(49, 88),
    ),
    (
        "Oculopharyngeal muscular dystrophy",
        "PABPN1",
        "GCG",
        RepeatRange::new(None, Some(10)),
        RepeatRange::bounded(12, 17),
    ),
];

/// The ten nucleotide-repeat disorders shipped with the simulator.
/// Strict bounds (`>40`) are stored as inclusive ones (`41`).
pub fn builtin_catalog() -> Vec<DiseaseEntry> {
    BUILTIN
        .iter()
        .map(|&(name, gene, pattern, normal, disease)| {
            DiseaseEntry::new(name, gene, pattern, normal, disease).expect("built-in catalog rows are valid")
        })
        .collect()
}

pub fn find_disease<'a>(catalog: &'a [DiseaseEntry], name: &str) -> Result<&'a DiseaseEntry> {
    catalog
        .iter()
        .find(|e| e.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownDisease(name.to_owned()))
}

fn parse_bound(field: &str, line: usize) -> Result<Option<u32>> {
    if field == "*" {
        return Ok(None);
    }
    field.parse().map(Some).map_err(|_| Error::InvalidCatalogLine {
        line,
        reason: format!("bad bound {field:?}"),
    })
}

/// Parses the comma-separated catalog format:
/// `name,gene,pattern,normal_lo,normal_hi,disease_lo,disease_hi`, with `*`
/// for an open endpoint. Blank lines and `#` comments are skipped.
pub fn parse_catalog(text: &str) -> Result<Vec<DiseaseEntry>> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != 7 {
            return Err(Error::InvalidCatalogLine {
                line,
                reason: format!("expected 7 fields, found {}", fields.len()),
            });
        }
        let normal = RepeatRange::new(parse_bound(fields[3], line)?, parse_bound(fields[4], line)?);
        let disease = RepeatRange::new(parse_bound(fields[5], line)?, parse_bound(fields[6], line)?);
        let entry = DiseaseEntry::new(fields[0], fields[1], fields[2], normal, disease).map_err(|e| match e {
            Error::InvalidCatalogLine { reason, .. } => Error::InvalidCatalogLine { line, reason },
            other => Error::InvalidCatalogLine {
                line,
                reason: other.to_string(),
            },
        })?;
        entries.push(entry);
    }
    Ok(entries)
}

pub fn render_catalog(entries: &[DiseaseEntry]) -> String {
    let bound = |b: Option<u32>| b.map_or_else(|| "*".to_owned(), |v| v.to_string());
    let mut out = String::new();
    for e in entries {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            e.name,
            e.gene,
            e.pattern,
            bound(e.normal.lo),
            bound(e.normal.hi),
            bound(e.disease.lo),
            bound(e.disease.hi)
        ));
    }
    out
}
