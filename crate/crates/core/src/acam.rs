//! Behavioral model of the analog CAM array.
//!
//! Every cell stores a voltage interval `[LB, UB]`. A cell matches a search
//! drive `(V_LDL, V_UDL)` when `V_LDL >= LB` and `V_UDL <= UB`; a row's match
//! line stays high only when every cell in the row matches. Columns outside
//! the active window are driven with `(V_DD, 0)`, which satisfies both
//! inequalities for every stored interval.
//!
//! Voltages are held as integer centivolts so the endpoint comparisons are
//! exact. Pre-charge/evaluate phases collapse into one logical search cycle.

use std::fmt;

use serde::Serialize;

use crate::bits::BitMatrix;
use crate::error::{Error, Result};
use crate::seqio::{DnaSequence, Nucleotide, Pattern};

/// A voltage in hundredths of a volt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Voltage(u16);

impl Voltage {
    pub const ZERO: Voltage = Voltage(0);
    /// Supply voltage, 0.8 V.
    pub const VDD: Voltage = Voltage(80);

    pub const fn from_centivolts(cv: u16) -> Self {
        Voltage(cv)
    }

    pub const fn centivolts(self) -> u16 {
        self.0
    }

    pub fn volts(self) -> f64 {
        f64::from(self.0) / 100.0
    }
}

impl fmt::Display for Voltage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.0 / 100, self.0 % 100)
    }
}

/// Stored match interval. Inverted only for the dummy `MM` content.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MatchInterval {
    pub lower: Voltage,
    pub upper: Voltage,
}

impl MatchInterval {
    const fn cv(lower: u16, upper: u16) -> Self {
        MatchInterval {
            lower: Voltage(lower),
            upper: Voltage(upper),
        }
    }

    pub fn is_inverted(&self) -> bool {
        self.lower > self.upper
    }
}

/// Programmed memristor pair, in kΩ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Resistances {
    pub lower_kohm: f64,
    pub upper_kohm: f64,
}

/// What a single aCAM cell holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Char(Nucleotide),
    /// Dummy content that mismatches every character drive.
    Mismatch,
}

const INTERVAL_A: MatchInterval = MatchInterval::cv(19, 31);
const INTERVAL_C: MatchInterval = MatchInterval::cv(32, 44);
const INTERVAL_G: MatchInterval = MatchInterval::cv(46, 59);
const INTERVAL_T: MatchInterval = MatchInterval::cv(63, 79);
// LB takes T's upper bound, UB takes A's lower bound.
const INTERVAL_MM: MatchInterval = MatchInterval::cv(79, 19);

impl Cell {
    pub fn interval(self) -> MatchInterval {
        match self {
            Cell::Char(Nucleotide::A) => INTERVAL_A,
            Cell::Char(Nucleotide::C) => INTERVAL_C,
            Cell::Char(Nucleotide::G) => INTERVAL_G,
            Cell::Char(Nucleotide::T) => INTERVAL_T,
            Cell::Mismatch => INTERVAL_MM,
        }
    }

    pub fn resistances(self) -> Resistances {
        let (lower_kohm, upper_kohm) = match self {
            Cell::Char(Nucleotide::A) => (2500.0, 186.32),
            Cell::Char(Nucleotide::C) => (163.3, 27.6),
            Cell::Char(Nucleotide::G) => (24.9, 9.69),
            Cell::Char(Nucleotide::T) => (8.9, 5.06),
            Cell::Mismatch => (5.06, 2500.0),
        };
        Resistances { lower_kohm, upper_kohm }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Char(n) => write!(f, "{n}"),
            Cell::Mismatch => f.write_str("MM"),
        }
    }
}

pub fn encode_char(c: Nucleotide) -> Cell {
    Cell::Char(c)
}

/// Column input for one search cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchDrive {
    DontCare,
    Search(Nucleotide),
}

impl SearchDrive {
    /// Lower data line voltage.
    pub fn ldl(self) -> Voltage {
        match self {
            SearchDrive::DontCare => Voltage::VDD,
            SearchDrive::Search(c) => midpoint(c),
        }
    }

    /// Upper data line voltage.
    pub fn udl(self) -> Voltage {
        match self {
            SearchDrive::DontCare => Voltage::ZERO,
            SearchDrive::Search(c) => midpoint(c),
        }
    }
}

fn midpoint(c: Nucleotide) -> Voltage {
    Voltage(match c {
        Nucleotide::A => 25,
        Nucleotide::C => 38,
        Nucleotide::G => 53,
        Nucleotide::T => 71,
    })
}

pub fn drive_for(c: Option<Nucleotide>) -> SearchDrive {
    c.map_or(SearchDrive::DontCare, SearchDrive::Search)
}

/// Both subcircuits must hold the match line high; endpoints are inclusive.
pub fn cell_matches(cell: Cell, drive: SearchDrive) -> bool {
    let iv = cell.interval();
    drive.ldl() >= iv.lower && drive.udl() <= iv.upper
}

/// Array dimensions: `rows` (M), `data_width` (W), pattern length `p` and
/// block count (B). Each row has `W + p - 1` physical columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ArrayGeometry {
    pub rows: usize,
    pub data_width: usize,
    pub pattern_len: usize,
    pub blocks: usize,
}

impl Default for ArrayGeometry {
    fn default() -> Self {
        ArrayGeometry {
            rows: 512,
            data_width: 128,
            pattern_len: 3,
            blocks: 8,
        }
    }
}

impl ArrayGeometry {
    pub fn new(rows: usize, data_width: usize, pattern_len: usize, blocks: usize) -> Result<Self> {
        let g = ArrayGeometry {
            rows,
            data_width,
            pattern_len,
            blocks,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.data_width == 0 || self.pattern_len == 0 || self.blocks == 0 {
            return Err(Error::InvalidGeometry("all dimensions must be positive".into()));
        }
        if !self.rows.is_multiple_of(self.blocks) {
            return Err(Error::InvalidGeometry(format!(
                "{} rows cannot be split into {} equal blocks",
                self.rows, self.blocks
            )));
        }
        if self.pattern_len > self.data_width {
            return Err(Error::PatternTooLong {
                len: self.pattern_len,
                width: self.data_width,
            });
        }
        Ok(())
    }

    pub fn total_cols(&self) -> usize {
        self.data_width + self.pattern_len - 1
    }

    pub fn rows_per_block(&self) -> usize {
        self.rows / self.blocks
    }

    pub fn capacity(&self) -> usize {
        self.rows * self.data_width
    }

    /// Rows belonging to `block` (0-based).
    pub fn block_rows(&self, block: usize) -> std::ops::Range<usize> {
        let m = self.rows_per_block();
        block * m..(block + 1) * m
    }
}

/// Match-line results of one block for one search cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagVector(Vec<bool>);

impl TagVector {
    pub fn new(bits: Vec<bool>) -> Self {
        TagVector(bits)
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
}

/// A loaded array. Immutable once built by [`load_text`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcamArray {
    geometry: ArrayGeometry,
    text_len: usize,
    cells: Vec<Cell>,
}

/// Loads `text` row by row, replicating the first `p - 1` cells of every row
/// at the tail of the row above it. Cells past the end of the text, and the
/// replicated tail of the last row, hold [`Cell::Mismatch`].
pub fn load_text(text: &DnaSequence, geometry: ArrayGeometry) -> Result<AcamArray> {
    geometry.validate()?;
    if text.len() > geometry.capacity() {
        return Err(Error::TextTooLong {
            len: text.len(),
            capacity: geometry.capacity(),
        });
    }
    let width = geometry.data_width;
    let stride = geometry.total_cols();
    let mut cells = vec![Cell::Mismatch; geometry.rows * stride];
    for (row, chunk) in text.symbols().chunks(width).enumerate() {
        for (col, &n) in chunk.iter().enumerate() {
            cells[row * stride + col] = encode_char(n);
        }
    }
    for row in 0..geometry.rows.saturating_sub(1) {
        for k in 0..geometry.pattern_len - 1 {
            cells[row * stride + width + k] = cells[(row + 1) * stride + k];
        }
    }
    Ok(AcamArray {
        geometry,
        text_len: text.len(),
        cells,
    })
}

/// Outcome of sweeping the window across a whole block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSearch {
    /// `rows_per_block x data_width`; entry `(r, i)` is the tag of row `r`
    /// at window `i`.
    pub tags: BitMatrix,
    pub cycles: u64,
}

impl AcamArray {
    pub fn geometry(&self) -> ArrayGeometry {
        self.geometry
    }

    pub fn text_len(&self) -> usize {
        self.text_len
    }

    pub fn cell(&self, row: usize, col: usize) -> Cell {
        self.row(row)[col]
    }

    pub fn row(&self, row: usize) -> &[Cell] {
        let stride = self.geometry.total_cols();
        &self.cells[row * stride..(row + 1) * stride]
    }

    /// Returns a copy with one cell reprogrammed. Used for fault injection.
    pub fn with_cell(mut self, row: usize, col: usize, cell: Cell) -> Self {
        let stride = self.geometry.total_cols();
        assert!(row < self.geometry.rows && col < stride);
        self.cells[row * stride + col] = cell;
        self
    }

    /// Blocks that hold at least one text character.
    pub fn occupied_blocks(&self) -> Vec<usize> {
        let per_block = self.geometry.rows_per_block() * self.geometry.data_width;
        (0..self.text_len.div_ceil(per_block)).collect()
    }

    fn check_pattern(&self, pattern: &Pattern) -> Result<()> {
        if pattern.len() != self.geometry.pattern_len {
            return Err(Error::PatternLengthMismatch {
                expected: self.geometry.pattern_len,
                actual: pattern.len(),
            });
        }
        Ok(())
    }

    /// Column drives for the window starting at `window` (0-based).
    pub fn drives(&self, window: usize, pattern: &Pattern) -> Result<Vec<SearchDrive>> {
        self.check_pattern(pattern)?;
        if window >= self.geometry.data_width {
            return Err(Error::WindowOutOfRange {
                window,
                width: self.geometry.data_width,
            });
        }
        let mut drives = vec![SearchDrive::DontCare; self.geometry.total_cols()];
        for (k, &c) in pattern.symbols().iter().enumerate() {
            drives[window + k] = SearchDrive::Search(c);
        }
        Ok(drives)
    }

    /// One search cycle on the selected block. Rows of other blocks are
    /// deactivated and contribute nothing.
    pub fn search_cycle(&self, block: usize, window: usize, pattern: &Pattern) -> Result<TagVector> {
        if block >= self.geometry.blocks {
            return Err(Error::BlockOutOfRange {
                block,
                blocks: self.geometry.blocks,
            });
        }
        let drives = self.drives(window, pattern)?;
        let tags = self
            .geometry
            .block_rows(block)
            .map(|row| {
                self.row(row)
                    .iter()
                    .zip(&drives)
                    .all(|(&cell, &drive)| cell_matches(cell, drive))
            })
            .collect();
        Ok(TagVector(tags))
    }

    /// Issues one search cycle per data column of the block.
    pub fn run_block_search(&self, block: usize, pattern: &Pattern) -> Result<BlockSearch> {
        let m = self.geometry.rows_per_block();
        let width = self.geometry.data_width;
        let mut tags = BitMatrix::zeros(m, width);
        let mut cycles = 0;
        for window in 0..width {
            let tv = self.search_cycle(block, window, pattern)?;
            cycles += 1;
            for (r, &bit) in tv.bits().iter().enumerate() {
                tags.set(r, window, bit);
            }
        }
        Ok(BlockSearch { tags, cycles })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Nucleotide::*;

    fn seq(s: &str) -> DnaSequence {
        s.parse().unwrap()
    }

    fn pat(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    fn geom(rows: usize, width: usize, p: usize, blocks: usize) -> ArrayGeometry {
        ArrayGeometry::new(rows, width, p, blocks).unwrap()
    }

    #[test]
    fn character_encoding_table() {
        let a = encode_char(A);
        assert_eq!(
            a.resistances(),
            Resistances {
                lower_kohm: 2500.0,
                upper_kohm: 186.32
            }
        );
        assert_eq!(
            (a.interval().lower.to_string(), a.interval().upper.to_string()),
            ("0.19".into(), "0.31".into())
        );
        let t = encode_char(T);
        assert_eq!(
            t.resistances(),
            Resistances {
                lower_kohm: 8.9,
                upper_kohm: 5.06
            }
        );
        assert_eq!(t.interval(), MatchInterval::cv(63, 79));
        assert_eq!(encode_char(G).interval(), MatchInterval::cv(46, 59));
        assert_eq!(encode_char(C).interval(), MatchInterval::cv(32, 44));
    }

    #[test]
    fn character_intervals_sit_inside_the_supply() {
        for n in Nucleotide::ALL {
            let iv = encode_char(n).interval();
            assert!(Voltage::ZERO < iv.lower && iv.lower < iv.upper && iv.upper < Voltage::VDD);
        }
        assert!(Cell::Mismatch.interval().is_inverted());
    }

    #[test]
    fn mismatch_cell_borrows_neighbouring_resistances() {
        let mm = Cell::Mismatch.resistances();
        assert_eq!(mm.lower_kohm, encode_char(T).resistances().upper_kohm);
        assert_eq!(mm.upper_kohm, encode_char(A).resistances().lower_kohm);
        assert_eq!(Cell::Mismatch.interval(), MatchInterval::cv(79, 19));
    }

    #[test]
    fn search_drives() {
        let c = drive_for(Some(C));
        assert_eq!(
            (c.ldl().to_string(), c.udl().to_string()),
            ("0.38".into(), "0.38".into())
        );
        let x = drive_for(None);
        assert_eq!((x.ldl(), x.udl()), (Voltage::VDD, Voltage::ZERO));
        assert_eq!(drive_for(Some(T)).ldl(), Voltage(71));
        assert_eq!(drive_for(Some(A)).ldl(), Voltage(25));
        assert_eq!(drive_for(Some(G)).udl(), Voltage(53));
    }

    #[test]
    fn cell_match_cases() {
        assert!(cell_matches(encode_char(C), SearchDrive::Search(C)));
        assert!(!cell_matches(encode_char(A), SearchDrive::Search(G)));
        assert!(!cell_matches(Cell::Mismatch, SearchDrive::Search(A)));
        assert!(cell_matches(Cell::Mismatch, SearchDrive::DontCare));
    }

    #[test]
    fn mismatch_cell_rejects_every_character() {
        for n in Nucleotide::ALL {
            assert!(!cell_matches(Cell::Mismatch, SearchDrive::Search(n)));
        }
    }

    #[test]
    fn distinct_characters_never_match() {
        for stored in Nucleotide::ALL {
            assert!(cell_matches(encode_char(stored), SearchDrive::DontCare));
            for searched in Nucleotide::ALL {
                assert_eq!(
                    cell_matches(encode_char(stored), SearchDrive::Search(searched)),
                    stored == searched,
                    "stored {stored} searched {searched}"
                );
            }
        }
    }

    #[test]
    fn geometry_checks() {
        assert!(ArrayGeometry::new(10, 8, 3, 3).is_err());
        assert!(matches!(
            ArrayGeometry::new(8, 4, 5, 2),
            Err(Error::PatternTooLong { .. })
        ));
        assert!(ArrayGeometry::new(0, 8, 3, 1).is_err());
        let g = ArrayGeometry::default();
        assert_eq!(g.total_cols(), 130);
        assert_eq!(g.rows_per_block(), 64);
    }

    #[test]
    fn load_small_text_with_replication() {
        let arr = load_text(&seq("CAGCA"), geom(2, 4, 3, 1)).unwrap();
        let mm = Cell::Mismatch;
        let ch = Cell::Char;
        assert_eq!(arr.row(0), &[ch(C), ch(A), ch(G), ch(C), ch(A), mm]);
        assert_eq!(arr.row(1), &[ch(A), mm, mm, mm, mm, mm]);
    }

    #[test]
    fn full_text_fills_last_row() {
        let text = seq("ACGTTGCAACGTTGCA");
        let arr = load_text(&text, geom(4, 4, 2, 2)).unwrap();
        for col in 0..4 {
            assert_ne!(arr.cell(3, col), Cell::Mismatch);
        }
        assert_eq!(arr.cell(3, 4), Cell::Mismatch);
        assert_eq!(arr.cell(0, 4), Cell::Char(T));
    }

    #[test]
    fn load_errors() {
        let err = load_text(&seq("ACGTA"), geom(1, 4, 2, 1)).unwrap_err();
        assert_eq!(err, Error::TextTooLong { len: 5, capacity: 4 });
        let g = ArrayGeometry {
            rows: 1,
            data_width: 2,
            pattern_len: 3,
            blocks: 1,
        };
        assert!(matches!(load_text(&seq("AC"), g), Err(Error::PatternTooLong { .. })));
    }

    #[test]
    fn row_tag_follows_window_content() {
        let arr = load_text(&seq("CAGTCATT"), geom(2, 4, 3, 1)).unwrap();
        let tags = arr.search_cycle(0, 0, &pat("CAG")).unwrap();
        assert_eq!(tags.bits(), &[true, false]);
        let tags = arr.search_cycle(0, 0, &pat("CAT")).unwrap();
        assert_eq!(tags.bits(), &[false, true]);
    }

    #[test]
    fn single_character_pattern() {
        let arr = load_text(&seq("ACCA"), geom(1, 4, 1, 1)).unwrap();
        assert_eq!(arr.geometry().total_cols(), 4);
        assert_eq!(arr.search_cycle(0, 0, &pat("A")).unwrap().bits(), &[true]);
        let sweep = arr.run_block_search(0, &pat("A")).unwrap();
        assert_eq!(sweep.tags.row(0), &[true, false, false, true]);
    }

    #[test]
    fn window_over_padding_never_matches() {
        let arr = load_text(&seq("AAAAA"), geom(2, 4, 3, 1)).unwrap();
        let sweep = arr.run_block_search(0, &pat("AAA")).unwrap();
        assert_eq!(sweep.tags.row(0), &[true, true, true, false]);
        assert_eq!(sweep.tags.row(1), &[false; 4]);
    }

    #[test]
    fn search_errors() {
        let arr = load_text(&seq("CAGCAG"), geom(2, 4, 3, 2)).unwrap();
        assert_eq!(
            arr.search_cycle(0, 4, &pat("CAG")),
            Err(Error::WindowOutOfRange { window: 4, width: 4 })
        );
        assert_eq!(
            arr.search_cycle(2, 0, &pat("CAG")),
            Err(Error::BlockOutOfRange { block: 2, blocks: 2 })
        );
        assert_eq!(
            arr.search_cycle(0, 0, &pat("CA")),
            Err(Error::PatternLengthMismatch { expected: 3, actual: 2 })
        );
    }

    #[test]
    fn block_sweep_marks_occurrences() {
        let arr = load_text(&seq("CAGCAGTTACGTACGT"), geom(2, 8, 3, 2)).unwrap();
        let sweep = arr.run_block_search(0, &pat("CAG")).unwrap();
        assert_eq!(sweep.cycles, 8);
        assert_eq!(sweep.tags.rows(), 1);
        assert_eq!(
            sweep.tags.row(0),
            &[true, false, false, true, false, false, false, false]
        );
        // the second block holds no CAG
        let sweep = arr.run_block_search(1, &pat("CAG")).unwrap();
        assert_eq!(sweep.tags.count_ones(), 0);
    }

    #[test]
    fn all_padding_block_is_empty() {
        let arr = load_text(&seq("CAG"), geom(4, 4, 3, 2)).unwrap();
        for p in ["CAG", "AAA", "TTT"] {
            assert_eq!(arr.run_block_search(1, &pat(p)).unwrap().tags.count_ones(), 0);
        }
    }

    #[test]
    fn occurrence_straddling_rows_uses_replicas() {
        // row 0 ends "..CA", row 1 starts "G.."
        let arr = load_text(&seq("TTCAGTTT"), geom(2, 4, 3, 1)).unwrap();
        let sweep = arr.run_block_search(0, &pat("CAG")).unwrap();
        assert_eq!(sweep.tags.row(0), &[false, false, true, false]);
        assert!(arr.search_cycle(0, 2, &pat("CAG")).unwrap().bits()[0]);
    }

    #[test]
    fn occupied_blocks() {
        let arr = load_text(&seq("ACGTACGTA"), geom(8, 2, 2, 4)).unwrap();
        assert_eq!(arr.occupied_blocks(), vec![0, 1, 2]);
    }

    fn geometry_and_text() -> impl Strategy<Value = (ArrayGeometry, String, String)> {
        (1usize..5, 1usize..5, 2usize..10, 1usize..5).prop_flat_map(|(blocks, per_block, width, p)| {
            let p = p.min(width);
            let rows = blocks * per_block;
            let g = ArrayGeometry {
                rows,
                data_width: width,
                pattern_len: p,
                blocks,
            };
            let cap = rows * width;
            (
                Just(g),
                proptest::string::string_regex(&format!("[AC]{{1,{cap}}}")).unwrap(),
                proptest::string::string_regex(&format!("[AC]{{{p}}}")).unwrap(),
            )
        })
    }

    proptest! {
        #[test]
        fn tags_equal_direct_substring_comparison((g, text, pattern) in geometry_and_text()) {
            let arr = load_text(&seq(&text), g).unwrap();
            let pattern = pat(&pattern);
            let bytes = text.as_bytes();
            let needle = pattern.to_string();
            for block in 0..g.blocks {
                let sweep = arr.run_block_search(block, &pattern).unwrap();
                for (r, row) in g.block_rows(block).enumerate() {
                    for i in 0..g.data_width {
                        let pos = row * g.data_width + i;
                        let expected = pos + g.pattern_len <= bytes.len()
                            && &bytes[pos..pos + g.pattern_len] == needle.as_bytes();
                        prop_assert_eq!(sweep.tags.get(r, i), expected, "row {} window {}", row, i);
                    }
                }
            }
        }

        #[test]
        fn dont_care_columns_are_inert(
            (g, text, pattern) in geometry_and_text(),
            window in 0usize..10,
            row_pick in 0usize..100,
            col_pick in 0usize..100,
            replacement in 0usize..5,
        ) {
            let arr = load_text(&seq(&text), g).unwrap();
            let pattern = pat(&pattern);
            let window = window % g.data_width;
            let row = row_pick % g.rows;
            let drives = arr.drives(window, &pattern).unwrap();
            let free: Vec<usize> = (0..g.total_cols()).filter(|&c| drives[c] == SearchDrive::DontCare).collect();
            prop_assume!(!free.is_empty());
            let col = free[col_pick % free.len()];
            let cell = if replacement == 4 { Cell::Mismatch } else { Cell::Char(Nucleotide::ALL[replacement]) };
            let block = row / g.rows_per_block();
            let before = arr.search_cycle(block, window, &pattern).unwrap();
            let after = arr.clone().with_cell(row, col, cell).search_cycle(block, window, &pattern).unwrap();
            prop_assert_eq!(before, after);
        }
    }
}
