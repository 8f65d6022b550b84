//! Reference answer computed straight from the text. Shares no code with the
//! array, memory or detector models.

use crate::seqio::{DnaSequence, Pattern};

/// Largest `k` such that the pattern occurs at `q, q + p, ..., q + (k-1)p`
/// for some start `q`.
pub fn oracle_max_tandem(text: &DnaSequence, pattern: &Pattern) -> u64 {
    let text = text.symbols();
    let pat = pattern.symbols();
    let p = pat.len();
    if p == 0 || p > text.len() {
        return 0;
    }
    let occurs_at = |q: usize| q + p <= text.len() && &text[q..q + p] == pat;
    let mut best = 0;
    for q in 0..=text.len() - p {
        let mut k = 0;
        while occurs_at(q + k * p) {
            k += 1;
        }
        best = best.max(k as u64);
    }
    best
}
