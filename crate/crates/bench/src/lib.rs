//! Seeded workloads shared by the benchmarks.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dnacam::{DnaSequence, Nucleotide, Pattern};

/// Uniform random text with `repeats` copies of `pattern` in the middle.
pub fn workload(len: usize, pattern: &Pattern, repeats: usize, seed: u64) -> DnaSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut symbols: Vec<Nucleotide> = (0..len).map(|_| *Nucleotide::ALL.choose(&mut rng).unwrap()).collect();
    let run = repeats * pattern.len();
    assert!(run <= len, "repeat run longer than the text");
    let start = (len - run) / 2;
    for (i, slot) in symbols[start..start + run].iter_mut().enumerate() {
        *slot = pattern.symbols()[i % pattern.len()];
    }
    DnaSequence::new(symbols).unwrap()
}

/// Random detector input with roughly `density` ones.
pub fn bit_stream(len: usize, density: f64, seed: u64) -> Vec<bool> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_bool(density)).collect()
}
