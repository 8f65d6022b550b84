//! Acceptance suite. Prints one `[PASS]`/`[FAIL]` line per criterion and
//! exits non-zero if any criterion fails.

use std::process::ExitCode;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dnacam::acam::{cell_matches, drive_for, encode_char, Cell, SearchDrive};
use dnacam::bits::BitMatrix;
use dnacam::cost::{latency, latency_from_cycles, CycleCounts, TimingParams};
use dnacam::detector::{render_csv, render_table, FsmState};
use dnacam::matchmem::CellState;
use dnacam::reference::reference_rows;
use dnacam::{
    builtin_catalog, detect_functional, find_disease, oracle_max_tandem, run_cycle_accurate, run_driven, scan,
    ArrayGeometry, Classification, DnaSequence, MatchIndexMemory, Mode, Nucleotide, Pattern, ScanRequest,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

const SEED: u64 = 0x5eed_0d7a;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(computed: f64, reference: f64, rel: f64) -> bool {
    ((computed - reference) / reference).abs() <= rel
}

fn row(key: &str) -> dnacam::reference::ReferenceRow {
    reference_rows()
        .into_iter()
        .find(|r| r.key == key)
        .expect("reference row")
}

fn ac1_timing() -> Outcome {
    let geometry = ArrayGeometry::default();
    let closed = latency(&TimingParams::new(&geometry, 8, 1.0));
    check(closed.t_load_ns == 8.0 * 512.0, format!("t_load {}", closed.t_load_ns))?;
    check(closed.dt12_ns == 128.5, format!("dt12 {}", closed.dt12_ns))?;
    check(
        closed.dt23_ns == 0.125 * (64.0 * 128.0 + 5.0),
        format!("dt23 {}", closed.dt23_ns),
    )?;
    check(closed.dt23_ns == 1024.625, format!("dt23 {}", closed.dt23_ns))?;
    check(closed.dt34_ns == 1.0, format!("dt34 {}", closed.dt34_ns))?;

    // fill every block of the default array and meter a real scan
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let text: DnaSequence = random_text(&mut rng, geometry.capacity(), &Nucleotide::ALL);
    let result = scan(&ScanRequest::new(text, "CAG".parse().unwrap())).map_err(|e| e.to_string())?;
    let metered = result.cost.cycles;
    let predicted = CycleCounts::predicted(&TimingParams::new(&geometry, 8, 1.0));
    check(
        metered.same_schedule(&predicted),
        format!("metered {metered:?} vs {predicted:?}"),
    )?;
    let from_meter = latency_from_cycles(&metered, 1.0, 1.0);
    check(from_meter == closed, format!("{from_meter:?} vs {closed:?}"))?;
    Ok(format!(
        "t_load={} ns dt12={} ns dt23={} ns dt34={} ns, metered scan of 8 blocks identical",
        closed.t_load_ns, closed.dt12_ns, closed.dt23_ns, closed.dt34_ns
    ))
}

fn ac2_per_block() -> Outcome {
    let r = row("per_block");
    check(
        r.computed == 128.5 + 1024.625 + 1.0,
        format!("per block {}", r.computed),
    )?;
    check(
        within(r.computed, 1150.0, 0.01),
        format!("{} ns vs 1150 ns", r.computed),
    )?;
    Ok(format!(
        "{:.3} ns vs 1150 ns ({:+.2}%, tol 1%)",
        r.computed,
        r.relative_error() * 100.0
    ))
}

fn ac3_totals() -> Outcome {
    let p3 = row("total_p3");
    let p5 = row("total_p5");
    let p10 = row("total_p10");
    // 1M chars at 65536 per array -> 16 arrays, 128 blocks
    let expected_p3 = 128.0 * (128.5 + 1024.625 + 1.0) / 1000.0;
    check(
        (p3.computed - expected_p3).abs() < 1e-9,
        format!("p=3 total {}", p3.computed),
    )?;
    check(
        within(p3.computed, 147.7, 0.005),
        format!("p=3 {} us vs 147.7", p3.computed),
    )?;
    check(
        within(p5.computed, 144.4, 0.05),
        format!("p=5 {} us vs 144.4", p5.computed),
    )?;
    check(
        within(p10.computed, 148.393, 0.05),
        format!("p=10 {} us vs 148.393", p10.computed),
    )?;
    Ok(format!(
        "p=3 {:.3} us vs 147.7 ({:+.2}%); p=5 {:.3} us vs 144.4 ({:+.2}%, discrepancy); p=10 {:.3} us vs 148.393 ({:+.2}%)",
        p3.computed,
        p3.relative_error() * 100.0,
        p5.computed,
        p5.relative_error() * 100.0,
        p10.computed,
        p10.relative_error() * 100.0
    ))
}

fn ac4_energy() -> Outcome {
    let e3 = row("energy_p3");
    let e10 = row("energy_p10");
    let pc = row("energy_per_char");
    let sum = 1.228 + 1.228 + 0.82 + 1.1769 + 0.7709;
    check(
        (e3.computed - sum).abs() < 1e-9,
        format!("p=3 energy {} vs sum {sum}", e3.computed),
    )?;
    check(within(e3.computed, 5.2, 0.01), format!("p=3 {} nJ", e3.computed))?;
    check(within(e10.computed, 4.9, 0.03), format!("p=10 {} nJ", e10.computed))?;
    check(
        (pc.computed - sum * 1000.0 / (64.0 * 128.0)).abs() < 1e-9,
        "per-char divisor",
    )?;
    check(within(pc.computed, 0.61, 0.10), format!("per char {} pJ", pc.computed))?;
    Ok(format!(
        "p=3 {:.4} nJ vs 5.2 ({:+.2}%); p=10 {:.4} nJ vs 4.9 ({:+.2}%); per char {:.4} pJ vs 0.61 ({:+.2}%, total / (m*n))",
        e3.computed,
        e3.relative_error() * 100.0,
        e10.computed,
        e10.relative_error() * 100.0,
        pc.computed,
        pc.relative_error() * 100.0
    ))
}

fn ac5_golden() -> Outcome {
    let x = [1, 0, 1, 1, 1, 0, 0, 0, 0];
    let inputs: Vec<(bool, bool)> = x.iter().enumerate().map(|(i, &b)| (b == 1, i == 8)).collect();
    let run = run_driven(&inputs).map_err(|e| e.to_string())?;
    let states: Vec<String> = run.trace.iter().map(|r| r.to.to_string()).collect();
    let expected = ["S2", "S3", "S6", "S2", "S4", "S5", "S1", "S3", "Exit"];
    check(states == expected, format!("states {states:?}"))?;
    check(run.trace[0].from == FsmState::Initial, "first state")?;
    check(run.global_max == 2, format!("global max {}", run.global_max))?;
    check(
        render_csv(&run.trace) == include_str!("golden/table_v.csv"),
        "csv differs from golden/table_v.csv",
    )?;
    check(
        render_table(&run.trace) == include_str!("golden/table_v.txt"),
        "table differs from golden/table_v.txt",
    )?;
    Ok("nine transitions, Global max = 2, csv and table byte-exact".into())
}

fn random_text(rng: &mut ChaCha8Rng, len: usize, alphabet: &[Nucleotide]) -> DnaSequence {
    DnaSequence::new((0..len).map(|_| *alphabet.choose(rng).unwrap()).collect()).unwrap()
}

fn random_pattern(rng: &mut ChaCha8Rng, p: usize, alphabet: &[Nucleotide]) -> Pattern {
    Pattern::new((0..p).map(|_| *alphabet.choose(rng).unwrap()).collect()).unwrap()
}

fn random_geometry(rng: &mut ChaCha8Rng, p: usize) -> ArrayGeometry {
    let rows = rng.gen_range(4..=64);
    let divisors: Vec<usize> = (1..=rows).filter(|b| rows % b == 0 && *b <= 16).collect();
    let blocks = *divisors.choose(rng).unwrap();
    let width = rng.gen_range(8..=64);
    ArrayGeometry::new(rows, width, p, blocks).unwrap()
}

/// Text with `k` back-to-back copies of `pattern` starting at `start`.
fn with_run(mut symbols: Vec<Nucleotide>, pattern: &Pattern, start: usize, k: usize) -> DnaSequence {
    for i in 0..k {
        let at = start + i * pattern.len();
        symbols[at..at + pattern.len()].copy_from_slice(pattern.symbols());
    }
    DnaSequence::new(symbols).unwrap()
}

fn expected_max(text: &DnaSequence, pattern: &Pattern) -> u32 {
    oracle_max_tandem(text, pattern).min(255) as u32
}

fn ac6_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let alphabets: [&[Nucleotide]; 3] = [
        &Nucleotide::ALL,
        &[Nucleotide::C, Nucleotide::A, Nucleotide::G],
        &[Nucleotide::A, Nucleotide::T],
    ];
    let mut random = 0;
    let mut crafted = 0;
    let mut failures = Vec::new();

    for _ in 0..1000 {
        let p = rng.gen_range(1..=4);
        let geometry = random_geometry(&mut rng, p);
        let alphabet = alphabets[rng.gen_range(0..alphabets.len())];
        let len = rng.gen_range(p..=geometry.capacity().min(4096));
        let pattern = random_pattern(&mut rng, p, alphabet);
        let mut text = random_text(&mut rng, len, alphabet);
        if rng.gen_bool(0.5) {
            let k = rng.gen_range(1..=(len / p).min(200));
            let start = rng.gen_range(0..=len - k * p);
            text = with_run(text.symbols().to_vec(), &pattern, start, k);
        }
        let got = scan(&ScanRequest::new(text.clone(), pattern.clone()).with_geometry(geometry));
        let want = expected_max(&text, &pattern);
        match got {
            Ok(r) if r.global_max == want => {}
            other => failures.push(format!("{geometry:?} {pattern} len {len}: {other:?} want {want}")),
        }
        random += 1;
    }

    // runs crossing a row edge, and runs crossing a block edge
    while crafted < 120 {
        let p = rng.gen_range(1..=4);
        let geometry = random_geometry(&mut rng, p);
        let w = geometry.data_width;
        let block_chars = geometry.rows_per_block() * w;
        let cross_block = crafted % 2 == 1;
        if cross_block && geometry.blocks < 2 {
            continue;
        }
        let len = geometry.capacity().min(4096);
        let edge = if cross_block {
            block_chars * rng.gen_range(1..geometry.blocks)
        } else {
            w * rng.gen_range(1..geometry.rows)
        };
        let k = rng.gen_range(2..=12);
        let before = rng.gen_range(1..k);
        let shift = rng.gen_range(0..p);
        if edge < before * p || edge - before * p + shift + k * p > len {
            continue;
        }
        let start = edge - before * p + shift;
        let pattern = random_pattern(&mut rng, p, &Nucleotide::ALL);
        let text = with_run(
            random_text(&mut rng, len, &Nucleotide::ALL).symbols().to_vec(),
            &pattern,
            start,
            k,
        );
        assert!(start < edge && start + k * p > edge);
        let want = expected_max(&text, &pattern);
        if want < k as u32 {
            failures.push(format!("crafted run of {k} not seen by the oracle"));
        }
        match scan(&ScanRequest::new(text, pattern.clone()).with_geometry(geometry)) {
            Ok(r) if r.global_max == want => {}
            other => failures.push(format!(
                "crafted {geometry:?} {pattern} edge {edge}: {other:?} want {want}"
            )),
        }
        crafted += 1;
    }

    if failures.is_empty() {
        Ok(format!(
            "{random} random + {crafted} row/block-straddling instances agree with the oracle"
        ))
    } else {
        Err(format!("{} mismatches, first: {}", failures.len(), failures[0]))
    }
}

fn ac7_encoding() -> Outcome {
    for c in Nucleotide::ALL {
        for d in Nucleotide::ALL {
            let got = cell_matches(encode_char(c), drive_for(Some(d)));
            check(got == (c == d), format!("cell {c} drive {d}: {got}"))?;
        }
        check(
            cell_matches(encode_char(c), SearchDrive::DontCare),
            format!("{c} vs don't care"),
        )?;
        check(!cell_matches(Cell::Mismatch, drive_for(Some(c))), format!("MM vs {c}"))?;
    }
    check(cell_matches(Cell::Mismatch, SearchDrive::DontCare), "MM vs don't care")?;
    Ok("4x4 match matrix is the identity; MM mismatches A/C/G/T and matches don't care".into())
}

fn ac8_memory() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    for trial in 0..200 {
        let (m, n) = (rng.gen_range(1..=64), rng.gen_range(1..=64));
        let density = rng.gen_range(0.0..=1.0);
        let rows: Vec<Vec<bool>> = (0..m)
            .map(|_| (0..n).map(|_| rng.gen_bool(density)).collect())
            .collect();
        let matrix = BitMatrix::from_rows(&rows);
        let flat: Vec<bool> = rows.concat();
        let mut mem = MatchIndexMemory::new(m, n);
        let run = |mem: &mut MatchIndexMemory| -> dnacam::Result<Vec<bool>> {
            mem.write_matrix(&matrix)?;
            mem.set_mode(Mode::Read)?;
            let bits = mem.read_all()?.into_bits();
            mem.set_mode(Mode::Reset)?;
            mem.reset_all()?;
            mem.set_mode(Mode::Idle)?;
            Ok(bits)
        };
        let bits = run(&mut mem).map_err(|e| format!("trial {trial}: {e}"))?;
        check(bits == flat, format!("trial {trial}: {m}x{n} read differs"))?;
        let all_hrs = (0..m).all(|r| (0..n).all(|c| mem.cell(r, c) == CellState::Hrs));
        check(all_hrs, format!("trial {trial}: cells left in LRS after reset"))?;
    }
    Ok("200 random matrices up to 64x64 round-trip; reset leaves all HRS".into())
}

fn ac9_fsm() -> Outcome {
    let mut streams = 0u64;
    for len in 0..=16 {
        for v in 0u32..(1 << len) {
            let bits: Vec<bool> = (0..len).map(|i| v >> (len - 1 - i) & 1 == 1).collect();
            let fsm = run_cycle_accurate(&bits);
            let functional = detect_functional(&bits, 3);
            check(fsm.exited, format!("{bits:?} did not exit"))?;
            check(
                fsm.global_max == functional,
                format!("{bits:?}: fsm {} vs {functional}", fsm.global_max),
            )?;
            streams += 1;
        }
    }
    Ok(format!("{streams} streams of length 0..=16 agree"))
}

fn ac10_catalog() -> Outcome {
    let catalog = builtin_catalog();
    check(catalog.len() == 10, format!("{} rows", catalog.len()))?;
    let htt = find_disease(&catalog, "Huntington's disease").map_err(|e| e.to_string())?;
    check(htt.gene == "HTT" && htt.pattern.to_string() == "CAG", "HTT row")?;
    for (count, want) in [
        (45, Classification::Disease),
        (20, Classification::Normal),
        (30, Classification::Indeterminate),
    ] {
        let got = htt.classify(count);
        check(got == want, format!("HTT {count}: {got} want {want}"))?;
    }
    Ok("10 rows; HTT 45 -> disease, 20 -> normal, 30 -> indeterminate".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1", "timing reproduction", ac1_timing),
        ("AC2", "per-block latency", ac2_per_block),
        ("AC3", "1M-character totals", ac3_totals),
        ("AC4", "energy", ac4_energy),
        ("AC5", "detector golden trace", ac5_golden),
        ("AC6", "oracle equivalence", ac6_oracle),
        ("AC7", "encoding separation", ac7_encoding),
        ("AC8", "memory round trip", ac8_memory),
        ("AC9", "FSM/functional agreement", ac9_fsm),
        ("AC10", "disease classification", ac10_catalog),
    ];
    let mut failed = 0;
    for (id, name, f) in criteria {
        match f() {
            Ok(detail) => println!("[PASS] {id} {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {id} {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
