//! One pass/fail line per acceptance criterion.
//!
//! Run with `cargo test -p ccode --test acceptance -- --nocapture` to see
//! the report.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use ccode::{parse_code_file, report};
use ccode_core::code::{build_ccode, family_code, quasi2_code};
use ccode_core::factorization::{induce_bipyramidal, induce_quasi_bipyramidal};
use ccode_core::matrix::{build_parity_check, verify_def2, verify_parity_check};
use ccode_core::search::{enumerate_even_starters, induces_perfect};
use ccode_core::starters::{family_a, family_quasi2_with};
use ccode_core::{
    ArrayCode, BitMatrix, Codec, ErasurePattern, EvenStarter, Family, MultiStarter, Pair,
    PrimeField,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn fixture(name: &str) -> ArrayCode {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_code_file(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn set(pairs: &[(usize, usize)]) -> BTreeSet<Pair> {
    pairs.iter().map(|&p| Pair::from(p)).collect()
}

fn set_of(pairs: &[Pair]) -> BTreeSet<Pair> {
    pairs.iter().copied().collect()
}

fn both_oracles(code: &ArrayCode) -> bool {
    let graph = code.verify_condition1();
    let matrix =
        verify_parity_check(&build_parity_check(code), code.length(), code.kappa()).unwrap();
    graph && matrix
}

type Check = Box<dyn FnOnce() -> Result<String, String>>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn published_starters() -> Result<String, String> {
    let lengths = [4, 6, 10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30, 32, 34, 36];
    for len in lengths {
        let code = fixture(&format!("starter_len{len:02}.ccode"));
        let s = code.starter().map_err(|e| format!("length {len}: {e}"))?;
        ensure(
            induce_bipyramidal(&s).is_perfect(),
            format!("length {len}: not perfect"),
        )?;
        ensure(
            code.verify_condition1(),
            format!("length {len}: graph oracle"),
        )?;
        ensure(
            verify_def2(&build_parity_check(&code), len).unwrap(),
            format!("length {len}: matrix oracle"),
        )?;
    }
    for name in ["alt_len34.ccode", "sporadic_len50.ccode"] {
        let code = fixture(name);
        ensure(
            induce_bipyramidal(&code.starter().unwrap()).is_perfect(),
            format!("{name}: not perfect"),
        )?;
        ensure(both_oracles(&code), format!("{name}: oracle failure"))?;
    }
    Ok(format!(
        "{} listed starters plus 2 sporadic ones",
        lengths.len()
    ))
}

fn length_eight() -> Result<String, String> {
    let r = report::count_ccodes(8).map_err(|e| e.to_string())?;
    let listed = enumerate_even_starters(8).unwrap().count() as u64;
    ensure(
        r.starters_examined == listed && listed > 0,
        "did not examine every starter",
    )?;
    ensure(r.codes_found == 0, format!("found {} codes", r.codes_found))?;
    ensure(
        report::find_first_ccode(8).unwrap().is_none(),
        "first-hit search found a code",
    )?;
    Ok(format!("{listed} even starters, 0 codes"))
}

fn code_counts() -> Result<String, String> {
    let expected = [
        (4, 2),
        (6, 4),
        (8, 0),
        (10, 16),
        (12, 24),
        (14, 12),
        (16, 80),
    ];
    let mut got = Vec::new();
    for (len, want) in expected {
        let r = report::count_ccodes(len).map_err(|e| e.to_string())?;
        got.push(r.codes_found);
        ensure(
            r.codes_found == want,
            format!(
                "length {len}: {} codes, expected {want} (counting distinct starters)",
                r.codes_found
            ),
        )?;
    }
    Ok(format!("counts {got:?} for lengths 4..=16"))
}

fn family_p7() -> Result<String, String> {
    let field = PrimeField::new(7).unwrap();
    ensure(field.generator() == 3, "generator of Z_7^* is not 3")?;
    ensure(
        set_of(family_a(7).unwrap().pairs()) == set(&[(2, 6), (3, 5)]),
        "family A starter",
    )?;
    let cases = [
        (Family::A, [(2, 3), (1, 5)]),
        (Family::ATwin, [(4, 5), (3, 1)]),
        (Family::B, [(1, 5), (4, 3)]),
        (Family::BTwin, [(5, 3), (2, 1)]),
    ];
    for (family, want) in cases {
        let code = family_code(7, family).unwrap();
        ensure(
            set_of(&code.base_columns()[0]) == set(&want),
            format!("{family:?}"),
        )?;
    }
    Ok("family A, B and both twins at p = 7".into())
}

fn family_sweep() -> Result<String, String> {
    let primes = [5, 7, 11, 13, 17, 19, 23, 29, 31];
    for p in primes {
        for family in [Family::A, Family::ATwin, Family::B, Family::BTwin] {
            let code = family_code(p, family).map_err(|e| format!("p = {p}, {family:?}: {e}"))?;
            ensure(
                both_oracles(&code),
                format!("p = {p}, {family:?}: oracle failure"),
            )?;
        }
        for twin in [false, true] {
            let code =
                quasi2_code(p, twin).map_err(|e| format!("p = {p}, quasi twin={twin}: {e}"))?;
            ensure(
                code.kappa() == 2 && code.length() == 2 * (p - 1),
                "quasi shape",
            )?;
            ensure(
                both_oracles(&code),
                format!("p = {p}, quasi twin={twin}: oracle failure"),
            )?;
        }
    }
    Ok(format!("6 codes for each of {} primes", primes.len()))
}

fn quasi_examples() -> Result<String, String> {
    let table: [[(usize, usize); 3]; 8] = [
        [(1, 2), (3, 5), (4, 6)],
        [(0, 3), (2, 7), (4, 5)],
        [(3, 4), (5, 7), (6, 0)],
        [(2, 5), (4, 1), (6, 7)],
        [(5, 6), (7, 1), (0, 2)],
        [(4, 7), (6, 3), (0, 1)],
        [(7, 0), (1, 3), (2, 4)],
        [(6, 1), (0, 5), (2, 3)],
    ];
    let twin_table: [[(usize, usize); 3]; 8] = [
        [(2, 5), (4, 1), (6, 7)],
        [(3, 4), (5, 7), (6, 0)],
        [(4, 7), (6, 3), (0, 1)],
        [(5, 6), (7, 1), (0, 2)],
        [(6, 1), (0, 5), (2, 3)],
        [(7, 0), (1, 3), (2, 4)],
        [(0, 3), (2, 7), (4, 5)],
        [(1, 2), (3, 5), (4, 6)],
    ];
    let code = fixture("quasi_len08_k2.ccode");
    for (code, table, label) in [
        (code.clone(), table, "code"),
        (code.twin().unwrap(), twin_table, "twin"),
    ] {
        for (i, col) in code.expand_columns().iter().enumerate() {
            ensure(set_of(col) == set(&table[i]), format!("{label} column {i}"))?;
        }
    }
    ensure(
        induce_quasi_bipyramidal(&code.multi_starter().unwrap())
            .unwrap()
            .is_perfect(),
        "not perfect",
    )?;

    let field = PrimeField::with_generator(5, 2).unwrap();
    let q = family_quasi2_with(&field).unwrap();
    ensure(
        set_of(&q.parts()[0]) == set(&[(2, 1), (6, 3), (4, 7)]),
        "p = 5 S_0",
    )?;
    ensure(
        set_of(&q.parts()[1]) == set(&[(2, 4), (3, 5), (6, 7)]),
        "p = 5 S_1",
    )?;
    let t = q.twin().unwrap();
    ensure(
        set_of(&t.parts()[1]) == set(&[(3, 0), (7, 2), (5, 6)]),
        "p = 5 twin S'_1",
    )?;
    Ok("length-8 2-quasi code, its twin, and p = 5 family".into())
}

fn oracle_equivalence() -> Result<String, String> {
    let mut checked = 0;
    for len in (4..=12).step_by(2) {
        for s in enumerate_even_starters(len).unwrap() {
            let candidate = ArrayCode::new(len, 1, vec![s.pairs().to_vec()]).unwrap();
            let graph = candidate.verify_condition1();
            let matrix = verify_def2(&build_parity_check(&candidate), len).unwrap();
            let built = build_ccode(&s).is_ok();
            ensure(
                graph == matrix,
                format!("{s}: graph {graph}, matrix {matrix}"),
            )?;
            ensure(graph == built, format!("{s}: construction disagrees"))?;
            ensure(
                graph == induces_perfect(&s),
                format!("{s}: perfection disagrees"),
            )?;
            checked += 1;
        }
    }
    Ok(format!("{checked} even starters of lengths 4..=12"))
}

fn codec_round_trip() -> Result<String, String> {
    let names = [
        "starter_len04.ccode",
        "starter_len06.ccode",
        "quasi_len08_k2.ccode",
        "starter_len10.ccode",
        "starter_len12.ccode",
        "starter_len14.ccode",
        "starter_len16.ccode",
    ];
    let mut rng = StdRng::seed_from_u64(0xC0DE);
    let mut decodes = 0u64;
    for name in names {
        let code = fixture(name);
        let m = code.length();
        let codec = Codec::new(&code);
        let mut patterns: Vec<Vec<usize>> = vec![vec![]];
        patterns.extend((0..m).map(|a| vec![a]));
        patterns.extend((0..m).flat_map(|a| (a + 1..m).map(move |b| vec![a, b])));
        for _ in 0..50 {
            let mut info = vec![0u8; codec.info_capacity(64)];
            rng.fill(&mut info[..]);
            let stripe = codec.encode(&info, 64).unwrap();
            for cols in &patterns {
                let mut damaged = stripe.clone();
                for &c in cols {
                    damaged.erase_column(c);
                }
                codec
                    .decode(&mut damaged, &ErasurePattern::new(cols, m).unwrap())
                    .map_err(|e| format!("{name} {cols:?}: {e}"))?;
                ensure(damaged == stripe, format!("{name} {cols:?}: wrong data"))?;
                decodes += 1;
            }
        }
    }
    Ok(format!("{decodes} decodes over {} codes", names.len()))
}

fn structural() -> Result<String, String> {
    let pool: Vec<EvenStarter> = (4..=16)
        .step_by(2)
        .flat_map(|m| enumerate_even_starters(m).unwrap())
        .collect();
    let mut rng = StdRng::seed_from_u64(1000);
    for _ in 0..1000 {
        let s = &pool[rng.gen_range(0..pool.len())];
        let t = s.twin();
        ensure(&t.twin() == s, format!("{s}: twin is not an involution"))?;
        ensure(
            induce_bipyramidal(s).swap_apexes().unwrap() == induce_bipyramidal(&t),
            format!("{s}: twin factorization differs"),
        )?;
    }
    let ms = fixture("quasi_len08_k2.ccode").multi_starter().unwrap();
    let twin: MultiStarter = ms.twin().unwrap();
    ensure(
        induce_quasi_bipyramidal(&ms)
            .unwrap()
            .swap_apexes()
            .unwrap()
            == induce_quasi_bipyramidal(&twin).unwrap(),
        "quasi twin factorization differs",
    )?;

    for name in [
        "starter_len06.ccode",
        "quasi_len08_k2.ccode",
        "starter_len16.ccode",
    ] {
        let code = fixture(name);
        let codec = Codec::new(&code);
        let mut stripe = codec.encode(&vec![0; codec.info_capacity(1)], 1).unwrap();
        for col in 0..code.length() {
            for row in 0..code.rows() - 1 {
                let before = stripe.clone();
                codec
                    .update(&mut stripe, col, row, &[rng.gen_range(1..=255)])
                    .unwrap();
                let touched = (0..code.length())
                    .filter(|&x| before.parity(x) != stripe.parity(x))
                    .count();
                ensure(
                    touched == 2,
                    format!("{name} ({col},{row}): {touched} parities changed"),
                )?;
            }
        }
    }

    let h4 = build_parity_check(&fixture("starter_len04.ccode"));
    let printed = BitMatrix::from_rows(&[
        &[0, 1, 0, 0, 1, 0, 1, 0],
        &[1, 0, 0, 1, 0, 0, 1, 0],
        &[1, 0, 1, 0, 0, 1, 0, 0],
        &[0, 0, 1, 0, 1, 0, 0, 1],
    ])
    .unwrap();
    ensure(h4 == printed, format!("H_4 differs:\n{h4:?}"))?;
    Ok("twin involution x1000, twin factorizations, update cost 2, H_4".into())
}

fn main() {
    let criteria: Vec<(&str, Duration, Check)> = vec![
        (
            "published starters for lengths 4-36 and sporadic 34, 50",
            Duration::from_secs(10),
            Box::new(published_starters),
        ),
        (
            "no code of length 8",
            Duration::from_secs(1),
            Box::new(length_eight),
        ),
        (
            "exhaustive code counts",
            Duration::from_secs(60),
            Box::new(code_counts),
        ),
        (
            "multiplicative families at p = 7",
            Duration::from_secs(10),
            Box::new(family_p7),
        ),
        (
            "family validity sweep 5 <= p <= 31",
            Duration::from_secs(120),
            Box::new(family_sweep),
        ),
        (
            "quasi-cyclic examples",
            Duration::from_secs(10),
            Box::new(quasi_examples),
        ),
        (
            "graph and matrix oracles agree",
            Duration::from_secs(300),
            Box::new(oracle_equivalence),
        ),
        (
            "codec round trip",
            Duration::from_secs(180),
            Box::new(codec_round_trip),
        ),
        (
            "structural invariants",
            Duration::from_secs(60),
            Box::new(structural),
        ),
    ];
    let mut failures = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => {
                Err(format!("{detail}, but took longer than {limit:?}"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!(
                "criterion {} PASS {name}: {detail} ({:.2} s)",
                i + 1,
                elapsed.as_secs_f64()
            ),
            Err(why) => {
                failures += 1;
                println!(
                    "criterion {} FAIL {name}: {why} ({:.2} s)",
                    i + 1,
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
