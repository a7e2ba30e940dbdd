//! End-to-end checks of the headline results, one line per criterion.
//! Runs without the libtest harness so the report is always printed.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use solenoid::presentation::abelianize;
use solenoid::qsub::{format_rational, parse_rational};
use solenoid::{
    alternating_witness, dyadic_form, h1_scaling, limit_member, piece_presentation, search_homs, tietze_reduce,
    truncate, verify_hom, BraidWord, Count, DefiningSequence, EmbeddingScheme, EventuallyPeriodic, FreeWord,
    GroupPresentation, HeightDescriptor, HomAssignment, Permutation, Symbol,
};

type Criterion<'a> = (&'static str, Duration, Box<dyn Fn() + 'a>);

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_solenoid"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn w(s: &str) -> FreeWord {
    s.parse().unwrap()
}

/// The relator of `lhs = rhs` as the presentation printer writes it.
fn rel(lhs: &str, rhs: &str) -> String {
    w(lhs).mul(&w(rhs).inverse()).cyclically_reduced().to_string()
}

fn rel_lines(text: &str) -> Vec<String> {
    text.lines().filter_map(|l| l.strip_prefix("rel: ")).map(str::to_string).collect()
}

fn write_scheme(dir: &Path, name: &str, args: &[&str]) -> String {
    let o = run(&[&["scheme"], args].concat());
    assert!(o.status.success(), "scheme {args:?} failed");
    let path = dir.join(name);
    std::fs::write(&path, &o.stdout).unwrap();
    path.to_str().unwrap().to_string()
}

fn c1_piece_relators() {
    for n in 2..=6u32 {
        let p = piece_presentation(&BraidWord::unknot(n as usize));
        let mut product: Vec<String> = (1..n).map(|k| format!("x1.{k}")).collect();
        product.push(format!("x1.{n}"));
        product.extend((1..n).rev().map(|k| format!("x1.{k}^-1")));
        let mut expected = vec![rel("t0^-1 x1.1 t0", &product.join(" "))];
        expected.extend((2..=n).map(|k| rel(&format!("t0^-1 x1.{k} t0"), &format!("x1.{}", k - 1))));
        let got: Vec<String> = p.relators().iter().map(ToString::to_string).collect();
        assert_eq!(got, expected, "b({n})");
    }
}

fn dyadic_expected(levels: usize, conj: impl Fn(usize) -> String, framing: impl Fn(usize) -> String) -> Vec<String> {
    let mut out = Vec::new();
    for i in 0..levels {
        out.push(w(&format!("s{i}^-1 z{i}^-1 s{i} z{i}")).to_string());
        out.push(rel(&format!("s{i}^-1 z{} s{i}", i + 1), &conj(i)));
        if i + 1 < levels {
            out.push(rel(&format!("s{}", i + 1), &framing(i)));
        }
    }
    out.push("s0".into());
    out
}

fn check_dyadic_cli(scheme: &str, conj: impl Fn(usize) -> String, framing: impl Fn(usize) -> String) {
    for l in 1..=4 {
        let o = run(&["present", scheme, "--level", &l.to_string(), "--dyadic-form"]);
        assert!(o.status.success());
        assert_eq!(rel_lines(&stdout(&o)), dyadic_expected(l, &conj, &framing), "L={l}");
    }
}

fn c2_dyadic_unknot(dir: &Path) {
    let scheme = write_scheme(dir, "scheme-unknotted", &["unknotted", "| 2"]);
    check_dyadic_cli(&scheme, |i| format!("z{}^-1 z{i}", i + 1), |i| format!("s{i}^2 z{i} z{}^-2", i + 1));
}

fn c3_dyadic_trefoil(dir: &Path) {
    let scheme = write_scheme(dir, "scheme-trefoil", &["trefoil"]);
    check_dyadic_cli(&scheme, |i| format!("z{i}^-1 z{}^-1 z{i}^2", i + 1), |i| format!("s{i}^2 z{i}^3 z{}^-6", i + 1));
}

fn seq(s: &str) -> DefiningSequence {
    s.parse().unwrap()
}

fn c4_first_homology() {
    let zeros = EventuallyPeriodic::constant(false);
    let ones = EventuallyPeriodic::constant(true);
    let mut schemes = vec![
        EmbeddingScheme::unknotted(&seq("| 2")),
        EmbeddingScheme::unknotted(&seq("| 3")),
        EmbeddingScheme::unknotted(&seq("2,4,6,8,5 | 3")),
        EmbeddingScheme::trefoil(),
    ];
    for s in ["| 3", "| 4"] {
        for c in [&zeros, &ones] {
            schemes.push(EmbeddingScheme::geometry(&seq(s), c).unwrap());
        }
    }
    for e in &schemes {
        for l in 1..=6 {
            let inv = abelianize(&truncate(e, l).unwrap()).invariants;
            assert!(inv.is_infinite_cyclic(), "{} at L={l}: {inv}", e.sequence);
            if l >= 2 {
                let c = h1_scaling(e, l).unwrap();
                assert_eq!(c, e.sequence.level(l).into(), "{} at L={l}", e.sequence);
            }
        }
    }
}

fn c5_unknotted_reduce_to_z() {
    for s in ["| 2", "| 3", "2,4,6,8,5 | 3"] {
        let e = EmbeddingScheme::unknotted(&seq(s));
        for l in 1..=8 {
            let r = tietze_reduce(&truncate(&e, l).unwrap());
            assert_eq!((r.generators().len(), r.relators().len()), (1, 0), "{s} at L={l}");
        }
    }
}

fn c6_alternating_witness() {
    let e = EmbeddingScheme::trefoil();
    for l in 1..=20 {
        let a = alternating_witness(l);
        assert!(verify_hom(&dyadic_form(&e, l).unwrap(), &a).unwrap(), "L={l}");
        if l >= 2 {
            let z1 = a.image(&Symbol::Z(1)).unwrap();
            let z2 = a.image(&Symbol::Z(2)).unwrap();
            assert!(!z1.commutes_with(z2), "L={l}");
        }
    }
}

fn c7_separation() {
    let trefoil = tietze_reduce(&truncate(&EmbeddingScheme::trefoil(), 1).unwrap());
    let r = search_homs(&trefoil, 3, 10_000_000);
    assert!(!r.budget_exhausted);
    assert!(!r.homs.is_empty(), "no non-Abelian hom for the trefoil");
    assert!(r.homs.iter().all(|a| verify_hom(&trefoil, a).unwrap() && a.is_non_abelian()));
    let e = EmbeddingScheme::unknotted(&seq("| 2"));
    for l in 1..=4 {
        let p = tietze_reduce(&truncate(&e, l).unwrap());
        let r = search_homs(&p, 3, 10_000_000);
        assert!(!r.budget_exhausted && r.homs.is_empty(), "unknotted L={l}");
    }
}

fn c8_height_example() {
    let s = seq("2,4,6,8,5 | 3");
    assert_eq!(HeightDescriptor::from_sequence(&s).get(2), Count::Finite(8));
    assert!(limit_member(&s, &parse_rational("1/128").unwrap()));
    assert!(!limit_member(&s, &parse_rational("1/256").unwrap()));
}

fn random_entry(rng: &mut ChaCha8Rng) -> u64 {
    let mut n = 1;
    for _ in 0..rng.gen_range(0..=3) {
        n *= PRIMES.choose(rng).unwrap();
    }
    n
}

fn random_sequence(rng: &mut ChaCha8Rng) -> DefiningSequence {
    let prefix = (0..rng.gen_range(0..=4)).map(|_| random_entry(rng)).collect();
    let cycle = (0..rng.gen_range(1..=3)).map(|_| random_entry(rng)).collect();
    DefiningSequence::new(prefix, cycle)
}

fn random_rational(rng: &mut ChaCha8Rng) -> String {
    let num: i64 = rng.gen_range(-1_000_000..=1_000_000);
    let den: u64 = if rng.gen_bool(0.5) {
        rng.gen_range(1..=1_000_000)
    } else {
        // smooth denominators, which are the interesting ones
        let mut d = 1u64;
        while let Some(&p) = PRIMES.choose(rng).filter(|_| rng.gen_bool(0.8)) {
            if d * p > 1_000_000 {
                break;
            }
            d *= p;
        }
        d
    };
    format!("{num}/{den}")
}

fn c9_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut members = 0;
    for _ in 0..10_000 {
        let s = random_sequence(&mut rng);
        let r = parse_rational(&random_rational(&mut rng)).unwrap();
        let direct = limit_member(&s, &r);
        assert_eq!(direct, HeightDescriptor::from_sequence(&s).contains(&r), "{s} {}", format_rational(&r));
        members += direct as usize;
    }
    // the pool must exercise both answers
    assert!(members > 1000 && members < 9000, "{members} members");
}

fn random_descriptor(rng: &mut ChaCha8Rng) -> HeightDescriptor {
    let mut entries = Vec::new();
    for &p in &PRIMES {
        if rng.gen_bool(0.5) {
            let k = if rng.gen_bool(0.25) { Count::Infinite } else { Count::Finite(rng.gen_range(1..=6)) };
            entries.push((p, k));
        }
    }
    HeightDescriptor::new(entries).unwrap()
}

fn round_trip<T>(value: &T)
where
    T: std::fmt::Display + std::str::FromStr + PartialEq + std::fmt::Debug,
    T::Err: std::fmt::Debug,
{
    let text = value.to_string();
    let back: T = text.parse().unwrap_or_else(|e| panic!("reparse of {text:?}: {e:?}"));
    assert_eq!(&back, value, "round trip of {text:?}");
}

fn c10_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..1000 {
        let h = random_descriptor(&mut rng);
        assert_eq!(HeightDescriptor::from_sequence(&h.to_sequence()), h, "{h}");
        round_trip(&h);
        round_trip(&random_sequence(&mut rng));
        let r = parse_rational(&random_rational(&mut rng)).unwrap();
        assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        let n = rng.gen_range(1..=6);
        let letters: Vec<i32> = if n == 1 {
            Vec::new()
        } else {
            (0..rng.gen_range(0..8)).map(|_| rng.gen_range(1..n as i32) * if rng.gen() { 1 } else { -1 }).collect()
        };
        round_trip(&BraidWord::new(n, letters).unwrap());
        let mut images: Vec<u32> = (1..=6).collect();
        images.shuffle(&mut rng);
        let p = Permutation::from_images(&images).unwrap();
        assert_eq!(Permutation::parse_cycles(6, &p.to_string()).unwrap(), p);
    }
    for e in [EmbeddingScheme::trefoil(), EmbeddingScheme::unknotted(&seq("2,4,6,8,5 | 3"))] {
        round_trip(&e);
        for l in 1..=3 {
            round_trip::<GroupPresentation>(&truncate(&e, l).unwrap());
        }
    }
    let geometry =
        EmbeddingScheme::geometry(&seq("3 | 4,5"), &EventuallyPeriodic::new(vec![true], vec![false, true])).unwrap();
    round_trip(&geometry);
    round_trip::<GroupPresentation>(&dyadic_form(&EmbeddingScheme::trefoil(), 4).unwrap());
    round_trip::<HomAssignment>(&alternating_witness(5));
}

/// A sequence homeomorphic to `s`: new prefix, rotated cycle, and entries
/// split into factors or merged with their neighbour.
fn rewrite(s: &DefiningSequence, rng: &mut ChaCha8Rng) -> DefiningSequence {
    let prefix: Vec<u64> = (0..rng.gen_range(0..=4)).map(|_| random_entry(rng)).collect();
    let mut cycle = s.cycle().to_vec();
    if rng.gen_bool(0.5) {
        cycle.extend(s.cycle().iter().copied());
    }
    let shift = rng.gen_range(0..cycle.len());
    cycle.rotate_left(shift);
    let mut out = Vec::new();
    for n in cycle {
        match rng.gen_range(0..3) {
            0 if n > 1 => out.extend(solenoid::sequence::prime_factors(n)),
            1 if !out.is_empty() => *out.last_mut().unwrap() *= n,
            _ => out.push(n),
        }
    }
    DefiningSequence::new(prefix, out)
}

fn c11_bing_mccord() {
    for (a, b, expected) in [("| 2,3", "| 6", true), ("| 2", "| 3", false), ("7 | 2", "| 2", true)] {
        let o = run(&["sol-equiv", a, b]);
        assert_eq!(o.status.code(), Some(if expected { 0 } else { 1 }), "{a} vs {b}");
        assert_eq!(stdout(&o).trim(), expected.to_string());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..1000 {
        let s = random_sequence(&mut rng);
        let t = random_sequence(&mut rng);
        let s2 = rewrite(&s, &mut rng);
        assert!(s.homeomorphic(&s2), "{s} vs {s2}");
        assert_eq!(s.homeomorphic(&t), s2.homeomorphic(&t), "{s} / {s2} vs {t}");
        if i % 50 == 0 {
            let o = run(&["sol-equiv", &s.to_string(), &s2.to_string()]);
            assert_eq!(o.status.code(), Some(0), "cli: {s} vs {s2}");
        }
    }
}

fn c12_table() {
    let o = run(&["table1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut volumes = Vec::new();
    let mut rows = BTreeMap::new();
    for line in text.lines() {
        let fields: Vec<&str> = line.split('\t').collect();
        assert_eq!(fields.len(), 3, "{line:?}");
        let b: BraidWord = fields[1].parse().unwrap();
        assert_eq!(b.closure_components(), 1, "{line}");
        rows.insert(fields[0].to_string(), b);
        volumes.push(fields[2].to_string());
    }
    assert_eq!(rows.len(), 7);
    assert_eq!(volumes, ["4.05", "5.97", "4.85", "7.51", "5.08", "5.90", "11.2"]);
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let criteria: Vec<Criterion> = vec![
        ("piece relators of b(n), n = 2..6", Duration::from_secs(1), Box::new(c1_piece_relators)),
        (
            "dyadic form of the unknotted dyadic scheme, L = 1..4",
            Duration::from_secs(1),
            Box::new(move || c2_dyadic_unknot(d)),
        ),
        ("dyadic form of the trefoil scheme, L = 1..4", Duration::from_secs(1), Box::new(move || c3_dyadic_trefoil(d))),
        ("H1 = Z and scaling n_L for built-in schemes, L <= 6", Duration::from_secs(10), Box::new(c4_first_homology)),
        ("unknotted truncations reduce to Z, L <= 8", Duration::from_secs(5), Box::new(c5_unknotted_reduce_to_z)),
        ("alternating witness, L = 1..20", Duration::from_secs(1), Box::new(c6_alternating_witness)),
        ("degree-3 separation of trefoil and unknotted", Duration::from_secs(30), Box::new(c7_separation)),
        ("height example k(2) = 8", Duration::from_secs(1), Box::new(c8_height_example)),
        ("limit membership agrees with heights, 10^4 pairs", Duration::from_secs(30), Box::new(c9_oracle_equivalence)),
        ("round trips of heights and text formats", Duration::from_secs(30), Box::new(c10_round_trips)),
        ("solenoid equivalence examples and rewrites", Duration::from_secs(30), Box::new(c11_bing_mccord)),
        ("reference braid table", Duration::from_secs(1), Box::new(c12_table)),
    ];
    // failures are reported in the summary lines
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check));
        let elapsed = start.elapsed();
        let verdict = match &result {
            Ok(()) if elapsed <= *limit => "PASS",
            _ => "FAIL",
        };
        let note = match result {
            Err(e) => e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default(),
            Ok(()) if elapsed > *limit => format!("over the {limit:?} limit"),
            Ok(()) => String::new(),
        };
        println!("{verdict} {:>2} {name} ({:.3}s) {note}", i + 1, elapsed.as_secs_f64());
        failed += (verdict == "FAIL") as usize;
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
