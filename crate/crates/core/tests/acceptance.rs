//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use delpezzo::enumerate::{enumerate_null_classes, exceptional_type_census};
use delpezzo::positivity::{
    families_verdict, generate_inequality_families, is_effective, is_spanned, k_very_ample,
    F1Coords,
};
use delpezzo::reider::{consistency_sweep, SweepDomain};
use delpezzo::{anticanonical_class, canonical_class, PicardClass, Rank, SurfaceContext};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(failures: &[String], detail: String) -> Verdict {
    let mut detail = detail;
    for f in failures.iter().take(5) {
        detail.push_str(&format!("\n    {f}"));
    }
    Verdict {
        pass: failures.is_empty(),
        detail,
    }
}

fn rank(r: usize) -> Rank {
    Rank::new(r).unwrap()
}

fn class(r: usize, a: i64, b: &[i64]) -> PicardClass {
    PicardClass::with_rank(rank(r), a, b).unwrap()
}

/// `L.D = a a' - sum b_i b'_i`, computed here from the coordinates.
fn pairing(x: &PicardClass, y: &PicardClass) -> i64 {
    x.a() * y.a() - x.b().iter().zip(y.b()).map(|(p, q)| p * q).sum::<i64>()
}

/// `min L.C` over the test curves: `I_r`, plus `l - e_1` on `S_1`.
fn direct_min(l: &PicardClass, ctx: &SurfaceContext) -> i64 {
    let mut m = ctx
        .exceptional()
        .iter()
        .map(|xi| pairing(l, xi))
        .min()
        .unwrap();
    if ctx.rank().get() == 1 {
        m = m.min(l.a() - l.b()[0]);
    }
    m
}

/// Calls `f` on every `b` in `[lo, hi]^r`.
fn for_each_b(r: usize, lo: i64, hi: i64, mut f: impl FnMut(&[i64])) {
    let mut b = vec![lo; r];
    loop {
        f(&b);
        let mut i = 0;
        loop {
            if i == r {
                return;
            }
            if b[i] < hi {
                b[i] += 1;
                break;
            }
            b[i] = lo;
            i += 1;
        }
    }
}

fn census() -> Verdict {
    let start = Instant::now();
    let expected: [(&str, [usize; 8]); 7] = [
        ("(0;-1)", [1, 2, 3, 4, 5, 6, 7, 8]),
        ("(1;1^2)", [0, 1, 3, 6, 10, 15, 21, 28]),
        ("(2;1^5)", [0, 0, 0, 0, 1, 6, 21, 56]),
        ("(3;2,1^6)", [0, 0, 0, 0, 0, 0, 7, 56]),
        ("(4;2^3,1^5)", [0, 0, 0, 0, 0, 0, 0, 56]),
        ("(5;2^6,1^2)", [0, 0, 0, 0, 0, 0, 0, 28]),
        ("(6;3,2^7)", [0, 0, 0, 0, 0, 0, 0, 8]),
    ];
    let mut failures = Vec::new();
    let mut cells = 0;
    let mut populated = 0;
    let mut totals = Vec::new();
    for r in Rank::all() {
        let table = exceptional_type_census(&SurfaceContext::new(r));
        let mut seen = 0;
        for (name, counts) in &expected {
            let got = table
                .counts
                .iter()
                .find(|(t, _)| t.to_string() == *name)
                .map_or(0, |(_, n)| *n);
            let want = counts[r.get() - 1];
            cells += 1;
            if want > 0 {
                populated += 1;
            }
            seen += got;
            if got != want {
                failures.push(format!("r = {r}, type {name}: got {got}, want {want}"));
            }
        }
        if seen != table.total() {
            failures.push(format!("r = {r}: types outside the table"));
        }
        totals.push(table.total());
    }
    if totals[5] != 27 || totals[7] != 240 {
        failures.push(format!("totals {totals:?}"));
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        failures.push(format!("took {elapsed:?}"));
    }
    verdict(
        &failures,
        format!("{cells} cells ({populated} nonzero), totals {totals:?}, {elapsed:.2?}"),
    )
}

fn null_classes() -> Verdict {
    let start = Instant::now();
    let rows: [(i64, [i64; 8]); 15] = [
        (1, [0, 0, 0, 0, 0, 0, 0, 1]),
        (2, [0, 0, 0, 0, 1, 1, 1, 1]),
        (3, [0, 0, 1, 1, 1, 1, 1, 2]),
        (4, [1, 1, 1, 1, 1, 1, 1, 3]),
        (4, [0, 1, 1, 1, 1, 2, 2, 2]),
        (5, [0, 1, 2, 2, 2, 2, 2, 2]),
        (5, [1, 1, 1, 1, 2, 2, 2, 3]),
        (6, [1, 1, 2, 2, 2, 2, 3, 3]),
        (7, [1, 2, 2, 2, 3, 3, 3, 3]),
        (7, [2, 2, 2, 2, 2, 2, 3, 4]),
        (8, [1, 3, 3, 3, 3, 3, 3, 3]),
        (8, [2, 2, 2, 3, 3, 3, 3, 4]),
        (9, [2, 3, 3, 3, 3, 3, 4, 4]),
        (10, [3, 3, 3, 3, 4, 4, 4, 4]),
        (11, [3, 4, 4, 4, 4, 4, 4, 4]),
    ];
    // Lines `a shape | shape`, one per degree, from the reference table.
    let transcription = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/golden/decompositions_tabulated.txt"
    ))
    .unwrap();
    let tabulated_splittings: Vec<(i64, Vec<String>)> = transcription
        .lines()
        .map(|line| {
            let (a, rest) = line.split_once(' ').unwrap();
            (
                a.parse().unwrap(),
                rest.split(" | ").map(str::to_string).collect(),
            )
        })
        .collect();
    let ctx = SurfaceContext::new(rank(8));
    let records = enumerate_null_classes(&ctx);
    let mut failures = Vec::new();

    let mut got: Vec<PicardClass> = records.iter().map(|r| r.representative).collect();
    let mut want: Vec<PicardClass> = rows.iter().map(|(a, b)| class(8, *a, b)).collect();
    got.sort();
    want.sort();
    if got != want {
        failures.push(format!("representatives differ: got {got:?}"));
    }
    let max_a = got.iter().map(|d| d.a()).max().unwrap_or(0);
    if max_a != 11 {
        failures.push(format!("max a = {max_a}"));
    }

    let mut shapes: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    for rec in &records {
        let d = rec.representative;
        for (x, y) in &rec.decompositions {
            let sum = *x + *y;
            if sum != d || !ctx.is_exceptional(x) || !ctx.is_exceptional(y) {
                failures.push(format!("bad splitting {x} + {y} of {d}"));
            }
        }
        if d.a() > 1 && rec.positive_decompositions().is_empty() {
            failures.push(format!("{d} has no positive-degree splitting"));
        }
        for (x, y) in rec.decomposition_shapes() {
            shapes.entry(d.a()).or_default().push(format!("{x}+{y}"));
        }
    }
    let mut checked = 0;
    for (a, entries) in &tabulated_splittings {
        if *a == 1 {
            // The irreducible class itself.
            if entries != &["(1;1)"] || shapes.contains_key(a) {
                failures.push(format!("a = 1: {entries:?}"));
            }
            continue;
        }
        for entry in entries {
            checked += 1;
            if !shapes.get(a).is_some_and(|s| s.contains(entry)) {
                failures.push(format!("a = {a}: {entry} not found"));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        failures.push(format!("took {elapsed:?}"));
    }
    verdict(
        &failures,
        format!(
            "{} rows, max a = {max_a}, {checked} tabulated splittings found, {elapsed:.2?}",
            records.len()
        ),
    )
}

fn equivalence() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut compared = 0u64;
    for r in Rank::all() {
        let ctx = SurfaceContext::new(r);
        let families = generate_inequality_families(&ctx);
        let mut compare = |b: &[i64], a: i64, failures: &mut Vec<String>| {
            let l = class(r.get(), a, b);
            let m = direct_min(&l, &ctx);
            for k in 0..=3 {
                compared += 1;
                if families_verdict(&families, &l, k) != (m >= k) {
                    failures.push(format!("r = {r}, k = {k}, L = {l}"));
                }
            }
        };
        if r.get() <= 4 {
            for a in 0..=15 {
                for_each_b(r.get(), -2, 15, |b| compare(b, a, &mut failures));
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(r.get() as u64);
            for _ in 0..100_000 {
                let a = rng.gen_range(0..=15);
                let b: Vec<i64> = (0..r.get()).map(|_| rng.gen_range(-2..=15)).collect();
                compare(&b, a, &mut failures);
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(300) {
        failures.push(format!("took {elapsed:?}"));
    }
    verdict(&failures, format!("{compared} comparisons, {elapsed:.2?}"))
}

fn exceptions() -> Verdict {
    let mut failures = Vec::new();
    let ctx8 = SurfaceContext::new(rank(8));
    let minus_k8 = anticanonical_class(rank(8));
    for k in 1..=5 {
        for mult in [k, k + 1] {
            let l = mult * minus_k8;
            if direct_min(&l, &ctx8) < k {
                failures.push(format!("{l} fails the inequalities at k = {k}"));
            }
            if k_very_ample(&l, k, &ctx8) {
                failures.push(format!("{l} accepted at k = {k}"));
            }
        }
    }
    let ctx7 = SurfaceContext::new(rank(7));
    let minus_k7 = anticanonical_class(rank(7));
    if direct_min(&minus_k7, &ctx7) < 1 {
        failures.push("-K_S7 fails the inequalities at k = 1".into());
    }
    if k_very_ample(&minus_k7, 1, &ctx7) {
        failures.push("-K_S7 accepted at k = 1".into());
    }
    if !k_very_ample(&minus_k7, 0, &ctx7) || !is_spanned(&minus_k7, &ctx7).unwrap() {
        failures.push("-K_S7 rejected at k = 0".into());
    }
    verdict(&failures, "k = 1..5 on S_8, k = 0, 1 on S_7".into())
}

fn sweeps() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut parts = Vec::new();
    let configs = [(2, 1), (3, 1), (7, 1), (8, 1), (2, 2), (5, 2)];
    for (r, k) in configs {
        let ctx = SurfaceContext::new(rank(r));
        let domain = if r <= 3 {
            SweepDomain::Box {
                max_a: 10,
                sorted: false,
            }
        } else {
            SweepDomain::Sample {
                count: 1000,
                max_a: 12,
                seed: 7,
            }
        };
        let s = consistency_sweep(k, domain, &ctx).unwrap();
        if !s.violations.is_empty() {
            failures.push(format!("(r, k) = ({r}, {k}): {:?}", s.violations.first()));
        }
        if let SweepDomain::Sample { count, .. } = domain {
            if s.classes_scanned != count {
                failures.push(format!(
                    "(r, k) = ({r}, {k}): only {} classes",
                    s.classes_scanned
                ));
            }
        }
        if s.passing == 0 || s.failing == 0 {
            failures.push(format!("(r, k) = ({r}, {k}): one-sided sweep"));
        }
        parts.push(format!(
            "({r},{k}) {}/{}/{}",
            s.applicable, s.passing, s.failing
        ));
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(600) {
        failures.push(format!("took {elapsed:?}"));
    }
    verdict(
        &failures,
        format!(
            "applicable/passing/failing {}, {elapsed:.2?}",
            parts.join(" ")
        ),
    )
}

fn degree_bound() -> Verdict {
    let mut failures = Vec::new();
    let mut counts = [0u64; 2];
    for r in 1..=4 {
        let ctx = SurfaceContext::new(rank(r));
        for a in 0..=15 {
            for_each_b(r, -2, 15, |b| {
                let l = class(r, a, b);
                for (i, (k, bound)) in [(2, 12), (3, 20)].into_iter().enumerate() {
                    if k_very_ample(&l, k, &ctx) {
                        counts[i] += 1;
                        if pairing(&l, &l) < bound {
                            failures.push(format!(
                                "{l} is {k}-very ample with degree {}",
                                pairing(&l, &l)
                            ));
                        }
                    }
                }
            });
        }
    }
    verdict(
        &failures,
        format!(
            "{} 2-very ample, {} 3-very ample classes",
            counts[0], counts[1]
        ),
    )
}

fn effectivity() -> Verdict {
    let mut failures = Vec::new();
    let mut implied = 0u64;
    let mut replayed = 0u64;
    for r in 1..=3 {
        let ctx = SurfaceContext::new(rank(r));
        let k = canonical_class(rank(r));
        for a in -2..=12 {
            for_each_b(r, -12, 12, |b| {
                let l = class(r, a, b);
                let (effective, cert) = is_effective(&l, &ctx).unwrap();
                if pairing(&l, &l) >= pairing(&k, &l) {
                    implied += 1;
                    if !effective {
                        failures.push(format!("{l}: L^2 >= K.L but not effective"));
                    }
                }
                if effective {
                    let Some(cert) = cert else {
                        failures.push(format!("{l}: no certificate"));
                        return;
                    };
                    replayed += 1;
                    let mut sum = cert.terminal;
                    for c in &cert.subtracted {
                        let e1 = r == 1 && c.curve == PicardClass::exceptional(rank(1), 0);
                        if c.multiplicity <= 0 || !(ctx.is_exceptional(&c.curve) || e1) {
                            failures.push(format!("{l}: bad component {:?}", c));
                        }
                        sum = sum + c.multiplicity * c.curve;
                    }
                    let terminal_nef =
                        cert.terminal.is_zero() || direct_min(&cert.terminal, &ctx) >= 0;
                    if sum != l || cert.replay() != l || !terminal_nef {
                        failures.push(format!("{l}: certificate does not replay"));
                    }
                }
            });
        }
    }
    let ctx8 = SurfaceContext::new(rank(8));
    if !is_effective(&anticanonical_class(rank(8)), &ctx8)
        .unwrap()
        .0
    {
        failures.push("-K_S8 not effective".into());
    }
    verdict(
        &failures,
        format!("{implied} implications, {replayed} certificates replayed"),
    )
}

fn f1() -> Verdict {
    let mut failures = Vec::new();
    let ctx = SurfaceContext::new(rank(1));
    let mut pairs = 0;
    for a0 in -20..=20 {
        for b in -20..=20 {
            pairs += 1;
            let c = F1Coords { a0, b };
            let l = c.to_class();
            if F1Coords::from_class(&l).unwrap() != c {
                failures.push(format!("({a0}, {b}) does not round-trip"));
            }
            let back = class(1, a0, &[b]);
            if F1Coords::from_class(&back).unwrap().to_class() != back {
                failures.push(format!("{back} does not round-trip"));
            }
            for k in 0..=3 {
                if c.is_k_very_ample(k) != k_very_ample(&l, k, &ctx) {
                    failures.push(format!("({a0}, {b}), k = {k}: criteria disagree"));
                }
            }
        }
    }
    verdict(&failures, format!("{pairs} coordinate pairs, k = 0..3"))
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_delpezzo"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn golden() -> Verdict {
    let mut failures = Vec::new();
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden");
    let read = |name: &str| std::fs::read_to_string(format!("{dir}/{name}")).unwrap();
    let expected = format!(
        "{}\n{}\n{}",
        read("exceptional_census.txt"),
        read("null_classes_r8.txt"),
        read("decompositions_r8.txt")
    );
    let (code, stdout, _) = run_cli(&["tables"]);
    if code != 0 || stdout != expected {
        failures.push("tables output differs from the golden files".into());
    }

    let json = |args: &[&str]| -> serde_json::Value {
        let (code, stdout, stderr) = run_cli(args);
        assert_eq!(code, 0, "{args:?}: {stderr}");
        serde_json::from_str(&stdout).unwrap()
    };
    let v = json(&[
        "check",
        "--r",
        "8",
        "--k",
        "1",
        "--json",
        "3;1,1,1,1,1,1,1,1",
    ]);
    if v["verdicts"]["k_very_ample"] != false || v["exception_flag"] != "minus_kK_S8" {
        failures.push(format!("-K_S8 at k = 1: {v}"));
    }
    let v = json(&["check", "--r", "1", "--k", "2", "--json", "4;2"]);
    if v["verdicts"]["k_very_ample"] != true {
        failures.push(format!("4;2 at k = 2: {v}"));
    }
    let v = json(&["check", "--r", "2", "--k", "1", "--json", "3;2,2"]);
    let nef_families: Vec<String> = v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|x| x["nef"] == true)
        .map(|x| x["source"].as_str().unwrap().to_string())
        .collect();
    if v["verdicts"]["nef"] != false || nef_families != ["(1;1^2)"] {
        failures.push(format!("3;2,2 at k = 1: {v}"));
    }
    let (_, text, _) = run_cli(&["check", "--r", "2", "--k", "1", "3;2,2"]);
    if !text.contains("a >= b_i + b_j  [nef]") {
        failures.push(format!("3;2,2 text report: {text}"));
    }
    let (code, _, stderr) = run_cli(&["check", "--r", "2", "--k", "1", "3;2,x"]);
    if code != 2 || !stderr.contains("column 5") {
        failures.push(format!("parse diagnostic: exit {code}, {stderr}"));
    }
    verdict(&failures, "tables byte-match, four check examples".into())
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("exceptional-curve census", census),
        ("null classes and splittings on S_8", null_classes),
        ("inequality families vs intersection test", equivalence),
        ("anticanonical exceptions", exceptions),
        ("obstruction-search consistency sweep", sweeps),
        ("degree bound k^2 + 3k + 2", degree_bound),
        ("effectivity and certificates", effectivity),
        ("F_1 coordinates", f1),
        ("golden tables and CLI checks", golden),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        all &= v.pass;
        let status = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {status}  {name}: {}", i + 1, v.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
