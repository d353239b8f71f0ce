//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Every comparison is exact; the only
//! tolerances are the wall-clock limits below.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use jcurve_cli::run;
use jcurve_core::chern::{enumerate_characteristic, enumerate_characteristic_with, EnumOptions};
use jcurve_core::lattice::Block;
use jcurve_core::{
    corollary_witness, decide_pseudoholomorphic, definite_genus_bound, parse_lattice, solve_chern, stabilization_count,
    ChernConstraint, Execution, FourManifold, GramLattice, LatticeVector, Rule, SurfaceClass, Verdict,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const SEED: u64 = 20_240_917;
const BUDGET: u64 = 8;
const ORACLE_BOUND: u64 = 10;

const LIMIT_1: Duration = Duration::from_secs(1);
const LIMIT_2: Duration = Duration::from_secs(1);
const LIMIT_3: Duration = Duration::from_secs(1);
const LIMIT_4: Duration = Duration::from_secs(60);
const LIMIT_5: Duration = Duration::from_secs(10);
const LIMIT_6: Duration = Duration::from_secs(5);
const LIMIT_7: Duration = Duration::from_secs(1);
const LIMIT_8: Duration = Duration::from_secs(1);
const LIMIT_9: Duration = Duration::from_secs(30);
const LIMIT_SUITE: Duration = Duration::from_secs(120);

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cli_json(args: &[&str]) -> Result<(i32, Value), String> {
    let r = run(["jcurve", "--json"].into_iter().chain(args.iter().copied()));
    if !r.stderr.is_empty() {
        return Err(format!("{args:?}: {}", r.stderr.trim()));
    }
    serde_json::from_str(&r.stdout).map(|v| (r.code, v)).map_err(|e| format!("{args:?}: {e}"))
}

fn realizable_from_cli(manifold: &str, vector: &str, gmax: u64) -> Result<(Vec<u64>, Vec<u64>), String> {
    let (code, v) = cli_json(&["spectrum", manifold, vector, &gmax.to_string()])?;
    check(code == 0, || format!("spectrum exit code {code}"))?;
    let mut yes = Vec::new();
    let mut no = Vec::new();
    for row in v["spectrum"].as_array().ok_or("no spectrum array")? {
        let g = row["genus"].as_u64().ok_or("genus")?;
        match row["decision"]["verdict"].as_str() {
            Some("Realizable") => yes.push(g),
            Some("NotRealizable") => no.push(g),
            other => return Err(format!("genus {g}: verdict {other:?}")),
        }
    }
    Ok((yes, no))
}

fn vectors(v: &Value) -> Vec<Vec<i64>> {
    serde_json::from_value(v["vectors"].clone()).unwrap_or_default()
}

fn criterion_1() -> Outcome {
    let (code, v) = cli_json(&["enumerate", "H", "8", "3"])?;
    check(code == 0 && vectors(&v) == vec![vec![-2, -2], vec![2, 2]], || {
        format!("enumerate H 8 3: {:?}", vectors(&v))
    })?;
    let (yes, no) = realizable_from_cli("S2xS2", "1,1", 6)?;
    check(yes == [0, 4] && no == [1, 2, 3, 5, 6], || format!("realizable {yes:?}, not {no:?}"))?;
    Ok("enumerate = {(2,2),(-2,-2)}; Realizable exactly at g in {0,4}".into())
}

fn criterion_2() -> Outcome {
    let (_, v) = cli_json(&["enumerate", "<1>", "9", "30"])?;
    check(vectors(&v) == vec![vec![-3], vec![3]], || format!("square 9: {:?}", vectors(&v)))?;
    let (code, v) = cli_json(&["decide", "CP2", "--", "-1", "3"])?;
    let c: Option<Vec<i64>> = serde_json::from_value(v["decision"]["certificate"]["c"].clone()).ok();
    check(code == 0 && v["decision"]["verdict"] == "Realizable" && c == Some(vec![3]), || {
        format!("decide CP2 -1 3: {v}")
    })?;
    // Adjunction: c . y = 3 * (-1) must equal 2 - 2g + y . y = -3.
    let pairing = v["decision"]["certificate"]["pairing"].as_i64();
    check(pairing == Some(-3) && pairing == Some(2 - 2 * 3 + 1), || format!("certificate pairing {pairing:?}"))?;
    let (code, v) = cli_json(&["decide", "CP2", "1", "1"])?;
    check(code == 0 && v["decision"]["verdict"] == "NotRealizable", || format!("decide CP2 1 1: {v}"))?;
    Ok("c = +-3; (-1, g=3) Realizable with c = 3; (1, g=1) NotRealizable".into())
}

fn criterion_3() -> Outcome {
    let (code, v) = cli_json(&["decide", "CP2#CP2bar", "1,0", "1"])?;
    check(code == 0 && v["decision"]["verdict"] == "NotRealizable", || format!("g = 1: {v}"))?;
    // c = (x, y) with x = c . (1,0) = 2 - 2 + 1 = 1 and x^2 - y^2 = 8.
    let (_, e) = cli_json(&["enumerate", "<1>+<-1>", "8", &ORACLE_BOUND.to_string()])?;
    check(!vectors(&e).iter().any(|c| c[0] == 1), || "oracle has a c with c_1 = 1".into())?;
    let (yes, _) = realizable_from_cli("CP2#CP2bar", "1,0", 5)?;
    let oracle: Vec<u64> = (0..=5u64).filter(|&g| vectors(&e).iter().any(|c| c[0] == 2 - 2 * g as i64 + 1)).collect();
    check(yes == [0, 3] && oracle == yes, || format!("spectrum {yes:?}, oracle {oracle:?}"))?;
    Ok("g = 1 NotRealizable; spectrum {0,3} equals the bound-10 oracle".into())
}

fn random_strict(rng: &mut ChaCha8Rng) -> GramLattice {
    let tail = [Block::Plus1, Block::Minus1, Block::H, Block::E8, Block::MinusE8];
    let mut blocks = vec![Block::H, Block::H];
    let mut rank = 4;
    for _ in 0..rng.gen_range(0..=3) {
        let b = *tail.choose(rng).unwrap();
        if rank + b.rank() <= 12 {
            rank += b.rank();
            blocks.push(b);
        }
    }
    blocks.shuffle(rng);
    GramLattice::from_blocks(&blocks).unwrap()
}

fn random_gamma(rng: &mut ChaCha8Rng, n: usize, d: i64) -> LatticeVector {
    loop {
        let v = LatticeVector::new((0..n).map(|_| rng.gen_range(-4..=4)).collect());
        if v.divisibility() == 1 {
            return v.scaled(d);
        }
    }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..200 {
        let l = random_strict(&mut rng);
        let d = rng.gen_range(1..=5);
        let gamma = random_gamma(&mut rng, l.rank(), d);
        let k = l.k_invariant(&gamma).map_err(|e| e.to_string())?;
        let g = k.value() + d * rng.gen_range(0..5);
        let h = l.signature().tau() + 8 * rng.gen_range(-4..=4);
        let cons = ChernConstraint::new(gamma.clone(), h, g);
        let out = solve_chern(&l, &cons).map_err(|e| e.to_string())?;
        let c =
            out.certificate().ok_or_else(|| format!("instance {i}: {} {gamma} h={h} g={g}: {out:?}", l.describe()))?;
        let t = 2 - 2 * g + l.norm(&gamma).unwrap();
        check(
            l.is_characteristic(c.c()).unwrap() && l.norm(c.c()).unwrap() == h && l.pair(c.c(), &gamma).unwrap() == t,
            || format!("instance {i}: certificate fails independent check"),
        )?;
    }
    let mut oracle_runs = 0;
    for i in 0..200 {
        let l = random_strict(&mut rng);
        let d = rng.gen_range(2..=5);
        let gamma = random_gamma(&mut rng, l.rank(), d);
        let k = l.k_invariant(&gamma).map_err(|e| e.to_string())?;
        let g = k.value() + rng.gen_range(1..d) + d * rng.gen_range(0..3);
        let b1 = if l.signature().b_plus % 2 == 0 { 1 } else { 0 };
        let m = FourManifold::new(b1, l);
        let dec = decide_pseudoholomorphic(&m, &SurfaceClass::new(gamma.clone(), g as u64), BUDGET)
            .map_err(|e| e.to_string())?;
        check(dec.verdict == Verdict::NotRealizable, || format!("instance {i}: {gamma} g={g}: {:?}", dec.verdict))?;
        if m.b2() <= 4 {
            let t = 2 - 2 * g + m.lattice.norm(&gamma).unwrap();
            let e = enumerate_characteristic(&m.lattice, m.chern_number_target(), ORACLE_BOUND);
            check(!e.vectors.iter().any(|c| m.lattice.pair(c, &gamma).unwrap() == t), || {
                format!("instance {i}: oracle finds a solution")
            })?;
            oracle_runs += 1;
        }
    }
    Ok(format!("200/200 certificates verified; 200/200 NotRealizable, {oracle_runs} rank-4 cases confirmed by oracle"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let all = [Block::Plus1, Block::Minus1, Block::H, Block::E8, Block::MinusE8];
    for i in 0..1000 {
        let blocks: Vec<Block> = (0..rng.gen_range(1..=5)).map(|_| *all.choose(&mut rng).unwrap()).collect();
        let l = GramLattice::from_blocks(&blocks).unwrap();
        let n = l.rank();
        let gamma = LatticeVector::new((0..n).map(|_| rng.gen_range(-5..=5)).collect()).scaled(rng.gen_range(0..=3));
        let c = l.find_characteristic();
        let shift = LatticeVector::new((0..n).map(|_| rng.gen_range(-6..=6)).collect()).scaled(2);
        let c2 = &c + &shift;
        let a = l.k_invariant_with(&c, &gamma).map_err(|e| e.to_string())?;
        let b = l.k_invariant_with(&c2, &gamma).map_err(|e| e.to_string())?;
        check(a == b, || format!("trial {i}: {a} != {b}"))?;
    }
    Ok("1000 trials, 0 failures".into())
}

fn criterion_6() -> Outcome {
    let mut cases = 0;
    for n in 1..=4usize {
        let b1 = if n % 2 == 1 { 0 } else { 1 };
        let m = FourManifold::new(b1, GramLattice::diagonal(n, 0));
        for gamma in [LatticeVector::basis(n, 0), LatticeVector::new(vec![1; n]), LatticeVector::basis(n, 0).scaled(2)]
        {
            let iv = definite_genus_bound(&m, &gamma).map_err(|e| e.to_string())?.ok_or("empty interval")?;
            for g in 0..=iv.hi + 4 {
                let d = decide_pseudoholomorphic(&m, &SurfaceClass::new(gamma.clone(), g), BUDGET)
                    .map_err(|e| e.to_string())?;
                check(d.verdict != Verdict::Unknown, || format!("<1>^{n} {gamma} g={g} undecided"))?;
                if d.verdict == Verdict::Realizable {
                    check(iv.contains(g), || format!("<1>^{n} {gamma}: realizable g={g} outside {iv:?}"))?;
                }
                if g > iv.hi {
                    check(d.verdict == Verdict::NotRealizable, || format!("<1>^{n} {gamma}: g={g} above bound"))?;
                }
            }
            cases += 1;
        }
    }
    Ok(format!(
        "{cases} classes on CP2 and <1>^n (n <= 4): all realizable genera inside the bound, genera above it rejected"
    ))
}

fn criterion_7() -> Outcome {
    let m0 = FourManifold::new(0, parse_lattice("2<1>+<-1>").unwrap());
    let s = SurfaceClass::new([0, 0, 1], 2);
    let st = stabilization_count(&m0, &s).map_err(|e| e.to_string())?;
    check(st.k == 7, || format!("k = {}", st.k))?;
    let d = decide_pseudoholomorphic(&st.manifold, &s, BUDGET).map_err(|e| e.to_string())?;
    check(d.verdict == Verdict::NotRealizable && d.rule == Rule::BminusOneBound, || {
        format!("{:?}/{:?}", d.verdict, d.rule)
    })?;
    // t = 2 - 4 - 1 = -3, |y^2| = 1: the bound is h < -9.
    for j in [st.k - 1, st.k - 2] {
        let mj = m0.stabilized(j);
        let parity = (mj.b1 + 2) % 2 == 1;
        let below = mj.chern_number_target() < -9;
        check(!(parity && below), || format!("k = {j} satisfies both conditions"))?;
    }
    Ok("k = 7, NotRealizable(BminusOneBound); k = 6 fails parity, k = 5 fails the bound".into())
}

fn criterion_8() -> Outcome {
    let mut cases = 0;
    for (lat, b1) in [("2H", 1), ("2H+2<1>", 1), ("H+<1>+2<-1>", 1), ("2H+E8", 1)] {
        let m = FourManifold::new(b1, parse_lattice(lat).unwrap());
        let mut gamma = vec![0i64; m.b2()];
        gamma[0] = 1;
        gamma[1] = 3;
        let gamma = LatticeVector::new(gamma);
        for genus in 0..3u64 {
            for extra in [0u64, 1, 5] {
                let w = corollary_witness(&m, &SurfaceClass::new(gamma.clone(), genus), extra)
                    .map_err(|e| e.to_string())?;
                check(w == genus + extra, || format!("{lat}: witness {w}"))?;
                let d = decide_pseudoholomorphic(&m, &SurfaceClass::new(gamma.clone(), w), BUDGET)
                    .map_err(|e| e.to_string())?;
                check(d.verdict == Verdict::Realizable, || format!("{lat}: genus {w} is {:?}", d.verdict))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases: witness = genus + m and Realizable"))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    for i in 0..500 {
        let l = random_strict(&mut rng);
        let n = l.rank();
        let gamma = LatticeVector::new((0..n).map(|_| rng.gen_range(-5..=5)).collect());
        let c =
            &l.find_characteristic() + &LatticeVector::new((0..n).map(|_| rng.gen_range(-3..=3)).collect()).scaled(2);
        check((l.norm(&gamma).unwrap() - l.pair(&c, &gamma).unwrap()) % 2 == 0, || format!("trial {i}: adjunction"))?;
        let k: i64 = rng.gen_range(-9..=9);
        check(gamma.scaled(k).divisibility() == k.unsigned_abs() * gamma.divisibility(), || {
            format!("trial {i}: d(k y)")
        })?;
    }
    for i in 0..100 {
        let l = random_strict(&mut rng);
        let n = l.rank();
        let mut u: Vec<Vec<i64>> = (0..n).map(|r| (0..n).map(|c| i64::from(r == c)).collect()).collect();
        for _ in 0..3 * n {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b {
                let s = if rng.gen_bool(0.5) { 1 } else { -1 };
                for row in u.iter_mut() {
                    row[b] += s * row[a];
                }
            }
        }
        let moved = GramLattice::new(l.transform(&u).unwrap()).map_err(|e| e.to_string())?;
        check(moved.signature() == l.signature() && moved.parity() == l.parity(), || format!("basis change {i}"))?;
    }
    for lat in ["H+<1>", "H+<-1>", "<1>+<-1>+<1>"] {
        let l = parse_lattice(lat).unwrap();
        let h = l.signature().tau() + 8;
        let seq = enumerate_characteristic_with(
            &l,
            h,
            8,
            &EnumOptions { chunks: 1, execution: Execution::Sequential, ..Default::default() },
        );
        for chunks in [3, 17, 64, 500] {
            let par = enumerate_characteristic_with(
                &l,
                h,
                8,
                &EnumOptions { chunks, execution: Execution::Parallel, ..Default::default() },
            );
            check(par == seq, || format!("{lat}: {chunks} chunks differ"))?;
        }
    }
    Ok("adjunction integrality, divisibility homogeneity, 100 basis changes, partition determinism: 0 failures".into())
}

fn criterion_suite() -> Outcome {
    let r = run(["jcurve", "verify-paper"]);
    let fails = r.stdout.lines().filter(|l| l.starts_with("[FAIL]")).count();
    let passes = r.stdout.lines().filter(|l| l.starts_with("[PASS]")).count();
    check(r.code == 0 && passes == 9 && fails == 0, || {
        format!("exit {}, {passes} pass, {fails} fail\n{}", r.code, r.stdout)
    })?;
    Ok("verify-paper reports 9/9".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 10] = [
        ("1 S2xS2 enumeration and spectrum", LIMIT_1, criterion_1),
        ("2 CP2 vectors and decisions", LIMIT_2, criterion_2),
        ("3 CP2#CP2bar spectrum vs oracle", LIMIT_3, criterion_3),
        ("4 randomized strictly indefinite suite", LIMIT_4, criterion_4),
        ("5 k-invariant well-definedness", LIMIT_5, criterion_5),
        ("6 definite genus bound", LIMIT_6, criterion_6),
        ("7 stabilization count", LIMIT_7, criterion_7),
        ("8 corollary witness", LIMIT_8, criterion_8),
        ("9 property suite", LIMIT_9, criterion_9),
        ("verify-paper subcommand", LIMIT_SUITE, criterion_suite),
    ];
    let mut failed = 0;
    for (name, limit, f) in criteria {
        let start = Instant::now();
        let out = f();
        let elapsed = start.elapsed();
        let (ok, detail) = match out {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; took {elapsed:?}, limit {limit:?}")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {name} [{:.3} s / {} s]: {detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
