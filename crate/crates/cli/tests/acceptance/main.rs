//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod oracle;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use fewnomial_core::bounds::{
    bs_solution_bound, full_support_bound, khovanskii_solution_bound, tau_sum_bound, lower_bound,
    component_bound, BoundValue,
};
use fewnomial_core::numeric::{parse_rational, ratio, to_decimal_string};
use fewnomial_core::solver::{certify, solve_assembled, solve_block, sturm_positive_count, SolutionSet};
use fewnomial_core::{
    affine_span_dim, assemble, builtin_block, census, monomial_substitution, plan, support,
    transform_point, BlockRegistry, Matrix, UniPoly,
};
use num::{BigRational, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn dec(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sorted(set: &SolutionSet) -> Vec<Vec<BigRational>> {
    let mut pts: Vec<_> = set.solutions.iter().map(|s| s.coordinates.clone()).collect();
    pts.sort();
    pts
}

fn match_printed(set: &SolutionSet, printed: &[&[&str]]) -> Result<(), String> {
    ensure(set.len() == printed.len(), || format!("{} solutions, expected {}", set.len(), printed.len()))?;
    let tol = dec("1e-4");
    for (p, q) in sorted(set).iter().zip(printed) {
        for (x, y) in p.iter().zip(q.iter()) {
            ensure((x - dec(y)).abs() < tol, || {
                format!("coordinate {} differs from printed {y}", to_decimal_string(x, 12))
            })?;
        }
    }
    ensure(set.solutions.iter().all(|s| !s.jacobian_det.is_zero()), || "degenerate solution".into())
}

fn c1() -> Outcome {
    let start = Instant::now();
    let set = solve_block(&builtin_block(2).unwrap(), 50).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    match_printed(&set, &[&["0.381966", "10.854102"], &["1", "5"], &["2.618034", "4.1459"]])?;
    ensure(t < Duration::from_secs(1), || format!("took {t:?}"))?;
    Ok(format!("3 solutions in {t:.2?}"))
}

fn c2() -> Outcome {
    let start = Instant::now();
    let set = solve_block(&builtin_block(3).unwrap(), 50).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    match_printed(
        &set,
        &[
            &["0.076645", "0.1359", "1.00587"],
            &["0.084513", "0.13829", "1.00714"],
            &["0.54046", "0.54887", "1.2921"],
            &["1.29838", "1.30188", "2.6858"],
        ],
    )?;
    ensure(t < Duration::from_secs(1), || format!("took {t:?}"))?;
    Ok(format!("4 solutions in {t:.2?}"))
}

fn c3() -> Outcome {
    let reg = BlockRegistry::with_builtins().map_err(|e| e.to_string())?;
    let residual_bound = dec("1e-40");
    let scaled_det_bound = dec("1e-8");
    let mut cases = 0;
    let mut largest = Duration::ZERO;
    for k in 1..=3usize {
        for n in k..=9 {
            if n / k > 3 {
                continue;
            }
            let system = assemble(&plan(n, k, &reg).map_err(|e| e.to_string())?);
            let c = census(&system);
            ensure(c.monomials == n + k + 1, || format!("({n},{k}): {} monomials", c.monomials))?;
            ensure(c.affine_span_dim == Some(n), || format!("({n},{k}): span {:?}", c.affine_span_dim))?;
            let start = Instant::now();
            let set = solve_assembled(&system, &reg, 50).map_err(|e| format!("({n},{k}): {e}"))?;
            let t = start.elapsed();
            let expected = ((n + k) / k).pow(k as u32);
            ensure(set.len() == expected, || format!("({n},{k}): {} solutions, expected {expected}", set.len()))?;
            for s in &set.solutions {
                let cert = certify(&system, &s.coordinates, 50).map_err(|e| e.to_string())?;
                let r = cert.residual_norm.unwrap();
                ensure(r < residual_bound, || format!("({n},{k}): residual {}", to_decimal_string(&r, 4)))?;
                let scaled = cert.jacobian_det.unwrap().abs() / cert.det_scale.unwrap();
                ensure(scaled > scaled_det_bound, || format!("({n},{k}): scaled det {}", to_decimal_string(&scaled, 4)))?;
            }
            if (n, k) == (9, 3) {
                largest = t;
                ensure(t < Duration::from_secs(10), || format!("(9,3) took {t:?}"))?;
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} cases, (9,3) solved in {largest:.2?}"))
}

fn c4() -> Outcome {
    let v = khovanskii_solution_bound(2, 2).map_err(|e| e.to_string())?;
    ensure(v == BoundValue::integer(5184), || format!("got {v}"))?;
    Ok("khovanskii_solution_bound(2,2) = 5184".into())
}

fn c5() -> Outcome {
    let start = Instant::now();
    let mut checks = 0;
    for n in 1..=12u32 {
        for k in 1..n {
            let lower = BoundValue::integer(lower_bound(n, k).unwrap());
            let bs = bs_solution_bound(n, k).unwrap();
            ensure(lower.compare(&bs).is_le(), || format!("lower > bs at ({n},{k})"))?;
            checks += 1;
        }
        for k in 0..=6u32 {
            let t2 = component_bound(n, k).unwrap();
            ensure(tau_sum_bound(n, k).unwrap().compare(&t2).is_lt(), || format!("tau sum >= component bound at ({n},{k})"))?;
            checks += 1;
            if k >= 1 {
                let fs = full_support_bound(n, k).unwrap();
                ensure(fs.compare(&t2).is_lt(), || format!("full support >= component bound at ({n},{k})"))?;
                checks += 1;
            }
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok(format!("{checks} comparisons in {t:.2?}"))
}

fn random_poly(rng: &mut ChaCha8Rng) -> Vec<BigRational> {
    let degree = rng.gen_range(1..=6usize);
    if rng.gen_bool(0.5) {
        let mut c: Vec<BigRational> =
            (0..=degree).map(|_| ratio(rng.gen_range(-10..=10), rng.gen_range(1..=5))).collect();
        if c[degree].is_zero() {
            c[degree] = ratio(1, 1);
        }
        c
    } else {
        // Product of linear factors with small rational roots, repeats allowed.
        let mut p = vec![ratio(rng.gen_range(1..=3), 1)];
        for _ in 0..degree {
            let r = ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3));
            let mut next = vec![BigRational::zero(); p.len() + 1];
            for (i, c) in p.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * &r;
            }
            p = next;
        }
        p
    }
}

fn c6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut total_roots = 0;
    for i in 0..200 {
        let coeffs = random_poly(&mut rng);
        let expected = oracle::positive_root_count(&coeffs);
        let got = sturm_positive_count(&UniPoly::new(coeffs.clone())).map_err(|e| e.to_string())?;
        ensure(got == expected, || format!("polynomial {i}: sturm {got}, oracle {expected}"))?;
        total_roots += expected;
    }
    Ok(format!("200/200 agree ({total_roots} positive roots in total)"))
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let a: Matrix = (0..n)
            .map(|_| (0..n).map(|_| ratio(rng.gen_range(-2..=2), 1)).collect())
            .collect();
        if !fewnomial_core::matrix::determinant(&a).is_zero() {
            return a;
        }
    }
}

fn c7() -> Outcome {
    let reg = BlockRegistry::with_builtins().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let tol = dec("1e-35");
    let mut worst = BigRational::zero();
    for (n, k) in [(2usize, 1usize), (4, 2)] {
        let system = assemble(&plan(n, k, &reg).unwrap());
        let solutions = solve_assembled(&system, &reg, 50).map_err(|e| e.to_string())?;
        let supp = support(&system);
        let dim = affine_span_dim(&supp).unwrap();
        for trial in 0..20 {
            let a = random_invertible(&mut rng, n);
            let transformed = monomial_substitution(&system, &a).map_err(|e| e.to_string())?;
            let tsupp = support(&transformed);
            ensure(tsupp.len() == supp.len(), || format!("({n},{k}) trial {trial}: support size changed"))?;
            ensure(affine_span_dim(&tsupp).unwrap() == dim, || format!("({n},{k}) trial {trial}: span changed"))?;
            for s in &solutions.solutions {
                let y = transform_point(&s.coordinates, &a, 50).map_err(|e| e.to_string())?;
                let cert = certify(&transformed, &y, 50).map_err(|e| e.to_string())?;
                let r = cert.residual_norm.clone().unwrap();
                ensure(cert.is_positive && r < tol, || {
                    format!("({n},{k}) trial {trial}: residual {}", to_decimal_string(&r, 4))
                })?;
                if r > worst {
                    worst = r;
                }
            }
        }
    }
    Ok(format!("40 transforms, worst residual {}", to_decimal_string(&worst, 3)))
}

fn fewnomial() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fewnomial"));
    c.env("SOURCE_DATE_EPOCH", "1700000000");
    c
}

fn run_ok(cmd: &mut Command) -> Result<Vec<u8>, String> {
    let o = cmd.output().map_err(|e| e.to_string())?;
    ensure(o.status.success(), || String::from_utf8_lossy(&o.stderr).into_owned())?;
    Ok(o.stdout)
}

fn c8() -> Outcome {
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name);
    let p = |p: &Path| p.to_str().unwrap().to_string();
    for name in ["a.csv", "b.csv"] {
        run_ok(
            Command::new(env!("CARGO_BIN_EXE_fewnomial"))
                .args(["table", "--n-max", "12", "--k-max", "6", "--format", "csv", "--out"])
                .arg(path(name)),
        )?;
    }
    let a = std::fs::read(path("a.csv")).unwrap();
    ensure(a == std::fs::read(path("b.csv")).unwrap(), || "table outputs differ".into())?;

    let sys = path("sys.json");
    run_ok(fewnomial().args(["construct", "--n", "6", "--k", "2", "--out", &p(&sys)]))?;
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        outputs.push(run_ok(fewnomial().env("RAYON_NUM_THREADS", threads).args(["solve", "--in", &p(&sys)]))?);
    }
    ensure(outputs[0] == outputs[1], || "solve output depends on thread count".into())?;
    Ok(format!("table {} bytes identical; solve identical at 1 and 4 threads", a.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("C1", "block m=2 reproduction", c1),
        ("C2", "block m=3 reproduction", c2),
        ("C3", "lower-bound construction at desk scale", c3),
        ("C4", "Khovanskii anchor", c4),
        ("C5", "bound ordering", c5),
        ("C6", "root-counting oracle equivalence", c6),
        ("C7", "monomial-substitution invariance", c7),
        ("C8", "determinism", c8),
    ];
    let mut failed = 0;
    for (id, name, f) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {id} {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id} {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
