//! Acceptance suite: one PASS/FAIL line per criterion, exact arithmetic only.
//! Runs as a plain binary (`harness = false`) so the lines always reach stdout.

use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::Instant;

use hall_core::derived::{derived_class_of, ext_dim, mapping_cone, ChainHomSpace, DerivedClass};
use hall_core::fq::gaussian_binomial;
use hall_core::hall::{ClassicalContext, DerivedContext};
use hall_core::lf::{check_base_change, random_square};
use hall_core::span::build_span_model;
use hall_core::verify::{
    check_assoc, check_orbit_classical, check_orbit_derived, check_riedtmann, check_span, check_stalk, check_unit,
    CheckOutcome,
};
use hall_core::{Catalog, Quiver, Representation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn catalog(vertices: usize, p: u32, bound: &[usize]) -> Arc<Catalog> {
    Arc::new(Catalog::build(Arc::new(Quiver::linear(vertices)), p, bound.to_vec()).expect("catalog builds"))
}

fn classical(vertices: usize, p: u32, bound: &[usize]) -> ClassicalContext {
    ClassicalContext::new(catalog(vertices, p, bound))
}

/// The derived context used throughout: A_2 over F_2, window [-1, 1], bound (1, 1).
fn derived_a2() -> DerivedContext {
    DerivedContext::new(catalog(2, 2, &[2, 2]), (-1, 1), vec![1, 1]).expect("derived context")
}

fn outcomes(label: &str, list: &[CheckOutcome]) -> Verdict {
    let cases: u64 = list.iter().map(|o| o.cases).sum();
    let failures: Vec<String> = list.iter().flat_map(|o| o.failures.iter().cloned()).collect();
    if failures.is_empty() && cases > 0 {
        Ok(format!("{cases} {label} cases"))
    } else if cases == 0 {
        Err(format!("no {label} cases ran"))
    } else {
        Err(format!("{} failures, first: {}", failures.len(), failures[0]))
    }
}

fn gaussian_numbers() -> Verdict {
    let mut cases = 0;
    for p in [2u32, 3] {
        let ctx = classical(1, p, &[4]);
        let cat = ctx.catalog();
        let v = |n: usize| cat.classify(&Representation::semisimple(cat.quiver().clone(), p, vec![n])).unwrap();
        for n in 0..=4 {
            for k in 0..=n {
                let g = ctx.hall_number(v(k), v(n - k), v(n)).map_err(|e| e.to_string())?;
                let expected = gaussian_binomial(n as u32, k as u32, p as u64);
                if g != expected {
                    return Err(format!("p={p} n={n} k={k}: Hall number {g}, Gaussian binomial {expected}"));
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (p, n, k) cases"))
}

fn riedtmann() -> Verdict {
    outcomes(
        "triple",
        &[check_riedtmann(&classical(1, 2, &[3])), check_riedtmann(&classical(2, 2, &[2, 2]))],
    )
}

fn unit_and_assoc() -> Verdict {
    let mut list = Vec::new();
    for ctx in [classical(1, 2, &[3]), classical(1, 3, &[3]), classical(2, 2, &[2, 2])] {
        list.push(check_unit(&ctx));
        list.push(check_assoc(&ctx));
    }
    let d = derived_a2();
    list.push(check_unit(&d));
    list.push(check_assoc(&d));
    outcomes("unit/associativity", &list)
}

fn stalk() -> Verdict {
    let ctx = classical(2, 2, &[1, 1]);
    let d = DerivedContext::new(ctx.catalog().clone(), (-1, 1), vec![1, 1]).map_err(|e| e.to_string())?;
    outcomes("module-stalk triple", &[check_stalk(&ctx, &d)])
}

fn span() -> Verdict {
    let mut list = Vec::new();
    for ctx in [classical(1, 2, &[3]), classical(1, 3, &[3]), classical(2, 2, &[2, 2])] {
        let model = build_span_model(&ctx).map_err(|e| e.to_string())?;
        list.push(check_span(&ctx, &model));
    }
    outcomes("basis pair", &list)
}

fn base_change() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut functions = 0;
    for i in 0..100 {
        let square = random_square(&mut rng, 5, 8);
        let report = check_base_change(&square).map_err(|e| e.to_string())?;
        if !report.equal {
            return Err(format!("square {i}: deviation {}", report.max_deviation));
        }
        functions += report.functions_checked;
    }
    Ok(format!("100 squares, {functions} characteristic functions"))
}

fn orbit() -> Verdict {
    let classical_outcome = check_orbit_classical(&classical(2, 2, &[2, 2]));
    let derived_outcome = check_orbit_derived(&derived_a2());
    let uninverted: u64 = [&classical_outcome, &derived_outcome]
        .iter()
        .map(|o| o.extra.get("uninverted_reading_failures").and_then(|v| v.as_u64()).unwrap_or(0))
        .sum();
    let summary = outcomes("triple", &[classical_outcome, derived_outcome])?;
    if uninverted == 0 {
        return Err(format!("{summary}, but the uninverted reading never failed"));
    }
    Ok(format!("{summary}; uninverted reading fails on {uninverted} non-free triples"))
}

fn finitary_band() -> Verdict {
    let d = derived_a2();
    let cat = d.catalog();
    let (lo, hi) = d.window();
    let span = hi - lo;
    let mut pairs = 0;
    for x in d.universe() {
        for z in d.universe() {
            for i in -(span + 3)..=(span + 3) {
                if i.abs() <= span + 1 {
                    continue;
                }
                let dim = ext_dim(x, z, i, cat).map_err(|e| e.to_string())?;
                if dim != 0 {
                    return Err(format!("x={x}, z={z}: ext_dim {dim} at i={i}, outside [-{}, {}]", span + 1, span + 1));
                }
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs, band within [-{}, {}]", span + 1, span + 1))
}

fn homotopy_invariance() -> Verdict {
    let d = derived_a2();
    let cat = d.catalog();
    let uni: &[DerivedClass] = d.universe();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut done = 0;
    let mut attempts = 0;
    while done < 50 {
        attempts += 1;
        if attempts > 10_000 {
            return Err(format!("only {done} perturbable pairs found"));
        }
        let (x, z) = (&uni[rng.gen_range(0..uni.len())], &uni[rng.gen_range(0..uni.len())]);
        let source = Arc::new(x.projective_complex(cat).map_err(|e| e.to_string())?);
        let target = if rng.gen_bool(0.5) { z.projective_complex(cat) } else { z.stalk_complex(cat) };
        let space = ChainHomSpace::new(source, Arc::new(target.map_err(|e| e.to_string())?)).map_err(|e| e.to_string())?;
        if space.boundary_basis().is_empty() {
            continue;
        }
        let p = space.modulus();
        let mut coeffs = |n: usize| (0..n).map(|_| rng.gen_range(0..p)).collect::<Vec<u32>>();
        let f = space.combine(&coeffs(space.cycle_basis().len()), space.cycle_basis());
        let h = space.combine(&coeffs(space.boundary_basis().len()), space.boundary_basis());
        let g: Vec<u32> = f.iter().zip(&h).map(|(a, b)| (a + b) % p).collect();
        let cone = |raw: &[u32]| -> Result<DerivedClass, String> {
            let m = space.chain_map(raw);
            m.validate().map_err(|e| e.to_string())?;
            derived_class_of(&mapping_cone(&m).map_err(|e| e.to_string())?, cat).map_err(|e| e.to_string())
        };
        let (cf, cg) = (cone(&f)?, cone(&g)?);
        if cf != cg {
            return Err(format!("x={x}, z={z}: cone {cf} became {cg}"));
        }
        done += 1;
    }
    Ok("50 perturbations".into())
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let quiver = dir.path().join("a2.json");
    std::fs::write(&quiver, Quiver::linear(2).to_json()).map_err(|e| e.to_string())?;
    let run = |workers: &str| {
        Command::new(env!("CARGO_BIN_EXE_hall"))
            .args(["verify", "--quiver"])
            .arg(&quiver)
            .args(["-p", "2", "--bound", "2,2", "--window", "-1,1", "--derived-bound", "1,1"])
            .args(["--checks", "all", "--format", "json", "--workers", workers])
            .output()
    };
    let (one, four) = (run("1").map_err(|e| e.to_string())?, run("4").map_err(|e| e.to_string())?);
    if !one.status.success() || !four.status.success() {
        return Err(format!("exit codes {:?} and {:?}", one.status.code(), four.status.code()));
    }
    if one.stdout != four.stdout {
        return Err("reports differ between 1 and 4 workers".into());
    }
    Ok(format!("{} identical bytes", one.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("gaussian binomial Hall numbers", gaussian_numbers),
        ("riedtmann factor", riedtmann),
        ("unit and associativity", unit_and_assoc),
        ("derived formula on module stalks", stalk),
        ("span path equals formula path", span),
        ("base change on random squares", base_change),
        ("orbit-stabilizer identity", orbit),
        ("finitary ext band", finitary_band),
        ("homotopy invariance of cones", homotopy_invariance),
        ("deterministic verify reports", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
