//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cliff_rbvp::cauchy::{cauchy_transform, plemelj, singular_integral, Diagonal};
use cliff_rbvp::contour::winding_number;
use cliff_rbvp::expr::parse;
use cliff_rbvp::fixtures::{case_a_phi, closed_form_phi, example, example3_phi, ExampleId};
use cliff_rbvp::rbvp::conformal_transport;
use cliff_rbvp::verify::{dirac_residual, probe_points};
use cliff_rbvp::{
    BoundaryFunction, CliffordElement, CliffordRbvp, CliffordSolution, ConformalMaps, Contour,
    HatData, Side, SolveOptions, Status,
};

const N: usize = 512;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

/// Largest componentwise error against a closed form over both probe sets.
fn probe_error(
    sol: &CliffordSolution,
    constants: &[Complex64],
    interior: &[Complex64],
    exterior: &[Complex64],
    closed: impl Fn(Complex64, Side) -> cliff_rbvp::Result<CliffordElement>,
) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for (points, side) in [(interior, Side::Plus), (exterior, Side::Minus)] {
        for &z in points {
            let got = sol.evaluate_at(z, constants).map_err(e)?;
            let want = closed(z, side).map_err(e)?;
            worst = worst.max(got.max_abs_diff(want));
        }
    }
    Ok(worst)
}

fn fixed_closed_form(
    id: ExampleId,
) -> impl Fn(Complex64, Side) -> cliff_rbvp::Result<CliffordElement> {
    move |z, side| Ok(closed_form_phi(id, z, side)?.expect("fixed closed form"))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let ex = example(ExampleId::Ex1b, N).map_err(e)?;
    let sol = ex.problem.solve(&SolveOptions::default()).map_err(e)?;
    ensure(sol.status == Status::Unique, || {
        format!("status {:?}", sol.status)
    })?;
    let err = probe_error(
        &sol,
        &[],
        &ex.interior_probes,
        &ex.exterior_probes,
        fixed_closed_form(ex.id),
    )?;
    let elapsed = start.elapsed();
    ensure(err < 1e-6, || format!("max probe error {err:e}"))?;
    ensure(elapsed < Duration::from_secs(5), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "max probe error {err:.2e}, {:.2} s",
        elapsed.as_secs_f64()
    ))
}

fn criterion_2() -> Outcome {
    let ex = example(ExampleId::Ex1c, N).map_err(e)?;
    let sol = ex.problem.solve(&SolveOptions::default()).map_err(e)?;
    ensure(sol.status == Status::Unsolvable, || {
        format!("status {:?}", sol.status)
    })?;
    let target = c(0.0, 4.0 * PI);
    let hit = sol
        .subproblems
        .iter()
        .flat_map(|s| s.residuals.iter())
        .map(|r| (r - target).norm() / target.norm())
        .fold(f64::INFINITY, f64::min);
    ensure(hit < 1e-6, || {
        format!("no residual within 1e-6 of 4πi (closest rel {hit:e})")
    })?;
    ensure(sol.subproblems[0].solvable, || {
        "first sub-problem not flagged solvable".into()
    })?;
    Ok(format!(
        "4πi residual rel error {hit:.1e}; first sub-problem solvable"
    ))
}

fn criterion_3() -> Outcome {
    let ex = example(ExampleId::Ex1d, N).map_err(e)?;
    let sol = ex.problem.solve(&SolveOptions::default()).map_err(e)?;
    ensure(sol.status == Status::Unique, || {
        format!("status {:?}", sol.status)
    })?;
    let cond = sol
        .subproblems
        .iter()
        .flat_map(|s| s.residuals.iter())
        .map(|r| r.norm())
        .fold(0.0, f64::max);
    ensure(cond < 1e-7, || format!("solvability residual {cond:e}"))?;
    let err = probe_error(
        &sol,
        &[],
        &ex.interior_probes,
        &ex.exterior_probes,
        fixed_closed_form(ex.id),
    )?;
    ensure(err < 1e-6, || format!("max probe error {err:e}"))?;
    Ok(format!("residuals {cond:.1e}, max probe error {err:.2e}"))
}

fn criterion_4() -> Outcome {
    let ex = example(ExampleId::Ex1a, N).map_err(e)?;
    let sol = ex.problem.solve(&SolveOptions::default()).map_err(e)?;
    ensure(sol.status == Status::Family, || {
        format!("status {:?}", sol.status)
    })?;
    ensure(sol.free_constant_count() == 2, || {
        format!("{} free constants", sol.free_constant_count())
    })?;
    let target_constants = [0.7, -0.3, 1.1, 0.45];
    let mut points = Vec::new();
    let mut targets = Vec::new();
    for (probes, side) in [
        (&ex.interior_probes, Side::Plus),
        (&ex.exterior_probes, Side::Minus),
    ] {
        for &z in probes.iter() {
            points.push(z);
            targets.push(case_a_phi(z, side, target_constants).map_err(e)?);
        }
    }
    let (constants, fit) = sol.fit_constants(&points, &targets).map_err(e)?;
    ensure(fit < 1e-6, || format!("fit residual {fit:e}"))?;
    let zero = [c(0.0, 0.0); 2];
    let bres = ex.problem.boundary_residual(&sol, &zero).map_err(e)?;
    ensure(bres < 1e-6, || {
        format!("particular boundary residual {bres:e}")
    })?;
    let fitted = ex.problem.boundary_residual(&sol, &constants).map_err(e)?;
    ensure(fitted < 1e-6, || {
        format!("fitted boundary residual {fitted:e}")
    })?;
    Ok(format!(
        "fit residual {fit:.2e}, particular boundary residual {bres:.2e}"
    ))
}

fn criterion_5() -> Outcome {
    let ex = example(ExampleId::Ex2, N).map_err(e)?;
    let sol = ex.problem.solve(&SolveOptions::default()).map_err(e)?;
    ensure(sol.status == Status::Unique, || {
        format!("status {:?}", sol.status)
    })?;
    let err = probe_error(
        &sol,
        &[],
        &ex.interior_probes,
        &ex.exterior_probes,
        fixed_closed_form(ex.id),
    )?;
    ensure(err < 1e-6, || format!("max probe error {err:e}"))?;
    Ok(format!("max probe error {err:.2e}"))
}

/// Real L² Gram matrix of the given fields sampled at `points`.
fn gram(fields: &[Vec<CliffordElement>]) -> DMatrix<f64> {
    let m = fields.len();
    DMatrix::from_fn(m, m, |i, j| {
        fields[i]
            .iter()
            .zip(&fields[j])
            .map(|(a, b)| {
                let (a, b) = (a.to_array(), b.to_array());
                a.iter().zip(&b).map(|(x, y)| x * y).sum::<f64>()
            })
            .sum::<f64>()
            / fields[i].len() as f64
    })
}

fn criterion_6() -> Outcome {
    let ex = example(ExampleId::Ex3, N).map_err(e)?;
    let members = 3;
    let opts = SolveOptions {
        family_count: members,
        ..SolveOptions::default()
    };
    let sol = ex.problem.solve(&opts).map_err(e)?;
    ensure(sol.status == Status::Family, || {
        format!("status {:?}", sol.status)
    })?;
    let cond = sol
        .subproblems
        .iter()
        .flat_map(|s| s.residuals.iter())
        .map(|r| r.norm())
        .fold(0.0, f64::max);
    ensure(cond < 1e-8, || format!("condition residual {cond:e}"))?;
    let contour = &ex.problem.contour;
    let gram_points: Vec<Complex64> = (0..64)
        .flat_map(|j| {
            let a = 2.0 * PI * (j as f64 + 0.5) / 64.0;
            [Complex64::from_polar(0.5, a), Complex64::from_polar(2.0, a)]
        })
        .collect();
    let mut worst = 0.0f64;
    let mut dirac = 0.0f64;
    let mut samples = Vec::new();
    for m in 1..=members {
        let mut constants = vec![c(0.0, 0.0); members];
        constants[m - 1] = c(1.0, 0.0);
        let err = probe_error(
            &sol,
            &constants,
            &ex.interior_probes,
            &ex.exterior_probes,
            |z, side| example3_phi(z, side, m as u32),
        )?;
        worst = worst.max(err);
        let r = dirac_residual(
            contour,
            |z| sol.evaluate_at(z, &constants),
            &probe_points(contour),
            1e-3,
        )
        .map_err(e)?;
        dirac = dirac.max(r);
        samples.push(
            gram_points
                .iter()
                .map(|&z| sol.evaluate_at(z, &constants))
                .collect::<cliff_rbvp::Result<Vec<_>>>()
                .map_err(e)?,
        );
    }
    ensure(worst < 1e-6, || format!("max member error {worst:e}"))?;
    ensure(dirac < 1e-5, || format!("Dirac residual {dirac:e}"))?;
    let eig = gram(&samples).symmetric_eigen().eigenvalues;
    let max = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let rank = eig.iter().filter(|&&l| l > 1e-10 * max).count();
    ensure(rank == members, || format!("Gram rank {rank}"))?;
    ensure(max / min < 1e3, || {
        format!("Gram condition {:e}", max / min)
    })?;
    Ok(format!(
        "conditions {cond:.1e}, member error {worst:.2e}, Dirac {dirac:.2e}, Gram rank {rank} cond {:.1}",
        max / min
    ))
}

fn random_element(rng: &mut ChaCha8Rng) -> CliffordElement {
    CliffordElement::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

fn random_point_off_circle(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let z = c(rng.gen_range(-2.5..2.5), rng.gen_range(-2.5..2.5));
        if (z.norm() - 1.0).abs() > 0.2 {
            return z;
        }
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let k = Contour::unit_circle(N).map_err(e)?;

    // Plemelj jump
    let density = BoundaryFunction::from_fn(&k, |t| (t * 0.7).exp() + 1.0 / (t - 1.8));
    let p = plemelj(&k, &density).map_err(e)?;
    let jump = (0..N)
        .map(|i| (p.plus.values()[i] - p.minus.values()[i] - density.values()[i]).norm())
        .fold(0.0, f64::max);
    ensure(jump < 1e-14, || format!("Plemelj jump error {jump:e}"))?;

    // S² = I
    let mut s2 = 0.0f64;
    for f in [
        |t: Complex64| (t * 0.5).exp(),
        |t: Complex64| 1.0 / (t - 2.0) + t.conj().powi(2),
        |t: Complex64| (t + t.conj()).cos(),
    ] {
        let u = BoundaryFunction::from_fn(&k, f);
        let once = singular_integral(&k, &u, Diagonal::Spectral).map_err(e)?;
        let twice = singular_integral(&k, &once, Diagonal::Spectral).map_err(e)?;
        s2 = s2.max((&twice - &u).max_abs());
    }
    ensure(s2 < 1e-8, || format!("S² - I = {s2:e}"))?;

    // residue oracle for C[Σ r/(τ - p)]
    let mut cauchy = 0.0f64;
    for _ in 0..20 {
        let terms: Vec<(Complex64, Complex64)> = (0..3)
            .map(|_| {
                (
                    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    random_point_off_circle(&mut rng),
                )
            })
            .collect();
        let u = BoundaryFunction::from_fn(&k, |t| terms.iter().map(|&(r, p)| r / (t - p)).sum());
        for _ in 0..5 {
            let z = random_point_off_circle(&mut rng);
            let inside = z.norm() < 1.0;
            let exact: Complex64 = terms
                .iter()
                .map(|&(r, p)| match (inside, p.norm() < 1.0) {
                    (true, false) => r / (z - p),
                    (false, true) => r / (p - z),
                    _ => c(0.0, 0.0),
                })
                .sum();
            let got = cauchy_transform(&k, &u, z).map_err(e)?;
            cauchy = cauchy.max((got - exact).norm());
        }
    }
    ensure(cauchy < 1e-9, || format!("Cauchy oracle error {cauchy:e}"))?;

    // argument principle oracle
    for case in 0..50 {
        let zeros: Vec<Complex64> = (0..rng.gen_range(0..4))
            .map(|_| random_point_off_circle(&mut rng))
            .collect();
        let poles: Vec<Complex64> = (0..rng.gen_range(0..4))
            .map(|_| random_point_off_circle(&mut rng))
            .collect();
        let scale = c(rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0));
        let f = k.sample(|t| {
            scale * zeros.iter().map(|&a| t - a).product::<Complex64>()
                / poles.iter().map(|&b| t - b).product::<Complex64>()
        });
        let expected = zeros.iter().filter(|a| a.norm() < 1.0).count() as i64
            - poles.iter().filter(|b| b.norm() < 1.0).count() as i64;
        let got = winding_number(&f).map_err(e)?.value;
        ensure(got == expected, || {
            format!("case {case}: winding {got}, expected {expected}")
        })?;
    }

    // algebra axioms
    let mut axioms = 0.0f64;
    for _ in 0..1000 {
        let (a, b, d) = (
            random_element(&mut rng),
            random_element(&mut rng),
            random_element(&mut rng),
        );
        axioms = axioms
            .max(((a * b) * d).max_abs_diff(a * (b * d)))
            .max((a * b).conj().max_abs_diff(b.conj() * a.conj()))
            .max((a * a.conj()).max_abs_diff(CliffordElement::scalar(a.norm_sqr())));
    }
    ensure(axioms < 1e-12, || format!("algebra axiom error {axioms:e}"))?;
    Ok(format!(
        "jump {jump:.0e}, S²-I {s2:.1e}, Cauchy {cauchy:.1e}, 50 windings, axioms {axioms:.0e}"
    ))
}

fn criterion_8() -> Outcome {
    let mut prev: Option<f64> = None;
    let mut line = Vec::new();
    for n in [128, 256, 512] {
        let ex = example(ExampleId::Ex1b, n).map_err(e)?;
        let sol = ex.problem.solve(&SolveOptions::default()).map_err(e)?;
        let r = ex.problem.boundary_residual(&sol, &[]).map_err(e)?;
        if let Some(p) = prev {
            if p >= 1e-10 {
                ensure(r <= p * 1e-2 || r < 1e-10, || {
                    format!("N = {n}: {r:e} after {p:e}")
                })?;
            }
        }
        line.push(format!("N={n}: {r:.1e}"));
        prev = Some(r);
    }
    Ok(line.join(", "))
}

fn criterion_9() -> Outcome {
    let k = Arc::new(Contour::circle(c(0.0, 0.0), 2.0, N).map_err(e)?);
    let coefficient = HatData::constant(&k, c(1.0, 0.5), c(-0.5, 1.0));
    let data = HatData::from_exprs(
        &k,
        &parse("2/t + t/4").map_err(e)?,
        &parse("1/(t-3)").map_err(e)?,
    )
    .map_err(e)?;
    let problem = CliffordRbvp::new(k, coefficient, data, true).map_err(e)?;
    let maps = ConformalMaps {
        chi_plus: parse("z/2").map_err(e)?,
        chi_minus: parse("z/2").map_err(e)?,
        phi_plus: parse("2*z").map_err(e)?,
        phi_minus: parse("2*z").map_err(e)?,
    };
    let sol = conformal_transport(&problem, &maps)
        .and_then(|t| t.solve(&SolveOptions::default()))
        .map_err(e)?;
    let r = problem.boundary_residual(&sol, &[]).map_err(e)?;
    ensure(r < 1e-6, || format!("boundary residual {r:e}"))?;
    if sol.status != Status::Unique {
        return fail(format!("status {:?}", sol.status));
    }
    Ok(format!("boundary residual {r:.2e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("example 1b matches closed form", criterion_1),
        ("example 1c unsolvable with 4πi residual", criterion_2),
        ("example 1d unique, closed form", criterion_3),
        ("example 1a family with fitted constants", criterion_4),
        ("example 2 constant coefficients", criterion_5),
        ("example 3 family, Dirac, Gram rank", criterion_6),
        ("property suites", criterion_7),
        ("convergence under doubling", criterion_8),
        ("conformal transport to the unit circle", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} PASS: {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL: {name} ({why})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
