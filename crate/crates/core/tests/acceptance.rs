//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness and exits nonzero when any criterion fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};
use std::time::Instant;

use cone_spectra::asymptotics::{
    bracketing_check, counting_sweep, fiber_count, fit_log_slope, log_spaced, monotonicity_sweep, positivity_check,
    CountingCurve, SweepPolicy, ThresholdReference,
};
use cone_spectra::discretize::{build_mesh, TruncatedDomain};
use cone_spectra::eigensolve::dense::generalized_eigenvalues;
use cone_spectra::eigensolve::{
    count_below, lowest_eigenpairs, CsrMatrix, PencilMeta, SymmetricPencil, TripletBuilder,
};
use cone_spectra::fibers::{inverse_square_slope, predicted_slope, ConeConfig};
use cone_spectra::model1d::{
    delta_interval_ground, delta_interval_spectrum_extrapolated, inverse_square_counts, threshold_decay,
    BoundaryCondition, IntervalDeltaProblem, InverseSquareProblem,
};
use cone_spectra::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BCS: [BoundaryCondition; 2] = [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann];

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion<'a> = (usize, &'static str, Box<dyn Fn() -> Result<Outcome> + 'a>);

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

/// Slope of the inverse-square counting function over nine decades.
fn one_dimensional_slopes() -> Result<Outcome> {
    let t0 = Instant::now();
    let depths = log_spaced(1e-3, 1e-12, 91);
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for c in [0.5, 1.0, 2.0] {
        for bc in BCS {
            let counts = inverse_square_counts(&InverseSquareProblem::new(c, bc)?, &depths)?;
            let pts: Vec<(f64, usize)> = depths.iter().copied().zip(counts).collect();
            let fit = fit_log_slope(&pts)?;
            let want = inverse_square_slope(c);
            let dev = (fit.slope - want).abs() / want;
            worst = worst.max(dev);
            parts.push(format!(
                "c={c} {bc}: {:.4} vs {:.4} ({:+.1}%)",
                fit.slope,
                want,
                100.0 * (fit.slope / want - 1.0)
            ));
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    outcome(
        worst <= 0.02 && secs <= 60.0,
        format!("{}; {secs:.1} s", parts.join("; ")),
    )
}

fn slope_identity() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let theta = (i as f64 + 0.5) / 100.0 * FRAC_PI_2;
        let direct = (1.0 / (4.0 * theta.sin().powi(2)) - 0.25).sqrt() / (2.0 * PI);
        worst = worst.max((predicted_slope(theta)? - direct).abs());
    }
    outcome(worst <= 1e-14, format!("max difference {worst:.2e} over 100 apertures"))
}

fn sweeps() -> Result<Vec<(f64, CountingCurve, f64)>> {
    let mut out = Vec::new();
    for theta in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3] {
        let cfg = ConeConfig::new(3, theta, 2.0)?;
        let pol = SweepPolicy::new(2.0, 1e-1, 1e-4, 13)?;
        let t0 = Instant::now();
        let curve = counting_sweep(&cfg, &pol, 1)?;
        out.push((theta, curve, t0.elapsed().as_secs_f64()));
    }
    Ok(out)
}

fn two_dimensional_slopes(curves: &[(f64, CountingCurve, f64)]) -> Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (theta, c, secs) in curves {
        let dev = c.relative_deviation();
        ok &= dev.abs() <= 0.30 && *secs <= 1800.0;
        parts.push(format!(
            "theta={:.4}: {:.4} vs {:.4} ({:+.0}%, N {}..{}, {secs:.0} s)",
            theta,
            c.slope,
            c.predicted,
            100.0 * dev,
            c.samples.first().map_or(0, |s| s.count),
            c.samples.last().map_or(0, |s| s.count)
        ));
    }
    // cotθ decreases with θ, so the slopes must strictly decrease
    let ordered = curves.windows(2).all(|w| w[0].1.slope > w[1].1.slope);
    parts.push(format!("strict ordering {}", if ordered { "holds" } else { "fails" }));
    outcome(ok && ordered, parts.join("; "))
}

fn sandwich(curves: &[(f64, CountingCurve, f64)]) -> Result<Outcome> {
    let mut parts = Vec::new();
    let mut ok = true;
    let mut samples = 0;
    for (_, c, _) in curves {
        samples += c.samples.len();
        for s in c.lower_bound_violations() {
            ok = false;
            parts.push(format!("E={:e}: lower {} > N {}", s.e, s.lower, s.count));
        }
    }
    parts.push(format!("lower <= N at all {samples} sweep samples: {ok}"));
    let cfg = ConeConfig::new(3, FRAC_PI_4, 2.0)?;
    for e in [1e-2, 1e-3, 1e-4] {
        let rep = bracketing_check(&cfg, e, 4.0, 8.0 * e.ln().abs(), 0.1)?;
        ok &= rep.ordered();
        parts.push(format!(
            "E={e:e}: lower {} <= N {} <= upper {} (outer {})",
            rep.lower.count, rep.count, rep.upper, rep.outer
        ));
        for v in rep.violations() {
            parts.push(format!("violated: {v}"));
        }
    }
    outcome(ok, parts.join("; "))
}

fn monotonicity() -> Result<Outcome> {
    let t0 = Instant::now();
    let thetas: Vec<f64> = (0..12).map(|i| PI / 12.0 + i as f64 * (PI / 3.0) / 11.0).collect();
    let dom = TruncatedDomain::reference(12.0, 6.0)?.with_back(3.0)?;
    let mesh = build_mesh(&dom, 0.06)?;
    let (ns, nt) = mesh.grid_shape();
    let table = monotonicity_sweep(2.0, &thetas, 3, &mesh)?;
    let found: usize = table.energies.iter().map(|row| row.iter().flatten().count()).sum();
    let secs = t0.elapsed().as_secs_f64();
    let big = ns >= 200 && nt >= 200;
    outcome(
        big && table.violations.is_empty() && secs <= 300.0,
        format!(
            "{ns}x{nt} grid, {found} eigenvalues below threshold over 12 apertures, {} violations; {secs:.0} s",
            table.violations.len()
        ),
    )
}

fn positivity() -> Result<Outcome> {
    let t0 = Instant::now();
    let mut ok = true;
    let mut checked = 0;
    let mut closest = f64::INFINITY;
    for alpha in [1.0, 2.0] {
        for theta in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3] {
            for (d, l_max) in [(3, 3), (4, 1), (5, 0)] {
                let cfg = ConeConfig::new(d, theta, alpha)?;
                let mesh = build_mesh(&TruncatedDomain::with_radius(&cfg, 20.0 / alpha)?, 0.05)?;
                let rep = positivity_check(&cfg, l_max, &mesh)?;
                ok &= rep.ok();
                for f in &rep.fibers {
                    checked += 1;
                    closest = closest.min(f.lowest - rep.threshold);
                }
            }
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    outcome(
        ok && secs <= 600.0,
        format!("{checked} fiber pencils, smallest margin above -a^2/4 {closest:.3e}; {secs:.0} s"),
    )
}

fn existence() -> Result<Outcome> {
    let cfg = ConeConfig::new(3, FRAC_PI_4, 2.0)?;
    let mut counts = Vec::new();
    let mut below_continuum = Vec::new();
    for r in [60.0, 120.0] {
        let dom = TruncatedDomain::with_radius(&cfg, r)?;
        counts.push(fiber_count(&cfg, 0, &dom, 0.2, 1e-12, ThresholdReference::Mesh)?.count);
        below_continuum.push(fiber_count(&cfg, 0, &dom, 0.2, 1e-12, ThresholdReference::Continuum)?.count);
    }
    outcome(
        counts[0] >= 3 && counts[1] > counts[0],
        format!(
            "R=60: {} below the mesh threshold ({} below -1); R=120: {} ({} below -1)",
            counts[0], below_continuum[0], counts[1], below_continuum[1]
        ),
    )
}

fn model_oracles() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut lowest_second = f64::INFINITY;
    for alpha in [1.0, 1.5, 2.0, 3.0, 4.0] {
        for half_length in [2.5, 3.0, 5.0, 8.0, 12.0] {
            for bc in BCS {
                let p = IntervalDeltaProblem::new(alpha, half_length, bc)?;
                // finer grids lose digits to round-off in the O(1/h²) stiffness
                let fd = delta_interval_spectrum_extrapolated(&p, 2, 4_000)?;
                lowest_second = lowest_second.min(fd.energies[1]);
                if let Some(s) = delta_interval_ground(&p) {
                    worst = worst.max((fd.energies[0] / s.energy - 1.0).abs());
                }
            }
        }
    }
    let mut r2 = f64::INFINITY;
    for alpha in [1.0, 2.0, 4.0] {
        let lengths: Vec<f64> = (0..12).map(|i| (5.0 + 45.0 * i as f64 / 11.0) / alpha).collect();
        for bc in BCS {
            let d = threshold_decay(alpha, bc, &lengths)?;
            r2 = r2.min(d.r_squared);
        }
    }
    outcome(
        worst <= 1e-8 && lowest_second >= -1e-6 && r2 >= 0.999,
        format!("max relative FD difference {worst:.2e}; min E2 {lowest_second:.3e}; min R^2 {r2:.6}"),
    )
}

fn random_pencil(rng: &mut ChaCha8Rng, n: usize) -> SymmetricPencil {
    let mut t = TripletBuilder::new(n);
    for i in 0..n {
        t.push(i, i, rng.gen_range(-3.0..3.0));
        for _ in 0..3 {
            let j = rng.gen_range(0..n);
            if j != i {
                t.push_sym(i, j, rng.gen_range(-1.0..1.0));
            }
        }
    }
    let mass: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
    SymmetricPencil::new(t.build(), CsrMatrix::diagonal(&mass), PencilMeta::default()).unwrap()
}

fn square_laplacian(n: usize) -> SymmetricPencil {
    let h = 1.0 / (n + 1) as f64;
    let idx = |i: usize, j: usize| i * n + j;
    let mut t = TripletBuilder::new(n * n);
    for i in 0..n {
        for j in 0..n {
            t.push(idx(i, j), idx(i, j), 4.0 / (h * h));
            if i + 1 < n {
                t.push_sym(idx(i, j), idx(i + 1, j), -1.0 / (h * h));
            }
            if j + 1 < n {
                t.push_sym(idx(i, j), idx(i, j + 1), -1.0 / (h * h));
            }
        }
    }
    SymmetricPencil::new(t.build(), CsrMatrix::identity(n * n), PencilMeta::named("square")).unwrap()
}

fn solver() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut mismatches = 0;
    let mut shift_failures = 0;
    let mut comparisons = 0;
    for _ in 0..50 {
        let p = random_pencil(&mut rng, 200);
        let ev = generalized_eigenvalues(&p.a, &p.m)?;
        for _ in 0..5 {
            let mu: f64 = rng.gen_range(-4.0..4.0);
            if ev.iter().any(|x| (x - mu).abs() < 1e-9) {
                continue;
            }
            comparisons += 1;
            let exact = ev.iter().filter(|&&x| x < mu).count();
            mismatches += usize::from(count_below(&p, mu)?.count != exact);
            let c: f64 = rng.gen_range(-2.0..2.0);
            let shifted = SymmetricPencil::new(p.a.add_scaled(&p.m, -c), p.m.clone(), PencilMeta::default())?;
            shift_failures += usize::from(count_below(&shifted, mu - c)?.count != exact);
        }
    }
    let n = 199;
    let h = 1.0 / (n + 1) as f64;
    let mut exact: Vec<f64> = (1..4)
        .flat_map(|i| (1..4).map(move |j| (i, j)))
        .map(|(i, j)| {
            let s = |k: i32| (k as f64 * PI * h / 2.0).sin().powi(2);
            4.0 / (h * h) * (s(i) + s(j))
        })
        .collect();
    exact.sort_by(f64::total_cmp);
    let r = lowest_eigenpairs(&square_laplacian(n), 4, 0.0)?;
    let lap: f64 = r
        .eigenvalues
        .iter()
        .zip(&exact)
        .map(|(a, b)| (a / b - 1.0).abs())
        .fold(0.0, f64::max);
    outcome(
        mismatches == 0 && shift_failures == 0 && lap <= 1e-5,
        format!(
            "{comparisons} inertia counts on 50 random 200x200 pencils: {mismatches} mismatches, \
             {shift_failures} shift failures; Laplacian max relative error {lap:.2e}"
        ),
    )
}

fn main() {
    let t0 = Instant::now();
    let curves = sweeps();
    let criteria: Vec<Criterion> = vec![
        (1, "1D slope law", Box::new(one_dimensional_slopes)),
        (2, "slope identity", Box::new(slope_identity)),
        (
            3,
            "2D slope recovery",
            Box::new(|| {
                curves
                    .as_ref()
                    .map_err(clone_err)
                    .and_then(|c| two_dimensional_slopes(c))
            }),
        ),
        (
            4,
            "certified sandwich",
            Box::new(|| curves.as_ref().map_err(clone_err).and_then(|c| sandwich(c))),
        ),
        (5, "monotonicity in the aperture", Box::new(monotonicity)),
        (6, "positivity of the higher fibers", Box::new(positivity)),
        (7, "existence of three bound states", Box::new(existence)),
        (8, "model-operator oracles", Box::new(model_oracles)),
        (9, "solver correctness", Box::new(solver)),
    ];
    let mut failed = 0;
    for (n, name, f) in &criteria {
        let (pass, detail) = match f() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!(
            "{} criterion {n} ({name}): {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!(
        "{} of {} criteria passed in {:.0} s",
        criteria.len() - failed,
        criteria.len(),
        t0.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

fn clone_err(e: &cone_spectra::Error) -> cone_spectra::Error {
    cone_spectra::Error::Configuration(format!("sweep failed: {e}"))
}
