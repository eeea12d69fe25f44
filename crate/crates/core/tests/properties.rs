//! Randomized checks of the structural invariants.

use std::f64::consts::{FRAC_PI_2, PI};

use cone_spectra::asymptotics::{fiber_count, ThresholdReference};
use cone_spectra::discretize::{assemble_fiber_pencil, build_mesh, TruncatedDomain};
use cone_spectra::eigensolve::dense::generalized_eigenvalues;
use cone_spectra::eigensolve::{count_below, CsrMatrix, PencilMeta, SymmetricPencil, TripletBuilder};
use cone_spectra::fibers::{
    angular_eigenvalue, binomial, gamma, multiplicity, predicted_slope, to_meridian, to_reference, to_rotated,
    ConeConfig,
};
use cone_spectra::model1d::{
    delta_interval_ground, inverse_square_count, BoundaryCondition, IntervalDeltaProblem, InverseSquareProblem,
};
use proptest::prelude::*;

fn aperture() -> impl Strategy<Value = f64> {
    0.05..(FRAC_PI_2 - 0.05)
}

/// Monomials of degree `deg` in `vars` variables, by enumeration.
fn monomials(vars: u32, deg: u32) -> u64 {
    if vars == 1 {
        return 1;
    }
    (0..=deg).map(|k| monomials(vars - 1, deg - k)).sum()
}

#[test]
fn multiplicities_match_harmonic_dimensions() {
    for d in 3..=7u32 {
        let vars = d - 1;
        assert_eq!(multiplicity(d, 0).unwrap(), 1);
        let mut total = 0;
        for l in 0..=8u32 {
            let harmonic = monomials(vars, l) - if l >= 2 { monomials(vars, l - 2) } else { 0 };
            assert_eq!(multiplicity(d, l).unwrap(), harmonic, "d = {d}, l = {l}");
            total += harmonic;
            let (d_, l_) = (d as i64, l as i64);
            assert_eq!(total, binomial(d_ + l_ - 2, d_ - 2) + binomial(d_ + l_ - 3, d_ - 2));
        }
    }
}

proptest! {
    #[test]
    fn gamma_is_nonnegative_and_increasing(d in 3u32..12, l in 0u32..40) {
        prop_assume!((d, l) != (3, 0));
        let g = gamma(d, l).unwrap();
        prop_assert!(g >= 0.0);
        prop_assert!(gamma(d, l + 1).unwrap() > g);
        prop_assert!(angular_eigenvalue(d, l + 1).unwrap() >= angular_eigenvalue(d, l).unwrap());
    }

    #[test]
    fn rotation_round_trip(theta in aperture(), r in 0.0..100.0f64, z in -100.0..100.0f64) {
        let (r2, z2) = to_meridian(to_rotated((r, z), theta), theta);
        prop_assert!((r2 - r).abs() <= 1e-12 * (1.0 + r.abs()));
        prop_assert!((z2 - z).abs() <= 1e-12 * (1.0 + z.abs()));
    }

    #[test]
    fn reference_map_keeps_the_boundary(theta in aperture(), s in -50.0..50.0f64) {
        // boundary point of the inclined half-plane
        let t = -s * theta.tan();
        let (a, b) = to_reference((s, t), theta);
        let q = std::f64::consts::FRAC_PI_4;
        prop_assert!((a * q.sin() + b * q.cos()).abs() <= 1e-12 * (1.0 + s.abs()) * (1.0 + theta.tan()));
    }

    #[test]
    fn slope_identity(theta in aperture()) {
        let direct = (1.0 / (4.0 * theta.sin().powi(2)) - 0.25).sqrt() / (2.0 * PI);
        prop_assert!((predicted_slope(theta).unwrap() - direct).abs() <= 1e-14);
    }

    #[test]
    fn neumann_lies_below_dirichlet(alpha in 0.2..6.0f64, half_length in 0.2..20.0f64) {
        let n = delta_interval_ground(&IntervalDeltaProblem::new(alpha, half_length, BoundaryCondition::Neumann).unwrap());
        let d = delta_interval_ground(&IntervalDeltaProblem::new(alpha, half_length, BoundaryCondition::Dirichlet).unwrap());
        let n = n.expect("Neumann always binds");
        if let Some(d) = d {
            // the gaps keep full precision where the energies round together
            prop_assert!(n.gap < d.gap);
        }
        prop_assert!(n.energy <= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inverse_square_counts_are_monotone(c in 0.3..3.0f64, a in -11.0..-2.0f64, b in -11.0..-2.0f64) {
        let (hi, lo) = (10f64.powf(a.max(b)), 10f64.powf(a.min(b)));
        for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
            let p = InverseSquareProblem::new(c, bc).unwrap();
            prop_assert!(inverse_square_count(&p, lo).unwrap() >= inverse_square_count(&p, hi).unwrap());
            let x = 4.0 * (c / lo).sqrt();
            let once = inverse_square_count(&p.with_x_max(x).unwrap(), lo).unwrap();
            let twice = inverse_square_count(&p.with_x_max(2.0 * x).unwrap(), lo).unwrap();
            prop_assert_eq!(once, twice);
        }
    }

    #[test]
    fn shift_invariance(seed in any::<u64>(), shift in -3.0..3.0f64, mu in -3.0..3.0f64) {
        let p = random_pencil(seed, 40);
        let shifted = SymmetricPencil::new(p.a.add_scaled(&p.m, -shift), p.m.clone(), PencilMeta::default()).unwrap();
        prop_assert_eq!(count_below(&shifted, mu).unwrap().count, count_below(&p, mu + shift).unwrap().count);
    }

    #[test]
    fn inertia_matches_dense(seed in any::<u64>(), mu in -4.0..4.0f64) {
        let p = random_pencil(seed, 30);
        let ev = generalized_eigenvalues(&p.a, &p.m).unwrap();
        prop_assume!(ev.iter().all(|x| (x - mu).abs() > 1e-9));
        prop_assert_eq!(count_below(&p, mu).unwrap().count, ev.iter().filter(|&&x| x < mu).count());
    }
}

/// Sparse symmetric indefinite pencil with diagonal positive mass.
fn random_pencil(seed: u64, n: usize) -> SymmetricPencil {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut t = TripletBuilder::new(n);
    for i in 0..n {
        t.push(i, i, rng.gen_range(-2.0..2.0));
        for _ in 0..2 {
            let j = rng.gen_range(0..n);
            if j != i {
                t.push_sym(i, j, rng.gen_range(-1.0..1.0));
            }
        }
    }
    let mass: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
    SymmetricPencil::new(t.build(), CsrMatrix::diagonal(&mass), PencilMeta::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn fiber_pencils_are_symmetric_with_positive_mass(theta in aperture(), alpha in 0.5..4.0f64, h in 0.15..0.3f64) {
        let cfg = ConeConfig::new(3, theta, alpha).unwrap();
        let extent_t = 2.5f64.max(8.0 * h);
        let mesh = build_mesh(&TruncatedDomain::rotated(theta, 5.0, extent_t).unwrap(), h).unwrap();
        let p = assemble_fiber_pencil(&cfg, 0, &mesh).unwrap();
        prop_assert!(p.a.is_symmetric());
        prop_assert!(p.m.is_diagonal());
        prop_assert!(p.m.diag().iter().all(|&m| m > 0.0));
    }

    #[test]
    fn coupling_changes_only_the_ray_diagonal(theta in aperture(), alpha in 0.5..4.0f64, scale in 0.1..5.0f64) {
        let mesh = build_mesh(&TruncatedDomain::rotated(theta, 5.0, 2.5).unwrap(), 0.25).unwrap();
        let a = assemble_fiber_pencil(&ConeConfig::new(3, theta, alpha).unwrap(), 0, &mesh).unwrap();
        let b = assemble_fiber_pencil(&ConeConfig::new(3, theta, alpha * scale).unwrap(), 0, &mesh).unwrap();
        let ray: std::collections::HashSet<usize> = mesh.ray_nodes().collect();
        let diff = b.a.add_scaled(&a.a, -1.0);
        for (i, j, v) in diff.triplets() {
            if v.abs() > 1e-12 * a.a.norm_inf() {
                prop_assert!(i == j && ray.contains(&i), "entry ({}, {}) changed by {}", i, j, v);
            }
        }
        prop_assert_eq!(a.m.values(), b.m.values());
    }

    #[test]
    fn counts_grow_as_the_depth_shrinks(theta in 0.3..0.9f64, e1 in 1e-4..0.3f64, e2 in 1e-4..0.3f64) {
        let cfg = ConeConfig::new(3, theta, 2.0).unwrap();
        let dom = TruncatedDomain::with_radius(&cfg, 12.0).unwrap();
        let (deep, shallow) = (e1.max(e2), e1.min(e2));
        let n_deep = fiber_count(&cfg, 0, &dom, 0.2, deep, ThresholdReference::Mesh).unwrap();
        let n_shallow = fiber_count(&cfg, 0, &dom, 0.2, shallow, ThresholdReference::Mesh).unwrap();
        prop_assert!(n_shallow.count >= n_deep.count);
    }
}

#[test]
fn assembly_and_counting_are_deterministic() {
    let cfg = ConeConfig::new(3, 0.6, 2.0).unwrap();
    let mesh = build_mesh(&TruncatedDomain::rotated(0.6, 6.0, 3.0).unwrap(), 0.2).unwrap();
    let a = assemble_fiber_pencil(&cfg, 0, &mesh).unwrap();
    let b = assemble_fiber_pencil(&cfg, 0, &mesh).unwrap();
    assert_eq!(a.a.values(), b.a.values());
    assert_eq!(a.m.values(), b.m.values());
    let ca = count_below(&a, -0.99).unwrap();
    let cb = count_below(&b, -0.99).unwrap();
    assert_eq!(ca.count, cb.count);
}
