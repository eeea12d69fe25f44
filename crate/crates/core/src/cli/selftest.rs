//! Fast end-to-end checks against closed forms and dense solves.

use std::f64::consts::FRAC_PI_4;

use crate::discretize::{assemble_fiber_pencil, assemble_reference_pencil, build_mesh, TruncatedDomain};
use crate::eigensolve::count_below;
use crate::eigensolve::dense::generalized_eigenvalues;
use crate::error::Result;
use crate::fibers::{gamma, multiplicity, ConeConfig};
use crate::model1d::{delta_interval_ground, BoundaryCondition, IntervalDeltaProblem};

type Check = (&'static str, fn() -> Result<bool>);

pub(super) fn run() -> Result<i32> {
    let checks: [Check; 5] = [
        ("fiber coefficients", fibers),
        ("interval secular root", secular),
        ("pencil symmetry", symmetry),
        ("inertia matches dense spectrum", inertia),
        ("reference pencil matches direct assembly", reference),
    ];
    let mut failed = 0;
    for (name, f) in checks {
        let ok = match f() {
            Ok(ok) => ok,
            Err(e) => {
                eprintln!("  {name}: {e}");
                false
            }
        };
        println!("{} {name}", if ok { "ok  " } else { "FAIL" });
        failed += usize::from(!ok);
    }
    Ok(if failed == 0 { 0 } else { 1 })
}

fn fibers() -> Result<bool> {
    Ok(gamma(3, 1)? == 0.75 && gamma(4, 0)? == 0.0 && multiplicity(3, 1)? == 2 && multiplicity(5, 2)? == 9)
}

fn secular() -> Result<bool> {
    let p = IntervalDeltaProblem::new(2.0, 3.0, BoundaryCondition::Neumann)?;
    // κ = α/2 · (1 + 2e^{-2κL}) to leading order, so the gap is -4e^{-αL}
    let s = match delta_interval_ground(&p) {
        Some(s) => s,
        None => return Ok(false),
    };
    let approx = -4.0 * (-6.0f64).exp();
    Ok(s.residual.abs() < 1e-12 && (s.gap / approx - 1.0).abs() < 0.05)
}

fn small_fiber() -> Result<crate::eigensolve::SymmetricPencil> {
    let cfg = ConeConfig::new(3, FRAC_PI_4, 2.0)?;
    let mesh = build_mesh(&TruncatedDomain::rotated(FRAC_PI_4, 4.0, 2.0)?, 0.25)?;
    assemble_fiber_pencil(&cfg, 0, &mesh)
}

fn symmetry() -> Result<bool> {
    let p = small_fiber()?;
    Ok(p.a.is_symmetric() && p.m.is_symmetric())
}

fn inertia() -> Result<bool> {
    let p = small_fiber()?;
    let ev = generalized_eigenvalues(&p.a, &p.m)?;
    for mu in [-1.5, -1.0, -0.5, 0.0, 1.0] {
        let dense = ev.iter().filter(|&&x| x < mu).count();
        if count_below(&p, mu)?.count != dense {
            return Ok(false);
        }
    }
    Ok(true)
}

fn reference() -> Result<bool> {
    let cfg = ConeConfig::new(3, FRAC_PI_4, 2.0)?;
    let mesh = build_mesh(&TruncatedDomain::reference(4.0, 2.0)?, 0.25)?;
    let r = assemble_reference_pencil(3, &mesh)?.at(FRAC_PI_4, 2.0)?;
    let direct = build_mesh(&TruncatedDomain::rotated(FRAC_PI_4, 4.0, 2.0)?, 0.25)?;
    let d = assemble_fiber_pencil(&cfg, 0, &direct)?;
    let a = generalized_eigenvalues(&r.a, &r.m)?;
    let b = generalized_eigenvalues(&d.a, &d.m)?;
    Ok(a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= 1e-9 * (1.0 + y.abs())))
}
