//! Moment map, energy and criticality residual across the built-in families.

use strata::moment::{closed_form_moment, criticality_residual};
use strata::reps::{Family, RepSpec, RepVector};
use strata::{build_context, moment, GroupKind};

fn main() -> strata::Result<()> {
    let n = 3;
    let ctx = build_context(n, GroupKind::GL)?;
    for family in Family::BUILT_IN {
        let spec = RepSpec::new(family, n)?;
        let coords: Vec<f64> = (0..spec.dim()).map(|k| ((k * 7 + 3) % 5) as f64 - 2.0).collect();
        let v = RepVector::from_slice(spec.clone(), &coords)?;
        let m = moment(&ctx, &spec, &v)?;
        let closed = closed_form_moment(&spec, &v)?;
        println!(
            "{spec}: F = {:.6}, residual = {:.3e}, |generic - closed| = {:.1e}",
            m.energy,
            criticality_residual(&ctx, &spec, &v)?,
            (&m.matrix - &closed.matrix).norm()
        );
    }

    // a nilpotent matrix: m(E12) = diag(1, -1)
    let e12 = RepVector::from_slice(RepSpec::new(Family::Adjoint, 2)?, &[0.0, 1.0, 0.0, 0.0])?;
    let ctx2 = build_context(2, GroupKind::GL)?;
    println!("m(E12) = {}", moment(&ctx2, e12.spec(), &e12)?.matrix);
    Ok(())
}
