//! Labels for SL_n versus GL_n.

use strata::hesselink::{optimal_class_for_group, project_to_sl};
use strata::reps::{Family, RepSpec, RepVector};
use strata::{GroupKind, RationalVector};

fn main() -> strata::Result<()> {
    for n in 2..=4 {
        let spec = RepSpec::new(Family::Standard, n)?;
        let e1 = RepVector::basis(spec.clone(), 0)?;
        let gl = optimal_class_for_group(GroupKind::GL, &spec, &e1)?;
        let sl = optimal_class_for_group(GroupKind::SL, &spec, &e1)?;
        println!(
            "n = {n}: GL label {}, SL label {}",
            gl.label().map(|l| l.torus_eta.to_string()).unwrap_or_default(),
            sl.label().map(|l| l.torus_eta.to_string()).unwrap_or_default()
        );
    }
    let eta = RationalVector::from_ints(&[3, 1, 0, 0]);
    println!("projection of {eta} = {}", project_to_sl(&eta));
    Ok(())
}
