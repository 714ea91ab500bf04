//! Exact optimal classes from the minimum-norm point of the state.

use strata::hesselink::{min_norm_point, state_of};
use strata::reps::{Family, RepSpec, RepVector, DEFAULT_ZERO_TOL};
use strata::{optimal_class, OptimalClass, RationalVector};

fn main() -> strata::Result<()> {
    let spec = RepSpec::new(Family::Adjoint, 3)?;
    let mut coords = vec![0.0; 9];
    coords[1] = 1.0; // E12
    coords[5] = 2.0; // E23
    let v = RepVector::from_slice(spec.clone(), &coords)?;
    let state = state_of(&spec, &v, DEFAULT_ZERO_TOL)?;
    println!("state = {:?}", state.iter().map(|w| &w.0).collect::<Vec<_>>());
    let points: Vec<RationalVector> = state.iter().map(RationalVector::from).collect();
    let cert = min_norm_point(&points)?;
    println!(
        "min-norm point {} with q = {}, certificate valid = {}",
        cert.eta,
        cert.q,
        cert.verify(&points)
    );
    match optimal_class(&spec, &v)? {
        OptimalClass::Unstable(l) => println!("label eta = {}, eta/q = {}", l.eta, l.eta_normalized),
        OptimalClass::Semistable => println!("semistable"),
    }

    let identity = RepVector::from_slice(spec.clone(), &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0])?;
    println!("identity matrix: {:?}", optimal_class(&spec, &identity)?);
    Ok(())
}
