//! Grading of a vector by a label and membership in the strata pieces.

use strata::hesselink::stratum_membership;
use strata::reps::{RepSpec, RepVector, WeightVector};
use strata::{optimal_class, HesselinkLabel, RationalVector};

fn main() -> strata::Result<()> {
    let weights = [[2, 0], [1, 1], [0, 2], [-1, 1]].map(|w| WeightVector(w.to_vec()));
    let spec = RepSpec::torus(weights.to_vec())?;
    let v = RepVector::from_slice(spec.clone(), &[1.0, 1.0, 0.0, 0.5])?;

    let own = optimal_class(&spec, &v)?;
    let label = own.label().expect("unstable").clone();
    println!("optimal label: eta = {}, q = {}", label.torus_eta, label.q);

    let other = HesselinkLabel::from_eta(RationalVector::from_ints(&[1, 0]))?;
    for l in [&label, &other] {
        let r = stratum_membership(&spec, &v, l)?;
        println!("label {}:", l.torus_eta);
        for (w, g) in &r.grading {
            println!("  weight {:?}  r = {g}", w.0);
        }
        println!(
            "  in V>=0 = {}, in U>=0 = {}, optimal class matches = {}, v0 = {:?}",
            r.in_v_ge0,
            r.in_u_ge0,
            r.optimal_class_matches,
            r.v0.coords().as_slice()
        );
    }
    Ok(())
}
