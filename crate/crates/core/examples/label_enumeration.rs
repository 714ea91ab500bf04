//! Every stratum label of small representations, largest q first.

use strata::hesselink::{enumerate_labels, DEFAULT_WEIGHT_CAP};
use strata::reps::{Family, RepSpec};

fn main() -> strata::Result<()> {
    for (family, n) in [(Family::Standard, 3), (Family::Dual, 3), (Family::Lambda2, 4), (Family::Adjoint, 2)] {
        let spec = RepSpec::new(family, n)?;
        let e = enumerate_labels(&spec, DEFAULT_WEIGHT_CAP)?;
        println!("{spec}: {} labels, semistable points exist = {}", e.labels.len(), e.includes_zero);
        for l in &e.labels {
            println!("  eta = {:<28} q = {}", l.eta.to_string(), l.q);
        }
    }
    Ok(())
}
