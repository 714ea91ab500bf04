//! The gradient, group and metric flows describe the same trajectory.

use strata::catalog::{bracket_preset, BracketPreset};
use strata::flows::verify_flow_equivalence;
use strata::reps::{Family, RepSpec, RepVector};
use strata::{build_context, FlowParams, GroupKind, Matrix};

fn main() -> strata::Result<()> {
    let h0 = Matrix::from_row_slice(3, 3, &[1.1, 0.2, 0.0, -0.1, 0.9, 0.3, 0.05, 0.0, 1.2]);
    let mut adjoint = vec![0.0; 9];
    adjoint[1] = 1.0;
    adjoint[5] = 1.0;
    let cases = [
        ("standard e1", RepVector::basis(RepSpec::new(Family::Standard, 3)?, 0)?),
        ("adjoint E12 + E23", RepVector::from_slice(RepSpec::new(Family::Adjoint, 3)?, &adjoint)?),
        ("heisenberg bracket", bracket_preset(BracketPreset::Heisenberg, 3)?.to_rep_vector()?),
    ];
    let ctx = build_context(3, GroupKind::GL)?;
    for (name, v) in &cases {
        let r = verify_flow_equivalence(&ctx, v.spec(), v, &h0, 5.0, &FlowParams::default())?;
        println!(
            "{name}: {} samples, max dev v = {:.2e}, max dev S = {:.2e}, passed = {}",
            r.samples, r.max_dev_v, r.max_dev_s, r.passed
        );
    }
    Ok(())
}
