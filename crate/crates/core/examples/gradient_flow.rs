//! Negative gradient flow of the energy from a non-critical nilpotent of gl_3.

use strata::reps::{Family, RepSpec, RepVector};
use strata::{build_context, gradient_flow, FlowParams, GroupKind};

fn main() -> strata::Result<()> {
    // E12 + 2 E23 + E13 / 2
    let spec = RepSpec::new(Family::Adjoint, 3)?;
    let x = RepVector::from_slice(spec.clone(), &[0.0, 1.0, 0.5, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0])?;
    let ctx = build_context(3, GroupKind::GL)?;
    // roundoff gives a generic nilpotent a small semisimple part that the flow
    // amplifies near the critical set, so the residual floor is around 1e-8 here
    let params = FlowParams { residual_tol: 1e-7, ..FlowParams::default() };
    let r = gradient_flow(&ctx, &spec, &x, &params)?;
    for s in r.samples.iter().step_by(10) {
        println!("t = {:6.2}  F = {:.10}  residual = {:.3e}", s.t, s.energy, s.residual);
    }
    println!(
        "converged = {}, t = {:.2}, steps = {} accepted / {} rejected",
        r.converged,
        r.final_time(),
        r.accepted_steps,
        r.rejected_steps
    );
    println!("limit spectrum = {:?}", r.limit_moment.spectrum);
    println!("largest energy increase = {:.1e}", r.max_energy_increase);
    Ok(())
}
