//! Critical nilpotent Lie brackets and their derivations.

use strata::catalog::{bracket_preset, critical_bracket_check, BracketPreset};
use strata::{build_context, gradient_flow, BracketTensor, FlowParams, GroupKind};

fn main() -> strata::Result<()> {
    let ctx = build_context(3, GroupKind::GL)?;
    let heis = bracket_preset(BracketPreset::Heisenberg, 3)?;
    let c = critical_bracket_check(&ctx, &heis)?;
    println!("heisenberg: m = {}", c.beta.matrix);
    println!(
        "F = {}, residual = {:.1e}, beta+ derivation = {}, positive = {}",
        c.beta.energy, c.criticality_residual, c.is_derivation, c.positive
    );

    // the filiform chain is not critical as given; flow it first
    let n = 5;
    let ctx = build_context(n, GroupKind::GL)?;
    let chain = bracket_preset(BracketPreset::Chain, n)?;
    let params = FlowParams { residual_tol: 1e-12, ..FlowParams::default() };
    let v = chain.to_rep_vector()?;
    let r = gradient_flow(&ctx, v.spec(), &v, &params)?;
    let limit = BracketTensor::from_rep_vector(&r.limit)?;
    let c = critical_bracket_check(&ctx, &limit)?;
    println!(
        "chain({n}) after t = {:.1}: residual = {:.1e}, derivation = {}, filtration = {:?}",
        r.final_time(),
        c.criticality_residual,
        c.is_derivation,
        c.derivation.filtration_dims
    );
    Ok(())
}
