//! Compares the limit spectrum of the gradient flow with the exact label.

use strata::catalog::jordan_vector;
use strata::hesselink::kn_label_via_flow;
use strata::{build_context, FlowParams, GroupKind, Partition};

fn main() -> strata::Result<()> {
    let params = FlowParams::default();
    for n in 2..=4 {
        let ctx = build_context(n, GroupKind::GL)?;
        for p in Partition::all(n).into_iter().filter(|p| !p.is_all_ones()) {
            let x = jordan_vector(&p)?;
            let c = kn_label_via_flow(&ctx, x.spec(), &x, &params)?;
            println!(
                "({p}) exact {}  flow {:?}  deviation {:.1e}  matched {}",
                c.hesselink.eta, c.spectrum, c.max_deviation, c.matched
            );
        }
    }
    Ok(())
}
