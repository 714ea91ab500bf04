//! Labels of the nilpotent orbits of gl_n, one per Jordan type.

use strata::catalog::jordan_label;
use strata::Partition;

fn main() -> strata::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(4);
    println!("{:<12} {:<32} {:<8} {:<8} {:<8} ad-bound", "partition", "eta", "q", "1/q", "formula");
    for p in Partition::all(n).into_iter().filter(|p| !p.is_all_ones()) {
        let r = jordan_label(&p)?;
        println!(
            "{:<12} {:<32} {:<8} {:<8} {:<8} {}",
            p.to_string(),
            r.label.eta.to_string(),
            r.label.q.to_string(),
            r.q_paper.to_string(),
            r.q_formula.to_string(),
            if r.negdef_ok { "ok" } else { "exceeded" }
        );
    }
    Ok(())
}
