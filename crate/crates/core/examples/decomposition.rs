//! Splitting V(0, alpha) (x) V(n, beta) into simple summands, and the
//! non-semisimple product V(0, alpha) (x) V(0, alpha)*.

use std::sync::Arc;

use uqsl21::catops::{decompose, verify_self_dual_product};
use uqsl21::repmod::{build_typical_rep, tensor};
use uqsl21::scalar::{rat, RootConfig};

fn main() -> uqsl21::Result<()> {
    let (alpha, beta) = (rat(1, 5), rat(3, 5));
    let cfg = RootConfig::covering(5, [&alpha, &beta])?;
    for n in 0..3 {
        let a = Arc::new(build_typical_rep(&cfg, 0, &alpha)?);
        let b = Arc::new(build_typical_rep(&cfg, n, &beta)?);
        let rec = decompose(&Arc::new(tensor(&a, &b)?))?;
        let parts: Vec<String> = rec
            .summands
            .iter()
            .map(|s| format!("{}{}", if s.parity_shift { "Pi " } else { "" }, s.label))
            .collect();
        println!("{} = {}  (resolution of identity: {})", rec.module.name(), parts.join(" + "), rec.verify()?);
    }

    let third = rat(1, 3);
    let cfg = RootConfig::covering(3, [&third])?;
    let report = verify_self_dual_product(&cfg, &third)?;
    for c in report.checks() {
        println!("{} {} {}", if c.pass { "ok  " } else { "FAIL" }, c.id, c.witness);
    }
    Ok(())
}
