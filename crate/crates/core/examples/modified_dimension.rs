//! Modified dimensions: the closed formula against the S' ratio of partial traces,
//! and the vanishing at the top of the alcove.

use std::sync::Arc;

use uqsl21::catops::{negligible_rank, Morphism};
use uqsl21::mtrace::{mdim, mdim_via_s_prime, qtrace};
use uqsl21::repmod::{build_typical_rep, SimpleLabel};
use uqsl21::scalar::rat;
use uqsl21::verify::braiding_config;

fn main() -> uqsl21::Result<()> {
    let l = 5;
    for (n, alpha) in [(0, rat(2, 5)), (1, rat(1, 7)), (3, rat(4, 5))] {
        let cfg = braiding_config(l, &[&alpha, &rat(1, 3)])?;
        let label = SimpleLabel::new(n, alpha.clone(), l);
        let closed = mdim(&cfg, &label)?;
        let routed = mdim_via_s_prime(&cfg, n, &alpha)?;
        let v = Arc::new(build_typical_rep(&cfg, n, &alpha)?);
        let qdim = qtrace(&Morphism::identity(&v))?;
        println!("d({label}) = {}  S' route agrees: {}  qdim = {}", closed.approx_string(), closed == routed, qdim.approx_string());
    }

    let cfg = braiding_config(l, &[&rat(1, 5)])?;
    let top = SimpleLabel::new(cfg.l_prime() - 1, rat(1, 5), l);
    let v = Arc::new(build_typical_rep(&cfg, top.n, &top.alpha)?);
    let (dim, negligible) = negligible_rank(&v, &v)?;
    println!("d({top}) = {}; End has dimension {dim}, negligible part {negligible}", mdim(&cfg, &top)?.approx_string());
    Ok(())
}
