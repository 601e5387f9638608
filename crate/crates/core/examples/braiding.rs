//! The braiding c = tau R K between typical modules: intertwining, Yang-Baxter and
//! the closed commutativity coefficients.

use std::sync::Arc;

use uqsl21::braid::{braiding, verify_commutativity, yang_baxter_residual};
use uqsl21::repmod::build_typical_rep;
use uqsl21::scalar::rat;
use uqsl21::verify::braiding_config;

fn main() -> uqsl21::Result<()> {
    let (alpha, beta) = (rat(1, 5), rat(2, 5));
    // the K factor needs q^(alpha beta), so the configuration covers the products too
    let cfg = braiding_config(5, &[&alpha, &beta])?;
    let v = Arc::new(build_typical_rep(&cfg, 0, &alpha)?);
    let w = Arc::new(build_typical_rep(&cfg, 1, &beta)?);

    let c = braiding(&v, &w)?;
    let inv = c.inverse()?;
    println!("c_{{V,W}} intertwines: {}", c.morphism.is_intertwiner());
    println!("c^-1 c = 1: {}", inv.compose(&c.morphism)?.matrix().is_identity());
    println!("Yang-Baxter residual on V^3 vanishes: {}", yang_baxter_residual(&v)?.is_zero());
    println!("{}", verify_commutativity(&cfg, (1, &beta), (0, &alpha))?.summary());
    Ok(())
}
