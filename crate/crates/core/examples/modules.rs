//! Typical modules V(n, alpha), their relations, duals and tensor products.

use std::sync::Arc;

use uqsl21::repmod::{build_typical_rep, dual, nilpotency_check, tensor, typical_triple, verify_relations};
use uqsl21::scalar::{format_rational, rat, RootConfig};

fn main() -> uqsl21::Result<()> {
    let alpha = rat(1, 3);
    let cfg = RootConfig::covering(5, [&alpha])?;
    let v = Arc::new(build_typical_rep(&cfg, 1, &alpha)?);
    println!("{}: dimension {}", v.name(), v.dim());
    for i in 0..v.dim() {
        let (rho, sigma, p) = typical_triple(1, i);
        let (h1, h2) = v.h_weight(i);
        println!("  ({rho},{sigma},{p}) parity {} weight ({}, {})", v.parity(i), format_rational(h1), format_rational(h2));
    }
    println!("{}", verify_relations(&v).summary());
    println!("{}", nilpotency_check(&v).summary());

    let vd = Arc::new(dual(&v));
    let vv = tensor(&v, &vd)?;
    println!("{}", verify_relations(&vv).summary());
    Ok(())
}
