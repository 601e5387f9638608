//! Exact arithmetic in Q(zeta_N): q-powers, quantum integers and the JSON form.

use uqsl21::scalar::{rat, CycScalar, RootConfig};

fn main() -> uqsl21::Result<()> {
    // l = 5 with rational exponents up to denominator 3, so zeta = e^{2 pi i / 15}
    let cfg = RootConfig::new(5, 3)?;
    println!("field order {} of degree {}", cfg.order(), cfg.field().degree());

    let q_third = cfg.q_power(&rat(1, 3))?;
    println!("q^(1/3) cubed is q: {}", q_third.pow(3) == cfg.q_int(1));
    println!("q^l = {}", cfg.q_int(5).approx_string());

    for m in 1..=5 {
        println!("[{m}] = {}", cfg.qint_int(m).approx_string());
    }
    let brace = cfg.brace(&rat(7, 3))?;
    println!("{{7/3}} = {}", brace.approx_string());

    let json = brace.to_json();
    println!("{}", serde_json::to_string(&json).unwrap());
    assert_eq!(CycScalar::from_json(&json)?, brace);
    Ok(())
}
