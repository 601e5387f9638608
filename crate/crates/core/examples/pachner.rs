//! 6j tensors and the 2-3 identity on random admissible labelings, with the
//! d weight on the internal edge and with it replaced by 1.

use uqsl21::sixjtv::{pachner23_check, InternalWeight, SixJContext};
use uqsl21::scalar::RootConfig;
use uqsl21::verify::{random_pachner_labelings, VerifyOptions};

fn main() -> uqsl21::Result<()> {
    let opts = VerifyOptions::new(3, 1)?;
    for (den, labels) in random_pachner_labelings(&opts, 3)? {
        let ctx = SixJContext::new(&RootConfig::new(3, den as u64)?);
        let with_d = pachner23_check(&ctx, &labels, InternalWeight::ModifiedDimension)?;
        let with_one = pachner23_check(&ctx, &labels, InternalWeight::One)?;
        println!("{labels}");
        println!("  d on the internal edge: {}", with_d.summary());
        println!("  1 on the internal edge: {}", with_one.summary());
        println!("  6j tensors computed so far: {}", ctx.cached_symbols().len());
    }
    Ok(())
}
