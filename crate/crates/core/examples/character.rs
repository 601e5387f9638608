//! chi_q, the constant D and the b-map, with the character identities checked
//! against solver multiplicities.

use uqsl21::charb::{b_map, character_table, curly_d, verify_b_identity, verify_multiplicativity, ModuleCache};
use uqsl21::repmod::SimpleLabel;
use uqsl21::scalar::{rat, RootConfig};

fn main() -> uqsl21::Result<()> {
    for l in [3, 4, 5] {
        let cfg = RootConfig::new(l, 1)?;
        let table = character_table(&cfg)?;
        println!("l = {l}: D = {}, closed form agrees: {}", curly_d(&cfg).approx_string(), table["closedFormAgrees"]);
    }

    let cfg = RootConfig::new(3, 5)?;
    let label = SimpleLabel::new(1, rat(2, 5), 3);
    println!("b({label}) = {}", b_map(&cfg, &label)?.approx_string());

    let mut cache = ModuleCache::new(&cfg);
    let left = SimpleLabel::new(1, rat(1, 5), 3);
    println!("{}", verify_multiplicativity(&mut cache, &left, &label)?.summary());
    println!("{}", verify_b_identity(&cfg, &rat(1, 5), &rat(2, 5))?.summary());
    Ok(())
}
