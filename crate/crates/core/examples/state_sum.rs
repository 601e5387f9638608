//! The state sum on two tetrahedra glued along their boundary, and under a
//! coboundary change of the cocycle.

use uqsl21::charb::curly_d;
use uqsl21::sixjtv::{tv_state_sum, HTriangulation, HTriangulationData, SixJContext};

const DOUBLED: &str = include_str!("../tests/fixtures/doubled_tetrahedron.json");
const SHIFTED: &str = include_str!("../tests/fixtures/doubled_tetrahedron_coboundary.json");

fn main() -> uqsl21::Result<()> {
    let tri = HTriangulation::from_data(&HTriangulationData::from_json(DOUBLED)?)?;
    let ctx = SixJContext::new(&tri.cfg);
    let r = tv_state_sum(&ctx, &tri)?;
    println!("{}", serde_json::to_string_pretty(&r.to_json()).unwrap());
    println!("1/D = {}", curly_d(&tri.cfg).inv()?.approx_string());

    let shifted = HTriangulation::from_data(&HTriangulationData::from_json(SHIFTED)?)?;
    println!("after a coboundary change: {}", tv_state_sum(&ctx, &shifted)?.value == r.value);
    Ok(())
}
