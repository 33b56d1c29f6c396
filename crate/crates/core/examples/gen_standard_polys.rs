//! Regenerates `data/standard_polys.json` from the seeded sampler.
//!
//! `cargo run -p cso-core --example gen_standard_polys > crates/core/data/standard_polys.json`

use cso_core::symmetry::{random_polynomials, STANDARD_SET_MAX_LEN, STANDARD_SET_SEED, STANDARD_SET_SIZE};

fn main() {
    let set = random_polynomials(STANDARD_SET_SEED, STANDARD_SET_SIZE, STANDARD_SET_MAX_LEN);
    println!("{}", serde_json::to_string(&set).expect("polynomials serialize"));
}
