#![allow(dead_code)]

use num_rational::BigRational;
use stratakit_core::ActionSpec;

pub const BUNDLED: [&str; 6] = [
    "example",
    "trivial",
    "z2_line",
    "s1_plane",
    "z2z2_plane",
    "s3_perm",
];

pub fn fixture_text(name: &str) -> String {
    let path = format!("{}/fixtures/{name}.spec", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn fixture(name: &str) -> ActionSpec {
    ActionSpec::load(&fixture_text(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

pub fn ints(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| rat(x, 1)).collect()
}
