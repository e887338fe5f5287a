#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

/// Every fixture invocation with its documented exit code.
pub const CORPUS: &[(&str, i32)] = &[
    ("potential p2.fan", 0),
    ("potential --equivariant c3.fan", 0),
    ("potential bad_rays.fan", 2),
    ("mirror-map f2.fan", 0),
    ("inverse-mirror-map f2.fan", 0),
    ("semifano-potential f2.fan", 0),
    ("semifano-potential f3.fan", 3),
    ("maslov p1p1.fan", 0),
    ("maslov p1p1.fan --stratum 4 --ray 1", 0),
    ("maslov p1cubed.fan", 0),
    ("missed-divisors p1p1.fan", 0),
    ("restrict c3_restrict.toml", 0),
    ("restrict p1cubed_restrict.toml", 0),
    ("restrict p1p1_restrict.toml", 0),
    ("verify-teleman c2_to_p1.toml", 0),
    ("verify-teleman c3_to_p2.toml", 0),
    ("verify-teleman c4_to_p3.toml", 0),
    ("verify-teleman c4_to_f2.toml", 0),
    ("verify-teleman c3_to_p2_wrong_areas.toml", 1),
    ("ainf check toy.alg", 0),
    ("ainf check curved.alg", 0),
    ("ainf check diagonal.tri", 0),
    ("ainf check bad_algebra.alg", 1),
    ("ainf transfer toy.alg", 0),
    ("ainf transfer curved.alg", 0),
    ("ainf compose diagonal.tri", 0),
    ("ainf obstruction balanced.tri", 0),
    ("ainf obstruction unbalanced.tri", 1),
    ("potential missing.fan", 2),
];

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

/// Splits a corpus line, resolving `*.fan|toml|alg|tri` words against the fixture directory.
pub fn args(line: &str) -> Vec<String> {
    line.split_whitespace()
        .map(|w| {
            if [".fan", ".toml", ".alg", ".tri"].iter().any(|s| w.ends_with(s)) {
                fixture(w).display().to_string()
            } else {
                w.to_string()
            }
        })
        .collect()
}

pub fn eqcorr(extra: &[&str], line: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqcorr"))
        .args(extra)
        .args(args(line))
        .output()
        .expect("spawn eqcorr")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}
