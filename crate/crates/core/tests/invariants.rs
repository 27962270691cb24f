//! Per-module invariant suites, run at the default seed.

use kernelmap::verify::{run, VerifyOptions};

fn suite(name: &str) {
    let opts = VerifyOptions {
        suites: vec![name.to_string()],
        ..VerifyOptions::default()
    };
    let results = run(&opts).unwrap();
    for r in &results {
        println!("{}", r.line());
    }
    let failed: Vec<_> = results.iter().filter(|r| !r.passed).map(|r| r.line()).collect();
    assert!(failed.is_empty(), "{failed:#?}");
}

#[test]
fn specfun() {
    suite("inv-specfun");
}

#[test]
fn field() {
    suite("inv-field");
}

#[test]
fn poisson() {
    suite("inv-poisson");
}

#[test]
fn represent() {
    suite("inv-represent");
}

#[test]
fn univalence() {
    suite("inv-univalence");
}

#[test]
fn area() {
    suite("inv-area");
}
