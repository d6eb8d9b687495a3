//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Set `COSPEC_ORDER9_CORPUS` to a graph6 file of all order-9 graphs to
//! use an external corpus for base pair discovery; otherwise it is generated.

use std::process::ExitCode;

use cospec_cli::checks::{run_check, Context, CHECK_IDS};

fn main() -> ExitCode {
    let corpus = std::env::var_os("COSPEC_ORDER9_CORPUS").map(Into::into);
    let ctx = Context::new(corpus);
    let mut failed = 0;
    println!("running {} acceptance criteria", CHECK_IDS.len());
    for id in CHECK_IDS {
        let outcome = run_check(&ctx, id);
        println!("{}", outcome.line());
        failed += usize::from(!outcome.passed);
    }
    println!("acceptance: {} passed, {failed} failed", CHECK_IDS.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
