use std::process::ExitCode;

use anyhow::{bail, Result};
use tomoctx::GridSpec;

use crate::output::write_json;
use crate::VerifyArgs;

pub fn run(args: &VerifyArgs) -> Result<ExitCode> {
    let grid = match args.grid.as_deref() {
        None => GridSpec::default(),
        Some(&[a, b, g]) => GridSpec::new(a, b, g)?,
        Some(other) => bail!("--grid takes three sizes, got {}", other.len()),
    };
    let report = tomoctx::verify::run(&grid)?;
    write_json(args.output.as_deref(), &report)?;
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!(
            "check failed: {} (max error {:e} > {:e})",
            c.name, c.max_error, c.tolerance
        );
    }
    Ok(if report.all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
