//! Every quantitative claim checked in one call, printed as a table.

use tribox::cli::{reproduce, ReproduceOptions};

pub fn run() -> tribox::Result<()> {
    let report = reproduce(ReproduceOptions::default());
    print!("{}", report.table());
    if !report.all_passed() {
        return Err(tribox::Error::Input(format!("failed: {:?}", report.failed)));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> tribox::Result<()> {
    run()
}
