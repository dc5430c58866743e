//! Sweep V and print a CSV of the Mermin value, local membership and the
//! d = 3 verdict, as the `sweep` subcommand does.

use tribox::boxes::{Cut, FamilyKind};
use tribox::cli::{run_sweep, Analysis, AnalysisParams, SweepSpec};

pub fn run() -> tribox::Result<()> {
    let spec = SweepSpec::new(FamilyKind::Mermin, 0.3, 0.6, 7, &[Analysis::Mermin, Analysis::MembershipLocal, Analysis::Dimension])?;
    let params = AnalysisParams { d: Some(3), cut: Some(Cut::AvsBC), ..AnalysisParams::default() };
    let rows = run_sweep(&spec, &params).map_err(|e| tribox::Error::Input(e.message))?;
    println!("v,mermin,fully_local,d3");
    for r in rows {
        let d3 = &r.results["dimension"]["A|BC"][0]["status"];
        println!(
            "{:.2},{},{},{}",
            r.v,
            r.results["mermin"]["value"],
            r.results["membership-local"]["feasible"],
            d3.as_str().unwrap_or("?")
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> tribox::Result<()> {
    run()
}
