use super::output::Output;
use super::{read_input, CliError, CliResult};
use crate::boxes::json::BoxFile;
use crate::quantum::{
    born_bipartite, born_tripartite, paper_measurements, paper_state, DensityMatrix, DensityMatrixJson, MeasurementPair,
    PaperMeasurements, PaperState,
};
use clap::{Args, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateName {
    GhzMixed,
    QutritMixed,
    LhsPair,
    LhsQubit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasName {
    /// `σ_y` then `-σ_x`.
    SigmaPair,
    /// The two qutrit POVMs.
    AppendixDPovm,
}

impl std::fmt::Display for MeasName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

pub(crate) fn parse_measurements(names: &[MeasName]) -> CliResult<Vec<MeasurementPair>> {
    Ok(names
        .iter()
        .map(|m| match m {
            MeasName::SigmaPair => paper_measurements(PaperMeasurements::SigmaPair),
            MeasName::AppendixDPovm => paper_measurements(PaperMeasurements::AppendixDPovm),
        })
        .collect())
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Density matrix JSON file (`-` reads stdin).
    #[arg(long, conflicts_with = "paper_state")]
    pub state: Option<PathBuf>,
    /// A named state instead of a file.
    #[arg(long)]
    pub paper_state: Option<StateName>,
    /// Visibility for a named state.
    #[arg(long)]
    pub v: Option<f64>,
    /// Hidden value index for `lhs-pair` and `lhs-qubit`.
    #[arg(long, default_value_t = 0)]
    pub lambda: usize,
}

impl StateArgs {
    fn load(&self, tol: f64) -> CliResult<DensityMatrix> {
        if let Some(path) = &self.state {
            let dm: DensityMatrixJson =
                serde_json::from_str(&read_input(path)?).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            return Ok(dm.into_state(tol)?);
        }
        let name = self.paper_state.ok_or_else(|| CliError::input("give --state FILE or --paper-state NAME"))?;
        let v = self.v.ok_or_else(|| CliError::input("--paper-state needs --v"))?;
        let which = match name {
            StateName::GhzMixed => PaperState::GhzMixed,
            StateName::QutritMixed => PaperState::QutritMixed,
            StateName::LhsPair => PaperState::LhsPair { lambda: self.lambda },
            StateName::LhsQubit => PaperState::LhsQubit { lambda: self.lambda },
        };
        Ok(paper_state(which, v)?)
    }
}

#[derive(Debug, Subcommand)]
pub enum QuantumCommand {
    /// Print a density matrix as JSON.
    State(StateArgs),
    /// Box produced by measuring a state, one measurement pair per party.
    Born {
        #[command(flatten)]
        state: StateArgs,
        /// Comma-separated measurement names, two or three parties.
        #[arg(long, value_delimiter = ',', required = true)]
        meas: Vec<MeasName>,
        /// Label stored in the box file.
        #[arg(long, default_value = "")]
        label: String,
    },
}

pub(super) fn command(q: &QuantumCommand, tol: f64) -> CliResult<Output> {
    match q {
        QuantumCommand::State(s) => {
            let rho = s.load(tol)?;
            Ok(Output::json(serde_json::to_value(rho.to_json()).expect("state serialises")))
        }
        QuantumCommand::Born { state, meas, label } => {
            let rho = state.load(tol)?;
            let ms = parse_measurements(meas)?;
            let file = match ms.len() {
                3 => {
                    let m: [MeasurementPair; 3] = ms.try_into().expect("three");
                    let mut f = BoxFile::from_tripartite(&born_tripartite(&rho, &m)?);
                    f.label = label.clone();
                    f
                }
                2 => {
                    let m: [MeasurementPair; 2] = ms.try_into().expect("two");
                    BoxFile::from_bipartite(&born_bipartite(&rho, &m)?, label)
                }
                n => return Err(CliError::input(format!("--meas needs 2 or 3 names, got {n}"))),
            };
            Ok(Output::from_box(&file))
        }
    }
}
