//! JSON file formats for ensembles, Gram matrices and deformation reports.

use ensdist::deform::DeformationReport;
use ensdist::{Ensemble, EnsembleError, GramMatrix, HermitianMatrix, Matrix, RealMatrix, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// `{"dim": d, "probs": [..], "states": [[[re, im], ..], ..]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleFile {
    pub dim: usize,
    pub probs: Vec<f64>,
    pub states: Vec<Vec<[f64; 2]>>,
}

impl EnsembleFile {
    pub fn from_ensemble(e: &Ensemble) -> Self {
        EnsembleFile {
            dim: e.dim(),
            probs: e.probs().to_vec(),
            states: e
                .states()
                .iter()
                .map(|s| s.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    pub fn to_ensemble(&self, tol: f64) -> Result<Ensemble, EnsembleError> {
        let states = self
            .states
            .iter()
            .map(|s| s.iter().map(|&[re, im]| C64::new(re, im)).collect())
            .collect();
        Ensemble::with_tolerance(self.dim, states, self.probs.clone(), tol)
    }
}

/// `{"entries": [[[re, im], ..], ..]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GramFile {
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl GramFile {
    pub fn from_gram(g: &GramMatrix) -> Self {
        let n = g.dim();
        GramFile {
            entries: (0..n)
                .map(|i| (0..n).map(|j| [g[(i, j)].re, g[(i, j)].im]).collect())
                .collect(),
        }
    }

    /// Parses the entries as a Hermitian matrix; positivity and trace are
    /// left to the caller.
    pub fn to_hermitian(&self) -> Result<HermitianMatrix, CliError> {
        let rows: Vec<Vec<C64>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|&[re, im]| C64::new(re, im)).collect())
            .collect();
        let m = Matrix::from_rows(&rows).map_err(|e| CliError::parse(format!("gram matrix: {e}")))?;
        HermitianMatrix::new(m).map_err(|e| CliError::parse(format!("gram matrix: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub kind: String,
    pub method: String,
    pub entropy_before: f64,
    pub entropy_after: f64,
    pub overlaps_before: Vec<Vec<f64>>,
    pub overlaps_after: Vec<Vec<f64>>,
    pub source: EnsembleFile,
    pub result: EnsembleFile,
    pub seed: u64,
}

impl ReportFile {
    pub fn new(report: &DeformationReport, seed: u64) -> Self {
        ReportFile {
            kind: report.kind.as_str().to_string(),
            method: report.method.as_str().to_string(),
            entropy_before: report.entropy_before,
            entropy_after: report.entropy_after,
            overlaps_before: report.source.pairwise_overlaps().to_rows(),
            overlaps_after: report.result.pairwise_overlaps().to_rows(),
            source: EnsembleFile::from_ensemble(&report.source),
            result: EnsembleFile::from_ensemble(&report.result),
            seed,
        }
    }
}

pub fn overlap_rows(m: &RealMatrix) -> Vec<Vec<f64>> {
    m.to_rows()
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
