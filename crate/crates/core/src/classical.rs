//! Classical channels whose signals are distributions over a finite alphabet,
//! used to show that equal pairwise overlaps do not fix the information a
//! source carries.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::entropy::{spectrum_entropy, validate_distribution, Base, EntropyError, EntropyValue};

const DISTRIBUTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassicalError {
    #[error("priors: {0}")]
    Priors(EntropyError),
    #[error("row {row}: {source}")]
    Row { row: usize, source: EntropyError },
    #[error("{labels} labels, {priors} priors and {rows} rows")]
    CountMismatch {
        labels: usize,
        priors: usize,
        rows: usize,
    },
    #[error("row {row} has {found} outputs, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("index {index} out of range for {len} inputs")]
    IndexOutOfRange { index: usize, len: usize },
}

/// Inputs `x` with priors `p(x)` and conditional output distributions
/// `p(y|x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteChannel {
    labels: Vec<String>,
    priors: Vec<f64>,
    rows: Vec<Vec<f64>>,
}

impl DiscreteChannel {
    pub fn new(labels: Vec<String>, priors: Vec<f64>, rows: Vec<Vec<f64>>) -> Result<Self, ClassicalError> {
        if labels.len() != priors.len() || priors.len() != rows.len() {
            return Err(ClassicalError::CountMismatch {
                labels: labels.len(),
                priors: priors.len(),
                rows: rows.len(),
            });
        }
        validate_distribution(&priors, DISTRIBUTION_TOL).map_err(ClassicalError::Priors)?;
        let width = rows[0].len();
        for (row, r) in rows.iter().enumerate() {
            if r.len() != width {
                return Err(ClassicalError::Ragged {
                    row,
                    expected: width,
                    found: r.len(),
                });
            }
            validate_distribution(r, DISTRIBUTION_TOL)
                .map_err(|source| ClassicalError::Row { row, source })?;
        }
        Ok(DiscreteChannel { labels, priors, rows })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn outputs(&self) -> usize {
        self.rows[0].len()
    }

    /// `p(y) = Σ_x p(x) p(y|x)`.
    pub fn output_distribution(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.outputs()];
        for (p, row) in self.priors.iter().zip(&self.rows) {
            for (o, q) in out.iter_mut().zip(row) {
                *o += p * q;
            }
        }
        out
    }

    fn check_index(&self, index: usize) -> Result<(), ClassicalError> {
        if index >= self.len() {
            return Err(ClassicalError::IndexOutOfRange {
                index,
                len: self.len(),
            });
        }
        Ok(())
    }
}

/// `I(X:Y) = H(Y) - H(Y|X)`.
pub fn mutual_information(ch: &DiscreteChannel, base: Base) -> EntropyValue {
    let h_y = spectrum_entropy(&ch.output_distribution());
    let h_y_given_x: f64 = ch
        .priors
        .iter()
        .zip(&ch.rows)
        .map(|(p, row)| p * spectrum_entropy(row))
        .sum();
    EntropyValue::from_nats((h_y - h_y_given_x).max(0.0), base)
}

/// Bhattacharyya coefficient `Σ_y √(p(y|i) p(y|j))`.
pub fn pairwise_distribution_overlap(ch: &DiscreteChannel, i: usize, j: usize) -> Result<f64, ClassicalError> {
    ch.check_index(i)?;
    ch.check_index(j)?;
    Ok(ch.rows[i]
        .iter()
        .zip(&ch.rows[j])
        .map(|(p, q)| (p * q).sqrt())
        .sum())
}

/// `½ Σ_y |p(y|i) - p(y|j)|`.
pub fn total_variation(ch: &DiscreteChannel, i: usize, j: usize) -> Result<f64, ClassicalError> {
    ch.check_index(i)?;
    ch.check_index(j)?;
    Ok(0.5
        * ch.rows[i]
            .iter()
            .zip(&ch.rows[j])
            .map(|(p, q)| (p - q).abs())
            .sum::<f64>())
}

fn uniform_on(outputs: usize, support: &[usize]) -> Vec<f64> {
    let mut row = vec![0.0; outputs];
    for &y in support {
        row[y] = 1.0 / support.len() as f64;
    }
    row
}

fn labelled(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Signals `A`, `B`, `C` uniform on `{1,2}`, `{2,3}`, `{1,3}`, equiprobable.
pub fn abc_channel() -> DiscreteChannel {
    DiscreteChannel::new(
        labelled(&["A", "B", "C"]),
        vec![1.0 / 3.0; 3],
        vec![uniform_on(3, &[0, 1]), uniform_on(3, &[1, 2]), uniform_on(3, &[0, 2])],
    )
    .unwrap()
}

/// Signals `A'`, `B'`, `C'` uniform on `{1,4}`, `{2,4}`, `{3,4}`, equiprobable.
pub fn primed_channel() -> DiscreteChannel {
    DiscreteChannel::new(
        labelled(&["A'", "B'", "C'"]),
        vec![1.0 / 3.0; 3],
        vec![uniform_on(4, &[0, 3]), uniform_on(4, &[1, 3]), uniform_on(4, &[2, 3])],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_channel_gives_log_k() {
        for k in 1..6 {
            let rows = (0..k).map(|i| uniform_on(k, &[i])).collect();
            let ch = DiscreteChannel::new(
                (0..k).map(|i| alloc::format!("x{i}")).collect(),
                vec![1.0 / k as f64; k],
                rows,
            )
            .unwrap();
            let i = mutual_information(&ch, Base::Nats).nats();
            assert!((i - (k as f64).ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn abc_and_primed_values() {
        let abc = mutual_information(&abc_channel(), Base::Bits).bits();
        assert!((abc - (3f64.log2() - 1.0)).abs() < 1e-10);
        let primed = mutual_information(&primed_channel(), Base::Bits).bits();
        assert!((primed - (0.5 * 6f64.log2() - 0.5)).abs() < 1e-10);
        assert!(primed - abc > 0.2);
    }

    #[test]
    fn overlaps_are_all_one_half() {
        for ch in [abc_channel(), primed_channel()] {
            for (i, j) in [(0, 1), (1, 2), (2, 0)] {
                assert!((pairwise_distribution_overlap(&ch, i, j).unwrap() - 0.5).abs() < 1e-15);
                assert!((total_variation(&ch, i, j).unwrap() - 0.5).abs() < 1e-15);
            }
            assert!((pairwise_distribution_overlap(&ch, 1, 1).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!(matches!(
            pairwise_distribution_overlap(&abc_channel(), 0, 3),
            Err(ClassicalError::IndexOutOfRange { index: 3, len: 3 })
        ));
    }

    #[test]
    fn rejects_invalid_channels() {
        assert!(matches!(
            DiscreteChannel::new(labelled(&["a"]), vec![1.0], vec![vec![0.5, 0.6]]),
            Err(ClassicalError::Row { row: 0, .. })
        ));
        assert!(matches!(
            DiscreteChannel::new(labelled(&["a", "b"]), vec![0.5, 0.5], vec![vec![1.0], vec![0.5, 0.5]]),
            Err(ClassicalError::Ragged { row: 1, .. })
        ));
        assert!(matches!(
            DiscreteChannel::new(labelled(&["a"]), vec![0.9], vec![vec![1.0]]),
            Err(ClassicalError::Priors(_))
        ));
    }
}
