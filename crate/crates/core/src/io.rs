//! JSON shapes shared by the library and the command line.

use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hesselink::{HesselinkLabel, OptimalClass};
use crate::linalg::Matrix;
use crate::rational::{format_rational, parse_rational, RationalVector};

/// Serializes a matrix as an array of rows.
pub fn serialize_matrix<S: Serializer>(m: &Matrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(m.nrows()))?;
    for row in matrix_rows(m) {
        seq.serialize_element(&row)?;
    }
    seq.end()
}

pub fn matrix_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

/// Row-major nested arrays back to a matrix.
pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<Matrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|row| row.len() != c) {
        return Err(Error::DimensionMismatch {
            expected: c,
            got: bad.len(),
        });
    }
    Ok(Matrix::from_fn(r, c, |i, j| rows[i][j]))
}

/// Label JSON: rationals are `"p/q"` strings.
///
/// `torus_eta` keeps the unsorted coordinates so that `stratum` can reuse a
/// label computed for a specific vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelDocument {
    pub eta: Vec<String>,
    pub q: String,
    pub eta_normalized: Vec<String>,
    pub semistable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus_eta: Option<Vec<String>>,
}

impl LabelDocument {
    pub fn from_label(label: &HesselinkLabel) -> Self {
        LabelDocument {
            eta: label.eta.to_strings(),
            q: format_rational(&label.q),
            eta_normalized: label.eta_normalized.to_strings(),
            semistable: false,
            torus_eta: Some(label.torus_eta.to_strings()),
        }
    }

    pub fn from_class(class: &OptimalClass, n: usize) -> Self {
        match class {
            OptimalClass::Unstable(label) => Self::from_label(label),
            OptimalClass::Semistable => {
                let zero = RationalVector::zeros(n).to_strings();
                LabelDocument {
                    eta: zero.clone(),
                    q: "0/1".into(),
                    eta_normalized: zero.clone(),
                    semistable: true,
                    torus_eta: Some(zero),
                }
            }
        }
    }

    /// Rebuilds the label; `torus_eta` wins over `eta` when present.
    pub fn to_label(&self) -> Result<HesselinkLabel> {
        if self.semistable {
            return Err(Error::ZeroLabel);
        }
        let coords = self.torus_eta.as_ref().unwrap_or(&self.eta);
        let label = HesselinkLabel::from_eta(RationalVector::parse_strings(coords)?)?;
        let q = parse_rational(&self.q)?;
        if q != label.q {
            return Err(Error::Parse(format!(
                "label q = {} does not match ⟨η, η⟩ = {}",
                self.q,
                format_rational(&label.q)
            )));
        }
        Ok(label)
    }
}
