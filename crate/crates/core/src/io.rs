//! JSON algebra files and command-line coefficient parsing.
//!
//! ```json
//! { "dim": 2, "label": "l1(Z2)",
//!   "mult": [[0, 0, 0, [1, 0]], [0, 1, 1, [1, 0]], [1, 0, 1, [1, 0]], [1, 1, 0, [1, 0]]],
//!   "norm": { "type": "l1" } }
//! ```
//!
//! Each `mult` entry `[i, j, k, [re, im]]` is one structure constant of
//! `e_i e_j`. Operator norms give `rep` as one matrix per basis element,
//! rows of `[re, im]` pairs.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{build_algebra, linf_sum, linf_sum_many, Algebra, MultTable, NormKind, OpDomain};
use crate::catalog;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, C64};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub dim: usize,
    #[serde(default)]
    pub label: String,
    pub mult: Vec<(usize, usize, usize, [f64; 2])>,
    pub norm: NormFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum NormFile {
    L1 {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<f64>>,
    },
    Opnorm {
        domain: OpDomain,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<f64>>,
        rep: Vec<Vec<Vec<[f64; 2]>>>,
    },
    LinfSum {
        left: Box<AlgebraFile>,
        right: Box<AlgebraFile>,
    },
}

fn cplx(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

impl AlgebraFile {
    pub fn build(&self) -> Result<Arc<Algebra>> {
        let kind = match &self.norm {
            NormFile::L1 { weights } => NormKind::L1 { weights: weights.clone() },
            NormFile::Opnorm { domain, weights, rep } => {
                let rep = rep.iter().map(|m| matrix(m)).collect::<Result<Vec<_>>>()?;
                NormKind::OpNorm { domain: *domain, weights: weights.clone(), rep }
            }
            NormFile::LinfSum { left, right } => {
                let (alg, _) = linf_sum(&left.build()?, &right.build()?)?;
                if alg.dim() != self.dim {
                    return Err(Error::InconsistentDimensions(format!(
                        "sum of dimension {} declared as {}",
                        alg.dim(),
                        self.dim
                    )));
                }
                return Ok(alg);
            }
        };
        let mut table = MultTable::new(self.dim);
        for &(i, j, k, v) in &self.mult {
            if i >= self.dim || j >= self.dim || k >= self.dim {
                return Err(Error::InconsistentDimensions(format!("index in ({i}, {j}, {k}) exceeds dimension")));
            }
            table.add(i, j, k, cplx(v));
        }
        let identity = self.identity.as_ref().map(|u| CVector::from_iterator(u.len(), u.iter().map(|&p| cplx(p))));
        build_algebra(table, kind, identity, self.label.clone())
    }

    pub fn from_algebra(alg: &Algebra) -> Self {
        let mult = alg.terms().iter().map(|t| (t.i, t.j, t.k, pair(t.value))).collect();
        let norm = match alg.norm_kind() {
            NormKind::L1 { weights } => NormFile::L1 { weights: weights.clone() },
            NormKind::OpNorm { domain, weights, rep } => NormFile::Opnorm {
                domain: *domain,
                weights: weights.clone(),
                rep: rep.iter().map(|m| m.row_iter().map(|r| r.iter().map(|&z| pair(z)).collect()).collect()).collect(),
            },
            NormKind::LinfSum { left, right } => NormFile::LinfSum {
                left: Box::new(AlgebraFile::from_algebra(left)),
                right: Box::new(AlgebraFile::from_algebra(right)),
            },
        };
        AlgebraFile {
            dim: alg.dim(),
            label: alg.label().to_string(),
            mult,
            norm,
            identity: alg.identity().map(|u| u.iter().map(|&z| pair(z)).collect()),
        }
    }
}

fn matrix(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    if r == 0 || rows.iter().any(|row| row.len() != c) {
        return Err(Error::InconsistentDimensions("ragged or empty representation matrix".into()));
    }
    Ok(CMatrix::from_fn(r, c, |i, j| cplx(rows[i][j])))
}

pub fn parse_algebra(json: &str) -> Result<Arc<Algebra>> {
    let file: AlgebraFile = serde_json::from_str(json).map_err(|e| Error::InvalidInput(e.to_string()))?;
    file.build()
}

pub fn algebra_to_json(alg: &Algebra) -> String {
    serde_json::to_string_pretty(&AlgebraFile::from_algebra(alg)).expect("algebra files serialize")
}

pub fn load_algebra(path: &Path) -> Result<Arc<Algebra>> {
    parse_algebra(&std::fs::read_to_string(path)?)
}

/// A catalog name such as `group:3`, a path to an algebra file, or an
/// l∞ sum of those written `group:2+scalars`.
pub fn resolve_algebra(spec: &str) -> Result<Arc<Algebra>> {
    if let Some(alg) = catalog::by_name(spec) {
        return Ok(alg);
    }
    let path = Path::new(spec);
    if path.exists() {
        return load_algebra(path);
    }
    if spec.contains('+') {
        let parts = spec.split('+').map(resolve_algebra).collect::<Result<Vec<_>>>()?;
        return Ok(linf_sum_many(&parts)?.0);
    }
    Err(Error::InvalidInput(format!(
        "`{spec}` is neither a file nor a catalog algebra ({})",
        catalog::NAMES.join(", ")
    )))
}

/// Comma-separated complex numbers such as `1,0.5-2i,i`.
pub fn parse_coeffs(s: &str) -> Result<Vec<C64>> {
    s.split(',')
        .map(|part| {
            let t: String = part.chars().filter(|c| !c.is_whitespace()).collect();
            let t = match t.as_str() {
                "i" | "+i" => "1i".to_string(),
                "-i" => "-1i".to_string(),
                _ => t,
            };
            t.parse::<C64>().map_err(|_| Error::InvalidInput(format!("cannot parse `{part}` as a complex number")))
        })
        .collect()
}
