//! Braid weights: label-indexed invertible matrices for braid group
//! generators, enhancing the counting invariant of closed braids by the
//! multiset of traces.
//!
//! A weight assigns an invertible `m x m` matrix `sigma_j^{x,y}` to each
//! generator `j` and label pair `(x, y)`. Verification checks the labeled
//! braid relation
//! `sigma_j^{x,y} sigma_{j+1}^{x_y,z} sigma_j^{y^x,z^{x_y}} =
//!  sigma_{j+1}^{y,z} sigma_j^{x,z^y} sigma_{j+1}^{x_{z^y},y_z}`
//! for adjacent generators and far commutativity for `|j - k| >= 2`.
//! (The source material prints the far-commutativity side condition as
//! `|j - k| < 2`, which contradicts the braid group presentation —
//! adjacent generators satisfy the braid relation instead — so the
//! verifier enforces the `>= 2` reading and additionally reports the
//! literal `< 2` reading whenever the two disagree on a candidate.)

use crate::birack::Birack;
use crate::error::WeightError;
use crate::exec::{map_chunks, Mode};
use crate::qweight::{AxiomCheck, SignatureMultiset, VerifyReport};
use crate::ring::{LaurentPoly, Matrix, Scalar, VarSet, Zp};
use crate::tangle::BraidWord;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Braid weight over any scalar ring, with cached inverses.
#[derive(Debug, Clone, PartialEq)]
pub struct BraidWeight<T: Scalar> {
    birack: Birack,
    strands: usize,
    dim: usize,
    sigma: Vec<Matrix<T>>,     // index (j-1)*m*m + x*m + y
    sigma_inv: Vec<Matrix<T>>, // cached inverses
}

impl<T: Scalar> BraidWeight<T> {
    pub fn new(
        birack: Birack,
        strands: usize,
        dim: usize,
        sigma: Vec<Matrix<T>>,
    ) -> Result<Self, WeightError> {
        let m = birack.n();
        if strands < 2 {
            return Err(WeightError::BadTables("need at least two strands".into()));
        }
        if sigma.len() != (strands - 1) * m * m {
            return Err(WeightError::BadTables(format!(
                "need {} sigma blocks, got {}",
                (strands - 1) * m * m,
                sigma.len()
            )));
        }
        for b in &sigma {
            if b.rows() != dim || b.cols() != dim {
                return Err(WeightError::BadTables(format!(
                    "sigma block is {}x{}, expected {dim}x{dim}",
                    b.rows(),
                    b.cols()
                )));
            }
        }
        let sigma_inv: Result<Vec<_>, _> = sigma.iter().map(|b| b.inverse()).collect();
        Ok(BraidWeight {
            birack,
            strands,
            dim,
            sigma,
            sigma_inv: sigma_inv?,
        })
    }

    pub fn birack(&self) -> &Birack {
        &self.birack
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `sigma_j^{x,y}` with 1-based generator `j`, 0-based labels.
    pub fn sigma(&self, j: usize, x: usize, y: usize) -> &Matrix<T> {
        let m = self.birack.n();
        &self.sigma[(j - 1) * m * m + x * m + y]
    }

    pub fn sigma_inv(&self, j: usize, x: usize, y: usize) -> &Matrix<T> {
        let m = self.birack.n();
        &self.sigma_inv[(j - 1) * m * m + x * m + y]
    }

    /// Verify the labeled braid relations and far commutativity.
    pub fn verify(&self) -> VerifyReport {
        let m = self.birack.n();
        let mut axioms = Vec::new();

        let mut rel = AxiomCheck {
            name: "braid relation".into(),
            pass: true,
            witness: None,
        };
        'outer: for j in 1..self.strands.saturating_sub(1) {
            for x in 0..m {
                for y in 0..m {
                    for z in 0..m {
                        let (yx, xy) = self.birack.b(x, y);
                        let lhs = self
                            .sigma(j, x, y)
                            .mul(self.sigma(j + 1, xy, z))
                            .and_then(|v| v.mul(self.sigma(j, yx, self.birack.up(xy, z))))
                            .expect("square blocks");
                        let (zy, yz) = (self.birack.up(y, z), self.birack.low(y, z));
                        let rhs = self
                            .sigma(j + 1, y, z)
                            .mul(self.sigma(j, x, zy))
                            .and_then(|v| v.mul(self.sigma(j + 1, self.birack.low(x, zy), yz)))
                            .expect("square blocks");
                        if lhs != rhs {
                            rel.pass = false;
                            rel.witness = Some(format!(
                                "j={j}, (x,y,z)=({},{},{}): {lhs} != {rhs}",
                                x + 1,
                                y + 1,
                                z + 1
                            ));
                            break 'outer;
                        }
                    }
                }
            }
        }
        axioms.push(rel);

        // far commutativity, |j-k| >= 2
        let mut far = AxiomCheck {
            name: "far commutativity (|j-k| >= 2)".into(),
            pass: true,
            witness: None,
        };
        let mut literal = AxiomCheck {
            name: "far commutativity (literal |j-k| < 2 reading)".into(),
            pass: true,
            witness: None,
        };
        for j in 1..self.strands {
            for k in 1..self.strands {
                let target = if j.abs_diff(k) >= 2 {
                    &mut far
                } else if j != k {
                    &mut literal
                } else {
                    continue;
                };
                if !target.pass {
                    continue;
                }
                'pairs: for x in 0..m {
                    for y in 0..m {
                        for u in 0..m {
                            for v in 0..m {
                                let a = self.sigma(j, x, y);
                                let b = self.sigma(k, u, v);
                                if a.mul(b).unwrap() != b.mul(a).unwrap() {
                                    target.pass = false;
                                    target.witness = Some(format!(
                                        "j={j}, k={k}, (x,y)=({},{}), (u,v)=({},{})",
                                        x + 1,
                                        y + 1,
                                        u + 1,
                                        v + 1
                                    ));
                                    break 'pairs;
                                }
                            }
                        }
                    }
                }
            }
        }
        let pass = axioms.iter().all(|a| a.pass) && far.pass;
        axioms.push(far);
        // informational only: adjacent generators are governed by the
        // braid relation, so the literal reading usually fails
        axioms.push(literal);
        VerifyReport { axioms, pass }
    }

    /// Propagate a bottom label tuple through the word; `None` if some
    /// prefix is inconsistent (cannot happen for valid words).
    fn propagate(&self, word: &[i32], bottom: &[usize]) -> Vec<Vec<usize>> {
        let mut levels = vec![bottom.to_vec()];
        for &g in word {
            let j = g.unsigned_abs() as usize - 1;
            let cur = levels.last().unwrap();
            let (x, y) = (cur[j], cur[j + 1]);
            let (u, v) = if g > 0 {
                self.birack.b(x, y)
            } else {
                self.birack.b_inv(x, y)
            };
            let mut next = cur.clone();
            next[j] = u;
            next[j + 1] = v;
            levels.push(next);
        }
        levels
    }

    /// Word product for one labeling of the closure, given by its bottom
    /// label tuple: positive letters contribute `sigma_j^{x,y}` at the
    /// incoming labels, negative letters `(sigma_j^{u,v})^{-1}` at
    /// `(u, v) = B^{-1}(x, y)`. Factors multiply in word order.
    pub fn evaluate(&self, b: &BraidWord, bottom: &[usize]) -> Result<Matrix<T>, WeightError> {
        if b.strands() != self.strands {
            return Err(WeightError::BadTables(format!(
                "word on {} strands, weight on {}",
                b.strands(),
                self.strands
            )));
        }
        if bottom.len() != self.strands || bottom.iter().any(|&x| x >= self.birack.n()) {
            return Err(WeightError::BadBoundary(format!(
                "bottom labels {bottom:?} do not fit {} strands over {} elements",
                self.strands,
                self.birack.n()
            )));
        }
        let levels = self.propagate(b.word(), bottom);
        let mut acc = Matrix::identity(self.dim, &self.sigma[0].at(0, 0).zero_like());
        for (i, &g) in b.word().iter().enumerate() {
            let j = g.unsigned_abs() as usize;
            let (x, y) = (levels[i][j - 1], levels[i][j]);
            let factor = if g > 0 {
                self.sigma(j, x, y)
            } else {
                let (u, v) = self.birack.b_inv(x, y);
                self.sigma_inv(j, u, v)
            };
            acc = acc.mul(factor)?;
        }
        Ok(acc)
    }

    /// Bottom label tuples whose propagation closes up (top = bottom).
    pub fn closure_labelings(&self, b: &BraidWord) -> Vec<Vec<usize>> {
        let n = self.birack.n();
        let total = n.pow(self.strands as u32);
        (0..total)
            .filter_map(|mut i| {
                let mut bottom = vec![0usize; self.strands];
                for slot in bottom.iter_mut().rev() {
                    *slot = i % n;
                    i /= n;
                }
                let levels = self.propagate(b.word(), &bottom);
                (levels.last().unwrap() == &bottom).then_some(bottom)
            })
            .collect()
    }

    /// The trace multiset over all labelings of the closure.
    pub fn phi_mw(&self, b: &BraidWord, mode: Mode) -> Result<SignatureMultiset<T>, WeightError> {
        if b.strands() != self.strands {
            return Err(WeightError::BadTables(format!(
                "word on {} strands, weight on {}",
                b.strands(),
                self.strands
            )));
        }
        let labelings = self.closure_labelings(b);
        let traces = map_chunks(labelings.len(), 8, mode, |s, e| {
            labelings[s..e]
                .iter()
                .map(|bottom| {
                    let m = self.evaluate(b, bottom).expect("labeling fits");
                    Matrix::scalar(m.trace().expect("square product"))
                })
                .collect()
        });
        Ok(SignatureMultiset::from_values(traces))
    }
}

/// Polynomial form of the trace multiset, `sum u^{trace}`.
pub fn phi_w_polynomial<T: Scalar>(m: &SignatureMultiset<T>) -> Result<String, WeightError> {
    crate::qweight::phi_q_polynomial(m)
}

/// JSON document: `{"birack": .., "strands": n, "dim": m,
/// "sigma": {"j|x,y": [[poly, ..], ..]}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BraidWeightDoc {
    pub birack: crate::qweight::BirackRef,
    pub strands: usize,
    pub dim: usize,
    pub sigma: BTreeMap<String, Vec<Vec<String>>>,
}

impl BraidWeightDoc {
    pub fn variables(&self) -> VarSet {
        let mut names: Vec<String> = Vec::new();
        for rows in self.sigma.values() {
            for row in rows {
                for cell in row {
                    for v in LaurentPoly::scan_variables(cell) {
                        if !names.contains(&v) {
                            names.push(v);
                        }
                    }
                }
            }
        }
        names.sort();
        VarSet::new(names)
    }

    pub fn to_weight(
        &self,
        resolve: impl Fn(&str) -> Result<crate::birack::BirackDoc, WeightError>,
    ) -> Result<BraidWeight<LaurentPoly>, WeightError> {
        let doc = match &self.birack {
            crate::qweight::BirackRef::Inline(d) => d.clone(),
            crate::qweight::BirackRef::Path(p) => resolve(p)?,
        };
        let birack = Birack::from_doc(&doc)
            .map_err(|e| WeightError::BadTables(format!("birack: {e}")))?;
        let vars = self.variables();
        let m = birack.n();
        let mut sigma = Vec::with_capacity((self.strands - 1) * m * m);
        for j in 1..self.strands {
            for x in 1..=m {
                for y in 1..=m {
                    let key = format!("{j}|{x},{y}");
                    let rows = self.sigma.get(&key).ok_or_else(|| {
                        WeightError::BadTables(format!("missing sigma block `{key}`"))
                    })?;
                    let r = rows.len();
                    let c = rows.first().map(|x| x.len()).unwrap_or(0);
                    let mut data = Vec::with_capacity(r * c);
                    for row in rows {
                        if row.len() != c {
                            return Err(WeightError::BadTables("ragged matrix rows".into()));
                        }
                        for cell in row {
                            data.push(
                                LaurentPoly::parse(cell, &vars).map_err(WeightError::from)?,
                            );
                        }
                    }
                    sigma.push(Matrix::new(r, c, data).map_err(WeightError::from)?);
                }
            }
        }
        BraidWeight::new(birack, self.strands, self.dim, sigma)
    }
}

/// Z_m form of the braid weight document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZpBraidWeightDoc {
    #[serde(rename = "mod")]
    pub modulus: u64,
    pub birack: crate::birack::BirackDoc,
    pub strands: usize,
    pub dim: usize,
    pub sigma: BTreeMap<String, Vec<Vec<i64>>>,
}

impl ZpBraidWeightDoc {
    pub fn to_weight(&self) -> Result<BraidWeight<Zp>, WeightError> {
        let birack = Birack::from_doc(&self.birack)
            .map_err(|e| WeightError::BadTables(format!("birack: {e}")))?;
        let m = birack.n();
        let mut sigma = Vec::new();
        for j in 1..self.strands {
            for x in 1..=m {
                for y in 1..=m {
                    let key = format!("{j}|{x},{y}");
                    let rows = self.sigma.get(&key).ok_or_else(|| {
                        WeightError::BadTables(format!("missing sigma block `{key}`"))
                    })?;
                    let r = rows.len();
                    let c = rows.first().map(|x| x.len()).unwrap_or(0);
                    let mut data = Vec::with_capacity(r * c);
                    for row in rows {
                        data.extend(row.iter().map(|&v| Zp::new(v, self.modulus)));
                    }
                    sigma.push(Matrix::new(r, c, data).map_err(WeightError::from)?);
                }
            }
        }
        BraidWeight::new(birack, self.strands, self.dim, sigma)
    }
}
