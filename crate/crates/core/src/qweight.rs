//! Quantum weights: birack-indexed tangle functors.
//!
//! A quantum weight over a birack `X` with `m` elements assigns to each
//! label pair a crossing map `X_{x,y} : V (x) V -> V (x) V`, to each
//! element a cap `N_x : V (x) V -> k` and a cup `U_x : k -> V (x) V`,
//! plus a unit kink scalar `delta`. Stored as matrices over the scalar
//! ring: `X_{x,y}` is `d^2 x d^2`, `N_x` is `1 x d^2`, `U_x` is
//! `d^2 x 1` for `d = dim V`.
//!
//! A labeled diagram evaluates slice by slice: pieces map to their
//! matrices (identity strand to `I_d`, a positive crossing with bottom
//! labels `(x, y)` to `X_{x,y}`, a negative crossing to the cached
//! inverse `X_{u,v}^{-1}` at `(u, v) = B^{-1}(x, y)`, cap and cup to
//! `N`/`U` at their leg label), a slice is the Kronecker product of its
//! pieces, and slices compose bottom to top by matrix product. Indexing
//! negative crossings through `B^{-1}` is what makes a stacked
//! positive/negative pair cancel exactly.

use crate::birack::Birack;
use crate::error::{RingError, WeightError};
use crate::exec::{map_chunks, Mode};
use crate::labeling::{enumerate_labelings, Labeling};
use crate::ring::{LaurentPoly, Matrix, Scalar, VarSet, Zp};
use crate::tangle::{Piece, SlicedDiagram};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Verified-shape quantum weight data over any scalar ring.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumWeight<T: Scalar> {
    birack: Birack,
    dim: usize,
    x: Vec<Matrix<T>>,     // m*m, index x*m + y
    x_inv: Vec<Matrix<T>>, // cached inverses
    ncap: Vec<Matrix<T>>,  // 1 x d^2
    ucup: Vec<Matrix<T>>,  // d^2 x 1
    delta: T,
    delta_inv: T,
}

/// Outcome of one axiom check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub name: String,
    pub pass: bool,
    /// First failing tuple and the two mismatching matrices.
    pub witness: Option<String>,
}

/// Pass/fail per axiom; `pass` is the conjunction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub axioms: Vec<AxiomCheck>,
    pub pass: bool,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.axioms {
            writeln!(
                f,
                "{:6} {}{}",
                format!("({})", a.name),
                if a.pass { "pass" } else { "FAIL" },
                a.witness
                    .as_ref()
                    .map(|w| format!("  [{w}]"))
                    .unwrap_or_default()
            )?;
        }
        write!(f, "overall: {}", if self.pass { "pass" } else { "FAIL" })
    }
}

/// Homogeneity classification and the per-pair unlabeled Yang-Baxter table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub homogeneous: bool,
    pub strongly_heterogeneous: bool,
    /// `((x, y), satisfies unlabeled YBE)` per pair, 1-based.
    pub ybe_table: Vec<((usize, usize), bool)>,
}

impl<T: Scalar> QuantumWeight<T> {
    /// Build from tables, checking shapes and inverting every crossing
    /// block (a non-unit determinant rejects the candidate immediately).
    pub fn new(
        birack: Birack,
        dim: usize,
        x: Vec<Matrix<T>>,
        ncap: Vec<Matrix<T>>,
        ucup: Vec<Matrix<T>>,
        delta: T,
    ) -> Result<Self, WeightError> {
        let m = birack.n();
        let d2 = dim * dim;
        if dim == 0 {
            return Err(WeightError::BadTables("dimension must be positive".into()));
        }
        if x.len() != m * m || ncap.len() != m || ucup.len() != m {
            return Err(WeightError::BadTables(format!(
                "need {0}x{0} crossing blocks and {0} cap/cup blocks",
                m
            )));
        }
        for (i, b) in x.iter().enumerate() {
            if b.rows() != d2 || b.cols() != d2 {
                return Err(WeightError::BadTables(format!(
                    "X block ({},{}) is {}x{}, expected {d2}x{d2}",
                    i / m + 1,
                    i % m + 1,
                    b.rows(),
                    b.cols()
                )));
            }
        }
        for (name, rows, cols, tbl) in [("N", 1, d2, &ncap), ("U", d2, 1, &ucup)] {
            for (i, b) in tbl.iter().enumerate() {
                if b.rows() != rows || b.cols() != cols {
                    return Err(WeightError::BadTables(format!(
                        "{name} block {} is {}x{}, expected {rows}x{cols}",
                        i + 1,
                        b.rows(),
                        b.cols()
                    )));
                }
            }
        }
        let delta_inv = delta
            .invert_s()
            .ok_or_else(|| RingError::NotAUnit(delta.render()))?;
        let x_inv: Result<Vec<_>, _> = x.iter().map(|b| b.inverse()).collect();
        Ok(QuantumWeight {
            birack,
            dim,
            x,
            x_inv: x_inv?,
            ncap,
            ucup,
            delta,
            delta_inv,
        })
    }

    pub fn birack(&self) -> &Birack {
        &self.birack
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn delta(&self) -> &T {
        &self.delta
    }

    pub fn crossing(&self, x: usize, y: usize) -> &Matrix<T> {
        &self.x[x * self.birack.n() + y]
    }

    pub fn crossing_inv(&self, x: usize, y: usize) -> &Matrix<T> {
        &self.x_inv[x * self.birack.n() + y]
    }

    pub fn cap(&self, x: usize) -> &Matrix<T> {
        &self.ncap[x]
    }

    pub fn cup(&self, x: usize) -> &Matrix<T> {
        &self.ucup[x]
    }

    fn kink_composite(&self, x: usize) -> Matrix<T> {
        let id = Matrix::identity(self.dim, &self.delta.zero_like());
        let ax = self.birack.alpha()[x];
        self.cap(ax)
            .kron(&id)
            .mul(&id.kron(self.crossing(ax, x)))
            .and_then(|m| m.mul(&self.cup(ax).kron(&id)))
            .expect("kink composite shapes")
    }

    /// The rank-`N` kink composite at `x`: a single kink for rank 1, the
    /// stacked `pi(x)`-then-`x` pair for rank 2. Equals `delta * I` for a
    /// valid weight.
    pub fn rank_kink_composite(&self, x: usize) -> Matrix<T> {
        match self.birack.rank() {
            1 => self.kink_composite(x),
            _ => self
                .kink_composite(self.birack.pi()[x])
                .mul(&self.kink_composite(x))
                .expect("kink composite is square"),
        }
    }

    /// Check axioms (I)-(VI) exhaustively over all element tuples.
    pub fn verify(&self) -> VerifyReport {
        let m = self.birack.n();
        let d = self.dim;
        let id = Matrix::identity(d, &self.delta.zero_like());
        let alpha = self.birack.alpha();
        let pi = self.birack.pi();
        let mut axioms = Vec::new();

        // (I): both kink chiralities agree
        let mut check_i = AxiomCheck {
            name: "I".into(),
            pass: true,
            witness: None,
        };
        for x in 0..m {
            let lhs = self.kink_composite(x);
            let apx = alpha[pi[x]];
            let rhs = id
                .kron(self.cap(apx))
                .mul(&self.crossing(x, apx).kron(&id))
                .and_then(|v| v.mul(&id.kron(self.cup(apx))))
                .expect("axiom I shapes");
            if lhs != rhs {
                check_i.pass = false;
                check_i.witness = Some(format!("x={}: {} != {}", x + 1, lhs, rhs));
                break;
            }
        }
        axioms.push(check_i);

        // (II): invertibility, guaranteed at construction
        axioms.push(AxiomCheck {
            name: "II".into(),
            pass: true,
            witness: None,
        });

        // (III): labeled Yang-Baxter
        let mut check = AxiomCheck {
            name: "III".into(),
            pass: true,
            witness: None,
        };
        'iii: for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    let (yx, xy) = self.birack.b(x, y);
                    let lhs = self
                        .crossing(yx, self.birack.up(xy, z))
                        .kron(&id)
                        .mul(&id.kron(self.crossing(xy, z)))
                        .and_then(|v| v.mul(&self.crossing(x, y).kron(&id)))
                        .expect("axiom III shapes");
                    let (zy, yz) = (self.birack.up(y, z), self.birack.low(y, z));
                    let rhs = id
                        .kron(self.crossing(self.birack.low(x, zy), yz))
                        .mul(&self.crossing(x, zy).kron(&id))
                        .and_then(|v| v.mul(&id.kron(self.crossing(y, z))))
                        .expect("axiom III shapes");
                    if lhs != rhs {
                        check.pass = false;
                        check.witness =
                            Some(format!("(x,y,z)=({},{},{})", x + 1, y + 1, z + 1));
                        break 'iii;
                    }
                }
            }
        }
        axioms.push(check);

        // (IV) and (IV')
        let mut check4 = AxiomCheck {
            name: "IV".into(),
            pass: true,
            witness: None,
        };
        let mut check4p = AxiomCheck {
            name: "IV'".into(),
            pass: true,
            witness: None,
        };
        for x in 0..m {
            for y in 0..m {
                let (yx, xy) = self.birack.b(x, y);
                if check4.pass {
                    let lhs = self
                        .cap(yx)
                        .kron(&id)
                        .mul(&id.kron(self.crossing(x, y)))
                        .expect("axiom IV shapes");
                    let rhs = id
                        .kron(self.cap(y))
                        .mul(&self.crossing_inv(xy, y).kron(&id))
                        .expect("axiom IV shapes");
                    if lhs != rhs {
                        check4.pass = false;
                        check4.witness = Some(format!("(x,y)=({},{})", x + 1, y + 1));
                    }
                }
                if check4p.pass {
                    let lhs = self
                        .cap(x)
                        .kron(&id)
                        .mul(&id.kron(self.crossing_inv(x, yx)))
                        .expect("axiom IV' shapes");
                    let rhs = id
                        .kron(self.cap(xy))
                        .mul(&self.crossing(x, y).kron(&id))
                        .expect("axiom IV' shapes");
                    if lhs != rhs {
                        check4p.pass = false;
                        check4p.witness = Some(format!("(x,y)=({},{})", x + 1, y + 1));
                    }
                }
            }
        }
        axioms.push(check4);
        axioms.push(check4p);

        // (V): zig-zag identities
        let mut check5 = AxiomCheck {
            name: "V".into(),
            pass: true,
            witness: None,
        };
        for x in 0..m {
            let left = id
                .kron(self.cap(x))
                .mul(&self.cup(x).kron(&id))
                .expect("axiom V shapes");
            let right = self
                .cap(x)
                .kron(&id)
                .mul(&id.kron(self.cup(x)))
                .expect("axiom V shapes");
            if !left.is_identity() || !right.is_identity() {
                check5.pass = false;
                check5.witness = Some(format!("x={}: {} / {}", x + 1, left, right));
                break;
            }
        }
        axioms.push(check5);

        // (VI): the rank-N kink composite is delta * I
        let mut check6 = AxiomCheck {
            name: "VI".into(),
            pass: true,
            witness: None,
        };
        let target = id.scale(&self.delta);
        for x in 0..m {
            let value = self.rank_kink_composite(x);
            if value != target {
                check6.pass = false;
                check6.witness = Some(format!(
                    "x={}: kink composite {} != delta*I = {}",
                    x + 1,
                    value,
                    target
                ));
                break;
            }
        }
        axioms.push(check6);

        let pass = axioms.iter().all(|a| a.pass);
        VerifyReport { axioms, pass }
    }

    /// Evaluate a labeled diagram to a `d^out x d^in` matrix by tensor
    /// contraction, bottom to top. The Kronecker product of each slice is
    /// applied in sparse form, never materialized.
    pub fn evaluate(
        &self,
        d: &SlicedDiagram,
        f: &Labeling,
    ) -> Result<Matrix<T>, WeightError> {
        f.validate(d, &self.birack)?;
        let dim = self.dim;
        let zero = self.delta.zero_like();
        let mut running = Matrix::identity(dim.pow(d.boundary_in() as u32), &zero);
        for (t, slice) in d.slices().iter().enumerate() {
            let mut factors: Vec<SparseFactor<T>> = Vec::with_capacity(slice.len());
            let (mut ic, mut oc) = (0usize, 0usize);
            for piece in slice {
                let factor = match piece {
                    Piece::Id => SparseFactor {
                        rdim: dim,
                        cdim: dim,
                        triplets: (0..dim).map(|i| (i, i, zero.one_like())).collect(),
                    },
                    Piece::Cup => SparseFactor::from_matrix(self.cup(f.levels[t + 1][oc])),
                    Piece::Cap => SparseFactor::from_matrix(self.cap(f.levels[t][ic])),
                    Piece::Pos => SparseFactor::from_matrix(
                        self.crossing(f.levels[t][ic], f.levels[t][ic + 1]),
                    ),
                    Piece::Neg => {
                        let (u, v) = self.birack.b_inv(f.levels[t][ic], f.levels[t][ic + 1]);
                        SparseFactor::from_matrix(self.crossing_inv(u, v))
                    }
                };
                factors.push(factor);
                ic += piece.inputs();
                oc += piece.outputs();
            }
            running = apply_sparse_kron(&factors, &running, &zero)?;
        }
        Ok(running)
    }

    /// Divide out the phone-cord contribution: multiply by
    /// `delta^(-sum_k q_k)` where `w_k = q_k N + r_k`, `0 <= r_k < N`.
    pub fn normalize(&self, value: &Matrix<T>, framing: &[i64]) -> Matrix<T> {
        let n = self.birack.rank() as i64;
        let q_sum: i64 = framing.iter().map(|w| w.div_euclid(n)).sum();
        value.scale(&scalar_pow(&self.delta, &self.delta_inv, -q_sum))
    }

    /// The quantum enhanced multiset: normalized signatures over all
    /// framing residues and labelings.
    pub fn phi_qm(
        &self,
        d: &SlicedDiagram,
        mode: Mode,
    ) -> Result<SignatureMultiset<T>, WeightError> {
        let trace = d.trace();
        let n = self.birack.rank() as usize;
        let cells = n.pow(trace.components as u32);
        let residues: Vec<Vec<usize>> = (0..cells)
            .map(|mut i| {
                let mut r = vec![0usize; trace.components];
                for slot in r.iter_mut() {
                    *slot = i % n;
                    i /= n;
                }
                r
            })
            .collect();
        let sigs: Vec<Matrix<T>> = map_chunks(residues.len(), 1, mode, |s, _| {
            let dr = d.insert_kinks(&residues[s]).expect("residues fit");
            let framing = dr.trace().framing;
            let labs = enumerate_labelings(&dr, &self.birack, None, Mode::Sequential)
                .expect("enumeration cannot fail");
            labs.iter()
                .map(|f| {
                    let v = self.evaluate(&dr, f).expect("labeling validated");
                    self.normalize(&v, &framing)
                })
                .collect()
        });
        Ok(SignatureMultiset::from_values(sigs))
    }

    /// Homogeneity and the unlabeled Yang-Baxter table.
    pub fn classify(&self) -> Classification {
        let m = self.birack.n();
        let id = Matrix::identity(self.dim, &self.delta.zero_like());
        let homogeneous = self.x.iter().all(|b| *b == self.x[0])
            && self.ncap.iter().all(|b| *b == self.ncap[0])
            && self.ucup.iter().all(|b| *b == self.ucup[0]);
        let mut ybe_table = Vec::with_capacity(m * m);
        for x in 0..m {
            for y in 0..m {
                let b = self.crossing(x, y);
                let lhs = id
                    .kron(b)
                    .mul(&b.kron(&id))
                    .and_then(|v| v.mul(&id.kron(b)))
                    .expect("YBE shapes");
                let rhs = b
                    .kron(&id)
                    .mul(&id.kron(b))
                    .and_then(|v| v.mul(&b.kron(&id)))
                    .expect("YBE shapes");
                ybe_table.push(((x + 1, y + 1), lhs == rhs));
            }
        }
        Classification {
            homogeneous,
            strongly_heterogeneous: ybe_table.iter().any(|(_, ok)| !ok),
            ybe_table,
        }
    }
}

struct SparseFactor<T: Scalar> {
    rdim: usize,
    cdim: usize,
    triplets: Vec<(usize, usize, T)>,
}

impl<T: Scalar> SparseFactor<T> {
    fn from_matrix(m: &Matrix<T>) -> Self {
        SparseFactor {
            rdim: m.rows(),
            cdim: m.cols(),
            triplets: matrix_triplets(m),
        }
    }
}

fn matrix_triplets<T: Scalar>(m: &Matrix<T>) -> Vec<(usize, usize, T)> {
    let mut out = Vec::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let v = m.at(r, c);
            if !v.is_zero_s() {
                out.push((r, c, v.clone()));
            }
        }
    }
    out
}

/// `new = (F_1 (x) ... (x) F_k) * running`, iterating the cartesian
/// product of the factors' nonzero entries instead of materializing the
/// slice matrix.
fn apply_sparse_kron<T: Scalar>(
    factors: &[SparseFactor<T>],
    running: &Matrix<T>,
    zero: &T,
) -> Result<Matrix<T>, WeightError> {
    let out_dim: usize = factors.iter().map(|f| f.rdim).product();
    let cols = running.cols();
    let mut data = vec![zero.clone(); out_dim.max(1) * cols];
    if factors.iter().all(|f| !f.triplets.is_empty()) {
        let mut idx = vec![0usize; factors.len()];
        loop {
            let mut row = 0usize;
            let mut col = 0usize;
            let mut coef = zero.one_like();
            for (f, &i) in factors.iter().zip(&idx) {
                let (r, c, v) = &f.triplets[i];
                row = row * f.rdim + r;
                col = col * f.cdim + c;
                coef = coef.mul_s(v);
            }
            for k in 0..cols {
                let v = running.at(col, k);
                if !v.is_zero_s() {
                    let cell = &mut data[row * cols + k];
                    *cell = cell.add_s(&coef.mul_s(v));
                }
            }
            let mut done = true;
            for i in (0..idx.len()).rev() {
                idx[i] += 1;
                if idx[i] < factors[i].triplets.len() {
                    done = false;
                    break;
                }
                idx[i] = 0;
            }
            if done {
                break;
            }
        }
    }
    Matrix::new(out_dim.max(1), cols, data).map_err(WeightError::from)
}

/// `t^k` using a precomputed inverse for negative exponents.
pub(crate) fn scalar_pow<T: Scalar>(t: &T, t_inv: &T, k: i64) -> T {
    let base = if k < 0 { t_inv } else { t };
    let mut out = t.one_like();
    for _ in 0..k.unsigned_abs() {
        out = out.mul_s(base);
    }
    out
}

/// Multiset of signature matrices with multiplicities, canonically
/// ordered by rendered string. Two multisets compare equal iff their
/// canonical entry lists match.
#[derive(Debug, Clone, PartialEq)]
pub struct SignatureMultiset<T: Scalar> {
    entries: Vec<(Matrix<T>, usize)>,
}

impl<T: Scalar> SignatureMultiset<T> {
    pub fn from_values(values: Vec<Matrix<T>>) -> Self {
        let mut keyed: BTreeMap<String, (Matrix<T>, usize)> = BTreeMap::new();
        for v in values {
            let k = v.render();
            keyed
                .entry(k)
                .and_modify(|(_, c)| *c += 1)
                .or_insert((v, 1));
        }
        SignatureMultiset {
            entries: keyed.into_values().collect(),
        }
    }

    pub fn entries(&self) -> &[(Matrix<T>, usize)] {
        &self.entries
    }

    /// Total multiplicity; equals the labeling count over the tile.
    pub fn total(&self) -> usize {
        self.entries.iter().map(|(_, c)| c).sum()
    }

    pub fn is_scalar(&self) -> bool {
        self.entries
            .iter()
            .all(|(m, _)| m.rows() == 1 && m.cols() == 1)
    }

    /// `{ sig x mult, ... }` in canonical order.
    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(m, c)| format!("{} x {}", c, m.render()))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

impl<T: Scalar> fmt::Display for SignatureMultiset<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Render the polynomial form `sum mult * u^{sig}`; the signatures must
/// be scalars (closed diagrams).
pub fn phi_q_polynomial<T: Scalar>(m: &SignatureMultiset<T>) -> Result<String, WeightError> {
    if !m.is_scalar() {
        return Err(WeightError::NotALink);
    }
    let parts: Vec<String> = m
        .entries()
        .iter()
        .map(|(sig, c)| {
            let body = format!("u^{{{}}}", sig.render());
            if *c == 1 {
                body
            } else {
                format!("{c}·{body}")
            }
        })
        .collect();
    Ok(parts.join(" + "))
}

// ---------------------------------------------------------------------
// JSON document form

/// Weight document over the Laurent ring; polynomial entries are strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuantumWeightDoc {
    pub birack: BirackRef,
    pub dim: usize,
    pub delta: String,
    #[serde(rename = "X")]
    pub crossings: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(rename = "N")]
    pub caps: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(rename = "U")]
    pub cups: BTreeMap<String, Vec<Vec<String>>>,
}

/// Inline birack document or a path to one.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BirackRef {
    Inline(crate::birack::BirackDoc),
    Path(String),
}

impl QuantumWeightDoc {
    /// Variables appearing anywhere in the document, sorted.
    pub fn variables(&self) -> VarSet {
        let mut names: Vec<String> = Vec::new();
        let mut add = |s: &str| {
            for v in LaurentPoly::scan_variables(s) {
                if !names.contains(&v) {
                    names.push(v);
                }
            }
        };
        add(&self.delta);
        for tbl in [&self.crossings, &self.caps, &self.cups] {
            for rows in tbl.values() {
                for row in rows {
                    for cell in row {
                        add(cell);
                    }
                }
            }
        }
        names.sort();
        VarSet::new(names)
    }

    /// Build the weight; `resolve` loads a birack document by path when
    /// the reference is not inline.
    pub fn to_weight(
        &self,
        resolve: impl Fn(&str) -> Result<crate::birack::BirackDoc, WeightError>,
    ) -> Result<QuantumWeight<LaurentPoly>, WeightError> {
        let doc = match &self.birack {
            BirackRef::Inline(d) => d.clone(),
            BirackRef::Path(p) => resolve(p)?,
        };
        let birack = Birack::from_doc(&doc)
            .map_err(|e| WeightError::BadTables(format!("birack: {e}")))?;
        let vars = self.variables();
        let m = birack.n();
        let d2 = self.dim * self.dim;
        let parse_block = |rows: &Vec<Vec<String>>| -> Result<Matrix<LaurentPoly>, WeightError> {
            let r = rows.len();
            let c = rows.first().map(|x| x.len()).unwrap_or(0);
            let mut data = Vec::with_capacity(r * c);
            for row in rows {
                if row.len() != c {
                    return Err(WeightError::BadTables("ragged matrix rows".into()));
                }
                for cell in row {
                    data.push(LaurentPoly::parse(cell, &vars).map_err(WeightError::from)?);
                }
            }
            Matrix::new(r, c, data).map_err(WeightError::from)
        };
        let mut x = Vec::with_capacity(m * m);
        for i in 1..=m {
            for j in 1..=m {
                let key = format!("{i},{j}");
                let rows = self.crossings.get(&key).ok_or_else(|| {
                    WeightError::BadTables(format!("missing X block `{key}`"))
                })?;
                x.push(parse_block(rows)?);
            }
        }
        let mut ncap = Vec::with_capacity(m);
        let mut ucup = Vec::with_capacity(m);
        for i in 1..=m {
            let key = i.to_string();
            let nrows = self
                .caps
                .get(&key)
                .ok_or_else(|| WeightError::BadTables(format!("missing N block `{key}`")))?;
            let urows = self
                .cups
                .get(&key)
                .ok_or_else(|| WeightError::BadTables(format!("missing U block `{key}`")))?;
            // accept a bare row/column for convenience
            let n_mat = parse_block(nrows)?;
            let u_mat = parse_block(urows)?;
            ncap.push(if n_mat.rows() == d2 && n_mat.cols() == 1 {
                n_mat.transpose()
            } else {
                n_mat
            });
            ucup.push(if u_mat.rows() == 1 && u_mat.cols() == d2 {
                u_mat.transpose()
            } else {
                u_mat
            });
        }
        let delta = LaurentPoly::parse(&self.delta, &vars).map_err(WeightError::from)?;
        QuantumWeight::new(birack, self.dim, x, ncap, ucup, delta)
    }
}

/// Weight document over `Z_m`; entries are integers, `mod` is the modulus.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZpQuantumWeightDoc {
    #[serde(rename = "mod")]
    pub modulus: u64,
    pub birack: crate::birack::BirackDoc,
    pub dim: usize,
    pub delta: i64,
    #[serde(rename = "X")]
    pub crossings: BTreeMap<String, Vec<Vec<i64>>>,
    #[serde(rename = "N")]
    pub caps: BTreeMap<String, Vec<Vec<i64>>>,
    #[serde(rename = "U")]
    pub cups: BTreeMap<String, Vec<Vec<i64>>>,
}

impl ZpQuantumWeightDoc {
    pub fn to_weight(&self) -> Result<QuantumWeight<Zp>, WeightError> {
        let birack = Birack::from_doc(&self.birack)
            .map_err(|e| WeightError::BadTables(format!("birack: {e}")))?;
        let m = birack.n();
        let block = |rows: &Vec<Vec<i64>>| -> Result<Matrix<Zp>, WeightError> {
            let r = rows.len();
            let c = rows.first().map(|x| x.len()).unwrap_or(0);
            let mut data = Vec::with_capacity(r * c);
            for row in rows {
                if row.len() != c {
                    return Err(WeightError::BadTables("ragged matrix rows".into()));
                }
                data.extend(row.iter().map(|&v| Zp::new(v, self.modulus)));
            }
            Matrix::new(r, c, data).map_err(WeightError::from)
        };
        let mut x = Vec::new();
        for i in 1..=m {
            for j in 1..=m {
                let key = format!("{i},{j}");
                x.push(block(self.crossings.get(&key).ok_or_else(|| {
                    WeightError::BadTables(format!("missing X block `{key}`"))
                })?)?);
            }
        }
        let mut ncap = Vec::new();
        let mut ucup = Vec::new();
        for i in 1..=m {
            let key = i.to_string();
            ncap.push(block(self.caps.get(&key).ok_or_else(|| {
                WeightError::BadTables(format!("missing N block `{key}`"))
            })?)?);
            ucup.push(block(self.cups.get(&key).ok_or_else(|| {
                WeightError::BadTables(format!("missing U block `{key}`"))
            })?)?);
        }
        QuantumWeight::new(
            birack,
            self.dim,
            x,
            ncap,
            ucup,
            Zp::new(self.delta, self.modulus),
        )
    }
}
