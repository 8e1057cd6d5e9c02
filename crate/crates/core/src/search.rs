//! Brute-force discovery engines.
//!
//! All searches enumerate an explicitly finite candidate space whose
//! cardinality is computed and reported before the run; anything larger
//! than the caller's budget is refused rather than attempted. Candidate
//! spaces are partitioned by index, so results are identical across
//! worker counts.

use crate::birack::{next_permutation, Birack};
use crate::error::SearchError;
use crate::exec::{map_chunks, Mode};
use crate::qweight::{Classification, QuantumWeight};
use crate::ring::{LaurentPoly, Matrix, Scalar, VarSet, Zp};
use crate::BraidWeight;
use std::collections::BTreeSet;

/// Search result plus the size of the space it came from.
#[derive(Debug, Clone)]
pub struct SearchOutcome<T> {
    /// Number of candidates examined (before any pruning).
    pub candidates: u128,
    pub results: Vec<T>,
}

/// `(n^2)!`, the number of pair maps on an `n`-element set.
pub fn birack_candidate_count(n: usize) -> u128 {
    let k = (n * n) as u128;
    (1..=k).product()
}

/// All involutory biracks on `n <= 3` elements, by filtering every
/// permutation of the `n^2` pairs through the axiom validator. With
/// `dedup` only one representative per relabeling orbit is kept.
pub fn enumerate_biracks(
    n: usize,
    dedup: bool,
    mode: Mode,
) -> Result<SearchOutcome<Birack>, SearchError> {
    if n == 0 || n > 3 {
        return Err(SearchError::UnsupportedSize(n));
    }
    let k = n * n;
    let total: u128 = birack_candidate_count(n);
    let total_usize = total as usize;
    let chunk = 4096usize;
    let mut results: Vec<Birack> = map_chunks(total_usize, chunk, mode, |s, e| {
        let mut out = Vec::new();
        let mut perm = unrank_permutation(k, s as u128);
        for _ in s..e {
            if let Ok(b) = Birack::from_pair_map(n, &perm) {
                out.push(b);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        out
    });
    if dedup {
        results.retain(|b| {
            let (u, l) = b.to_matrix();
            let mut flat: Vec<usize> = Vec::with_capacity(2 * k);
            for x in 0..n {
                for y in 0..n {
                    flat.push(u[y][x] - 1);
                }
            }
            for x in 0..n {
                for y in 0..n {
                    flat.push(l[x][y] - 1);
                }
            }
            flat == b.canonical_key()
        });
    }
    Ok(SearchOutcome {
        candidates: total,
        results,
    })
}

/// Lexicographic unranking of a permutation of `0..k`.
fn unrank_permutation(k: usize, mut rank: u128) -> Vec<usize> {
    let mut factorials = vec![1u128; k];
    for i in 1..k {
        factorials[i] = factorials[i - 1] * i as u128;
    }
    let mut pool: Vec<usize> = (0..k).collect();
    let mut out = Vec::with_capacity(k);
    for i in (0..k).rev() {
        let f = factorials[i];
        let idx = (rank / f) as usize;
        rank %= f;
        out.push(pool.remove(idx));
    }
    out
}

/// Matrix shape for braid-weight templates: a monomial variable (or 1)
/// times a fixed permutation pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Template {
    /// `[[0, 1], [v, 0]]`, dimension 2.
    Antidiag,
    /// `[v]`, dimension 1.
    Scalar,
}

impl Template {
    pub fn dim(&self) -> usize {
        match self {
            Template::Antidiag => 2,
            Template::Scalar => 1,
        }
    }
}

/// Braid weights over the template: every generator/label slot gets
/// either a fresh variable (shared within its partition class) or the
/// constant 1. Candidates are set partitions of the slot set (times a
/// pin-to-1 choice per class), which is exactly enumeration up to
/// variable renaming; each instantiation is checked symbolically.
pub fn search_braid_weights(
    birack: &Birack,
    strands: usize,
    template: Template,
    budget: u128,
    mode: Mode,
) -> Result<SearchOutcome<BraidWeight<LaurentPoly>>, SearchError> {
    if strands < 2 {
        return Err(SearchError::BadSpec("need at least 2 strands".into()));
    }
    let m = birack.n();
    let slots = (strands - 1) * m * m;
    if slots > 12 {
        return Err(SearchError::BadSpec(format!(
            "{slots} template slots is beyond the partition search"
        )));
    }
    let partitions = set_partitions(slots);
    let candidates: u128 = partitions
        .iter()
        .map(|p| 1u128 << (p.iter().max().map(|&m| m + 1).unwrap_or(0)))
        .sum();
    if candidates > budget {
        return Err(SearchError::RefusedBudget {
            estimate: candidates,
            budget,
        });
    }

    // canonical table strings already seen, for dedup across pin choices
    let dim = template.dim();
    let per_partition: Vec<Vec<BraidWeight<LaurentPoly>>> =
        map_chunks(partitions.len(), 8, mode, |s, e| {
            let mut out = Vec::new();
            for p in &partitions[s..e] {
                let classes = p.iter().max().map(|&m| m + 1).unwrap_or(0);
                for pins in 0u32..(1 << classes) {
                    if let Some(w) = instantiate_template(birack, strands, template, p, pins) {
                        if w.verify().pass {
                            out.push(w);
                        }
                    }
                }
            }
            vec![out]
        })
        .into_iter()
        .collect();
    let mut seen = BTreeSet::new();
    let mut results = Vec::new();
    for w in per_partition.into_iter().flatten() {
        let key = render_sigma_table(&w, strands, m, dim);
        if seen.insert(key) {
            results.push(w);
        }
    }
    Ok(SearchOutcome {
        candidates,
        results,
    })
}

fn render_sigma_table(
    w: &BraidWeight<LaurentPoly>,
    strands: usize,
    m: usize,
    _dim: usize,
) -> String {
    let mut parts = Vec::new();
    for j in 1..strands {
        for x in 0..m {
            for y in 0..m {
                parts.push(w.sigma(j, x, y).render());
            }
        }
    }
    parts.join(";")
}

/// Restricted growth strings: canonical set partitions of `0..slots`.
fn set_partitions(slots: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; slots];
    fn rec(cur: &mut Vec<usize>, i: usize, maxv: usize, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=maxv + 1 {
            cur[i] = v;
            rec(cur, i + 1, maxv.max(v), out);
        }
    }
    if slots == 0 {
        return vec![vec![]];
    }
    cur[0] = 0;
    rec(&mut cur, 1, 0, &mut out);
    out
}

/// Variable pool matching the published tables for the first four classes.
fn class_name(i: usize) -> String {
    const POOL: [&str; 4] = ["x", "y", "z", "w"];
    POOL.get(i)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("v{}", i + 1))
}

fn instantiate_template(
    birack: &Birack,
    strands: usize,
    template: Template,
    partition: &[usize],
    pins: u32,
) -> Option<BraidWeight<LaurentPoly>> {
    let classes = partition.iter().max().map(|&m| m + 1).unwrap_or(0);
    // canonical: unpinned classes must appear in first-occurrence order,
    // which the restricted growth string already guarantees
    let mut names: Vec<Option<String>> = Vec::with_capacity(classes);
    let mut next = 0usize;
    for c in 0..classes {
        if pins >> c & 1 == 1 {
            names.push(None);
        } else {
            names.push(Some(class_name(next)));
            next += 1;
        }
    }
    let vars = VarSet::new(names.iter().flatten().cloned());
    let one = LaurentPoly::one(&vars);
    let zero = LaurentPoly::zero(&vars);
    let slot_poly = |slot: usize| -> LaurentPoly {
        match &names[partition[slot]] {
            Some(n) => LaurentPoly::var(&vars, n).unwrap(),
            None => one.clone(),
        }
    };
    let m = birack.n();
    let mut sigma = Vec::with_capacity((strands - 1) * m * m);
    for slot in 0..(strands - 1) * m * m {
        let v = slot_poly(slot);
        let block = match template {
            Template::Antidiag => Matrix::new(
                2,
                2,
                vec![zero.clone(), one.clone(), v, zero.clone()],
            )
            .unwrap(),
            Template::Scalar => Matrix::scalar(v),
        };
        sigma.push(block);
    }
    BraidWeight::new(birack.clone(), strands, template.dim(), sigma).ok()
}

/// Estimated candidate count for a quantum-weight search.
pub fn quantum_candidate_count(birack: &Birack, dim: usize, modulus: u64) -> u128 {
    let m = birack.n() as u32;
    let units = (1..modulus).filter(|v| gcd(*v, modulus) == 1).count() as u128;
    match dim {
        1 => units.pow(m * m) * units.pow(m),
        _ => {
            let p = modulus as u128;
            // X blocks dominate: every d^2 x d^2 matrix per label pair
            p.pow(16 * m * m) // d = 2
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// All quantum weights of dimension 1 or 2 over `Z_modulus`, paired with
/// their classification. Dimension 1 enumerates unit values for the
/// crossing scalars and caps (cups and the kink scalar are forced by
/// axioms V and VI); dimension 2 prunes through axiom V first and is
/// practical for the one-element birack at small moduli.
pub fn search_quantum_weights(
    birack: &Birack,
    dim: usize,
    modulus: u64,
    budget: u128,
    mode: Mode,
) -> Result<SearchOutcome<(QuantumWeight<Zp>, Classification)>, SearchError> {
    if !(1..=2).contains(&dim) {
        return Err(SearchError::BadSpec(format!(
            "dimension {dim} not supported; use 1 or 2"
        )));
    }
    if !(2..=7).contains(&modulus) {
        return Err(SearchError::BadSpec(format!(
            "modulus {modulus} out of range 2..=7"
        )));
    }
    let estimate = quantum_candidate_count(birack, dim, modulus);
    if estimate > budget {
        return Err(SearchError::RefusedBudget { estimate, budget });
    }
    match dim {
        1 => Ok(search_qw_dim1(birack, modulus, estimate, mode)),
        _ => search_qw_dim2(birack, modulus, estimate, mode),
    }
}

fn units(modulus: u64) -> Vec<Zp> {
    (1..modulus)
        .filter(|v| gcd(*v, modulus) == 1)
        .map(|v| Zp::new(v as i64, modulus))
        .collect()
}

fn search_qw_dim1(
    birack: &Birack,
    modulus: u64,
    estimate: u128,
    mode: Mode,
) -> SearchOutcome<(QuantumWeight<Zp>, Classification)> {
    let m = birack.n();
    let us = units(modulus);
    let slots = m * m + m; // X values then N values; U and delta derived
    let total = us.len().pow(slots as u32);
    let results = map_chunks(total, 1024, mode, |s, e| {
        let mut out = Vec::new();
        for idx in s..e {
            let mut digits = vec![0usize; slots];
            let mut i = idx;
            for d in digits.iter_mut().rev() {
                *d = i % us.len();
                i /= us.len();
            }
            let x: Vec<Matrix<Zp>> = digits[..m * m]
                .iter()
                .map(|&d| Matrix::scalar(us[d]))
                .collect();
            let ncap: Vec<Matrix<Zp>> = digits[m * m..]
                .iter()
                .map(|&d| Matrix::scalar(us[d]))
                .collect();
            // axiom V forces U = N^{-1} entrywise in dimension 1
            let ucup: Vec<Matrix<Zp>> = ncap
                .iter()
                .map(|n| Matrix::scalar(n.at(0, 0).invert_s().unwrap()))
                .collect();
            if let Some(w) = finish_candidate(birack, 1, x, ncap, ucup) {
                out.push(w);
            }
        }
        out
    });
    SearchOutcome {
        candidates: estimate,
        results,
    }
}

fn search_qw_dim2(
    birack: &Birack,
    modulus: u64,
    estimate: u128,
    mode: Mode,
) -> Result<SearchOutcome<(QuantumWeight<Zp>, Classification)>, SearchError> {
    let m = birack.n();
    if m != 1 {
        return Err(SearchError::BadSpec(
            "dimension-2 search is limited to the one-element birack".into(),
        ));
    }
    let zero = Zp::new(0, modulus);
    let id2 = Matrix::identity(2, &zero);
    // axiom V first: (N, U) pairs with both zig-zag composites = I
    let mut pairs: Vec<(Matrix<Zp>, Matrix<Zp>)> = Vec::new();
    let vecs: Vec<Vec<Zp>> = (0..(modulus.pow(4)))
        .map(|mut i| {
            let mut v = Vec::with_capacity(4);
            for _ in 0..4 {
                v.push(Zp::new((i % modulus) as i64, modulus));
                i /= modulus;
            }
            v
        })
        .collect();
    for nv in &vecs {
        let n = Matrix::new(1, 4, nv.clone()).unwrap();
        for uv in &vecs {
            let u = Matrix::new(4, 1, uv.clone()).unwrap();
            let left = id2.kron(&n).mul(&u.kron(&id2)).unwrap();
            let right = n.kron(&id2).mul(&id2.kron(&u)).unwrap();
            if left.is_identity() && right.is_identity() {
                pairs.push((n.clone(), u));
            }
        }
    }
    let x_total = (modulus.pow(16)) as usize;
    let results = map_chunks(x_total, 4096, mode, |s, e| {
        let mut out = Vec::new();
        for idx in s..e {
            let mut cells = Vec::with_capacity(16);
            let mut i = idx as u64;
            for _ in 0..16 {
                cells.push(Zp::new((i % modulus) as i64, modulus));
                i /= modulus;
            }
            let x = Matrix::new(4, 4, cells).unwrap();
            if x.inverse().is_err() {
                continue;
            }
            for (n, u) in &pairs {
                if let Some(w) = finish_candidate(
                    birack,
                    2,
                    vec![x.clone()],
                    vec![n.clone()],
                    vec![u.clone()],
                ) {
                    out.push(w);
                }
            }
        }
        out
    });
    Ok(SearchOutcome {
        candidates: estimate,
        results,
    })
}

/// Derive the kink scalar from the composite at the first element, then
/// run the full verifier.
fn finish_candidate(
    birack: &Birack,
    dim: usize,
    x: Vec<Matrix<Zp>>,
    ncap: Vec<Matrix<Zp>>,
    ucup: Vec<Matrix<Zp>>,
) -> Option<(QuantumWeight<Zp>, Classification)> {
    let modulus = x[0].at(0, 0).modulus();
    let provisional = QuantumWeight::new(
        birack.clone(),
        dim,
        x.clone(),
        ncap.clone(),
        ucup.clone(),
        Zp::new(1, modulus),
    )
    .ok()?;
    let composite = provisional.rank_kink_composite(0);
    // must be delta * I for a unit delta
    let delta = *composite.at(0, 0);
    delta.invert_s()?;
    let target = Matrix::identity(dim, &Zp::new(0, modulus)).scale(&delta);
    if composite != target {
        return None;
    }
    let w = QuantumWeight::new(birack.clone(), dim, x, ncap, ucup, delta).ok()?;
    if !w.verify().pass {
        return None;
    }
    let class = w.classify();
    Some((w, class))
}
