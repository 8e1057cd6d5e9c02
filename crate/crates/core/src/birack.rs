//! Finite involutory biracks.
//!
//! A birack on `{1..n}` is an invertible map `B : X x X -> X x X` written
//! `B(x, y) = (y^x, x_y)` and encoded by the operation-table pair
//! `[U | L]`: `B(x_i, x_j) = (x_k, x_l)` where `k` sits in row `i`,
//! column `j` of `U^T` and `l` in row `i`, column `j` of `L`. With that
//! transpose, the row-label operand and its output lie on the same strand
//! of a crossing, which is what makes labelings propagate along strands.
//!
//! Validation checks, with concrete witnesses on failure:
//!
//! 1. `B` is a bijection on pairs;
//! 2. `(tau B)^2 = id` (the unoriented condition);
//! 3. sideways invertibility: `y -> y^x` is a bijection for each `x` and
//!    `x -> x_y` for each `y`, and both components of `tau B Delta` are
//!    bijections (the diagonal condition that makes kinks single-valued);
//! 4. the set-theoretic Yang-Baxter equation on all `n^3` triples.
//!
//! Condition 3 is stated here in the standard sideways form; the diagonal
//! part alone admits degenerate maps (the identity map passes it) that
//! break kink counting, so both parts are enforced.
//!
//! Derived data: the sideways map `S = tau B tau = B^{-1}`, the maps
//! `alpha = ((S Delta)_2)^{-1}` and `pi = (S Delta)_1 alpha`, and the
//! rank `N` = order of `pi`, which is 1 or 2.

use crate::error::BirackError;
use serde::{Deserialize, Serialize};

/// Validated finite involutory birack. Elements are `0..n` internally;
/// all I/O (matrices, JSON) is 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Birack {
    n: usize,
    upper: Vec<usize>, // upper[x*n+y] = y^x
    lower: Vec<usize>, // lower[x*n+y] = x_y
    b_inv: Vec<usize>, // inverse of the pair map, pair index x*n+y
    alpha: Vec<usize>,
    pi: Vec<usize>,
    rank: u8,
}

/// JSON document form: `{"n": 2, "U": [[..]], "L": [[..]]}` with 1-based
/// entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BirackDoc {
    pub n: usize,
    #[serde(rename = "U")]
    pub upper: Vec<Vec<usize>>,
    #[serde(rename = "L")]
    pub lower: Vec<Vec<usize>>,
}

impl Birack {
    /// Build and validate from the `[U|L]` operation tables (1-based
    /// entries). `U[a][b]` is `(x_a)^(x_b)` and `L[a][b]` is `(x_a)_(x_b)`.
    pub fn from_matrix(u: &[Vec<usize>], l: &[Vec<usize>]) -> Result<Self, BirackError> {
        let n = u.len();
        if n == 0 || l.len() != n {
            return Err(BirackError::BadMatrix(format!(
                "U has {n} rows, L has {} rows",
                l.len()
            )));
        }
        for (name, m) in [("U", u), ("L", l)] {
            for (i, row) in m.iter().enumerate() {
                if row.len() != n {
                    return Err(BirackError::BadMatrix(format!(
                        "{name} row {} has {} entries, expected {n}",
                        i + 1,
                        row.len()
                    )));
                }
                for (j, &e) in row.iter().enumerate() {
                    if e < 1 || e > n {
                        return Err(BirackError::BadMatrix(format!(
                            "{name}[{}][{}] = {e} out of range 1..{n}",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        // B(x,y) = (U[y][x], L[x][y]), converted to 0-based
        let mut upper = vec![0usize; n * n];
        let mut lower = vec![0usize; n * n];
        for x in 0..n {
            for y in 0..n {
                upper[x * n + y] = u[y][x] - 1;
                lower[x * n + y] = l[x][y] - 1;
            }
        }
        Self::validate(n, upper, lower)
    }

    fn validate(n: usize, upper: Vec<usize>, lower: Vec<usize>) -> Result<Self, BirackError> {
        let b = |x: usize, y: usize| (upper[x * n + y], lower[x * n + y]);
        let wit2 = |x: usize, y: usize| format!("(x,y)=({},{})", x + 1, y + 1);

        // bijectivity of B
        let mut seen = vec![usize::MAX; n * n];
        for x in 0..n {
            for y in 0..n {
                let (u0, v0) = b(x, y);
                let idx = u0 * n + v0;
                if seen[idx] != usize::MAX {
                    let p = seen[idx];
                    return Err(BirackError::AxiomViolation {
                        which: "invertibility (B not injective)".into(),
                        witness: format!(
                            "B({},{}) = B({},{}) = ({},{})",
                            p / n + 1,
                            p % n + 1,
                            x + 1,
                            y + 1,
                            u0 + 1,
                            v0 + 1
                        ),
                    });
                }
                seen[idx] = x * n + y;
            }
        }

        // (i) (tau B)^2 = id
        for x in 0..n {
            for y in 0..n {
                let (u0, v0) = b(x, y);
                let (u1, v1) = b(v0, u0);
                if (v1, u1) != (x, y) {
                    return Err(BirackError::AxiomViolation {
                        which: "(i) (tau B)^2 = id".into(),
                        witness: wit2(x, y),
                    });
                }
            }
        }

        // (ii) sideways invertibility
        for x in 0..n {
            let mut hit = vec![false; n];
            for y in 0..n {
                hit[upper[x * n + y]] = true;
            }
            if hit.iter().any(|h| !h) {
                return Err(BirackError::AxiomViolation {
                    which: "(ii) sideways: y -> y^x not bijective".into(),
                    witness: format!("x={}", x + 1),
                });
            }
        }
        for y in 0..n {
            let mut hit = vec![false; n];
            for x in 0..n {
                hit[lower[x * n + y]] = true;
            }
            if hit.iter().any(|h| !h) {
                return Err(BirackError::AxiomViolation {
                    which: "(ii) sideways: x -> x_y not bijective".into(),
                    witness: format!("y={}", y + 1),
                });
            }
        }
        // (ii) diagonal: components of tau B Delta bijective
        for (name, comp) in [
            ("(tau B Delta)_1", 1usize),
            ("(tau B Delta)_2", 0usize),
        ] {
            let mut hit = vec![false; n];
            for x in 0..n {
                let (u0, v0) = b(x, x);
                hit[if comp == 0 { u0 } else { v0 }] = true;
            }
            if hit.iter().any(|h| !h) {
                return Err(BirackError::AxiomViolation {
                    which: format!("(ii) diagonal: {name} not bijective"),
                    witness: "diagonal".into(),
                });
            }
        }

        // (iii) set-theoretic Yang-Baxter equation
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    // (B x I)(I x B)(B x I)
                    let (a, b1) = b(x, y);
                    let (c, d) = b(b1, z);
                    let (e, f) = b(a, c);
                    let lhs = (e, f, d);
                    // (I x B)(B x I)(I x B)
                    let (a2, b2) = b(y, z);
                    let (c2, d2) = b(x, a2);
                    let (e2, f2) = b(d2, b2);
                    let rhs = (c2, e2, f2);
                    if lhs != rhs {
                        return Err(BirackError::AxiomViolation {
                            which: "(iii) Yang-Baxter".into(),
                            witness: format!("(x,y,z)=({},{},{})", x + 1, y + 1, z + 1),
                        });
                    }
                }
            }
        }

        // derived maps: S = B^{-1}; alpha = ((S Delta)_2)^{-1}; pi = (S Delta)_1 alpha
        let mut b_inv = vec![0usize; n * n];
        for x in 0..n {
            for y in 0..n {
                let (u0, v0) = b(x, y);
                b_inv[u0 * n + v0] = x * n + y;
            }
        }
        let sd = |t: usize| {
            let p = b_inv[t * n + t];
            (p / n, p % n)
        };
        let mut alpha = vec![0usize; n];
        for t in 0..n {
            alpha[sd(t).1] = t;
        }
        let pi: Vec<usize> = (0..n).map(|x| sd(alpha[x]).0).collect();
        let id: Vec<usize> = (0..n).collect();
        let rank = if pi == id {
            1
        } else if pi.iter().map(|&p| pi[p]).collect::<Vec<_>>() == id {
            2
        } else {
            // cannot happen for a map passing (i)-(iii); guard anyway
            return Err(BirackError::AxiomViolation {
                which: "rank: pi^2 != id".into(),
                witness: format!("pi = {pi:?}"),
            });
        };

        Ok(Birack {
            n,
            upper,
            lower,
            b_inv,
            alpha,
            pi,
            rank,
        })
    }

    /// Constant action birack `B(x, y) = (sigma(y), tau(x))` for commuting
    /// involutions `sigma`, `tau` given as 1-based image vectors.
    pub fn constant_action(n: usize, sigma: &[usize], tau: &[usize]) -> Result<Self, BirackError> {
        let check_perm = |name: &str, p: &[usize]| -> Result<Vec<usize>, BirackError> {
            if p.len() != n {
                return Err(BirackError::InvalidConstantAction(format!(
                    "{name} has {} entries, expected {n}",
                    p.len()
                )));
            }
            let mut hit = vec![false; n];
            for &v in p {
                if v < 1 || v > n || hit[v - 1] {
                    return Err(BirackError::InvalidConstantAction(format!(
                        "{name} is not a permutation of 1..{n}"
                    )));
                }
                hit[v - 1] = true;
            }
            Ok(p.iter().map(|&v| v - 1).collect())
        };
        let s = check_perm("sigma", sigma)?;
        let t = check_perm("tau", tau)?;
        for (name, p) in [("sigma", &s), ("tau", &t)] {
            if (0..n).any(|x| p[p[x]] != x) {
                return Err(BirackError::InvalidConstantAction(format!(
                    "{name} is not an involution"
                )));
            }
        }
        if (0..n).any(|x| s[t[x]] != t[s[x]]) {
            return Err(BirackError::InvalidConstantAction(
                "sigma and tau do not commute".into(),
            ));
        }
        let mut upper = vec![0usize; n * n];
        let mut lower = vec![0usize; n * n];
        for x in 0..n {
            for y in 0..n {
                upper[x * n + y] = s[y];
                lower[x * n + y] = t[x];
            }
        }
        Self::validate(n, upper, lower)
    }

    /// `(t, s, r)`-birack on `Z_n`: `B(x, y) = (t y + s x, r x)` mod `n`,
    /// valid when `s^2 - s(1 - t r)`, `1 - t^2`, `1 - r^2`, `(t + r) s`
    /// and `(1 - r) s` all vanish mod `n`. Residue `k` is element `k + 1`.
    pub fn tsr(n: usize, t: i64, s: i64, r: i64) -> Result<Self, BirackError> {
        if n == 0 {
            return Err(BirackError::InvalidTSR("n must be positive".into()));
        }
        let m = n as i64;
        let rels = [
            ("s^2 - s(1 - t*r)", s * s - s * (1 - t * r)),
            ("1 - t^2", 1 - t * t),
            ("1 - r^2", 1 - r * r),
            ("(t + r)*s", (t + r) * s),
            ("(1 - r)*s", (1 - r) * s),
        ];
        let bad: Vec<&str> = rels
            .iter()
            .filter(|(_, v)| v.rem_euclid(m) != 0)
            .map(|(name, _)| *name)
            .collect();
        if !bad.is_empty() {
            return Err(BirackError::InvalidTSR(format!(
                "relations not satisfied mod {n}: {}",
                bad.join(", ")
            )));
        }
        let mut upper = vec![0usize; n * n];
        let mut lower = vec![0usize; n * n];
        for x in 0..n {
            for y in 0..n {
                upper[x * n + y] = (t * y as i64 + s * x as i64).rem_euclid(m) as usize;
                lower[x * n + y] = (r * x as i64).rem_euclid(m) as usize;
            }
        }
        Self::validate(n, upper, lower)
    }

    /// Validate a raw pair permutation (0-based `b[x*n+y] = u*n+v`), used
    /// by the enumeration engine.
    pub(crate) fn from_pair_map(n: usize, map: &[usize]) -> Result<Self, BirackError> {
        let mut upper = vec![0usize; n * n];
        let mut lower = vec![0usize; n * n];
        for (i, &p) in map.iter().enumerate() {
            upper[i] = p / n;
            lower[i] = p % n;
        }
        Self::validate(n, upper, lower)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `B(x, y) = (y^x, x_y)`, 0-based.
    pub fn b(&self, x: usize, y: usize) -> (usize, usize) {
        (self.upper[x * self.n + y], self.lower[x * self.n + y])
    }

    /// `B^{-1}(u, v)`, 0-based. Equals the sideways map `S = tau B tau`.
    pub fn b_inv(&self, u: usize, v: usize) -> (usize, usize) {
        let p = self.b_inv[u * self.n + v];
        (p / self.n, p % self.n)
    }

    /// `y^x`, 0-based.
    pub fn up(&self, x: usize, y: usize) -> usize {
        self.upper[x * self.n + y]
    }

    /// `x_y`, 0-based.
    pub fn low(&self, x: usize, y: usize) -> usize {
        self.lower[x * self.n + y]
    }

    /// 0-based `alpha` image vector.
    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    /// 0-based kink map `pi`; a strand passing through a positive kink is
    /// relabeled by `pi`.
    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    /// Rank `N`: the order of `pi`, always 1 or 2.
    pub fn rank(&self) -> u8 {
        self.rank
    }

    /// Rank 1, i.e. an involutory biquandle.
    pub fn is_bikei(&self) -> bool {
        self.rank == 1
    }

    /// Rank 1 with trivial lower action `x_y = x`.
    pub fn is_kei(&self) -> bool {
        self.rank == 1
            && (0..self.n).all(|x| (0..self.n).all(|y| self.lower[x * self.n + y] == x))
    }

    /// The `[U|L]` tables with 1-based entries.
    pub fn to_matrix(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let mut u = vec![vec![0usize; self.n]; self.n];
        let mut l = vec![vec![0usize; self.n]; self.n];
        for x in 0..self.n {
            for y in 0..self.n {
                u[y][x] = self.upper[x * self.n + y] + 1;
                l[x][y] = self.lower[x * self.n + y] + 1;
            }
        }
        (u, l)
    }

    pub fn to_doc(&self) -> BirackDoc {
        let (u, l) = self.to_matrix();
        BirackDoc {
            n: self.n,
            upper: u,
            lower: l,
        }
    }

    pub fn from_doc(doc: &BirackDoc) -> Result<Self, BirackError> {
        if doc.n != doc.upper.len() {
            return Err(BirackError::BadMatrix(format!(
                "declared n={} but U has {} rows",
                doc.n,
                doc.upper.len()
            )));
        }
        Self::from_matrix(&doc.upper, &doc.lower)
    }

    /// Canonical key under relabeling: the lexicographically least
    /// flattened `[U|L]` over all permutations of the element set.
    pub fn canonical_key(&self) -> Vec<usize> {
        let n = self.n;
        let mut best: Option<Vec<usize>> = None;
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let mut key = Vec::with_capacity(2 * n * n);
            // relabeled upper/lower in row-major (x, y) order
            let mut inv = vec![0usize; n];
            for (i, &p) in perm.iter().enumerate() {
                inv[p] = i;
            }
            for x in 0..n {
                for y in 0..n {
                    key.push(perm[self.upper[inv[x] * n + inv[y]]]);
                }
            }
            for x in 0..n {
                for y in 0..n {
                    key.push(perm[self.lower[inv[x] * n + inv[y]]]);
                }
            }
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        best.unwrap()
    }
}

pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn ex0() -> Birack {
        Birack::from_matrix(
            &[vec![1, 1], vec![2, 2]],
            &[vec![2, 2], vec![1, 1]],
        )
        .unwrap()
    }

    pub(crate) fn hopf_example() -> Birack {
        Birack::from_matrix(
            &[vec![2, 2, 2], vec![1, 1, 1], vec![3, 3, 3]],
            &[vec![1, 1, 1], vec![2, 2, 2], vec![3, 3, 3]],
        )
        .unwrap()
    }

    #[test]
    fn ex0_validates_with_rank_2() {
        let b = ex0();
        assert_eq!(b.rank(), 2);
        assert_eq!(b.pi(), &[1, 0]);
    }

    #[test]
    fn hopf_example_rank_2() {
        let b = hopf_example();
        assert_eq!(b.rank(), 2);
        assert_eq!(b.pi(), &[1, 0, 2]);
        assert!(!b.is_bikei());
        assert!(!b.is_kei());
    }

    #[test]
    fn non_injective_map_rejected() {
        let err = Birack::from_matrix(
            &[vec![1, 1], vec![1, 1]],
            &[vec![1, 1], vec![2, 2]],
        )
        .unwrap_err();
        assert!(matches!(err, BirackError::AxiomViolation { which, .. }
            if which.contains("not injective")));
    }

    #[test]
    fn identity_pair_map_rejected() {
        // passes the printed diagonal condition but has no sideways map
        let err = Birack::from_matrix(
            &[vec![1, 2], vec![1, 2]],
            &[vec![1, 2], vec![1, 2]],
        )
        .unwrap_err();
        assert!(matches!(err, BirackError::AxiomViolation { which, .. }
            if which.contains("sideways")));
    }

    #[test]
    fn constant_action_families() {
        // sigma = tau = (1 2): the 2-element birack with matrix [[2,2|2,2],[1,1|1,1]]
        let b = Birack::constant_action(2, &[2, 1], &[2, 1]).unwrap();
        let (u, l) = b.to_matrix();
        assert_eq!(u, vec![vec![2, 2], vec![1, 1]]);
        assert_eq!(l, vec![vec![2, 2], vec![1, 1]]);
        assert_eq!(b.rank(), 1);
        assert!(b.is_bikei());

        // sigma = (1 2), tau = id on 3 elements reproduces the rank-2 example
        let c = Birack::constant_action(3, &[2, 1, 3], &[1, 2, 3]).unwrap();
        assert_eq!(c, hopf_example());

        // non-commuting involutions rejected
        let err = Birack::constant_action(3, &[2, 1, 3], &[3, 2, 1]).unwrap_err();
        assert!(matches!(err, BirackError::InvalidConstantAction(m) if m.contains("commute")));

        // non-involution rejected
        let err = Birack::constant_action(3, &[2, 3, 1], &[1, 2, 3]).unwrap_err();
        assert!(matches!(err, BirackError::InvalidConstantAction(m) if m.contains("involution")));
    }

    #[test]
    fn tsr_families() {
        let b = Birack::tsr(4, 1, 2, 1).unwrap();
        assert_eq!(b.rank(), 2);
        // B(x,y) = (y + 2x, x) mod 4, checked on a couple of pairs (0-based residues)
        assert_eq!(b.b(1, 0), (2, 1));
        assert_eq!(b.b(3, 2), (0, 3));

        // s = 0, t = r = 1 on Z_2 degenerates to the swap
        let f = Birack::tsr(2, 1, 0, 1).unwrap();
        assert_eq!(f.b(0, 1), (1, 0));
        assert_eq!(f.rank(), 1);
        assert!(f.is_kei());

        let err = Birack::tsr(3, 1, 1, 1).unwrap_err();
        assert!(matches!(err, BirackError::InvalidTSR(m) if m.contains("s^2")));
    }

    #[test]
    fn derived_map_identities() {
        for b in [ex0(), hopf_example(), Birack::tsr(4, 1, 2, 1).unwrap()] {
            let n = b.n();
            // S(x, alpha(x)) = (pi(x), x) restated via b_inv
            for x in 0..n {
                let (s1, s2) = b.b_inv(b.alpha()[x], b.alpha()[x]);
                assert_eq!(s2, x);
                assert_eq!(s1, b.pi()[x]);
            }
            // pi is an involution or identity
            for x in 0..n {
                assert_eq!(b.pi()[b.pi()[x]], x);
            }
        }
    }

    #[test]
    fn matrix_round_trip() {
        for b in [ex0(), hopf_example()] {
            let (u, l) = b.to_matrix();
            assert_eq!(Birack::from_matrix(&u, &l).unwrap(), b);
        }
    }
}
