//! Shared fixtures and independent oracles for the integration suites.
//!
//! The two oracles here deliberately avoid the library's enumeration and
//! tensor-contraction paths: labelings are counted by exhaustive
//! assignment over semiarcs, and the bracket polynomial is computed by
//! skein resolution over planar matchings.

#![allow(dead_code)]

use birack_core::ring::{LaurentPoly, VarSet};
use birack_core::tangle::Piece;
use birack_core::{Birack, SlicedDiagram};

pub fn fixture(name: &str) -> String {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("read {path}: {e}"))
}

pub fn birack_fixture(name: &str) -> Birack {
    let doc: birack_core::birack::BirackDoc = serde_json::from_str(&fixture(name)).unwrap();
    Birack::from_doc(&doc).unwrap()
}

pub fn weight_fixture(name: &str) -> birack_core::QuantumWeight<LaurentPoly> {
    let doc: birack_core::qweight::QuantumWeightDoc =
        serde_json::from_str(&fixture(name)).unwrap();
    doc.to_weight(|p| panic!("fixture {name} references external path {p}"))
        .unwrap()
}

pub fn braid_weight_fixture(name: &str) -> birack_core::BraidWeight<LaurentPoly> {
    let doc: birack_core::bweight::BraidWeightDoc = serde_json::from_str(&fixture(name)).unwrap();
    doc.to_weight(|p| panic!("fixture {name} references external path {p}"))
        .unwrap()
}

pub fn hopf_diagram() -> SlicedDiagram {
    SlicedDiagram::parse("cup cup / id xpos1 id / id xpos1 id / cap cap").unwrap()
}

pub fn unknot_diagram() -> SlicedDiagram {
    SlicedDiagram::parse("cup / cap").unwrap()
}

/// The two-strand clasp tangle with two negative crossings.
pub fn clasp_t3() -> SlicedDiagram {
    SlicedDiagram::parse_with_boundary("id cup id / xneg1 xneg1 / id cap id", 2).unwrap()
}

/// Two vertical strands.
pub fn trivial_t1() -> SlicedDiagram {
    SlicedDiagram::parse_with_boundary("id id", 2).unwrap()
}

/// Cap then cup: the turn-back tangle.
pub fn turnback_t2() -> SlicedDiagram {
    SlicedDiagram::parse_with_boundary("cap / cup", 2).unwrap()
}

// ------------------------------------------------------------------
// Oracle 1: labeling counts by exhaustive assignment over semiarcs.
//
// Semiarcs are extracted by a single pass carrying an arc id per strand
// position (ids survive `id` pieces, a cup mints one id for both legs, a
// cap records an equality); every one of the n^k assignments to the k
// arc classes is then checked against the crossing relations directly.

pub fn brute_force_labeling_count(d: &SlicedDiagram, b: &Birack) -> usize {
    let mut next_arc = 0usize;
    let mut fresh = || {
        let a = next_arc;
        next_arc += 1;
        a
    };
    let mut cur: Vec<usize> = (0..d.boundary_in()).map(|_| fresh()).collect();
    let mut equalities: Vec<(usize, usize)> = Vec::new();
    let mut crossings: Vec<(i8, [usize; 4])> = Vec::new();
    for slice in d.slices() {
        let mut out = Vec::new();
        let mut ic = 0usize;
        for p in slice {
            match p {
                Piece::Id => {
                    out.push(cur[ic]);
                    ic += 1;
                }
                Piece::Cup => {
                    let a = fresh();
                    out.push(a);
                    out.push(a);
                }
                Piece::Cap => {
                    equalities.push((cur[ic], cur[ic + 1]));
                    ic += 2;
                }
                Piece::Pos | Piece::Neg => {
                    let sign = if matches!(p, Piece::Pos) { 1 } else { -1 };
                    let (o1, o2) = (fresh(), fresh());
                    crossings.push((sign, [cur[ic], cur[ic + 1], o1, o2]));
                    out.push(o1);
                    out.push(o2);
                    ic += 2;
                }
            }
        }
        cur = out;
    }
    // resolve arc classes through the cap equalities
    let mut class: Vec<usize> = (0..next_arc).collect();
    fn find(class: &mut Vec<usize>, mut x: usize) -> usize {
        while class[x] != x {
            class[x] = class[class[x]];
            x = class[x];
        }
        x
    }
    for (a, c) in equalities {
        let (ra, rc) = (find(&mut class, a), find(&mut class, c));
        if ra != rc {
            class[ra.max(rc)] = ra.min(rc);
        }
    }
    let mut reps: Vec<usize> = Vec::new();
    let mut index = vec![usize::MAX; next_arc];
    for a in 0..next_arc {
        let r = find(&mut class, a);
        if index[r] == usize::MAX {
            index[r] = reps.len();
            reps.push(r);
        }
        index[a] = index[r];
    }
    let k = reps.len();
    let n = b.n();
    assert!(
        n.pow(k as u32) <= 1 << 24,
        "oracle domain too large: {n}^{k}"
    );
    let mut count = 0usize;
    let mut assign = vec![0usize; k];
    'outer: loop {
        let ok = crossings.iter().all(|(sign, [i1, i2, o1, o2])| {
            let (x, y) = (assign[index[*i1]], assign[index[*i2]]);
            let expect = if *sign > 0 { b.b(x, y) } else { b.b_inv(x, y) };
            expect == (assign[index[*o1]], assign[index[*o2]])
        });
        if ok {
            count += 1;
        }
        for slot in (0..k).rev() {
            assign[slot] += 1;
            if assign[slot] < n {
                continue 'outer;
            }
            assign[slot] = 0;
        }
        break;
    }
    count
}

// ------------------------------------------------------------------
// Oracle 2: the bracket polynomial of a braid closure by skein
// resolution. Each letter resolves into the identity or the adjacent
// cup-cap tangle; states are planar matchings with a loop count, and a
// state contributes A^(±...) * (-A^2 - A^-2)^loops. Closed loops of the
// zero-crossing unknot evaluate to (-A^2 - A^-2), matching the tensor
// path's unnormalized convention.

pub fn bracket_of_closure(word: &[i32], strands: usize, vars: &VarSet) -> LaurentPoly {
    let n = strands;
    let a = LaurentPoly::var(vars, "A").unwrap();
    let a_inv = a.invert().unwrap();
    let delta = a
        .mul(&a)
        .unwrap()
        .neg()
        .sub(&a_inv.mul(&a_inv).unwrap())
        .unwrap();
    let mut total = LaurentPoly::zero(vars);
    let states = 1u32 << word.len();
    for state in 0..states {
        let mut matching: Vec<usize> = (0..2 * n).map(|p| if p < n { p + n } else { p - n }).collect();
        let mut loops = 0usize;
        let mut exp = 0i64;
        for (i, &g) in word.iter().enumerate() {
            let j = g.unsigned_abs() as usize - 1;
            let smooth_e = state >> i & 1 == 1;
            exp += match (g > 0, smooth_e) {
                (true, false) => 1,
                (true, true) => -1,
                (false, false) => -1,
                (false, true) => 1,
            };
            if !smooth_e {
                continue;
            }
            let (p1, p2) = (n + j, n + j + 1);
            let (a1, a2) = (matching[p1], matching[p2]);
            if a1 == p2 {
                loops += 1;
            } else {
                matching[a1] = a2;
                matching[a2] = a1;
            }
            matching[p1] = p2;
            matching[p2] = p1;
        }
        // trace closure joins bottom i with top n+i
        let mut seen = vec![false; 2 * n];
        for s in 0..2 * n {
            if seen[s] {
                continue;
            }
            loops += 1;
            let mut p = s;
            loop {
                seen[p] = true;
                let q = matching[p];
                seen[q] = true;
                let r = if q < n { q + n } else { q - n };
                p = r;
                if p == s {
                    break;
                }
            }
        }
        let mut term = a.pow(exp).unwrap();
        for _ in 0..loops {
            term = term.mul(&delta).unwrap();
        }
        total = total.add(&term).unwrap();
    }
    total
}
