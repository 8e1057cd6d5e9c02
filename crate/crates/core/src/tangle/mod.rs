//! Combinatorial tangles: sliced diagrams and braid words.
//!
//! A diagram is read bottom to top as a stack of slices; each slice is a
//! row of elementary pieces laid left to right over the incoming strands:
//!
//! - `id` — one strand passing through;
//! - `cup` — a local minimum introducing two strands;
//! - `cap` — a local maximum consuming two strands;
//! - `xposK` / `xnegK` — a positive / negative crossing. `K` is the
//!   1-based position of the crossing's left strand counted from the
//!   first strand not already covered by an earlier piece in the slice
//!   (so for a slice whose only piece is the crossing, `K` is the
//!   absolute strand position). Strands before and after the listed
//!   pieces are implicit `id`s.
//!
//! Text form: slices separated by `/`, pieces by whitespace; `;` is
//! accepted as piece separator noise. `cup ; cup / id xpos1 id / id
//! xpos1 id / cap ; cap` is a 2-crossing Hopf link diagram.

mod moves;
mod trace;

pub use moves::{random_move_sequence, Direction, MoveKind, Site};
pub use trace::DiagramTrace;

use crate::error::TangleError;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Piece {
    Id,
    Cup,
    Cap,
    /// Positive crossing on two adjacent strands.
    Pos,
    /// Negative crossing on two adjacent strands.
    Neg,
}

impl Piece {
    pub fn inputs(&self) -> usize {
        match self {
            Piece::Id => 1,
            Piece::Cup => 0,
            Piece::Cap | Piece::Pos | Piece::Neg => 2,
        }
    }

    pub fn outputs(&self) -> usize {
        match self {
            Piece::Id => 1,
            Piece::Cap => 0,
            Piece::Cup | Piece::Pos | Piece::Neg => 2,
        }
    }
}

/// A framed unoriented tangle diagram in sliced form. Immutable;
/// rewriting operations return new diagrams.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlicedDiagram {
    boundary_in: usize,
    slices: Vec<Vec<Piece>>,
}

impl SlicedDiagram {
    /// Validate strand-count consistency slice to slice.
    pub fn new(boundary_in: usize, slices: Vec<Vec<Piece>>) -> Result<Self, TangleError> {
        let mut w = boundary_in;
        for (i, slice) in slices.iter().enumerate() {
            let needed: usize = slice.iter().map(|p| p.inputs()).sum();
            if needed != w {
                return Err(TangleError::WidthMismatch {
                    slice: i + 1,
                    needed,
                    avail: w,
                });
            }
            w = slice.iter().map(|p| p.outputs()).sum();
        }
        Ok(SlicedDiagram {
            boundary_in,
            slices,
        })
    }

    pub fn boundary_in(&self) -> usize {
        self.boundary_in
    }

    pub fn boundary_out(&self) -> usize {
        self.widths()[self.slices.len()]
    }

    pub fn slices(&self) -> &[Vec<Piece>] {
        &self.slices
    }

    /// Strand counts at every level; `widths()[t]` is the count below
    /// slice `t`, the last entry is the top boundary.
    pub fn widths(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.slices.len() + 1);
        out.push(self.boundary_in);
        for slice in &self.slices {
            out.push(slice.iter().map(|p| p.outputs()).sum());
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.boundary_in == 0 && self.boundary_out() == 0
    }

    pub fn crossing_count(&self) -> usize {
        self.slices
            .iter()
            .flatten()
            .filter(|p| matches!(p, Piece::Pos | Piece::Neg))
            .count()
    }

    /// Parse the slice grammar, inferring the smallest consistent bottom
    /// boundary.
    pub fn parse(text: &str) -> Result<Self, TangleError> {
        Self::parse_impl(text, None)
    }

    /// Parse with an explicit bottom boundary width.
    pub fn parse_with_boundary(text: &str, boundary_in: usize) -> Result<Self, TangleError> {
        Self::parse_impl(text, Some(boundary_in))
    }

    fn parse_impl(text: &str, boundary_in: Option<usize>) -> Result<Self, TangleError> {
        let mut raw: Vec<Vec<(Piece, usize)>> = Vec::new(); // (piece, leading implicit ids)
        for (si, part) in text.split('/').enumerate() {
            let mut slice = Vec::new();
            let mut cursor = 1usize; // 1-based position of first uncovered strand
            for tok in part.split(|c: char| c.is_whitespace() || c == ';') {
                if tok.is_empty() {
                    continue;
                }
                let t = tok.to_ascii_lowercase();
                let (piece, pad) = if t == "id" {
                    (Piece::Id, 0)
                } else if t == "cup" {
                    (Piece::Cup, 0)
                } else if t == "cap" {
                    (Piece::Cap, 0)
                } else if let Some(k) = t.strip_prefix("xpos") {
                    (Piece::Pos, parse_k(k, si)?)
                } else if let Some(k) = t.strip_prefix("xneg") {
                    (Piece::Neg, parse_k(k, si)?)
                } else {
                    return Err(TangleError::Parse {
                        msg: format!("unknown piece `{tok}`"),
                        slice: Some(si + 1),
                    });
                };
                slice.push((piece, pad));
                cursor += pad + piece.inputs();
            }
            let _ = cursor;
            raw.push(slice);
        }
        // minimal consistent boundary: each slice needs its explicit pieces
        // covered; trailing strands are implicit ids, so widths propagate.
        let explicit_needs: Vec<usize> = raw
            .iter()
            .map(|s| s.iter().map(|(p, pad)| pad + p.inputs()).sum())
            .collect();
        let deltas: Vec<i64> = raw
            .iter()
            .map(|s| {
                s.iter()
                    .map(|(p, _)| p.outputs() as i64 - p.inputs() as i64)
                    .sum()
            })
            .collect();
        let mut need = 0i64; // minimal boundary_in
        let mut acc = 0i64;
        for (i, &req) in explicit_needs.iter().enumerate() {
            need = need.max(req as i64 - acc);
            acc += deltas[i];
        }
        let b_in = match boundary_in {
            Some(b) => {
                if (b as i64) < need {
                    return Err(TangleError::Parse {
                        msg: format!("boundary {b} too small, need at least {need}"),
                        slice: None,
                    });
                }
                b
            }
            None => need.max(0) as usize,
        };
        // materialize implicit ids
        let mut slices = Vec::with_capacity(raw.len());
        let mut w = b_in;
        for (si, slice) in raw.iter().enumerate() {
            let mut full = Vec::new();
            let mut covered = 0usize;
            for &(p, pad) in slice {
                full.extend(std::iter::repeat(Piece::Id).take(pad));
                covered += pad;
                full.push(p);
                covered += p.inputs();
            }
            if covered > w {
                return Err(TangleError::WidthMismatch {
                    slice: si + 1,
                    needed: covered,
                    avail: w,
                });
            }
            full.extend(std::iter::repeat(Piece::Id).take(w - covered));
            w = full.iter().map(|p| p.outputs()).sum();
            slices.push(full);
        }
        SlicedDiagram::new(b_in, slices)
    }

    /// Canonical text form; `parse(render())` reproduces the diagram.
    /// Rendered slices cover every strand in order, so crossings always
    /// print as `xpos1`/`xneg1` (position relative to the next uncovered
    /// strand).
    pub fn render(&self) -> String {
        self.slices
            .iter()
            .map(|slice| {
                slice
                    .iter()
                    .map(|p| match p {
                        Piece::Id => "id",
                        Piece::Cup => "cup",
                        Piece::Cap => "cap",
                        Piece::Pos => "xpos1",
                        Piece::Neg => "xneg1",
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join(" / ")
    }

    /// Component count, framing vector, semiarc structure.
    pub fn trace(&self) -> DiagramTrace {
        trace::trace(self)
    }

    /// Insert `r[k] >= 0` positive kinks on component `k` at its
    /// first-encountered semiarc.
    pub fn insert_kinks(&self, r: &[usize]) -> Result<SlicedDiagram, TangleError> {
        let signed: Vec<i64> = r.iter().map(|&x| x as i64).collect();
        moves::insert_kinks_signed(self, &signed)
    }

    /// Like [`insert_kinks`](Self::insert_kinks) but negative counts
    /// insert negative kinks.
    pub fn insert_kinks_signed(&self, r: &[i64]) -> Result<SlicedDiagram, TangleError> {
        moves::insert_kinks_signed(self, r)
    }

    /// Apply one framed Reidemeister / phone-cord / planar move.
    pub fn apply_framed_move(
        &self,
        mv: MoveKind,
        site: Site,
        dir: Direction,
    ) -> Result<SlicedDiagram, TangleError> {
        moves::apply(self, mv, site, dir)
    }
}

fn parse_k(k: &str, si: usize) -> Result<usize, TangleError> {
    let v: usize = k.parse().map_err(|_| TangleError::Parse {
        msg: format!("bad crossing position `{k}`"),
        slice: Some(si + 1),
    })?;
    if v == 0 {
        return Err(TangleError::Parse {
            msg: "crossing positions are 1-based".into(),
            slice: Some(si + 1),
        });
    }
    Ok(v - 1)
}

impl fmt::Display for SlicedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Word in the braid group `B_n`: signed generator indices, `j` for a
/// positive crossing of strands `j, j+1` and `-j` for its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    word: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, word: Vec<i32>) -> Result<Self, TangleError> {
        if strands < 1 {
            return Err(TangleError::BadBraid("need at least one strand".into()));
        }
        for &g in &word {
            if g == 0 || g.unsigned_abs() as usize >= strands {
                return Err(TangleError::BadBraid(format!(
                    "generator {g} out of range for {strands} strands"
                )));
            }
        }
        Ok(BraidWord { strands, word })
    }

    /// Whitespace-separated signed integers, e.g. `1 1 1 2`. The strand
    /// count is one more than the largest generator index (minimum 2).
    pub fn parse(text: &str) -> Result<Self, TangleError> {
        let word: Result<Vec<i32>, _> = text
            .split_whitespace()
            .map(|t| {
                t.parse::<i32>()
                    .map_err(|_| TangleError::BadBraid(format!("bad letter `{t}`")))
            })
            .collect();
        let word = word?;
        let strands = word
            .iter()
            .map(|g| g.unsigned_abs() as usize + 1)
            .max()
            .unwrap_or(2)
            .max(2);
        BraidWord::new(strands, word)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn word(&self) -> &[i32] {
        &self.word
    }

    /// Underlying permutation: `perm[i]` is where the strand entering at
    /// bottom position `i` exits on top (0-based).
    pub fn permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.strands).collect();
        // track positions: pos[i] = current position of strand i
        let mut pos: Vec<usize> = (0..self.strands).collect();
        for &g in &self.word {
            let j = g.unsigned_abs() as usize - 1;
            let a = pos.iter().position(|&p| p == j).unwrap();
            let b = pos.iter().position(|&p| p == j + 1).unwrap();
            pos.swap(a, b);
        }
        for (i, &p) in pos.iter().enumerate() {
            perm[i] = p;
        }
        perm
    }

    /// The braid as an open sliced tangle on `strands` strands.
    pub fn as_open_diagram(&self) -> SlicedDiagram {
        let slices = self
            .word
            .iter()
            .map(|&g| {
                let j = g.unsigned_abs() as usize - 1;
                let mut slice = vec![Piece::Id; j];
                slice.push(if g > 0 { Piece::Pos } else { Piece::Neg });
                slice.extend(std::iter::repeat(Piece::Id).take(self.strands - j - 2));
                slice
            })
            .collect();
        SlicedDiagram::new(self.strands, slices).unwrap()
    }

    /// Standard trace closure: `n` nested cups below, the braid on the
    /// left `n` strands, `n` nested caps above, wiring top `i` around to
    /// bottom `i`.
    pub fn closure(&self) -> SlicedDiagram {
        let n = self.strands;
        let mut slices: Vec<Vec<Piece>> = Vec::new();
        // cups: after k cups the widths are 2k; cup k (1-based) goes at
        // position k, pushing earlier right legs outward
        for k in 0..n {
            let mut slice = vec![Piece::Id; k];
            slice.push(Piece::Cup);
            slice.extend(std::iter::repeat(Piece::Id).take(k));
            slices.push(slice);
        }
        // braid on strands 1..n of the 2n-wide middle section
        for &g in &self.word {
            let j = g.unsigned_abs() as usize - 1;
            let mut slice = vec![Piece::Id; j];
            slice.push(if g > 0 { Piece::Pos } else { Piece::Neg });
            slice.extend(std::iter::repeat(Piece::Id).take(2 * n - j - 2));
            slices.push(slice);
        }
        // caps: innermost first, joining braid-top k with cup k's right leg
        for k in (0..n).rev() {
            let mut slice = vec![Piece::Id; k];
            slice.push(Piece::Cap);
            slice.extend(std::iter::repeat(Piece::Id).take(k));
            slices.push(slice);
        }
        SlicedDiagram::new(0, slices).unwrap()
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self.word.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", toks.join(" "))
    }
}

/// JSON wrapper accepted anywhere a diagram is expected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum DiagramDoc {
    Sliced {
        slices: Vec<Vec<String>>,
        #[serde(default)]
        boundary_in: Option<usize>,
    },
    Braid {
        strands: usize,
        word: Vec<i32>,
    },
}

impl DiagramDoc {
    /// Resolve to a sliced diagram; braids are closed.
    pub fn to_diagram(&self) -> Result<SlicedDiagram, TangleError> {
        match self {
            DiagramDoc::Sliced {
                slices,
                boundary_in,
            } => {
                let text = slices
                    .iter()
                    .map(|s| s.join(" "))
                    .collect::<Vec<_>>()
                    .join(" / ");
                match boundary_in {
                    Some(b) => SlicedDiagram::parse_with_boundary(&text, *b),
                    None => SlicedDiagram::parse(&text),
                }
            }
            DiagramDoc::Braid { strands, word } => {
                Ok(BraidWord::new(*strands, word.clone())?.closure())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_simple_closed() {
        let d = SlicedDiagram::parse("cup / cap").unwrap();
        assert!(d.is_closed());
        assert_eq!(d.widths(), vec![0, 2, 0]);
        let t = d.trace();
        assert_eq!(t.components, 1);
        assert_eq!(t.framing, vec![0]);
    }

    #[test]
    fn parse_hopf() {
        let d = SlicedDiagram::parse("cup ; cup / id xpos1 id / id xpos1 id / cap ; cap").unwrap();
        assert!(d.is_closed());
        assert_eq!(d.crossing_count(), 2);
        let t = d.trace();
        assert_eq!(t.components, 2);
        assert_eq!(t.framing, vec![0, 0]);
    }

    #[test]
    fn parse_open_braidlike() {
        let d = SlicedDiagram::parse("xpos1 / xpos2").unwrap();
        assert_eq!(d.boundary_in(), 3);
        assert_eq!(d.boundary_out(), 3);
        assert!(!d.is_closed());
    }

    #[test]
    fn parse_render_round_trip() {
        for s in [
            "cup / cap",
            "cup ; cup / id xpos1 id / id xpos1 id / cap ; cap",
            "xpos1 / xpos2",
            "cup / id cup id / xneg1 id id / id cap id / cap",
        ] {
            let d = SlicedDiagram::parse(s).unwrap();
            let r = SlicedDiagram::parse_with_boundary(&d.render(), d.boundary_in()).unwrap();
            assert_eq!(d, r, "round trip of `{s}`");
        }
    }

    #[test]
    fn width_errors_carry_slice_index() {
        let err = SlicedDiagram::new(0, vec![vec![Piece::Cup], vec![Piece::Cap, Piece::Cap]])
            .unwrap_err();
        assert_eq!(
            err,
            TangleError::WidthMismatch {
                slice: 2,
                needed: 4,
                avail: 2
            }
        );
    }

    #[test]
    fn braid_closure_components() {
        // sigma_1 in B_2 closes to an unknot with one positive kink
        let b = BraidWord::parse("1").unwrap();
        let t = b.closure().trace();
        assert_eq!(t.components, 1);
        assert_eq!(t.framing, vec![1]);

        // sigma_1^3 sigma_2: one component (the permutation is a 3-cycle)
        let b = BraidWord::parse("1 1 1 2").unwrap();
        let t = b.closure().trace();
        assert_eq!(t.components, 1);

        // empty word in B_2: 2-component unlink
        let b = BraidWord::new(2, vec![]).unwrap();
        let t = b.closure().trace();
        assert_eq!(t.components, 2);
        assert_eq!(t.framing, vec![0, 0]);
    }

    #[test]
    fn closure_component_count_is_cycle_count() {
        for (word, strands) in [
            (vec![1, 1, 1], 2usize),
            (vec![1, 2], 3),
            (vec![1, -2, 1], 3),
            (vec![2, 2, 1, -2], 3),
        ] {
            let b = BraidWord::new(strands, word).unwrap();
            let perm = b.permutation();
            let mut seen = vec![false; strands];
            let mut cycles = 0;
            for i in 0..strands {
                if !seen[i] {
                    cycles += 1;
                    let mut j = i;
                    while !seen[j] {
                        seen[j] = true;
                        j = perm[j];
                    }
                }
            }
            assert_eq!(b.closure().trace().components, cycles);
        }
    }

    #[test]
    fn trefoil_framing_is_writhe() {
        // all four crossings of this closure are self-crossings
        let b = BraidWord::parse("1 1 1 2").unwrap();
        let t = b.closure().trace();
        assert_eq!(t.framing, vec![4]);
        // sigma_1^3 in B_2: three positive self-crossings
        let b = BraidWord::parse("1 1 1").unwrap();
        assert_eq!(b.closure().trace().framing, vec![3]);
    }
}
