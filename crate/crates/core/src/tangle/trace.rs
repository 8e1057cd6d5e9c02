//! Component and semiarc structure of a sliced diagram.
//!
//! Semiarcs are the maximal strand segments between crossing points; cups
//! and caps do not interrupt them. Components are traced through
//! crossings (bottom-left joins top-right and bottom-right joins
//! top-left) and numbered in first-encounter order scanning levels bottom
//! to top, left to right. The framing vector counts signed self-crossings
//! per component.

use super::{Piece, SlicedDiagram};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    /// +1 for `xpos`, -1 for `xneg`.
    pub sign: i8,
    pub slice: usize,
    /// 0-based strand position of the left input.
    pub pos: usize,
    pub in_arcs: (usize, usize),
    pub out_arcs: (usize, usize),
}

/// Semiarc/component decomposition of one diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramTrace {
    pub components: usize,
    pub semiarcs: usize,
    /// Semiarc index per slot; slot id = `level_offset[t] + pos`.
    pub semiarc_of_slot: Vec<usize>,
    pub level_offset: Vec<usize>,
    pub component_of_semiarc: Vec<usize>,
    /// Signed self-crossing count per component.
    pub framing: Vec<i64>,
    pub crossings: Vec<Crossing>,
    /// First-encountered slot `(level, pos)` of each component.
    pub first_slot_of_component: Vec<(usize, usize)>,
}

impl DiagramTrace {
    pub fn slot(&self, level: usize, pos: usize) -> usize {
        self.level_offset[level] + pos
    }

    pub fn semiarc_at(&self, level: usize, pos: usize) -> usize {
        self.semiarc_of_slot[self.slot(level, pos)]
    }

    pub fn component_at(&self, level: usize, pos: usize) -> usize {
        self.component_of_semiarc[self.semiarc_at(level, pos)]
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

pub(super) fn trace(d: &SlicedDiagram) -> DiagramTrace {
    let widths = d.widths();
    let mut level_offset = Vec::with_capacity(widths.len());
    let mut total = 0usize;
    for &w in &widths {
        level_offset.push(total);
        total += w;
    }

    let mut arcs = UnionFind::new(total);
    let mut comps = UnionFind::new(total);
    let mut raw_crossings: Vec<(i8, usize, usize, [usize; 4])> = Vec::new();

    for (t, slice) in d.slices().iter().enumerate() {
        let mut ic = 0usize; // input cursor into level t
        let mut oc = 0usize; // output cursor into level t+1
        let in_base = level_offset[t];
        let out_base = level_offset[t + 1];
        for piece in slice {
            match piece {
                Piece::Id => {
                    arcs.union(in_base + ic, out_base + oc);
                    comps.union(in_base + ic, out_base + oc);
                    ic += 1;
                    oc += 1;
                }
                Piece::Cup => {
                    arcs.union(out_base + oc, out_base + oc + 1);
                    comps.union(out_base + oc, out_base + oc + 1);
                    oc += 2;
                }
                Piece::Cap => {
                    arcs.union(in_base + ic, in_base + ic + 1);
                    comps.union(in_base + ic, in_base + ic + 1);
                    ic += 2;
                }
                Piece::Pos | Piece::Neg => {
                    let sign = if matches!(piece, Piece::Pos) { 1 } else { -1 };
                    let (a1, a2) = (in_base + ic, in_base + ic + 1);
                    let (b1, b2) = (out_base + oc, out_base + oc + 1);
                    comps.union(a1, b2);
                    comps.union(a2, b1);
                    raw_crossings.push((sign, t, ic, [a1, a2, b1, b2]));
                    ic += 2;
                    oc += 2;
                }
            }
        }
    }

    // canonical numbering by first-encounter scan over slot ids
    let mut arc_index = vec![usize::MAX; total];
    let mut comp_index = vec![usize::MAX; total];
    let mut semiarc_of_slot = vec![0usize; total];
    let mut component_of_semiarc = Vec::new();
    let mut first_slot_of_component = Vec::new();
    let mut n_arcs = 0usize;
    let mut n_comps = 0usize;
    for slot in 0..total {
        let ar = arcs.find(slot);
        let cr = comps.find(slot);
        if comp_index[cr] == usize::MAX {
            comp_index[cr] = n_comps;
            let level = level_offset.partition_point(|&o| o <= slot) - 1;
            first_slot_of_component.push((level, slot - level_offset[level]));
            n_comps += 1;
        }
        if arc_index[ar] == usize::MAX {
            arc_index[ar] = n_arcs;
            component_of_semiarc.push(comp_index[cr]);
            n_arcs += 1;
        }
        semiarc_of_slot[slot] = arc_index[ar];
    }

    let mut framing = vec![0i64; n_comps];
    let mut crossings = Vec::with_capacity(raw_crossings.len());
    for (sign, slice, pos, [a1, a2, b1, b2]) in raw_crossings {
        let c1 = comp_index[comps.find(a1)];
        let c2 = comp_index[comps.find(a2)];
        if c1 == c2 {
            framing[c1] += sign as i64;
        }
        crossings.push(Crossing {
            sign,
            slice,
            pos,
            in_arcs: (semiarc_of_slot[a1], semiarc_of_slot[a2]),
            out_arcs: (semiarc_of_slot[b1], semiarc_of_slot[b2]),
        });
    }

    DiagramTrace {
        components: n_comps,
        semiarcs: n_arcs,
        semiarc_of_slot,
        level_offset,
        component_of_semiarc,
        framing,
        crossings,
        first_slot_of_component,
    }
}

#[cfg(test)]
mod tests {
    use crate::tangle::{BraidWord, SlicedDiagram};

    #[test]
    fn hopf_semiarc_structure() {
        let d = SlicedDiagram::parse("cup cup / id xpos1 id / id xpos1 id / cap cap").unwrap();
        let t = d.trace();
        assert_eq!(t.components, 2);
        assert_eq!(t.semiarcs, 4);
        assert_eq!(t.crossings.len(), 2);
        // both crossings involve both components
        for c in &t.crossings {
            let c1 = t.component_of_semiarc[c.in_arcs.0];
            let c2 = t.component_of_semiarc[c.in_arcs.1];
            assert_ne!(c1, c2);
        }
    }

    #[test]
    fn zero_crossing_unknot_is_one_semiarc() {
        let d = SlicedDiagram::parse("cup / cap").unwrap();
        let t = d.trace();
        assert_eq!((t.components, t.semiarcs), (1, 1));
    }

    #[test]
    fn open_clasp_structure() {
        // two strands clasped by two negative crossings through a cup/cap
        let d = SlicedDiagram::parse_with_boundary(
            "id cup id / xneg1 xneg1 / id cap id",
            2,
        )
        .unwrap();
        let t = d.trace();
        assert_eq!(t.components, 2);
        assert_eq!(t.semiarcs, 6);
        assert_eq!(t.framing, vec![0, 0]);
    }

    #[test]
    fn mixed_sign_framing() {
        let b = BraidWord::parse("1 -1 1 2").unwrap();
        let t = b.closure().trace();
        assert_eq!(t.components, 1);
        assert_eq!(t.framing, vec![2]);
    }
}
