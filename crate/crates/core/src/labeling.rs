//! Birack labelings of sliced diagrams and the counting invariants.
//!
//! A labeling assigns a birack element to every strand slot so that at a
//! positive crossing the top pair is `B(bottom pair)`, at a negative
//! crossing `B^{-1}(bottom pair)`, and both legs of every cup and cap
//! carry the same element (cups and caps do not break semiarcs, so the
//! label is constant through them).
//!
//! Enumeration is constraint propagation bottom to top: open bottom
//! strands and cups introduce free variables, crossings are
//! deterministic, caps impose equations checked immediately. Free
//! variables branch in first-encounter order with ascending values, so
//! the output order is canonical and independent of worker count.

use crate::birack::Birack;
use crate::error::{TangleError, WeightError};
use crate::exec::{map_chunks, Mode};
use crate::tangle::{Piece, SlicedDiagram};
use serde::{Deserialize, Serialize};

/// One labeling: a birack element (0-based) per slot per level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labeling {
    pub levels: Vec<Vec<usize>>,
}

impl Labeling {
    /// Labels of the bottom boundary strands.
    pub fn bottom(&self) -> &[usize] {
        &self.levels[0]
    }

    /// Labels of the top boundary strands.
    pub fn top(&self) -> &[usize] {
        self.levels.last().unwrap()
    }

    /// Check shape and all crossing/cup/cap constraints against a diagram.
    pub fn validate(&self, d: &SlicedDiagram, b: &Birack) -> Result<(), WeightError> {
        let widths = d.widths();
        if self.levels.len() != widths.len()
            || self.levels.iter().zip(&widths).any(|(l, &w)| l.len() != w)
        {
            return Err(WeightError::LabelMismatch(
                "level shape does not match diagram widths".into(),
            ));
        }
        for level in &self.levels {
            if level.iter().any(|&x| x >= b.n()) {
                return Err(WeightError::LabelMismatch(format!(
                    "label out of range for birack of size {}",
                    b.n()
                )));
            }
        }
        for (t, slice) in d.slices().iter().enumerate() {
            let (mut ic, mut oc) = (0usize, 0usize);
            for piece in slice {
                let bad = |msg: String| Err(WeightError::LabelMismatch(msg));
                match piece {
                    Piece::Id => {
                        if self.levels[t][ic] != self.levels[t + 1][oc] {
                            return bad(format!("id at slice {t} position {ic} relabels"));
                        }
                        ic += 1;
                        oc += 1;
                    }
                    Piece::Cup => {
                        if self.levels[t + 1][oc] != self.levels[t + 1][oc + 1] {
                            return bad(format!("cup legs differ at slice {t}"));
                        }
                        oc += 2;
                    }
                    Piece::Cap => {
                        if self.levels[t][ic] != self.levels[t][ic + 1] {
                            return bad(format!("cap legs differ at slice {t}"));
                        }
                        ic += 2;
                    }
                    Piece::Pos | Piece::Neg => {
                        let (x, y) = (self.levels[t][ic], self.levels[t][ic + 1]);
                        let expect = if matches!(piece, Piece::Pos) {
                            b.b(x, y)
                        } else {
                            b.b_inv(x, y)
                        };
                        if (self.levels[t + 1][oc], self.levels[t + 1][oc + 1]) != expect {
                            return bad(format!("crossing relation fails at slice {t}"));
                        }
                        ic += 2;
                        oc += 2;
                    }
                }
            }
        }
        Ok(())
    }
}

struct Enumerator<'a> {
    d: &'a SlicedDiagram,
    b: &'a Birack,
    boundary: Option<&'a [usize]>,
    /// Value forced on the first free variable (for space partitioning).
    force_first: Option<usize>,
}

impl<'a> Enumerator<'a> {
    fn run(&self, visit: &mut dyn FnMut(&[Vec<usize>])) {
        let b_in = self.d.boundary_in();
        let mut levels: Vec<Vec<usize>> = Vec::with_capacity(self.d.slices().len() + 1);
        match self.boundary {
            Some(fixed) => {
                // first free variable (if any) is the first cup
                levels.push(fixed.to_vec());
                self.slices_from(0, &mut levels, &mut false, visit);
            }
            None => {
                // bottom strands are free variables, the first one carries
                // any forced value
                let mut bottom = vec![0usize; b_in];
                self.bottom_from(0, &mut bottom, &mut levels, visit);
            }
        }
    }

    fn bottom_from(
        &self,
        pos: usize,
        bottom: &mut Vec<usize>,
        levels: &mut Vec<Vec<usize>>,
        visit: &mut dyn FnMut(&[Vec<usize>]),
    ) {
        if pos == bottom.len() {
            levels.push(bottom.clone());
            let mut force_spent = self.force_first.is_some() && pos > 0;
            self.slices_from(0, levels, &mut force_spent, visit);
            levels.pop();
            return;
        }
        let range: Vec<usize> = if pos == 0 {
            match self.force_first {
                Some(v) => vec![v],
                None => (0..self.b.n()).collect(),
            }
        } else {
            (0..self.b.n()).collect()
        };
        for v in range {
            bottom[pos] = v;
            self.bottom_from(pos + 1, bottom, levels, visit);
        }
    }

    fn slices_from(
        &self,
        t: usize,
        levels: &mut Vec<Vec<usize>>,
        force_spent: &mut bool,
        visit: &mut dyn FnMut(&[Vec<usize>]),
    ) {
        if t == self.d.slices().len() {
            visit(levels);
            return;
        }
        let slice = &self.d.slices()[t];
        let mut out = Vec::with_capacity(levels[t].len() + 2);
        self.pieces_from(t, slice, 0, 0, &mut out, levels, force_spent, visit);
    }

    #[allow(clippy::too_many_arguments)]
    fn pieces_from(
        &self,
        t: usize,
        slice: &[Piece],
        pi: usize,
        ic: usize,
        out: &mut Vec<usize>,
        levels: &mut Vec<Vec<usize>>,
        force_spent: &mut bool,
        visit: &mut dyn FnMut(&[Vec<usize>]),
    ) {
        if pi == slice.len() {
            levels.push(out.clone());
            self.slices_from(t + 1, levels, force_spent, visit);
            levels.pop();
            return;
        }
        match slice[pi] {
            Piece::Id => {
                out.push(levels[t][ic]);
                self.pieces_from(t, slice, pi + 1, ic + 1, out, levels, force_spent, visit);
                out.pop();
            }
            Piece::Cup => {
                let range: Vec<usize> = if !*force_spent && self.force_first.is_some() {
                    *force_spent = true;
                    vec![self.force_first.unwrap()]
                } else {
                    (0..self.b.n()).collect()
                };
                for c in range {
                    out.push(c);
                    out.push(c);
                    self.pieces_from(t, slice, pi + 1, ic, out, levels, force_spent, visit);
                    out.pop();
                    out.pop();
                }
            }
            Piece::Cap => {
                if levels[t][ic] == levels[t][ic + 1] {
                    self.pieces_from(t, slice, pi + 1, ic + 2, out, levels, force_spent, visit);
                }
            }
            Piece::Pos | Piece::Neg => {
                let (x, y) = (levels[t][ic], levels[t][ic + 1]);
                let (u, v) = if matches!(slice[pi], Piece::Pos) {
                    self.b.b(x, y)
                } else {
                    self.b.b_inv(x, y)
                };
                out.push(u);
                out.push(v);
                self.pieces_from(t, slice, pi + 1, ic + 2, out, levels, force_spent, visit);
                out.pop();
                out.pop();
            }
        }
    }
}

fn has_free_variable(d: &SlicedDiagram, boundary: Option<&[usize]>) -> bool {
    (boundary.is_none() && d.boundary_in() > 0)
        || d.slices().iter().flatten().any(|p| matches!(p, Piece::Cup))
}

/// All labelings of `d` by `b`; `boundary` optionally fixes the bottom
/// boundary labels (0-based).
pub fn enumerate_labelings(
    d: &SlicedDiagram,
    b: &Birack,
    boundary: Option<&[usize]>,
    mode: Mode,
) -> Result<Vec<Labeling>, WeightError> {
    if let Some(fixed) = boundary {
        if fixed.len() != d.boundary_in() {
            return Err(WeightError::BadBoundary(format!(
                "{} labels for a {}-strand boundary",
                fixed.len(),
                d.boundary_in()
            )));
        }
        if fixed.iter().any(|&x| x >= b.n()) {
            return Err(WeightError::BadBoundary("label out of range".into()));
        }
    }
    if !has_free_variable(d, boundary) {
        let mut out = Vec::new();
        Enumerator {
            d,
            b,
            boundary,
            force_first: None,
        }
        .run(&mut |levels| out.push(Labeling {
            levels: levels.to_vec(),
        }));
        return Ok(out);
    }
    // partition the space on the first free variable
    let results = map_chunks(b.n(), 1, mode, |s, _| {
        let mut out = Vec::new();
        Enumerator {
            d,
            b,
            boundary,
            force_first: Some(s),
        }
        .run(&mut |levels| out.push(Labeling {
            levels: levels.to_vec(),
        }));
        out
    });
    Ok(results)
}

/// Labeling count without materializing the labelings.
pub fn count_labelings(
    d: &SlicedDiagram,
    b: &Birack,
    boundary: Option<&[usize]>,
    mode: Mode,
) -> Result<usize, WeightError> {
    if !has_free_variable(d, boundary) {
        let mut count = 0usize;
        Enumerator {
            d,
            b,
            boundary,
            force_first: None,
        }
        .run(&mut |_| count += 1);
        return Ok(count);
    }
    let counts = map_chunks(b.n(), 1, mode, |s, _| {
        let mut count = 0usize;
        Enumerator {
            d,
            b,
            boundary,
            force_first: Some(s),
        }
        .run(&mut |_| count += 1);
        vec![count]
    });
    Ok(counts.into_iter().sum())
}

/// The basic counting invariant: the number of labelings of one closed
/// framed diagram.
pub fn phi_basic(d: &SlicedDiagram, b: &Birack, mode: Mode) -> Result<usize, WeightError> {
    if !d.is_closed() {
        return Err(TangleError::NotClosed {
            boundary_in: d.boundary_in(),
            boundary_out: d.boundary_out(),
        }
        .into());
    }
    count_labelings(d, b, None, mode)
}

/// Per-framing breakdown of the integral invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiZReport {
    pub total: usize,
    /// `(kink residue vector, labeling count)` per tile cell.
    pub table: Vec<(Vec<usize>, usize)>,
    pub rank: u8,
    pub components: usize,
}

/// The integral counting invariant: sum of `phi_basic` over a complete
/// `N^c` tile of framing residues, realized by inserting `r_k` positive
/// kinks on component `k`.
pub fn phi_integral(d: &SlicedDiagram, b: &Birack, mode: Mode) -> Result<PhiZReport, WeightError> {
    if !d.is_closed() {
        return Err(TangleError::NotClosed {
            boundary_in: d.boundary_in(),
            boundary_out: d.boundary_out(),
        }
        .into());
    }
    let c = d.trace().components;
    let n = b.rank() as usize;
    let cells = n.pow(c as u32);
    let residues: Vec<Vec<usize>> = (0..cells)
        .map(|mut i| {
            let mut r = vec![0usize; c];
            for slot in r.iter_mut() {
                *slot = i % n;
                i /= n;
            }
            r
        })
        .collect();
    let results = map_chunks(residues.len(), 1, mode, |s, _| {
        let r = &residues[s];
        let dr = d.insert_kinks(r).expect("residue vector fits components");
        let count = count_labelings(&dr, b, None, Mode::Sequential)
            .expect("closed diagram labelings");
        vec![(r.clone(), count)]
    });
    let total = results.iter().map(|(_, c)| c).sum();
    Ok(PhiZReport {
        total,
        table: results,
        rank: b.rank(),
        components: c,
    })
}

/// Rebuild a labeling from explicit free-variable choices in
/// first-encounter order (bottom strands left to right, then cups).
pub fn labeling_from_choices(
    d: &SlicedDiagram,
    b: &Birack,
    choices: &[usize],
) -> Result<Labeling, WeightError> {
    let all = enumerate_labelings(d, b, None, Mode::Sequential)?;
    for lab in all {
        if free_variable_values(d, &lab) == choices {
            return Ok(lab);
        }
    }
    Err(WeightError::LabelMismatch(format!(
        "no labeling with free-variable values {choices:?}"
    )))
}

/// The free-variable values (bottom strands, then cup labels in
/// first-encounter order) determining a labeling.
pub fn free_variable_values(d: &SlicedDiagram, lab: &Labeling) -> Vec<usize> {
    let mut vals: Vec<usize> = lab.bottom().to_vec();
    for (t, slice) in d.slices().iter().enumerate() {
        let mut oc = 0usize;
        for piece in slice {
            match piece {
                Piece::Cup => {
                    vals.push(lab.levels[t + 1][oc]);
                    oc += 2;
                }
                p => oc += p.outputs(),
            }
        }
    }
    vals
}
