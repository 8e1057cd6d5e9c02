//! Framed-move rewriting on sliced diagrams.
//!
//! Moves insert or delete local patterns of slices; all of them preserve
//! the component count, and all except the phone-cord move preserve the
//! framing vector. They exist so that invariance can be property-tested
//! on randomized rewrite sequences, and to expose single-move rewriting
//! on the command line.
//!
//! A kink (curl) is sliced as a twisted cup: `cup` at `(p+1, p+2)`, a
//! crossing of the two cup legs, then `cap` at `(p, p+1)`. With the
//! cup/cap equality rule this is exactly the shape whose unique labeling
//! relabels the strand by the kink map `pi`.

use super::{Piece, SlicedDiagram};
use crate::error::TangleError;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveKind {
    /// Reidemeister II: opposite crossing pair on adjacent strands.
    R2,
    /// Reidemeister III: slide a crossing past an adjacent one.
    R3,
    /// Framed type I: a cancelling positive/negative kink pair.
    FramedR1,
    /// Insertion/deletion of `n` like-signed kinks.
    PhoneCord { n: u8, negative: bool },
    /// Swap two adjacent slices whose pieces act on disjoint strands.
    Planar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Site {
    /// Level index `0..=slices`; inserted slices go between slice
    /// `level - 1` and slice `level`.
    pub level: usize,
    /// 0-based strand position at that level (ignored by deletions).
    pub pos: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Insert,
    Delete,
    /// For `R3`/`Planar`: apply the rewrite (self-inverse patterns).
    Slide,
}

fn id_slice(w: usize) -> Vec<Piece> {
    vec![Piece::Id; w]
}

fn crossing_slice(w: usize, pos: usize, sign: i8) -> Vec<Piece> {
    let mut s = id_slice(w);
    s.truncate(pos);
    s.push(if sign > 0 { Piece::Pos } else { Piece::Neg });
    s.extend(std::iter::repeat(Piece::Id).take(w - pos - 2));
    s
}

/// The three slices of one kink at strand `pos` of a width-`w` level.
fn kink_block(w: usize, pos: usize, sign: i8) -> Vec<Vec<Piece>> {
    let mut cup = id_slice(pos + 1);
    cup.push(Piece::Cup);
    cup.extend(std::iter::repeat(Piece::Id).take(w - pos - 1));
    let cross = crossing_slice(w + 2, pos + 1, sign);
    let mut cap = id_slice(pos);
    cap.push(Piece::Cap);
    cap.extend(std::iter::repeat(Piece::Id).take(w - pos));
    vec![cup, cross, cap]
}

/// Match a slice that is a single crossing among ids.
fn single_crossing(slice: &[Piece]) -> Option<(usize, i8)> {
    let mut found = None;
    let mut pos = 0usize;
    for p in slice {
        match p {
            Piece::Id => pos += 1,
            Piece::Pos | Piece::Neg => {
                if found.is_some() {
                    return None;
                }
                found = Some((pos, if matches!(p, Piece::Pos) { 1 } else { -1 }));
                pos += 2;
            }
            _ => return None,
        }
    }
    found
}

/// Match three slices forming one kink block; returns `(pos, sign)`.
fn match_kink_block(slices: &[Vec<Piece>]) -> Option<(usize, i8)> {
    if slices.len() < 3 {
        return None;
    }
    // cup among ids at piece index pos+1
    let mut cup_at = None;
    let mut at = 0usize;
    for p in &slices[0] {
        match p {
            Piece::Id => at += 1,
            Piece::Cup => {
                if cup_at.is_some() {
                    return None;
                }
                cup_at = Some(at);
            }
            _ => return None,
        }
    }
    let cup_at = cup_at?;
    if cup_at == 0 {
        return None;
    }
    let pos = cup_at - 1;
    let (xpos, sign) = single_crossing(&slices[1])?;
    if xpos != pos + 1 {
        return None;
    }
    let mut cap_at = None;
    at = 0;
    for p in &slices[2] {
        match p {
            Piece::Id => at += 1,
            Piece::Cap => {
                if cap_at.is_some() {
                    return None;
                }
                cap_at = Some(at);
                at += 2;
            }
            _ => return None,
        }
    }
    if cap_at? != pos {
        return None;
    }
    Some((pos, sign))
}

fn splice(d: &SlicedDiagram, at: usize, block: Vec<Vec<Piece>>) -> SlicedDiagram {
    let mut slices = d.slices().to_vec();
    for (i, s) in block.into_iter().enumerate() {
        slices.insert(at + i, s);
    }
    SlicedDiagram::new(d.boundary_in(), slices).expect("spliced block preserves widths")
}

fn remove(d: &SlicedDiagram, at: usize, count: usize) -> SlicedDiagram {
    let mut slices = d.slices().to_vec();
    slices.drain(at..at + count);
    SlicedDiagram::new(d.boundary_in(), slices).expect("removed block preserves widths")
}

pub(super) fn insert_kinks_signed(
    d: &SlicedDiagram,
    r: &[i64],
) -> Result<SlicedDiagram, TangleError> {
    let t = d.trace();
    if r.len() != t.components {
        return Err(TangleError::ComponentOutOfRange {
            index: r.len(),
            count: t.components,
        });
    }
    // splice from topmost site down so earlier splices don't shift later sites
    let mut sites: Vec<(usize, usize, i64)> = r
        .iter()
        .enumerate()
        .filter(|(_, &rk)| rk != 0)
        .map(|(k, &rk)| {
            let (level, pos) = t.first_slot_of_component[k];
            (level, pos, rk)
        })
        .collect();
    sites.sort_by(|a, b| b.cmp(a));
    let widths = d.widths();
    let mut out = d.clone();
    for (level, pos, rk) in sites {
        let sign = if rk > 0 { 1 } else { -1 };
        let block = kink_block(widths[level], pos, sign);
        for _ in 0..rk.unsigned_abs() {
            out = splice(&out, level, block.clone());
        }
    }
    Ok(out)
}

pub(super) fn apply(
    d: &SlicedDiagram,
    mv: MoveKind,
    site: Site,
    dir: Direction,
) -> Result<SlicedDiagram, TangleError> {
    let widths = d.widths();
    let level = site.level;
    let mismatch = |msg: &str| TangleError::PatternMismatch {
        level,
        msg: msg.to_string(),
    };
    match (mv, dir) {
        (MoveKind::R2, Direction::Insert) => {
            let w = *widths.get(level).ok_or_else(|| mismatch("level out of range"))?;
            if site.pos + 2 > w {
                return Err(mismatch("needs two adjacent strands"));
            }
            Ok(splice(
                d,
                level,
                vec![
                    crossing_slice(w, site.pos, 1),
                    crossing_slice(w, site.pos, -1),
                ],
            ))
        }
        (MoveKind::R2, Direction::Delete) => {
            if level + 2 > d.slices().len() {
                return Err(mismatch("level out of range"));
            }
            let a = single_crossing(&d.slices()[level]).ok_or_else(|| mismatch("not a crossing slice"))?;
            let b = single_crossing(&d.slices()[level + 1])
                .ok_or_else(|| mismatch("not a crossing slice"))?;
            if a.0 != b.0 || a.1 != -b.1 {
                return Err(mismatch("crossings do not cancel"));
            }
            Ok(remove(d, level, 2))
        }
        (MoveKind::R3, _) => {
            if level + 3 > d.slices().len() {
                return Err(mismatch("level out of range"));
            }
            let a = single_crossing(&d.slices()[level]).ok_or_else(|| mismatch("not a crossing slice"))?;
            let b = single_crossing(&d.slices()[level + 1])
                .ok_or_else(|| mismatch("not a crossing slice"))?;
            let c = single_crossing(&d.slices()[level + 2])
                .ok_or_else(|| mismatch("not a crossing slice"))?;
            if a.1 != b.1 || b.1 != c.1 {
                return Err(mismatch("signs differ"));
            }
            if a.0 != c.0 || a.0.abs_diff(b.0) != 1 {
                return Err(mismatch("not a braid-relation pattern"));
            }
            let w = widths[level];
            Ok(replace(
                d,
                level,
                vec![
                    crossing_slice(w, b.0, a.1),
                    crossing_slice(w, a.0, a.1),
                    crossing_slice(w, b.0, a.1),
                ],
            ))
        }
        (MoveKind::FramedR1, Direction::Insert) => {
            let w = *widths.get(level).ok_or_else(|| mismatch("level out of range"))?;
            if site.pos >= w {
                return Err(mismatch("strand out of range"));
            }
            let mut block = kink_block(w, site.pos, 1);
            block.extend(kink_block(w, site.pos, -1));
            Ok(splice(d, level, block))
        }
        (MoveKind::FramedR1, Direction::Delete) => {
            if level + 6 > d.slices().len() {
                return Err(mismatch("level out of range"));
            }
            let a = match_kink_block(&d.slices()[level..])
                .ok_or_else(|| mismatch("no kink block"))?;
            let b = match_kink_block(&d.slices()[level + 3..])
                .ok_or_else(|| mismatch("no second kink block"))?;
            if a.0 != b.0 || a.1 != -b.1 {
                return Err(mismatch("kinks do not cancel"));
            }
            Ok(remove(d, level, 6))
        }
        (MoveKind::PhoneCord { n, negative }, Direction::Insert) => {
            let w = *widths.get(level).ok_or_else(|| mismatch("level out of range"))?;
            if site.pos >= w {
                return Err(mismatch("strand out of range"));
            }
            let sign = if negative { -1 } else { 1 };
            let block = kink_block(w, site.pos, sign);
            let mut all = Vec::new();
            for _ in 0..n {
                all.extend(block.clone());
            }
            Ok(splice(d, level, all))
        }
        (MoveKind::PhoneCord { n, negative }, Direction::Delete) => {
            let need = 3 * n as usize;
            if level + need > d.slices().len() {
                return Err(mismatch("level out of range"));
            }
            let want_sign = if negative { -1 } else { 1 };
            let mut pos = None;
            for k in 0..n as usize {
                let got = match_kink_block(&d.slices()[level + 3 * k..])
                    .ok_or_else(|| mismatch("no kink block"))?;
                if got.1 != want_sign || pos.is_some_and(|p| p != got.0) {
                    return Err(mismatch("kink blocks do not match"));
                }
                pos = Some(got.0);
            }
            Ok(remove(d, level, need))
        }
        (MoveKind::Planar, _) => swap_slices(d, level),
        (mv, dir) => Err(mismatch(&format!(
            "direction {dir:?} not applicable to {mv:?}"
        ))),
    }
}

fn replace(d: &SlicedDiagram, at: usize, block: Vec<Vec<Piece>>) -> SlicedDiagram {
    let mut slices = d.slices().to_vec();
    for (i, s) in block.into_iter().enumerate() {
        slices[at + i] = s;
    }
    SlicedDiagram::new(d.boundary_in(), slices).expect("replacement preserves widths")
}

/// Swap slices `level` and `level + 1` when every non-id piece of the
/// upper slice takes its inputs from id outputs of the lower slice and
/// vice versa.
fn swap_slices(d: &SlicedDiagram, level: usize) -> Result<SlicedDiagram, TangleError> {
    let mismatch = |msg: &str| TangleError::PatternMismatch {
        level,
        msg: msg.to_string(),
    };
    if level + 2 > d.slices().len() {
        return Err(mismatch("level out of range"));
    }
    let lo = &d.slices()[level];
    let hi = &d.slices()[level + 1];

    // output position -> originating piece index of the lower slice, and
    // whether that output came from an id
    let mut lo_out_from_id: Vec<Option<usize>> = Vec::new(); // Some(input pos) if id
    let mut ic = 0usize;
    for p in lo {
        match p {
            Piece::Id => {
                lo_out_from_id.push(Some(ic));
                ic += 1;
            }
            Piece::Cup => {
                lo_out_from_id.push(None);
                lo_out_from_id.push(None);
            }
            Piece::Cap => {
                ic += 2;
            }
            Piece::Pos | Piece::Neg => {
                lo_out_from_id.push(None);
                lo_out_from_id.push(None);
                ic += 2;
            }
        }
    }

    // build swapped slices: non-id pieces of `hi` move down, acting on the
    // lower slice's input coordinates; non-id pieces of `lo` move up
    let mut new_lo: Vec<(usize, Piece)> = Vec::new(); // (input pos at level, piece)
    let mut oc = 0usize;
    for p in hi {
        match p {
            Piece::Id => {
                oc += 1;
            }
            Piece::Cup => {
                // a cup consumes nothing; anchor it at the translated position
                let anchor = translate_down(&lo_out_from_id, oc)
                    .ok_or_else(|| mismatch("cup blocked by lower piece"))?;
                new_lo.push((anchor, Piece::Cup));
            }
            Piece::Cap | Piece::Pos | Piece::Neg => {
                let a = lo_out_from_id
                    .get(oc)
                    .copied()
                    .flatten()
                    .ok_or_else(|| mismatch("upper piece input not free"))?;
                let b = lo_out_from_id
                    .get(oc + 1)
                    .copied()
                    .flatten()
                    .ok_or_else(|| mismatch("upper piece input not free"))?;
                if b != a + 1 {
                    return Err(mismatch("upper piece inputs not adjacent below"));
                }
                new_lo.push((a, *p));
                oc += 2;
            }
        }
    }
    let mut new_hi: Vec<(usize, Piece)> = Vec::new();
    ic = 0;
    let mut out_pos = 0usize;
    // lower non-id pieces keep their OUTPUT positions, adjusted by the
    // width change the moved-down pieces introduce to their left
    let delta_left = |pos: usize, moved: &[(usize, Piece)]| -> i64 {
        moved
            .iter()
            .filter(|(a, _)| *a <= pos)
            .map(|(_, p)| p.outputs() as i64 - p.inputs() as i64)
            .sum()
    };
    for p in lo {
        match p {
            Piece::Id => {
                ic += 1;
                out_pos += 1;
            }
            Piece::Cup | Piece::Pos | Piece::Neg | Piece::Cap => {
                let shift = delta_left(ic, &new_lo);
                let anchored = (out_pos as i64 + shift).max(0) as usize;
                new_hi.push((anchored, *p));
                ic += p.inputs();
                out_pos += p.outputs();
            }
        }
    }

    let w_bottom = d.widths()[level];
    let lo_slice = materialize(w_bottom, &new_lo).ok_or_else(|| mismatch("pieces overlap"))?;
    let w_mid: usize = lo_slice.iter().map(|p| p.outputs()).sum();
    let hi_slice = materialize(w_mid, &new_hi).ok_or_else(|| mismatch("pieces overlap"))?;
    let candidate = replace(d, level, vec![lo_slice, hi_slice]);
    // a successful swap never changes widths above the pair
    if candidate.widths() != d.widths() {
        return Err(mismatch("swap would change strand counts"));
    }
    Ok(candidate)
}

fn translate_down(map: &[Option<usize>], out_pos: usize) -> Option<usize> {
    // position for a cup anchored before output `out_pos`: the input
    // position of the nearest id at or after it
    for o in out_pos..map.len() {
        if let Some(i) = map[o] {
            return Some(i);
        }
    }
    map.iter().rev().find_map(|x| x.map(|i| i + 1))
}

fn materialize(width: usize, pieces: &[(usize, Piece)]) -> Option<Vec<Piece>> {
    let mut sorted = pieces.to_vec();
    sorted.sort_by_key(|(a, _)| *a);
    let mut out = Vec::new();
    let mut cursor = 0usize;
    for (a, p) in sorted {
        if a < cursor {
            return None;
        }
        out.extend(std::iter::repeat(Piece::Id).take(a - cursor));
        out.push(p);
        cursor = a + p.inputs();
    }
    if cursor > width {
        return None;
    }
    out.extend(std::iter::repeat(Piece::Id).take(width - cursor));
    Some(out)
}

/// Apply `steps` random framed moves drawn from the full move set,
/// keeping the diagram within the given size bounds. Used by the
/// invariance property suites; deterministic for a fixed RNG.
pub fn random_move_sequence<R: Rng>(
    d: &SlicedDiagram,
    rng: &mut R,
    steps: usize,
    phone_n: u8,
    max_width: usize,
    max_slices: usize,
) -> SlicedDiagram {
    let mut cur = d.clone();
    for _ in 0..steps {
        let widths = cur.widths();
        let too_big = widths.iter().max().copied().unwrap_or(0) + 2 > max_width
            || cur.slices().len() + 6 > max_slices;
        // candidate (move, site, dir) triples for the chosen move family
        let mut options: Vec<(MoveKind, Site, Direction)> = Vec::new();
        match rng.gen_range(0..6u32) {
            0 if !too_big => {
                for (l, &w) in widths.iter().enumerate() {
                    for p in 0..w.saturating_sub(1) {
                        options.push((MoveKind::R2, Site { level: l, pos: p }, Direction::Insert));
                    }
                }
            }
            1 => {
                for l in 0..cur.slices().len().saturating_sub(1) {
                    options.push((MoveKind::R2, Site { level: l, pos: 0 }, Direction::Delete));
                }
            }
            2 => {
                for l in 0..cur.slices().len().saturating_sub(2) {
                    options.push((MoveKind::R3, Site { level: l, pos: 0 }, Direction::Slide));
                }
            }
            3 if !too_big => {
                for (l, &w) in widths.iter().enumerate() {
                    for p in 0..w {
                        options.push((
                            MoveKind::FramedR1,
                            Site { level: l, pos: p },
                            Direction::Insert,
                        ));
                    }
                }
            }
            4 if !too_big => {
                let negative = rng.gen_bool(0.5);
                for (l, &w) in widths.iter().enumerate() {
                    for p in 0..w {
                        options.push((
                            MoveKind::PhoneCord {
                                n: phone_n,
                                negative,
                            },
                            Site { level: l, pos: p },
                            Direction::Insert,
                        ));
                    }
                }
            }
            _ => {
                for l in 0..cur.slices().len().saturating_sub(1) {
                    options.push((MoveKind::Planar, Site { level: l, pos: 0 }, Direction::Slide));
                }
            }
        }
        // keep only sites where the pattern actually matches
        options.retain(|(mv, site, dir)| apply(&cur, *mv, *site, *dir).is_ok());
        if options.is_empty() {
            continue;
        }
        let (mv, site, dir) = options[rng.gen_range(0..options.len())];
        cur = apply(&cur, mv, site, dir).expect("pre-checked move");
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::SlicedDiagram;

    fn unknot() -> SlicedDiagram {
        SlicedDiagram::parse("cup / cap").unwrap()
    }

    fn hopf() -> SlicedDiagram {
        SlicedDiagram::parse("cup cup / id xpos1 id / id xpos1 id / cap cap").unwrap()
    }

    #[test]
    fn r2_insert_then_delete_round_trips() {
        let d = hopf();
        let d2 = apply(
            &d,
            MoveKind::R2,
            Site { level: 1, pos: 1 },
            Direction::Insert,
        )
        .unwrap();
        assert_eq!(d2.crossing_count(), 4);
        let d3 = apply(
            &d2,
            MoveKind::R2,
            Site { level: 1, pos: 0 },
            Direction::Delete,
        )
        .unwrap();
        assert_eq!(d3, d);
    }

    #[test]
    fn framed_r1_preserves_framing() {
        let d = unknot();
        let d2 = apply(
            &d,
            MoveKind::FramedR1,
            Site { level: 1, pos: 0 },
            Direction::Insert,
        )
        .unwrap();
        let t = d2.trace();
        assert_eq!(t.components, 1);
        assert_eq!(t.framing, vec![0]);
        assert_eq!(d2.crossing_count(), 2);
        let d3 = apply(
            &d2,
            MoveKind::FramedR1,
            Site { level: 1, pos: 0 },
            Direction::Delete,
        )
        .unwrap();
        assert_eq!(d3, d);
    }

    #[test]
    fn phone_cord_shifts_framing_by_n() {
        let d = unknot();
        let d2 = apply(
            &d,
            MoveKind::PhoneCord {
                n: 2,
                negative: false,
            },
            Site { level: 1, pos: 0 },
            Direction::Insert,
        )
        .unwrap();
        assert_eq!(d2.trace().framing, vec![2]);
        let d3 = apply(
            &d2,
            MoveKind::PhoneCord {
                n: 2,
                negative: false,
            },
            Site { level: 1, pos: 0 },
            Direction::Delete,
        )
        .unwrap();
        assert_eq!(d3, d);
    }

    #[test]
    fn insert_kinks_adds_framing() {
        let d2 = hopf().insert_kinks(&[0, 1]).unwrap();
        let t = d2.trace();
        assert_eq!(t.framing, vec![0, 1]);
        let d3 = hopf().insert_kinks(&[1, 1]).unwrap();
        assert_eq!(d3.trace().framing, vec![1, 1]);
        let d4 = hopf().insert_kinks_signed(&[-1, 2]).unwrap();
        assert_eq!(d4.trace().framing, vec![-1, 2]);
    }

    #[test]
    fn kink_insertion_requires_valid_component() {
        let err = unknot().insert_kinks(&[1, 1]).unwrap_err();
        assert!(matches!(err, TangleError::ComponentOutOfRange { .. }));
    }

    #[test]
    fn r3_slides_crossings() {
        let d = SlicedDiagram::parse_with_boundary("xpos1 / xpos2 / xpos1", 3).unwrap();
        let d2 = apply(
            &d,
            MoveKind::R3,
            Site { level: 0, pos: 0 },
            Direction::Slide,
        )
        .unwrap();
        assert_eq!(
            d2,
            SlicedDiagram::parse_with_boundary("xpos2 / xpos1 / xpos2", 3).unwrap()
        );
        let d3 = apply(
            &d2,
            MoveKind::R3,
            Site { level: 0, pos: 0 },
            Direction::Slide,
        )
        .unwrap();
        assert_eq!(d3, d);
    }

    #[test]
    fn planar_swap_of_distant_pieces() {
        let d = SlicedDiagram::parse_with_boundary("xpos1 / xpos3", 4).unwrap();
        let d2 = swap_slices(&d, 0).unwrap();
        assert_eq!(
            d2,
            SlicedDiagram::parse_with_boundary("xpos3 / xpos1", 4).unwrap()
        );
        // overlapping pieces refuse to swap
        let d = SlicedDiagram::parse_with_boundary("xpos1 / xpos2", 3).unwrap();
        assert!(swap_slices(&d, 0).is_err());
    }

    #[test]
    fn random_sequences_preserve_structure() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for base in [unknot(), hopf()] {
            let t0 = base.trace();
            let residues = |f: &[i64]| {
                let mut r: Vec<i64> = f.iter().map(|x| x.rem_euclid(2)).collect();
                r.sort();
                r
            };
            for _ in 0..20 {
                let moved = random_move_sequence(&base, &mut rng, 8, 2, 10, 60);
                let t1 = moved.trace();
                assert_eq!(t1.components, t0.components);
                // phone-cord moves change framing by multiples of n=2 only
                assert_eq!(residues(&t1.framing), residues(&t0.framing));
            }
        }
    }
}
