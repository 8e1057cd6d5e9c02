//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (run with `--nocapture` to see the lines for passing tests).
//!
//! Criterion 2's headline Hopf value is asserted exactly as specified and
//! is expected to fail: the computed invariant is 16, not 12, and the
//! test's message carries the full analysis of why no labeling
//! convention can produce 12 for this operation table. Everything else
//! is green.

mod common;

use birack_core::exec::Mode;
use birack_core::labeling::{
    count_labelings, enumerate_labelings, free_variable_values, phi_integral,
};
use birack_core::qweight::phi_q_polynomial;
use birack_core::ring::{LaurentPoly, Matrix, Scalar};
use birack_core::search;
use birack_core::tangle::{random_move_sequence, BraidWord};
use birack_core::{Birack, SlicedDiagram};
use common::*;
use std::time::Instant;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "[{criterion}] {}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "[{criterion}] FAIL: {detail}");
}

#[test]
fn acceptance_1_birack_validation_and_rank() {
    let hopf3 = birack_fixture("birack_hopf3.json");
    assert_eq!(hopf3.rank(), 2, "3-element example must have rank 2");
    let ex0 = birack_fixture("birack_ex0.json");
    assert_eq!(ex0.rank(), 2);

    let mut counts = Vec::new();
    let started = Instant::now();
    for n in 1..=3usize {
        let out = search::enumerate_biracks(n, false, Mode::Parallel).unwrap();
        assert!(
            out.results.iter().all(|b| b.rank() == 1 || b.rank() == 2),
            "rank theorem violated at n={n}"
        );
        counts.push(out.results.len());
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "n<=3 enumeration took {elapsed:?}, budget is 60s"
    );
    report(
        "criterion 1",
        true,
        &format!(
            "3-element example rank 2; enumeration found {counts:?} biracks for n=1,2,3, all \
             of rank 1 or 2, in {elapsed:?}"
        ),
    );
}

#[test]
fn acceptance_2a_hopf_integral_counting_value() {
    let b = birack_fixture("birack_hopf3.json");
    let rep = phi_integral(&hopf_diagram(), &b, Mode::Parallel).unwrap();
    let mut cells: Vec<usize> = rep.table.iter().map(|(_, c)| *c).collect();
    cells.sort();
    let pass = rep.total == 12 && cells == vec![1, 3, 3, 5];
    report(
        "criterion 2a",
        pass,
        &format!(
            "expected Hopf total 12 with per-framing counts {{1,3,3,5}}; computed total {} \
             with cells {:?} (tile order (0,0),(1,0),(0,1),(1,1): {:?}). Analysis: this \
             operation table is a constant action, B(x,y) = (sigma y, x) with sigma = (1 2), \
             so along any diagram each component's labels transform independently of the \
             other component and every per-framing count factors as a product of \
             per-component fixed-point counts, each 1 or 3; a cell of 5 and a total of 12 \
             are therefore unreachable under any crossing/cup/cap convention compatible \
             with the table. Exhaustive enumeration of all 48 three-element involutory \
             biracks yields only the tile profiles (1,3,3,9) and (5,3,3,5), both with \
             total 16. The computed value 16 is framed-move invariant (criterion 2c).",
            rep.total,
            cells,
            rep.table.iter().map(|(_, c)| *c).collect::<Vec<_>>(),
        ),
    );
}

#[test]
fn acceptance_2b_integral_counting_powers_of_two() {
    let b = birack_fixture("birack_ex3.json");
    let cases: Vec<(&str, SlicedDiagram, usize)> = vec![
        ("unknot", unknot_diagram(), 2),
        ("hopf", hopf_diagram(), 4),
        ("trefoil", BraidWord::parse("1 1 1").unwrap().closure(), 2),
        (
            "3-unlink",
            SlicedDiagram::parse("cup cup cup / cap cap cap").unwrap(),
            8,
        ),
    ];
    let mut got = Vec::new();
    for (name, d, expect) in &cases {
        let total = phi_integral(d, &b, Mode::Parallel).unwrap().total;
        assert_eq!(total, *expect, "phi_Z({name}) over the 2-element birack");
        got.push(format!("{name}={total}"));
    }
    report(
        "criterion 2b",
        true,
        &format!("2-element birack counts are 2^components: {}", got.join(", ")),
    );
}

#[test]
fn acceptance_2c_hopf_counting_invariance() {
    use rand::SeedableRng;
    let b = birack_fixture("birack_hopf3.json");
    let hopf = hopf_diagram();
    let base = phi_integral(&hopf, &b, Mode::Parallel).unwrap().total;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2026);
    for i in 0..60 {
        let moved = random_move_sequence(&hopf, &mut rng, 6, b.rank(), 8, 60);
        let total = phi_integral(&moved, &b, Mode::Sequential).unwrap().total;
        assert_eq!(total, base, "rewrite {i} changed the integral invariant");
    }
    // mod-2 periodicity of the basic counts
    let cell = |r: &[usize]| {
        count_labelings(&hopf.insert_kinks(r).unwrap(), &b, None, Mode::Sequential).unwrap()
    };
    assert_eq!(cell(&[2, 0]), cell(&[0, 0]));
    assert_eq!(cell(&[0, 2]), cell(&[0, 0]));
    assert_eq!(cell(&[3, 1]), cell(&[1, 1]));
    report(
        "criterion 2c",
        true,
        &format!(
            "integral Hopf invariant {base} unchanged by 60 random framed rewrites; basic \
             counts are 2-periodic in each framing coordinate"
        ),
    );
}

#[test]
fn acceptance_3_kauffman_weight() {
    let w = weight_fixture("weight_kauffman.json");
    let vars = w.delta().vars().clone();
    let p = |s: &str| LaurentPoly::parse(s, &vars).unwrap();

    let rep = w.verify();
    assert!(rep.pass, "axioms: {rep}");

    // closed 0-framed unknot evaluates to the cap-cup pairing
    let d = unknot_diagram();
    let labs = enumerate_labelings(&d, w.birack(), None, Mode::Sequential).unwrap();
    let value = w.evaluate(&d, &labs[0]).unwrap();
    let oracle = w.cap(0).mul(w.cup(0)).unwrap();
    assert_eq!(value, oracle);
    assert_eq!(value, Matrix::scalar(p("-A^2-A^-2")));

    // normalized unknot value is framing-independent
    let unknot_value = w.phi_qm(&d, Mode::Sequential).unwrap();
    for wr in [-2i64, -1, 1, 2] {
        let dw = d.insert_kinks_signed(&[wr]).unwrap();
        let ms = w.phi_qm(&dw, Mode::Sequential).unwrap();
        assert_eq!(
            ms.render(),
            unknot_value.render(),
            "framing {wr} changed the normalized unknot value"
        );
    }

    // chirality: both trefoils against the independent skein oracle
    let mut values = vec![value.at(0, 0).clone()];
    for word in [vec![1, 1, 1], vec![-1, -1, -1]] {
        let braid = BraidWord::new(2, word.clone()).unwrap();
        let ms = w.phi_qm(&braid.closure(), Mode::Sequential).unwrap();
        assert_eq!(ms.entries().len(), 1);
        assert_eq!(ms.total(), 1);
        let got = ms.entries()[0].0.at(0, 0).clone();
        let writhe: i64 = word.iter().map(|&g| g.signum() as i64).sum();
        let oracle = bracket_of_closure(&word, 2, &vars)
            .mul(&p("-A^3").pow(-writhe).unwrap())
            .unwrap();
        assert_eq!(got, oracle, "skein oracle mismatch for {word:?}");
        values.push(got);
    }
    assert_ne!(values[0], values[1]);
    assert_ne!(values[0], values[2]);
    assert_ne!(values[1], values[2], "mirror trefoils must differ");
    report(
        "criterion 3",
        true,
        &format!(
            "all axioms pass with the printed kink scalar; unknot value {}; both trefoil \
             closures match the recursive skein oracle exactly and are distinguished from \
             each other and from the unknot",
            values[0].render()
        ),
    );
}

#[test]
fn acceptance_4_heterogeneous_weight() {
    let w = weight_fixture("weight_ex3.json");
    let rep = w.verify();
    assert!(rep.pass, "axioms: {rep}");

    let vars = w.delta().vars().clone();
    let p = |s: &str| LaurentPoly::parse(s, &vars).unwrap();
    let mat4 = |cells: [&str; 16]| {
        Matrix::new(4, 4, cells.iter().map(|s| p(s)).collect::<Vec<_>>()).unwrap()
    };
    let printed = mat4([
        "0", "0", "0", "0", //
        "0", "a^-2", "-b^2", "0", //
        "0", "-b^2", "a^-2", "0", //
        "0", "0", "0", "0",
    ]);
    let companion = mat4([
        "0", "0", "0", "0", //
        "0", "-a^2", "b^-2", "0", //
        "0", "b^-2", "-a^2", "0", //
        "0", "0", "0", "0",
    ]);

    let d = clasp_t3();
    let labs = enumerate_labelings(&d, w.birack(), None, Mode::Sequential).unwrap();
    assert_eq!(labs.len(), 4);
    let mut printed_from = Vec::new();
    for f in &labs {
        if w.evaluate(&d, f).unwrap() == printed {
            printed_from.push(free_variable_values(&d, f));
        }
    }
    assert!(
        !printed_from.is_empty(),
        "no labeling of the clasp evaluates to the displayed matrix"
    );

    // the displayed factor selections (cap 2, inverse blocks at (1,2) and
    // (2,1), cup 2) multiply to the companion multiset entry; both values
    // occur with multiplicity 2
    let id2 = Matrix::identity(2, &p("0"));
    let literal = id2
        .kron(w.cap(1))
        .kron(&id2)
        .mul(&w.crossing_inv(0, 1).kron(w.crossing_inv(1, 0)))
        .unwrap()
        .mul(&id2.kron(w.cup(1)).kron(&id2))
        .unwrap();
    assert_eq!(literal, companion);
    let ms = w.phi_qm(&d, Mode::Sequential).unwrap();
    let mut expect = vec![(printed.clone(), 2usize), (companion, 2usize)];
    expect.sort_by_key(|(m, _)| m.render());
    assert_eq!(
        ms.entries()
            .iter()
            .map(|(m, c)| (m.clone(), *c))
            .collect::<Vec<_>>(),
        expect
    );

    let class = w.classify();
    assert!(!class.homogeneous, "must classify as heterogeneous");
    report(
        "criterion 4",
        true,
        &format!(
            "axioms pass; the displayed 4x4 contraction value arises exactly from the clasp \
             labelings with free variables {printed_from:?}; the full multiset is two copies \
             of each of the two displayed matrices; classification: heterogeneous"
        ),
    );
}

#[test]
fn acceptance_5_braid_weights() {
    use rand::{Rng, SeedableRng};
    let w = braid_weight_fixture("bweight_paper.json");
    let rep = w.verify();
    assert!(rep.pass, "braid relations: {rep}");

    let trefoil = BraidWord::parse("1 1 1 2").unwrap();
    let unknot = BraidWord::parse("1 -1 1 2").unwrap();
    let ms_t = w.phi_mw(&trefoil, Mode::Parallel).unwrap();
    let ms_u = w.phi_mw(&unknot, Mode::Parallel).unwrap();
    assert_eq!(ms_t.render(), "{1 x 2*y^2, 1 x 2*z^2}");
    assert_eq!(ms_u.render(), "{1 x 2*y, 1 x 2*z}");

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for base in [&trefoil, &unknot] {
        let expect = w.phi_mw(base, Mode::Sequential).unwrap().render();
        for _ in 0..50 {
            let len = rng.gen_range(1..=3usize);
            let a: Vec<i32> = (0..len)
                .map(|_| {
                    let g = rng.gen_range(1..=2i32);
                    if rng.gen_bool(0.5) {
                        g
                    } else {
                        -g
                    }
                })
                .collect();
            let mut word = a.clone();
            word.extend(base.word());
            word.extend(a.iter().rev().map(|g| -g));
            let conj = BraidWord::new(3, word).unwrap();
            let got = w.phi_mw(&conj, Mode::Sequential).unwrap().render();
            assert_eq!(got, expect, "conjugation by {a:?} changed the multiset");
        }
    }
    report(
        "criterion 5",
        true,
        &format!(
            "table verifies under the |j-k| >= 2 far-commutativity reading; trace multisets \
             {} and {}; 100 random conjugations preserve both multisets",
            ms_t.render(),
            ms_u.render()
        ),
    );
}

#[test]
fn acceptance_6_invariance_property_suite() {
    use rand::SeedableRng;
    let combos: Vec<(&str, Birack, birack_core::QuantumWeight<LaurentPoly>)> = vec![
        (
            "3-element birack + homogeneous bracket weight",
            birack_fixture("birack_hopf3.json"),
            weight_fixture("weight_kauffman_hopf3.json"),
        ),
        (
            "2-element birack + homogeneous bracket weight",
            birack_fixture("birack_ex3.json"),
            weight_fixture("weight_kauffman_ex3.json"),
        ),
        (
            "2-element birack + heterogeneous weight",
            birack_fixture("birack_ex3.json"),
            weight_fixture("weight_ex3.json"),
        ),
    ];
    let diagrams: Vec<(&str, SlicedDiagram)> = vec![
        ("unknot", unknot_diagram()),
        ("trefoil", BraidWord::parse("1 1 1").unwrap().closure()),
        ("hopf", hopf_diagram()),
    ];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    let mut trials = 0usize;
    for (cname, birack, weight) in &combos {
        for (dname, d) in &diagrams {
            let base_phi_b = count_labelings(d, birack, None, Mode::Sequential).unwrap();
            let base_phi_z = phi_integral(d, birack, Mode::Sequential).unwrap().total;
            let base_ms = weight.phi_qm(d, Mode::Parallel).unwrap();
            assert_eq!(base_ms.total(), base_phi_z, "{cname}/{dname}");
            for _ in 0..100 {
                let moved = random_move_sequence(d, &mut rng, 4, birack.rank(), 6, 40);
                let phi_b = count_labelings(&moved, birack, None, Mode::Sequential).unwrap();
                assert_eq!(phi_b, base_phi_b, "{cname}/{dname}: phi_B changed");
                let phi_z = phi_integral(&moved, birack, Mode::Sequential).unwrap().total;
                assert_eq!(phi_z, base_phi_z, "{cname}/{dname}: phi_Z changed");
                let ms = weight.phi_qm(&moved, Mode::Sequential).unwrap();
                assert_eq!(
                    ms.render(),
                    base_ms.render(),
                    "{cname}/{dname}: multiset changed on {}",
                    moved.render()
                );
                assert_eq!(ms.total(), phi_z, "{cname}/{dname}: |multiset| != phi_Z");
                trials += 1;
            }
        }
    }
    report(
        "criterion 6",
        true,
        &format!(
            "{trials} randomized rewrite sequences across 9 diagram/weight combinations left \
             the basic count, the integral count and the signature multiset unchanged, with \
             |multiset| = integral count in every trial"
        ),
    );
}

#[test]
fn acceptance_7_oracle_equivalence() {
    let biracks = [
        birack_fixture("birack_hopf3.json"),
        birack_fixture("birack_ex3.json"),
        birack_fixture("birack_ex0.json"),
        Birack::tsr(4, 1, 2, 1).unwrap(),
    ];
    let corpus: Vec<SlicedDiagram> = vec![
        unknot_diagram(),
        unknot_diagram().insert_kinks(&[1]).unwrap(),
        unknot_diagram().insert_kinks_signed(&[-1]).unwrap(),
        unknot_diagram().insert_kinks(&[2]).unwrap(),
        hopf_diagram(),
        hopf_diagram().insert_kinks(&[1, 1]).unwrap(),
        BraidWord::parse("1 1 1").unwrap().closure(),
        BraidWord::parse("1 -1").unwrap().closure(),
        BraidWord::parse("1 1 1 2").unwrap().closure(),
    ];
    let mut checked = 0usize;
    for d in &corpus {
        let arcs = d.trace().semiarcs;
        assert!(arcs <= 8, "corpus diagram has {arcs} semiarcs");
        for b in &biracks {
            let fast = count_labelings(d, b, None, Mode::Sequential).unwrap();
            let brute = brute_force_labeling_count(d, b);
            assert_eq!(fast, brute, "oracle disagreement on {}", d.render());
            checked += 1;
        }
    }
    report(
        "criterion 7",
        true,
        &format!(
            "constraint propagation equals exhaustive assignment counting on {checked} \
             diagram/birack pairs (all diagrams have at most 8 semiarcs)"
        ),
    );
}

#[test]
fn acceptance_8_search_soundness_and_completeness() {
    // independent naive loop over all 24 pair permutations at n = 2
    let mut naive = Vec::new();
    let mut perm = [0usize, 1, 2, 3];
    loop {
        let pairs = [(0, 0), (0, 1), (1, 0), (1, 1)];
        let mut u = vec![vec![0usize; 2]; 2];
        let mut l = vec![vec![0usize; 2]; 2];
        for (i, &(x, y)) in pairs.iter().enumerate() {
            let (a, bb) = pairs[perm[i]];
            u[y][x] = a + 1;
            l[x][y] = bb + 1;
        }
        if let Ok(b) = Birack::from_matrix(&u, &l) {
            naive.push(b);
        }
        if !next_perm4(&mut perm) {
            break;
        }
    }
    let fast = search::enumerate_biracks(2, false, Mode::Parallel).unwrap();
    assert_eq!(fast.candidates, 24);
    assert_eq!(fast.results.len(), naive.len());
    for b in &naive {
        assert!(fast.results.contains(b), "missing {:?}", b.to_matrix());
    }
    // every enumerated birack revalidates from its own matrix
    for b in &fast.results {
        let (u, l) = b.to_matrix();
        assert_eq!(&Birack::from_matrix(&u, &l).unwrap(), b);
    }

    // braid-weight search over the antidiagonal template rediscovers the
    // published 3-braid table (named x, y, z, w in slot order)
    let birack = birack_fixture("birack_ex3.json");
    let found = search::search_braid_weights(
        &birack,
        3,
        search::Template::Antidiag,
        1 << 40,
        Mode::Parallel,
    )
    .unwrap();
    let published = braid_weight_fixture("bweight_paper.json");
    let render_table = |w: &birack_core::BraidWeight<LaurentPoly>| {
        let mut parts = Vec::new();
        for j in 1..3 {
            for x in 0..2 {
                for y in 0..2 {
                    parts.push(w.sigma(j, x, y).render());
                }
            }
        }
        parts.join(";")
    };
    let want = render_table(&published);
    assert!(
        found.results.iter().any(|w| render_table(w) == want),
        "published table not rediscovered among {} results",
        found.results.len()
    );
    for w in &found.results {
        assert!(w.verify().pass, "search emitted a non-verifying weight");
    }

    // scalar quantum-weight searches: results re-verify; the all-ones
    // weight is present over the singleton birack
    let singleton = Birack::from_matrix(&[vec![1]], &[vec![1]]).unwrap();
    let qw = search::search_quantum_weights(&singleton, 1, 5, 1 << 30, Mode::Parallel).unwrap();
    assert!(qw.results.iter().any(|(w, _)| {
        w.crossing(0, 0).at(0, 0).value() == 1
            && w.cap(0).at(0, 0).value() == 1
            && w.cup(0).at(0, 0).value() == 1
    }));
    let qw3 = search::search_quantum_weights(&birack, 1, 3, 1 << 30, Mode::Parallel).unwrap();
    for (w, _) in &qw3.results {
        assert!(w.verify().pass);
    }
    report(
        "criterion 8",
        true,
        &format!(
            "n=2 enumeration matches the naive 24-candidate loop ({} biracks); the antidiagonal \
             template search re-finds the published 3-braid table among {} verified solutions; \
             {} + {} scalar weights over Z_5/Z_3 all re-verify",
            naive.len(),
            found.results.len(),
            qw.results.len(),
            qw3.results.len()
        ),
    );
}

fn next_perm4(p: &mut [usize; 4]) -> bool {
    let mut i = 3;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = 3;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[test]
fn acceptance_supplement_polynomial_form() {
    // evaluating the polynomial form at u = 1 is the multiplicity sum,
    // which equals the integral invariant
    let w = weight_fixture("weight_kauffman_hopf3.json");
    let d = hopf_diagram();
    let ms = w.phi_qm(&d, Mode::Parallel).unwrap();
    let poly = phi_q_polynomial(&ms).unwrap();
    let phi_z = phi_integral(&d, w.birack(), Mode::Sequential).unwrap().total;
    assert_eq!(ms.total(), phi_z);
    assert!(poly.contains("u^{"), "{poly}");
    println!("[supplement] phi_Q(hopf) = {poly}");
}
