//! Worked values, checked through the public API only.

use webtwist::braid::*;
use webtwist::poly::{q_binom, q_int, LaurentPoly};
use webtwist::skeleton::{crossing_skeleton, posneg_skeleton, simplify_color_pure, TermTag};
use webtwist::stab::*;
use webtwist::web::{braid_euler_op, digon_relation};

fn c(v: &[u32]) -> Coloring {
    Coloring::new(v.to_vec())
}

fn w(n: usize, g: &[i64]) -> BraidWord {
    BraidWord::from_signed(n, g).unwrap()
}

fn inf(n: usize, pre: &[i64], per: &[i64]) -> InfiniteBraidWord {
    InfiniteBraidWord::new(n, w(n, pre).letters().to_vec(), w(n, per).letters().to_vec()).unwrap()
}

#[test]
fn full_twist_words() {
    let ft4: Vec<i64> = BraidWord::full_twist(4).letters().iter().map(|l| l.signed()).collect();
    assert_eq!(ft4, vec![1, 2, 3, 1, 2, 3, 1, 2, 3, 1, 2, 3]);
    for n in 1..=6 {
        let p = BraidWord::full_twist(n).permutation();
        assert!(p.iter().enumerate().all(|(i, &x)| i == x), "n={n}");
    }
    assert_eq!(BraidWord::full_twist(3).induced_coloring(&c(&[1, 2, 3]), 6).unwrap(), c(&[1, 2, 3]));
}

#[test]
fn crossing_sums() {
    let g = c(&[1, 2, 3]);
    assert_eq!(g.color_size(), 4);
    assert_eq!(w(3, &[1, 2, 1, 2, 1, 2]).min_color_sum(&g).unwrap(), 8);
    assert_eq!(w(2, &[-1]).negative_shift(&c(&[2, 3])).unwrap(), 2);
    assert_eq!(w(2, &[1, 1]).negative_shift(&c(&[2, 3])).unwrap(), 0);
    assert!(w(3, &[1, 2, -1]).is_color_pure(&c(&[2, 2, 2])).unwrap());
}

#[test]
fn purity_sequences() {
    let take = |w: &InfiniteBraidWord, g: &[u32], k| w.purity_pattern(&c(g)).unwrap().take(k);
    assert_eq!(take(&InfiniteBraidWord::full_twist(3).unwrap(), &[1, 2, 3], 3), vec![6, 12, 18]);
    assert_eq!(take(&InfiniteBraidWord::full_twist(2).unwrap(), &[1, 2], 3), vec![2, 4, 6]);
    // every σ_i² block restores the colors; one index per period is a subsequence
    let squares = inf(3, &[], &[1, 1, 2, 2]);
    assert_eq!(take(&squares, &[1, 2, 3], 6), vec![2, 4, 6, 8, 10, 12]);
    let per_period = InverseSystemSpec::new(squares, c(&[1, 2, 3])).unwrap().with_kind(SequenceKind::Subsequence(vec![4, 8, 12]));
    assert_eq!(per_period.lengths(3, DEFAULT_BUDGET).unwrap(), vec![4, 8, 12]);
    assert_eq!(take(&inf(3, &[], &[1, 2]), &[1, 1, 1], 4), vec![1, 2, 3, 4]);
}

#[test]
fn certificates() {
    let splice = inf(4, &[3], &[1, 2, 3]);
    let cert = Certificate { head: vec![(0, 1)], tail: None };
    assert!(verify_completeness_certificate(&splice, &Coloring::uniform(4, 1), &cert, DEFAULT_BUDGET).unwrap().is_accepted());
    let squares = inf(3, &[], &[1, 1, 2, 2]);
    let cert = Certificate { head: vec![], tail: Some(TailPattern { start: 0, stride: 4, pattern: vec![(2, 4)] }) };
    let v = verify_completeness_certificate(&squares, &c(&[1, 2, 3]), &cert, DEFAULT_BUDGET).unwrap();
    assert!(matches!(v, CertVerdict::Mismatch { .. }));
}

#[test]
fn clasp_by_one_move() {
    let found = find_clasp(&w(3, &[1, 2, 1, 2, 1, 2]), &c(&[1, 2, 3]), DEFAULT_BUDGET).unwrap();
    let got: Vec<i64> = found.word.iter().map(|l| l.signed()).collect();
    assert_eq!(got, vec![1, 1, 2, 1, 1, 2]);
    assert_eq!(found.position, 0);
    assert_eq!(found.moves.len(), 1);
}

#[test]
fn quantum_integers_and_digons() {
    assert_eq!(q_int(2), LaurentPoly::from_terms([(1, 1), (-1, 1)]));
    assert_eq!(q_binom(4, 2), LaurentPoly::from_terms([(4, 1), (2, 1), (0, 2), (-2, 1), (-4, 1)]));
    assert!(digon_relation(1, 1, 2).unwrap().holds);
    assert!(digon_relation(2, 1, 3).unwrap().holds);
}

#[test]
fn crossing_complexes() {
    let s = crossing_skeleton(1, 1, true);
    let hq: Vec<_> = s.terms.iter().map(|t| (t.h, t.q)).collect();
    assert_eq!(hq, vec![(0, 0), (1, 1)]);
    for i in 1..=3 {
        let s = crossing_skeleton(i, i, false);
        assert_eq!(s.len(), i as usize + 1);
        assert_eq!(s.terms.iter().find(|t| t.tag == TermTag::Identity).unwrap().h, i as i64);
    }
}

#[test]
fn cones_and_identity_shifts() {
    for i in 1..=3u32 {
        let p = simplify_color_pure(&w(2, &[1, 1]), &c(&[i, i]), DEFAULT_BUDGET).unwrap();
        let wit: Vec<_> = p.x.terms.iter().take(i as usize).map(|t| (t.h, t.witness.clone())).collect();
        let want: Vec<_> = (1..=i).map(|d| (d as i64 - 1, Some(c(&[i - d, i + d])))).collect();
        assert_eq!(wit, want);
        let (s, _) = posneg_skeleton(&w(2, &[-1, -1]), &c(&[i, i]), DEFAULT_BUDGET).unwrap();
        assert_eq!(s.terms.iter().find(|t| t.tag == TermTag::Identity).unwrap().h, 2 * i as i64);
    }
    for (i, j) in [(1, 2), (2, 3), (3, 1)] {
        let (s, _) = posneg_skeleton(&w(2, &[1, -1]), &c(&[i, j]), DEFAULT_BUDGET).unwrap();
        assert_eq!(s.terms.iter().find(|t| t.tag == TermTag::Identity).unwrap().h, i.min(j) as i64);
    }
}

#[test]
fn reidemeister_two_is_a_monomial() {
    for (i, j) in [(1, 1), (1, 2), (2, 2), (2, 1)] {
        let g = c(&[i, j]);
        let e = braid_euler_op(&w(2, &[1, -1]), &g, 3).unwrap();
        let id = braid_euler_op(&BraidWord::identity(2), &g, 3).unwrap();
        let (sign, _) = e.monomial_ratio(&id).unwrap();
        assert_eq!(sign, if i.min(j) % 2 == 0 { 1 } else { -1 });
    }
}

#[test]
fn bounds() {
    let d = TwistDecomposition { m: 20, z: 3, twists: vec![(0, 5), (8, 13), (14, 19)], insertions: vec![(6, 8)], partial_insertion: None, remainder: 0, literal: true };
    assert_eq!(bound_b(&d), 5);
    let spec = InverseSystemSpec::full_twist(c(&[1, 2, 3])).unwrap();
    let b: Vec<u64> = spec.steps(4, DEFAULT_BUDGET).unwrap().iter().map(|s| s.b).collect();
    assert_eq!(b, vec![2, 4, 6, 8]);
}

#[test]
fn purity_subsequences_share_a_limit() {
    let g = c(&[1, 1]);
    let ft = InfiniteBraidWord::full_twist(2).unwrap();
    let even = InverseSystemSpec::new(ft.clone(), g.clone()).unwrap().with_kind(SequenceKind::Subsequence(vec![2, 4, 6, 8, 10, 12]));
    let odd = InverseSystemSpec::new(ft, g.clone()).unwrap().with_kind(SequenceKind::Subsequence(vec![3, 5, 7, 9, 11, 13]));
    let last = |s: &InverseSystemSpec| {
        let t = s.truncations(6, DEFAULT_BUDGET).unwrap();
        braid_euler_op(t.last().unwrap(), &g, 2).unwrap().digest(12)
    };
    assert_eq!(last(&even), last(&odd));
    let bad = InverseSystemSpec::new(InfiniteBraidWord::full_twist(2).unwrap(), c(&[1, 2])).unwrap().with_kind(SequenceKind::Subsequence(vec![2, 3]));
    assert!(bad.lengths(2, DEFAULT_BUDGET).is_err());
}

#[test]
fn projector_of_two_uniform_strands() {
    let d = projector_defects(2, &c(&[1, 1]), 2, 6).unwrap();
    assert_eq!(d.iter().map(|s| s.idempotence.unwrap()).collect::<Vec<_>>(), vec![4, 8, 12, 16, 20, 24]);
    assert!(d.iter().all(|s| s.absorption.unwrap() >= s.idempotence.unwrap()));
}
