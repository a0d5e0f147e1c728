//! Combinatorial skeletons of colored braid complexes: direct sums of shifted ladder webs.

use crate::braid::{find_clasp, find_reducible_pair, BraidMove, BraidWord, Coloring, Letter};
use crate::error::{Error, Result};
use crate::operator::{OperatorQ, StateSpace};
use crate::poly::{q_binom, LaurentPoly};
use crate::web::{crossing_ladder, crossing_terms, web_op, Column, LadderWeb, RungDirection};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermTag {
    Identity,
    Other,
}

/// `q^q h^h web`, with an optional intermediate coloring of smaller color size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonTerm {
    pub h: i64,
    pub q: i64,
    pub web: LadderWeb,
    pub tag: TermTag,
    pub witness: Option<Coloring>,
}

impl SkeletonTerm {
    fn sign_weight(&self) -> LaurentPoly {
        LaurentPoly::monomial(self.q, if self.h.rem_euclid(2) == 0 { 1 } else { -1 })
    }

    pub fn shifted(&self, h: i64, q: i64) -> SkeletonTerm {
        SkeletonTerm { h: self.h + h, q: self.q + q, ..self.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexSkeleton {
    pub top: Coloring,
    pub terms: Vec<SkeletonTerm>,
}

fn crossings(letters: &[Letter]) -> Vec<Column> {
    letters.iter().map(|l| Column::Crossing { position: l.gen, positive: l.positive }).collect()
}

fn term(top: &Coloring, cols: Vec<Column>, h: i64, q: i64) -> SkeletonTerm {
    let web = LadderWeb { top: top.clone(), columns: cols };
    let tag = if web.is_identity() { TermTag::Identity } else { TermTag::Other };
    let witness = web.witness_below(top.color_size());
    SkeletonTerm { h, q, web, tag, witness }
}

fn signed_sum(terms: &[SkeletonTerm], top: &Coloring, bottom: &[u32], rank: u32) -> Result<OperatorQ> {
    let zero = OperatorQ::zero(StateSpace::get(top.labels(), rank), StateSpace::get(bottom, rank));
    let parts: Vec<OperatorQ> = terms
        .par_iter()
        .map(|t| Ok(web_op(&t.web, rank)?.scale(&t.sign_weight())))
        .collect::<Result<_>>()?;
    parts.iter().try_fold(zero, |acc, p| acc.add(p))
}

impl ComplexSkeleton {
    pub fn new(top: Coloring, terms: Vec<SkeletonTerm>) -> Result<Self> {
        let s = ComplexSkeleton { top, terms };
        s.bottom()?;
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common bottom coloring of all terms.
    pub fn bottom(&self) -> Result<Vec<u32>> {
        let mut out: Option<Vec<i64>> = None;
        for t in &self.terms {
            if t.web.top != self.top {
                return Err(Error::BoundaryMismatch(format!("term top {} differs from {}", t.web.top, self.top)));
            }
            let b = t.web.bottom();
            match &out {
                None => out = Some(b),
                Some(o) if *o != b => return Err(Error::BoundaryMismatch(format!("bottoms {o:?} and {b:?}"))),
                _ => {}
            }
        }
        let b = out.unwrap_or_else(|| self.top.labels().iter().map(|&x| x as i64).collect());
        b.iter().map(|&x| u32::try_from(x).map_err(|_| Error::BoundaryMismatch(format!("bottom {b:?}")))).collect()
    }

    /// `Σ (-1)^h q^q · web`
    pub fn euler(&self, rank: u32) -> Result<OperatorQ> {
        signed_sum(&self.terms, &self.top, &self.bottom()?, rank)
    }

    pub fn shifted(&self, h: i64, q: i64) -> ComplexSkeleton {
        ComplexSkeleton { top: self.top.clone(), terms: self.terms.iter().map(|t| t.shifted(h, q)).collect() }
    }

    /// Vertical stacking with `self` on top: all pairs of terms, degrees added.
    pub fn stack(&self, below: &ComplexSkeleton) -> Result<ComplexSkeleton> {
        let b = self.bottom()?;
        if b != below.top.labels() {
            return Err(Error::BoundaryMismatch(format!("bottom {b:?} against top {}", below.top)));
        }
        let mut terms = Vec::with_capacity(self.len() * below.len());
        for s in &self.terms {
            for t in &below.terms {
                let web = s.web.concat(&LadderWeb { top: Coloring::new(b.clone()), columns: t.web.columns.clone() })?;
                terms.push(term(&self.top, web.columns, s.h + t.h, s.q + t.q));
            }
        }
        Ok(ComplexSkeleton { top: self.top.clone(), terms })
    }

    /// Terms with nonnegative degree, a witness, and witness color size below that of the top.
    pub fn contract_violations(&self) -> Vec<String> {
        contract_violations(&self.terms, &self.top)
    }
}

fn contract_violations(terms: &[SkeletonTerm], top: &Coloring) -> Vec<String> {
    let bound = top.color_size();
    let mut out = Vec::new();
    for (i, t) in terms.iter().enumerate() {
        if t.h < 0 {
            out.push(format!("term {i} sits in negative degree {}", t.h));
        }
        match &t.witness {
            None => out.push(format!("term {i} has no witness")),
            Some(w) => {
                if w.color_size() >= bound {
                    out.push(format!("term {i} witness {w} is not below color size {bound}"));
                }
                let present = t.web.label_walk().iter().any(|l| l.iter().map(|&x| x as u32).eq(w.labels().iter().copied()));
                if !present {
                    out.push(format!("term {i} witness {w} is not a coloring of its web"));
                }
            }
        }
    }
    out
}

/// Crossing complex on two strands labelled `(i, j)`.
pub fn crossing_skeleton(i: u32, j: u32, positive: bool) -> ComplexSkeleton {
    let top = Coloring::new(vec![i, j]);
    let terms = crossing_terms(i, j, positive)
        .into_iter()
        .map(|t| term(&top, crossing_ladder(i, j, 1, t.k).to_vec(), t.h, t.q))
        .collect();
    ComplexSkeleton { top, terms }
}

/// Pieces `A_i` of a multicone with their shifts `h^{h_i} q^{q_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MulticoneSpec {
    pub parts: Vec<(i64, i64, ComplexSkeleton)>,
}

/// Flattens a multicone: the underlying bigraded object is the shifted direct sum.
pub fn assemble_multicone(spec: &MulticoneSpec) -> Result<ComplexSkeleton> {
    let first = spec.parts.first().ok_or_else(|| Error::Precondition("empty multicone".into()))?;
    let top = first.2.top.clone();
    let bottom = first.2.bottom()?;
    let mut terms = Vec::new();
    for (h, q, s) in &spec.parts {
        if s.top != top || s.bottom()? != bottom {
            return Err(Error::BoundaryMismatch(format!("multicone piece {} does not match {top}", s.top)));
        }
        terms.extend(s.terms.iter().map(|t| t.shifted(*h, *q)));
    }
    Ok(ComplexSkeleton { top, terms })
}

/// Expands the crossing at letter index `t` of `b` as a multicone over its resolutions;
/// the other crossings stay in the webs.
pub fn expand_crossing(b: &BraidWord, gamma: &Coloring, t: usize) -> Result<MulticoneSpec> {
    let cols = b.colorings(gamma)?;
    let l = *b.letters().get(t).ok_or(Error::PositionOutOfRange { pos: t, len: b.len() })?;
    let c = &cols[t];
    let (i, j) = (c.labels()[l.left()], c.labels()[l.left() + 1]);
    let (left, right) = (crossings(&b.letters()[..t]), crossings(&b.letters()[t + 1..]));
    let parts = crossing_terms(i, j, l.positive)
        .into_iter()
        .map(|ct| {
            let mut w = left.clone();
            w.extend(crossing_ladder(i, j, l.gen, ct.k));
            w.extend(right.iter().copied());
            (ct.h, ct.q, ComplexSkeleton { top: gamma.clone(), terms: vec![term(gamma, w, 0, 0)] })
        })
        .collect();
    Ok(MulticoneSpec { parts })
}

/// Change of `Σ min(i, j)` over crossings when sliding a web from `before` to `after`.
pub fn slide_shift(before: &LadderWeb, after: &LadderWeb) -> Result<i64> {
    if before.top != after.top || before.bottom() != after.bottom() {
        return Err(Error::BoundaryMismatch("slide changes the boundary".into()));
    }
    Ok(before.crossing_min_sum() - after.crossing_min_sum())
}

/// Steps taken while simplifying a color-pure braid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum LogEntry {
    UniColored { position: usize, color: u32, positive: bool },
    Clasp { position: usize, colors: (u32, u32), moves: Vec<BraidMove> },
    Cancel { position: usize, colors: (u32, u32) },
    TrapezoidSplit { position: usize, colors: (u32, u32), summands: usize },
}

/// `B ≃ Cone(X → I)`. `x` holds a complex containing `X` as a direct summand; its other
/// summands are the trapezoid pieces listed in `eliminated`, which cancel in homotopy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConePresentation {
    pub gamma: Coloring,
    pub identity: SkeletonTerm,
    pub x: ComplexSkeleton,
    pub eliminated: Vec<SkeletonTerm>,
    pub log: Vec<LogEntry>,
}

impl ConePresentation {
    /// `χ(X) = χ(x) - χ(eliminated)`
    pub fn euler_x(&self, rank: u32) -> Result<OperatorQ> {
        let b = self.gamma.labels();
        signed_sum(&self.x.terms, &self.gamma, b, rank)?.sub(&signed_sum(&self.eliminated, &self.gamma, b, rank)?)
    }

    /// `χ(B) = χ(I) - χ(X)`
    pub fn euler(&self, rank: u32) -> Result<OperatorQ> {
        OperatorQ::identity(StateSpace::get(self.gamma.labels(), rank)).sub(&self.euler_x(rank)?)
    }

    pub fn contract_violations(&self) -> Vec<String> {
        let mut v = self.x.contract_violations();
        v.extend(contract_violations(&self.eliminated, &self.gamma).into_iter().map(|s| format!("eliminated {s}")));
        v
    }
}

fn first_unicolored(beta: &[Letter], gamma: &Coloring) -> Option<(usize, u32)> {
    let mut cur = gamma.clone();
    for (t, l) in beta.iter().enumerate() {
        let (a, b) = (cur.labels()[l.left()], cur.labels()[l.left() + 1]);
        if a == b {
            return Some((t, a));
        }
        cur = cur.swapped(l.left());
    }
    None
}

fn coloring_before(beta: &[Letter], gamma: &Coloring, t: usize) -> Coloring {
    beta[..t].iter().fold(gamma.clone(), |c, l| c.swapped(l.left()))
}

/// The summands `ε_p` of the trapezoid `T` on labels `(i, j)`: the square switch gives
/// `T = Σ_p [|i - j| choose p] ε_p`, with `ε_0` the identity.
fn trapezoid_pieces(i: u32, j: u32, gen: u32) -> Vec<(u32, LaurentPoly, [Column; 2])> {
    let d = i.abs_diff(j);
    (1..=i.min(j).min(d))
        .map(|p| {
            let (a, b) = if i < j { (RungDirection::Right, RungDirection::Left) } else { (RungDirection::Left, RungDirection::Right) };
            let cols = [
                Column::Rung { position: gen, direction: a, label: p },
                Column::Rung { position: gen, direction: b, label: p },
            ];
            (p, q_binom(d as i64, p as i64), cols)
        })
        .collect()
}

fn expand_copies(coef: &LaurentPoly) -> Vec<i64> {
    let mut out = Vec::new();
    for (e, c) in coef.terms() {
        let n: u64 = c.try_into().expect("binomial coefficients are small and positive");
        out.extend(std::iter::repeat_n(e, n as usize));
    }
    out
}

/// Cone presentation of a positive color-pure braid.
pub fn simplify_color_pure(b: &BraidWord, gamma: &Coloring, budget: usize) -> Result<ConePresentation> {
    if !b.is_positive() {
        return Err(Error::Precondition("simplify_color_pure needs a positive braid".into()));
    }
    if !b.is_color_pure(gamma)? {
        return Err(Error::Precondition("braid is not color-pure".into()));
    }
    let n = b.strands();
    let mut beta = b.letters().to_vec();
    let (mut x, mut eliminated, mut log) = (Vec::new(), Vec::new(), Vec::new());
    while !beta.is_empty() {
        if let Some((t, c)) = first_unicolored(&beta, gamma) {
            let l = beta[t];
            let (left, right) = (crossings(&beta[..t]), crossings(&beta[t + 1..]));
            for k in 1..=c {
                let mut w = left.clone();
                w.extend(crossing_ladder(c, c, l.gen, k));
                w.extend(right.iter().copied());
                x.push(term(gamma, w, k as i64 - 1, k as i64));
            }
            log.push(LogEntry::UniColored { position: t, color: c, positive: true });
            beta.remove(t);
            continue;
        }
        let found = find_clasp(&BraidWord::new(n, beta.clone())?, gamma, budget)?;
        beta = found.word;
        let t = found.position;
        let gen = beta[t].gen;
        let before = coloring_before(&beta, gamma, t);
        let (i, j) = (before.labels()[gen as usize - 1], before.labels()[gen as usize]);
        log.push(LogEntry::Clasp { position: t, colors: (i, j), moves: found.moves });
        let (left, right) = (crossings(&beta[..t]), crossings(&beta[t + 2..]));
        let wrap = |mid: &[Column]| {
            let mut w = left.clone();
            w.extend_from_slice(mid);
            w.extend(right.iter().copied());
            w
        };
        for t1 in crossing_terms(i, j, true) {
            for t2 in crossing_terms(j, i, true) {
                if t1.k + t2.k == 0 {
                    continue;
                }
                let mut mid = crossing_ladder(i, j, gen, t1.k).to_vec();
                mid.extend(crossing_ladder(j, i, gen, t2.k));
                x.push(term(gamma, wrap(&mid), t1.h + t2.h - 1, t1.q + t2.q));
            }
        }
        let mut summands = 0;
        for (_, coef, cols) in trapezoid_pieces(i, j, gen) {
            for e in expand_copies(&coef) {
                eliminated.push(term(gamma, wrap(&cols), 0, e));
                summands += 1;
            }
        }
        log.push(LogEntry::TrapezoidSplit { position: t, colors: (i, j), summands });
        beta.drain(t..t + 2);
    }
    let identity = term(gamma, Vec::new(), 0, 0);
    Ok(ConePresentation { gamma: gamma.clone(), identity, x: ComplexSkeleton { top: gamma.clone(), terms: x }, eliminated, log })
}

/// Skeleton of a color-pure braid of either sign: one identity term at `h = q = t⁻`,
/// every other term carrying a witness of smaller color size.
pub fn posneg_skeleton(b: &BraidWord, gamma: &Coloring, budget: usize) -> Result<(ComplexSkeleton, Vec<LogEntry>)> {
    if !b.is_color_pure(gamma)? {
        return Err(Error::Precondition("braid is not color-pure".into()));
    }
    let n = b.strands();
    let mut beta = b.letters().to_vec();
    let (mut terms, mut log) = (Vec::new(), Vec::new());
    let (mut oh, mut oq) = (0i64, 0i64);
    loop {
        if beta.is_empty() {
            terms.push(term(gamma, Vec::new(), oh, oq));
            break;
        }
        if let Some((t, c)) = first_unicolored(&beta, gamma) {
            let l = beta[t];
            let (left, right) = (crossings(&beta[..t]), crossings(&beta[t + 1..]));
            let mut stay = (0, 0);
            for ct in crossing_terms(c, c, l.positive) {
                if ct.k == 0 {
                    stay = (ct.h, ct.q);
                    continue;
                }
                let mut w = left.clone();
                w.extend(crossing_ladder(c, c, l.gen, ct.k));
                w.extend(right.iter().copied());
                terms.push(term(gamma, w, oh + ct.h, oq + ct.q));
            }
            log.push(LogEntry::UniColored { position: t, color: c, positive: l.positive });
            oh += stay.0;
            oq += stay.1;
            beta.remove(t);
            continue;
        }
        let found = find_reducible_pair(&BraidWord::new(n, beta.clone())?, budget)?;
        beta = found.word;
        let t = found.position;
        let (l1, l2) = (beta[t], beta[t + 1]);
        let gen = l1.gen;
        let before = coloring_before(&beta, gamma, t);
        let (i, j) = (before.labels()[gen as usize - 1], before.labels()[gen as usize]);
        if l1.positive != l2.positive {
            let m = i.min(j) as i64;
            log.push(LogEntry::Cancel { position: t, colors: (i, j) });
            oh += m;
            oq += m;
            beta.drain(t..t + 2);
            continue;
        }
        log.push(LogEntry::Clasp { position: t, colors: (i, j), moves: found.moves });
        let (left, right) = (crossings(&beta[..t]), crossings(&beta[t + 2..]));
        let wrap = |mid: &[Column]| {
            let mut w = left.clone();
            w.extend_from_slice(mid);
            w.extend(right.iter().copied());
            w
        };
        let mut stay = (0, 0);
        for t1 in crossing_terms(i, j, l1.positive) {
            for t2 in crossing_terms(j, i, l1.positive) {
                let (h, q) = (t1.h + t2.h, t1.q + t2.q);
                if t1.k + t2.k == 0 {
                    stay = (h, q);
                    continue;
                }
                let mut mid = crossing_ladder(i, j, gen, t1.k).to_vec();
                mid.extend(crossing_ladder(j, i, gen, t2.k));
                terms.push(term(gamma, wrap(&mid), oh + h, oq + q));
            }
        }
        let mut summands = 0;
        for (_, coef, cols) in trapezoid_pieces(i, j, gen) {
            for e in expand_copies(&coef) {
                terms.push(term(gamma, wrap(&cols), oh + stay.0, oq + stay.1 + e));
                summands += 1;
            }
        }
        log.push(LogEntry::TrapezoidSplit { position: t, colors: (i, j), summands });
        oh += stay.0;
        oq += stay.1;
        beta.drain(t..t + 2);
    }
    Ok((ComplexSkeleton { top: gamma.clone(), terms }, log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::DEFAULT_BUDGET;
    use crate::web::braid_euler_op;

    fn c(v: &[u32]) -> Coloring {
        Coloring::new(v.to_vec())
    }

    fn w(n: usize, g: &[i64]) -> BraidWord {
        BraidWord::from_signed(n, g).unwrap()
    }

    #[test]
    fn crossing_skeleton_shapes() {
        let s = crossing_skeleton(1, 2, true);
        assert_eq!(s.len(), 2);
        assert_eq!(s.terms[0].h, 0);
        assert_eq!(s.terms[0].tag, TermTag::Other);
        let s = crossing_skeleton(2, 2, false);
        let id: Vec<_> = s.terms.iter().filter(|t| t.tag == TermTag::Identity).collect();
        assert_eq!(id.len(), 1);
        assert_eq!(id[0].h, 2);
        let s = crossing_skeleton(2, 2, true);
        assert_eq!(s.terms.iter().find(|t| t.tag == TermTag::Identity).unwrap().h, 0);
        for (i, j, pos) in [(1, 2, true), (3, 1, false), (2, 2, true)] {
            let s = crossing_skeleton(i, j, pos);
            let e = s.euler(3).unwrap();
            assert_eq!(e, braid_euler_op(&w(2, &[if pos { 1 } else { -1 }]), &c(&[i, j]), 3).unwrap());
        }
    }

    #[test]
    fn multicone_matches_stacking() {
        for (g, word) in [(c(&[1, 2]), [1, 1]), (c(&[2, 2]), [1, -1]), (c(&[1, 3]), [-1, -1])] {
            let b = w(2, &word);
            let spec = expand_crossing(&b, &g, 1).unwrap();
            let m = assemble_multicone(&spec).unwrap();
            let rank = 3;
            assert_eq!(m.euler(rank).unwrap(), braid_euler_op(&b, &g, rank).unwrap());
            let l0 = b.letters()[0];
            let first = crossing_skeleton(g.labels()[0], g.labels()[1], l0.positive);
            let g1 = g.swapped(0);
            let second = crossing_skeleton(g1.labels()[0], g1.labels()[1], b.letters()[1].positive);
            let stacked = first.stack(&second).unwrap();
            assert_eq!(stacked.euler(rank).unwrap(), m.euler(rank).unwrap());
            // full expansion of every piece gives the same multiset of (h, q)
            let mut full = Vec::new();
            for (h, q, piece) in &spec.parts {
                let inner = expand_crossing(&b, &g, 0).unwrap();
                for (h2, q2, _) in &inner.parts {
                    full.push((h + h2, q + q2));
                }
                assert_eq!(piece.len(), 1);
            }
            let mut st: Vec<_> = stacked.terms.iter().map(|t| (t.h, t.q)).collect();
            full.sort();
            st.sort();
            assert_eq!(full, st);
        }
    }

    #[test]
    fn slide_shifts() {
        let (i, j, k) = (3u32, 1u32, 1u32);
        let top = c(&[i, j]);
        let before = LadderWeb::new(top.clone(), vec![
            Column::Rung { position: 1, direction: RungDirection::Right, label: k },
            Column::Crossing { position: 1, positive: true },
        ]).unwrap();
        let after = LadderWeb::new(top, vec![
            Column::Crossing { position: 1, positive: true },
            Column::Rung { position: 1, direction: RungDirection::Left, label: k },
        ]).unwrap();
        assert_eq!(slide_shift(&before, &after).unwrap(), (i - k).min(j + k) as i64 - i.min(j) as i64);
        // pulling a full rung through FT^ℓ
        let g = c(&[2, 1, 2]);
        let ft = crossings(BraidWord::full_twist(3).power(2).letters());
        let rungs = crossing_ladder(2, 1, 1, 1).to_vec();
        let gx = LadderWeb::new(g.clone(), rungs[..1].to_vec()).unwrap().bottom_coloring().unwrap();
        let mut b = ft.clone();
        b.extend(rungs.iter().copied());
        let mut a = rungs[..1].to_vec();
        a.extend(ft.iter().copied());
        a.push(rungs[1]);
        let t = slide_shift(&LadderWeb::new(g.clone(), b).unwrap(), &LadderWeb::new(g.clone(), a).unwrap()).unwrap();
        assert_eq!(t, 2 * 2 * (g.color_size() as i64 - gx.color_size() as i64));
    }

    #[test]
    fn cone_of_unicolored_twist() {
        for i in 1..=3 {
            let g = c(&[i, i]);
            let single = simplify_color_pure(&w(2, &[1]), &g, DEFAULT_BUDGET).unwrap();
            assert_eq!(single.x.len(), i as usize);
            let cp = simplify_color_pure(&w(2, &[1, 1]), &g, DEFAULT_BUDGET).unwrap();
            assert_eq!(cp.x.len(), 2 * i as usize);
            for (k, t) in cp.x.terms[..i as usize].iter().enumerate() {
                let k = k as u32 + 1;
                assert_eq!(t.h, k as i64 - 1);
                assert_eq!(t.witness, Some(c(&[i - k, i + k])));
            }
            assert!(cp.contract_violations().is_empty());
            let rank = 2 * i;
            assert_eq!(cp.euler(rank).unwrap(), braid_euler_op(&w(2, &[1, 1]), &g, rank).unwrap());
        }
    }

    #[test]
    fn cone_of_clasps() {
        for (g, word, rank) in [
            (c(&[1, 2]), vec![1, 1], 3),
            (c(&[2, 1]), vec![1, 1], 3),
            (c(&[1, 3]), vec![1, 1], 4),
            (c(&[1, 2, 3]), vec![1, 2, 1, 2, 1, 2], 3),
            (c(&[1, 2, 1]), vec![1, 2, 2, 1], 2),
        ] {
            let b = w(g.len(), &word);
            let cp = simplify_color_pure(&b, &g, DEFAULT_BUDGET).unwrap();
            assert!(cp.contract_violations().is_empty(), "{:?}", cp.contract_violations());
            assert_eq!(cp.euler(rank).unwrap(), braid_euler_op(&b, &g, rank).unwrap(), "{g} {word:?}");
        }
    }

    #[test]
    fn posneg_examples() {
        let budget = DEFAULT_BUDGET;
        let cases: Vec<(Coloring, Vec<i64>, i64)> = vec![
            (c(&[1, 2]), vec![1, 1], 0),
            (c(&[2, 2]), vec![-1, -1], 4),
            (c(&[1, 2]), vec![1, -1], 1),
            (c(&[2, 3]), vec![-1, -1], 4),
            (c(&[1, 2, 3]), vec![1, 2, -1, -2, 1, 2], 0),
            (c(&[1, 1, 2]), vec![-1, 2, -2, 1, -2, -2], 0),
        ];
        for (g, word, _) in cases {
            let b = w(g.len(), &word);
            let (s, _) = posneg_skeleton(&b, &g, budget).unwrap();
            let ids: Vec<_> = s.terms.iter().filter(|t| t.tag == TermTag::Identity).collect();
            assert_eq!(ids.len(), 1, "{g} {word:?}");
            let tm = b.negative_shift(&g).unwrap() as i64;
            assert_eq!(ids[0].h, tm, "{g} {word:?}");
            let others: Vec<_> = s.terms.iter().filter(|t| t.tag != TermTag::Identity).cloned().collect();
            assert!(contract_violations(&others, &g).iter().all(|v| !v.contains("witness")), "{g} {word:?}");
            let rank = g.max_label() + 1;
            assert_eq!(s.euler(rank).unwrap(), braid_euler_op(&b, &g, rank).unwrap(), "{g} {word:?}");
        }
    }

    #[test]
    fn skeleton_json_roundtrip() {
        let s = crossing_skeleton(1, 2, false);
        let j = serde_json::to_string(&s.terms).unwrap();
        let back: Vec<SkeletonTerm> = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s.terms);
    }
}
