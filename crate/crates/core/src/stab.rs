//! Inverse systems of truncations: twist decompositions, the bound `b(ℓ)`, q-adic
//! stabilization of Euler operators, projector truncations and their corollaries.

use crate::braid::{braid_equivalence, BraidWord, Certificate, Coloring, InfiniteBraidWord, Letter, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::operator::{OperatorQ, StateSpace};
use crate::web::braid_euler_op;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_PRECISION: i64 = 20;
pub const DEFAULT_CEILING: usize = 20_000;

/// Which truncation lengths an inverse system uses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "indices", rename_all = "snake_case")]
pub enum SequenceKind {
    MaximalPurity,
    /// Explicit truncation lengths, each a purity index.
    Subsequence(Vec<usize>),
    /// The first purity index at which the twist count reaches 1, 2, 3, …
    TwistAligned,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseSystemSpec {
    pub word: InfiniteBraidWord,
    pub gamma: Coloring,
    pub cert: Certificate,
    pub kind: SequenceKind,
}

/// One truncation of an inverse system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepPoint {
    pub ell: usize,
    pub m: usize,
    pub z: usize,
    pub b: u64,
}

impl InverseSystemSpec {
    pub fn new(word: InfiniteBraidWord, gamma: Coloring) -> Result<Self> {
        word.purity_pattern(&gamma)?;
        Ok(InverseSystemSpec { word, gamma, cert: Certificate::empty(), kind: SequenceKind::MaximalPurity })
    }

    pub fn full_twist(gamma: Coloring) -> Result<Self> {
        Ok(Self::new(InfiniteBraidWord::full_twist(gamma.len())?, gamma)?.with_kind(SequenceKind::TwistAligned))
    }

    pub fn with_cert(mut self, cert: Certificate) -> Self {
        self.cert = cert;
        self
    }

    pub fn with_kind(mut self, kind: SequenceKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn decompose(&self, m: usize, budget: usize) -> Result<TwistDecomposition> {
        decompose(&self.word, &self.gamma, &self.cert, m, budget)
    }

    /// Truncation lengths `m_1 < m_2 < …`.
    pub fn lengths(&self, count: usize, budget: usize) -> Result<Vec<usize>> {
        let pat = self.word.purity_pattern(&self.gamma)?;
        match &self.kind {
            SequenceKind::MaximalPurity => Ok(pat.take(count)),
            SequenceKind::Subsequence(ix) => {
                for w in ix.windows(2) {
                    if w[0] >= w[1] {
                        return Err(Error::Precondition("subsequence must be increasing".into()));
                    }
                }
                if let Some(&bad) = ix.iter().find(|&&m| m == 0 || !pat.is_pure(m)) {
                    return Err(Error::Precondition(format!("{bad} is not a purity index")));
                }
                Ok(ix.iter().copied().take(count).collect())
            }
            SequenceKind::TwistAligned => {
                let n = self.word.strands();
                let span = pat.cycle.max(n * (n - 1)).max(self.cert.tail.as_ref().map_or(1, |t| t.stride));
                let limit = pat.cycle_start + 64 * (count + 1) * span;
                let mut out = Vec::new();
                for m in pat.iter() {
                    if out.len() == count {
                        break;
                    }
                    if m > limit {
                        return Err(Error::NotTwistAligned("the twist count stops growing".into()));
                    }
                    if self.decompose(m, budget)?.z > out.len() {
                        out.push(m);
                    }
                }
                Ok(out)
            }
        }
    }

    /// `(ℓ, m_ℓ, z(ℓ), b(ℓ))` for the first `count` steps.
    pub fn steps(&self, count: usize, budget: usize) -> Result<Vec<StepPoint>> {
        self.lengths(count, budget)?
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                let d = self.decompose(m, budget)?;
                Ok(StepPoint { ell: i + 1, m, z: d.z, b: bound_b(&d) })
            })
            .collect()
    }

    pub fn truncations(&self, count: usize, budget: usize) -> Result<Vec<BraidWord>> {
        Ok(self.lengths(count, budget)?.into_iter().map(|m| self.word.truncation(m)).collect())
    }
}

/// `B_m` split into full twists (by letter positions) and deleted color-pure insertions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistDecomposition {
    pub m: usize,
    pub z: usize,
    /// First and last letter position of each complete twist.
    pub twists: Vec<(usize, usize)>,
    /// Deleted intervals `(a, b)` lying inside `[0, m)`.
    pub insertions: Vec<(usize, usize)>,
    /// A certified interval cut off by the truncation.
    pub partial_insertion: Option<(usize, usize)>,
    /// Letters of the trailing incomplete twist.
    pub remainder: usize,
    /// Whether the remaining letters spell `FT^∞` verbatim.
    pub literal: bool,
}

/// Reads the decomposition of `B_m` off the certificate.
pub fn decompose(w: &InfiniteBraidWord, gamma: &Coloring, cert: &Certificate, m: usize, budget: usize) -> Result<TwistDecomposition> {
    cert.validate()?;
    let n = w.strands();
    if n < 2 {
        return Err(Error::Precondition("twists need at least two strands".into()));
    }
    let l = n * (n - 1);
    let mut insertions = Vec::new();
    let mut partial = None;
    for (a, b) in cert.intervals_below(m) {
        let seg = w.sub_braid(a, b)?;
        if !seg.is_color_pure(&w.induced_coloring(gamma, a)?)? {
            return Err(Error::IntervalNotColorPure { a, b });
        }
        if b <= m {
            insertions.push((a, b));
        } else {
            partial = Some((a, m));
        }
    }
    let deleted = |k: usize| insertions.iter().chain(partial.iter()).any(|&(a, b)| a <= k && k < b);
    let rest: Vec<usize> = (0..m).filter(|&k| !deleted(k)).collect();
    let letters: Vec<Letter> = rest.iter().map(|&k| w.letter(k)).collect();
    let ft = |k: usize| Letter::pos((k % (n - 1)) as u32 + 1);
    let literal = letters.iter().enumerate().all(|(k, l)| *l == ft(k));
    if !literal {
        for (c, chunk) in letters.chunks(l).enumerate() {
            let target: Vec<Letter> = (c * l..c * l + chunk.len()).map(ft).collect();
            if chunk != target.as_slice() && braid_equivalence(chunk, &target, budget)?.is_none() {
                return Err(Error::NotTwistAligned(format!("letters {}..{} after deletion are not a full twist", c * l, c * l + chunk.len())));
            }
        }
    }
    let z = rest.len() / l;
    let twists = (0..z).map(|t| (rest[t * l], rest[t * l + l - 1])).collect();
    Ok(TwistDecomposition { m, z, twists, insertions, partial_insertion: partial, remainder: rest.len() % l, literal })
}

/// Where each insertion sits relative to the complete twists.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    /// Strictly inside twist `t`: choosing `X` destroys it.
    Inside(usize),
    /// Between twists `t - 1` and `t`: choosing `X` interrupts the run.
    Before(usize),
    /// Before the first or after the last twist.
    Outside,
}

fn slots(d: &TwistDecomposition) -> Vec<Slot> {
    d.insertions
        .iter()
        .map(|&(a, _)| {
            if let Some(t) = d.twists.iter().position(|&(s, e)| s < a && a < e) {
                return Slot::Inside(t);
            }
            match d.twists.iter().position(|&(s, _)| a < s) {
                Some(t) if t >= 1 => Slot::Before(t),
                _ => Slot::Outside,
            }
        })
        .collect()
}

/// `b = min_δ (#X(δ) + 2·c₂(δ))` over identity/`X` choices for every insertion, where
/// `c₂` is the longest run of intact twists with no `X` between them. Dynamic programme
/// over twists for each cap on the run length.
pub fn bound_b(d: &TwistDecomposition) -> u64 {
    let z = d.z;
    let s = slots(d);
    let inside: Vec<bool> = (0..z).map(|t| s.contains(&Slot::Inside(t))).collect();
    let before: Vec<bool> = (0..z).map(|t| s.contains(&Slot::Before(t))).collect();
    const INF: u64 = u64::MAX / 4;
    let mut best = INF;
    for cap in 0..=z {
        // dp[r] = fewest X's so far with the current run of length r
        let mut dp = vec![INF; cap + 1];
        dp[0] = 0;
        for t in 0..z {
            let mut next = vec![INF; cap + 1];
            for r in 0..=cap {
                if dp[r] == INF {
                    continue;
                }
                let mut starts = vec![(r, dp[r])];
                if before[t] {
                    starts.push((0, dp[r] + 1));
                }
                for (r0, c0) in starts {
                    if r0 < cap {
                        next[r0 + 1] = next[r0 + 1].min(c0);
                    }
                    if inside[t] {
                        next[0] = next[0].min(c0 + 1);
                    }
                }
            }
            dp = next;
        }
        let x = dp.into_iter().min().unwrap();
        best = best.min(x + 2 * cap as u64);
    }
    best
}

/// Reference value of [`bound_b`] by enumerating all `2^r` choices.
pub fn bound_b_exhaustive(d: &TwistDecomposition) -> u64 {
    let s = slots(d);
    let r = s.len();
    assert!(r < 24, "exhaustive enumeration is for small decompositions");
    let mut best = u64::MAX;
    for mask in 0u32..(1 << r) {
        let x = |i: usize| mask >> i & 1 == 1;
        let (mut run, mut c2) = (0u64, 0u64);
        for t in 0..d.z {
            if (0..r).any(|i| x(i) && s[i] == Slot::Before(t)) {
                run = 0;
            }
            if (0..r).any(|i| x(i) && s[i] == Slot::Inside(t)) {
                run = 0;
            } else {
                run += 1;
                c2 = c2.max(run);
            }
        }
        best = best.min(mask.count_ones() as u64 + 2 * c2);
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CauchyVerdict {
    Certified,
    NotCertified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CauchyReport {
    pub steps: Vec<StepPoint>,
    pub nondecreasing: bool,
    pub target: u64,
    pub verdict: CauchyVerdict,
}

/// Certified iff `b(ℓ)` is nondecreasing over the run and ends above `target`.
pub fn cauchy_certificate(spec: &InverseSystemSpec, count: usize, target: u64, budget: usize) -> Result<CauchyReport> {
    let steps = spec.steps(count, budget)?;
    let nondecreasing = steps.windows(2).all(|w| w[0].b <= w[1].b);
    let ok = nondecreasing && steps.last().is_some_and(|s| s.b > target);
    Ok(CauchyReport { steps, nondecreasing, target, verdict: if ok { CauchyVerdict::Certified } else { CauchyVerdict::NotCertified } })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabConfig {
    pub rank: u32,
    pub steps: usize,
    pub precision: i64,
    pub ceiling: usize,
    pub budget: usize,
}

impl StabConfig {
    pub fn new(rank: u32, steps: usize) -> Self {
        StabConfig { rank, steps, precision: DEFAULT_PRECISION, ceiling: DEFAULT_CEILING, budget: DEFAULT_BUDGET }
    }

    pub fn precision(mut self, m: i64) -> Self {
        self.precision = m;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub ell: usize,
    pub m: usize,
    pub z: usize,
    pub b: u64,
    /// Lowest q-degree where this truncation differs from the previous one; `None` if equal.
    pub qdiff_prev: Option<i64>,
    /// Lowest q-degree where it differs from the reference system at the same twist count.
    pub qdiff_ft: Option<i64>,
    pub digest: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabVerdict {
    Converging,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationReport {
    pub steps: Vec<StepRecord>,
    pub verdict: StabVerdict,
}

fn deg_key(d: Option<i64>) -> i64 {
    d.unwrap_or(i64::MAX)
}

/// Nondecreasing (with `None` as +∞) and finally above `m`.
fn converges(ds: &[Option<i64>], m: i64) -> bool {
    !ds.is_empty() && ds.windows(2).all(|w| deg_key(w[0]) <= deg_key(w[1])) && deg_key(*ds.last().unwrap()) > m
}

fn guard(gamma: &Coloring, rank: u32, ceiling: usize) -> Result<()> {
    Coloring::checked(gamma.labels().to_vec(), rank)?;
    StateSpace::get_bounded(gamma.labels(), rank, ceiling).map(|_| ())
}

fn euler_many(words: &[BraidWord], gamma: &Coloring, rank: u32) -> Result<Vec<OperatorQ>> {
    words.par_iter().map(|w| braid_euler_op(w, gamma, rank)).collect()
}

/// Euler operators of `b`'s truncations against `a`'s at equal twist count.
pub fn stabilize(a: &InverseSystemSpec, b: &InverseSystemSpec, cfg: &StabConfig) -> Result<StabilizationReport> {
    if a.gamma != b.gamma || a.word.strands() != b.word.strands() {
        return Err(Error::ColoringMismatch("both systems need the same strands and coloring".into()));
    }
    guard(&b.gamma, cfg.rank, cfg.ceiling)?;
    let steps = b.steps(cfg.steps, cfg.budget)?;
    let words: Vec<BraidWord> = steps.iter().map(|s| b.word.truncation(s.m)).collect();
    let ops = euler_many(&words, &b.gamma, cfg.rank)?;
    // reference truncations at the twist counts reached by b
    let zmax = steps.iter().map(|s| s.z).max().unwrap_or(0);
    let aligned = a.clone().with_kind(SequenceKind::TwistAligned);
    let a_steps = if zmax == 0 { Vec::new() } else { aligned.steps(zmax, cfg.budget)? };
    let a_ops = euler_many(&a_steps.iter().map(|s| a.word.truncation(s.m)).collect::<Vec<_>>(), &a.gamma, cfg.rank)?;
    let mut records = Vec::with_capacity(steps.len());
    for (i, s) in steps.iter().enumerate() {
        let qdiff_prev = if i == 0 { None } else { ops[i].min_degree_diff(&ops[i - 1])? };
        let qdiff_ft = match s.z {
            0 => ops[i].min_degree_diff(&OperatorQ::identity(ops[i].domain().clone()))?,
            z => ops[i].min_degree_diff(&a_ops[z - 1])?,
        };
        records.push(StepRecord { ell: s.ell, m: s.m, z: s.z, b: s.b, qdiff_prev, qdiff_ft, digest: ops[i].digest(cfg.precision) });
    }
    let ds: Vec<_> = records.iter().map(|r| r.qdiff_ft).collect();
    let verdict = if converges(&ds, cfg.precision) { StabVerdict::Converging } else { StabVerdict::Inconclusive };
    Ok(StabilizationReport { steps: records, verdict })
}

/// `χ(FT^k)` on `n` strands.
pub fn projector_truncation(n: usize, gamma: &Coloring, rank: u32, k: usize) -> Result<OperatorQ> {
    if gamma.len() != n {
        return Err(Error::InvalidColoring(format!("{} labels for {n} strands", gamma.len())));
    }
    braid_euler_op(&BraidWord::full_twist(n).power(k), gamma, rank)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectorStep {
    pub k: usize,
    /// Lowest q-degree of `P_k² - P_k`.
    pub idempotence: Option<i64>,
    /// Lowest q-degree of `χ(β)P_k - P_k` and `P_kχ(β) - P_k` over the generators.
    pub absorption: Option<i64>,
}

/// The color-pure generator word at position `i`: `σ_i` if its strands share a label, else `σ_i²`.
fn pure_generator(gamma: &Coloring, i: u32) -> BraidWord {
    let l = gamma.labels();
    let p = i as usize - 1;
    let times = if l[p] == l[p + 1] { 1 } else { 2 };
    BraidWord::new(gamma.len(), vec![Letter::pos(i); times]).expect("generator in range")
}

/// Lowest q-degree of `χ(β)P - P` and `Pχ(β) - P`.
pub fn absorption_defect(beta: &BraidWord, gamma: &Coloring, rank: u32, p: &OperatorQ) -> Result<Option<i64>> {
    if !beta.is_color_pure(gamma)? {
        return Err(Error::Precondition("absorbed braid must be color-pure".into()));
    }
    let e = braid_euler_op(beta, gamma, rank)?;
    let l = e.then(p)?.min_degree_diff(p)?;
    let r = p.then(&e)?.min_degree_diff(p)?;
    Ok([l, r].into_iter().flatten().min())
}

pub fn projector_defects(n: usize, gamma: &Coloring, rank: u32, kmax: usize) -> Result<Vec<ProjectorStep>> {
    (1..=kmax)
        .into_par_iter()
        .map(|k| {
            let p = projector_truncation(n, gamma, rank, k)?;
            let idempotence = p.then(&p)?.min_degree_diff(&p)?;
            let mut absorption: Option<i64> = None;
            for i in 1..n as u32 {
                let d = absorption_defect(&pure_generator(gamma, i), gamma, rank, &p)?;
                absorption = match (absorption, d) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
            }
            Ok(ProjectorStep { k, idempotence, absorption })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegShiftReport {
    pub t_minus: u64,
    /// `(k, sign, s)` with `χ(pad · FT^k) = sign · q^s · χ(FT^k)`, or `None` if not a monomial multiple.
    pub ratios: Vec<(usize, Option<(i64, i64)>)>,
}

/// Compares `χ(pad · FT^k)` with `χ(FT^k)` for `k = 1..=kmax`.
pub fn negative_shift_check(pad: &BraidWord, gamma: &Coloring, rank: u32, kmax: usize) -> Result<NegShiftReport> {
    if !pad.is_color_pure(gamma)? {
        return Err(Error::Precondition("padding must be color-pure".into()));
    }
    let t_minus = pad.negative_shift(gamma)?;
    let n = gamma.len();
    let pe = braid_euler_op(pad, gamma, rank)?;
    let ratios = (1..=kmax)
        .into_par_iter()
        .map(|k| {
            let p = projector_truncation(n, gamma, rank, k)?;
            Ok((k, pe.then(&p)?.monomial_ratio(&p)))
        })
        .collect::<Result<_>>()?;
    Ok(NegShiftReport { t_minus, ratios })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HorizontalReport {
    pub head: usize,
    pub blocks: Vec<(usize, usize)>,
    /// `(m, exact)` for each truncation checked.
    pub factorization: Vec<(usize, bool)>,
    pub block_reports: Vec<Option<StabilizationReport>>,
}

/// The letters of `letters` inside block `(lo, hi)` (1-based strands), re-indexed.
fn project(letters: &[Letter], lo: usize, hi: usize) -> Vec<Letter> {
    letters
        .iter()
        .filter(|l| l.gen as usize >= lo && (l.gen as usize) < hi)
        .map(|l| Letter { gen: l.gen - lo as u32 + 1, positive: l.positive })
        .collect()
}

/// Checks `χ(W_m) = χ(W_r) ; ⊗_j χ(block_j truncation)` and stabilizes each block against its full twist.
pub fn horizontal_factorization(
    w: &InfiniteBraidWord,
    gamma: &Coloring,
    blocks: &[(usize, usize)],
    head: usize,
    certs: &[Certificate],
    cfg: &StabConfig,
) -> Result<HorizontalReport> {
    let n = w.strands();
    let mut sorted = blocks.to_vec();
    sorted.sort();
    for (i, &(lo, hi)) in sorted.iter().enumerate() {
        if lo == 0 || lo > hi || hi > n || (i > 0 && sorted[i - 1].1 >= lo) {
            return Err(Error::BlockOverlap(format!("blocks {blocks:?} on {n} strands")));
        }
    }
    let tail = w.tail_from(head);
    for l in tail.prefix().iter().chain(tail.period()) {
        let g = l.gen as usize;
        if !sorted.iter().any(|&(lo, hi)| lo <= g && g < hi) {
            return Err(Error::BlockOverlap(format!("letter {l} after the head crosses block boundaries")));
        }
    }
    guard(gamma, cfg.rank, cfg.ceiling)?;
    let g_r = w.induced_coloring(gamma, head)?;
    // full partition of the strands, idle strands as singleton blocks
    let mut parts = Vec::new();
    let mut s = 1;
    for &(lo, hi) in &sorted {
        while s < lo {
            parts.push((s, s, None));
            s += 1;
        }
        let ix = blocks.iter().position(|&b| b == (lo, hi)).unwrap();
        parts.push((lo, hi, Some(ix)));
        s = hi + 1;
    }
    while s <= n {
        parts.push((s, s, None));
        s += 1;
    }
    let head_op = braid_euler_op(&w.truncation(head), gamma, cfg.rank)?;
    let ms: Vec<usize> = w.purity_pattern(gamma)?.iter().filter(|&m| m >= head).take(cfg.steps).collect();
    let factorization = ms
        .par_iter()
        .map(|&m| {
            let full = braid_euler_op(&w.truncation(m), gamma, cfg.rank)?;
            let mid: Vec<Letter> = (head..m).map(|k| w.letter(k)).collect();
            let mut acc: Option<OperatorQ> = None;
            for &(lo, hi, _) in &parts {
                let sub = Coloring::new(g_r.labels()[lo - 1..hi].to_vec());
                let word = BraidWord::new(hi - lo + 1, project(&mid, lo, hi))?;
                let op = braid_euler_op(&word, &sub, cfg.rank)?;
                acc = Some(match acc {
                    None => op,
                    Some(a) => a.tensor(&op),
                });
            }
            let composed = head_op.then(&acc.unwrap())?;
            Ok((m, composed == full))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut block_reports = Vec::new();
    for (j, &(lo, hi)) in blocks.iter().enumerate() {
        let per = project(tail.period(), lo, hi);
        if hi == lo || per.is_empty() {
            block_reports.push(None);
            continue;
        }
        let word = InfiniteBraidWord::new(hi - lo + 1, project(tail.prefix(), lo, hi), per)?;
        let sub = Coloring::new(g_r.labels()[lo - 1..hi].to_vec());
        let cert = certs.get(j).cloned().unwrap_or_default();
        let spec = InverseSystemSpec::new(word, sub.clone())?.with_cert(cert).with_kind(SequenceKind::TwistAligned);
        block_reports.push(Some(stabilize(&InverseSystemSpec::full_twist(sub)?, &spec, cfg)?));
    }
    Ok(HorizontalReport { head, blocks: blocks.to_vec(), factorization, block_reports })
}

/// `rev(L) · core · R` with both tails read away from the core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiInfiniteWord {
    pub left: InfiniteBraidWord,
    pub left_cert: Certificate,
    pub core: BraidWord,
    pub right: InfiniteBraidWord,
    pub right_cert: Certificate,
    /// Coloring at the top of the core.
    pub gamma: Coloring,
    /// Coloring at the bottom of the core.
    pub gamma_bottom: Coloring,
}

impl BiInfiniteWord {
    pub fn new(
        left: InfiniteBraidWord,
        core: BraidWord,
        right: InfiniteBraidWord,
        gamma: Coloring,
        gamma_bottom: Coloring,
    ) -> Result<Self> {
        let n = core.strands();
        if left.strands() != n || right.strands() != n {
            return Err(Error::ColoringMismatch("tails and core have different strand counts".into()));
        }
        let got = core.induced_coloring(&gamma, core.len())?;
        if got != gamma_bottom {
            return Err(Error::ColoringMismatch(format!("core takes {gamma} to {got}, not {gamma_bottom}")));
        }
        left.purity_pattern(&gamma)?;
        right.purity_pattern(&gamma_bottom)?;
        Ok(BiInfiniteWord { left, left_cert: Certificate::empty(), core, right, right_cert: Certificate::empty(), gamma, gamma_bottom })
    }

    pub fn with_certs(mut self, left: Certificate, right: Certificate) -> Self {
        self.left_cert = left;
        self.right_cert = right;
        self
    }

    fn left_spec(&self) -> Result<InverseSystemSpec> {
        Ok(InverseSystemSpec::new(self.left.clone(), self.gamma.clone())?.with_cert(self.left_cert.clone()).with_kind(SequenceKind::TwistAligned))
    }

    fn right_spec(&self) -> Result<InverseSystemSpec> {
        Ok(InverseSystemSpec::new(self.right.clone(), self.gamma_bottom.clone())?.with_cert(self.right_cert.clone()).with_kind(SequenceKind::TwistAligned))
    }

    /// The finite word with `a` letters of the left tail and `b` of the right one.
    pub fn window(&self, a: usize, b: usize) -> BraidWord {
        let mut letters: Vec<Letter> = self.left.truncation(a).letters().iter().rev().copied().collect();
        letters.extend_from_slice(self.core.letters());
        letters.extend_from_slice(self.right.truncation(b).letters());
        BraidWord::new(self.core.strands(), letters).expect("letters already validated")
    }

    /// Absorbs the first `a` left and `b` right letters (purity indices) into the core.
    pub fn shifted(&self, a: usize, b: usize) -> Result<BiInfiniteWord> {
        let top = self.left.induced_coloring(&self.gamma, a)?;
        let bottom = self.right.induced_coloring(&self.gamma_bottom, b)?;
        if top != self.gamma || bottom != self.gamma_bottom {
            return Err(Error::ColoringMismatch("shift points must be purity indices".into()));
        }
        Ok(BiInfiniteWord {
            left: self.left.tail_from(a),
            left_cert: self.left_cert.drop_prefix(a)?,
            core: self.window(a, b),
            right: self.right.tail_from(b),
            right_cert: self.right_cert.drop_prefix(b)?,
            gamma: self.gamma.clone(),
            gamma_bottom: self.gamma_bottom.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiStep {
    pub ell: usize,
    pub left: usize,
    pub right: usize,
    pub qdiff_prev: Option<i64>,
    pub digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiReport {
    pub steps: Vec<BiStep>,
    pub shift: (usize, usize),
    pub shifted_steps: Vec<BiStep>,
    /// Final digests of the original and shifted runs agree mod `q^M`.
    pub shift_invariant: bool,
    pub verdict: StabVerdict,
}

fn bi_run(w: &BiInfiniteWord, cfg: &StabConfig) -> Result<Vec<BiStep>> {
    let ls = w.left_spec()?.lengths(cfg.steps, cfg.budget)?;
    let rs = w.right_spec()?.lengths(cfg.steps, cfg.budget)?;
    let words: Vec<BraidWord> = ls.iter().zip(&rs).map(|(&a, &b)| w.window(a, b)).collect();
    let ops = euler_many(&words, &w.gamma, cfg.rank)?;
    let mut out = Vec::new();
    for (i, (&a, &b)) in ls.iter().zip(&rs).enumerate() {
        let qdiff_prev = if i == 0 { None } else { ops[i].min_degree_diff(&ops[i - 1])? };
        out.push(BiStep { ell: i + 1, left: a, right: b, qdiff_prev, digest: ops[i].digest(cfg.precision) });
    }
    Ok(out)
}

/// Stabilization of a bi-infinite word along both tails, and invariance of the limit
/// digest when the starting points move outward by `shift` twist-aligned steps.
pub fn bi_infinite_analyze(w: &BiInfiniteWord, cfg: &StabConfig, shift: usize) -> Result<BiReport> {
    guard(&w.gamma, cfg.rank, cfg.ceiling)?;
    let steps = bi_run(w, cfg)?;
    let (a, b) = if shift == 0 {
        (0, 0)
    } else {
        let la = w.left_spec()?.lengths(shift, cfg.budget)?;
        let rb = w.right_spec()?.lengths(shift, cfg.budget)?;
        (la[shift - 1], rb[shift - 1])
    };
    let sh = w.shifted(a, b)?;
    let shifted_steps = bi_run(&sh, cfg)?;
    let shift_invariant = steps.last().map(|s| &s.digest) == shifted_steps.last().map(|s| &s.digest);
    let ds: Vec<_> = steps.iter().skip(1).map(|s| s.qdiff_prev).collect();
    let verdict = if shift_invariant && converges(&ds, cfg.precision) { StabVerdict::Converging } else { StabVerdict::Inconclusive };
    Ok(BiReport { steps, shift: (a, b), shifted_steps, shift_invariant, verdict })
}
