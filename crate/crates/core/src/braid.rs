//! Colored braid words, purity, clasp search and completeness certificates.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::fmt;

/// Strand labels (exterior power degrees), read left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coloring(Vec<u32>);

impl Coloring {
    pub fn new(labels: Vec<u32>) -> Self {
        Coloring(labels)
    }

    /// Rejects labels above `rank`.
    pub fn checked(labels: Vec<u32>, rank: u32) -> Result<Self> {
        if let Some(l) = labels.iter().find(|&&l| l > rank) {
            return Err(Error::InvalidColoring(format!("label {l} exceeds N = {rank}")));
        }
        Ok(Coloring(labels))
    }

    pub fn uniform(n: usize, c: u32) -> Self {
        Coloring(vec![c; n])
    }

    pub fn labels(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_label(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// `cs(γ) = Σ_{i<j} min(γ_i, γ_j)`
    pub fn color_size(&self) -> u64 {
        let v = &self.0;
        let mut s = 0u64;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                s += v[i].min(v[j]) as u64;
            }
        }
        s
    }

    /// Swaps the labels at 0-based positions `p` and `p + 1`.
    pub fn swapped(&self, p: usize) -> Coloring {
        let mut v = self.0.clone();
        v.swap(p, p + 1);
        Coloring(v)
    }

    pub fn is_uniform(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A braid generator `σ_gen^{±1}`, `gen` counted from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u32,
    pub positive: bool,
}

impl Letter {
    pub fn pos(gen: u32) -> Self {
        Letter { gen, positive: true }
    }

    pub fn neg(gen: u32) -> Self {
        Letter { gen, positive: false }
    }

    /// 0-based index of the left strand position it acts on.
    pub fn left(&self) -> usize {
        self.gen as usize - 1
    }

    pub fn signed(&self) -> i64 {
        if self.positive { self.gen as i64 } else { -(self.gen as i64) }
    }

    pub fn inverse(&self) -> Letter {
        Letter { gen: self.gen, positive: !self.positive }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.signed())
    }
}

impl Serialize for Letter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.signed())
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        if v == 0 || v.unsigned_abs() > u32::MAX as u64 {
            return Err(serde::de::Error::custom(format!("bad generator {v}")));
        }
        Ok(Letter { gen: v.unsigned_abs() as u32, positive: v > 0 })
    }
}

fn check_letters(strands: usize, letters: &[Letter]) -> Result<()> {
    for l in letters {
        if l.gen == 0 || l.gen as usize >= strands {
            return Err(Error::IndexOutOfRange { index: l.signed(), strands });
        }
    }
    Ok(())
}

/// Runs the colorings along `letters` starting from `start`.
fn color_walk<'a>(start: &Coloring, letters: impl IntoIterator<Item = &'a Letter>) -> Vec<Coloring> {
    let mut out = vec![start.clone()];
    let mut cur = start.clone();
    for l in letters {
        cur = cur.swapped(l.left());
        out.push(cur.clone());
    }
    out
}

/// Finite braid word; letters act in reading order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<Letter>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<Letter>) -> Result<Self> {
        check_letters(strands, &letters)?;
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        BraidWord { strands, letters: Vec::new() }
    }

    /// From signed generator indices, e.g. `[1, 2, -1]`.
    pub fn from_signed(strands: usize, gens: &[i64]) -> Result<Self> {
        let mut letters = Vec::with_capacity(gens.len());
        for &g in gens {
            if g == 0 {
                return Err(Error::IndexOutOfRange { index: 0, strands });
            }
            letters.push(Letter { gen: g.unsigned_abs() as u32, positive: g > 0 });
        }
        Self::new(strands, letters)
    }

    /// Parses whitespace or comma separated signed generators such as `"1 2 -1"`.
    pub fn parse(text: &str, strands: usize) -> Result<Self> {
        let mut letters = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let mut col = 0;
            for tok in line.split(|c: char| c.is_whitespace() || c == ',') {
                let here = col + 1;
                col += tok.len() + 1;
                if tok.is_empty() {
                    continue;
                }
                let g: i64 = tok.parse().map_err(|_| Error::Parse {
                    line: ln + 1,
                    column: here,
                    msg: format!("expected a signed generator index, found {tok:?}"),
                })?;
                if g == 0 || g.unsigned_abs() as usize >= strands {
                    return Err(Error::Parse {
                        line: ln + 1,
                        column: here,
                        msg: format!("generator {g} out of range for {strands} strands"),
                    });
                }
                letters.push(Letter { gen: g.unsigned_abs() as u32, positive: g > 0 });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// `(σ_1 ⋯ σ_{n-1})^n`
    pub fn full_twist(n: usize) -> Self {
        let mut letters = Vec::new();
        if n >= 2 {
            for _ in 0..n {
                letters.extend((1..n as u32).map(Letter::pos));
            }
        }
        BraidWord { strands: n, letters }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|l| l.positive)
    }

    pub fn concat(&self, other: &BraidWord) -> BraidWord {
        assert_eq!(self.strands, other.strands, "strand count mismatch");
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord { strands: self.strands, letters }
    }

    pub fn power(&self, k: usize) -> BraidWord {
        let mut letters = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.letters);
        }
        BraidWord { strands: self.strands, letters }
    }

    /// Letters `a+1 ..= b` (1-based), i.e. the sub-braid between truncation points `a` and `b`.
    pub fn sub_braid(&self, a: usize, b: usize) -> Result<BraidWord> {
        if a > b || b > self.len() {
            return Err(Error::PositionOutOfRange { pos: b.max(a), len: self.len() });
        }
        Ok(BraidWord { strands: self.strands, letters: self.letters[a..b].to_vec() })
    }

    pub fn inverse(&self) -> BraidWord {
        let letters = self.letters.iter().rev().map(Letter::inverse).collect();
        BraidWord { strands: self.strands, letters }
    }

    /// `perm[p]` is the original strand sitting at position `p` after the word.
    pub fn permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.strands).collect();
        for l in &self.letters {
            perm.swap(l.left(), l.left() + 1);
        }
        perm
    }

    fn check_coloring(&self, gamma: &Coloring) -> Result<()> {
        if gamma.len() != self.strands {
            return Err(Error::InvalidColoring(format!(
                "coloring has {} labels, braid has {} strands",
                gamma.len(),
                self.strands
            )));
        }
        Ok(())
    }

    /// Coloring after the first `ell` letters.
    pub fn induced_coloring(&self, gamma: &Coloring, ell: usize) -> Result<Coloring> {
        self.check_coloring(gamma)?;
        if ell > self.len() {
            return Err(Error::PositionOutOfRange { pos: ell, len: self.len() });
        }
        let mut cur = gamma.clone();
        for l in &self.letters[..ell] {
            cur = cur.swapped(l.left());
        }
        Ok(cur)
    }

    /// Colorings `γ(0), …, γ(len)`.
    pub fn colorings(&self, gamma: &Coloring) -> Result<Vec<Coloring>> {
        self.check_coloring(gamma)?;
        Ok(color_walk(gamma, &self.letters))
    }

    pub fn is_color_pure(&self, gamma: &Coloring) -> Result<bool> {
        Ok(&self.induced_coloring(gamma, self.len())? == gamma)
    }

    /// Label pairs `(left, right)` entering each crossing.
    pub fn crossing_colors(&self, gamma: &Coloring) -> Result<Vec<(u32, u32)>> {
        let cols = self.colorings(gamma)?;
        Ok(self
            .letters
            .iter()
            .zip(&cols)
            .map(|(l, c)| (c.labels()[l.left()], c.labels()[l.left() + 1]))
            .collect())
    }

    /// `Σ min(i, j)` over all crossings.
    pub fn min_color_sum(&self, gamma: &Coloring) -> Result<u64> {
        Ok(self.crossing_colors(gamma)?.iter().map(|&(a, b)| a.min(b) as u64).sum())
    }

    /// `t⁻ = Σ min(i, j)` over the negative crossings.
    pub fn negative_shift(&self, gamma: &Coloring) -> Result<u64> {
        let cc = self.crossing_colors(gamma)?;
        Ok(self
            .letters
            .iter()
            .zip(cc)
            .filter(|(l, _)| !l.positive)
            .map(|(_, (a, b))| a.min(b) as u64)
            .sum())
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Eventually periodic word `prefix · period^∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfiniteBraidWord {
    strands: usize,
    prefix: Vec<Letter>,
    period: Vec<Letter>,
}

impl InfiniteBraidWord {
    pub fn new(strands: usize, prefix: Vec<Letter>, period: Vec<Letter>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Precondition("period must be nonempty".into()));
        }
        check_letters(strands, &prefix)?;
        check_letters(strands, &period)?;
        Ok(InfiniteBraidWord { strands, prefix, period })
    }

    /// `FT^∞` as the period `σ_1 ⋯ σ_{n-1}` repeated.
    pub fn full_twist(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition("the full twist needs at least two strands".into()));
        }
        Self::new(n, Vec::new(), (1..n as u32).map(Letter::pos).collect())
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    pub fn is_positive(&self) -> bool {
        self.prefix.iter().chain(&self.period).all(|l| l.positive)
    }

    /// Letter at 0-based position `k`.
    pub fn letter(&self, k: usize) -> Letter {
        if k < self.prefix.len() {
            self.prefix[k]
        } else {
            self.period[(k - self.prefix.len()) % self.period.len()]
        }
    }

    /// Truncation `B_ℓ`.
    pub fn truncation(&self, ell: usize) -> BraidWord {
        BraidWord { strands: self.strands, letters: (0..ell).map(|k| self.letter(k)).collect() }
    }

    /// Sub-braid `B^a_b` (letters `a+1 ..= b`).
    pub fn sub_braid(&self, a: usize, b: usize) -> Result<BraidWord> {
        if a > b {
            return Err(Error::PositionOutOfRange { pos: a, len: b });
        }
        Ok(BraidWord { strands: self.strands, letters: (a..b).map(|k| self.letter(k)).collect() })
    }

    /// Tail `B^a_∞`.
    pub fn tail_from(&self, a: usize) -> InfiniteBraidWord {
        if a <= self.prefix.len() {
            return InfiniteBraidWord {
                strands: self.strands,
                prefix: self.prefix[a..].to_vec(),
                period: self.period.clone(),
            };
        }
        let r = (a - self.prefix.len()) % self.period.len();
        let mut period = self.period[r..].to_vec();
        period.extend_from_slice(&self.period[..r]);
        InfiniteBraidWord { strands: self.strands, prefix: Vec::new(), period }
    }

    pub fn induced_coloring(&self, gamma: &Coloring, ell: usize) -> Result<Coloring> {
        self.truncation(ell).induced_coloring(gamma, ell)
    }

    /// Smallest `o ≥ 1` with the period's action returning `c` to itself after `o` passes.
    fn period_orbit(&self, c: &Coloring) -> usize {
        let mut cur = c.clone();
        let mut o = 0;
        loop {
            for l in &self.period {
                cur = cur.swapped(l.left());
            }
            o += 1;
            if &cur == c {
                return o;
            }
        }
    }

    /// The purity indices in closed form: `head` then `cycle_start + offsets + t * cycle`.
    pub fn purity_pattern(&self, gamma: &Coloring) -> Result<PurityPattern> {
        if gamma.len() != self.strands {
            return Err(Error::InvalidColoring(format!(
                "coloring has {} labels, braid has {} strands",
                gamma.len(),
                self.strands
            )));
        }
        let p = self.prefix.len();
        let walk = color_walk(gamma, &self.prefix);
        let head: Vec<usize> = (1..=p).filter(|&i| &walk[i] == gamma).collect();
        let o = self.period_orbit(&walk[p]);
        let cycle = o * self.period.len();
        let mut offsets = Vec::new();
        let mut cur = walk[p].clone();
        for i in 1..=cycle {
            cur = cur.swapped(self.period[(i - 1) % self.period.len()].left());
            if &cur == gamma {
                offsets.push(i);
            }
        }
        if offsets.is_empty() {
            return Err(Error::NotColorPure);
        }
        Ok(PurityPattern { head, cycle_start: p, offsets, cycle })
    }

    /// First `count` entries `ℓ_1 < ℓ_2 < …` of the maximal purity sequence.
    pub fn maximal_purity_sequence(&self, gamma: &Coloring, count: usize) -> Result<Vec<usize>> {
        Ok(self.purity_pattern(gamma)?.take(count))
    }
}

impl fmt::Display for InfiniteBraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[Letter]| v.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ");
        write!(f, "[{}]({})^∞", j(&self.prefix), j(&self.period))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurityPattern {
    pub head: Vec<usize>,
    pub cycle_start: usize,
    pub offsets: Vec<usize>,
    pub cycle: usize,
}

impl PurityPattern {
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let tail = (0..).flat_map(move |t| self.offsets.iter().map(move |o| self.cycle_start + o + t * self.cycle));
        self.head.iter().copied().chain(tail)
    }

    pub fn take(&self, count: usize) -> Vec<usize> {
        self.iter().take(count).collect()
    }

    pub fn is_pure(&self, ell: usize) -> bool {
        if ell <= self.cycle_start {
            return self.head.contains(&ell);
        }
        let r = (ell - self.cycle_start - 1) % self.cycle + 1;
        self.offsets.contains(&r)
    }
}

/// Periodic part of a certificate: intervals `(start + t·stride + dA, start + t·stride + dB)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailPattern {
    pub start: usize,
    pub stride: usize,
    pub pattern: Vec<(usize, usize)>,
}

/// Intervals `(a, b)` whose sub-braids `B^a_b` are deleted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(default)]
    pub head: Vec<(usize, usize)>,
    #[serde(default)]
    pub tail: Option<TailPattern>,
}

impl Certificate {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::BadCertificate(m));
        let mut last: Option<usize> = None;
        for &(a, b) in &self.head {
            if a >= b {
                return bad(format!("interval ({a}, {b}) is empty"));
            }
            if last.is_some_and(|l| l > a) {
                return bad(format!("interval ({a}, {b}) overlaps the previous one"));
            }
            last = Some(b);
        }
        if let Some(t) = &self.tail {
            if t.stride == 0 {
                return bad("tail stride must be positive".into());
            }
            if let Some(l) = last {
                if l > t.start {
                    return bad(format!("head interval ends at {l}, after the tail start {}", t.start));
                }
            }
            let mut prev: Option<usize> = None;
            for &(a, b) in &t.pattern {
                if a >= b || b > t.stride {
                    return bad(format!("tail interval ({a}, {b}) must satisfy dA < dB <= stride"));
                }
                if prev.is_some_and(|p| p > a) {
                    return bad(format!("tail interval ({a}, {b}) overlaps the previous one"));
                }
                prev = Some(b);
            }
            if let (Some(&(a0, _)), Some(&(_, bl))) = (t.pattern.first(), t.pattern.last()) {
                if bl > t.stride + a0 {
                    return bad("tail intervals of consecutive strides overlap".into());
                }
                if last.is_some_and(|l| l > t.start + a0) {
                    return bad("last head interval overlaps the first tail interval".into());
                }
            }
        }
        Ok(())
    }

    /// The certificate of the tail `B^a_∞`, positions shifted down by `a`.
    pub fn drop_prefix(&self, a: usize) -> Result<Certificate> {
        let straddle = |x: usize, y: usize| x < a && a < y;
        let mut head = Vec::new();
        for &(x, y) in &self.head {
            if straddle(x, y) {
                return Err(Error::BadCertificate(format!("interval ({x}, {y}) straddles {a}")));
            }
            if x >= a {
                head.push((x - a, y - a));
            }
        }
        let tail = match &self.tail {
            None => None,
            Some(t) if t.start >= a => Some(TailPattern { start: t.start - a, ..t.clone() }),
            Some(t) => {
                let k = (a - t.start).div_ceil(t.stride);
                let new_start = t.start + k * t.stride;
                for &(x, y) in &t.pattern {
                    let (x, y) = (new_start - t.stride + x, new_start - t.stride + y);
                    if straddle(x, y) {
                        return Err(Error::BadCertificate(format!("interval ({x}, {y}) straddles {a}")));
                    }
                    if x >= a {
                        head.push((x - a, y - a));
                    }
                }
                Some(TailPattern { start: new_start - a, ..t.clone() })
            }
        };
        Ok(Certificate { head, tail })
    }

    /// All intervals with left end below `limit`, in increasing order.
    pub fn intervals_below(&self, limit: usize) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self.head.iter().copied().filter(|&(a, _)| a < limit).collect();
        if let Some(t) = &self.tail {
            if !t.pattern.is_empty() {
                let mut k = 0;
                'outer: loop {
                    for &(a, b) in &t.pattern {
                        let base = t.start + k * t.stride;
                        if base + a >= limit {
                            break 'outer;
                        }
                        out.push((base + a, base + b));
                    }
                    k += 1;
                }
            }
        }
        out
    }
}

/// Prefix and period letters left after deleting the certificate intervals.
pub fn deletion_parts(w: &InfiniteBraidWord, gamma: &Coloring, cert: &Certificate) -> Result<(Vec<Letter>, Vec<Letter>)> {
    cert.validate()?;
    let p = w.prefix.len();
    let per = w.period.len();
    let head_end = cert.head.last().map_or(0, |&(_, b)| b);
    let (start, stride, pattern) = match &cert.tail {
        Some(t) => {
            if t.start < p {
                return Err(Error::IncompatibleWithPeriod(format!("tail starts at {} inside the prefix of length {p}", t.start)));
            }
            if t.stride % per != 0 {
                return Err(Error::IncompatibleWithPeriod(format!("stride {} is not a multiple of the period length {per}", t.stride)));
            }
            (t.start, t.stride, t.pattern.clone())
        }
        None => {
            let s0 = head_end.max(p);
            let s = p + (s0 - p).div_ceil(per) * per;
            (s, per, Vec::new())
        }
    };
    // head purity
    let walk = color_walk(gamma, (0..start.max(head_end)).map(|k| w.letter(k)).collect::<Vec<_>>().iter());
    for &(a, b) in &cert.head {
        if walk[a] != walk[b] {
            return Err(Error::IntervalNotColorPure { a, b });
        }
    }
    // tail purity, checked over one orbit of the stride word
    if !pattern.is_empty() {
        let base = walk[start].clone();
        let mut cur = base.clone();
        let mut t = 0;
        loop {
            let seg = color_walk(&cur, (0..stride).map(|k| w.letter(start + t * stride + k)).collect::<Vec<_>>().iter());
            for &(a, b) in &pattern {
                if seg[a] != seg[b] {
                    let off = start + t * stride;
                    return Err(Error::IntervalNotColorPure { a: off + a, b: off + b });
                }
            }
            cur = seg[stride].clone();
            t += 1;
            if cur == base {
                break;
            }
        }
    }
    let keep = |lo: usize, hi: usize, cut: &[(usize, usize)]| -> Vec<Letter> {
        (lo..hi).filter(|&k| !cut.iter().any(|&(a, b)| a <= k && k < b)).map(|k| w.letter(k)).collect()
    };
    let prefix = keep(0, start, &cert.head);
    let shifted: Vec<_> = pattern.iter().map(|&(a, b)| (start + a, start + b)).collect();
    let period = keep(start, start + stride, &shifted);
    Ok((prefix, period))
}

/// Deletes every certified sub-braid of `w`.
pub fn delete_subbraids(w: &InfiniteBraidWord, gamma: &Coloring, cert: &Certificate) -> Result<InfiniteBraidWord> {
    let (prefix, period) = deletion_parts(w, gamma, cert)?;
    if period.is_empty() {
        return Err(Error::DeletesWholePeriod);
    }
    Ok(InfiniteBraidWord { strands: w.strands, prefix, period })
}

/// Elementary rewriting step at 0-based letter position `pos`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move", content = "pos", rename_all = "snake_case")]
pub enum BraidMove {
    /// `σ_i^a σ_j^b = σ_j^b σ_i^a` for `|i - j| ≥ 2`.
    Commute(usize),
    /// `σ_i σ_j σ_i = σ_j σ_i σ_j` and its mixed-sign variants, `|i - j| = 1`.
    Braid(usize),
}

impl fmt::Display for BraidMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BraidMove::Commute(p) => write!(f, "commute@{p}"),
            BraidMove::Braid(p) => write!(f, "braid@{p}"),
        }
    }
}

fn rewrite_triple(x: Letter, y: Letter, z: Letter) -> Option<[Letter; 3]> {
    if x.gen != z.gen || x.gen.abs_diff(y.gen) != 1 {
        return None;
    }
    let (a, b) = (x.gen, y.gen);
    if x.positive == y.positive && y.positive == z.positive {
        let s = x.positive;
        return Some([Letter { gen: b, positive: s }, Letter { gen: a, positive: s }, Letter { gen: b, positive: s }]);
    }
    if z.positive != x.positive {
        // x^e y^d x^{-e} = y^{-e} x^d y^e
        return Some([
            Letter { gen: b, positive: !x.positive },
            Letter { gen: a, positive: y.positive },
            Letter { gen: b, positive: x.positive },
        ]);
    }
    None
}

/// Applies `mv` to `word`, failing if the move does not match there.
pub fn apply_move(word: &[Letter], mv: BraidMove) -> Result<Vec<Letter>> {
    let mut out = word.to_vec();
    match mv {
        BraidMove::Commute(p) => {
            if p + 1 >= word.len() || word[p].gen.abs_diff(word[p + 1].gen) < 2 {
                return Err(Error::Precondition(format!("no far commutation at {p}")));
            }
            out.swap(p, p + 1);
        }
        BraidMove::Braid(p) => {
            if p + 2 >= word.len() {
                return Err(Error::Precondition(format!("no braid relation at {p}")));
            }
            let r = rewrite_triple(word[p], word[p + 1], word[p + 2])
                .ok_or_else(|| Error::Precondition(format!("no braid relation at {p}")))?;
            out[p..p + 3].copy_from_slice(&r);
        }
    }
    Ok(out)
}

fn neighbours(word: &[Letter]) -> Vec<(BraidMove, Vec<Letter>)> {
    let mut out = Vec::new();
    for p in 0..word.len().saturating_sub(1) {
        if let Ok(w) = apply_move(word, BraidMove::Commute(p)) {
            out.push((BraidMove::Commute(p), w));
        }
        if let Ok(w) = apply_move(word, BraidMove::Braid(p)) {
            out.push((BraidMove::Braid(p), w));
        }
    }
    out
}

/// Breadth-first search over braid moves, layer by layer in lexicographic order.
/// `goal` returns a payload for the first accepted word.
fn bfs<T>(start: &[Letter], budget: usize, goal: impl Fn(&[Letter]) -> Option<T>) -> Result<Option<(Vec<Letter>, T, Vec<BraidMove>)>> {
    let mut parent: HashMap<Vec<Letter>, (Vec<Letter>, BraidMove)> = HashMap::new();
    let mut seen: HashSet<Vec<Letter>> = HashSet::new();
    seen.insert(start.to_vec());
    let mut layer = vec![start.to_vec()];
    while !layer.is_empty() {
        layer.sort();
        for w in &layer {
            if let Some(t) = goal(w) {
                let mut moves = Vec::new();
                let mut cur = w.clone();
                while let Some((prev, mv)) = parent.get(&cur) {
                    moves.push(*mv);
                    cur = prev.clone();
                }
                moves.reverse();
                return Ok(Some((w.clone(), t, moves)));
            }
        }
        let mut next = Vec::new();
        for w in &layer {
            for (mv, nw) in neighbours(w) {
                if seen.insert(nw.clone()) {
                    if seen.len() > budget {
                        return Err(Error::BudgetExhausted { budget });
                    }
                    parent.insert(nw.clone(), (w.clone(), mv));
                    next.push(nw);
                }
            }
        }
        layer = next;
    }
    Ok(None)
}

/// A word isotopic to the input with a clasp `σ_a σ_a` at `position` (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaspFound {
    pub word: Vec<Letter>,
    pub position: usize,
    pub moves: Vec<BraidMove>,
}

impl ClaspFound {
    /// Replays the move log from `start`.
    pub fn replay(&self, start: &[Letter]) -> Result<Vec<Letter>> {
        self.moves.iter().try_fold(start.to_vec(), |w, mv| apply_move(&w, *mv))
    }
}

pub const DEFAULT_BUDGET: usize = 100_000;

/// Rewrites a positive color-pure braid without uni-colored crossings until a clasp appears.
pub fn find_clasp(b: &BraidWord, gamma: &Coloring, budget: usize) -> Result<ClaspFound> {
    if !b.is_positive() {
        return Err(Error::Precondition("find_clasp needs a positive braid".into()));
    }
    if !b.is_color_pure(gamma)? {
        return Err(Error::Precondition("find_clasp needs a color-pure braid".into()));
    }
    if b.crossing_colors(gamma)?.iter().any(|(x, y)| x == y) {
        return Err(Error::Precondition("braid has a uni-colored crossing".into()));
    }
    let goal = |w: &[Letter]| w.windows(2).position(|p| p[0] == p[1]);
    match bfs(b.letters(), budget, goal)? {
        Some((word, position, moves)) => Ok(ClaspFound { word, position, moves }),
        None => Err(Error::NoClasp),
    }
}

/// Like [`find_clasp`] for mixed-sign braids: stops at any adjacent pair on the same generator
/// (a positive or negative clasp, or a cancelling pair).
pub fn find_reducible_pair(b: &BraidWord, budget: usize) -> Result<ClaspFound> {
    let goal = |w: &[Letter]| w.windows(2).position(|p| p[0].gen == p[1].gen);
    match bfs(b.letters(), budget, goal)? {
        Some((word, position, moves)) => Ok(ClaspFound { word, position, moves }),
        None => Err(Error::NoClasp),
    }
}

/// Searches for braid moves turning `a` into `b`. `Ok(None)` means the reachable set was
/// exhausted without meeting `b`.
pub fn braid_equivalence(a: &[Letter], b: &[Letter], budget: usize) -> Result<Option<Vec<BraidMove>>> {
    if a.len() != b.len() {
        return Ok(None);
    }
    Ok(bfs(a, budget, |w| (w == b).then_some(()))?.map(|(_, _, m)| m))
}

fn same_permutation(n: usize, a: &[Letter], b: &[Letter]) -> bool {
    let p = |w: &[Letter]| BraidWord { strands: n, letters: w.to_vec() }.permutation();
    p(a) == p(b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CertVerdict {
    /// The deleted word equals `FT^∞`; `window` letters were rewritten with `moves` braid moves.
    Accepted { window: usize, moves: usize },
    Mismatch { reason: String },
}

impl CertVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, CertVerdict::Accepted { .. })
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Checks that deleting `cert` from `w` leaves `FT^∞`, up to braid moves in a window of
/// one prefix plus up to two periods. Budget exhaustion is an error, never a mismatch.
pub fn verify_completeness_certificate(
    w: &InfiniteBraidWord,
    gamma: &Coloring,
    cert: &Certificate,
    budget: usize,
) -> Result<CertVerdict> {
    let n = w.strands;
    let ft = InfiniteBraidWord::full_twist(n)?;
    let (prefix, period) = deletion_parts(w, gamma, cert)?;
    if period.is_empty() {
        return Ok(CertVerdict::Mismatch { reason: "deletion leaves a finite word".into() });
    }
    if !period.iter().chain(&prefix).all(|l| l.positive) {
        return Ok(CertVerdict::Mismatch { reason: "deleted word is not positive".into() });
    }
    let d = InfiniteBraidWord { strands: n, prefix, period };
    let (p, per, l) = (d.prefix.len(), d.period.len(), n * (n - 1));
    let lcm = per / gcd(per, l) * l;
    let word = |src: &InfiniteBraidWord, lo: usize, hi: usize| -> Vec<Letter> { (lo..hi).map(|k| src.letter(k)).collect() };
    let mut exhausted = false;
    let mut attempt = |x: Vec<Letter>, y: Vec<Letter>| -> Option<usize> {
        if x == y {
            return Some(0);
        }
        if !same_permutation(n, &x, &y) {
            return None;
        }
        match braid_equivalence(&x, &y, budget) {
            Ok(Some(m)) => Some(m.len()),
            Ok(None) => None,
            Err(_) => {
                exhausted = true;
                None
            }
        }
    };
    for t in 0..=2 {
        let win = p + t * per;
        // literal agreement beyond the window
        if word(&d, win, win + lcm) == word(&ft, win, win + lcm) {
            if let Some(m) = attempt(word(&d, 0, win), word(&ft, 0, win)) {
                return Ok(CertVerdict::Accepted { window: win, moves: m });
            }
        }
        // agreement in whole full-twist blocks beyond the window
        if win % l == 0 {
            if let Some(m1) = attempt(word(&d, win, win + lcm), word(&ft, win, win + lcm)) {
                if let Some(m0) = attempt(word(&d, 0, win), word(&ft, 0, win)) {
                    return Ok(CertVerdict::Accepted { window: win + lcm, moves: m0 + m1 });
                }
            }
        }
    }
    if exhausted {
        return Err(Error::BudgetExhausted { budget });
    }
    Ok(CertVerdict::Mismatch { reason: format!("deleted word {d} is not FT^∞ within the window") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(v: &[u32]) -> Coloring {
        Coloring::new(v.to_vec())
    }

    fn pw(n: usize, g: &[i64]) -> BraidWord {
        BraidWord::from_signed(n, g).unwrap()
    }

    fn inf(n: usize, pre: &[i64], per: &[i64]) -> InfiniteBraidWord {
        InfiniteBraidWord::new(n, pw(n, pre).letters().to_vec(), pw(n, per).letters().to_vec()).unwrap()
    }

    #[test]
    fn color_size_examples() {
        assert_eq!(c(&[1, 2, 3]).color_size(), 4);
        assert_eq!(c(&[2, 2]).color_size(), 2);
        assert_eq!(c(&[1, 1, 1, 1]).color_size(), 6);
    }

    #[test]
    fn parse_roundtrip_and_errors() {
        let b = BraidWord::parse("1 2 -1", 3).unwrap();
        assert_eq!(b.to_string(), "1 2 -1");
        match BraidWord::parse("1 x", 3) {
            Err(Error::Parse { line: 1, column: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        match BraidWord::parse("1\n 3", 3) {
            Err(Error::Parse { line: 2, column: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(BraidWord::from_signed(3, &[0]).is_err());
    }

    #[test]
    fn induced_colorings() {
        let b = pw(3, &[1, 2]);
        assert_eq!(b.induced_coloring(&c(&[1, 2, 3]), 2).unwrap(), c(&[2, 3, 1]));
        assert!(BraidWord::full_twist(3).is_color_pure(&c(&[1, 2, 3])).unwrap());
        assert_eq!(BraidWord::full_twist(4).len(), 12);
        assert!(BraidWord::full_twist(4).permutation().iter().enumerate().all(|(i, &p)| i == p));
    }

    #[test]
    fn purity_examples() {
        let ft = InfiniteBraidWord::full_twist(3).unwrap();
        assert_eq!(ft.maximal_purity_sequence(&c(&[1, 2, 3]), 3).unwrap(), vec![6, 12, 18]);
        assert_eq!(ft.maximal_purity_sequence(&c(&[1, 1, 1]), 4).unwrap(), vec![1, 2, 3, 4]);
        let s1 = inf(3, &[], &[1]);
        assert_eq!(s1.maximal_purity_sequence(&c(&[1, 2, 3]), 3).unwrap(), vec![2, 4, 6]);
        let w = inf(3, &[2], &[1]);
        assert_eq!(w.maximal_purity_sequence(&c(&[1, 2, 2]), 3).unwrap(), vec![1, 3, 5]);
        assert_eq!(w.maximal_purity_sequence(&c(&[1, 1, 2]), 3), Err(Error::NotColorPure));
        let never = inf(3, &[1, 2], &[1]);
        assert_eq!(never.maximal_purity_sequence(&c(&[1, 2, 3]), 2), Err(Error::NotColorPure));
    }

    #[test]
    fn deletion_examples() {
        // (σ1² σ2²)^∞, distinct colors, delete each σ2² block
        let w = inf(3, &[], &[1, 1, 2, 2]);
        let cert = Certificate { head: vec![], tail: Some(TailPattern { start: 0, stride: 4, pattern: vec![(2, 4)] }) };
        let d = delete_subbraids(&w, &c(&[1, 2, 3]), &cert).unwrap();
        assert_eq!(d.period(), pw(3, &[1, 1]).letters());
        // deleting an impure interval
        let cert = Certificate { head: vec![(0, 1)], tail: None };
        assert_eq!(delete_subbraids(&w, &c(&[1, 2, 3]), &cert), Err(Error::IntervalNotColorPure { a: 0, b: 1 }));
        // stride not aligned with the period
        let cert = Certificate { head: vec![], tail: Some(TailPattern { start: 0, stride: 3, pattern: vec![(0, 1)] }) };
        assert!(matches!(delete_subbraids(&w, &c(&[1, 1, 1]), &cert), Err(Error::IncompatibleWithPeriod(_))));
        // everything deleted
        let cert = Certificate { head: vec![], tail: Some(TailPattern { start: 0, stride: 4, pattern: vec![(0, 4)] }) };
        assert_eq!(delete_subbraids(&w, &c(&[1, 2, 3]), &cert), Err(Error::DeletesWholePeriod));
        assert!(matches!(verify_completeness_certificate(&w, &c(&[1, 2, 3]), &cert, 10).unwrap(), CertVerdict::Mismatch { .. }));
    }

    #[test]
    fn certificate_json_shape() {
        let cert: Certificate = serde_json::from_str(r#"{"head":[[0,1]],"tail":{"start":2,"stride":4,"pattern":[[1,2]]}}"#).unwrap();
        assert_eq!(cert.intervals_below(11), vec![(0, 1), (3, 4), (7, 8)]);
        let touching: Certificate = serde_json::from_str(r#"{"head":[[0,2],[2,3]]}"#).unwrap();
        assert!(touching.validate().is_ok());
        let bad: Certificate = serde_json::from_str(r#"{"head":[[0,2],[1,3]]}"#).unwrap();
        assert!(bad.validate().is_err());
    }

    #[test]
    fn clasp_search() {
        let gamma = c(&[1, 2, 3]);
        let b = BraidWord::full_twist(3);
        let found = find_clasp(&b, &gamma, DEFAULT_BUDGET).unwrap();
        assert_eq!(found.word[found.position], found.word[found.position + 1]);
        assert_eq!(found.replay(b.letters()).unwrap(), found.word);
        // preconditions
        assert!(matches!(find_clasp(&pw(3, &[1, -1]), &gamma, 10), Err(Error::Precondition(_))));
        assert!(matches!(find_clasp(&pw(3, &[1, 1]), &c(&[1, 1, 2]), 10), Err(Error::Precondition(_))));
        // tiny budget on a word that needs rewriting
        let far = pw(4, &[1, 2, 3, 1, 2, 3, 1, 2, 3, 1, 2, 3]);
        assert_eq!(find_clasp(&far, &c(&[1, 2, 3, 4]), 2), Err(Error::BudgetExhausted { budget: 2 }));
    }

    #[test]
    fn mixed_sign_moves_are_involutive() {
        for e in [true, false] {
            for d in [true, false] {
                let w = [Letter { gen: 1, positive: e }, Letter { gen: 2, positive: d }, Letter { gen: 1, positive: !e }];
                let r = apply_move(&w, BraidMove::Braid(0)).unwrap();
                assert_eq!(apply_move(&r, BraidMove::Braid(0)).unwrap(), w);
            }
        }
        let w = pw(3, &[1, -2, 1]);
        assert!(apply_move(w.letters(), BraidMove::Braid(0)).is_err());
    }

    #[test]
    fn certificates() {
        let gamma = c(&[1, 2, 3]);
        // (σ1² σ2²)^∞: deleting σ2² blocks leaves σ1^∞, a definite mismatch
        let w = inf(3, &[], &[1, 1, 2, 2]);
        let cert = Certificate { head: vec![], tail: Some(TailPattern { start: 0, stride: 4, pattern: vec![(2, 4)] }) };
        assert!(matches!(verify_completeness_certificate(&w, &gamma, &cert, DEFAULT_BUDGET).unwrap(), CertVerdict::Mismatch { .. }));
        // uniform colors: deleting letters 2 and 4 of each period leaves (σ1σ2)^∞
        let u = c(&[1, 1, 1]);
        let cert = Certificate { head: vec![], tail: Some(TailPattern { start: 0, stride: 4, pattern: vec![(1, 2), (3, 4)] }) };
        assert!(verify_completeness_certificate(&w, &u, &cert, DEFAULT_BUDGET).unwrap().is_accepted());
        // σ3 · FT^∞ on 4 strands with colors making σ3 pure
        let g4 = c(&[1, 2, 3, 3]);
        let w = inf(4, &[3], &[1, 2, 3]);
        let cert = Certificate { head: vec![(0, 1)], tail: None };
        assert!(verify_completeness_certificate(&w, &g4, &cert, DEFAULT_BUDGET).unwrap().is_accepted());
        // (σ2σ1)^∞ is FT^∞ in whole twist blocks
        let w = inf(3, &[], &[2, 1]);
        assert!(verify_completeness_certificate(&w, &gamma, &Certificate::empty(), DEFAULT_BUDGET).unwrap().is_accepted());
        // (β·FT)^∞ with β = σ1² deleted
        let w = inf(3, &[], &[1, 1, 1, 2, 1, 2, 1, 2]);
        let cert = Certificate { head: vec![], tail: Some(TailPattern { start: 0, stride: 8, pattern: vec![(0, 2)] }) };
        assert!(verify_completeness_certificate(&w, &gamma, &cert, DEFAULT_BUDGET).unwrap().is_accepted());
    }

    #[test]
    fn certificate_budget_is_not_a_mismatch() {
        // (σ2σ1)^∞ needs rewriting; a budget of 1 cannot finish
        let w = inf(3, &[], &[2, 1]);
        let r = verify_completeness_certificate(&w, &c(&[1, 2, 3]), &Certificate::empty(), 1);
        assert_eq!(r, Err(Error::BudgetExhausted { budget: 1 }));
    }

    #[test]
    fn negative_shift_counts_negative_crossings() {
        assert_eq!(pw(2, &[-1, -1]).negative_shift(&c(&[2, 2])).unwrap(), 4);
        assert_eq!(pw(2, &[1, -1]).negative_shift(&c(&[1, 3])).unwrap(), 1);
        assert_eq!(pw(3, &[1, 2]).negative_shift(&c(&[1, 3, 2])).unwrap(), 0);
    }

    fn arb_word(n: usize, maxlen: usize) -> impl Strategy<Value = BraidWord> {
        proptest::collection::vec((1..n as i64, any::<bool>()), 0..maxlen)
            .prop_map(move |v| BraidWord::from_signed(n, &v.iter().map(|&(g, s)| if s { g } else { -g }).collect::<Vec<_>>()).unwrap())
    }

    proptest! {
        #[test]
        fn purity_tail_is_arithmetic(pre in proptest::collection::vec(1i64..4, 0..5),
                                     per in proptest::collection::vec(1i64..4, 1..6),
                                     labels in proptest::collection::vec(0u32..3, 4)) {
            let w = inf(4, &pre, &per);
            let gamma = Coloring::new(labels);
            if let Ok(pat) = w.purity_pattern(&gamma) {
                let seq = pat.take(3 * pat.offsets.len() + pat.head.len());
                for ell in &seq {
                    prop_assert_eq!(&w.induced_coloring(&gamma, *ell).unwrap(), &gamma);
                }
                prop_assert!(seq.windows(2).all(|x| x[0] < x[1]));
                prop_assert_eq!(pat.cycle % per.len(), 0);
                // the cycle divides |period| × (order of the period permutation)
                let pw_ = BraidWord::from_signed(4, &per).unwrap();
                let perm = pw_.permutation();
                let mut order = 1;
                let mut q = perm.clone();
                while q.iter().enumerate().any(|(i, &x)| i != x) {
                    q = q.iter().map(|&x| perm[x]).collect();
                    order += 1;
                }
                prop_assert_eq!((per.len() * order) % pat.cycle, 0);
                for ell in 0..pat.cycle_start + 2 * pat.cycle {
                    let pure = ell > 0 && w.induced_coloring(&gamma, ell).unwrap() == gamma;
                    prop_assert_eq!(pat.is_pure(ell) && ell > 0, pure);
                }
            }
        }

        #[test]
        fn inverse_permutation(b in arb_word(4, 10)) {
            let x = b.concat(&b.inverse());
            prop_assert!(x.permutation().iter().enumerate().all(|(i, &p)| i == p));
        }

        #[test]
        fn clasp_found_is_equivalent(g in proptest::collection::vec(1i64..3, 0..8)) {
            let gamma = Coloring::new(vec![1, 2, 3]);
            let b = BraidWord::from_signed(3, &g).unwrap();
            // pure braids only
            let b = b.concat(&BraidWord::new(3, b.letters().iter().rev().copied().collect()).unwrap());
            if b.is_color_pure(&gamma).unwrap() && !b.is_empty() {
                let f = find_clasp(&b, &gamma, DEFAULT_BUDGET).unwrap();
                prop_assert_eq!(f.replay(b.letters()).unwrap(), f.word.clone());
                prop_assert_eq!(f.word[f.position], f.word[f.position + 1]);
                // the clasp returns its strands to their colors
                let w = BraidWord::new(3, f.word.clone()).unwrap();
                let before = w.induced_coloring(&gamma, f.position).unwrap();
                prop_assert_eq!(w.induced_coloring(&gamma, f.position + 2).unwrap(), before);
            }
        }
    }
}
