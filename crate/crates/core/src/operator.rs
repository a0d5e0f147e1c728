//! Sparse operators between tensor products of exterior powers `⊗ Λ^{γ_i}(C^N)`.

use crate::error::{Error, Result};
use crate::poly::LaurentPoly;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

/// Basis of `⊗ Λ^{γ_i}(C^N)`: one subset of `{1..N}` per strand, stored as a bitmask
/// (bit `x - 1` for element `x`). States are ordered lexicographically by their index lists.
#[derive(Debug, PartialEq, Eq)]
pub struct StateSpace {
    labels: Vec<u32>,
    rank: u32,
    states: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

fn subsets(rank: u32, k: u32) -> Vec<u32> {
    fn rec(start: u32, rank: u32, k: u32, acc: u32, out: &mut Vec<u32>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for x in start..rank {
            if rank - x < k {
                break;
            }
            rec(x + 1, rank, k - 1, acc | (1 << x), out);
        }
    }
    let mut out = Vec::new();
    if k <= rank {
        rec(0, rank, k, 0, &mut out);
    }
    out
}

fn binom(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

static CACHE: OnceLock<Mutex<HashMap<(Vec<u32>, u32), Arc<StateSpace>>>> = OnceLock::new();

impl StateSpace {
    /// `Π C(N, γ_i)` without building anything.
    pub fn dimension(labels: &[u32], rank: u32) -> u128 {
        labels.iter().map(|&l| binom(rank, l)).product()
    }

    /// Shared, cached space for the given labels.
    pub fn get(labels: &[u32], rank: u32) -> Arc<StateSpace> {
        let cache = CACHE.get_or_init(Default::default);
        let key = (labels.to_vec(), rank);
        if let Some(s) = cache.lock().unwrap().get(&key) {
            return s.clone();
        }
        let built = Arc::new(Self::build(labels, rank));
        cache.lock().unwrap().entry(key).or_insert(built).clone()
    }

    /// Like [`StateSpace::get`] but refuses spaces above `ceiling`.
    pub fn get_bounded(labels: &[u32], rank: u32, ceiling: usize) -> Result<Arc<StateSpace>> {
        let dim = Self::dimension(labels, rank);
        if dim > ceiling as u128 {
            return Err(Error::DimensionOverflow { dim, ceiling });
        }
        Ok(Self::get(labels, rank))
    }

    fn build(labels: &[u32], rank: u32) -> StateSpace {
        let mut states: Vec<Vec<u32>> = vec![Vec::new()];
        for &l in labels {
            let subs = subsets(rank, l);
            let mut next = Vec::with_capacity(states.len() * subs.len());
            for s in &states {
                for &m in &subs {
                    let mut t = s.clone();
                    t.push(m);
                    next.push(t);
                }
            }
            states = next;
        }
        states.sort_by_key(|s| s.iter().map(|&m| mask_indices(m)).collect::<Vec<_>>());
        let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        StateSpace { labels: labels.to_vec(), rank, states, index }
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, i: usize) -> &[u32] {
        &self.states[i]
    }

    pub fn index_of(&self, s: &[u32]) -> Option<usize> {
        self.index.get(s).copied()
    }

    fn same(&self, other: &StateSpace) -> bool {
        self.labels == other.labels && self.rank == other.rank
    }
}

/// 1-based sorted indices of a bitmask.
pub fn mask_indices(m: u32) -> Vec<u32> {
    (0..32).filter(|b| m >> b & 1 == 1).map(|b| b + 1).collect()
}

fn indices_mask(v: &[u32]) -> Option<u32> {
    let mut m = 0u32;
    for &x in v {
        if x == 0 || x > 32 || m >> (x - 1) & 1 == 1 {
            return None;
        }
        m |= 1 << (x - 1);
    }
    Some(m)
}

/// Column-major sparse matrix over `Z[q, q^{-1}]`.
#[derive(Clone, Debug)]
pub struct OperatorQ {
    dom: Arc<StateSpace>,
    cod: Arc<StateSpace>,
    cols: Vec<Vec<(usize, LaurentPoly)>>,
}

impl PartialEq for OperatorQ {
    fn eq(&self, other: &Self) -> bool {
        self.dom.same(&other.dom) && self.cod.same(&other.cod) && self.cols == other.cols
    }
}

impl Eq for OperatorQ {}

const PAR_THRESHOLD: usize = 64;

fn collect_column(acc: BTreeMap<usize, LaurentPoly>) -> Vec<(usize, LaurentPoly)> {
    acc.into_iter().filter(|(_, p)| !p.is_zero()).collect()
}

impl OperatorQ {
    pub fn zero(dom: Arc<StateSpace>, cod: Arc<StateSpace>) -> Self {
        let cols = vec![Vec::new(); dom.dim()];
        OperatorQ { dom, cod, cols }
    }

    pub fn identity(space: Arc<StateSpace>) -> Self {
        let cols = (0..space.dim()).map(|i| vec![(i, LaurentPoly::one())]).collect();
        OperatorQ { dom: space.clone(), cod: space, cols }
    }

    /// Builds the operator whose column for state `s` is `f(s)`, given as target states.
    pub fn from_fn<F>(dom: Arc<StateSpace>, cod: Arc<StateSpace>, f: F) -> Self
    where
        F: Fn(&[u32]) -> Vec<(Vec<u32>, LaurentPoly)> + Sync,
    {
        let build = |j: usize| {
            let mut acc: BTreeMap<usize, LaurentPoly> = BTreeMap::new();
            for (t, p) in f(dom.state(j)) {
                let i = cod.index_of(&t).expect("target state outside the codomain");
                *acc.entry(i).or_default() += &p;
            }
            collect_column(acc)
        };
        let cols = if dom.dim() >= PAR_THRESHOLD {
            (0..dom.dim()).into_par_iter().map(build).collect()
        } else {
            (0..dom.dim()).map(build).collect()
        };
        OperatorQ { dom, cod, cols }
    }

    pub fn domain(&self) -> &Arc<StateSpace> {
        &self.dom
    }

    pub fn codomain(&self) -> &Arc<StateSpace> {
        &self.cod
    }

    pub fn get(&self, row: usize, col: usize) -> LaurentPoly {
        self.cols[col].iter().find(|(r, _)| *r == row).map(|(_, p)| p.clone()).unwrap_or_default()
    }

    /// Nonzero entries `(row, col, coefficient)` in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &LaurentPoly)> + '_ {
        self.cols.iter().enumerate().flat_map(|(j, c)| c.iter().map(move |(i, p)| (*i, j, p)))
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// `next ∘ self`: apply `self` first.
    pub fn then(&self, next: &OperatorQ) -> Result<OperatorQ> {
        if !self.cod.same(&next.dom) {
            return Err(Error::BoundaryMismatch(format!(
                "composing {:?} into {:?}",
                self.cod.labels(),
                next.dom.labels()
            )));
        }
        let build = |col: &Vec<(usize, LaurentPoly)>| {
            let mut acc: BTreeMap<usize, LaurentPoly> = BTreeMap::new();
            for (k, a) in col {
                for (i, b) in &next.cols[*k] {
                    *acc.entry(*i).or_default() += &(a * b);
                }
            }
            collect_column(acc)
        };
        let cols = if self.cols.len() >= PAR_THRESHOLD {
            self.cols.par_iter().map(build).collect()
        } else {
            self.cols.iter().map(build).collect()
        };
        Ok(OperatorQ { dom: self.dom.clone(), cod: next.cod.clone(), cols })
    }

    fn zip(&self, other: &OperatorQ, sign: bool) -> Result<OperatorQ> {
        if !self.dom.same(&other.dom) || !self.cod.same(&other.cod) {
            return Err(Error::BoundaryMismatch("adding operators with different boundaries".into()));
        }
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut acc: BTreeMap<usize, LaurentPoly> = a.iter().cloned().collect();
                for (i, p) in b {
                    let e = acc.entry(*i).or_default();
                    if sign {
                        *e += p;
                    } else {
                        *e -= p;
                    }
                }
                collect_column(acc)
            })
            .collect();
        Ok(OperatorQ { dom: self.dom.clone(), cod: self.cod.clone(), cols })
    }

    pub fn add(&self, other: &OperatorQ) -> Result<OperatorQ> {
        self.zip(other, true)
    }

    pub fn sub(&self, other: &OperatorQ) -> Result<OperatorQ> {
        self.zip(other, false)
    }

    pub fn scale(&self, c: &LaurentPoly) -> OperatorQ {
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|(i, p)| (*i, p * c)).filter(|(_, p)| !p.is_zero()).collect())
            .collect();
        OperatorQ { dom: self.dom.clone(), cod: self.cod.clone(), cols }
    }

    /// Tensor product, `self` on the left strands.
    pub fn tensor(&self, other: &OperatorQ) -> OperatorQ {
        assert_eq!(self.dom.rank, other.dom.rank, "tensoring different ranks");
        let cat = |a: &StateSpace, b: &StateSpace| {
            let mut l = a.labels.clone();
            l.extend_from_slice(&b.labels);
            StateSpace::get(&l, a.rank)
        };
        let dom = cat(&self.dom, &other.dom);
        let cod = cat(&self.cod, &other.cod);
        let d2 = other.cod.dim();
        let mut cols = vec![Vec::new(); dom.dim()];
        for (c1, col1) in self.cols.iter().enumerate() {
            for (c2, col2) in other.cols.iter().enumerate() {
                let mut col = Vec::with_capacity(col1.len() * col2.len());
                for (r1, p1) in col1 {
                    for (r2, p2) in col2 {
                        col.push((r1 * d2 + r2, p1 * p2));
                    }
                }
                col.sort_by_key(|(r, _)| *r);
                cols[c1 * other.dom.dim() + c2] = col;
            }
        }
        OperatorQ { dom, cod, cols }
    }

    /// Smallest q-exponent among all entries; `None` for the zero operator.
    pub fn min_degree(&self) -> Option<i64> {
        self.entries().filter_map(|(_, _, p)| p.min_degree()).min()
    }

    /// `min_degree(self - other)`, `None` meaning the operators agree exactly.
    pub fn min_degree_diff(&self, other: &OperatorQ) -> Result<Option<i64>> {
        Ok(self.sub(other)?.min_degree())
    }

    /// Keeps exponents strictly below `m`.
    pub fn truncate_below(&self, m: i64) -> OperatorQ {
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|(i, p)| (*i, p.truncate_below(m))).filter(|(_, p)| !p.is_zero()).collect())
            .collect();
        OperatorQ { dom: self.dom.clone(), cod: self.cod.clone(), cols }
    }

    /// SHA-256 of the entries truncated below `q^m`, sorted by (row, col).
    pub fn digest(&self, m: i64) -> String {
        let t = self.truncate_below(m);
        let mut entries: Vec<_> = t.entries().collect();
        entries.sort_by_key(|(r, c, _)| (*r, *c));
        let mut h = Sha256::new();
        h.update(format!("{:?}>{:?};N={};", self.dom.labels, self.cod.labels, self.dom.rank));
        for (r, c, p) in entries {
            h.update(format!("{r},{c}:"));
            for (e, k) in p.terms() {
                h.update(format!("{e}={k} "));
            }
            h.update(";");
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// If `self = c q^e · other` for a monomial, returns `(c, e)`.
    pub fn monomial_ratio(&self, other: &OperatorQ) -> Option<(i64, i64)> {
        if !self.dom.same(&other.dom) || !self.cod.same(&other.cod) {
            return None;
        }
        let (mut a, mut b): (Vec<_>, Vec<_>) = (self.entries().collect(), other.entries().collect());
        if a.len() != b.len() || a.is_empty() {
            return None;
        }
        a.sort_by_key(|x| (x.1, x.0));
        b.sort_by_key(|x| (x.1, x.0));
        let (r0, c0, p0) = a[0];
        let (s0, d0, q0) = b[0];
        if (r0, c0) != (s0, d0) {
            return None;
        }
        let shift = p0.min_degree()? - q0.min_degree()?;
        let lead = |p: &LaurentPoly| p.coeff(p.min_degree().unwrap());
        let (x, y) = (lead(p0), lead(q0));
        let sign: i64 = if x == y { 1 } else if x == -y.clone() { -1 } else { return None };
        let factor = LaurentPoly::monomial(shift, sign);
        for ((r, c, p), (s, d, q)) in a.iter().zip(&b) {
            if (r, c) != (s, d) || **p != *q * &factor {
                return None;
            }
        }
        Some((sign, shift))
    }

    pub fn to_json(&self) -> OperatorJson {
        let enc = |s: &[u32]| s.iter().map(|&m| mask_indices(m)).collect::<Vec<_>>();
        let mut entries: Vec<_> = self.entries().map(|(r, c, p)| (enc(self.cod.state(r)), enc(self.dom.state(c)), p.clone())).collect();
        entries.sort_by(|a, b| (&a.1, &a.0).cmp(&(&b.1, &b.0)));
        OperatorJson {
            dim: [self.cod.dim(), self.dom.dim()],
            rank: self.dom.rank,
            domain: self.dom.labels.clone(),
            codomain: self.cod.labels.clone(),
            entries,
        }
    }

    pub fn from_json(j: &OperatorJson) -> Result<OperatorQ> {
        let dom = StateSpace::get(&j.domain, j.rank);
        let cod = StateSpace::get(&j.codomain, j.rank);
        if j.dim != [cod.dim(), dom.dim()] {
            return Err(Error::Json(format!("dim {:?} does not match the boundary spaces", j.dim)));
        }
        let dec = |space: &StateSpace, v: &Vec<Vec<u32>>| -> Result<usize> {
            let masks: Option<Vec<u32>> = v.iter().map(|x| indices_mask(x)).collect();
            masks.and_then(|m| space.index_of(&m)).ok_or_else(|| Error::Json(format!("unknown basis state {v:?}")))
        };
        let mut cols: Vec<BTreeMap<usize, LaurentPoly>> = vec![BTreeMap::new(); dom.dim()];
        for (r, c, p) in &j.entries {
            let (r, c) = (dec(&cod, r)?, dec(&dom, c)?);
            *cols[c].entry(r).or_default() += p;
        }
        Ok(OperatorQ { dom, cod, cols: cols.into_iter().map(collect_column).collect() })
    }
}

/// Basis state: one sorted 1-based index list per strand.
pub type StateJson = Vec<Vec<u32>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorJson {
    /// `[rows, cols]`
    pub dim: [usize; 2],
    #[serde(rename = "N")]
    pub rank: u32,
    pub domain: Vec<u32>,
    pub codomain: Vec<u32>,
    pub entries: Vec<(StateJson, StateJson, LaurentPoly)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spaces() {
        let s = StateSpace::get(&[1, 2], 3);
        assert_eq!(s.dim(), 9);
        assert_eq!(mask_indices(s.state(0)[1]), vec![1, 2]);
        assert_eq!(StateSpace::get(&[4], 3).dim(), 0);
        assert_eq!(StateSpace::dimension(&[2, 2, 2, 2], 4), 1296);
        assert!(matches!(StateSpace::get_bounded(&[2; 8], 4, 1000), Err(Error::DimensionOverflow { .. })));
        // lexicographic order on index lists
        let t = StateSpace::get(&[2], 3);
        let lists: Vec<_> = (0..3).map(|i| mask_indices(t.state(i)[0])).collect();
        assert_eq!(lists, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn algebra() {
        let s = StateSpace::get(&[1, 1], 2);
        let id = OperatorQ::identity(s.clone());
        let q = id.scale(&LaurentPoly::q());
        assert_eq!(q.then(&q).unwrap(), id.scale(&LaurentPoly::monomial(2, 1)));
        assert_eq!(q.min_degree_diff(&id).unwrap(), Some(0));
        assert_eq!(id.min_degree_diff(&id).unwrap(), None);
        assert_eq!(q.monomial_ratio(&id), Some((1, 1)));
        let t = id.tensor(&OperatorQ::identity(StateSpace::get(&[1], 2)));
        assert_eq!(t, OperatorQ::identity(StateSpace::get(&[1, 1, 1], 2)));
        assert!(id.then(&OperatorQ::identity(StateSpace::get(&[2], 2))).is_err());
    }

    #[test]
    fn json_roundtrip_and_digest() {
        let s = StateSpace::get(&[1, 1], 2);
        let f = OperatorQ::from_fn(s.clone(), s.clone(), |st| {
            vec![(vec![st[1], st[0]], LaurentPoly::from_terms([(-1, 2), (3, -1)]))]
        });
        let j = f.to_json();
        let back = OperatorQ::from_json(&serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap()).unwrap();
        assert_eq!(back, f);
        assert_eq!(f.digest(3), f.truncate_below(3).digest(3));
        assert_ne!(f.digest(4), f.digest(3));
    }
}
