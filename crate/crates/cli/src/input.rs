//! Input files and flag values.

use serde::Deserialize;
use std::path::Path;
use webtwist::braid::{BraidWord, Certificate, Coloring, InfiniteBraidWord};
use webtwist::{Error, Result};

/// `{"n", "N", "gamma", "prefix", "period", "cert"?}`
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordFile {
    pub n: usize,
    #[serde(rename = "N")]
    pub rank: Option<u32>,
    pub gamma: Vec<u32>,
    #[serde(default)]
    pub prefix: Vec<i64>,
    pub period: Vec<i64>,
    #[serde(default)]
    pub cert: Option<Certificate>,
}

pub struct LoadedWord {
    pub word: InfiniteBraidWord,
    pub gamma: Coloring,
    pub rank: u32,
    pub cert: Certificate,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse { line: 0, column: 0, msg: format!("{}: {e}", path.display()) })
}

fn located(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { line, column, msg } => Error::Parse { line, column, msg: format!("{}: {msg}", path.display()) },
        e => e,
    }
}

pub fn json_file<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| located(path, e.into()))
}

/// `n` strands, coloring and rank; `rank` overrides the file, default is the largest label.
pub fn resolve_rank(gamma: &[u32], file: Option<u32>, flag: Option<u32>) -> Result<(Coloring, u32)> {
    let rank = flag.or(file).unwrap_or_else(|| gamma.iter().copied().max().unwrap_or(1).max(1));
    Ok((Coloring::checked(gamma.to_vec(), rank)?, rank))
}

impl WordFile {
    pub fn load(path: &Path, rank: Option<u32>, cert: Option<&Path>) -> Result<LoadedWord> {
        let f: WordFile = json_file(path)?;
        f.into_loaded(rank, cert)
    }

    pub fn into_loaded(self, rank: Option<u32>, cert: Option<&Path>) -> Result<LoadedWord> {
        if self.gamma.len() != self.n {
            return Err(Error::InvalidColoring(format!("{} labels for {} strands", self.gamma.len(), self.n)));
        }
        let (gamma, rank) = resolve_rank(&self.gamma, self.rank, rank)?;
        let prefix = BraidWord::from_signed(self.n, &self.prefix)?;
        let period = BraidWord::from_signed(self.n, &self.period)?;
        let word = InfiniteBraidWord::new(self.n, prefix.letters().to_vec(), period.letters().to_vec())?;
        let cert = match cert {
            Some(p) => json_file(p)?,
            None => self.cert.unwrap_or_default(),
        };
        cert.validate()?;
        Ok(LoadedWord { word, gamma, rank, cert })
    }
}

/// One side of a bi-infinite word, read away from the core.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailFile {
    #[serde(default)]
    pub prefix: Vec<i64>,
    pub period: Vec<i64>,
    #[serde(default)]
    pub cert: Option<Certificate>,
}

/// `{"n", "N", "gamma", "gamma_bottom", "left", "core", "right"}`
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiFile {
    pub n: usize,
    #[serde(rename = "N")]
    pub rank: Option<u32>,
    pub gamma: Vec<u32>,
    pub gamma_bottom: Option<Vec<u32>>,
    pub left: TailFile,
    #[serde(default)]
    pub core: Vec<i64>,
    pub right: TailFile,
}

impl TailFile {
    pub fn word(&self, n: usize) -> Result<InfiniteBraidWord> {
        let p = BraidWord::from_signed(n, &self.prefix)?;
        let q = BraidWord::from_signed(n, &self.period)?;
        InfiniteBraidWord::new(n, p.letters().to_vec(), q.letters().to_vec())
    }
}

/// A coloring given as `1,2,3`.
pub fn parse_gamma(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .enumerate()
        .map(|(i, t)| {
            t.trim().parse::<u32>().map_err(|e| Error::Parse { line: 1, column: 1 + s.split(',').take(i).map(|x| x.len() + 1).sum::<usize>(), msg: format!("label {t:?}: {e}") })
        })
        .collect()
}

/// A finite word: braid text, or the path of a file holding it.
pub fn parse_word(s: &str, strands: usize) -> Result<BraidWord> {
    let p = Path::new(s);
    if p.is_file() {
        BraidWord::parse(&read(p)?, strands).map_err(|e| located(p, e))
    } else {
        BraidWord::parse(s, strands)
    }
}

/// Blocks given as `1-2,3-4`.
pub fn parse_blocks(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(',')
        .map(|b| {
            let bad = || Error::Parse { line: 1, column: 1, msg: format!("block {b:?} is not lo-hi") };
            let (lo, hi) = b.trim().split_once('-').ok_or_else(bad)?;
            Ok((lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?))
        })
        .collect()
}
