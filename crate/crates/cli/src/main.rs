//! `webtwist`: colored braid analyses from the command line.

mod input;
mod render;

use clap::{Args, Parser, Subcommand, ValueEnum};
use input::{json_file, parse_blocks, parse_gamma, parse_word, resolve_rank, BiFile, WordFile};
use serde::Serialize;
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use webtwist::braid::{find_clasp, verify_completeness_certificate, BraidWord, CertVerdict, Certificate, DEFAULT_BUDGET};
use webtwist::skeleton::{posneg_skeleton, simplify_color_pure};
use webtwist::stab::{self, BiInfiniteWord, InverseSystemSpec, SequenceKind, StabConfig, StabVerdict, DEFAULT_CEILING, DEFAULT_PRECISION};
use webtwist::web::braid_euler_op;
use webtwist::Error;

#[derive(Parser)]
#[command(name = "webtwist", version, about = "Colored braids, sl(N) ladder webs and full-twist stabilization")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sequence {
    /// Every purity index.
    Max,
    /// One truncation per added full twist.
    Twist,
}

impl From<Sequence> for SequenceKind {
    fn from(s: Sequence) -> Self {
        match s {
            Sequence::Max => SequenceKind::MaximalPurity,
            Sequence::Twist => SequenceKind::TwistAligned,
        }
    }
}

#[derive(Args)]
struct Limits {
    /// Rank N of sl(N); defaults to the word file, then the largest label.
    #[arg(long = "N")]
    rank: Option<u32>,
    /// Search budget for braid-move searches, in visited words.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Args)]
struct Finite {
    /// Coloring, e.g. 1,2,3.
    #[arg(long)]
    gamma: String,
    /// Braid word ("1 2 -1") or a file holding one.
    #[arg(long, allow_hyphen_values = true)]
    word: String,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Args)]
struct Infinite {
    /// Infinite word file.
    #[arg(long)]
    word: PathBuf,
    /// Certificate file; overrides one embedded in the word file.
    #[arg(long)]
    cert: Option<PathBuf>,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Args)]
struct Precision {
    /// Number of truncation steps.
    #[arg(long, default_value_t = 5)]
    steps: usize,
    /// q-adic precision M.
    #[arg(short = 'M', long, default_value_t = DEFAULT_PRECISION)]
    precision: i64,
    /// Largest state space allowed.
    #[arg(long, default_value_t = DEFAULT_CEILING)]
    ceiling: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Color size of a coloring, and crossing sums of a word if given.
    Cs {
        #[arg(long)]
        gamma: String,
        #[arg(long, allow_hyphen_values = true)]
        word: Option<String>,
    },
    /// Purity indices of an infinite word.
    Purity {
        #[arg(long)]
        word: PathBuf,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Finds a clasp in a positive color-pure word by braid moves.
    Clasp(Finite),
    /// Checks a completeness certificate.
    Certify(Infinite),
    /// Euler operator of a finite word.
    Euler(Finite),
    /// Complex skeleton of a color-pure word.
    Skeleton(Finite),
    /// Twist decompositions and the bound b for the first truncations.
    Bound {
        #[command(flatten)]
        input: Infinite,
        #[arg(long, default_value_t = 5)]
        ell: usize,
        #[arg(long, value_enum, default_value_t = Sequence::Max)]
        sequence: Sequence,
        /// Cauchy target for b.
        #[arg(long)]
        target: Option<u64>,
    },
    /// Idempotence and absorption defects of full-twist powers.
    Projector {
        #[arg(long)]
        gamma: String,
        #[arg(long = "N")]
        rank: Option<u32>,
        #[arg(long, default_value_t = 6)]
        k: usize,
    },
    /// Stabilization of system B against system A.
    Stabilize {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[command(flatten)]
        limits: Limits,
        #[command(flatten)]
        precision: Precision,
        #[arg(long, value_enum, default_value_t = Sequence::Twist)]
        sequence: Sequence,
    },
    /// Negative-crossing padding against full-twist powers.
    Negshift {
        #[command(flatten)]
        input: Finite,
        #[arg(long, default_value_t = 4)]
        k: usize,
    },
    /// Tensor splitting of an infinite word over disjoint strand blocks.
    Horizontal {
        #[command(flatten)]
        input: Infinite,
        /// Blocks as 1-2,3-4.
        #[arg(long)]
        blocks: String,
        /// Length of the head after which letters stay inside blocks.
        #[arg(long, default_value_t = 0)]
        head: usize,
        #[command(flatten)]
        precision: Precision,
    },
    /// Bi-infinite word analysis.
    Bi {
        #[arg(long)]
        word: PathBuf,
        #[arg(long = "N")]
        rank: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[command(flatten)]
        precision: Precision,
        /// Twist-aligned steps by which both starting points move.
        #[arg(long, default_value_t = 1)]
        shift: usize,
    },
}

/// A report and whether it is a failure verdict.
struct Outcome {
    report: Value,
    failed: bool,
}

fn ok<T: Serialize>(v: T) -> Result<Outcome, Error> {
    Ok(Outcome { report: serde_json::to_value(v)?, failed: false })
}

fn finite(f: &Finite) -> Result<(BraidWord, webtwist::braid::Coloring, u32), Error> {
    let labels = parse_gamma(&f.gamma)?;
    let (gamma, rank) = resolve_rank(&labels, None, f.limits.rank)?;
    Ok((parse_word(&f.word, gamma.len())?, gamma, rank))
}

fn config(rank: u32, p: &Precision, budget: usize) -> StabConfig {
    StabConfig { rank, steps: p.steps, precision: p.precision, ceiling: p.ceiling, budget }
}

fn run(cmd: &Cmd) -> Result<Outcome, Error> {
    match cmd {
        Cmd::Cs { gamma, word } => {
            let g = webtwist::braid::Coloring::new(parse_gamma(gamma)?);
            let mut r = json!({ "gamma": g.labels(), "color_size": g.color_size() });
            if let Some(w) = word {
                let b = parse_word(w, g.len())?;
                r["min_color_sum"] = json!(b.min_color_sum(&g)?);
                r["t_minus"] = json!(b.negative_shift(&g)?);
                r["color_pure"] = json!(b.is_color_pure(&g)?);
            }
            ok(r)
        }
        Cmd::Purity { word, count } => {
            let f: WordFile = json_file(word)?;
            let l = f.into_loaded(None, None)?;
            let p = l.word.purity_pattern(&l.gamma)?;
            ok(json!({ "indices": p.take(*count), "cycle_start": p.cycle_start, "cycle": p.cycle, "offsets": p.offsets }))
        }
        Cmd::Clasp(f) => {
            let (b, g, _) = finite(f)?;
            ok(find_clasp(&b, &g, f.limits.budget)?)
        }
        Cmd::Certify(i) => {
            let l = WordFile::load(&i.word, i.limits.rank, i.cert.as_deref())?;
            let v = verify_completeness_certificate(&l.word, &l.gamma, &l.cert, i.limits.budget)?;
            let failed = matches!(v, CertVerdict::Mismatch { .. });
            Ok(Outcome { report: serde_json::to_value(v)?, failed })
        }
        Cmd::Euler(f) => {
            let (b, g, rank) = finite(f)?;
            ok(braid_euler_op(&b, &g, rank)?.to_json())
        }
        Cmd::Skeleton(f) => {
            let (b, g, _) = finite(f)?;
            if b.is_positive() {
                ok(simplify_color_pure(&b, &g, f.limits.budget)?)
            } else {
                let (sk, log) = posneg_skeleton(&b, &g, f.limits.budget)?;
                ok(json!({ "skeleton": sk, "log": log }))
            }
        }
        Cmd::Bound { input, ell, sequence, target } => {
            let l = WordFile::load(&input.word, input.limits.rank, input.cert.as_deref())?;
            let spec = InverseSystemSpec::new(l.word, l.gamma)?.with_cert(l.cert).with_kind((*sequence).into());
            match target {
                Some(t) => {
                    let r = stab::cauchy_certificate(&spec, *ell, *t, input.limits.budget)?;
                    let failed = r.verdict == stab::CauchyVerdict::NotCertified;
                    Ok(Outcome { report: serde_json::to_value(r)?, failed })
                }
                None => {
                    let steps = spec.steps(*ell, input.limits.budget)?;
                    let b = steps.last().map(|s| s.b);
                    ok(json!({ "steps": steps, "b": b }))
                }
            }
        }
        Cmd::Projector { gamma, rank, k } => {
            let (g, rank) = resolve_rank(&parse_gamma(gamma)?, None, *rank)?;
            ok(json!({ "steps": stab::projector_defects(g.len(), &g, rank, *k)? }))
        }
        Cmd::Stabilize { a, b, limits, precision, sequence } => {
            let la = WordFile::load(a, limits.rank, None)?;
            let lb = WordFile::load(b, limits.rank, None)?;
            let rank = limits.rank.unwrap_or(la.rank.max(lb.rank));
            let sa = InverseSystemSpec::new(la.word, la.gamma)?.with_cert(la.cert);
            let sb = InverseSystemSpec::new(lb.word, lb.gamma)?.with_cert(lb.cert).with_kind((*sequence).into());
            let r = stab::stabilize(&sa, &sb, &config(rank, precision, limits.budget))?;
            let failed = r.verdict == StabVerdict::Inconclusive;
            Ok(Outcome { report: serde_json::to_value(r)?, failed })
        }
        Cmd::Negshift { input, k } => {
            let (b, g, rank) = finite(input)?;
            ok(stab::negative_shift_check(&b, &g, rank, *k)?)
        }
        Cmd::Horizontal { input, blocks, head, precision } => {
            let l = WordFile::load(&input.word, input.limits.rank, input.cert.as_deref())?;
            let blocks = parse_blocks(blocks)?;
            let r = stab::horizontal_factorization(&l.word, &l.gamma, &blocks, *head, &[], &config(l.rank, precision, input.limits.budget))?;
            let failed = r.factorization.iter().any(|(_, ok)| !ok);
            Ok(Outcome { report: serde_json::to_value(r)?, failed })
        }
        Cmd::Bi { word, rank, budget, precision, shift } => {
            let f: BiFile = json_file(word)?;
            if f.gamma.len() != f.n {
                return Err(Error::InvalidColoring(format!("{} labels for {} strands", f.gamma.len(), f.n)));
            }
            let bottom = f.gamma_bottom.clone().unwrap_or_else(|| f.gamma.clone());
            let (g, rank) = resolve_rank(&f.gamma, f.rank, *rank)?;
            let (gb, _) = resolve_rank(&bottom, Some(rank), None)?;
            let core = BraidWord::from_signed(f.n, &f.core)?;
            let w = BiInfiniteWord::new(f.left.word(f.n)?, core, f.right.word(f.n)?, g, gb)?
                .with_certs(f.left.cert.clone().unwrap_or_default(), f.right.cert.clone().unwrap_or_else(Certificate::empty));
            let r = stab::bi_infinite_analyze(&w, &config(rank, precision, *budget), *shift)?;
            let failed = r.verdict == StabVerdict::Inconclusive;
            Ok(Outcome { report: serde_json::to_value(r)?, failed })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli.cmd) {
        Ok(o) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&o.report).expect("reports serialize") + "\n",
                Format::Table => render::table(&o.report),
            };
            // a closed pipe downstream is not our failure
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(if o.failed { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::BudgetExhausted { .. }) { 3 } else { 2 })
        }
    }
}
