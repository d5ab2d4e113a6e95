//! File formats and batch driver for `relcurr-core`.
//!
//! [`run`] executes one subcommand and returns its JSON payload.
//! [`execute`] also maps failures to exit codes: 1 for errors, 2 when the
//! subgroup system is not malnormal, 3 for a zero current.

pub mod error;
pub mod format;

use std::path::{Path, PathBuf};

use relcurr_core::approximation::{approximate, martin_threshold};
use relcurr_core::boundary::SubgroupSystem;
use relcurr_core::currents::{act, eval_rational, extend_k, ExtendOptions, RationalCurrentSum};
use relcurr_core::word::{Alphabet, Automorphism, CyclicWord};
use relcurr_core::Rational;
use serde::Serialize;
use serde_json::value::RawValue;

pub use error::Error;
use format::{CurrentInput, EntryJson, RationalJson, TermsJson};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Analyze { system: PathBuf, stratum: Option<usize> },
    Eval { system: Option<PathBuf>, g: String, w: String },
    Extend { system: PathBuf, current: PathBuf, k: usize, base: Option<String> },
    Approximate { system: PathBuf, current: PathBuf, k: usize, scale: String, tol: Option<String> },
    Act { system: PathBuf, current: PathBuf, map: String, inverse: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    /// Rank of the free group. When absent it is the largest generator
    /// used by the system (or the words, for `eval`), and at least 2.
    pub rank: Option<usize>,
}

/// Result of a run as seen by a shell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: Option<String>,
    pub stderr: Option<String>,
}

pub fn execute(config: &RunConfig) -> Outcome {
    match run(config) {
        Ok(json) => Outcome { code: 0, stdout: Some(json), stderr: None },
        Err(e) => {
            let stdout = e.witness().map(|w| {
                let payload = WitnessJson {
                    malnormal: false,
                    witness: WitnessBody { first: w.first, second: w.second, element: w.element.to_letters_string() },
                };
                to_json(&payload)
            });
            Outcome { code: e.exit_code(), stdout, stderr: Some(format!("error: {e}")) }
        }
    }
}

pub fn run(config: &RunConfig) -> Result<String, Error> {
    match &config.command {
        Command::Analyze { system, stratum } => {
            let sys = load_system(system, config.rank)?;
            let stratum = stratum.map(|k| StratumJson { k, words: sys.stratum(k).iter().map(|w| w.to_letters_string()).collect() });
            Ok(to_json(&AnalyzeJson {
                rank: sys.alphabet().rank(),
                system_hash: format::system_hash(sys.fingerprint()),
                l: sys.l(),
                c: sys.c_words().iter().map(|w| w.to_letters_string()).collect(),
                malnormal: true,
                stratum,
            }))
        }
        Command::Eval { system, g, w } => {
            let sys = match system {
                Some(path) => Some(load_system(path, config.rank)?),
                None => None,
            };
            let alphabet = match &sys {
                Some(s) => s.alphabet(),
                None => alphabet_for(config.rank, [g.as_str(), w.as_str()])?,
            };
            let gw = alphabet.parse(g)?;
            let ww = alphabet.parse(w)?;
            if ww.is_empty() {
                return Err(Error::Argument { flag: "--w", message: "the path must be nonempty".into() });
            }
            let value = Rational::from_integer(eval_rational(&gw, &ww)?.into());
            Ok(to_json(&EvalJson {
                g: CyclicWord::new(&gw).map(|c| c.word().to_letters_string()).unwrap_or_default(),
                w: ww.to_letters_string(),
                value: (&value).into(),
                in_cyl_c: sys.as_ref().map(|s| s.in_cyl_c(&ww)),
            }))
        }
        Command::Extend { system, current, k, base } => {
            let sys = load_system(system, config.rank)?;
            let eta0 = format::current_table(&sys, &load_current(&sys, current)?, *k)?;
            let mut options = ExtendOptions::default();
            if let Some(b) = base {
                options.base = format::parse_rational("--base", b)?;
            }
            let ext = extend_k(&sys, &eta0, *k, &options)?;
            Ok(to_json(&ExtendJson {
                system_hash: format::system_hash(sys.fingerprint()),
                depth: ext.table.depth(),
                repair: (&ext.repair).into(),
                repair_current: ext.repair_current.as_ref().map(TermsJson::from),
                levels: ext
                    .levels
                    .iter()
                    .map(|l| LevelJson { length: l.length, rows: l.rows, unknowns: l.unknowns, joint: l.joint, identity_checked: l.identity_checked })
                    .collect(),
                entries: ext.table.entries().map(|(key, v)| EntryJson::new(key.word(), v)).collect(),
            }))
        }
        Command::Approximate { system, current, k, scale, tol } => {
            let sys = load_system(system, config.rank)?;
            let eta0 = format::current_table(&sys, &load_current(&sys, current)?, *k)?;
            let scale = format::parse_rational("-R", scale)?;
            let tol = tol.as_deref().map(|t| format::parse_rational("--tol", t)).transpose()?;
            let report = approximate(&sys, &eta0, *k, &scale, tol)?;
            let threshold = martin_threshold(sys.alphabet().rank(), *k).ok();
            let extracted = |list: &[(CyclicWord, usize)]| -> Vec<ExtractionJson> {
                list.iter().map(|(a, t)| ExtractionJson { cyclic_word: a.word().to_letters_string(), multiplicity: *t }).collect()
            };
            Ok(to_json(&ApproximateJson {
                k: report.k,
                scale: (&report.scale).into(),
                alphas: extracted(&report.alphas),
                peripheral: extracted(&report.peripheral),
                approximant: TermsJson::from(&report.approximant()),
                repair: (&report.repair).into(),
                residual: (&report.residual).into(),
                stopping_bound: (&report.stopping_bound).into(),
                tolerance: report.tolerance.as_ref().map(RationalJson::from),
                stalled: report.stalled,
                martin_threshold: ThresholdJson {
                    value: threshold.as_ref().map(|t| RawValue::from_string(t.value.to_string()).expect("integers are valid JSON")),
                    hypothesis_met: sys.alphabet().rank() >= 3,
                },
            }))
        }
        Command::Act { system, current, map, inverse } => {
            let sys = load_system(system, config.rank)?;
            let alphabet = sys.alphabet();
            let phi = Automorphism::new(alphabet, parse_images(alphabet, "--map", map)?, parse_images(alphabet, "--inverse", inverse)?)?;
            let sum = match load_current(&sys, current)? {
                CurrentInput::Terms(sum) => sum,
                CurrentInput::Table { .. } => {
                    return Err(Error::Format { path: current.clone(), message: "act needs a rational current given by `terms`".into() })
                }
            };
            let image: RationalCurrentSum = act(&sys, &phi, &sum)?;
            Ok(to_json(&TermsJson::from(&image)))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("payloads serialize")
}

fn alphabet_for<'a>(rank: Option<usize>, words: impl IntoIterator<Item = &'a str>) -> Result<Alphabet, Error> {
    let rank = match rank {
        Some(r) => r,
        None => format::inferred_rank(words).unwrap_or(0).max(2),
    };
    Ok(Alphabet::new(rank)?)
}

fn load_system(path: &Path, rank: Option<usize>) -> Result<SubgroupSystem, Error> {
    let text = format::read(path)?;
    let lines = format::subgroup_lines(&text);
    let alphabet = alphabet_for(rank, lines.iter().flat_map(|(_, ws)| ws.iter().map(String::as_str)))?;
    format::parse_system(alphabet, path, &text)
}

fn load_current(sys: &SubgroupSystem, path: &Path) -> Result<CurrentInput, Error> {
    format::parse_current(sys.alphabet(), path, &format::read(path)?)
}

/// Comma-separated images of the generators, in order.
fn parse_images(alphabet: Alphabet, flag: &'static str, text: &str) -> Result<Vec<relcurr_core::word::Word>, Error> {
    text.split(',')
        .map(|w| alphabet.parse(w.trim()).map_err(|e| Error::Argument { flag, message: format!("{w:?}: {e}") }))
        .collect()
}

#[derive(Serialize)]
struct WitnessBody {
    first: usize,
    second: usize,
    element: String,
}

#[derive(Serialize)]
struct WitnessJson {
    malnormal: bool,
    witness: WitnessBody,
}

#[derive(Serialize)]
struct StratumJson {
    k: usize,
    words: Vec<String>,
}

#[derive(Serialize)]
struct AnalyzeJson {
    rank: usize,
    system_hash: String,
    #[serde(rename = "L")]
    l: usize,
    #[serde(rename = "C")]
    c: Vec<String>,
    malnormal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    stratum: Option<StratumJson>,
}

#[derive(Serialize)]
struct EvalJson {
    g: String,
    w: String,
    value: RationalJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    in_cyl_c: Option<bool>,
}

#[derive(Serialize)]
struct LevelJson {
    length: usize,
    rows: usize,
    unknowns: usize,
    joint: bool,
    identity_checked: bool,
}

#[derive(Serialize)]
struct ExtendJson {
    system_hash: String,
    depth: usize,
    repair: RationalJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    repair_current: Option<TermsJson>,
    levels: Vec<LevelJson>,
    entries: Vec<EntryJson>,
}

#[derive(Serialize)]
struct ExtractionJson {
    cyclic_word: String,
    multiplicity: usize,
}

#[derive(Serialize)]
struct ThresholdJson {
    /// Absent when the exponent is too large to materialize.
    value: Option<Box<RawValue>>,
    hypothesis_met: bool,
}

#[derive(Serialize)]
struct ApproximateJson {
    k: usize,
    scale: RationalJson,
    alphas: Vec<ExtractionJson>,
    peripheral: Vec<ExtractionJson>,
    approximant: TermsJson,
    repair: RationalJson,
    residual: RationalJson,
    stopping_bound: RationalJson,
    tolerance: Option<RationalJson>,
    stalled: bool,
    martin_threshold: ThresholdJson,
}
