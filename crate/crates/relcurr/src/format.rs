//! Input files and JSON payloads.
//!
//! Integers in JSON are written as bare numbers of any size. On input they
//! may also be given as strings.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use relcurr_core::boundary::SubgroupSystem;
use relcurr_core::currents::{CurrentTable, RationalCurrentSum};
use relcurr_core::word::{Alphabet, Word};
use relcurr_core::Rational;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::Error;

pub fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Read { path: path.to_owned(), source })
}

/// Subgroup lines: comma-separated words, `#` starts a comment, blank
/// lines are skipped.
pub fn subgroup_lines(text: &str) -> Vec<(usize, Vec<String>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                return None;
            }
            let words = line.split(',').map(|s| s.trim().to_owned()).collect();
            Some((i + 1, words))
        })
        .collect()
}

/// Smallest rank whose alphabet contains every letter of `words`, or
/// `None` if some symbol is not a letter.
pub fn inferred_rank<'a>(words: impl IntoIterator<Item = &'a str>) -> Option<usize> {
    let mut rank = 0;
    for w in words {
        for ch in w.chars() {
            if !ch.is_ascii_alphabetic() {
                return None;
            }
            rank = rank.max((ch.to_ascii_lowercase() as u8 - b'a') as usize + 1);
        }
    }
    Some(rank)
}

pub fn parse_system(alphabet: Alphabet, path: &Path, text: &str) -> Result<SubgroupSystem, Error> {
    let mut subgroups = Vec::new();
    for (line, words) in subgroup_lines(text) {
        let mut gens = Vec::new();
        for w in &words {
            if w.is_empty() {
                return Err(Error::Syntax { path: path.to_owned(), line, message: "empty word".into() });
            }
            let word = alphabet
                .parse(w)
                .map_err(|e| Error::Syntax { path: path.to_owned(), line, message: e.to_string() })?;
            gens.push(word);
        }
        subgroups.push(gens);
    }
    Ok(SubgroupSystem::from_generators(alphabet, &subgroups)?)
}

fn raw(text: String) -> Box<RawValue> {
    RawValue::from_string(text).expect("integers are valid JSON")
}

pub fn raw_int(x: &BigInt) -> Box<RawValue> {
    raw(x.to_string())
}

fn parse_int(value: &RawValue) -> Option<BigInt> {
    let text = value.get().trim();
    let text = match serde_json::from_str::<String>(text) {
        Ok(s) => return BigInt::from_str(s.trim()).ok(),
        Err(_) => text,
    };
    BigInt::from_str(text).ok()
}

#[derive(Debug, Serialize)]
pub struct RationalJson {
    pub num: Box<RawValue>,
    pub den: Box<RawValue>,
}

impl From<&Rational> for RationalJson {
    fn from(q: &Rational) -> Self {
        RationalJson { num: raw_int(q.numer()), den: raw_int(q.denom()) }
    }
}

#[derive(Debug, Serialize)]
pub struct TermJson {
    pub cyclic_word: String,
    pub mult_num: Box<RawValue>,
    pub mult_den: Box<RawValue>,
}

#[derive(Debug, Serialize)]
pub struct TermsJson {
    pub terms: Vec<TermJson>,
}

impl From<&RationalCurrentSum> for TermsJson {
    fn from(sum: &RationalCurrentSum) -> Self {
        let terms = sum
            .terms()
            .map(|(c, m)| TermJson { cyclic_word: c.word().to_letters_string(), mult_num: raw_int(m.numer()), mult_den: raw_int(m.denom()) })
            .collect();
        TermsJson { terms }
    }
}

#[derive(Debug, Serialize)]
pub struct EntryJson {
    pub word: String,
    pub value_num: Box<RawValue>,
    pub value_den: Box<RawValue>,
}

impl EntryJson {
    pub fn new(word: &Word, value: &Rational) -> Self {
        EntryJson { word: word.to_letters_string(), value_num: raw_int(value.numer()), value_den: raw_int(value.denom()) }
    }
}

#[derive(Debug, Serialize)]
pub struct TableJson {
    pub system_hash: String,
    pub depth: usize,
    pub entries: Vec<EntryJson>,
}

impl From<&CurrentTable> for TableJson {
    fn from(table: &CurrentTable) -> Self {
        TableJson {
            system_hash: system_hash(table.fingerprint()),
            depth: table.depth(),
            entries: table.entries().map(|(k, v)| EntryJson::new(k.word(), v)).collect(),
        }
    }
}

pub fn system_hash(fingerprint: u64) -> String {
    format!("{fingerprint:016x}")
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermIn {
    cyclic_word: String,
    mult_num: Box<RawValue>,
    mult_den: Box<RawValue>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryIn {
    word: String,
    value_num: Box<RawValue>,
    value_den: Box<RawValue>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurrentIn {
    terms: Option<Vec<TermIn>>,
    system_hash: Option<String>,
    depth: Option<usize>,
    entries: Option<Vec<EntryIn>>,
}

/// Contents of a current file.
#[derive(Debug, Clone)]
pub enum CurrentInput {
    Terms(RationalCurrentSum),
    Table { system_hash: String, depth: usize, entries: Vec<(Word, Rational)> },
}

struct Ctx<'a> {
    path: &'a Path,
}

impl Ctx<'_> {
    fn fail(&self, message: impl Into<String>) -> Error {
        Error::Format { path: self.path.to_owned(), message: message.into() }
    }

    fn rational(&self, num: &RawValue, den: &RawValue, what: &str) -> Result<Rational, Error> {
        let n = parse_int(num).ok_or_else(|| self.fail(format!("{what}: numerator {} is not an integer", num.get())))?;
        let d = parse_int(den).ok_or_else(|| self.fail(format!("{what}: denominator {} is not an integer", den.get())))?;
        if !d.is_positive() {
            return Err(self.fail(format!("{what}: denominator must be positive")));
        }
        Ok(Rational::new(n, d))
    }

    fn word(&self, alphabet: Alphabet, text: &str) -> Result<Word, Error> {
        alphabet.parse(text).map_err(|e| self.fail(format!("word {text:?}: {e}")))
    }
}

pub fn parse_current(alphabet: Alphabet, path: &Path, text: &str) -> Result<CurrentInput, Error> {
    let ctx = Ctx { path };
    let input: CurrentIn = serde_json::from_str(text).map_err(|source| Error::Json { path: PathBuf::from(path), source })?;
    match input {
        CurrentIn { terms: Some(terms), system_hash: None, depth: None, entries: None } => {
            let mut sum = RationalCurrentSum::new();
            for t in terms {
                let g = ctx.word(alphabet, &t.cyclic_word)?;
                let m = ctx.rational(&t.mult_num, &t.mult_den, &t.cyclic_word)?;
                if m.is_negative() {
                    return Err(ctx.fail(format!("{}: multiplicity must be nonnegative", t.cyclic_word)));
                }
                if m.is_zero() {
                    continue;
                }
                sum.add_class(&g, m).map_err(|e| ctx.fail(format!("{}: {e}", t.cyclic_word)))?;
            }
            Ok(CurrentInput::Terms(sum))
        }
        CurrentIn { terms: None, system_hash: Some(system_hash), depth: Some(depth), entries: Some(entries) } => {
            let mut out = Vec::with_capacity(entries.len());
            for e in entries {
                let w = ctx.word(alphabet, &e.word)?;
                let v = ctx.rational(&e.value_num, &e.value_den, &e.word)?;
                out.push((w, v));
            }
            Ok(CurrentInput::Table { system_hash, depth, entries: out })
        }
        _ => Err(ctx.fail("expected either `terms` or all of `system_hash`, `depth` and `entries`")),
    }
}

/// A table of `current` at depth `k` for `sys`.
pub fn current_table(sys: &SubgroupSystem, current: &CurrentInput, k: usize) -> Result<CurrentTable, Error> {
    match current {
        CurrentInput::Terms(sum) => Ok(relcurr_core::currents::restrict_relative(sys, sum, k)?),
        CurrentInput::Table { system_hash: hash, depth, entries } => {
            let expected = system_hash(sys.fingerprint());
            if !hash.eq_ignore_ascii_case(&expected) {
                return Err(Error::SystemMismatch { expected, found: hash.clone() });
            }
            Ok(CurrentTable::from_entries(sys, *depth, entries.iter().cloned())?)
        }
    }
}

pub fn parse_rational(flag: &'static str, text: &str) -> Result<Rational, Error> {
    let q = Rational::from_str(text.trim()).map_err(|e| Error::Argument { flag, message: format!("{text:?}: {e}") })?;
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    #[test]
    fn subgroup_lines_skip_comments_and_blanks() {
        let lines = subgroup_lines("# header\n\n a , bab # trailing\nab\n");
        assert_eq!(lines, vec![(3, vec!["a".to_owned(), "bab".to_owned()]), (4, vec!["ab".to_owned()])]);
    }

    #[test]
    fn rank_inference() {
        assert_eq!(inferred_rank(["ab", "C"]), Some(3));
        assert_eq!(inferred_rank(["a#"]), None);
        assert_eq!(inferred_rank([""]), Some(0));
    }

    #[test]
    fn big_integers_round_trip() {
        let big = "123456789012345678901234567890";
        let text = format!(r#"{{"terms":[{{"cyclic_word":"b","mult_num":{big},"mult_den":"1"}}]}}"#);
        let CurrentInput::Terms(sum) = parse_current(f2(), Path::new("x"), &text).unwrap() else { panic!() };
        let (_, m) = sum.terms().next().unwrap();
        assert_eq!(m.numer().to_string(), big);
        let json = serde_json::to_string(&TermsJson::from(&sum)).unwrap();
        assert_eq!(json, format!(r#"{{"terms":[{{"cyclic_word":"b","mult_num":{big},"mult_den":1}}]}}"#));
    }

    #[test]
    fn mixed_current_shapes_rejected() {
        let text = r#"{"terms":[],"depth":3}"#;
        assert!(matches!(parse_current(f2(), Path::new("x"), text), Err(Error::Format { .. })));
    }

    #[test]
    fn bad_denominators_rejected() {
        let text = r#"{"terms":[{"cyclic_word":"b","mult_num":1,"mult_den":0}]}"#;
        assert!(parse_current(f2(), Path::new("x"), text).is_err());
        assert!(parse_rational("-R", "1/0").is_err());
        assert_eq!(parse_rational("-R", "10").unwrap(), Rational::from_integer(10.into()));
    }
}
