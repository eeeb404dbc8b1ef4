//! Published reference values shipped with the crate: group structures for
//! `11 <= N <= 100`, the levels with trivial class group, and `p`-primary
//! parts for prime powers and for `m p^n`.

use std::str::FromStr;
use std::sync::OnceLock;

use serde::Deserialize;

use crate::classgroup::GroupStructure;
use crate::{Error, Int, Result};

const RAW: &str = include_str!("../data/reference_tables.json");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureEntry {
    pub n: u64,
    pub genus: Option<u32>,
    /// Present for the rows that also list a factored class number.
    pub class_number: Option<Int>,
    pub structure: GroupStructure,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct PrimaryEntry {
    pub p: u64,
    pub n: u32,
    pub parts: String,
}

impl PrimaryEntry {
    pub fn level(&self) -> u64 {
        self.p.pow(self.n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct MixedEntry {
    pub m: u64,
    pub p: u64,
    pub n: u32,
    pub parts: String,
}

impl MixedEntry {
    pub fn level(&self) -> u64 {
        self.m * self.p.pow(self.n)
    }
}

#[derive(Clone, Debug)]
pub struct Corpus {
    pub structures: Vec<StructureEntry>,
    pub trivial_levels: Vec<u64>,
    pub prime_power_primary: Vec<PrimaryEntry>,
    pub mixed_primary: Vec<MixedEntry>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawStructure {
    Word(String),
    List(Vec<String>),
}

#[derive(Deserialize)]
struct RawRow {
    n: u64,
    genus: Option<u32>,
    class_number_factored: Option<String>,
    structure: RawStructure,
}

#[derive(Deserialize)]
struct Rows<T> {
    rows: Vec<T>,
}

#[derive(Deserialize)]
struct Levels {
    levels: Vec<u64>,
}

#[derive(Deserialize)]
struct RawCorpus {
    structure: Rows<RawRow>,
    trivial_levels: Levels,
    prime_power_primary: Rows<PrimaryEntry>,
    mixed_primary: Rows<MixedEntry>,
}

/// Parse a factored integer such as `2^6*3*13`.
pub fn parse_factored(s: &str) -> Result<Int> {
    let bad = || Error::InvalidInput(format!("malformed factorization {s:?}"));
    let mut acc = Int::from(1);
    for term in s.split('*') {
        let (base, exp) = match term.trim().split_once('^') {
            Some((b, e)) => (b, e.parse::<u32>().map_err(|_| bad())?),
            None => (term.trim(), 1),
        };
        let base = Int::from_str(base).map_err(|_| bad())?;
        acc *= num_traits::pow(base, exp as usize);
    }
    Ok(acc)
}

fn convert(row: RawRow) -> Result<StructureEntry> {
    let class_number = row.class_number_factored.as_deref().map(parse_factored).transpose()?;
    let invariants = match row.structure {
        RawStructure::Word(w) if w == "cyclic" => vec![class_number
            .clone()
            .ok_or_else(|| Error::InvalidInput(format!("row {}: cyclic without class number", row.n)))?],
        RawStructure::Word(w) => return Err(Error::InvalidInput(format!("row {}: unknown structure {w:?}", row.n))),
        RawStructure::List(v) => v
            .iter()
            .map(|x| Int::from_str(x).map_err(|_| Error::InvalidInput(format!("row {}: bad invariant {x:?}", row.n))))
            .collect::<Result<_>>()?,
    };
    Ok(StructureEntry { n: row.n, genus: row.genus, class_number, structure: GroupStructure::from_invariants(invariants)? })
}

fn load() -> Result<Corpus> {
    let raw: RawCorpus = serde_json::from_str(RAW).map_err(|e| Error::InvalidInput(format!("corpus: {e}")))?;
    Ok(Corpus {
        structures: raw.structure.rows.into_iter().map(convert).collect::<Result<_>>()?,
        trivial_levels: raw.trivial_levels.levels,
        prime_power_primary: raw.prime_power_primary.rows,
        mixed_primary: raw.mixed_primary.rows,
    })
}

/// The embedded corpus, parsed once.
pub fn corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| load().expect("embedded corpus is well formed"))
}

impl Corpus {
    /// Expected structure at `N`, from the table or the trivial list.
    pub fn expected_structure(&self, n: u64) -> Option<GroupStructure> {
        if self.trivial_levels.contains(&n) {
            return Some(GroupStructure::default());
        }
        self.structures.iter().find(|r| r.n == n).map(|r| r.structure.clone())
    }

    pub fn prime_power_row(&self, p: u64, n: u32) -> Option<&PrimaryEntry> {
        self.prime_power_primary.iter().find(|r| r.p == p && r.n == n)
    }

    pub fn mixed_row(&self, m: u64, p: u64, n: u32) -> Option<&MixedEntry> {
        self.mixed_primary.iter().find(|r| r.m == m && r.p == p && r.n == n)
    }
}
