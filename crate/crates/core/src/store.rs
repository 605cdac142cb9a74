//! Persistence model for the dimension-4 witness set: a map from normalised
//! configuration to a covering almost-Hamilton path, re-verified on every
//! load and on every lookup. This is the boundary between the one-time base
//! case computation and the fast constructor.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use crate::config::{in_sprime, ConfigError, Configuration};
use crate::cube::TritVector;
use crate::paths::{
    encode_certificate, parse_certificate, verify, CertParseError, CertificateData, VerifyError,
};
use crate::symmetry::{normalize, SymmetryError};

pub const WITNESS_HEADER_PREFIX: &str = "cubepath-witness v1 d=4 seed=";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StoreError {
    Config(ConfigError),
    Symmetry(SymmetryError),
    Parse(CertParseError),
    /// The certificate fails verification.
    Invalid(VerifyError),
    /// The key is not a normalisation fixpoint.
    KeyNotNormalized(String),
    /// The certificate does not cover its key configuration.
    KeyMismatch(String),
    /// Queried configuration is not in `S'(4)`.
    NotInSprime(String),
    /// No stored witness for the (normalised) query.
    BaseCaseIncomplete(String),
    /// Missing or malformed file header.
    BadHeader(String),
    /// Lookup requires dimension 4.
    WrongDimension(usize),
}

impl fmt::Display for StoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StoreError::Config(e) => write!(f, "{e}"),
            StoreError::Symmetry(e) => write!(f, "{e}"),
            StoreError::Parse(e) => write!(f, "{e}"),
            StoreError::Invalid(e) => write!(f, "certificate rejected: {e}"),
            StoreError::KeyNotNormalized(c) => write!(f, "key {c} is not normalised"),
            StoreError::KeyMismatch(c) => write!(f, "certificate does not cover its key {c}"),
            StoreError::NotInSprime(c) => write!(f, "configuration {c} is not in S'(4)"),
            StoreError::BaseCaseIncomplete(c) => write!(
                f,
                "base case incomplete: no witness for {c}; run the base-case search first"
            ),
            StoreError::BadHeader(l) => write!(f, "bad witness file header {l:?}"),
            StoreError::WrongDimension(d) => write!(f, "witness store holds dimension 4, got {d}"),
        }
    }
}

impl core::error::Error for StoreError {}

impl From<ConfigError> for StoreError {
    fn from(e: ConfigError) -> Self {
        StoreError::Config(e)
    }
}

impl From<SymmetryError> for StoreError {
    fn from(e: SymmetryError) -> Self {
        StoreError::Symmetry(e)
    }
}

/// A per-record problem found while parsing or re-verifying a witness file.
/// Rejected records are skipped; the rest of the file still loads.
#[derive(Debug, Clone)]
pub struct LoadDiagnostic {
    /// 1-based record number in the file.
    pub record: usize,
    pub error: StoreError,
}

impl fmt::Display for LoadDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "record {}: {}", self.record, self.error)
    }
}

/// Map from normalised dimension-4 configuration to a verified covering
/// path, plus the provenance needed to regenerate it.
#[derive(Debug, Clone, Default)]
pub struct WitnessStore {
    entries: BTreeMap<Configuration, CertificateData>,
    pub seed: u64,
}

impl WitnessStore {
    pub fn new(seed: u64) -> Self {
        WitnessStore { entries: BTreeMap::new(), seed }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, key: &Configuration) -> bool {
        self.entries.contains_key(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Configuration, &CertificateData)> {
        self.entries.iter()
    }

    /// Inserts after full validation: the key must be a normalisation
    /// fixpoint and the certificate must verify and cover exactly the key.
    pub fn insert(
        &mut self,
        key: Configuration,
        cert: CertificateData,
    ) -> Result<(), StoreError> {
        if key.dim() != 4 {
            return Err(StoreError::WrongDimension(key.dim()));
        }
        if normalize(&key)?.config != key {
            return Err(StoreError::KeyNotNormalized(key.to_string()));
        }
        verify(&cert).map_err(StoreError::Invalid)?;
        if !covers(&cert, &key) {
            return Err(StoreError::KeyMismatch(key.to_string()));
        }
        self.entries.insert(key, cert);
        Ok(())
    }

    /// Fetches a covering path for an arbitrary (not necessarily normalised)
    /// `S'(4)` configuration: normalises the query, pulls the stored
    /// witness, maps it back through the inverse of the normalising
    /// symmetry, re-verifies and returns it.
    pub fn lookup(&self, c: &Configuration) -> Result<CertificateData, StoreError> {
        if c.dim() != 4 {
            return Err(StoreError::WrongDimension(c.dim()));
        }
        if !in_sprime(c)? {
            return Err(StoreError::NotInSprime(c.to_string()));
        }
        let n = normalize(c)?;
        let stored = self
            .entries
            .get(&n.config)
            .ok_or_else(|| StoreError::BaseCaseIncomplete(n.config.to_string()))?;
        let cert = n.symmetry.inverse().apply_certificate(stored)?;
        verify(&cert).map_err(StoreError::Invalid)?;
        // the omitted pair is a set, so the x<->y flag needs no undoing
        debug_assert_eq!(&cert.start, c.a());
        debug_assert_eq!(&cert.end, c.b());
        Ok(cert)
    }

    /// Text form: a header line, then per entry the normalised configuration
    /// line followed by its four-line certificate record.
    pub fn encode(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}{}", WITNESS_HEADER_PREFIX, self.seed);
        for (key, cert) in &self.entries {
            let _ = writeln!(out, "{key}");
            out.push_str(&encode_certificate(cert));
        }
        out
    }

    /// Parses and re-verifies a witness file. Entries failing any check are
    /// rejected with a diagnostic; the remaining entries load normally.
    pub fn parse(text: &str) -> Result<(WitnessStore, Vec<LoadDiagnostic>), StoreError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| StoreError::BadHeader(String::new()))?;
        let seed: u64 = header
            .strip_prefix(WITNESS_HEADER_PREFIX)
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| StoreError::BadHeader(header.to_string()))?;
        let mut store = WitnessStore::new(seed);
        let mut diagnostics = Vec::new();
        let mut record = 0usize;
        loop {
            let key_line = loop {
                match lines.next() {
                    None => return Ok((store, diagnostics)),
                    Some(l) if l.trim().is_empty() => continue,
                    Some(l) => break l,
                }
            };
            record += 1;
            match parse_record(key_line, &mut lines) {
                Ok((key, cert)) => {
                    if let Err(error) = store.insert(key, cert) {
                        diagnostics.push(LoadDiagnostic { record, error });
                    }
                }
                Err(error) => diagnostics.push(LoadDiagnostic { record, error }),
            }
        }
    }
}

fn parse_record<'a, I>(
    key_line: &'a str,
    lines: &mut I,
) -> Result<(Configuration, CertificateData), StoreError>
where
    I: Iterator<Item = &'a str>,
{
    let verts: Result<Vec<TritVector>, _> =
        key_line.split_whitespace().map(|t| t.parse::<TritVector>()).collect();
    let verts = verts.map_err(|e| StoreError::Parse(CertParseError::Cube(e)))?;
    if verts.len() != 4 {
        return Err(StoreError::Parse(CertParseError::BadHeader(key_line.to_string())));
    }
    let key = Configuration::quad(
        verts[0].clone(),
        verts[1].clone(),
        verts[2].clone(),
        verts[3].clone(),
    )?;
    let cert = parse_certificate(lines)
        .map_err(StoreError::Parse)?
        .ok_or(StoreError::Parse(CertParseError::MissingLine("certificate")))?;
    Ok((key, cert))
}

/// Whether the certificate witnesses exactly this configuration: endpoints
/// match and the omitted set is `{x, y}`.
pub fn covers(cert: &CertificateData, c: &Configuration) -> bool {
    if c.len() != 4 || cert.start != *c.a() || cert.end != *c.b() {
        return false;
    }
    let (x, y) = match (c.x(), c.y()) {
        (Ok(x), Ok(y)) => (x, y),
        _ => return false,
    };
    match cert.omitted.as_slice() {
        [p, q] => (p == x && q == y) || (p == y && q == x),
        _ => false,
    }
}

/// Provenance string stored alongside regenerated witness sets.
pub fn engine_version() -> String {
    format!("cubepath-core {}", env!("CARGO_PKG_VERSION"))
}
