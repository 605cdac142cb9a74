//! File IO wrappers over the core crate's text formats.

use std::fs;
use std::io::{self, Read};
use std::path::Path;

use cubepath_core::paths::{parse_certificate, CertParseError, CertificateData};
use cubepath_core::store::{LoadDiagnostic, StoreError, WitnessStore, WITNESS_HEADER_PREFIX};

/// A parse problem in a certificate stream; the stream continues with the
/// next record.
#[derive(Debug)]
pub struct RecordIssue {
    pub record: usize,
    pub error: CertParseError,
}

impl std::fmt::Display for RecordIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "record {}: {}", self.record, self.error)
    }
}

/// Parses a stream of certificate records (native four-line form or the
/// compact 81-vertex dimension-4 form). Malformed records are reported and
/// skipped.
pub fn certificates_from_text(text: &str) -> (Vec<CertificateData>, Vec<RecordIssue>) {
    let mut lines = text.lines();
    let mut certs = Vec::new();
    let mut issues = Vec::new();
    let mut record = 0usize;
    loop {
        record += 1;
        match parse_certificate(&mut lines) {
            Ok(Some(cert)) => certs.push(cert),
            Ok(None) => break,
            Err(error) => issues.push(RecordIssue { record, error }),
        }
    }
    (certs, issues)
}

/// Certificates carried by a file: either a witness-store file (header
/// line) whose records are read for their certificates, or a bare stream
/// of certificate records.
pub fn certificates_from_file(path: &Path) -> io::Result<(Vec<CertificateData>, Vec<RecordIssue>)> {
    let text = fs::read_to_string(path)?;
    if text.starts_with(WITNESS_HEADER_PREFIX) {
        // store layout: header, then (config line, certificate record)*
        let mut lines = text.lines();
        let _ = lines.next();
        let mut certs = Vec::new();
        let mut issues = Vec::new();
        let mut record = 0usize;
        loop {
            // skip the configuration line preceding each record
            let header = loop {
                match lines.next() {
                    None => return Ok((certs, issues)),
                    Some(l) if l.trim().is_empty() => continue,
                    Some(l) => break l,
                }
            };
            let _ = header;
            record += 1;
            match parse_certificate(&mut lines) {
                Ok(Some(cert)) => certs.push(cert),
                Ok(None) => return Ok((certs, issues)),
                Err(error) => issues.push(RecordIssue { record, error }),
            }
        }
    }
    Ok(certificates_from_text(&text))
}

pub fn read_stdin() -> io::Result<String> {
    let mut buf = String::new();
    io::stdin().read_to_string(&mut buf)?;
    Ok(buf)
}

/// Loads a witness store, re-verifying every entry.
pub fn load_store(path: &Path) -> Result<(WitnessStore, Vec<LoadDiagnostic>), StoreError> {
    let text = fs::read_to_string(path).map_err(|_| {
        StoreError::BaseCaseIncomplete(format!(
            "witness file {} not found",
            path.display()
        ))
    })?;
    WitnessStore::parse(&text)
}

pub fn save_store(path: &Path, store: &WitnessStore) -> io::Result<()> {
    fs::write(path, store.encode())
}
