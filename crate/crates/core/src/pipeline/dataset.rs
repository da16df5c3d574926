//! Raw sequence ingestion from CSV and FASTA files.
//!
//! Both formats produce a [`RawDataset`]: uppercase sequences over the
//! alphabet {A, C, G, T, N} paired with binary labels. Parse and validation
//! failures report the offending line number.

use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetFormat {
    Csv,
    Fasta,
}

impl DatasetFormat {
    /// Guesses the format from a file extension; defaults to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("fasta") || ext.eq_ignore_ascii_case("fa") => {
                DatasetFormat::Fasta
            }
            _ => DatasetFormat::Csv,
        }
    }
}

/// Validated sequence corpus. Labels are 0/1; ±1 conversion happens when
/// classifiers get involved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDataset {
    pub sequences: Vec<String>,
    pub labels: Vec<u8>,
    pub source: String,
}

impl RawDataset {
    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    /// Keeps only the rows at `indices`, in the given order.
    pub fn select(&self, indices: &[usize]) -> RawDataset {
        RawDataset {
            sequences: indices.iter().map(|&i| self.sequences[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            source: self.source.clone(),
        }
    }
}

fn check_alphabet(path: &str, line: u64, sequence: &str) -> Result<()> {
    for ch in sequence.chars() {
        if !matches!(ch, 'A' | 'C' | 'G' | 'T' | 'N') {
            return Err(Error::data(
                path,
                line,
                format!("character '{ch}' is outside the alphabet {{A,C,G,T,N}}"),
            ));
        }
    }
    Ok(())
}

fn parse_label(path: &str, line: u64, text: &str) -> Result<u8> {
    match text.trim() {
        "0" => Ok(0),
        "1" => Ok(1),
        other => Err(Error::data(path, line, format!("label must be 0 or 1, got '{other}'"))),
    }
}

pub fn load_dataset(path: &Path, format: DatasetFormat) -> Result<RawDataset> {
    match format {
        DatasetFormat::Csv => load_csv(path),
        DatasetFormat::Fasta => load_fasta(path),
    }
}

fn load_csv(path: &Path) -> Result<RawDataset> {
    let display = path.display().to_string();
    let file = File::open(path).map_err(|source| Error::Io { path: display.clone(), source })?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);

    let headers = reader
        .headers()
        .map_err(|e| Error::data(&display, 1, format!("unreadable header: {e}")))?
        .clone();
    let find = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let seq_col = find("sequence")
        .ok_or_else(|| Error::data(&display, 1, "missing 'sequence' column"))?;
    let label_col =
        find("label").ok_or_else(|| Error::data(&display, 1, "missing 'label' column"))?;

    let mut sequences = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::data(&display, line, format!("malformed row: {e}"))
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let sequence = record
            .get(seq_col)
            .ok_or_else(|| Error::data(&display, line, "row is missing the sequence field"))?
            .to_ascii_uppercase();
        let label = record
            .get(label_col)
            .ok_or_else(|| Error::data(&display, line, "row is missing the label field"))?;
        if sequence.is_empty() {
            return Err(Error::data(&display, line, "empty sequence"));
        }
        check_alphabet(&display, line, &sequence)?;
        labels.push(parse_label(&display, line, label)?);
        sequences.push(sequence);
    }
    if sequences.is_empty() {
        return Err(Error::data(&display, 0, "no records"));
    }
    Ok(RawDataset { sequences, labels, source: display })
}

/// Loads a CSV of sequences to classify: a `sequence` column is required,
/// anything else (including a `label` column) is ignored. Unlike
/// [`load_dataset`], an empty file body is fine — predicting on nothing
/// produces nothing.
pub fn load_sequences_csv(path: &Path) -> Result<Vec<String>> {
    let display = path.display().to_string();
    let file = File::open(path).map_err(|source| Error::Io { path: display.clone(), source })?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(file);

    let headers = reader
        .headers()
        .map_err(|e| Error::data(&display, 1, format!("unreadable header: {e}")))?
        .clone();
    let seq_col = headers
        .iter()
        .position(|h| h.eq_ignore_ascii_case("sequence"))
        .ok_or_else(|| Error::data(&display, 1, "missing 'sequence' column"))?;

    let mut sequences = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::data(&display, line, format!("malformed row: {e}"))
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let sequence = record
            .get(seq_col)
            .ok_or_else(|| Error::data(&display, line, "row is missing the sequence field"))?
            .to_ascii_uppercase();
        if sequence.is_empty() {
            return Err(Error::data(&display, line, "empty sequence"));
        }
        check_alphabet(&display, line, &sequence)?;
        sequences.push(sequence);
    }
    Ok(sequences)
}

fn load_fasta(path: &Path) -> Result<RawDataset> {
    let display = path.display().to_string();
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|source| Error::Io { path: display.clone(), source })?;

    let mut sequences = Vec::new();
    let mut labels = Vec::new();
    let mut current: Option<(u64, String)> = None; // (header line, sequence so far)

    let flush = |current: &mut Option<(u64, String)>,
                     sequences: &mut Vec<String>,
                     labels: &mut Vec<u8>,
                     label: u8|
     -> Result<()> {
        if let Some((header_line, sequence)) = current.take() {
            if sequence.is_empty() {
                return Err(Error::data(&display, header_line, "record has no sequence lines"));
            }
            sequences.push(sequence);
            labels.push(label);
        }
        Ok(())
    };

    let mut pending_label = 0u8;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx as u64 + 1;
        let line = raw_line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('>') {
            flush(&mut current, &mut sequences, &mut labels, pending_label)?;
            let token = header
                .split(|c: char| c.is_whitespace() || c == '|')
                .find_map(|t| t.strip_prefix("label="))
                .ok_or_else(|| {
                    Error::data(&display, line_no, "header is missing a 'label=<0|1>' token")
                })?;
            pending_label = parse_label(&display, line_no, token)?;
            current = Some((line_no, String::new()));
        } else {
            let (_, sequence) = current.as_mut().ok_or_else(|| {
                Error::data(&display, line_no, "sequence data before the first '>' header")
            })?;
            let upper = line.to_ascii_uppercase();
            check_alphabet(&display, line_no, &upper)?;
            sequence.push_str(&upper);
        }
    }
    flush(&mut current, &mut sequences, &mut labels, pending_label)?;

    if sequences.is_empty() {
        return Err(Error::data(&display, 0, "no records"));
    }
    Ok(RawDataset { sequences, labels, source: display })
}
