//! Reading documents: FASTA, normalized text, manifests and directories.

use std::fs;
use std::path::{Path, PathBuf};

use infodist_core::{Document, DocumentKind};
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// One FASTA record after cleaning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastaRecord {
    pub id: String,
    /// Uppercase A, C, G and T only.
    pub sequence: Vec<u8>,
    /// Characters removed other than whitespace.
    pub dropped: usize,
}

/// Uppercases and keeps only A, C, G, T. Returns the sequence and the number
/// of non-whitespace characters dropped.
pub fn clean_dna(raw: &[u8]) -> (Vec<u8>, usize) {
    let mut out = Vec::with_capacity(raw.len());
    let mut dropped = 0;
    for &b in raw {
        match b.to_ascii_uppercase() {
            c @ (b'A' | b'C' | b'G' | b'T') => out.push(c),
            c if c.is_ascii_whitespace() => {}
            _ => dropped += 1,
        }
    }
    (out, dropped)
}

pub fn parse_fasta(bytes: &[u8]) -> std::result::Result<Vec<FastaRecord>, String> {
    let mut records: Vec<FastaRecord> = Vec::new();
    for (n, line) in bytes.split(|&b| b == b'\n').enumerate() {
        if let Some(header) = line.strip_prefix(b">") {
            let header = String::from_utf8_lossy(header);
            let id = header
                .split_whitespace()
                .next()
                .ok_or_else(|| format!("line {}: empty FASTA header", n + 1))?;
            records.push(FastaRecord {
                id: id.to_owned(),
                sequence: Vec::new(),
                dropped: 0,
            });
        } else if let Some(rec) = records.last_mut() {
            let (seq, dropped) = clean_dna(line);
            rec.sequence.extend_from_slice(&seq);
            rec.dropped += dropped;
        } else if !line.iter().all(u8::is_ascii_whitespace) {
            return Err(format!("line {}: sequence data before the first `>` header", n + 1));
        }
    }
    if records.is_empty() {
        return Err("no `>` records found".into());
    }
    for r in &records {
        if r.dropped > 0 {
            log::warn!("{}: dropped {} non-ACGT characters", r.id, r.dropped);
        }
    }
    Ok(records)
}

/// Writes records with 70 bases per line.
pub fn write_fasta(docs: &[Document]) -> Vec<u8> {
    let mut out = Vec::new();
    for d in docs {
        out.push(b'>');
        out.extend_from_slice(d.id.as_bytes());
        out.push(b'\n');
        for line in d.bytes.chunks(70) {
            out.extend_from_slice(line);
            out.push(b'\n');
        }
    }
    out
}

/// Counts of lossy steps taken by [`normalize_text`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct TextStats {
    /// Invalid UTF-8 sequences replaced by U+FFFD.
    pub invalid_sequences: usize,
    pub marks_stripped: usize,
    /// Non-ASCII characters left after stripping, passed through as UTF-8.
    pub non_ascii_kept: usize,
}

/// Canonical decomposition with combining marks removed; line endings become
/// `\n`.
pub fn normalize_text(bytes: &[u8]) -> (Vec<u8>, TextStats) {
    let mut stats = TextStats::default();
    let mut text = String::with_capacity(bytes.len());
    for chunk in bytes.utf8_chunks() {
        text.push_str(chunk.valid());
        if !chunk.invalid().is_empty() {
            stats.invalid_sequences += 1;
            text.push(char::REPLACEMENT_CHARACTER);
        }
    }
    let text = text.replace("\r\n", "\n").replace('\r', "\n");
    let mut out = Vec::with_capacity(text.len());
    let mut buf = [0u8; 4];
    for c in text.nfd() {
        if is_combining_mark(c) {
            stats.marks_stripped += 1;
        } else if c.is_ascii() {
            out.push(c as u8);
        } else {
            if c != char::REPLACEMENT_CHARACTER {
                stats.non_ascii_kept += 1;
            }
            out.extend_from_slice(c.encode_utf8(&mut buf).as_bytes());
        }
    }
    (out, stats)
}

/// Where a manifest entry's bytes come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Local(PathBuf),
    Url(String),
    /// A nucleotide accession fetched through a URL template.
    GenBank(String),
}

impl Source {
    pub fn is_remote(&self) -> bool {
        !matches!(self, Source::Local(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub id: String,
    pub kind: DocumentKind,
    pub source: Source,
}

/// Line-oriented `id <TAB> kind <TAB> source` records; `#` starts a comment.
///
/// Sources are `http(s)://` URLs, `genbank:<accession>`, or paths relative to
/// the manifest's directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

fn parse_kind(s: &str) -> Option<DocumentKind> {
    match s {
        "dna" => Some(DocumentKind::Dna),
        "text" => Some(DocumentKind::Text),
        "binary" => Some(DocumentKind::Binary),
        _ => None,
    }
}

impl Manifest {
    pub fn parse(text: &str, base: &Path) -> std::result::Result<Self, String> {
        let mut entries: Vec<ManifestEntry> = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [id, kind, source] = fields[..] else {
                return Err(format!("line {}: expected `id<TAB>kind<TAB>source`", n + 1));
            };
            let id = id.trim();
            if id.is_empty() {
                return Err(format!("line {}: empty id", n + 1));
            }
            if entries.iter().any(|e| e.id == id) {
                return Err(format!("line {}: duplicate id `{id}`", n + 1));
            }
            let kind = parse_kind(kind.trim()).ok_or_else(|| format!("line {}: unknown kind `{kind}`", n + 1))?;
            let source = source.trim();
            let source = if source.starts_with("http://") || source.starts_with("https://") {
                Source::Url(source.to_owned())
            } else if let Some(acc) = source.strip_prefix("genbank:") {
                Source::GenBank(acc.to_owned())
            } else {
                Source::Local(base.join(source))
            };
            entries.push(ManifestEntry {
                id: id.to_owned(),
                kind,
                source,
            });
        }
        Ok(Manifest { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Manifest::parse(&text, base).map_err(|m| Error::format(path, m))
    }

    /// Checks that every local source exists.
    pub fn check_local(&self) -> Result<()> {
        for e in &self.entries {
            if let Source::Local(p) = &e.source {
                if !p.is_file() {
                    return Err(Error::Input(format!(
                        "manifest entry `{}`: {} does not exist",
                        e.id,
                        p.display()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// File name under a data directory for a document id.
pub fn stored_name(id: &str) -> String {
    id.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Turns raw file contents into document bytes for the given kind.
pub fn prepare(id: &str, raw: &[u8], kind: DocumentKind) -> std::result::Result<Vec<u8>, String> {
    match kind {
        DocumentKind::Dna => {
            let seq: Vec<u8> = if raw.iter().find(|b| !b.is_ascii_whitespace()) == Some(&b'>') {
                parse_fasta(raw)?.into_iter().flat_map(|r| r.sequence).collect()
            } else {
                let (seq, dropped) = clean_dna(raw);
                if dropped > 0 {
                    log::warn!("{id}: dropped {dropped} non-ACGT characters");
                }
                seq
            };
            Ok(seq)
        }
        DocumentKind::Text => {
            let (bytes, stats) = normalize_text(raw);
            if stats.invalid_sequences > 0 {
                log::warn!("{id}: replaced {} invalid UTF-8 sequences", stats.invalid_sequences);
            }
            Ok(bytes)
        }
        DocumentKind::Binary => Ok(raw.to_vec()),
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

/// Loads every manifest entry. Remote entries are read from `data_dir`.
pub fn load_manifest(manifest: &Manifest, data_dir: Option<&Path>) -> Result<Vec<Document>> {
    let mut docs = Vec::with_capacity(manifest.entries.len());
    for e in &manifest.entries {
        let path = match (&e.source, data_dir) {
            (Source::Local(p), _) => p.clone(),
            (_, Some(dir)) => dir.join(stored_name(&e.id)),
            (_, None) => {
                return Err(Error::Input(format!(
                    "entry `{}` is remote; fetch it first and pass the data directory",
                    e.id
                )))
            }
        };
        if !path.is_file() {
            return Err(Error::Input(format!(
                "entry `{}`: {} is missing; run `infodist fetch` first",
                e.id,
                path.display()
            )));
        }
        let bytes = prepare(&e.id, &read(&path)?, e.kind).map_err(|m| Error::format(&path, m))?;
        docs.push(Document::new(e.id.clone(), bytes, e.kind).with_source(path.display().to_string()));
    }
    check_corpus(&docs)?;
    Ok(docs)
}

fn kind_for(path: &Path, raw: &[u8]) -> DocumentKind {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase();
    if matches!(ext.as_str(), "fa" | "fasta" | "fna" | "fas") {
        DocumentKind::Dna
    } else if std::str::from_utf8(raw).is_ok() {
        DocumentKind::Text
    } else {
        DocumentKind::Binary
    }
}

/// Loads every regular, non-hidden file in `dir`, sorted by name. The id is
/// the file stem.
pub fn load_dir(dir: &Path) -> Result<Vec<Document>> {
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        let hidden = entry.file_name().to_string_lossy().starts_with('.');
        if path.is_file() && !hidden {
            paths.push(path);
        }
    }
    paths.sort();
    let mut docs = Vec::with_capacity(paths.len());
    for path in paths {
        let raw = read(&path)?;
        let kind = kind_for(&path, &raw);
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let bytes = prepare(&id, &raw, kind).map_err(|m| Error::format(&path, m))?;
        docs.push(Document::new(id, bytes, kind).with_source(path.display().to_string()));
    }
    check_corpus(&docs)?;
    Ok(docs)
}

/// Loads a single file as one document with id = file stem.
pub fn load_file(path: &Path) -> Result<Document> {
    let raw = read(path)?;
    let kind = kind_for(path, &raw);
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let bytes = prepare(&id, &raw, kind).map_err(|m| Error::format(path, m))?;
    Ok(Document::new(id, bytes, kind).with_source(path.display().to_string()))
}

/// Loads a corpus from a directory, a manifest (`.tsv` or `.manifest`), or
/// a single document file.
pub fn load_corpus(path: &Path, data_dir: Option<&Path>) -> Result<Vec<Document>> {
    let is_manifest = matches!(path.extension().and_then(|e| e.to_str()), Some("tsv" | "manifest"));
    if path.is_dir() {
        load_dir(path)
    } else if !is_manifest {
        Ok(vec![load_file(path)?])
    } else {
        let m = Manifest::load(path)?;
        m.check_local()?;
        load_manifest(&m, data_dir)
    }
}

fn check_corpus(docs: &[Document]) -> Result<()> {
    if docs.is_empty() {
        return Err(Error::Input("corpus is empty".into()));
    }
    let mut ids: Vec<&str> = docs.iter().map(|d| d.id.as_str()).collect();
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Input(format!("duplicate document id `{}`", w[0])));
    }
    if ids.first() == Some(&"") {
        return Err(Error::Input("empty document id".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fasta_examples() {
        let r = parse_fasta(b">x\nACGT\n").unwrap();
        assert_eq!(
            r,
            vec![FastaRecord {
                id: "x".into(),
                sequence: b"ACGT".to_vec(),
                dropped: 0
            }]
        );
        let r = parse_fasta(b">x\nac gt\nNNAC\n").unwrap();
        assert_eq!(r[0].sequence, b"ACGTAC");
        assert_eq!(r[0].dropped, 2);
        let r = parse_fasta(b">first desc here\nAC\n>second\r\nGG\r\n").unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!((r[0].id.as_str(), r[1].id.as_str()), ("first", "second"));
        assert_eq!(r[1].sequence, b"GG");
    }

    #[test]
    fn fasta_errors() {
        assert!(parse_fasta(b"ACGT\n").is_err());
        assert!(parse_fasta(b"").is_err());
        assert!(parse_fasta(b">\nACGT\n").is_err());
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_text("café".as_bytes()).0, b"cafe");
        assert_eq!(normalize_text("Ḩ".as_bytes()).0, b"H");
        assert_eq!(normalize_text(b"plain ascii\nline\n").0, b"plain ascii\nline\n");
        assert_eq!(normalize_text(b"a\r\nb\rc").0, b"a\nb\nc");
        let (out, stats) = normalize_text("Ελλάδα".as_bytes());
        assert_eq!(out, "Ελλαδα".as_bytes());
        assert_eq!(stats.marks_stripped, 1);
        assert_eq!(stats.non_ascii_kept, 6);
        let (out, stats) = normalize_text(b"ok\xff\xfeok");
        assert_eq!(stats.invalid_sequences, 2);
        assert!(out.starts_with(b"ok"));
    }

    #[test]
    fn manifest_parsing() {
        let text = "# comment\nhuman\tdna\tgenbank:V00662\nbasque\ttext\thttps://example.org/eu.txt\n\nlocal\tbinary\tdata/x.bin\n";
        let m = Manifest::parse(text, Path::new("/base")).unwrap();
        assert_eq!(m.entries.len(), 3);
        assert_eq!(m.entries[0].source, Source::GenBank("V00662".into()));
        assert_eq!(m.entries[1].source, Source::Url("https://example.org/eu.txt".into()));
        assert_eq!(m.entries[2].source, Source::Local("/base/data/x.bin".into()));
        assert!(Manifest::parse("a\tdna\tx\na\tdna\ty\n", Path::new(".")).is_err());
        assert!(Manifest::parse("a dna x\n", Path::new(".")).is_err());
        assert!(Manifest::parse("a\tprotein\tx\n", Path::new(".")).is_err());
    }

    #[test]
    fn stored_names_are_safe() {
        assert_eq!(stored_name("Basque [Spain]"), "Basque__Spain_");
        assert_eq!(stored_name("pygmy-chimp"), "pygmy-chimp");
    }

    proptest! {
        #[test]
        fn fasta_round_trip(seqs in proptest::collection::vec("[ACGT]{0,200}", 1..5)) {
            let docs: Vec<Document> = seqs
                .iter()
                .enumerate()
                .map(|(i, s)| Document::new(format!("r{i}"), s.as_bytes().to_vec(), DocumentKind::Dna))
                .collect();
            let parsed = parse_fasta(&write_fasta(&docs)).unwrap();
            prop_assert_eq!(parsed.len(), docs.len());
            for (p, d) in parsed.iter().zip(&docs) {
                prop_assert_eq!(&p.id, &d.id);
                prop_assert_eq!(&p.sequence, &d.bytes);
                prop_assert_eq!(p.dropped, 0);
            }
        }

        #[test]
        fn normalize_is_idempotent(s in "\\PC{0,64}", raw in proptest::collection::vec(any::<u8>(), 0..64)) {
            for input in [s.as_bytes(), &raw[..]] {
                let once = normalize_text(input).0;
                prop_assert_eq!(normalize_text(&once).0, once.clone());
            }
        }
    }
}
