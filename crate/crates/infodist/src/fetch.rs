//! Opt-in download of remote manifest entries, recorded in a lock file of
//! SHA-256 hashes.

use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::corpus::{stored_name, Manifest, Source};
use crate::error::{Error, Result};

/// Nucleotide FASTA by accession.
pub const GENBANK_URL_TEMPLATE: &str =
    "https://eutils.ncbi.nlm.nih.gov/entrez/eutils/efetch.fcgi?db=nuccore&id={acc}&rettype=fasta&retmode=text";

pub const LOCK_FILE: &str = "infodist.lock";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchFailure {
    pub status: Option<u16>,
    pub message: String,
}

/// Something that can GET a URL.
pub trait Fetcher {
    fn get(&self, url: &str) -> std::result::Result<Vec<u8>, FetchFailure>;
}

pub struct HttpFetcher {
    agent: ureq::Agent,
}

impl HttpFetcher {
    pub fn new(timeout: Duration) -> Self {
        HttpFetcher {
            agent: ureq::AgentBuilder::new().timeout(timeout).build(),
        }
    }
}

impl Default for HttpFetcher {
    fn default() -> Self {
        HttpFetcher::new(Duration::from_secs(60))
    }
}

impl Fetcher for HttpFetcher {
    fn get(&self, url: &str) -> std::result::Result<Vec<u8>, FetchFailure> {
        match self.agent.get(url).call() {
            Ok(resp) => {
                let mut body = Vec::new();
                resp.into_reader()
                    .take(256 << 20)
                    .read_to_end(&mut body)
                    .map_err(|e| FetchFailure {
                        status: None,
                        message: e.to_string(),
                    })?;
                Ok(body)
            }
            Err(ureq::Error::Status(code, resp)) => Err(FetchFailure {
                status: Some(code),
                message: resp.status_text().to_owned(),
            }),
            Err(e) => Err(FetchFailure {
                status: None,
                message: e.to_string(),
            }),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// `id <TAB> sha-256-hex` lines, sorted by id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LockFile {
    pub hashes: BTreeMap<String, String>,
}

impl LockFile {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut hashes = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (id, hash) = line
                .split_once('\t')
                .ok_or_else(|| format!("line {}: expected `id<TAB>sha256`", n + 1))?;
            hashes.insert(id.to_owned(), hash.trim().to_owned());
        }
        Ok(LockFile { hashes })
    }

    pub fn render(&self) -> String {
        self.hashes.iter().map(|(id, h)| format!("{id}\t{h}\n")).collect()
    }

    pub fn load(path: &Path) -> Result<Self> {
        match fs::read_to_string(path) {
            Ok(text) => LockFile::parse(&text).map_err(|m| Error::format(path, m)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(LockFile::default()),
            Err(e) => Err(Error::io(path, e)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryFailure {
    pub id: String,
    pub url: String,
    pub status: Option<u16>,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FetchReport {
    /// Downloaded and written.
    pub fetched: Vec<String>,
    /// Already present with a matching hash.
    pub unchanged: Vec<String>,
    /// Local entries, never fetched.
    pub local: Vec<String>,
    pub failures: Vec<EntryFailure>,
    /// Files written, including the lock file.
    pub writes: usize,
}

pub fn entry_url(source: &Source, genbank_template: &str) -> Option<String> {
    match source {
        Source::Local(_) => None,
        Source::Url(u) => Some(u.clone()),
        Source::GenBank(acc) => Some(genbank_template.replace("{acc}", acc)),
    }
}

/// Downloads every remote entry into `dest`, skipping entries whose stored
/// file already matches the lock file.
pub fn fetch_dataset(
    manifest: &Manifest,
    dest: &Path,
    fetcher: &dyn Fetcher,
    genbank_template: &str,
) -> Result<FetchReport> {
    let mut report = FetchReport::default();
    let lock_path = dest.join(LOCK_FILE);
    let mut lock = LockFile::load(&lock_path)?;
    let original = lock.clone();
    for entry in &manifest.entries {
        let Some(url) = entry_url(&entry.source, genbank_template) else {
            report.local.push(entry.id.clone());
            continue;
        };
        let path = dest.join(stored_name(&entry.id));
        if let (Ok(existing), Some(hash)) = (fs::read(&path), lock.hashes.get(&entry.id)) {
            if sha256_hex(&existing) == *hash {
                report.unchanged.push(entry.id.clone());
                continue;
            }
        }
        log::info!("fetching {} from {url}", entry.id);
        let body = match fetcher.get(&url) {
            Ok(b) => b,
            Err(f) => {
                report.failures.push(EntryFailure {
                    id: entry.id.clone(),
                    url,
                    status: f.status,
                    message: f.message,
                });
                continue;
            }
        };
        let bad = if body.iter().all(u8::is_ascii_whitespace) {
            Some("empty payload")
        } else if matches!(entry.source, Source::GenBank(_)) && !body.starts_with(b">") {
            Some("payload is not FASTA")
        } else {
            None
        };
        if let Some(message) = bad {
            report.failures.push(EntryFailure {
                id: entry.id.clone(),
                url,
                status: None,
                message: message.into(),
            });
            continue;
        }
        if report.writes == 0 {
            fs::create_dir_all(dest).map_err(|e| Error::io(dest, e))?;
        }
        fs::write(&path, &body).map_err(|e| Error::io(&path, e))?;
        report.writes += 1;
        lock.hashes.insert(entry.id.clone(), sha256_hex(&body));
        report.fetched.push(entry.id.clone());
    }
    if lock != original {
        fs::write(&lock_path, lock.render()).map_err(|e| Error::io(&lock_path, e))?;
        report.writes += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cell::RefCell;

    struct Mock {
        calls: RefCell<Vec<String>>,
    }

    impl Fetcher for Mock {
        fn get(&self, url: &str) -> std::result::Result<Vec<u8>, FetchFailure> {
            self.calls.borrow_mut().push(url.to_owned());
            if url.contains("missing") {
                return Err(FetchFailure {
                    status: Some(404),
                    message: "Not Found".into(),
                });
            }
            if url.contains("id=") {
                return Ok(b">acc\nACGT\n".to_vec());
            }
            Ok(b"text body\n".to_vec())
        }
    }

    fn mock() -> Mock {
        Mock {
            calls: RefCell::new(Vec::new()),
        }
    }

    #[test]
    fn local_only_manifest_makes_no_requests() {
        let dir = tempfile::tempdir().unwrap();
        let m = Manifest::parse("a\ttext\ta.txt\n", dir.path()).unwrap();
        let f = mock();
        let r = fetch_dataset(&m, dir.path(), &f, GENBANK_URL_TEMPLATE).unwrap();
        assert!(f.calls.borrow().is_empty());
        assert_eq!(r.local, ["a"]);
        assert_eq!(r.writes, 0);
        assert!(r.failures.is_empty());
    }

    #[test]
    fn failures_name_url_and_status() {
        let dir = tempfile::tempdir().unwrap();
        let m = Manifest::parse("bad\ttext\thttps://example.org/missing.txt\n", dir.path()).unwrap();
        let r = fetch_dataset(&m, dir.path(), &mock(), GENBANK_URL_TEMPLATE).unwrap();
        assert_eq!(
            r.failures,
            [EntryFailure {
                id: "bad".into(),
                url: "https://example.org/missing.txt".into(),
                status: Some(404),
                message: "Not Found".into(),
            }]
        );
    }

    #[test]
    fn refetch_with_matching_hashes_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let m = Manifest::parse(
            "human\tdna\tgenbank:V00662\nBasque [Spain]\ttext\thttps://example.org/eu.txt\n",
            dir.path(),
        )
        .unwrap();
        let f = mock();
        let first = fetch_dataset(&m, dir.path(), &f, GENBANK_URL_TEMPLATE).unwrap();
        assert_eq!(first.fetched.len(), 2);
        assert_eq!(first.writes, 3);
        assert!(f.calls.borrow()[0].contains("id=V00662"));
        let lock = fs::read_to_string(dir.path().join(LOCK_FILE)).unwrap();
        assert!(lock.starts_with("Basque [Spain]\t"));
        assert!(dir.path().join("Basque__Spain_").is_file());

        let f2 = mock();
        let second = fetch_dataset(&m, dir.path(), &f2, GENBANK_URL_TEMPLATE).unwrap();
        assert_eq!(second.unchanged.len(), 2);
        assert_eq!(second.writes, 0);
        assert!(f2.calls.borrow().is_empty());

        fs::write(dir.path().join("human"), b"tampered").unwrap();
        let third = fetch_dataset(&m, dir.path(), &mock(), GENBANK_URL_TEMPLATE).unwrap();
        assert_eq!(third.fetched, ["human"]);
        assert_eq!(third.writes, 1);
    }

    #[test]
    fn lock_file_round_trip() {
        let mut l = LockFile::default();
        l.hashes.insert("b".into(), "ff".into());
        l.hashes.insert("a".into(), "00".into());
        assert_eq!(l.render(), "a\t00\nb\tff\n");
        assert_eq!(LockFile::parse(&l.render()).unwrap(), l);
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
