//! On-disk cache for coefficient tables and elimination certificates.
//!
//! One JSON file per cache directory, protected by a content checksum and
//! a format version. Anything suspicious degrades to recomputation with a
//! warning; a cache can slow a run down, never corrupt it.

use crossbessel::coeffs::{CoeffQuad, CoeffTable};
use crossbessel::elim::EliminationCertificate;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

pub const FORMAT_VERSION: u32 = 1;
const FILE_NAME: &str = "crossbessel-cache.json";

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format_version: u32,
    coeff_entries: Vec<CoeffQuad>,
    certificates: Vec<EliminationCertificate>,
    checksum: String,
}

fn content_digest(
    version: u32,
    entries: &[CoeffQuad],
    certificates: &[EliminationCertificate],
) -> String {
    let body = serde_json::to_string(&(version, entries, certificates))
        .expect("cache content serializes");
    let mut hasher = Sha256::new();
    hasher.update(body.as_bytes());
    format!("{:x}", hasher.finalize())
}

/// Cache contents after validation; empty when nothing usable was found.
pub struct Cache {
    pub table: CoeffTable,
    pub certificates: Vec<EliminationCertificate>,
    path: Option<PathBuf>,
}

impl Cache {
    pub fn empty() -> Self {
        Cache {
            table: CoeffTable::new(),
            certificates: Vec::new(),
            path: None,
        }
    }

    /// Load from `dir`, falling back to an empty cache on any problem.
    /// The checksum guards the whole file; every coefficient quadruple is
    /// additionally re-verified against its defining relations.
    pub fn load(dir: &Path) -> Self {
        let path = dir.join(FILE_NAME);
        let mut cache = Cache {
            table: CoeffTable::new(),
            certificates: Vec::new(),
            path: Some(path.clone()),
        };
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(_) => return cache,
        };
        let file: CacheFile = match serde_json::from_str(&text) {
            Ok(f) => f,
            Err(_) => {
                eprintln!("warning: unreadable cache at {}; recomputing", path.display());
                return cache;
            }
        };
        if file.format_version != FORMAT_VERSION {
            return cache;
        }
        if content_digest(file.format_version, &file.coeff_entries, &file.certificates)
            != file.checksum
        {
            eprintln!(
                "warning: cache checksum mismatch at {}; recomputing",
                path.display()
            );
            return cache;
        }
        match CoeffTable::from_entries(file.coeff_entries) {
            Ok(table) => {
                cache.table = table;
                cache.certificates = file.certificates;
            }
            Err(e) => {
                eprintln!("warning: cache rejected ({e}); recomputing");
            }
        }
        cache
    }

    /// Persist atomically: write a sibling temp file, then rename over the
    /// target.
    pub fn save(&self) {
        let Some(path) = &self.path else {
            return;
        };
        let mut entries: Vec<CoeffQuad> = self.table.entries().cloned().collect();
        entries.sort_by_key(|q| (q.m, q.n));
        let file = CacheFile {
            format_version: FORMAT_VERSION,
            checksum: content_digest(FORMAT_VERSION, &entries, &self.certificates),
            coeff_entries: entries,
            certificates: self.certificates.clone(),
        };
        let Ok(body) = serde_json::to_string_pretty(&file) else {
            return;
        };
        if let Some(dir) = path.parent() {
            if fs::create_dir_all(dir).is_err() {
                eprintln!("warning: cannot create cache directory {}", dir.display());
                return;
            }
        }
        let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
        if fs::write(&tmp, body).is_ok() {
            if fs::rename(&tmp, path).is_err() {
                let _ = fs::remove_file(&tmp);
                eprintln!("warning: cache update failed at {}", path.display());
            }
        } else {
            eprintln!("warning: cache write failed at {}", tmp.display());
        }
    }
}
