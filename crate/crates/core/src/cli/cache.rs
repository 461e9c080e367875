//! Content-addressed result cache: one JSON-lines file per parameter set,
//! one record per polynomial encoding.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::char_sums::LPolynomial;
use crate::cyclotomic::CycloJson;
use crate::error::{Error, Result};

/// Bumped whenever cached values could change.
pub const ENGINE_VERSION: &str = "lpoly-engine-1";

#[derive(Serialize, Deserialize)]
struct Record {
    poly: Vec<u64>,
    coefficients: Vec<CycloJson>,
}

pub struct Cache {
    dir: PathBuf,
    lock: Mutex<()>,
}

/// Parameters that select one cache file.
#[derive(Clone, Debug, Serialize)]
pub struct CacheKey {
    pub kind: &'static str,
    pub p: u64,
    pub m: u32,
    pub d: u64,
    pub e: u64,
    pub kappa: u64,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::BadParameters(format!("cache dir {}: {e}", dir.display())))?;
        Ok(Cache { dir: dir.to_path_buf(), lock: Mutex::new(()) })
    }

    pub fn file_for(&self, key: &CacheKey) -> PathBuf {
        let mut h = Sha256::new();
        h.update(ENGINE_VERSION.as_bytes());
        h.update(serde_json::to_vec(key).expect("key serializes"));
        let hex: String = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
        self.dir.join(format!("{hex}.jsonl"))
    }

    /// All records in the file for `key`, by polynomial encoding.
    pub fn load(&self, key: &CacheKey) -> Result<BTreeMap<Vec<u64>, LPolynomial>> {
        let _guard = self.lock.lock().unwrap();
        let path = self.file_for(key);
        let mut out = BTreeMap::new();
        let Ok(file) = fs::File::open(&path) else {
            return Ok(out);
        };
        for line in BufReader::new(file).lines() {
            let line = line.map_err(|e| Error::BadParameters(format!("cache read: {e}")))?;
            // a torn final line from an interrupted run is skipped
            let Ok(rec) = serde_json::from_str::<Record>(&line) else {
                continue;
            };
            let coeffs = rec.coefficients.into_iter().map(CycloJson::into_elem).collect::<Result<Vec<_>>>()?;
            out.insert(rec.poly, LPolynomial::from_coeffs(coeffs)?);
        }
        Ok(out)
    }

    pub fn store(&self, key: &CacheKey, entries: &[(Vec<u64>, LPolynomial)]) -> Result<()> {
        if entries.is_empty() {
            return Ok(());
        }
        let _guard = self.lock.lock().unwrap();
        let io = |e: std::io::Error| Error::BadParameters(format!("cache write: {e}"));
        let mut file = OpenOptions::new().create(true).append(true).open(self.file_for(key)).map_err(io)?;
        let mut buf = Vec::new();
        for (poly, l) in entries {
            let rec = Record { poly: poly.clone(), coefficients: l.to_json() };
            serde_json::to_writer(&mut buf, &rec).expect("record serializes");
            buf.push(b'\n');
        }
        file.write_all(&buf).map_err(io)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{CycloRing, ZetaPart};

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let key = CacheKey { kind: "twisted", p: 3, m: 1, d: 2, e: 1, kappa: 1 };
        assert!(cache.load(&key).unwrap().is_empty());
        let ring = CycloRing::new(3, 2).unwrap();
        let g = ring.zeta_pow(ZetaPart::P, 1).sub(&ring.zeta_pow(ZetaPart::P, 2)).unwrap();
        let l = LPolynomial::from_coeffs(vec![ring.one(), g]).unwrap();
        cache.store(&key, &[(vec![], l.clone())]).unwrap();
        let back = cache.load(&key).unwrap();
        assert_eq!(back.get(&vec![]), Some(&l));
        let other = CacheKey { kappa: 0, ..key.clone() };
        assert_ne!(cache.file_for(&key), cache.file_for(&other));
    }
}
