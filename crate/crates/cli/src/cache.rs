//! On-disk cache of class sets, one JSON file per (q, level) and format version.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use quatforms::quaternion::classes::CLASSSET_FORMAT_VERSION;
use quatforms::quaternion::order::standard_eichler;
use quatforms::quaternion::{build_algebra, left_ideal_classes, ClassSet};
use quatforms::{Error, Result};

pub struct Cache {
    dir: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
}

impl Lookup {
    pub fn as_str(self) -> &'static str {
        match self {
            Lookup::Hit => "hit",
            Lookup::Miss => "miss",
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Input(format!("cache {}: {e}", path.display()))
}

impl Cache {
    pub fn new(dir: PathBuf) -> Self {
        Cache { dir }
    }

    fn path(&self, q: u64, level: u64) -> PathBuf {
        self.dir.join(format!("classset-v{CLASSSET_FORMAT_VERSION}-q{q}-n{level}.json"))
    }

    /// Cached class set, computing and storing it on a miss. The per-key lock
    /// file serializes concurrent computations of the same class set.
    pub fn class_set(&self, q: u64, level: u64, prime_bound: u64) -> Result<(ClassSet, Lookup)> {
        fs::create_dir_all(&self.dir).map_err(|e| io_err(&self.dir, e))?;
        let path = self.path(q, level);
        let lock_path = path.with_extension("lock");
        let lock = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&lock_path)
            .map_err(|e| io_err(&lock_path, e))?;
        lock.lock().map_err(|e| io_err(&lock_path, e))?;
        if let Ok(text) = fs::read_to_string(&path) {
            // unreadable or stale entries are recomputed
            if let Ok(cs) = ClassSet::from_json(&text) {
                if cs.algebra.q == q && cs.order.level == level {
                    return Ok((cs, Lookup::Hit));
                }
            }
        }
        let alg = build_algebra(q)?;
        let (max, ord) = standard_eichler(&alg, level)?;
        let cs = left_ideal_classes(&alg, &max, &ord, prime_bound)?;
        let tmp = path.with_extension("tmp");
        let mut f = File::create(&tmp).map_err(|e| io_err(&tmp, e))?;
        f.write_all(cs.to_json().as_bytes()).map_err(|e| io_err(&tmp, e))?;
        f.sync_all().map_err(|e| io_err(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| io_err(&path, e))?;
        Ok((cs, Lookup::Miss))
    }
}
