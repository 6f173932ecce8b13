//! On-disk cache of relation ideals.
//!
//! One JSON file per `(genus, source_cap, format version)`. Each entry
//! stores a SHA-256 of the serialized ideal; entries that fail to parse,
//! disagree on the key or fail the hash are rebuilt and overwritten.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use tautjac::ideal::{IdealDocument, FORMAT_VERSION};
use tautjac::{IdealError, RelationIdeal};

const PREFIX: &str = "ideal-";

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    genus: u32,
    source_cap: u32,
    #[serde(rename = "format-version")]
    format_version: u32,
    sha256: String,
    ideal: IdealDocument,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
    /// Present but unusable; rebuilt.
    Rejected,
}

pub struct Cache {
    dir: PathBuf,
}

fn digest(doc: &IdealDocument) -> String {
    let bytes = serde_json::to_vec(doc).expect("documents always serialize");
    hex::encode(Sha256::digest(&bytes))
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    fn path(&self, genus: u32, cap: u32) -> PathBuf {
        self.dir
            .join(format!("{PREFIX}g{genus}-cap{cap}-v{FORMAT_VERSION}.json"))
    }

    fn read(&self, genus: u32, cap: u32) -> Result<Option<RelationIdeal>, ()> {
        let text = match fs::read_to_string(self.path(genus, cap)) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(_) => return Err(()),
        };
        let entry: CacheEntry = serde_json::from_str(&text).map_err(|_| ())?;
        let key_ok = entry.genus == genus
            && entry.source_cap == cap
            && entry.format_version == FORMAT_VERSION
            && entry.ideal.genus == genus
            && entry.ideal.source_cap == cap;
        if !key_ok || digest(&entry.ideal) != entry.sha256 {
            return Err(());
        }
        RelationIdeal::from_document(&entry.ideal)
            .map(Some)
            .map_err(|_| ())
    }

    fn write(&self, ideal: &RelationIdeal) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let doc = ideal
            .to_document(None)
            .expect("full document is within the cap");
        let entry = CacheEntry {
            genus: ideal.genus(),
            source_cap: ideal.source_cap(),
            format_version: FORMAT_VERSION,
            sha256: digest(&doc),
            ideal: doc,
        };
        let path = self.path(ideal.genus(), ideal.source_cap());
        let tmp = path.with_extension("json.tmp");
        fs::write(
            &tmp,
            serde_json::to_vec(&entry).expect("entries always serialize"),
        )?;
        fs::rename(tmp, path)
    }

    /// Cached ideal, building and storing it on a miss.
    pub fn get_or_build(
        &self,
        genus: u32,
        cap: u32,
    ) -> Result<(RelationIdeal, Lookup), IdealError> {
        let lookup = match self.read(genus, cap) {
            Ok(Some(ideal)) => return Ok((ideal, Lookup::Hit)),
            Ok(None) => Lookup::Miss,
            Err(()) => Lookup::Rejected,
        };
        let ideal = RelationIdeal::build(genus, cap)?;
        // a cache that cannot be written only costs a rebuild next time
        let _ = self.write(&ideal);
        Ok((ideal, lookup))
    }

    /// Cache files currently present, sorted by name.
    pub fn entries(&self) -> io::Result<Vec<PathBuf>> {
        let mut out = Vec::new();
        let dir = match fs::read_dir(&self.dir) {
            Ok(d) => d,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(e),
        };
        for item in dir {
            let path = item?.path();
            if is_cache_file(&path) {
                out.push(path);
            }
        }
        out.sort();
        Ok(out)
    }

    /// Removes every cache file; other files in the directory are left alone.
    pub fn clear(&self) -> io::Result<usize> {
        let entries = self.entries()?;
        for p in &entries {
            fs::remove_file(p)?;
        }
        Ok(entries.len())
    }
}

fn is_cache_file(path: &Path) -> bool {
    path.file_name().and_then(|n| n.to_str()).is_some_and(|n| {
        n.starts_with(PREFIX) && (n.ends_with(".json") || n.ends_with(".json.tmp"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn miss_then_hit_gives_identical_ideal() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let (a, first) = cache.get_or_build(3, 5).unwrap();
        let (b, second) = cache.get_or_build(3, 5).unwrap();
        assert_eq!((first, second), (Lookup::Miss, Lookup::Hit));
        assert_eq!(a, b);
        assert_eq!(cache.entries().unwrap().len(), 1);
    }

    #[test]
    fn corrupted_entry_is_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let (a, _) = cache.get_or_build(2, 4).unwrap();
        let path = cache.path(2, 4);
        let text = fs::read_to_string(&path).unwrap();
        // flip a coefficient inside the payload but keep valid JSON
        let tampered = text.replacen("\"coeff\":\"1\"", "\"coeff\":\"2\"", 1);
        assert_ne!(text, tampered);
        fs::write(&path, tampered).unwrap();
        let (b, lookup) = cache.get_or_build(2, 4).unwrap();
        assert_eq!(lookup, Lookup::Rejected);
        assert_eq!(a, b);
        fs::write(&path, "not json").unwrap();
        assert_eq!(cache.get_or_build(2, 4).unwrap().1, Lookup::Rejected);
        assert_eq!(cache.get_or_build(2, 4).unwrap().1, Lookup::Hit);
    }

    #[test]
    fn clear_only_touches_cache_files() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        cache.get_or_build(2, 3).unwrap();
        cache.get_or_build(2, 4).unwrap();
        fs::write(dir.path().join("notes.txt"), "keep").unwrap();
        assert_eq!(cache.clear().unwrap(), 2);
        assert!(dir.path().join("notes.txt").exists());
        assert!(cache.entries().unwrap().is_empty());
    }
}
