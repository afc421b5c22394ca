//! Optional single-file on-disk cache for Floer summaries and
//! factorizations, content-addressed by knot and module version.

use gamma4_core::floer::HfkiSummary;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::PathBuf;

/// Bump when the floer engine or its conventions change; stale entries are
/// then simply never addressed again.
const MODULE_VERSION: &str = "floer-v1";

#[derive(Debug, Default, Serialize, Deserialize)]
struct CacheFile {
    floer: BTreeMap<String, CachedSummary>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CachedSummary {
    upsilon: i64,
    upsilon_bar: i64,
    upsilon_underbar: i64,
}

pub struct Cache {
    path: Option<PathBuf>,
    data: CacheFile,
    dirty: bool,
}

impl Cache {
    pub fn open(dir: Option<PathBuf>, enabled: bool) -> Cache {
        let path = if enabled {
            dir.map(|d| d.join("gamma4-cache.json"))
        } else {
            None
        };
        let data = path
            .as_ref()
            .and_then(|p| std::fs::read_to_string(p).ok())
            .and_then(|text| serde_json::from_str(&text).ok())
            .unwrap_or_default();
        Cache {
            path,
            data,
            dirty: false,
        }
    }

    fn floer_key(p: u64, q: u64) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("{MODULE_VERSION}:T({},{})", p.min(q), p.max(q)));
        hex_string(&hasher.finalize())
    }

    pub fn get_floer(&self, p: u64, q: u64) -> Option<HfkiSummary> {
        let entry = self.data.floer.get(&Self::floer_key(p, q))?;
        Some(HfkiSummary {
            upsilon: entry.upsilon,
            upsilon_bar: entry.upsilon_bar,
            upsilon_underbar: entry.upsilon_underbar,
            tower_data: vec![],
        })
    }

    pub fn put_floer(&mut self, p: u64, q: u64, summary: &HfkiSummary) {
        if self.path.is_none() {
            return;
        }
        self.data.floer.insert(
            Self::floer_key(p, q),
            CachedSummary {
                upsilon: summary.upsilon,
                upsilon_bar: summary.upsilon_bar,
                upsilon_underbar: summary.upsilon_underbar,
            },
        );
        self.dirty = true;
    }

    /// Write back atomically (write to a sibling then rename); concurrent
    /// readers see either the old or the new file.
    pub fn flush(&mut self) {
        let (Some(path), true) = (self.path.as_ref(), self.dirty) else {
            return;
        };
        if let Some(parent) = path.parent() {
            let _ = std::fs::create_dir_all(parent);
        }
        let tmp = path.with_extension("json.tmp");
        if let Ok(text) = serde_json::to_string_pretty(&self.data) {
            if std::fs::write(&tmp, text).is_ok() {
                let _ = std::fs::rename(&tmp, path);
                self.dirty = false;
            }
        }
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
