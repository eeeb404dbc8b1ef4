use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::record::{ResultRecord, VERSION};

/// On-disk store of [`ResultRecord`]s keyed by level, tool version and generator override.
#[derive(Clone, Debug)]
pub struct Cache {
    root: PathBuf,
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path(&self, n: u64, generator: Option<u64>) -> PathBuf {
        let g = generator.map_or_else(|| "default".to_string(), |a| format!("g{a}"));
        self.root.join(format!("v{VERSION}")).join(format!("{n}-{g}.json"))
    }

    /// A stored record, or `None` when absent or unreadable.
    pub fn load(&self, n: u64, generator: Option<u64>) -> Option<ResultRecord> {
        let text = fs::read_to_string(self.path(n, generator)).ok()?;
        let r: ResultRecord = serde_json::from_str(&text).ok()?;
        (r.n == n && r.generator == generator && r.version == VERSION).then_some(r)
    }

    pub fn store(&self, r: &ResultRecord) -> io::Result<()> {
        let path = self.path(r.n, r.generator);
        fs::create_dir_all(path.parent().expect("cache path has a parent"))?;
        // write then rename so concurrent readers never see a partial file
        let tmp = path.with_extension(format!("json.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_vec_pretty(r).map_err(io::Error::other)?)?;
        fs::rename(tmp, path)
    }
}
