//! Output directory handling: every file opens with provenance comments,
//! and anything written by a run that later fails is removed again so a
//! crashed invocation never leaves half-written artifacts behind.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use curtail_core::RNG_ALGORITHM;

use crate::error::RunError;

/// Provenance recorded at the top of every CSV.
pub struct Stamp {
    pub config_hash: String,
    pub seed: u64,
}

impl Stamp {
    pub fn write_header<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "# config_hash: {}", self.config_hash)?;
        writeln!(w, "# seed: {}", self.seed)?;
        writeln!(w, "# rng: {RNG_ALGORITHM}")
    }
}

/// Tracks files created during one invocation; uncommitted files are
/// deleted on drop.
pub struct OutputDir {
    root: PathBuf,
    created: Vec<PathBuf>,
    committed: bool,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, RunError> {
        std::fs::create_dir_all(root).map_err(|e| {
            RunError::data(format!("cannot create output dir {}: {e}", root.display()))
        })?;
        Ok(Self {
            root: root.to_path_buf(),
            created: Vec::new(),
            committed: false,
        })
    }

    /// Open `name` for writing with the provenance header already emitted.
    pub fn csv(&mut self, name: &str, stamp: &Stamp) -> Result<BufWriter<File>, RunError> {
        let path = self.root.join(name);
        let file = File::create(&path).map_err(|e| {
            RunError::data(format!("cannot create {}: {e}", path.display()))
        })?;
        self.created.push(path);
        let mut writer = BufWriter::new(file);
        stamp.write_header(&mut writer)?;
        Ok(writer)
    }

    /// Mark the run as successful; files stay on disk.
    pub fn commit(&mut self) {
        self.committed = true;
    }
}

impl Drop for OutputDir {
    fn drop(&mut self) {
        if !self.committed {
            for path in &self.created {
                let _ = std::fs::remove_file(path);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stamp() -> Stamp {
        Stamp {
            config_hash: "ab".repeat(32),
            seed: 9,
        }
    }

    #[test]
    fn committed_files_survive_uncommitted_are_removed() {
        let tmp = tempfile::tempdir().unwrap();
        let kept = tmp.path().join("kept.csv");
        let gone = tmp.path().join("gone.csv");

        {
            let mut out = OutputDir::create(tmp.path()).unwrap();
            let mut w = out.csv("kept.csv", &stamp()).unwrap();
            writeln!(w, "a,b").unwrap();
            w.flush().unwrap();
            out.commit();
        }
        assert!(kept.exists());

        {
            let mut out = OutputDir::create(tmp.path()).unwrap();
            let mut w = out.csv("gone.csv", &stamp()).unwrap();
            writeln!(w, "a,b").unwrap();
            w.flush().unwrap();
            // dropped without commit
        }
        assert!(!gone.exists());
        assert!(kept.exists(), "an aborted run must not touch other files");
    }

    #[test]
    fn header_carries_hash_seed_and_rng() {
        let tmp = tempfile::tempdir().unwrap();
        let mut out = OutputDir::create(tmp.path()).unwrap();
        {
            let mut w = out.csv("x.csv", &stamp()).unwrap();
            writeln!(w, "col").unwrap();
        }
        out.commit();
        let text = std::fs::read_to_string(tmp.path().join("x.csv")).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], format!("# config_hash: {}", "ab".repeat(32)));
        assert_eq!(lines[1], "# seed: 9");
        assert_eq!(lines[2], "# rng: chacha8");
        assert_eq!(lines[3], "col");
    }
}
