use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use tempfile::Builder;

use crate::error::CliError;

/// Files to be written together once every one of them has been rendered.
#[derive(Debug, Default)]
pub struct PendingOutputs {
    files: Vec<(PathBuf, String)>,
}

impl PendingOutputs {
    pub fn add(&mut self, path: PathBuf, contents: String) {
        self.files.push((path, contents));
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.files.iter().map(|(p, _)| p.as_path())
    }

    /// Stages every file as a temporary next to its target, then renames
    /// them into place. Nothing is renamed unless all files staged cleanly.
    pub fn commit(self) -> Result<(), CliError> {
        let mut staged = Vec::with_capacity(self.files.len());
        for (path, contents) in self.files {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
                _ => PathBuf::from("."),
            };
            let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
            fs::create_dir_all(&dir).map_err(io)?;
            let mut tmp = staging_file(&dir).map_err(io)?;
            tmp.write_all(contents.as_bytes()).map_err(io)?;
            tmp.as_file().sync_all().map_err(io)?;
            staged.push((tmp, path));
        }
        for (tmp, path) in staged {
            tmp.persist(&path)
                .map_err(|e| CliError::Io(format!("{}: {}", path.display(), e.error)))?;
            log::info!("wrote {}", path.display());
        }
        Ok(())
    }
}

/// Temporary file with ordinary permissions, so renamed outputs are not
/// left owner-only.
fn staging_file(dir: &Path) -> std::io::Result<tempfile::NamedTempFile> {
    let mut b = Builder::new();
    b.prefix(".coastpca-");
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        b.permissions(fs::Permissions::from_mode(0o644));
    }
    b.tempfile_in(dir)
}

pub fn write_atomic(path: &Path, contents: String) -> Result<(), CliError> {
    let mut out = PendingOutputs::default();
    out.add(path.to_path_buf(), contents);
    out.commit()
}
