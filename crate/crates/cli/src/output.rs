use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::CliError;

/// Writes to standard output for `-`, otherwise to a temporary file in the
/// target directory that is renamed over `path` once complete.
pub fn write_output<F>(path: &str, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    if path == "-" {
        let stdout = io::stdout();
        let mut w = BufWriter::new(stdout.lock());
        body(&mut w)?;
        w.flush()?;
        return Ok(());
    }
    let target = Path::new(path);
    let dir = match target.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let tmp = tempfile::NamedTempFile::new_in(dir)?;
    let mut w = BufWriter::new(tmp);
    body(&mut w)?;
    let tmp = w.into_inner().map_err(|e| e.into_error())?;
    tmp.as_file().sync_all()?;
    tmp.persist(target).map_err(|e| e.error)?;
    Ok(())
}
