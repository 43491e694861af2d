use std::io::Write;
use std::path::Path;

use serde_json::Value;

/// Destination of the human-readable summary. When a machine-readable
/// artifact goes to stdout the summary moves to stderr.
pub struct Sink {
    quiet: bool,
}

impl Sink {
    pub fn new(quiet: bool) -> Self {
        Sink { quiet }
    }

    pub fn say(&mut self, line: &str) {
        if self.quiet {
            eprintln!("{line}");
        } else {
            println!("{line}");
        }
    }
}

fn is_stdout(path: &Path) -> bool {
    path.as_os_str() == "-"
}

/// Writes `text` to `path`, or to stdout for `-`.
pub fn write_text(path: &Path, text: &str) -> std::io::Result<()> {
    if is_stdout(path) {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()
    } else {
        std::fs::write(path, text)
    }
}

/// Pretty JSON with sorted keys (serde_json maps are ordered) and a
/// trailing newline.
pub fn write_json(path: &Path, v: &Value) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(v).map_err(std::io::Error::other)?;
    write_text(path, &(text + "\n"))
}

/// RFC 4180 table.
pub fn csv_string(header: &[String], records: &[Vec<String>]) -> std::io::Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(header).map_err(std::io::Error::other)?;
    for r in records {
        w.write_record(r).map_err(std::io::Error::other)?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    String::from_utf8(bytes).map_err(std::io::Error::other)
}
