//! graph6 corpus files: one graph per line, blank lines and an optional
//! `>>graph6<<` header ignored.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use cospec::graph::{emit_graph6, parse_graph6, Graph};

use crate::failure::UsageError;

pub fn read_graph6_file(path: &Path) -> Result<Vec<Graph>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.with_context(|| format!("cannot read {}", path.display()))?;
        let text = line.trim();
        let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
        if text.is_empty() {
            continue;
        }
        let g = parse_graph6(text).map_err(|e| UsageError::BadLine {
            path: path.display().to_string(),
            line: i + 1,
            msg: e.to_string(),
        })?;
        out.push(g);
    }
    Ok(out)
}

pub fn write_graph6<'a>(out: impl Write, graphs: impl IntoIterator<Item = &'a Graph>) -> Result<()> {
    let mut w = BufWriter::new(out);
    for g in graphs {
        writeln!(w, "{}", emit_graph6(g)?)?;
    }
    w.flush()?;
    Ok(())
}
