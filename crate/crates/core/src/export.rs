//! Graph export: DOT and edge-list CSV. Output is byte-stable: vertices by
//! index, edges `(u, v)` with `u < v` ascending, `\n` line endings.

use crate::error::{Error, Result};
use crate::space::SpaceGraph;
use std::fmt::Write as _;
use std::path::Path;

pub fn dot_string(g: &SpaceGraph) -> String {
    let mut out = String::new();
    out.push_str("graph space {\n");
    for (i, label) in g.labels().iter().enumerate() {
        let _ = writeln!(out, "  {i} [label=\"{}\"];", label.display());
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}

pub fn vertices_csv(g: &SpaceGraph) -> String {
    let mut out = String::from("index,kind,element,depth\n");
    for (i, label) in g.labels().iter().enumerate() {
        let _ = writeln!(
            out,
            "{i},{},{},{}",
            label.kind_name(),
            label.element_str(),
            label.depth()
        );
    }
    out
}

pub fn edges_csv(g: &SpaceGraph) -> String {
    let mut out = String::from("u,v\n");
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u},{v}");
    }
    out
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

/// Write `<stem>.dot` or `<stem>.vertices.csv` + `<stem>.edges.csv`.
pub fn export_graph(g: &SpaceGraph, format: ExportFormat, stem: &Path) -> Result<Vec<String>> {
    match format {
        ExportFormat::Dot => {
            let path = stem.with_extension("dot");
            write_file(&path, &dot_string(g))?;
            Ok(vec![path.display().to_string()])
        }
        ExportFormat::Csv => {
            let vpath = stem.with_extension("vertices.csv");
            let epath = stem.with_extension("edges.csv");
            write_file(&vpath, &vertices_csv(g))?;
            write_file(&epath, &edges_csv(g))?;
            Ok(vec![vpath.display().to_string(), epath.display().to_string()])
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Csv,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(ExportFormat::Dot),
            "csv" => Ok(ExportFormat::Csv),
            other => Err(Error::Input(format!("unknown export format '{other}'"))),
        }
    }
}
