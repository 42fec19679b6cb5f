use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::{Cli, Command};

/// Provenance line: version, command, seed and every parameter.
pub struct Header {
    text: String,
}

impl Header {
    pub fn new(cli: &Cli) -> Self {
        let (name, params) = match &cli.command {
            Command::FiurasekScan(a) => (
                "fiurasek-scan",
                format!("n_min={} n_max={} samples={}", a.n_min, a.n_max, a.samples),
            ),
            Command::CovariantScan(a) => (
                "covariant-scan",
                format!("j_min={} j_max={} samples={}", a.j_min, a.j_max, a.samples),
            ),
            Command::NetScan(a) => (
                "net-scan",
                format!(
                    "n={} eps={} budget={} samples={} min_coverage={} exponent_band=[{},{}]",
                    a.n,
                    a.eps.iter().map(f64::to_string).collect::<Vec<_>>().join(";"),
                    a.budget,
                    a.samples,
                    a.min_coverage,
                    a.exponent_min,
                    a.exponent_max
                ),
            ),
            Command::ExactCheck(a) => (
                "exact-check",
                format!(
                    "samples={} threshold={:e} negative_control={} control_fraction={}",
                    a.samples, a.threshold, a.negative_control, a.control_fraction
                ),
            ),
            Command::Distance(a) => (
                "distance",
                format!("povm_a={} povm_b={}", a.povm_a.display(), a.povm_b.display()),
            ),
        };
        Self {
            text: format!(
                "povmforge {} {name} seed={} tol={:e} {params}",
                env!("CARGO_PKG_VERSION"),
                cli.seed,
                cli.tol
            ),
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

pub enum Destination {
    /// `--out`, or stdout.
    Primary,
    File(PathBuf),
}

pub enum Artifact {
    /// CSV body with a header row; `trailer` lines are written as comments.
    Csv {
        to: Destination,
        body: String,
        trailer: Vec<String>,
    },
    /// JSON object; the provenance line becomes its first key, `"header"`.
    Json {
        to: Destination,
        value: serde_json::Value,
    },
}

pub fn csv_body<T: Serialize>(rows: &[T]) -> io::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(io::Error::other)?;
    }
    let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
    String::from_utf8(bytes).map_err(io::Error::other)
}

fn render(header: &Header, artifact: &Artifact) -> io::Result<String> {
    Ok(match artifact {
        Artifact::Csv { body, trailer, .. } => {
            let mut text = format!("# {}\n{body}", header.text());
            for line in trailer {
                text.push_str("# ");
                text.push_str(line);
                text.push('\n');
            }
            text
        }
        Artifact::Json { value, .. } => {
            let mut with_header = serde_json::Map::new();
            with_header.insert("header".into(), header.text().into());
            match value {
                serde_json::Value::Object(map) => with_header.extend(map.clone()),
                other => {
                    with_header.insert("value".into(), other.clone());
                }
            }
            let mut text = serde_json::to_string_pretty(&with_header).map_err(io::Error::other)?;
            text.push('\n');
            text
        }
    })
}

pub fn emit(header: &Header, out: Option<&Path>, artifacts: &[Artifact]) -> io::Result<()> {
    for artifact in artifacts {
        let to = match artifact {
            Artifact::Csv { to, .. } | Artifact::Json { to, .. } => to,
        };
        let text = render(header, artifact)?;
        let path = match to {
            Destination::File(path) => Some(path.as_path()),
            Destination::Primary => out,
        };
        match path {
            Some(path) => fs::write(path, text)
                .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?,
            None => io::stdout().lock().write_all(text.as_bytes())?,
        }
    }
    Ok(())
}
