//! Rendering of verdicts and tables as JSON, CSV, Markdown or plain text.

use std::fmt::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engines::{IterationRecord, RefinementTrace, Termination, Verdict};
use crate::error::{GwlError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Md,
    Text,
}

impl FromStr for Format {
    type Err = GwlError;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "md" | "markdown" => Ok(Format::Md),
            "text" | "txt" => Ok(Format::Text),
            _ => Err(GwlError::InvalidParameter(format!("unknown format {s:?}"))),
        }
    }
}

/// The serialised outcome of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub test: String,
    pub group: String,
    /// `"distinguished"` or `"indistinguishable"`.
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iteration: Option<usize>,
    pub stable: bool,
    pub termination: Termination,
    pub trace: Vec<IterationRecord>,
}

impl VerdictReport {
    pub fn new(test: impl ToString, group: impl ToString, verdict: Verdict, trace: RefinementTrace) -> VerdictReport {
        let (word, iteration, stable) = match verdict {
            Verdict::Distinguished { iteration } => ("distinguished", Some(iteration), false),
            Verdict::Indistinguishable { stable, .. } => ("indistinguishable", None, stable),
        };
        VerdictReport {
            test: test.to_string(),
            group: group.to_string(),
            verdict: word.into(),
            iteration,
            stable,
            termination: trace.termination,
            trace: trace.iterations,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("reports serialise"),
            _ => {
                let headers = ["iteration", "classes", "histogram_1", "histogram_2"];
                let rows: Vec<Vec<String>> = self
                    .trace
                    .iter()
                    .map(|r| {
                        vec![
                            r.iteration.to_string(),
                            r.class_count.to_string(),
                            histogram_text(r, true),
                            histogram_text(r, false),
                        ]
                    })
                    .collect();
                let mut out = String::new();
                if format != Format::Csv {
                    let at = self.iteration.map(|t| format!(" at iteration {t}")).unwrap_or_default();
                    let _ = writeln!(out, "{} under {}: {}{at}", self.test, self.group, self.verdict);
                    if format == Format::Md {
                        out.push('\n');
                    }
                }
                out.push_str(&render_table(&headers, &rows, format));
                out
            }
        }
    }
}

fn histogram_text(r: &IterationRecord, first: bool) -> String {
    let h = if first { &r.histogram_1 } else { &r.histogram_2 };
    h.0.iter().map(|(c, n)| format!("{}x{n}", c.0)).collect::<Vec<_>>().join(" ")
}

/// A table in CSV, Markdown or aligned text. JSON renders an array of
/// objects keyed by header.
pub fn render_table(headers: &[&str], rows: &[Vec<String>], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Json => {
            let objs: Vec<serde_json::Map<String, serde_json::Value>> = rows
                .iter()
                .map(|r| {
                    headers
                        .iter()
                        .zip(r)
                        .map(|(h, v)| (h.to_string(), serde_json::Value::String(v.clone())))
                        .collect()
                })
                .collect();
            out = serde_json::to_string_pretty(&objs).expect("tables serialise");
            out.push('\n');
        }
        Format::Csv => {
            let line = |cells: Vec<String>| cells.join(",");
            out.push_str(&line(headers.iter().map(|h| h.to_string()).collect()));
            out.push('\n');
            for r in rows {
                out.push_str(&line(r.iter().map(|c| csv_cell(c)).collect()));
                out.push('\n');
            }
        }
        Format::Md => {
            let _ = writeln!(out, "| {} |", headers.join(" | "));
            let _ = writeln!(out, "|{}|", vec!["---"; headers.len()].join("|"));
            for r in rows {
                let _ = writeln!(out, "| {} |", r.join(" | "));
            }
        }
        Format::Text => {
            let mut width: Vec<usize> = headers.iter().map(|h| h.len()).collect();
            for r in rows {
                for (w, c) in width.iter_mut().zip(r) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let line = |cells: Vec<&str>| {
                cells
                    .iter()
                    .zip(&width)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let _ = writeln!(out, "{}", line(headers.to_vec()));
            for r in rows {
                let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
            }
        }
    }
    out
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::run_wl;
    use crate::graph::GeometricGraph;
    use crate::linalg::Vector;

    #[test]
    fn json_shape() {
        let p = (0..3).map(|i| Vector::from_ints(&[i])).collect();
        let g = GeometricGraph::from_positions(1, p, &[(0, 1), (1, 2)]).unwrap();
        let h = g.with_edges(&[(0, 1), (1, 2), (0, 2)]).unwrap();
        let (v, t) = run_wl(&g, &h, None).unwrap();
        let r = VerdictReport::new("wl", "O(1)", v, t);
        let json: serde_json::Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        assert_eq!(json["verdict"], "distinguished");
        assert_eq!(json["iteration"], 1);
        assert_eq!(json["trace"].as_array().unwrap().len(), 2);
        let back: VerdictReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn tables() {
        let rows = vec![vec!["1".to_string(), "a,b".to_string()]];
        assert_eq!(render_table(&["k", "v"], &rows, Format::Csv), "k,v\n1,\"a,b\"\n");
        assert!(render_table(&["k", "v"], &rows, Format::Md).starts_with("| k | v |\n|---|---|\n"));
    }
}
