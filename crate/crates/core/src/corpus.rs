//! Corpus file formats and run configuration.
//!
//! A corpus lives on disk as a JSON Lines manifest whose entries point at
//! tab-separated edge-list files, resolved relative to the manifest. The
//! formats are plain text on purpose: corpora are many small graphs and
//! debuggability beats packing.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::EgoNetwork;
use crate::ranking::Instance;
use crate::{SCHEMA_VERSION, TOOL_VERSION};

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Parses edge-list text: one `src<TAB>dst` per line, `#` comment lines and
/// blank lines skipped. `path_label` names the source in error messages.
pub fn parse_edge_list(text: &str, path_label: &str) -> Result<Vec<(String, String)>> {
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |reason: &str| Error::ParseLine {
            path: path_label.to_owned(),
            line: i + 1,
            reason: reason.to_owned(),
        };
        let mut fields = line.split('\t');
        let src = fields.next().unwrap_or_default();
        let dst = fields
            .next()
            .ok_or_else(|| parse_err("expected `src<TAB>dst`"))?;
        if fields.next().is_some() {
            return Err(parse_err("expected exactly two tab-separated fields"));
        }
        if src.is_empty() || dst.is_empty() {
            return Err(parse_err("empty node id"));
        }
        edges.push((src.to_owned(), dst.to_owned()));
    }
    Ok(edges)
}

pub fn read_edge_list(path: &Path) -> Result<Vec<(String, String)>> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_edge_list(&text, &path.display().to_string())
}

/// Writes edges as sorted `a<TAB>b` lines. Unlike the tolerant reader, the
/// writer rejects self-loops and duplicates so generated files are
/// canonical.
pub fn write_edge_list<'a>(
    path: &Path,
    edges: impl IntoIterator<Item = (&'a str, &'a str)>,
) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for (a, b) in edges {
        if a == b {
            return Err(Error::SelfLoopEdge(a.to_owned()));
        }
        let pair = if a < b { (a, b) } else { (b, a) };
        if !seen.insert(pair) {
            return Err(Error::DuplicateEdge(pair.0.to_owned(), pair.1.to_owned()));
        }
    }
    let mut text = String::new();
    for (a, b) in &seen {
        text.push_str(a);
        text.push('\t');
        text.push_str(b);
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// One manifest line; `graph` is a path relative to the manifest file.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct ManifestLine {
    center: String,
    partner: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    family: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    tags: BTreeMap<String, String>,
    graph: String,
}

/// Loads a JSON Lines manifest and every edge list it references.
pub fn load_corpus(manifest: &Path) -> Result<Vec<Instance>> {
    let text = fs::read_to_string(manifest).map_err(|e| io_err(manifest, e))?;
    let dir = manifest.parent().unwrap_or_else(|| Path::new("."));
    let mut corpus = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let entry: ManifestLine =
            serde_json::from_str(line).map_err(|e| Error::ParseLine {
                path: manifest.display().to_string(),
                line: i + 1,
                reason: e.to_string(),
            })?;
        let edges = read_edge_list(&dir.join(&entry.graph))?;
        let network = EgoNetwork::build(&entry.center, &edges)?;
        corpus.push(Instance::new(
            network,
            &entry.partner,
            &entry.family,
            entry.tags,
        )?);
    }
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(corpus)
}

/// Writes a corpus under `dir` as `manifest.jsonl` plus one edge list per
/// instance in `graphs/`. Output is byte-deterministic for a given corpus.
pub fn save_corpus(dir: &Path, corpus: &[Instance]) -> Result<()> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let graphs = dir.join("graphs");
    fs::create_dir_all(&graphs).map_err(|e| io_err(&graphs, e))?;
    let manifest_path = dir.join("manifest.jsonl");
    let mut manifest =
        fs::File::create(&manifest_path).map_err(|e| io_err(&manifest_path, e))?;
    for (i, instance) in corpus.iter().enumerate() {
        let g = instance.network();
        let rel = format!("graphs/{i:05}.tsv");
        let edge_path = dir.join(format!("graphs/{i:05}.tsv"));
        write_edge_list(
            &edge_path,
            g.edges()
                .map(|(a, b)| (g.external_id(a), g.external_id(b))),
        )?;
        let line = ManifestLine {
            center: g.center_id().to_owned(),
            partner: instance.partner_id().to_owned(),
            family: instance
                .family_ids()
                .iter()
                .map(|s| (*s).to_owned())
                .collect(),
            tags: instance.tags().clone(),
            graph: rel,
        };
        let json = serde_json::to_string(&line).expect("manifest line serializes");
        writeln!(manifest, "{json}").map_err(|e| io_err(&manifest_path, e))?;
    }
    Ok(())
}

/// Everything that determined a run's output, embedded in every report.
///
/// The worker count is deliberately not serialized: results are merged in
/// corpus order, so outputs are identical for any worker count and the
/// reports must be too.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunConfig {
    pub tool_version: String,
    pub schema_version: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<String>,
    pub tie_break: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub slices: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        RunConfig {
            tool_version: TOOL_VERSION.to_owned(),
            schema_version: SCHEMA_VERSION,
            command: command.to_owned(),
            tie_break: "score, then embeddedness desc, then id asc".to_owned(),
            ..RunConfig::default()
        }
    }

    /// `# key<TAB>value` comment lines prepended to text reports.
    pub fn to_header(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        let mut out = String::new();
        if let serde_json::Value::Object(map) = value {
            for (k, v) in map {
                let rendered = match v {
                    serde_json::Value::String(s) => s,
                    other => other.to_string(),
                };
                out.push_str(&format!("# {k}\t{rendered}\n"));
            }
        }
        out
    }
}

/// The versioned JSON report envelope: configuration plus payload.
pub fn report_json<T: Serialize>(config: &RunConfig, report: &T) -> String {
    let value = serde_json::json!({
        "config": config,
        "report": report,
    });
    let mut text = serde_json::to_string_pretty(&value).expect("report serializes");
    text.push('\n');
    text
}
