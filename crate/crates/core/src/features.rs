//! Structural feature export for external model training.
//!
//! Each (center, candidate) pair yields 48 raw columns: absolute and
//! normalized dispersion under the six standard distance functions, plus
//! the recursive values at iterations 2 through 7 under the same six. The
//! transform step expands every raw column into four: the raw value, a
//! per-neighborhood z-score, a rank (1 = highest), and the rank divided by
//! the neighborhood size.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::json;

use crate::dispersion::{absolute_table, recursive_series};
use crate::distances::{
    distance_context, DistanceSpec, DEFAULT_SPRING_ITERATIONS, DEFAULT_SPRING_SEED,
};
use crate::error::Result;
use crate::graph::{EgoNetwork, NodeId};
use crate::ranking::Instance;
use crate::SCHEMA_VERSION;

const RECURSIVE_RANGE: std::ops::RangeInclusive<u32> = 2..=7;

/// One exported row: ids, label, and the feature values in column order.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureRow {
    pub center: String,
    pub candidate: String,
    pub is_partner: u8,
    pub values: Vec<f64>,
}

/// A labeled feature table with rows grouped by neighborhood.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureMatrix {
    /// Feature column names (48 raw, 192 transformed).
    pub columns: Vec<String>,
    pub rows: Vec<FeatureRow>,
    /// Row counts per neighborhood, in row order. Transform groups use
    /// these spans, so corpora whose centers share an external id still
    /// normalize per instance.
    pub groups: Vec<usize>,
    pub meta: BTreeMap<String, String>,
}

/// The 48 raw column names in export order.
pub fn feature_columns() -> Vec<String> {
    let specs = DistanceSpec::standard_set(DEFAULT_SPRING_ITERATIONS, DEFAULT_SPRING_SEED);
    let mut cols = Vec::with_capacity(48);
    for prefix in ["disp", "norm"] {
        for spec in &specs {
            cols.push(format!("{prefix}_{}", spec.column_suffix()));
        }
    }
    for k in RECURSIVE_RANGE {
        for spec in &specs {
            cols.push(format!("rec_i{k}_{}", spec.column_suffix()));
        }
    }
    cols
}

fn base_meta() -> BTreeMap<String, String> {
    let mut meta = BTreeMap::new();
    meta.insert("schema_version".into(), SCHEMA_VERSION.to_string());
    meta.insert(
        "spring_iterations".into(),
        DEFAULT_SPRING_ITERATIONS.to_string(),
    );
    meta.insert("spring_seed".into(), DEFAULT_SPRING_SEED.to_string());
    meta.insert("transformed".into(), "false".into());
    meta
}

/// Raw feature rows for every neighbor of one network. The candidate equal
/// to `partner` (when given) is labeled 1.
pub fn structural_features(
    g: &EgoNetwork,
    partner: Option<NodeId>,
) -> Result<FeatureMatrix> {
    let specs = DistanceSpec::standard_set(DEFAULT_SPRING_ITERATIONS, DEFAULT_SPRING_SEED);
    let count = g.neighbor_count();
    // Column-major staging: per spec, the absolute table, the derived
    // normalized values, and the recursive series share one context.
    let mut disp_cols: Vec<Vec<f64>> = Vec::with_capacity(specs.len());
    let mut norm_cols: Vec<Vec<f64>> = Vec::with_capacity(specs.len());
    let mut rec_cols: Vec<Vec<Vec<f64>>> = Vec::with_capacity(specs.len());
    let emb: Vec<f64> = g
        .neighbors()
        .map(|v| g.embeddedness(v).unwrap() as f64)
        .collect();
    for spec in &specs {
        let ctx = distance_context(g, spec);
        let disp = absolute_table(g, spec, &ctx)?.scores;
        let norm: Vec<f64> = disp
            .iter()
            .zip(&emb)
            .map(|(&d, &e)| if e == 0.0 { 0.0 } else { d / e })
            .collect();
        let series = recursive_series(g, spec, &ctx, *RECURSIVE_RANGE.end())?;
        let recs: Vec<Vec<f64>> = RECURSIVE_RANGE
            .map(|k| series[(k - 1) as usize].scores.clone())
            .collect();
        disp_cols.push(disp);
        norm_cols.push(norm);
        rec_cols.push(recs);
    }
    let mut rows = Vec::with_capacity(count);
    for (pos, v) in g.neighbors().enumerate() {
        let mut values = Vec::with_capacity(48);
        for cols in [&disp_cols, &norm_cols] {
            for col in cols.iter() {
                values.push(col[pos]);
            }
        }
        for ki in 0..RECURSIVE_RANGE.count() {
            for recs in &rec_cols {
                values.push(recs[ki][pos]);
            }
        }
        rows.push(FeatureRow {
            center: g.center_id().to_owned(),
            candidate: g.external_id(v).to_owned(),
            is_partner: (partner == Some(v)) as u8,
            values,
        });
    }
    Ok(FeatureMatrix {
        columns: feature_columns(),
        rows,
        groups: vec![count],
        meta: base_meta(),
    })
}

/// Raw feature rows for a whole corpus, one group per instance, in corpus
/// order. Instances are processed in parallel.
pub fn corpus_features(corpus: &[Instance]) -> Result<FeatureMatrix> {
    let per_instance: Vec<Result<FeatureMatrix>> = corpus
        .par_iter()
        .map(|inst| structural_features(inst.network(), Some(inst.partner())))
        .collect();
    let mut rows = Vec::new();
    let mut groups = Vec::with_capacity(corpus.len());
    for m in per_instance {
        let m = m?;
        groups.push(m.rows.len());
        rows.extend(m.rows);
    }
    Ok(FeatureMatrix {
        columns: feature_columns(),
        rows,
        groups,
        meta: base_meta(),
    })
}

fn group_z(values: &[f64]) -> Vec<f64> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let sd = var.sqrt();
    if sd == 0.0 {
        vec![0.0; values.len()]
    } else {
        values.iter().map(|x| (x - mean) / sd).collect()
    }
}

/// Ranks with 1 for the highest value; ties share their average rank.
fn group_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // Positions i..=j (0-based) share the average of ranks i+1..=j+1.
        let avg = (i + 1 + j + 1) as f64 / 2.0;
        for &pos in &order[i..=j] {
            ranks[pos] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Expands every raw column into raw, z-score, rank, and rank-normalized
/// variants, each computed within its neighborhood group.
pub fn transform(m: &FeatureMatrix) -> FeatureMatrix {
    let mut columns = Vec::with_capacity(m.columns.len() * 4);
    for name in &m.columns {
        columns.push(name.clone());
        columns.push(format!("{name}_z"));
        columns.push(format!("{name}_rank"));
        columns.push(format!("{name}_ranknorm"));
    }
    let mut rows: Vec<FeatureRow> = m
        .rows
        .iter()
        .map(|r| FeatureRow {
            center: r.center.clone(),
            candidate: r.candidate.clone(),
            is_partner: r.is_partner,
            values: Vec::with_capacity(columns.len()),
        })
        .collect();
    let mut start = 0;
    for &len in &m.groups {
        for col in 0..m.columns.len() {
            let raw: Vec<f64> = (start..start + len)
                .map(|r| m.rows[r].values[col])
                .collect();
            let z = group_z(&raw);
            let ranks = group_ranks(&raw);
            for (offset, row) in rows[start..start + len].iter_mut().enumerate() {
                row.values.push(raw[offset]);
                row.values.push(z[offset]);
                row.values.push(ranks[offset]);
                row.values.push(ranks[offset] / len as f64);
            }
        }
        start += len;
    }
    let mut meta = m.meta.clone();
    meta.insert("transformed".into(), "true".into());
    FeatureMatrix {
        columns,
        rows,
        groups: m.groups.clone(),
        meta,
    }
}

impl FeatureMatrix {
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// RFC 4180 CSV with header `center,candidate,is_partner,<features>`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec![
            "center".to_owned(),
            "candidate".to_owned(),
            "is_partner".to_owned(),
        ];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header).expect("csv into memory");
        let mut record = Vec::with_capacity(header.len());
        for row in &self.rows {
            record.clear();
            record.push(row.center.clone());
            record.push(row.candidate.clone());
            record.push(row.is_partner.to_string());
            record.extend(row.values.iter().map(|v| v.to_string()));
            w.write_record(&record).expect("csv into memory");
        }
        String::from_utf8(w.into_inner().expect("csv into memory")).expect("csv is utf-8")
    }

    /// Sidecar schema describing the export: column names, the distance
    /// specs behind them, iteration range, and the layout seed.
    pub fn schema_json(&self) -> String {
        let specs = DistanceSpec::standard_set(DEFAULT_SPRING_ITERATIONS, DEFAULT_SPRING_SEED);
        let value = json!({
            "schema_version": SCHEMA_VERSION,
            "id_columns": ["center", "candidate"],
            "label_column": "is_partner",
            "feature_columns": self.columns,
            "distance_specs": specs.iter().map(|s| s.label()).collect::<Vec<_>>(),
            "recursive_iterations": RECURSIVE_RANGE.collect::<Vec<_>>(),
            "spring": {
                "iterations": DEFAULT_SPRING_ITERATIONS,
                "seed": DEFAULT_SPRING_SEED,
            },
            "transformed": self.meta.get("transformed").map(|t| t == "true").unwrap_or(false),
        });
        let mut text = serde_json::to_string_pretty(&value).expect("schema serializes");
        text.push('\n');
        text
    }
}
