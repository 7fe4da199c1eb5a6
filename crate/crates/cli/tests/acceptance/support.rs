//! Shared machinery for the acceptance checks: the naive-comparison
//! battery, fixture inventories, and small assertion helpers.

use std::collections::BTreeMap;

use egonet::baselines::{betweenness_table, constraint_table};
use egonet::dispersion::{
    absolute_table, normalized_table, parametric_table, recursive_dispersion, ParametricParams,
    ScoreTable,
};
use egonet::distances::{distance_context, DistanceSpec};
use egonet::fixtures;
use egonet::EgoNetwork;
use testkit::naive::{self, Model, PairDist};
use testkit::util::{community_closure, edges_of, relative_eq, spring_closure};

pub const TOL: f64 = 1e-9;

/// Every hand-built network the fixture-wide checks run over.
pub fn all_fixtures() -> Vec<(String, EgoNetwork)> {
    let mut out = vec![
        ("bridge".to_owned(), fixtures::bridge_demo()),
        ("star5".to_owned(), fixtures::star(5)),
        ("path7".to_owned(), fixtures::path(7)),
    ];
    for n in [3usize, 4, 6, 9] {
        out.push((format!("k{n}"), fixtures::complete(n)));
    }
    out
}

pub fn by_id(g: &EgoNetwork, table: &ScoreTable) -> BTreeMap<String, f64> {
    g.neighbors()
        .map(|n| {
            (
                g.external_id(n).to_owned(),
                table.score_of(g, g.external_id(n)).unwrap(),
            )
        })
        .collect()
}

fn expect(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Compares one distance's measure family against the naive model.
fn check_distance(
    g: &EgoNetwork,
    m: &Model,
    spec: &DistanceSpec,
    d: &PairDist,
    what: &str,
) -> Result<(), String> {
    let ctx = distance_context(g, spec);
    let abs = by_id(g, &absolute_table(g, spec, &ctx).unwrap());
    let norm = by_id(g, &normalized_table(g, spec, &ctx).unwrap());
    let params = ParametricParams::default();
    let par = by_id(g, &parametric_table(g, spec, &ctx, &params).unwrap());
    let rec3 = by_id(g, &recursive_dispersion(g, spec, &ctx, 3).unwrap());
    let naive_rec3 = naive::recursive(m, d, 3);
    for v in m.neighbors() {
        let nd = naive::disp(m, v, d);
        expect(relative_eq(abs[v], nd, TOL), || {
            format!("{what}: disp({v}) {} vs naive {nd}", abs[v])
        })?;
        let nn = naive::norm(m, v, d);
        expect(relative_eq(norm[v], nn, TOL), || {
            format!("{what}: norm({v}) {} vs naive {nn}", norm[v])
        })?;
        let np = naive::parametric(m, v, d, params.alpha, params.b, params.c);
        expect(relative_eq(par[v], np, TOL), || {
            format!("{what}: parametric({v}) {} vs naive {np}", par[v])
        })?;
        expect(relative_eq(rec3[v], naive_rec3[v], TOL), || {
            format!("{what}: rec3({v}) {} vs naive {}", rec3[v], naive_rec3[v])
        })?;
    }
    Ok(())
}

/// The full per-network battery: embeddedness, both baselines, and the
/// measure family under all six distances; occasionally extra recursive
/// iteration counts.
pub fn check_against_naive(g: &EgoNetwork, what: &str, extra_recs: bool) -> Result<(), String> {
    let m = Model::new(g.center_id(), &edges_of(g));
    for n in g.neighbors() {
        let id = g.external_id(n);
        expect(g.embeddedness(n).unwrap() == m.emb(id), || {
            format!("{what}: emb({id})")
        })?;
    }
    let bc = by_id(g, &betweenness_table(g));
    for (id, want) in naive::betweenness(&m) {
        expect(relative_eq(bc[&id], want, TOL), || {
            format!("{what}: betweenness({id}) {} vs naive {want}", bc[&id])
        })?;
    }
    let nc = by_id(g, &constraint_table(g));
    for (id, want) in naive::constraint(&m) {
        expect(relative_eq(nc[&id], want, TOL), || {
            format!("{what}: constraint({id}) {} vs naive {want}", nc[&id])
        })?;
    }

    for r in 2..=4 {
        let spec = DistanceSpec::threshold(r).unwrap();
        check_distance(g, &m, &spec, &PairDist::Threshold(r), &format!("{what}/t{r}"))?;
    }
    let spec = DistanceSpec::parse("component").unwrap();
    check_distance(g, &m, &spec, &PairDist::Component, &format!("{what}/comp"))?;
    let spec = DistanceSpec::parse("community").unwrap();
    let ctx = distance_context(g, &spec);
    let f = community_closure(g, &ctx);
    check_distance(g, &m, &spec, &PairDist::Shared(&f), &format!("{what}/community"))?;
    let spec = DistanceSpec::spring();
    let ctx = distance_context(g, &spec);
    let f = spring_closure(g, &ctx);
    check_distance(g, &m, &spec, &PairDist::Shared(&f), &format!("{what}/spring"))?;

    if extra_recs {
        let spec = DistanceSpec::default();
        let ctx = distance_context(g, &spec);
        for k in [1u32, 2, 5] {
            let got = by_id(g, &recursive_dispersion(g, &spec, &ctx, k).unwrap());
            let want = naive::recursive(&m, &PairDist::Threshold(3), k);
            for v in m.neighbors() {
                expect(relative_eq(got[v], want[v], TOL), || {
                    format!("{what}: rec@{k}({v}) {} vs naive {}", got[v], want[v])
                })?;
            }
        }
    }
    Ok(())
}
