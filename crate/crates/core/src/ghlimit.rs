//! Graph approximations of the collapsing distances `d_t` on a Hopf
//! suspension and the distortion of the projection to the circle.
//!
//! The flow metric is used in closed form,
//! `g(t) = α(t)(g₀ - h_T) + h_T` with `g₀ = 4|dx|²/r²` and
//! `h_T = θ⊗θ + Jθ⊗Jθ`, `θ = -d log r²`.

use petgraph::algo::{connected_components, dijkstra};
use petgraph::graph::{NodeIndex, UnGraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{collapse_time, FlowState};
use crate::models::{apply_j, HermitianModel, ModelKind};

pub const MAX_SOURCES: usize = 256;
pub const MESH_FACTOR: f64 = 2.0;

/// `v^T g(t)_x v` for the Hopf flow metric.
pub fn flow_quadratic_form(alpha: f64, x: &[f64], v: &[f64]) -> f64 {
    let r2: f64 = x.iter().map(|a| a * a).sum();
    let theta: Vec<f64> = x.iter().map(|a| -2.0 * a / r2).collect();
    let j_theta = apply_j(&theta);
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(p, q)| p * q).sum() };
    let g0 = 4.0 * dot(v, v) / r2;
    let h = dot(&theta, v).powi(2) + dot(&j_theta, v).powi(2);
    alpha * (g0 - h) + h
}

/// Midpoint-rule `g(t)` length of the chart segment from `a` to `b`.
pub fn segment_length(alpha: f64, a: &[f64], b: &[f64]) -> f64 {
    let mid: Vec<f64> = a.iter().zip(b).map(|(p, q)| 0.5 * (p + q)).collect();
    let v: Vec<f64> = a.iter().zip(b).map(|(p, q)| q - p).collect();
    flow_quadratic_form(alpha, &mid, &v).sqrt()
}

/// `F = -log r²`, so that `dF = θ`.
pub fn circle_coordinate(x: &[f64]) -> f64 {
    -x.iter().map(|a| a * a).sum::<f64>().ln()
}

/// `F_c = exp(2πi F/λ)` returned as an angle in `[0, 2π)`.
pub fn circle_angle(x: &[f64], lambda: f64) -> f64 {
    (std::f64::consts::TAU * circle_coordinate(x) / lambda).rem_euclid(std::f64::consts::TAU)
}

/// Distance on the circle of length `λ`.
pub fn circle_distance(f1: f64, f2: f64, lambda: f64) -> f64 {
    let d = (f1 - f2).rem_euclid(lambda);
    d.min(lambda - d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    /// The edge joins `a` to `A^deck b`.
    pub deck: i32,
}

#[derive(Clone, Debug)]
pub struct SampleCloud {
    model: HermitianModel,
    points: Vec<Vec<f64>>,
    edges: Vec<Edge>,
    k: usize,
    seed: u64,
}

fn deck_power(model: &HermitianModel, p: &[f64], j: i32) -> Vec<f64> {
    let s = model.suspension();
    match j {
        0 => p.to_vec(),
        1 => s.apply(p),
        -1 => s.apply_inverse(p),
        _ => unreachable!("only nearest deck images are used"),
    }
}

/// Sample `count` points of the fundamental domain and build the
/// symmetric `k`-nearest-neighbour graph, including deck-glued edges.
pub fn sample_cloud(
    model: &HermitianModel,
    c: f64,
    count: usize,
    k: usize,
    seed: u64,
) -> Result<SampleCloud> {
    if !matches!(model.kind(), ModelKind::Hopf { .. }) {
        return Err(Error::UnsupportedOperation(
            "distance graphs are implemented for Hopf models only".into(),
        ));
    }
    if count < 100 || k < 8 {
        return Err(Error::Usage(format!(
            "need at least 100 samples and k >= 8 (got {count}, {k})"
        )));
    }
    if k >= count {
        return Err(Error::Usage(format!("k = {k} must be below the sample count")));
    }
    let unitary = model.suspension().unitary().to_vec();
    let model = model.with_suspension(c, Some(unitary))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<f64>> = (0..count).map(|_| model.sample_point(&mut rng)).collect();

    let neighbours: Vec<Vec<(usize, i32)>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut cand: Vec<(f64, usize, i32)> = Vec::with_capacity(count - 1);
            for (jdx, q) in points.iter().enumerate() {
                if jdx == i {
                    continue;
                }
                let best = (-1..=1)
                    .map(|j| {
                        let img = deck_power(&model, q, j);
                        (segment_length(1.0, &points[i], &img), j)
                    })
                    .min_by(|a, b| a.0.total_cmp(&b.0))
                    .expect("three images");
                cand.push((best.0, jdx, best.1));
            }
            cand.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0));
            let mut out: Vec<(usize, i32)> = cand[..k].iter().map(|c| (c.1, c.2)).collect();
            out.sort_unstable();
            out
        })
        .collect();

    let mut edges: Vec<Edge> = Vec::new();
    for (i, list) in neighbours.iter().enumerate() {
        for &(j, deck) in list {
            let e = if i < j {
                Edge { a: i, b: j, deck }
            } else {
                Edge { a: j, b: i, deck: -deck }
            };
            edges.push(e);
        }
    }
    edges.sort_unstable_by_key(|e| (e.a, e.b, e.deck));
    edges.dedup();

    let mut g = UnGraph::<(), ()>::with_capacity(count, edges.len());
    for _ in 0..count {
        g.add_node(());
    }
    for e in &edges {
        g.add_edge(NodeIndex::new(e.a), NodeIndex::new(e.b), ());
    }
    let components = connected_components(&g);
    if components != 1 {
        return Err(Error::DisconnectedGraph { components });
    }
    Ok(SampleCloud {
        model,
        points,
        edges,
        k,
        seed,
    })
}

impl SampleCloud {
    pub fn model(&self) -> &HermitianModel {
        &self.model
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn c(&self) -> f64 {
        self.model.suspension().c()
    }

    /// Circle length `λ = log(c²)`.
    pub fn lambda(&self) -> f64 {
        2.0 * self.c().ln()
    }

    pub fn deck_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.deck != 0).count()
    }

    pub fn edge_weights(&self, alpha: f64) -> Vec<f64> {
        self.edges
            .iter()
            .map(|e| {
                let img = deck_power(&self.model, &self.points[e.b], e.deck);
                segment_length(alpha, &self.points[e.a], &img)
            })
            .collect()
    }

    pub fn circle_values(&self) -> Vec<f64> {
        self.points.iter().map(|p| circle_coordinate(p)).collect()
    }
}

/// Shortest-path distances from a set of sources to every vertex.
#[derive(Clone, Debug)]
pub struct DistanceTable {
    pub t: f64,
    pub sources: Vec<usize>,
    /// `dist[s][v]` for source index `s` into `sources`.
    pub dist: Vec<Vec<f64>>,
    pub max_edge: f64,
}

impl DistanceTable {
    pub fn mesh_eps(&self) -> f64 {
        MESH_FACTOR * self.max_edge
    }

    pub fn diameter(&self) -> f64 {
        self.dist
            .iter()
            .flat_map(|row| row.iter())
            .fold(0.0, |a: f64, &b| a.max(b))
    }
}

pub fn graph_distance(cloud: &SampleCloud, t: f64) -> Result<DistanceTable> {
    let state = FlowState::new(cloud.model.n(), t)?;
    let weights = cloud.edge_weights(state.alpha);
    let count = cloud.points.len();
    let mut g = UnGraph::<(), f64>::with_capacity(count, weights.len());
    for _ in 0..count {
        g.add_node(());
    }
    for (e, w) in cloud.edges.iter().zip(&weights) {
        g.add_edge(NodeIndex::new(e.a), NodeIndex::new(e.b), *w);
    }
    let sources: Vec<usize> = (0..count.min(MAX_SOURCES)).collect();
    let dist = sources
        .par_iter()
        .map(|&s| {
            let map = dijkstra(&g, NodeIndex::new(s), None, |e| *e.weight());
            (0..count)
                .map(|v| map.get(&NodeIndex::new(v)).copied().unwrap_or(f64::INFINITY))
                .collect()
        })
        .collect();
    Ok(DistanceTable {
        t,
        sources,
        dist,
        max_edge: weights.iter().fold(0.0, |a: f64, &b| a.max(b)),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistortionEstimate {
    pub t: f64,
    /// `max |d_t(p,q) - d_S¹(F_c p, F_c q)|` over sampled pairs.
    pub distortion: f64,
    /// `max (d_t - d_S¹)`.
    pub max_excess: f64,
    /// `min (d_t - d_S¹)`, bounded below by `-mesh_eps` for a submersion.
    pub min_excess: f64,
    pub mesh_eps: f64,
}

pub fn distortion_from_table(cloud: &SampleCloud, table: &DistanceTable) -> DistortionEstimate {
    let f = cloud.circle_values();
    let lambda = cloud.lambda();
    let mut max_abs: f64 = 0.0;
    let mut max_ex = f64::NEG_INFINITY;
    let mut min_ex = f64::INFINITY;
    for (row, &s) in table.dist.iter().zip(&table.sources) {
        for (v, &d) in row.iter().enumerate() {
            let ex = d - circle_distance(f[s], f[v], lambda);
            max_abs = max_abs.max(ex.abs());
            max_ex = max_ex.max(ex);
            min_ex = min_ex.min(ex);
        }
    }
    DistortionEstimate {
        t: table.t,
        distortion: max_abs,
        max_excess: max_ex,
        min_excess: min_ex,
        mesh_eps: table.mesh_eps(),
    }
}

pub fn distortion_estimate(cloud: &SampleCloud, t: f64) -> Result<DistortionEstimate> {
    Ok(distortion_from_table(cloud, &graph_distance(cloud, t)?))
}

/// One output row of the collapse check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GhRow {
    pub t: f64,
    pub distortion: f64,
    /// `C₀(1 - nt/2) + ε_mesh`.
    pub bound_rhs: f64,
    pub mesh_eps: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GhReport {
    pub model: String,
    pub c: f64,
    pub samples: usize,
    pub k: usize,
    pub seed: u64,
    /// Graph diameter at `t = 0` from the sampled sources.
    pub c0: f64,
    pub rows: Vec<GhRow>,
    pub min_excess: Vec<f64>,
}

/// Distortion rows at each time with the bound `C₀(1 - nt/2) + ε_mesh`.
pub fn collapse_report(cloud: &SampleCloud, times: &[f64]) -> Result<GhReport> {
    let n = cloud.model.n() as f64;
    let c0 = graph_distance(cloud, 0.0)?.diameter();
    let mut rows = Vec::with_capacity(times.len());
    let mut min_excess = Vec::with_capacity(times.len());
    for &t in times {
        let est = distortion_estimate(cloud, t)?;
        let bound_rhs = c0 * (1.0 - 0.5 * n * t) + est.mesh_eps;
        rows.push(GhRow {
            t,
            distortion: est.distortion,
            bound_rhs,
            mesh_eps: est.mesh_eps,
            pass: est.max_excess <= bound_rhs && est.min_excess >= -est.mesh_eps,
        });
        min_excess.push(est.min_excess);
    }
    Ok(GhReport {
        model: cloud.model.descriptor(),
        c: cloud.c(),
        samples: cloud.points.len(),
        k: cloud.k,
        seed: cloud.seed,
        c0,
        rows,
        min_excess,
    })
}

/// `distortion/(T - t)` for each row.
pub fn scaling_ratios(report: &GhReport, n: usize) -> Vec<f64> {
    let big_t = collapse_time(n);
    report.rows.iter().map(|r| r.distortion / (big_t - r.t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_matches_model_metric() {
        let m = HermitianModel::hopf(2).unwrap();
        let x = [0.7, -0.3, 0.4, 1.1];
        let v = [0.2, 0.5, -0.9, 0.3];
        for t in [0.0, 0.3, 0.8] {
            let fm = crate::flow::flow_metric(&m, t).unwrap();
            let g = fm.real_metric_field().value_at(&x);
            let direct: f64 = (0..4).map(|a| (0..4).map(|b| v[a] * g[a][b] * v[b]).sum::<f64>()).sum();
            let alpha = 1.0 - t;
            assert!((direct - flow_quadratic_form(alpha, &x, &v)).abs() < 1e-12);
        }
    }

    #[test]
    fn deck_images_share_circle_point() {
        let m = HermitianModel::hopf(2).unwrap();
        let m = m.with_suspension(std::f64::consts::E, None).unwrap();
        let lambda = 2.0;
        let x = [0.7, -0.3, 0.4, 1.1];
        let y = m.suspension().apply(&x);
        let d = circle_distance(circle_coordinate(&x), circle_coordinate(&y), lambda);
        assert!(d < 1e-12);
        let (a, b) = (circle_angle(&x, lambda), circle_angle(&y, lambda));
        let gap = (a - b).abs();
        assert!(gap.min(std::f64::consts::TAU - gap) < 1e-12);
    }

    #[test]
    fn small_cloud_properties() {
        let m = HermitianModel::hopf(2).unwrap();
        let cloud = sample_cloud(&m, std::f64::consts::E, 150, 10, 3).unwrap();
        let again = sample_cloud(&m, std::f64::consts::E, 150, 10, 3).unwrap();
        assert_eq!(cloud.points(), again.points());
        assert_eq!(cloud.edges(), again.edges());
        assert!(cloud.deck_edge_count() > 0);
        assert!(cloud.edge_weights(1.0).iter().all(|w| *w > 0.0));

        let d0 = graph_distance(&cloud, 0.0).unwrap();
        let d3 = graph_distance(&cloud, 0.3).unwrap();
        let f = cloud.circle_values();
        for (s, row) in d0.sources.iter().zip(&d0.dist) {
            assert_eq!(row[*s], 0.0);
        }
        // sources are 0..150 here, so the table is square
        for a in 0..150 {
            for b in 0..150 {
                assert!((d0.dist[a][b] - d0.dist[b][a]).abs() < 1e-12);
                assert!(d3.dist[a][b] <= d0.dist[a][b] + 1e-12);
                for m in [7usize, 42] {
                    assert!(d0.dist[a][b] <= d0.dist[a][m] + d0.dist[m][b] + 1e-12);
                }
                let lb = circle_distance(f[a], f[b], cloud.lambda()) - d3.mesh_eps();
                assert!(d3.dist[a][b] >= lb);
            }
        }
        let e = distortion_from_table(&cloud, &d3);
        assert!(e.distortion < distortion_from_table(&cloud, &d0).distortion);
    }

    #[test]
    fn rejects_bad_requests() {
        let m = HermitianModel::hopf(2).unwrap();
        assert!(sample_cloud(&m, 2.0, 50, 10, 1).is_err());
        assert!(sample_cloud(&m, 2.0, 200, 4, 1).is_err());
        let lens = HermitianModel::lens(1, 2).unwrap();
        assert!(sample_cloud(&lens, 2.0, 200, 10, 1).is_err());
    }
}
