//! Radius neighborhood graphs and Dijkstra shortest paths.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{dist, PointCloud};

/// Undirected graph joining every pair of points at distance `<= radius`,
/// stored as compressed adjacency rows.
#[derive(Debug, Clone)]
pub struct NeighborhoodGraph {
    radius: f64,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
}

/// Exhaustive `O(n^2)` construction of the `rho`-neighborhood graph.
pub fn build_graph(cloud: &PointCloud, rho: f64) -> Result<NeighborhoodGraph> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::invalid(format!("graph radius must be positive, got {rho}")));
    }
    let n = cloud.len();
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let p = cloud.point(i);
            (0..n)
                .filter(|&j| j != i)
                .filter_map(|j| {
                    let w = dist(p, cloud.point(j));
                    (w <= rho).then_some((j, w))
                })
                .collect()
        })
        .collect();
    Ok(NeighborhoodGraph::from_rows(rho, rows))
}

impl NeighborhoodGraph {
    pub(crate) fn from_rows(radius: f64, rows: Vec<Vec<(usize, f64)>>) -> Self {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        offsets.push(0);
        let total: usize = rows.iter().map(Vec::len).sum();
        let mut targets = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        for row in rows {
            for (j, w) in row {
                targets.push(j);
                weights.push(w);
            }
            offsets.push(targets.len());
        }
        NeighborhoodGraph {
            radius,
            offsets,
            targets,
            weights,
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[i]..self.offsets[i + 1];
        self.targets[r.clone()]
            .iter()
            .copied()
            .zip(self.weights[r].iter().copied())
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    /// Sorted undirected edge list `(i, j, w)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.node_count() {
            for (j, w) in self.neighbors(i) {
                if i < j {
                    out.push((i, j, w));
                }
            }
        }
        out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        out
    }

    fn check(&self, i: usize) -> Result<()> {
        if i < self.node_count() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "node {i} out of range for a graph with {} nodes",
                self.node_count()
            )))
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
struct State {
    d: f64,
    node: usize,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed: BinaryHeap is a max-heap
        other
            .d
            .total_cmp(&self.d)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multi-source Dijkstra: `seeds` are `(node, initial distance)`.
///
/// Nodes farther than `cutoff` are left at `+inf`. If `target` is given the
/// search stops once it is settled.
pub(crate) fn dijkstra_seeded(
    graph: &NeighborhoodGraph,
    seeds: &[(usize, f64)],
    cutoff: f64,
    target: Option<usize>,
) -> Vec<f64> {
    let n = graph.node_count();
    let mut d = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    for &(s, d0) in seeds {
        if d0 < d[s] && d0 <= cutoff {
            d[s] = d0;
            heap.push(State { d: d0, node: s });
        }
    }
    while let Some(State { d: du, node: u }) = heap.pop() {
        if du > d[u] {
            continue;
        }
        if Some(u) == target {
            break;
        }
        for (v, w) in graph.neighbors(u) {
            let nd = du + w;
            if nd < d[v] && nd <= cutoff {
                d[v] = nd;
                heap.push(State { d: nd, node: v });
            }
        }
    }
    d
}

/// Single-source shortest path lengths; `+inf` for unreachable nodes.
pub fn dijkstra(graph: &NeighborhoodGraph, source: usize) -> Result<Vec<f64>> {
    graph.check(source)?;
    Ok(dijkstra_seeded(graph, &[(source, 0.0)], f64::INFINITY, None))
}

/// Shortest path length between `i` and `j`, `+inf` when disconnected.
pub fn graph_geodesic(graph: &NeighborhoodGraph, i: usize, j: usize) -> Result<f64> {
    graph.check(i)?;
    graph.check(j)?;
    if i == j {
        return Ok(0.0);
    }
    Ok(dijkstra_seeded(graph, &[(i, 0.0)], f64::INFINITY, Some(j))[j])
}

/// Row-major all-pairs table from one Dijkstra per source.
pub fn all_pairs(graph: &NeighborhoodGraph) -> Vec<f64> {
    let n = graph.node_count();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|s| dijkstra_seeded(graph, &[(s, 0.0)], f64::INFINITY, None))
        .collect();
    let mut table: Vec<f64> = rows.into_iter().flatten().collect();
    // path sums can differ in the last bit between directions
    for i in 0..n {
        for j in i + 1..n {
            let m = table[i * n + j].min(table[j * n + i]);
            table[i * n + j] = m;
            table[j * n + i] = m;
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use proptest::prelude::*;
    use rand::Rng;

    fn random_cloud(n: usize, seed: u64) -> PointCloud {
        let mut rng = seeded(seed);
        let v: Vec<f64> = (0..2 * n).map(|_| rng.gen::<f64>()).collect();
        PointCloud::from_flat(2, v).unwrap()
    }

    #[test]
    fn tiny_graphs() {
        let c = PointCloud::from_points(&[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        assert_eq!(build_graph(&c, 0.5).unwrap().edge_count(), 0);
        let g = build_graph(&c, 1.0).unwrap();
        assert_eq!(g.edges(), vec![(0, 1, 1.0)]);
        assert!(build_graph(&c, 0.0).is_err());
        assert!(build_graph(&c, -1.0).is_err());
        assert!(graph_geodesic(&g, 0, 2).is_err());
        assert!(graph_geodesic(&build_graph(&c, 0.5).unwrap(), 0, 1)
            .unwrap()
            .is_infinite());
    }

    #[test]
    fn path_graph() {
        let c = PointCloud::from_points(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]).unwrap();
        let g = build_graph(&c, 1.0).unwrap();
        assert_eq!(graph_geodesic(&g, 0, 2).unwrap(), 2.0);
        assert_eq!(graph_geodesic(&g, 1, 1).unwrap(), 0.0);
    }

    #[test]
    fn edges_match_threshold_scan() {
        let c = random_cloud(50, 4);
        let g = build_graph(&c, 0.2).unwrap();
        let mut expect = Vec::new();
        for i in 0..50 {
            for j in i + 1..50 {
                let w = dist(c.point(i), c.point(j));
                if w <= 0.2 {
                    expect.push((i, j, w));
                }
            }
        }
        assert_eq!(g.edges(), expect);
    }

    proptest! {
        #[test]
        fn geodesic_is_a_metric(seed in 0u64..1000, rho in 0.15f64..0.5) {
            let c = random_cloud(25, seed);
            let g = build_graph(&c, rho).unwrap();
            let t = all_pairs(&g);
            let n = 25;
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(t[i * n + j], t[j * n + i]);
                    prop_assert!(t[i * n + j] >= dist(c.point(i), c.point(j)) * (1.0 - 1e-12));
                    for k in 0..n {
                        prop_assert!(t[i * n + k] <= (t[i * n + j] + t[j * n + k]) * (1.0 + 1e-12));
                    }
                }
            }
        }
    }
}
