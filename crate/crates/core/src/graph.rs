//! Undirected simple connected communication graphs.
//!
//! All engines run on a [`Graph`]: agents are vertices `0..J`, communication
//! links are undirected edges. Construction rejects self-loops, duplicate
//! edges, and disconnected topologies, so every `Graph` in circulation
//! satisfies the full invariant set (symmetry, simplicity, connectivity,
//! degree sum = 2·|E|).

use std::collections::VecDeque;
use std::fs;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Retry budget for the rejection-sampled connected random graph.
const GENERATION_RETRIES: usize = 1000;

/// Undirected simple connected graph over agents `0..num_agents`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    num_agents: usize,
    /// Canonical edge list: each pair `(i, j)` has `i < j`, sorted ascending.
    edges: Vec<(usize, usize)>,
    /// Sorted neighbor lists; `adjacency[i]` never contains `i`.
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an explicit edge list, validating every invariant.
    pub fn from_edges(num_agents: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if num_agents == 0 {
            return Err(Error::InvalidSize(
                "a graph needs at least one agent".to_string(),
            ));
        }
        let mut canonical: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(Error::InvalidParameter {
                    field: "edges".to_string(),
                    message: format!("self-loop at agent {a}"),
                });
            }
            if a >= num_agents || b >= num_agents {
                return Err(Error::InvalidParameter {
                    field: "edges".to_string(),
                    message: format!("edge ({a}, {b}) references an agent >= {num_agents}"),
                });
            }
            canonical.push((a.min(b), a.max(b)));
        }
        canonical.sort_unstable();
        if canonical.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter {
                field: "edges".to_string(),
                message: "duplicate edge".to_string(),
            });
        }

        let mut adjacency = vec![Vec::new(); num_agents];
        for &(i, j) in &canonical {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        let graph = Graph {
            num_agents,
            edges: canonical,
            adjacency,
        };
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        debug_assert_eq!(
            graph.adjacency.iter().map(Vec::len).sum::<usize>(),
            2 * graph.edges.len()
        );
        Ok(graph)
    }

    /// Linear (path) topology: edges `(i, i+1)` for `0 <= i < J-1`.
    pub fn path(num_agents: usize) -> Result<Self> {
        if num_agents == 0 {
            return Err(Error::InvalidSize(
                "path graph needs at least one agent".to_string(),
            ));
        }
        let edges: Vec<(usize, usize)> = (0..num_agents.saturating_sub(1))
            .map(|i| (i, i + 1))
            .collect();
        Graph::from_edges(num_agents, &edges)
    }

    /// Erdős–Rényi draw with edge probability `target_avg_degree / (J-1)`,
    /// redrawn until connected. Deterministic for a fixed seed.
    pub fn random_connected(
        num_agents: usize,
        target_avg_degree: f64,
        seed: u64,
    ) -> Result<Self> {
        if num_agents < 2 {
            return Err(Error::InvalidSize(
                "random connected graph needs at least two agents".to_string(),
            ));
        }
        let j = num_agents as f64;
        let min_degree = 2.0 * (j - 1.0) / j; // spanning tree
        let max_degree = j - 1.0; // complete graph
        if !target_avg_degree.is_finite()
            || target_avg_degree < min_degree
            || target_avg_degree > max_degree
        {
            return Err(Error::parameter(
                "target_avg_degree",
                format!(
                    "{target_avg_degree} outside the satisfiable range [{min_degree}, {max_degree}] for J={num_agents}"
                ),
            ));
        }
        let edge_prob = target_avg_degree / (j - 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..GENERATION_RETRIES {
            let mut edges = Vec::new();
            for i in 0..num_agents {
                for k in (i + 1)..num_agents {
                    if rng.random::<f64>() < edge_prob {
                        edges.push((i, k));
                    }
                }
            }
            // Simplicity is structural here (each pair drawn once); only
            // connectivity can fail.
            match Graph::from_edges(num_agents, &edges) {
                Ok(graph) => return Ok(graph),
                Err(Error::Disconnected) => continue,
                Err(other) => return Err(other),
            }
        }
        Err(Error::GenerationFailure {
            attempts: GENERATION_RETRIES,
            agents: num_agents,
            edge_prob,
        })
    }

    pub fn num_agents(&self) -> usize {
        self.num_agents
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list: `(i, j)` with `i < j`, ascending.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted neighbors of `agent`; never contains `agent` itself.
    pub fn neighbors(&self, agent: usize) -> &[usize] {
        &self.adjacency[agent]
    }

    pub fn degree(&self, agent: usize) -> usize {
        self.adjacency[agent].len()
    }

    pub fn average_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.num_agents as f64
    }

    fn bfs_distances(&self, start: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_agents];
        dist[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].expect("visited");
            for &w in &self.adjacency[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    fn is_connected(&self) -> bool {
        self.bfs_distances(0).iter().all(Option::is_some)
    }

    /// Longest shortest path from `agent` to any other agent.
    pub fn eccentricity(&self, agent: usize) -> Result<usize> {
        let dist = self.bfs_distances(agent);
        dist.iter()
            .map(|d| d.ok_or(Error::Disconnected))
            .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }

    /// Maximum eccentricity over all agents (all-pairs BFS).
    pub fn diameter(&self) -> Result<usize> {
        (0..self.num_agents).try_fold(0, |acc, v| self.eccentricity(v).map(|e| acc.max(e)))
    }

    /// Serializes to the edge-list text format: first line `J E`, then `E`
    /// lines `i j` with `i < j`, ascending, 0-based, `\n` terminated.
    pub fn to_edge_list_string(&self) -> String {
        let mut out = format!("{} {}\n", self.num_agents, self.edges.len());
        for &(i, j) in &self.edges {
            out.push_str(&format!("{i} {j}\n"));
        }
        out
    }

    /// Parses the edge-list text format produced by
    /// [`Graph::to_edge_list_string`]. The `name` is used in error messages.
    pub fn from_edge_list_str(text: &str, name: &str) -> Result<Self> {
        let malformed = |message: String| Error::MalformedFile {
            path: name.to_string(),
            message,
        };
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| malformed("empty file".to_string()))?;
        let mut parts = header.split_whitespace();
        let num_agents: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| malformed(format!("bad header `{header}` (expected `J E`)")))?;
        let num_edges: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| malformed(format!("bad header `{header}` (expected `J E`)")))?;
        if parts.next().is_some() {
            return Err(malformed(format!("trailing tokens in header `{header}`")));
        }

        let mut edges = Vec::with_capacity(num_edges);
        for (n, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let i: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| malformed(format!("bad edge line {}: `{line}`", n + 2)))?;
            let j: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| malformed(format!("bad edge line {}: `{line}`", n + 2)))?;
            if parts.next().is_some() {
                return Err(malformed(format!("trailing tokens on line {}", n + 2)));
            }
            if i >= j {
                return Err(malformed(format!(
                    "edge ({i}, {j}) on line {} must have i < j",
                    n + 2
                )));
            }
            edges.push((i, j));
        }
        if edges.len() != num_edges {
            return Err(malformed(format!(
                "header promised {num_edges} edges, found {}",
                edges.len()
            )));
        }
        Graph::from_edges(num_agents, &edges)
    }

    /// Writes the edge-list file format to `path`.
    pub fn write_edge_list(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_edge_list_string()).map_err(|e| Error::io(path, e))
    }

    /// Reads a graph from an edge-list file.
    pub fn read_edge_list(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Graph::from_edge_list_str(&text, &path.display().to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent connectivity check: BFS written against the raw edge
    /// list, not the adjacency structure under test.
    fn bfs_reaches_all(num_agents: usize, edges: &[(usize, usize)]) -> bool {
        let mut adj = vec![Vec::new(); num_agents];
        for &(i, j) in edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut seen = vec![false; num_agents];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Brute-force all-pairs BFS diameter over the raw edge list.
    fn brute_force_diameter(num_agents: usize, edges: &[(usize, usize)]) -> usize {
        let mut adj = vec![Vec::new(); num_agents];
        for &(i, j) in edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut best = 0;
        for start in 0..num_agents {
            let mut dist = vec![usize::MAX; num_agents];
            dist[start] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            best = best.max(*dist.iter().max().unwrap());
        }
        best
    }

    #[test]
    fn path_two_agents() {
        let g = Graph::path(2).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(g.degree(0), 1);
        assert_eq!(g.degree(1), 1);
    }

    #[test]
    fn path_twenty_agents() {
        let g = Graph::path(20).unwrap();
        assert_eq!(g.num_edges(), 19);
        assert_eq!(g.degree(0), 1);
        assert_eq!(g.degree(19), 1);
        for i in 1..19 {
            assert_eq!(g.degree(i), 2);
        }
        assert_eq!(g.diameter().unwrap(), 19);
    }

    #[test]
    fn path_single_agent_is_connected() {
        let g = Graph::path(1).unwrap();
        assert_eq!(g.num_edges(), 0);
        assert_eq!(g.diameter().unwrap(), 0);
    }

    #[test]
    fn path_zero_agents_rejected() {
        assert!(matches!(Graph::path(0), Err(Error::InvalidSize(_))));
    }

    #[test]
    fn random_two_agents_is_the_single_edge() {
        let g = Graph::random_connected(2, 1.0, 99).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn random_full_degree_is_complete() {
        let g = Graph::random_connected(5, 4.0, 3).unwrap();
        assert_eq!(g.num_edges(), 10);
        assert_eq!(g.diameter().unwrap(), 1);
    }

    #[test]
    fn random_degree_bounds_enforced() {
        assert!(matches!(
            Graph::random_connected(20, 0.5, 1),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(matches!(
            Graph::random_connected(20, 19.5, 1),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(matches!(
            Graph::random_connected(1, 0.0, 1),
            Err(Error::InvalidSize(_))
        ));
    }

    #[test]
    fn random_twenty_seed_seven_is_valid() {
        let g = Graph::random_connected(20, 4.0, 7).unwrap();
        assert!(bfs_reaches_all(g.num_agents(), g.edges()));
        let degree_sum: usize = (0..20).map(|i| g.degree(i)).sum();
        assert_eq!(degree_sum, 2 * g.num_edges());
        let avg = g.average_degree();
        assert!((3.0..=5.0).contains(&avg), "average degree {avg}");
    }

    #[test]
    fn random_is_reproducible() {
        let a = Graph::random_connected(20, 4.0, 7).unwrap();
        let b = Graph::random_connected(20, 4.0, 7).unwrap();
        assert_eq!(a.edges(), b.edges());
        let c = Graph::random_connected(20, 4.0, 8).unwrap();
        assert_ne!(a.edges(), c.edges());
    }

    #[test]
    fn diameter_matches_brute_force_oracle() {
        for seed in [7, 11, 42] {
            let g = Graph::random_connected(20, 4.0, seed).unwrap();
            assert_eq!(
                g.diameter().unwrap(),
                brute_force_diameter(g.num_agents(), g.edges())
            );
        }
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(matches!(
            Graph::from_edges(3, &[(0, 0)]),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(matches!(
            Graph::from_edges(3, &[(0, 1), (1, 0)]),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(matches!(
            Graph::from_edges(3, &[(0, 3)]),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(matches!(
            Graph::from_edges(4, &[(0, 1), (2, 3)]),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn edge_list_round_trip_is_bit_exact() {
        let g = Graph::random_connected(20, 4.0, 7).unwrap();
        let text = g.to_edge_list_string();
        let parsed = Graph::from_edge_list_str(&text, "test").unwrap();
        assert_eq!(parsed, g);
        assert_eq!(parsed.to_edge_list_string(), text);
    }

    #[test]
    fn edge_list_parse_errors() {
        assert!(Graph::from_edge_list_str("", "t").is_err());
        assert!(Graph::from_edge_list_str("3\n", "t").is_err());
        assert!(Graph::from_edge_list_str("3 1\n1 0\n", "t").is_err()); // i >= j
        assert!(Graph::from_edge_list_str("3 2\n0 1\n", "t").is_err()); // count mismatch
        assert!(Graph::from_edge_list_str("3 2\n0 1\n0 1\n", "t").is_err()); // duplicate
        assert!(Graph::from_edge_list_str("4 2\n0 1\n2 3\n", "t").is_err()); // disconnected
    }

    proptest! {
        /// Every generated graph satisfies simplicity, symmetry (via the
        /// canonical representation), connectivity, and degree-sum = 2E.
        #[test]
        fn generated_graphs_hold_invariants(
            num_agents in 2usize..16,
            seed in 0u64..500,
        ) {
            let target = 2.0 * (num_agents as f64 - 1.0) / num_agents as f64 + 0.5;
            let target = target.min(num_agents as f64 - 1.0);
            let g = Graph::random_connected(num_agents, target, seed).unwrap();
            prop_assert!(bfs_reaches_all(g.num_agents(), g.edges()));
            let degree_sum: usize = (0..num_agents).map(|i| g.degree(i)).sum();
            prop_assert_eq!(degree_sum, 2 * g.num_edges());
            for i in 0..num_agents {
                prop_assert!(!g.neighbors(i).contains(&i));
                for &j in g.neighbors(i) {
                    prop_assert!(g.neighbors(j).contains(&i));
                }
            }
        }
    }
}
