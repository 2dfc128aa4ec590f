use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected graph with unique vertex labels. Parallel edges are allowed
/// and keep their own ids; self-loops are not.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    directed: bool,
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> Result<usize> {
        let label = label.into();
        if self.index.contains_key(&label) {
            return Err(Error::input(format!("duplicate vertex label {label:?}")));
        }
        let id = self.labels.len();
        self.index.insert(label.clone(), id);
        self.labels.push(label);
        self.adj.push(Vec::new());
        Ok(id)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize> {
        if u == v {
            return Err(Error::input("self-loop"));
        }
        if u >= self.labels.len() || v >= self.labels.len() {
            return Err(Error::input("edge endpoint out of range"));
        }
        let id = self.edges.len();
        self.edges.push((u, v));
        self.adj[u].push((v, id));
        self.adj[v].push((u, id));
        Ok(id)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new();
        for i in 0..n {
            g.add_vertex((i + 1).to_string()).expect("fresh label");
        }
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j).expect("distinct endpoints");
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::new();
        for i in 0..n {
            g.add_vertex((i + 1).to_string()).expect("fresh label");
        }
        for i in 0..n {
            g.add_edge(i, (i + 1) % n).expect("n >= 3 gives distinct endpoints");
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// `(neighbor, edge id)` pairs.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].iter().any(|&(w, _)| w == v)
    }

    pub fn is_stable(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && !self.adjacent(u, v)))
    }

    fn neighbor_masks(&self) -> Vec<u64> {
        assert!(self.vertex_count() <= 64, "bitmask enumeration needs <= 64 vertices");
        (0..self.vertex_count())
            .map(|v| self.adj[v].iter().fold(0u64, |m, &(w, _)| m | 1 << w))
            .collect()
    }

    /// All stable sets (including the empty set), each sorted, ordered by
    /// bitmask with vertex 0 least significant.
    pub fn stable_sets(&self) -> Vec<Vec<usize>> {
        let nb = self.neighbor_masks();
        let n = self.vertex_count();
        let mut masks = Vec::new();
        fn rec(v: usize, n: usize, cur: u64, blocked: u64, nb: &[u64], out: &mut Vec<u64>) {
            if v == n {
                out.push(cur);
                return;
            }
            rec(v + 1, n, cur, blocked, nb, out);
            if blocked >> v & 1 == 0 {
                rec(v + 1, n, cur | 1 << v, blocked | nb[v], nb, out);
            }
        }
        rec(0, n, 0, 0, &nb, &mut masks);
        masks.sort_unstable();
        masks
            .into_iter()
            .map(|m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
            .collect()
    }

    /// Stable sets of maximum cardinality, in the order of
    /// [`Graph::stable_sets`].
    pub fn maximum_stable_sets(&self) -> Vec<Vec<usize>> {
        let all = self.stable_sets();
        let alpha = all.iter().map(Vec::len).max().unwrap_or(0);
        all.into_iter().filter(|s| s.len() == alpha).collect()
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph {name} {{\n");
        for l in &self.labels {
            let _ = writeln!(out, "  \"{l}\";");
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "  \"{}\" -- \"{}\";", self.labels[u], self.labels[v]);
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GraphRepr {
            directed: false,
            vertices: self.labels.clone(),
            edges: self.edges.clone(),
        })
        .expect("plain data")
    }
}

/// Directed multigraph with unique vertex labels and arc ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Digraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    arcs: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> Result<usize> {
        let label = label.into();
        if self.index.contains_key(&label) {
            return Err(Error::input(format!("duplicate vertex label {label:?}")));
        }
        let id = self.labels.len();
        self.index.insert(label.clone(), id);
        self.labels.push(label);
        self.out.push(Vec::new());
        self.inc.push(Vec::new());
        Ok(id)
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<usize> {
        if u == v {
            return Err(Error::input("self-loop"));
        }
        if u >= self.labels.len() || v >= self.labels.len() {
            return Err(Error::input("arc endpoint out of range"));
        }
        let id = self.arcs.len();
        self.arcs.push((u, v));
        self.out[u].push(id);
        self.inc[v].push(id);
        Ok(id)
    }

    /// Directed cycle `0 → 1 → … → n-1 → 0`.
    pub fn cycle(n: usize) -> Self {
        let mut d = Self::new();
        for i in 0..n {
            d.add_vertex(i.to_string()).expect("fresh label");
        }
        for i in 0..n {
            d.add_arc(i, (i + 1) % n).expect("n >= 2");
        }
        d
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn arc(&self, id: usize) -> (usize, usize) {
        self.arcs[id]
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn out_arcs(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_arcs(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph {name} {{\n");
        for l in &self.labels {
            let _ = writeln!(out, "  \"{l}\";");
        }
        for (id, &(u, v)) in self.arcs.iter().enumerate() {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [id=\"a{id}\"];",
                self.labels[u], self.labels[v]
            );
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GraphRepr {
            directed: true,
            vertices: self.labels.clone(),
            edges: self.arcs.clone(),
        })
        .expect("plain data")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_unique_and_no_loops() {
        let mut g = Graph::new();
        let a = g.add_vertex("a").unwrap();
        assert!(g.add_vertex("a").is_err());
        assert!(g.add_edge(a, a).is_err());
        let mut d = Digraph::new();
        let x = d.add_vertex("x").unwrap();
        let y = d.add_vertex("y").unwrap();
        assert!(d.add_arc(x, x).is_err());
        let a1 = d.add_arc(x, y).unwrap();
        let a2 = d.add_arc(x, y).unwrap();
        assert_ne!(a1, a2);
        assert_eq!(d.out_arcs(x), &[a1, a2]);
    }

    #[test]
    fn stable_sets_of_small_graphs() {
        let k3 = Graph::complete(3);
        assert_eq!(k3.stable_sets(), vec![vec![], vec![0], vec![1], vec![2]]);
        let c5 = Graph::cycle(5);
        assert_eq!(c5.stable_sets().len(), 11);
        assert_eq!(c5.maximum_stable_sets().len(), 5);
        for s in c5.stable_sets() {
            assert!(c5.is_stable(&s));
        }
    }

    #[test]
    fn dot_export() {
        let dot = Graph::complete(2).to_dot("K2");
        assert_eq!(dot, "graph K2 {\n  \"1\";\n  \"2\";\n  \"1\" -- \"2\";\n}\n");
    }
}
