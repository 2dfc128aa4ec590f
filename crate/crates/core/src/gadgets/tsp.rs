//! `φ_n → D_n → G_n`: directed Hamiltonian cycles of `D_n` encode satisfying
//! assignments of `φ_n`, and `G_n` turns them into undirected tours.

use num_traits::{One, Zero};

use super::{build_phi, BitString, CnfFormula, Digraph, Graph};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::polytope::{cor_coordinates, Point};

/// Clause visit from a chain: arcs `from → w_m` and `w_m → to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClauseDetour {
    pub var: usize,
    pub clause: usize,
    pub negated: bool,
    /// Chain position (0-based) the detour leaves from when the literal is
    /// satisfied by the traversal direction.
    pub from: usize,
    pub to: usize,
    pub arc_in: usize,
    pub arc_out: usize,
}

/// `D_n` together with the bookkeeping needed to build and read tours.
#[derive(Clone, Debug)]
pub struct TspGadget {
    pub n: usize,
    pub phi: CnfFormula,
    pub digraph: Digraph,
    /// Hubs `s_1, …, s_{N+1}` with `t_k = s_{k+1}`.
    pub hubs: Vec<usize>,
    pub chains: Vec<Vec<usize>>,
    pub clause_nodes: Vec<usize>,
    /// `forward[k][ℓ]`: arc `v_ℓ → v_{ℓ+1}`; `backward[k][ℓ]`: arc `v_{ℓ+1} → v_ℓ`.
    pub forward: Vec<Vec<usize>>,
    pub backward: Vec<Vec<usize>>,
    pub entry_left: Vec<usize>,
    pub entry_right: Vec<usize>,
    pub exit_left: Vec<usize>,
    pub exit_right: Vec<usize>,
    pub closing: usize,
    pub detours: Vec<Vec<ClauseDetour>>,
    /// Arc whose use means "variable is true": `v_2 → v_1`, or the right
    /// entry arc when the chain has a single node.
    pub true_arc: Vec<usize>,
}

/// A directed Hamiltonian cycle, starting at `s_1`, as arc ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedTour {
    pub nodes: Vec<usize>,
    pub arcs: Vec<usize>,
}

/// An undirected Hamiltonian cycle as a closed vertex walk plus the edge id
/// used between consecutive vertices (needed for multigraphs).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamCycle {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct TourEnumeration {
    pub tours: Vec<DirectedTour>,
    pub complete: bool,
}

pub fn build_d(n: usize) -> Result<TspGadget> {
    let phi = build_phi(n)?;
    let nv = phi.var_count();
    let occ = phi.occurrences();
    let mut d = Digraph::new();
    let hubs = (0..=nv)
        .map(|k| d.add_vertex(format!("s{}", k + 1)))
        .collect::<Result<Vec<_>>>()?;
    let mut chains = Vec::with_capacity(nv);
    for (k, o) in occ.iter().enumerate() {
        let len = 3 * o.len() + 1;
        chains.push(
            (0..len)
                .map(|l| d.add_vertex(format!("v{},{}", k + 1, l + 1)))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let clause_nodes = (0..phi.clauses().len())
        .map(|m| d.add_vertex(format!("w{}", m + 1)))
        .collect::<Result<Vec<_>>>()?;

    let (mut forward, mut backward) = (Vec::new(), Vec::new());
    let (mut entry_left, mut entry_right) = (Vec::new(), Vec::new());
    let (mut exit_left, mut exit_right) = (Vec::new(), Vec::new());
    let mut detours = Vec::new();
    let mut true_arc = Vec::new();
    for k in 0..nv {
        let c = &chains[k];
        let last = c.len() - 1;
        let mut f = Vec::with_capacity(last);
        let mut b = Vec::with_capacity(last);
        for l in 0..last {
            f.push(d.add_arc(c[l], c[l + 1])?);
            b.push(d.add_arc(c[l + 1], c[l])?);
        }
        entry_left.push(d.add_arc(hubs[k], c[0])?);
        entry_right.push(d.add_arc(hubs[k], c[last])?);
        exit_left.push(d.add_arc(c[0], hubs[k + 1])?);
        exit_right.push(d.add_arc(c[last], hubs[k + 1])?);
        true_arc.push(if last >= 1 { b[0] } else { entry_right[k] });
        let mut dk = Vec::new();
        for (l, &(m, negated)) in occ[k].iter().enumerate() {
            // 1-based positions 3ℓ-1 and 3ℓ are 0-based 3ℓ+1 and 3ℓ+2
            let (lo, hi) = (3 * l + 1, 3 * l + 2);
            let (from, to) = if negated { (lo, hi) } else { (hi, lo) };
            let arc_in = d.add_arc(c[from], clause_nodes[m])?;
            let arc_out = d.add_arc(clause_nodes[m], c[to])?;
            dk.push(ClauseDetour { var: k, clause: m, negated, from, to, arc_in, arc_out });
        }
        forward.push(f);
        backward.push(b);
        detours.push(dk);
    }
    let closing = d.add_arc(hubs[nv], hubs[0])?;
    Ok(TspGadget {
        n,
        phi,
        digraph: d,
        hubs,
        chains,
        clause_nodes,
        forward,
        backward,
        entry_left,
        entry_right,
        exit_left,
        exit_right,
        closing,
        detours,
        true_arc,
    })
}

/// `G_n`: node `v` of `D_n` becomes the path `v_in – v_mid – v_out` (ids
/// `3v, 3v+1, 3v+2`, edges `2v, 2v+1`); arc `a = (v, w)` becomes edge
/// `2|V(D_n)| + a` between `v_out` and `w_in`.
pub fn build_g(d: &Digraph) -> Result<Graph> {
    let mut g = Graph::new();
    for v in 0..d.vertex_count() {
        let l = d.label(v);
        g.add_vertex(format!("{l}_in"))?;
        g.add_vertex(format!("{l}_mid"))?;
        g.add_vertex(format!("{l}_out"))?;
    }
    for v in 0..d.vertex_count() {
        g.add_edge(3 * v, 3 * v + 1)?;
        g.add_edge(3 * v + 1, 3 * v + 2)?;
    }
    for &(u, w) in d.arcs() {
        g.add_edge(3 * u + 2, 3 * w)?;
    }
    Ok(g)
}

impl TspGadget {
    pub fn g_edge_of_arc(&self, arc: usize) -> usize {
        2 * self.digraph.vertex_count() + arc
    }

    /// Assignment encoded by the traversal directions of a directed tour.
    pub fn assignment(&self, tour: &DirectedTour) -> Vec<bool> {
        let used = self.arc_indicator(&tour.arcs);
        self.true_arc.iter().map(|&a| used[a]).collect()
    }

    fn arc_indicator(&self, arcs: &[usize]) -> Vec<bool> {
        let mut used = vec![false; self.digraph.arc_count()];
        for &a in arcs {
            used[a] = true;
        }
        used
    }

    /// The undirected tour of `G_n` corresponding to a directed tour.
    pub fn lift_tour(&self, tour: &DirectedTour) -> HamCycle {
        let mut vertices = Vec::with_capacity(3 * tour.nodes.len());
        let mut edges = Vec::with_capacity(3 * tour.nodes.len());
        for (&v, &a) in tour.nodes.iter().zip(&tour.arcs) {
            vertices.extend([3 * v, 3 * v + 1, 3 * v + 2]);
            edges.extend([2 * v, 2 * v + 1, self.g_edge_of_arc(a)]);
        }
        HamCycle { vertices, edges }
    }

    /// Directed tour whose chain directions follow `assignment`; each clause
    /// node is visited from the first variable that satisfies it.
    pub fn directed_tour(&self, assignment: &[bool]) -> Result<DirectedTour> {
        if assignment.len() != self.phi.var_count() {
            return Err(Error::dim("assignment length differs from variable count"));
        }
        if !self.phi.evaluate(assignment) {
            return Err(Error::input("assignment does not satisfy the formula"));
        }
        let mut owner = vec![None; self.clause_nodes.len()];
        for (k, dk) in self.detours.iter().enumerate() {
            for det in dk {
                if assignment[k] != det.negated && owner[det.clause].is_none() {
                    owner[det.clause] = Some(k);
                }
            }
        }
        let mut nodes = Vec::new();
        let mut arcs = Vec::new();
        for k in 0..self.phi.var_count() {
            let c = &self.chains[k];
            let last = c.len() - 1;
            nodes.push(self.hubs[k]);
            let value = assignment[k];
            arcs.push(if value { self.entry_right[k] } else { self.entry_left[k] });
            let detour_at = |pos: usize| {
                self.detours[k]
                    .iter()
                    .find(|det| det.from == pos && owner[det.clause] == Some(k))
            };
            let order: Vec<usize> = if value { (0..=last).rev().collect() } else { (0..=last).collect() };
            for (step, &pos) in order.iter().enumerate() {
                nodes.push(c[pos]);
                if step == last {
                    break;
                }
                if let Some(det) = detour_at(pos) {
                    arcs.push(det.arc_in);
                    nodes.push(self.clause_nodes[det.clause]);
                    arcs.push(det.arc_out);
                } else if value {
                    arcs.push(self.backward[k][pos - 1]);
                } else {
                    arcs.push(self.forward[k][pos]);
                }
            }
            arcs.push(if value { self.exit_left[k] } else { self.exit_right[k] });
        }
        nodes.push(self.hubs[self.phi.var_count()]);
        arcs.push(self.closing);
        let tour = DirectedTour { nodes, arcs };
        verify_directed_tour(&self.digraph, &tour)?;
        Ok(tour)
    }
}

/// Checks that `tour` is a directed Hamiltonian cycle of `d`.
pub fn verify_directed_tour(d: &Digraph, tour: &DirectedTour) -> Result<()> {
    let n = d.vertex_count();
    if tour.nodes.len() != n || tour.arcs.len() != n {
        return Err(Error::input(format!(
            "tour has {} nodes, graph has {n}",
            tour.nodes.len()
        )));
    }
    let mut seen = vec![false; n];
    for (i, (&v, &a)) in tour.nodes.iter().zip(&tour.arcs).enumerate() {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::input(format!("node repeated or out of range at step {i}")));
        }
        let next = tour.nodes[(i + 1) % n];
        if a >= d.arc_count() || d.arc(a) != (v, next) {
            return Err(Error::input(format!("arc at step {i} does not join consecutive nodes")));
        }
    }
    Ok(())
}

/// Checks that `c` visits every vertex of `g` exactly once and that each
/// listed edge joins consecutive vertices (cyclically).
pub fn verify_hamiltonian_cycle(g: &Graph, c: &HamCycle) -> Result<()> {
    let n = g.vertex_count();
    if n < 3 || c.vertices.len() != n || c.edges.len() != n {
        return Err(Error::input("cycle length differs from vertex count"));
    }
    let mut seen = vec![false; n];
    for &v in &c.vertices {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::input(format!("vertex {v} repeated or out of range")));
        }
    }
    for (i, &e) in c.edges.iter().enumerate() {
        let (u, w) = (c.vertices[i], c.vertices[(i + 1) % n]);
        if e >= g.edge_count() {
            return Err(Error::input(format!("edge {e} out of range")));
        }
        let (a, b) = g.edge(e);
        if !((a == u && b == w) || (a == w && b == u)) {
            return Err(Error::input(format!("edge {e} does not join step {i}")));
        }
    }
    Ok(())
}

/// Hamiltonian cycle of `G_n` encoding `C = bbᵀ`.
pub fn tour_from_assignment(b: &BitString, gadget: &TspGadget, g: &Graph) -> Result<HamCycle> {
    let n = gadget.n;
    if b.len() != n {
        return Err(Error::dim("bit string length differs from n"));
    }
    if n > 3 {
        return Err(Error::input("tour construction limited to n <= 3"));
    }
    let assignment: Vec<bool> = (0..n * n).map(|k| b.get(k / n) && b.get(k % n)).collect();
    let tour = gadget.directed_tour(&assignment)?;
    let cycle = gadget.lift_tour(&tour);
    verify_hamiltonian_cycle(g, &cycle)?;
    Ok(cycle)
}

/// Reads `y_ij` (`i ≤ j`) off the designated chain edge of `C_ij`.
pub fn project_pi_tsp(cycle: &HamCycle, gadget: &TspGadget) -> Point {
    let n = gadget.n;
    let mut used = vec![false; 2 * gadget.digraph.vertex_count() + gadget.digraph.arc_count()];
    for &e in &cycle.edges {
        used[e] = true;
    }
    cor_coordinates(n)
        .into_iter()
        .map(|(i, j)| {
            if used[gadget.g_edge_of_arc(gadget.true_arc[i * n + j])] {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// All directed Hamiltonian cycles of `d` starting at vertex 0, by
/// backtracking with degree pruning and forced moves. Parallel arcs give
/// distinct tours.
pub fn enumerate_tours_bounded(d: &Digraph, budget: &mut Budget) -> TourEnumeration {
    let n = d.vertex_count();
    let mut st = Search {
        d,
        visited: vec![false; n],
        nodes: Vec::with_capacity(n),
        arcs: Vec::with_capacity(n),
        tours: Vec::new(),
        out_of_budget: false,
    };
    if n >= 2 {
        st.visited[0] = true;
        st.nodes.push(0);
        st.extend(0, budget);
    }
    TourEnumeration {
        complete: !st.out_of_budget,
        tours: st.tours,
    }
}

struct Search<'a> {
    d: &'a Digraph,
    visited: Vec<bool>,
    nodes: Vec<usize>,
    arcs: Vec<usize>,
    tours: Vec<DirectedTour>,
    out_of_budget: bool,
}

impl Search<'_> {
    fn extend(&mut self, cur: usize, budget: &mut Budget) {
        if self.out_of_budget {
            return;
        }
        if !budget.try_tick(1) {
            self.out_of_budget = true;
            return;
        }
        let d = self.d;
        let n = d.vertex_count();
        if self.nodes.len() == n {
            for &a in d.out_arcs(cur) {
                if d.arc(a).1 == 0 {
                    let mut arcs = self.arcs.clone();
                    arcs.push(a);
                    self.tours.push(DirectedTour { nodes: self.nodes.clone(), arcs });
                }
            }
            return;
        }
        // every unvisited node needs a usable in-arc and out-arc; a node
        // whose only usable in-arcs come from `cur` must be next
        let mut forced = None;
        for u in (0..n).filter(|&u| !self.visited[u]) {
            let mut from_cur = false;
            let mut from_other = false;
            for &a in d.in_arcs(u) {
                let s = d.arc(a).0;
                if s == cur {
                    from_cur = true;
                } else if !self.visited[s] {
                    from_other = true;
                }
            }
            let has_out = d.out_arcs(u).iter().any(|&a| {
                let t = d.arc(a).1;
                !self.visited[t] || t == 0
            });
            if !(from_cur || from_other) || !has_out {
                return;
            }
            if from_cur && !from_other {
                if forced.is_some() {
                    return;
                }
                forced = Some(u);
            }
        }
        for &a in d.out_arcs(cur) {
            let w = d.arc(a).1;
            if self.visited[w] || forced.is_some_and(|f| f != w) {
                continue;
            }
            self.visited[w] = true;
            self.nodes.push(w);
            self.arcs.push(a);
            self.extend(w, budget);
            self.arcs.pop();
            self.nodes.pop();
            self.visited[w] = false;
            if self.out_of_budget {
                return;
            }
        }
    }
}
