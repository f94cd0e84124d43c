//! Foundational graph model: vertices, terminals, exact edge weights,
//! contraction, and terminal-bipartition enumeration.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{GraphError, Result};
use crate::weight::Weight;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: Weight,
}

impl Edge {
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }
}

/// An undirected edge-weighted graph with an ordered list of terminals.
///
/// Parallel edges are permitted (contraction is their only source in
/// generated instances); self-loops are not. Operations never mutate:
/// they return new graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminalGraph {
    labels: Vec<String>,
    label_index: HashMap<String, VertexId>,
    terminals: Vec<VertexId>,
    edges: Vec<Edge>,
}

impl TerminalGraph {
    pub fn new() -> Self {
        TerminalGraph {
            labels: Vec::new(),
            label_index: HashMap::new(),
            terminals: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> Result<VertexId> {
        let label = label.into();
        if self.label_index.contains_key(&label) {
            return Err(GraphError::DuplicateLabel(label));
        }
        let id = self.labels.len();
        self.label_index.insert(label.clone(), id);
        self.labels.push(label);
        Ok(id)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, weight: Weight) -> Result<EdgeId> {
        if u >= self.labels.len() || v >= self.labels.len() {
            return Err(GraphError::VertexNotFound(format!("edge endpoint {}", u.max(v))));
        }
        if u == v {
            return Err(GraphError::SelfLoop(self.labels[u].clone()));
        }
        if weight.is_negative() {
            return Err(GraphError::NegativeWeight(weight.to_string()));
        }
        let id = self.edges.len();
        self.edges.push(Edge { u, v, weight });
        Ok(id)
    }

    pub fn set_terminals(&mut self, terminals: Vec<VertexId>) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &t in &terminals {
            if t >= self.labels.len() {
                return Err(GraphError::VertexNotFound(format!("terminal id {t}")));
            }
            if !seen.insert(t) {
                return Err(GraphError::InvalidTerminalSet(format!(
                    "terminal {} listed twice",
                    self.labels[t]
                )));
            }
        }
        if terminals.len() < 2 {
            return Err(GraphError::InvalidTerminalSet(format!(
                "need at least 2 terminals, got {}",
                terminals.len()
            )));
        }
        self.terminals = terminals;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn terminals(&self) -> &[VertexId] {
        &self.terminals
    }

    pub fn terminal_count(&self) -> usize {
        self.terminals.len()
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.label_index.get(label).copied()
    }

    pub fn is_terminal(&self, v: VertexId) -> bool {
        self.terminals.contains(&v)
    }

    pub fn terminal_labels(&self) -> Vec<&str> {
        self.terminals.iter().map(|&t| self.label(t)).collect()
    }

    /// Connectivity over all edges, zero-weight edges included.
    pub fn is_connected(&self) -> bool {
        if self.labels.is_empty() {
            return true;
        }
        let mut adj = vec![Vec::new(); self.labels.len()];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        let mut seen = vec![false; self.labels.len()];
        let mut queue = std::collections::VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count == self.labels.len()
    }

    /// Total weight of edges with exactly one endpoint in `side`.
    /// Both `side` and its complement must be nonempty.
    pub fn cut_value(&self, side: &BTreeSet<VertexId>) -> Result<Weight> {
        if side.is_empty() {
            return Err(GraphError::InvalidSide("side is empty".into()));
        }
        if side.len() >= self.labels.len() {
            if side.iter().any(|&v| v >= self.labels.len()) {
                return Err(GraphError::VertexNotFound("side member out of range".into()));
            }
            return Err(GraphError::InvalidSide("side covers every vertex".into()));
        }
        if let Some(&v) = side.iter().find(|&&v| v >= self.labels.len()) {
            return Err(GraphError::VertexNotFound(format!("side member {v}")));
        }
        let mut total = Weight::zero();
        for e in &self.edges {
            if side.contains(&e.u) != side.contains(&e.v) {
                total += &e.weight;
            }
        }
        Ok(total)
    }

    /// Identify `u` and `v` into one vertex. At most one of them may be a
    /// terminal; the merged vertex keeps the terminal's identity (otherwise
    /// `u`'s). Edges between the pair are dropped; parallel edges from the
    /// merged vertex to any third vertex are summed into one edge.
    pub fn merge_vertices(&self, u: VertexId, v: VertexId) -> Result<TerminalGraph> {
        if u >= self.labels.len() {
            return Err(GraphError::VertexNotFound(format!("vertex id {u}")));
        }
        if v >= self.labels.len() {
            return Err(GraphError::VertexNotFound(format!("vertex id {v}")));
        }
        if u == v {
            return Err(GraphError::IllegalMerge(
                self.labels[u].clone(),
                "itself".to_string(),
            ));
        }
        if self.is_terminal(u) && self.is_terminal(v) {
            return Err(GraphError::IllegalMerge(
                self.labels[u].clone(),
                self.labels[v].clone(),
            ));
        }
        let (keep, drop) = if self.is_terminal(v) { (v, u) } else { (u, v) };

        let mut out = TerminalGraph::new();
        // Old id -> new id; `drop` maps to `keep`'s new id.
        let mut remap = vec![usize::MAX; self.labels.len()];
        for (old, label) in self.labels.iter().enumerate() {
            if old == drop {
                continue;
            }
            remap[old] = out.add_vertex(label.clone())?;
        }
        remap[drop] = remap[keep];

        let mut merged_incident: BTreeMap<VertexId, Weight> = BTreeMap::new();
        for e in &self.edges {
            let a = remap[e.u];
            let b = remap[e.v];
            if a == b {
                continue; // internal to the merged pair
            }
            if a == remap[keep] || b == remap[keep] {
                let other = if a == remap[keep] { b } else { a };
                let entry = merged_incident.entry(other).or_insert_with(Weight::zero);
                *entry += &e.weight;
            } else {
                out.add_edge(a, b, e.weight.clone())?;
            }
        }
        for (other, weight) in merged_incident {
            out.add_edge(remap[keep], other, weight)?;
        }
        out.set_terminals(self.terminals.iter().map(|&t| remap[t]).collect())?;
        Ok(out)
    }

    /// Contract each class of `classes` (a partition of the vertex set) to a
    /// single vertex in one pass. Classes containing a terminal keep the
    /// terminal's label; otherwise the class keeps its smallest member's
    /// label. Intra-class edges are dropped; inter-class parallels summed.
    pub fn contract_classes(&self, classes: &[Vec<VertexId>]) -> Result<TerminalGraph> {
        let mut class_of = vec![usize::MAX; self.labels.len()];
        for (ci, class) in classes.iter().enumerate() {
            for &v in class {
                if v >= self.labels.len() {
                    return Err(GraphError::VertexNotFound(format!("class member {v}")));
                }
                if class_of[v] != usize::MAX {
                    return Err(GraphError::InvalidTerminalSet(format!(
                        "vertex {} in two classes",
                        self.labels[v]
                    )));
                }
                class_of[v] = ci;
            }
        }
        if class_of.contains(&usize::MAX) {
            return Err(GraphError::InvalidTerminalSet(
                "classes do not cover the vertex set".into(),
            ));
        }
        let mut out = TerminalGraph::new();
        let mut class_vertex = Vec::with_capacity(classes.len());
        for class in classes {
            let terminal_members: Vec<VertexId> =
                class.iter().copied().filter(|&v| self.is_terminal(v)).collect();
            if terminal_members.len() > 1 {
                return Err(GraphError::IllegalMerge(
                    self.labels[terminal_members[0]].clone(),
                    self.labels[terminal_members[1]].clone(),
                ));
            }
            let representative = terminal_members
                .first()
                .copied()
                .unwrap_or_else(|| *class.iter().min().expect("nonempty class"));
            class_vertex.push(out.add_vertex(self.labels[representative].clone())?);
        }
        let mut sums: BTreeMap<(usize, usize), Weight> = BTreeMap::new();
        for e in &self.edges {
            let a = class_of[e.u];
            let b = class_of[e.v];
            if a == b {
                continue;
            }
            let key = (a.min(b), a.max(b));
            *sums.entry(key).or_insert_with(Weight::zero) += &e.weight;
        }
        for ((a, b), weight) in sums {
            out.add_edge(class_vertex[a], class_vertex[b], weight)?;
        }
        let mut new_terminals = Vec::with_capacity(self.terminals.len());
        for &t in &self.terminals {
            new_terminals.push(class_vertex[class_of[t]]);
        }
        out.set_terminals(new_terminals)?;
        Ok(out)
    }
}

impl Default for TerminalGraph {
    fn default() -> Self {
        Self::new()
    }
}

/// A nontrivial terminal bipartition in canonical form: the represented side
/// `S` always contains the first terminal. The mask records membership of
/// terminals 2..k (bit j-2 for the j'th terminal, 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bipartition {
    k: usize,
    mask: u64,
}

impl Bipartition {
    pub fn new(k: usize, mask: u64) -> Result<Self> {
        if k < 2 {
            return Err(GraphError::InvalidTerminalSet(format!("k = {k} < 2")));
        }
        if k > 64 {
            return Err(GraphError::InvalidTerminalSet(format!("k = {k} > 64")));
        }
        let full = (1u64 << (k - 1)) - 1;
        if mask >= full {
            return Err(GraphError::InvalidTerminalSet(format!(
                "mask {mask} selects all terminals (not a proper bipartition)"
            )));
        }
        Ok(Bipartition { k, mask })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Is the `i`'th terminal (0-based position in the terminal list) on the
    /// canonical side `S`?
    pub fn contains(&self, terminal_index: usize) -> bool {
        if terminal_index == 0 {
            true
        } else {
            self.mask >> (terminal_index - 1) & 1 == 1
        }
    }

    /// Terminal positions on the canonical side.
    pub fn side_indices(&self) -> Vec<usize> {
        (0..self.k).filter(|&i| self.contains(i)).collect()
    }

    /// Terminal positions on the complement side.
    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.k).filter(|&i| !self.contains(i)).collect()
    }

    /// Build the canonical bipartition whose side `S` consists of the given
    /// terminal positions. The set may be given as either side; it is
    /// canonicalized so that position 0 is in `S`.
    pub fn from_side_indices(k: usize, side: &BTreeSet<usize>) -> Result<Self> {
        if side.is_empty() || side.len() >= k {
            return Err(GraphError::InvalidSide(
                "bipartition side must be nonempty and proper".into(),
            ));
        }
        if let Some(&bad) = side.iter().find(|&&i| i >= k) {
            return Err(GraphError::InvalidTerminalSet(format!(
                "terminal position {bad} out of range"
            )));
        }
        let mut mask = 0u64;
        let flip = !side.contains(&0);
        for i in 1..k {
            let inside = side.contains(&i) != flip;
            if inside {
                mask |= 1 << (i - 1);
            }
        }
        Bipartition::new(k, mask)
    }
}

/// All 2^{k-1} - 1 canonical bipartitions, ordered by ascending mask.
pub fn enumerate_bipartitions(k: usize) -> Result<Vec<Bipartition>> {
    if k < 2 {
        return Err(GraphError::InvalidTerminalSet(format!("k = {k} < 2")));
    }
    if k > 64 {
        return Err(GraphError::InvalidTerminalSet(format!("k = {k} > 64")));
    }
    let full = (1u64 << (k - 1)) - 1;
    Ok((0..full).map(|mask| Bipartition { k, mask }).collect())
}

/// Vertex set of the canonical side of `b` in `g` (just the terminals).
pub fn side_terminals(g: &TerminalGraph, b: &Bipartition) -> Vec<VertexId> {
    b.side_indices().iter().map(|&i| g.terminals()[i]).collect()
}

/// Vertex set of the complement side of `b` in `g` (just the terminals).
pub fn complement_terminals(g: &TerminalGraph, b: &Bipartition) -> Vec<VertexId> {
    b.complement_indices().iter().map(|&i| g.terminals()[i]).collect()
}
