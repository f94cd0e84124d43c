//! Exact minimum terminal cuts.
//!
//! Max-flow by shortest (breadth-first) augmenting paths over exact
//! rationals, with the two terminal sides contracted to a super-source and
//! super-sink. The canonical cut is the source-minimal one: its source side
//! is the set of residually reachable vertices. A brute-force side
//! enumeration serves as the independent oracle.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{GraphError, Result};
use crate::graph::{
    complement_terminals, side_terminals, Bipartition, EdgeId, TerminalGraph, VertexId,
};
use crate::weight::Weight;

/// A canonical minimum cut for one terminal bipartition.
#[derive(Clone, Debug)]
pub struct CanonicalCut {
    pub bipartition: Bipartition,
    pub value: Weight,
    /// Edges with exactly one endpoint in `source_min_side`.
    pub crossing_edges: BTreeSet<EdgeId>,
    /// Inclusion-minimal source side over all minimum cuts.
    pub source_min_side: BTreeSet<VertexId>,
    /// Complement of the inclusion-minimal sink side.
    pub sink_min_complement: BTreeSet<VertexId>,
    /// True iff the minimum-cut vertex bipartition is unique.
    pub unique: bool,
}

const SOURCE: usize = 0;
const SINK: usize = 1;

struct FlowNetwork {
    /// Node of each original vertex (0 = source, 1 = sink).
    node_of: Vec<usize>,
    node_count: usize,
    /// Paired arcs: arc 2i and 2i+1 are the two directions of edge `edge[i]`.
    cap: Vec<Weight>,
    arc_to: Vec<usize>,
    arc_edge: Vec<EdgeId>,
    adj: Vec<Vec<usize>>,
    radj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    fn build(g: &TerminalGraph, b: &Bipartition) -> Self {
        let mut node_of = vec![usize::MAX; g.vertex_count()];
        for &t in &side_terminals(g, b) {
            node_of[t] = SOURCE;
        }
        for &t in &complement_terminals(g, b) {
            node_of[t] = SINK;
        }
        let mut next = 2;
        for v in 0..g.vertex_count() {
            if node_of[v] == usize::MAX {
                node_of[v] = next;
                next += 1;
            }
        }
        let mut net = FlowNetwork {
            node_of,
            node_count: next,
            cap: Vec::new(),
            arc_to: Vec::new(),
            arc_edge: Vec::new(),
            adj: vec![Vec::new(); next],
            radj: vec![Vec::new(); next],
        };
        for (eid, e) in g.edges().iter().enumerate() {
            let a = net.node_of[e.u];
            let b = net.node_of[e.v];
            if a == b {
                continue;
            }
            net.push_arc(a, b, e.weight.clone(), eid);
            net.push_arc(b, a, e.weight.clone(), eid);
        }
        net
    }

    fn push_arc(&mut self, from: usize, to: usize, cap: Weight, edge: EdgeId) {
        let id = self.cap.len();
        self.cap.push(cap);
        self.arc_to.push(to);
        self.arc_edge.push(edge);
        self.adj[from].push(id);
        self.radj[to].push(id);
    }

    /// Shortest augmenting path from source to sink; returns the arcs used.
    fn bfs_path(&self) -> Option<Vec<usize>> {
        let mut parent_arc = vec![usize::MAX; self.node_count];
        let mut seen = vec![false; self.node_count];
        seen[SOURCE] = true;
        let mut queue = VecDeque::from([SOURCE]);
        while let Some(x) = queue.pop_front() {
            if x == SINK {
                break;
            }
            for &a in &self.adj[x] {
                let y = self.arc_to[a];
                if !seen[y] && !self.cap[a].is_zero() {
                    seen[y] = true;
                    parent_arc[y] = a;
                    queue.push_back(y);
                }
            }
        }
        if !seen[SINK] {
            return None;
        }
        let mut path = Vec::new();
        let mut x = SINK;
        while x != SOURCE {
            let a = parent_arc[x];
            path.push(a);
            // the tail of arc a: its pair points back
            x = self.arc_to[a ^ 1];
        }
        path.reverse();
        Some(path)
    }

    fn max_flow(&mut self) -> Weight {
        let mut value = Weight::zero();
        while let Some(path) = self.bfs_path() {
            let mut bottleneck = self.cap[path[0]].clone();
            for &a in &path[1..] {
                if self.cap[a] < bottleneck {
                    bottleneck = self.cap[a].clone();
                }
            }
            for &a in &path {
                self.cap[a] -= &bottleneck;
                self.cap[a ^ 1] += &bottleneck;
            }
            value += &bottleneck;
        }
        value
    }

    /// Nodes residually reachable from the source.
    fn reachable_from_source(&self) -> Vec<bool> {
        let mut seen = vec![false; self.node_count];
        seen[SOURCE] = true;
        let mut queue = VecDeque::from([SOURCE]);
        while let Some(x) = queue.pop_front() {
            for &a in &self.adj[x] {
                let y = self.arc_to[a];
                if !seen[y] && !self.cap[a].is_zero() {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Nodes with a residual path to the sink.
    fn reaching_sink(&self) -> Vec<bool> {
        let mut seen = vec![false; self.node_count];
        seen[SINK] = true;
        let mut queue = VecDeque::from([SINK]);
        while let Some(x) = queue.pop_front() {
            for &a in &self.radj[x] {
                if self.cap[a].is_zero() {
                    continue;
                }
                let y = self.arc_to[a ^ 1]; // tail of arc a
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }
}

fn check_preconditions(g: &TerminalGraph, b: &Bipartition) -> Result<()> {
    if b.k() != g.terminal_count() {
        return Err(GraphError::InvalidTerminalSet(format!(
            "bipartition is over {} terminals, graph has {}",
            b.k(),
            g.terminal_count()
        )));
    }
    if !g.is_connected() {
        return Err(GraphError::Disconnected("min_cut requires a connected graph".into()));
    }
    Ok(())
}

/// Exact minimum cut between the two terminal sides of `b`, with the
/// canonical (source-minimal) side, the sink-minimal complement, the
/// crossing edge set, and the uniqueness flag.
pub fn min_cut(g: &TerminalGraph, b: &Bipartition) -> Result<CanonicalCut> {
    check_preconditions(g, b)?;
    let mut net = FlowNetwork::build(g, b);
    let value = net.max_flow();

    let from_source = net.reachable_from_source();
    let to_sink = net.reaching_sink();
    let source_min_side: BTreeSet<VertexId> =
        (0..g.vertex_count()).filter(|&v| from_source[net.node_of[v]]).collect();
    let sink_min_complement: BTreeSet<VertexId> =
        (0..g.vertex_count()).filter(|&v| !to_sink[net.node_of[v]]).collect();

    let crossing_edges: BTreeSet<EdgeId> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| {
            source_min_side.contains(&e.u) != source_min_side.contains(&e.v)
        })
        .map(|(id, _)| id)
        .collect();

    let check = g.cut_value(&source_min_side)?;
    if check != value {
        return Err(GraphError::Construction(format!(
            "max-flow value {value} does not match cut value {check}"
        )));
    }
    let unique = source_min_side == sink_min_complement;
    Ok(CanonicalCut {
        bipartition: *b,
        value,
        crossing_edges,
        source_min_side,
        sink_min_complement,
        unique,
    })
}

/// Max-flow witness for invariant tests: the cut value together with the
/// signed net flow on every edge (positive along the edge's stored u->v
/// orientation).
pub fn max_flow_witness(g: &TerminalGraph, b: &Bipartition) -> Result<(Weight, Vec<Weight>)> {
    check_preconditions(g, b)?;
    let mut net = FlowNetwork::build(g, b);
    let value = net.max_flow();
    let mut flows = vec![Weight::zero(); g.edge_count()];
    let mut arc = 0;
    while arc < net.cap.len() {
        let eid = net.arc_edge[arc];
        // forward arc was created first with the edge's own orientation
        let initial = g.edge(eid).weight.clone();
        flows[eid] = initial - &net.cap[arc];
        arc += 2;
    }
    Ok((value, flows))
}

/// Default enumeration bound for the brute-force oracle.
pub const ORACLE_BOUND: usize = 20;

/// Independent oracle: enumerate every side assignment of the non-terminal
/// vertices and return the minimum cut value along with every side set that
/// attains it (each side listed with the `S` terminals included).
pub fn brute_force_min_cut(
    g: &TerminalGraph,
    b: &Bipartition,
) -> Result<(Weight, Vec<BTreeSet<VertexId>>)> {
    if b.k() != g.terminal_count() {
        return Err(GraphError::InvalidTerminalSet(format!(
            "bipartition is over {} terminals, graph has {}",
            b.k(),
            g.terminal_count()
        )));
    }
    let nonterminals: Vec<VertexId> =
        (0..g.vertex_count()).filter(|&v| !g.is_terminal(v)).collect();
    if nonterminals.len() > ORACLE_BOUND {
        return Err(GraphError::OracleTooLarge {
            nonterminals: nonterminals.len(),
            bound: ORACLE_BOUND,
        });
    }
    let base: BTreeSet<VertexId> = side_terminals(g, b).into_iter().collect();
    let mut best: Option<Weight> = None;
    let mut optimal: Vec<BTreeSet<VertexId>> = Vec::new();
    for mask in 0u64..(1u64 << nonterminals.len()) {
        let mut side = base.clone();
        for (i, &v) in nonterminals.iter().enumerate() {
            if mask >> i & 1 == 1 {
                side.insert(v);
            }
        }
        let value = g.cut_value(&side)?;
        match &best {
            Some(b) if value > *b => {}
            Some(b) if value == *b => optimal.push(side),
            _ => {
                best = Some(value);
                optimal = vec![side];
            }
        }
    }
    Ok((best.expect("at least one assignment"), optimal))
}

/// True iff exactly one minimum-cut vertex bipartition exists for `b`.
pub fn is_unique(g: &TerminalGraph, b: &Bipartition) -> Result<bool> {
    Ok(min_cut(g, b)?.unique)
}
