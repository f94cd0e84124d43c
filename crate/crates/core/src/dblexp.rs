//! The three-layer incompressible instance.
//!
//! Terminals are Q_0 (2r+1 vertices) plus x. The middle layer U has one
//! vertex u_S per r-subset S of Q_0; the outer layer W has one vertex w_Z
//! per (l/2)-subset Z of U, where l = binom(2r+1, r). Costs are chosen so
//! that for every important terminal set {x} + S_0 the minimum cut places
//! exactly u_{S_0} on the x side and forces each w_Z to the x side iff
//! u_{S_0} is in Z — so no two vertices can ever be merged.

use std::collections::BTreeSet;

use itertools::Itertools;
use num::bigint::BigInt;
use num::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cut::min_cut;
use crate::error::{GraphError, Result};
use crate::graph::{Bipartition, TerminalGraph, VertexId};
use crate::profile::{cut_profile, mergeability_test_with_profile, side_vectors};
use crate::weight::Weight;

/// Default bound on the outer-layer size |W|.
pub const DEFAULT_MAX_OUTER: u64 = 10_000;
/// The analytic cut oracle enumerates 2^l middle-layer assignments.
const ORACLE_MAX_ELL: usize = 16;

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// l = binom(2r+1, r) and its parity; even whenever r = 2 (mod 4).
pub fn check_ell_even(r: u64) -> (BigInt, bool) {
    let ell = binomial(2 * r + 1, r);
    let even = (&ell % BigInt::from(2)).is_zero();
    (ell, even)
}

#[derive(Clone, Debug)]
pub struct DblExpInstance {
    pub r: usize,
    pub k: usize,
    pub ell: usize,
    pub alpha: Weight,
    pub graph: TerminalGraph,
    pub x: VertexId,
    pub q: Vec<VertexId>,
    pub u: Vec<VertexId>,
    pub w: Vec<VertexId>,
    /// 0-based Q_0 indices of each u's subset, sorted; row i describes u[i]
    pub u_subsets: Vec<Vec<usize>>,
    /// 0-based U indices of each w's subset, sorted; row i describes w[i]
    pub w_subsets: Vec<Vec<usize>>,
}

impl DblExpInstance {
    /// Cost of the edge u_S - q: alpha outside S, (1 + 1/r + 1/r^2) alpha
    /// inside S.
    pub fn u_q_cost(&self, u_index: usize, q_index: usize) -> Weight {
        let alpha = self.alpha.clone();
        if self.u_subsets[u_index].binary_search(&q_index).is_ok() {
            let r = self.r as i64;
            let factor = Weight::one() + Weight::ratio(1, r) + Weight::ratio(1, r * r);
            factor * alpha
        } else {
            alpha
        }
    }

    /// The important bipartition {x} + S_0 for the u of index `u_index`.
    pub fn important_bipartition(&self, u_index: usize) -> Result<Bipartition> {
        let mut mask = 0u64;
        for &qi in &self.u_subsets[u_index] {
            mask |= 1 << qi; // q_i sits at terminal position qi + 1
        }
        Bipartition::new(self.k, mask)
    }
}

/// Generate the instance for `r` (r = 2 mod 4) with the default alpha
/// r^2 l |W| + 1 unless one is supplied.
pub fn generate_dblexp(
    r: u64,
    alpha: Option<Weight>,
    max_outer: u64,
) -> Result<DblExpInstance> {
    if r < 2 || r % 4 != 2 {
        return Err(GraphError::Parameter(format!(
            "r must be 2 modulo 4 and at least 2, got {r}"
        )));
    }
    let (ell_big, even) = check_ell_even(r);
    if !even {
        return Err(GraphError::Parameter(format!(
            "l = binom({}, {r}) = {ell_big} is odd",
            2 * r + 1
        )));
    }
    let outer_big = {
        let ell_u64: u64 = ell_big.to_string().parse().map_err(|_| {
            GraphError::SizeGuard(format!("l = {ell_big} is out of machine range"))
        })?;
        binomial(ell_u64, ell_u64 / 2)
    };
    if outer_big > BigInt::from(max_outer) {
        return Err(GraphError::SizeGuard(format!(
            "|W| = binom(l, l/2) = {outer_big} exceeds the bound {max_outer}; \
             raise --max-outer to proceed"
        )));
    }
    let ell: usize = ell_big.to_string().parse().expect("l fits usize");
    let outer: usize = outer_big.to_string().parse().expect("|W| fits usize");
    let q_count = (2 * r + 1) as usize;

    // |W| >= 2^l / l, exactly: |W| * l >= 2^l
    if BigInt::from(outer) * BigInt::from(ell) < BigInt::one() << ell {
        return Err(GraphError::Construction(format!(
            "|W| = {outer} violates |W| l >= 2^l at l = {ell}"
        )));
    }

    let floor = Weight::from_bigint(
        BigInt::from(r * r) * BigInt::from(ell) * BigInt::from(outer),
    );
    let alpha = match alpha {
        Some(a) => {
            if !(a > floor) {
                return Err(GraphError::Parameter(format!(
                    "alpha = {a} must exceed r^2 l |W| = {floor}"
                )));
            }
            a
        }
        None => floor.clone() + Weight::one(),
    };

    let mut g = TerminalGraph::new();
    let x = g.add_vertex("x")?;
    let mut q = Vec::with_capacity(q_count);
    for i in 1..=q_count {
        q.push(g.add_vertex(format!("q{i}"))?);
    }
    let mut terminals = vec![x];
    terminals.extend(&q);
    // terminals fixed before U and W exist; ids are stable under growth
    let u_subsets: Vec<Vec<usize>> = (0..q_count).combinations(r as usize).collect();
    debug_assert_eq!(u_subsets.len(), ell);
    let mut u = Vec::with_capacity(ell);
    for subset in &u_subsets {
        let label = format!(
            "u_{}",
            subset.iter().map(|qi| (qi + 1).to_string()).join("_")
        );
        u.push(g.add_vertex(label)?);
    }
    let w_subsets: Vec<Vec<usize>> = (0..ell).combinations(ell / 2).collect();
    debug_assert_eq!(w_subsets.len(), outer);
    let mut w = Vec::with_capacity(outer);
    for subset in &w_subsets {
        let label = format!("w_{}", subset.iter().map(|ui| ui.to_string()).join("_"));
        w.push(g.add_vertex(label)?);
    }

    // inner bipartite layer: every u to every q
    let r_i64 = r as i64;
    let inside = (Weight::one() + Weight::ratio(1, r_i64) + Weight::ratio(1, r_i64 * r_i64))
        * alpha.clone();
    for (ui, subset) in u_subsets.iter().enumerate() {
        for qi in 0..q_count {
            let cost = if subset.binary_search(&qi).is_ok() {
                inside.clone()
            } else {
                alpha.clone()
            };
            g.add_edge(u[ui], q[qi], cost)?;
        }
    }
    // outer layer: unit edges into Z, zero edges outside, and the x edge
    let x_w_cost = Weight::from_integer(ell as i64 / 2 - 1);
    for (wi, subset) in w_subsets.iter().enumerate() {
        let members: BTreeSet<usize> = subset.iter().copied().collect();
        for ui in 0..ell {
            let cost = if members.contains(&ui) { Weight::one() } else { Weight::zero() };
            g.add_edge(u[ui], w[wi], cost)?;
        }
        g.add_edge(x, w[wi], x_w_cost.clone())?;
    }
    g.set_terminals(terminals)?;

    // total weight incident to W must stay below alpha / r^2
    let mut w_total = Weight::zero();
    let w_ids: BTreeSet<VertexId> = w.iter().copied().collect();
    for e in g.edges() {
        if w_ids.contains(&e.u) || w_ids.contains(&e.v) {
            w_total += &e.weight;
        }
    }
    let budget = Weight::ratio(1, (r * r) as i64) * alpha.clone();
    if !(w_total < budget) {
        return Err(GraphError::Construction(format!(
            "total W-incident weight {w_total} is not below alpha / r^2 = {budget}"
        )));
    }

    Ok(DblExpInstance {
        r: r as usize,
        k: (2 * r + 2) as usize,
        ell,
        alpha,
        graph: g,
        x,
        q,
        u,
        w,
        u_subsets,
        w_subsets,
    })
}

fn validate_subset(inst: &DblExpInstance, subset: &[usize]) -> Result<Vec<usize>> {
    let set: BTreeSet<usize> = subset.iter().copied().collect();
    if set.len() != inst.r || subset.len() != inst.r {
        return Err(GraphError::Parameter(format!(
            "subset must have exactly r = {} distinct members",
            inst.r
        )));
    }
    if let Some(&bad) = set.iter().find(|&&qi| qi >= inst.q.len()) {
        return Err(GraphError::Parameter(format!("index {bad} outside Q_0")));
    }
    Ok(set.into_iter().collect())
}

/// Balance of u_{S'} with respect to the important set {x} + S_0: its total
/// edge weight into S_0 minus its total edge weight into Q_0 - S_0.
/// Equals alpha / r for S' = S_0 and drops below -alpha / r^2 otherwise.
pub fn balance(inst: &DblExpInstance, s0: &[usize], s_prime: &[usize]) -> Result<Weight> {
    let s0 = validate_subset(inst, s0)?;
    let s_prime = validate_subset(inst, s_prime)?;
    let u_index = inst
        .u_subsets
        .iter()
        .position(|s| *s == s_prime)
        .expect("every r-subset indexes a u");
    let mut acc = Weight::zero();
    for qi in 0..inst.q.len() {
        let cost = inst.u_q_cost(u_index, qi);
        if s0.binary_search(&qi).is_ok() {
            acc += &cost;
        } else {
            acc -= &cost;
        }
    }
    Ok(acc)
}

/// Independent minimum-cut oracle for an important set: enumerate all 2^l
/// assignments of U to sides; given a U assignment every w_Z independently
/// picks its cheaper side, and the Q_0/x side is fixed by the bipartition.
pub fn important_cut_oracle(inst: &DblExpInstance, u_index: usize) -> Result<Weight> {
    if inst.ell > ORACLE_MAX_ELL {
        return Err(GraphError::SizeGuard(format!(
            "oracle enumerates 2^l assignments; l = {} exceeds {ORACLE_MAX_ELL}",
            inst.ell
        )));
    }
    let s0 = &inst.u_subsets[u_index];
    // per-u cost of each side choice against the fixed terminal sides
    let mut cost_on_s = Vec::with_capacity(inst.ell); // cut edges into Q_0 - S_0
    let mut cost_off_s = Vec::with_capacity(inst.ell); // cut edges into S_0
    for ui in 0..inst.ell {
        let mut on = Weight::zero();
        let mut off = Weight::zero();
        for qi in 0..inst.q.len() {
            let c = inst.u_q_cost(ui, qi);
            if s0.binary_search(&qi).is_ok() {
                off += &c;
            } else {
                on += &c;
            }
        }
        cost_on_s.push(on);
        cost_off_s.push(off);
    }
    let z_masks: Vec<u32> = inst
        .w_subsets
        .iter()
        .map(|z| z.iter().fold(0u32, |m, &ui| m | 1 << ui))
        .collect();
    let half = inst.ell as i64 / 2;

    let mut best: Option<Weight> = None;
    for assignment in 0u32..1 << inst.ell {
        let mut total = Weight::zero();
        for ui in 0..inst.ell {
            total += if assignment >> ui & 1 == 1 {
                &cost_on_s[ui]
            } else {
                &cost_off_s[ui]
            };
        }
        // each w cuts min(|Z - A|, |Z and A| + l/2 - 1) weight
        let mut w_cost = 0i64;
        for &z in &z_masks {
            let inter = (z & assignment).count_ones() as i64;
            w_cost += (half - inter).min(inter + half - 1);
        }
        total += &Weight::from_integer(w_cost);
        if best.as_ref().is_none_or(|b| total < *b) {
            best = Some(total);
        }
    }
    Ok(best.expect("nonempty enumeration"))
}

#[derive(Clone, Debug)]
pub struct SideCase {
    /// 0-based Q_0 indices of S_0
    pub s0: Vec<usize>,
    /// u_{S_0} on the S side and every other u off it
    pub u_placement_ok: bool,
    /// w indices whose side differs from the membership rule
    pub w_mismatches: Vec<usize>,
    pub w_on_s_side: usize,
    pub expected_w_on_s_side: usize,
    pub cut_unique: bool,
    pub cut_value: Weight,
    pub oracle_value: Weight,
}

impl SideCase {
    pub fn ok(&self) -> bool {
        self.u_placement_ok
            && self.w_mismatches.is_empty()
            && self.w_on_s_side == self.expected_w_on_s_side
            && self.cut_unique
            && self.cut_value == self.oracle_value
    }
}

#[derive(Clone, Debug)]
pub struct SideAssignmentReport {
    pub ell: usize,
    pub per_w_cost_on_s: Weight,
    pub cases: Vec<SideCase>,
}

impl SideAssignmentReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.ok())
    }
}

/// For every important set {x} + S_0: the canonical minimum cut puts
/// u_{S_0} (and no other u) on the S side, and w_Z on the S side exactly
/// when u_{S_0} is in Z. Values are cross-checked against the enumeration
/// oracle.
pub fn verify_side_assignment(inst: &DblExpInstance) -> Result<SideAssignmentReport> {
    let ell = inst.ell;
    let expected_w = {
        // subsets of size l/2 containing a fixed u: binom(l-1, l/2-1)
        let b = binomial(ell as u64 - 1, ell as u64 / 2 - 1);
        b.to_string().parse::<usize>().expect("count fits usize")
    };
    let cases = (0..ell)
        .into_par_iter()
        .map(|u_index| {
            let b = inst.important_bipartition(u_index)?;
            let cut = min_cut(&inst.graph, &b)?;
            let side = &cut.source_min_side;
            let u_placement_ok = side.contains(&inst.u[u_index])
                && (0..ell).all(|o| o == u_index || !side.contains(&inst.u[o]));
            let mut w_mismatches = Vec::new();
            let mut w_on_s_side = 0;
            for (wi, subset) in inst.w_subsets.iter().enumerate() {
                let on_side = side.contains(&inst.w[wi]);
                if on_side {
                    w_on_s_side += 1;
                }
                let member = subset.binary_search(&u_index).is_ok();
                if on_side != member {
                    w_mismatches.push(wi);
                }
            }
            let oracle_value = important_cut_oracle(inst, u_index)?;
            Ok(SideCase {
                s0: inst.u_subsets[u_index].clone(),
                u_placement_ok,
                w_mismatches,
                w_on_s_side,
                expected_w_on_s_side: expected_w,
                cut_unique: cut.unique,
                cut_value: cut.value,
                oracle_value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SideAssignmentReport {
        ell,
        per_w_cost_on_s: Weight::from_integer(ell as i64 / 2 - 1),
        cases,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IncompressMode {
    /// Seeded sample of vertex pairs (with a floor of W-W pairs).
    Sampled { pairs: usize, min_ww_pairs: usize },
    /// Every eligible pair. Hours-scale even at r = 2.
    Full,
}

#[derive(Clone, Debug)]
pub struct IncompressReport {
    pub vertices: usize,
    pub bipartitions: usize,
    pub side_vectors_distinct: bool,
    pub duplicate_vector_pair: Option<(String, String)>,
    pub pairs_tested: usize,
    pub ww_pairs_tested: usize,
    pub mergeable_pairs: Vec<(String, String)>,
}

impl IncompressReport {
    pub fn passed(&self) -> bool {
        self.side_vectors_distinct && self.mergeable_pairs.is_empty()
    }
}

/// No two vertices can be identified without changing some terminal cut:
/// all side vectors are pairwise distinct, and the exact merge test fails on
/// every tested pair (terminal-terminal pairs are ineligible by definition).
pub fn verify_incompressibility(
    inst: &DblExpInstance,
    mode: IncompressMode,
    seed: u64,
) -> Result<IncompressReport> {
    let g = &inst.graph;
    let profile = cut_profile(g)?;
    let vectors = side_vectors(g, &profile)?;

    let mut seen = std::collections::BTreeMap::new();
    let mut duplicate = None;
    for v in 0..g.vertex_count() {
        if let Some(&prev) = seen.get(&vectors[&v]) {
            duplicate = Some((g.label(prev).to_string(), g.label(v).to_string()));
            break;
        }
        seen.insert(vectors[&v].clone(), v);
    }

    let eligible = |a: VertexId, b: VertexId| !(g.is_terminal(a) && g.is_terminal(b));
    let w_set: BTreeSet<VertexId> = inst.w.iter().copied().collect();
    let pairs: Vec<(VertexId, VertexId)> = match mode {
        IncompressMode::Full => {
            let mut all = Vec::new();
            for a in 0..g.vertex_count() {
                for b in a + 1..g.vertex_count() {
                    if eligible(a, b) {
                        all.push((a, b));
                    }
                }
            }
            all
        }
        IncompressMode::Sampled { pairs, min_ww_pairs } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut chosen = BTreeSet::new();
            // W-W floor first, then arbitrary eligible pairs
            while chosen.len() < min_ww_pairs {
                let a = *inst.w.choose(&mut rng).expect("W nonempty");
                let b = *inst.w.choose(&mut rng).expect("W nonempty");
                if a != b {
                    chosen.insert((a.min(b), a.max(b)));
                }
            }
            let all: Vec<VertexId> = (0..g.vertex_count()).collect();
            while chosen.len() < pairs {
                let a = *all.choose(&mut rng).expect("nonempty");
                let b = *all.choose(&mut rng).expect("nonempty");
                if a != b && eligible(a, b) {
                    chosen.insert((a.min(b), a.max(b)));
                }
            }
            chosen.into_iter().collect()
        }
    };
    let ww_pairs_tested = pairs
        .iter()
        .filter(|(a, b)| w_set.contains(a) && w_set.contains(b))
        .count();

    let mergeable_pairs: Vec<(String, String)> = pairs
        .par_iter()
        .map(|&(a, b)| {
            Ok(if mergeability_test_with_profile(g, &profile, a, b)? {
                Some((g.label(a).to_string(), g.label(b).to_string()))
            } else {
                None
            })
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    Ok(IncompressReport {
        vertices: g.vertex_count(),
        bipartitions: profile.len(),
        side_vectors_distinct: duplicate.is_none(),
        duplicate_vector_pair: duplicate,
        pairs_tested: pairs.len(),
        ww_pairs_tested,
        mergeable_pairs,
    })
}
