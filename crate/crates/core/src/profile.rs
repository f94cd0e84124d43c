//! Cut profiles over all terminal bipartitions, side vectors, merge-based
//! compression, and exact mimicking-network validation.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::cut::{min_cut, CanonicalCut};
use crate::error::{GraphError, Result};
use crate::graph::{enumerate_bipartitions, Bipartition, TerminalGraph, VertexId};
use crate::weight::Weight;

/// The canonical minimum cut for every one of the 2^{k-1}-1 canonical
/// bipartitions, in enumeration order.
#[derive(Clone, Debug)]
pub struct CutProfile {
    pub bipartitions: Vec<Bipartition>,
    pub cuts: Vec<CanonicalCut>,
}

impl CutProfile {
    pub fn len(&self) -> usize {
        self.bipartitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bipartitions.is_empty()
    }

    pub fn values(&self) -> Vec<&Weight> {
        self.cuts.iter().map(|c| &c.value).collect()
    }

    pub fn all_unique(&self) -> bool {
        self.cuts.iter().all(|c| c.unique)
    }

    pub fn non_unique_rows(&self) -> Vec<usize> {
        self.cuts
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.unique)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Per-vertex bit string: bit i set iff the vertex lies in the canonical
/// source side of bipartition i.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SideVector {
    bits: Vec<bool>,
}

impl SideVector {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn as_bitstring(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Debug for SideVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_bitstring())
    }
}

/// Canonical minimum cut for every canonical bipartition, computed in
/// parallel and returned in enumeration order.
pub fn cut_profile(g: &TerminalGraph) -> Result<CutProfile> {
    let bipartitions = enumerate_bipartitions(g.terminal_count())?;
    if !g.is_connected() {
        return Err(GraphError::Disconnected("cut_profile requires a connected graph".into()));
    }
    let cuts = bipartitions
        .par_iter()
        .map(|b| min_cut(g, b))
        .collect::<Result<Vec<_>>>()?;
    Ok(CutProfile { bipartitions, cuts })
}

/// Side vector of every vertex, from canonical source-side membership.
pub fn side_vectors(
    g: &TerminalGraph,
    profile: &CutProfile,
) -> Result<BTreeMap<VertexId, SideVector>> {
    let expected = enumerate_bipartitions(g.terminal_count())?;
    if profile.bipartitions != expected {
        return Err(GraphError::ProfileMismatch(format!(
            "profile covers {} bipartitions, graph needs {}",
            profile.len(),
            expected.len()
        )));
    }
    if let Some(cut) = profile
        .cuts
        .iter()
        .find(|c| c.source_min_side.iter().any(|&v| v >= g.vertex_count()))
    {
        return Err(GraphError::ProfileMismatch(format!(
            "cut for mask {} references vertices outside the graph",
            cut.bipartition.mask()
        )));
    }
    let mut out = BTreeMap::new();
    for v in 0..g.vertex_count() {
        let bits = profile.cuts.iter().map(|c| c.source_min_side.contains(&v)).collect();
        out.insert(v, SideVector { bits });
    }
    Ok(out)
}

/// One merged equivalence class of the compressor.
#[derive(Clone, Debug)]
pub struct MergeClass {
    pub side_vector: SideVector,
    pub members: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct CompressReport {
    pub vertices_before: usize,
    pub vertices_after: usize,
    pub classes: Vec<MergeClass>,
}

/// Merge-based compression: vertices with equal side vectors are contracted.
/// The output has one vertex per distinct side vector and mimics every
/// terminal cut of the input exactly.
pub fn hagerup_compress(g: &TerminalGraph) -> Result<(TerminalGraph, CompressReport)> {
    let profile = cut_profile(g)?;
    let vectors = side_vectors(g, &profile)?;
    let mut by_vector: BTreeMap<&SideVector, Vec<VertexId>> = BTreeMap::new();
    for v in 0..g.vertex_count() {
        by_vector.entry(&vectors[&v]).or_default().push(v);
    }
    let mut classes_vertices: Vec<Vec<VertexId>> = Vec::new();
    let mut classes_report: Vec<MergeClass> = Vec::new();
    for (vector, members) in &by_vector {
        classes_vertices.push(members.clone());
        classes_report.push(MergeClass {
            side_vector: (*vector).clone(),
            members: members.iter().map(|&v| g.label(v).to_string()).collect(),
        });
    }
    let compressed = g.contract_classes(&classes_vertices)?;
    let report = CompressReport {
        vertices_before: g.vertex_count(),
        vertices_after: compressed.vertex_count(),
        classes: classes_report,
    };
    Ok((compressed, report))
}

#[derive(Clone, Debug)]
pub struct CutMismatch {
    pub bipartition: Bipartition,
    pub original: Weight,
    pub other: Weight,
}

#[derive(Clone, Debug)]
pub struct MimickingReport {
    pub checked: usize,
    pub mismatches: Vec<CutMismatch>,
}

impl MimickingReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compare the minimum cut value of every canonical bipartition in `g` and
/// `g2` exactly. Terminal lists must agree label-for-label in order.
pub fn validate_mimicking(g: &TerminalGraph, g2: &TerminalGraph) -> Result<MimickingReport> {
    if g.terminal_labels() != g2.terminal_labels() {
        return Err(GraphError::TerminalMismatch(format!(
            "{:?} vs {:?}",
            g.terminal_labels(),
            g2.terminal_labels()
        )));
    }
    let bipartitions = enumerate_bipartitions(g.terminal_count())?;
    let pairs = bipartitions
        .par_iter()
        .map(|b| Ok((min_cut(g, b)?.value, min_cut(g2, b)?.value)))
        .collect::<Result<Vec<_>>>()?;
    let mut mismatches = Vec::new();
    for (b, (original, other)) in bipartitions.iter().zip(pairs) {
        if original != other {
            mismatches.push(CutMismatch { bipartition: *b, original, other });
        }
    }
    Ok(MimickingReport { checked: bipartitions.len(), mismatches })
}

/// True iff merging `u` and `v` preserves every terminal cut value exactly.
/// The check is exact: merge, then compare cut values per bipartition.
/// Contraction can only increase cut values, so any mismatch is a strict
/// increase.
pub fn mergeability_test(g: &TerminalGraph, u: VertexId, v: VertexId) -> Result<bool> {
    let profile = cut_profile(g)?;
    mergeability_test_with_profile(g, &profile, u, v)
}

/// As `mergeability_test`, but reusing a precomputed profile of `g`; stops
/// at the first bipartition whose value changes.
pub fn mergeability_test_with_profile(
    g: &TerminalGraph,
    profile: &CutProfile,
    u: VertexId,
    v: VertexId,
) -> Result<bool> {
    let merged = g.merge_vertices(u, v)?;
    // Test first the bipartitions whose canonical cut separates u from v;
    // those are the likeliest witnesses of a strict increase.
    let mut order: Vec<usize> = (0..profile.len()).collect();
    order.sort_by_key(|&i| {
        let side = &profile.cuts[i].source_min_side;
        if side.contains(&u) != side.contains(&v) {
            0
        } else {
            1
        }
    });
    for i in order {
        let b = &profile.bipartitions[i];
        let merged_value = min_cut(&merged, b)?.value;
        if merged_value != profile.cuts[i].value {
            return Ok(false);
        }
    }
    Ok(true)
}
