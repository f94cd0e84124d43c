//! Plane graphs with exact rational coordinates: rotation systems derived
//! from the drawing, face tracing, and dual-graph extraction.

use std::cmp::Ordering;
use std::collections::HashMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::Signed;

use crate::error::{GraphError, Result};
use crate::geom::{compare_directions, point_in_polygon, twice_signed_area, Coord, Point};
use crate::graph::TerminalGraph;
use crate::weight::Weight;

pub type PlaneVertexId = usize;
pub type PlaneEdgeId = usize;
pub type FaceId = usize;

#[derive(Clone, Debug)]
pub struct PlaneVertex {
    pub label: String,
    pub position: Point,
}

#[derive(Clone, Debug)]
pub struct PlaneEdge {
    pub u: PlaneVertexId,
    pub v: PlaneVertexId,
    pub weight: Weight,
    /// Drawing of the edge from u to v, endpoints included. Interior points
    /// are bends of the drawing, not graph vertices.
    pub geometry: Vec<Point>,
}

/// A directed edge side: `forward` darts run u -> v.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dart {
    pub edge: PlaneEdgeId,
    pub forward: bool,
}

impl Dart {
    pub fn reversed(self) -> Dart {
        Dart { edge: self.edge, forward: !self.forward }
    }
}

#[derive(Clone, Debug)]
pub struct Face {
    /// Boundary darts in traversal order; the face lies to the left of each.
    pub darts: Vec<Dart>,
}

#[derive(Clone, Debug)]
pub struct PlaneGraph {
    vertices: Vec<PlaneVertex>,
    edges: Vec<PlaneEdge>,
    rotations: Vec<Vec<Dart>>,
    faces: Vec<Face>,
    outer_face: Option<FaceId>,
    /// face id on the left of [forward, backward] dart of each edge
    face_of: Vec<[FaceId; 2]>,
}

impl PlaneGraph {
    pub fn new() -> Self {
        PlaneGraph {
            vertices: Vec::new(),
            edges: Vec::new(),
            rotations: Vec::new(),
            faces: Vec::new(),
            outer_face: None,
            face_of: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self, label: impl Into<String>, position: Point) -> PlaneVertexId {
        self.vertices.push(PlaneVertex { label: label.into(), position });
        self.vertices.len() - 1
    }

    /// Straight-segment edge.
    pub fn add_edge(&mut self, u: PlaneVertexId, v: PlaneVertexId, weight: Weight) -> PlaneEdgeId {
        let geometry = vec![self.vertices[u].position.clone(), self.vertices[v].position.clone()];
        self.add_polyline_edge(u, v, weight, geometry)
    }

    pub fn add_polyline_edge(
        &mut self,
        u: PlaneVertexId,
        v: PlaneVertexId,
        weight: Weight,
        geometry: Vec<Point>,
    ) -> PlaneEdgeId {
        debug_assert!(geometry.len() >= 2);
        debug_assert_eq!(geometry[0], self.vertices[u].position);
        debug_assert_eq!(geometry[geometry.len() - 1], self.vertices[v].position);
        self.edges.push(PlaneEdge { u, v, weight, geometry });
        self.edges.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn vertex(&self, v: PlaneVertexId) -> &PlaneVertex {
        &self.vertices[v]
    }

    pub fn vertices(&self) -> &[PlaneVertex] {
        &self.vertices
    }

    pub fn edge(&self, e: PlaneEdgeId) -> &PlaneEdge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[PlaneEdge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn outer_face(&self) -> Option<FaceId> {
        self.outer_face
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<PlaneVertexId> {
        self.vertices.iter().position(|v| v.label == label)
    }

    pub fn dart_tail(&self, d: Dart) -> PlaneVertexId {
        let e = &self.edges[d.edge];
        if d.forward {
            e.u
        } else {
            e.v
        }
    }

    pub fn dart_head(&self, d: Dart) -> PlaneVertexId {
        let e = &self.edges[d.edge];
        if d.forward {
            e.v
        } else {
            e.u
        }
    }

    /// Outgoing direction of a dart at its tail: the first drawing step.
    fn dart_direction(&self, d: Dart) -> (Coord, Coord) {
        let geo = &self.edges[d.edge].geometry;
        let (from, to) = if d.forward {
            (&geo[0], &geo[1])
        } else {
            (&geo[geo.len() - 1], &geo[geo.len() - 2])
        };
        (&to.x - &from.x, &to.y - &from.y)
    }

    /// The two faces bordering an edge: [left-of-forward, left-of-backward].
    pub fn edge_faces(&self, e: PlaneEdgeId) -> [FaceId; 2] {
        self.face_of[e]
    }

    /// Build the rotation system from the drawing (counterclockwise angular
    /// order at each vertex) and trace all faces. Fails if two darts leave a
    /// vertex in exactly the same direction, or if the traced map is not a
    /// connected bridgeless plane graph (Euler check, two distinct faces per
    /// edge, a unique clockwise outer face).
    pub fn trace_faces(&mut self) -> Result<()> {
        // rotation system
        self.rotations = vec![Vec::new(); self.vertices.len()];
        for (eid, edge) in self.edges.iter().enumerate() {
            self.rotations[edge.u].push(Dart { edge: eid, forward: true });
            self.rotations[edge.v].push(Dart { edge: eid, forward: false });
        }
        for v in 0..self.vertices.len() {
            let mut darts = std::mem::take(&mut self.rotations[v]);
            darts.sort_by(|&a, &b| {
                compare_directions(&self.dart_direction(a), &self.dart_direction(b))
            });
            for w in darts.windows(2) {
                if compare_directions(&self.dart_direction(w[0]), &self.dart_direction(w[1]))
                    == Ordering::Equal
                {
                    return Err(GraphError::Construction(format!(
                        "two edges leave vertex '{}' in the same direction",
                        self.vertices[v].label
                    )));
                }
            }
            self.rotations[v] = darts;
        }

        // face tracing: next(d) is the rotation predecessor (clockwise
        // successor) of rev(d) at head(d); this keeps the face on the left
        let mut dart_face: HashMap<(PlaneEdgeId, bool), FaceId> = HashMap::new();
        let mut faces = Vec::new();
        for eid in 0..self.edges.len() {
            for forward in [true, false] {
                let start = Dart { edge: eid, forward };
                if dart_face.contains_key(&(start.edge, start.forward)) {
                    continue;
                }
                let face_id = faces.len();
                let mut boundary = Vec::new();
                let mut d = start;
                loop {
                    dart_face.insert((d.edge, d.forward), face_id);
                    boundary.push(d);
                    let head = self.dart_head(d);
                    let rev = d.reversed();
                    let ring = &self.rotations[head];
                    let pos = ring
                        .iter()
                        .position(|&x| x == rev)
                        .expect("reversed dart present in rotation");
                    d = ring[(pos + ring.len() - 1) % ring.len()];
                    if d == start {
                        break;
                    }
                }
                faces.push(Face { darts: boundary });
            }
        }
        self.faces = faces;
        self.face_of = (0..self.edges.len())
            .map(|e| [dart_face[&(e, true)], dart_face[&(e, false)]])
            .collect();

        // sanity: connected plane graph must satisfy Euler's formula
        let euler = self.vertices.len() as i64 - self.edges.len() as i64
            + self.faces.len() as i64;
        if euler != 2 {
            return Err(GraphError::PlaneState(format!(
                "Euler check failed: V - E + F = {euler}, expected 2"
            )));
        }
        for (e, faces) in self.face_of.iter().enumerate() {
            if faces[0] == faces[1] {
                return Err(GraphError::PlaneState(format!(
                    "edge {e} is a bridge (same face on both sides)"
                )));
            }
        }

        // outer face: the unique face traced clockwise (negative signed area)
        let mut outer = None;
        for (fid, _) in self.faces.iter().enumerate() {
            if twice_signed_area(&self.face_polygon(fid)).is_negative() {
                if outer.is_some() {
                    return Err(GraphError::PlaneState(
                        "more than one clockwise face".into(),
                    ));
                }
                outer = Some(fid);
            }
        }
        let outer = outer.ok_or_else(|| GraphError::PlaneState("no outer face found".into()))?;
        self.outer_face = Some(outer);
        Ok(())
    }

    /// Boundary of a face as a closed point sequence in traversal order,
    /// including edge bend points.
    pub fn face_polygon(&self, face: FaceId) -> Vec<Point> {
        let mut points = Vec::new();
        for &d in &self.faces[face].darts {
            let geo = &self.edges[d.edge].geometry;
            if d.forward {
                points.extend(geo[..geo.len() - 1].iter().cloned());
            } else {
                points.extend(geo[1..].iter().rev().cloned());
            }
        }
        points
    }

    /// Inner face strictly containing the probe point, if any. The probe
    /// must not lie on any edge.
    pub fn face_containing(&self, probe: &Point) -> Option<FaceId> {
        let outer = self.outer_face?;
        // the innermost containing face is the one whose boundary winds the
        // probe an odd number of times and whose area is smallest; for the
        // maps built here faces are disjoint open cells, so at most one
        // inner face contains the probe
        let mut hit = None;
        for fid in 0..self.faces.len() {
            if fid == outer {
                continue;
            }
            if point_in_polygon(probe, &self.face_polygon(fid)) {
                debug_assert!(hit.is_none(), "probe inside two faces");
                hit = Some(fid);
            }
        }
        hit
    }

    /// Average of the face's boundary points. Drawing aid for the dual.
    pub fn face_centroid(&self, face: FaceId) -> Point {
        let polygon = self.face_polygon(face);
        let n = BigRational::from_integer(BigInt::from(polygon.len() as i64));
        let mut x = BigRational::from_integer(BigInt::from(0));
        let mut y = x.clone();
        for p in &polygon {
            x += &p.x;
            y += &p.y;
        }
        Point::new(x / &n, y / &n)
    }
}

impl Default for PlaneGraph {
    fn default() -> Self {
        Self::new()
    }
}

/// Build the dual of a traced plane graph: one vertex per face, one edge per
/// plane edge between the two bordering faces, with equal weight. Edge ids
/// correspond one-to-one (dual edge i comes from plane edge i).
///
/// `face_labels` names every face; `terminal_faces` selects and orders the
/// dual's terminal list. Returns the dual graph and the face -> dual-vertex
/// map.
pub fn compute_dual(
    p: &PlaneGraph,
    face_labels: &[String],
    terminal_faces: &[FaceId],
) -> Result<(TerminalGraph, Vec<usize>)> {
    if p.face_count() == 0 {
        return Err(GraphError::PlaneState("faces not traced".into()));
    }
    if face_labels.len() != p.face_count() {
        return Err(GraphError::PlaneState(format!(
            "{} labels for {} faces",
            face_labels.len(),
            p.face_count()
        )));
    }
    let mut dual = TerminalGraph::new();
    let mut face_vertex = Vec::with_capacity(p.face_count());
    for label in face_labels {
        face_vertex.push(dual.add_vertex(label.clone())?);
    }
    for e in 0..p.edge_count() {
        let [f1, f2] = p.edge_faces(e);
        dual.add_edge(face_vertex[f1], face_vertex[f2], p.edge(e).weight.clone())?;
    }
    dual.set_terminals(terminal_faces.iter().map(|&f| face_vertex[f]).collect())?;
    Ok((dual, face_vertex))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_faces_and_dual() {
        let mut p = PlaneGraph::new();
        let a = p.add_vertex("a", Point::from_integers(0, 0));
        let b = p.add_vertex("b", Point::from_integers(2, 0));
        let c = p.add_vertex("c", Point::from_integers(1, 2));
        p.add_edge(a, b, Weight::one());
        p.add_edge(b, c, Weight::one());
        p.add_edge(c, a, Weight::one());
        p.trace_faces().unwrap();
        assert_eq!(p.face_count(), 2);
        let outer = p.outer_face().unwrap();
        let inner = 1 - outer;
        assert_eq!(p.face_containing(&Point::from_integers(1, 1)), Some(inner));
        assert_eq!(p.face_containing(&Point::from_integers(5, 5)), None);

        let labels = vec!["f0".to_string(), "f1".to_string()];
        let (dual, map) = compute_dual(&p, &labels, &[inner, outer]).unwrap();
        assert_eq!(dual.vertex_count(), 2);
        assert_eq!(dual.edge_count(), 3); // three parallel edges
        assert_eq!(map.len(), 2);
    }

    #[test]
    fn bridge_detected() {
        let mut p = PlaneGraph::new();
        let a = p.add_vertex("a", Point::from_integers(0, 0));
        let b = p.add_vertex("b", Point::from_integers(1, 0));
        p.add_edge(a, b, Weight::one());
        assert!(matches!(p.trace_faces(), Err(GraphError::PlaneState(_))));
    }

    #[test]
    fn quad_with_diagonal() {
        let mut p = PlaneGraph::new();
        let a = p.add_vertex("a", Point::from_integers(0, 0));
        let b = p.add_vertex("b", Point::from_integers(2, 0));
        let c = p.add_vertex("c", Point::from_integers(2, 2));
        let d = p.add_vertex("d", Point::from_integers(0, 2));
        for (u, v) in [(a, b), (b, c), (c, d), (d, a), (a, c)] {
            p.add_edge(u, v, Weight::one());
        }
        p.trace_faces().unwrap();
        assert_eq!(p.face_count(), 3);
        // the diagonal borders the two inner triangles
        let [f1, f2] = p.edge_faces(4);
        assert_ne!(f1, f2);
        assert_ne!(Some(f1), p.outer_face());
        assert_ne!(Some(f2), p.outer_face());
    }
}
