//! Exact rational plane geometry: orientation predicates, proper segment
//! intersection, angular order for rotation systems, and point-in-polygon
//! tests. No floating point; every predicate is decided exactly.

use std::cmp::Ordering;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, Zero};

pub type Coord = BigRational;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Coord,
    pub y: Coord,
}

impl Point {
    pub fn new(x: Coord, y: Coord) -> Self {
        Point { x, y }
    }

    pub fn from_integers(x: i64, y: i64) -> Self {
        Point {
            x: BigRational::from_integer(BigInt::from(x)),
            y: BigRational::from_integer(BigInt::from(y)),
        }
    }
}

impl std::fmt::Debug for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Sign of the cross product (b - a) x (c - a): positive for a left turn.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Ordering {
    let lhs = (&b.x - &a.x) * (&c.y - &a.y);
    let rhs = (&b.y - &a.y) * (&c.x - &a.x);
    lhs.cmp(&rhs)
}

/// Result of intersecting two closed segments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Crossing {
    /// Disjoint, or touching only at shared endpoints.
    None,
    /// A single transversal crossing strictly interior to both segments.
    Proper(Point),
    /// Collinear overlap or an endpoint lying in the other segment's
    /// interior; the construction treats this as a general-position failure.
    Degenerate,
}

/// Intersect segments [a, b] and [c, d].
pub fn segment_intersection(a: &Point, b: &Point, c: &Point, d: &Point) -> Crossing {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);

    let shared_endpoint = a == c || a == d || b == c || b == d;

    if o1 == Ordering::Equal && o2 == Ordering::Equal {
        // collinear: overlap unless they only touch at a shared endpoint
        if shared_endpoint && !collinear_overlap_beyond_endpoint(a, b, c, d) {
            return Crossing::None;
        }
        if ranges_overlap(a, b, c, d) {
            return Crossing::Degenerate;
        }
        return Crossing::None;
    }

    if shared_endpoint {
        return Crossing::None;
    }

    // an endpoint exactly on the other segment's interior is degenerate
    if o1 == Ordering::Equal && within(a, b, c)
        || o2 == Ordering::Equal && within(a, b, d)
        || o3 == Ordering::Equal && within(c, d, a)
        || o4 == Ordering::Equal && within(c, d, b)
    {
        return Crossing::Degenerate;
    }

    if o1 != o2 && o3 != o4 && o1 != Ordering::Equal && o3 != Ordering::Equal {
        // strict transversal crossing; solve for the intersection point
        let r = (&b.x - &a.x, &b.y - &a.y);
        let s = (&d.x - &c.x, &d.y - &c.y);
        let denom = &r.0 * &s.1 - &r.1 * &s.0;
        let t_num = (&c.x - &a.x) * &s.1 - (&c.y - &a.y) * &s.0;
        let t = t_num / denom;
        let x = &a.x + &t * &r.0;
        let y = &a.y + &t * &r.1;
        return Crossing::Proper(Point::new(x, y));
    }
    Crossing::None
}

fn within(a: &Point, b: &Point, p: &Point) -> bool {
    // assumes p collinear with a-b; inside the closed bounding box
    let (xmin, xmax) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (ymin, ymax) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    &p.x >= xmin && &p.x <= xmax && &p.y >= ymin && &p.y <= ymax
}

fn ranges_overlap(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    within(a, b, c) || within(a, b, d) || within(c, d, a) || within(c, d, b)
}

fn collinear_overlap_beyond_endpoint(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    // collinear with a shared endpoint: overlap iff the other endpoints lie
    // on the same side and within range
    let interior_hits = [(a, b, c), (a, b, d), (c, d, a), (c, d, b)]
        .iter()
        .filter(|(s1, s2, p)| p != s1 && p != s2 && within(s1, s2, p))
        .count();
    interior_hits > 0
}

/// Angular order of direction vectors, counterclockwise starting at the
/// positive x-axis. Zero vectors are not valid directions.
pub fn compare_directions(a: &(Coord, Coord), b: &(Coord, Coord)) -> Ordering {
    fn half(d: &(Coord, Coord)) -> u8 {
        // 0: angle in [0, pi), 1: angle in [pi, 2 pi)
        if d.1.is_positive() || (d.1.is_zero() && d.0.is_positive()) {
            0
        } else {
            1
        }
    }
    half(a).cmp(&half(b)).then_with(|| {
        let cross = &a.0 * &b.1 - &a.1 * &b.0;
        // positive cross: a before b within the half-plane
        if cross.is_positive() {
            Ordering::Less
        } else if cross.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Crossing-number point-in-polygon test against a closed polyline given as
/// its vertex list (implicitly closed). Exact; vertices on the probe's
/// horizontal line are handled by the strict-above rule. The probe must not
/// lie on the boundary.
pub fn point_in_polygon(probe: &Point, polygon: &[Point]) -> bool {
    let n = polygon.len();
    let mut crossings = 0usize;
    for i in 0..n {
        let p = &polygon[i];
        let q = &polygon[(i + 1) % n];
        if (p.y > probe.y) != (q.y > probe.y) {
            // x coordinate where the edge meets the horizontal through probe
            let t = (&probe.y - &p.y) / (&q.y - &p.y);
            let x = &p.x + t * (&q.x - &p.x);
            if x > probe.x {
                crossings += 1;
            }
        }
    }
    crossings % 2 == 1
}

/// Twice the signed area of a closed polyline (positive if counterclockwise).
pub fn twice_signed_area(polygon: &[Point]) -> Coord {
    let mut acc = BigRational::zero();
    let n = polygon.len();
    for i in 0..n {
        let p = &polygon[i];
        let q = &polygon[(i + 1) % n];
        acc += &p.x * &q.y - &q.x * &p.y;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> Point {
        Point::from_integers(x, y)
    }

    #[test]
    fn proper_crossing() {
        let c = segment_intersection(&pt(1, 1), &pt(2, -1), &pt(1, -1), &pt(2, 1));
        match c {
            Crossing::Proper(p) => {
                assert_eq!(p, Point::new(BigRational::new(3.into(), 2.into()), BigRational::zero()));
            }
            other => panic!("expected proper crossing, got {other:?}"),
        }
    }

    #[test]
    fn shared_endpoint_is_not_a_crossing() {
        assert_eq!(
            segment_intersection(&pt(0, 0), &pt(1, 1), &pt(0, 0), &pt(1, -1)),
            Crossing::None
        );
    }

    #[test]
    fn endpoint_on_interior_is_degenerate() {
        assert_eq!(
            segment_intersection(&pt(0, 0), &pt(2, 0), &pt(1, 0), &pt(1, 5)),
            Crossing::Degenerate
        );
    }

    #[test]
    fn collinear_overlap_is_degenerate() {
        assert_eq!(
            segment_intersection(&pt(0, 0), &pt(2, 0), &pt(1, 0), &pt(3, 0)),
            Crossing::Degenerate
        );
        // touching collinear segments at one endpoint only: fine
        assert_eq!(
            segment_intersection(&pt(0, 0), &pt(1, 0), &pt(1, 0), &pt(2, 0)),
            Crossing::None
        );
    }

    #[test]
    fn direction_order_is_ccw_from_east() {
        let dirs: Vec<(Coord, Coord)> = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]
            .iter()
            .map(|&(x, y)| {
                (BigRational::from_integer(x.into()), BigRational::from_integer(y.into()))
            })
            .collect();
        for w in dirs.windows(2) {
            assert_eq!(compare_directions(&w[0], &w[1]), Ordering::Less);
        }
    }

    #[test]
    fn point_in_quad_with_vertices_on_ray() {
        // diamond v(0,0), a(1,1), w(2,0), b(1,-1); probe (1,0) is inside even
        // though v and w lie on the probe's horizontal line
        let poly = vec![pt(0, 0), pt(1, 1), pt(2, 0), pt(1, -1)];
        assert!(point_in_polygon(&pt(1, 0), &poly));
        assert!(!point_in_polygon(&pt(3, 0), &poly));
        assert!(!point_in_polygon(&pt(-1, 0), &poly));
    }

    #[test]
    fn signed_area_orientation() {
        let ccw = vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)];
        assert!(twice_signed_area(&ccw).is_positive());
        let cw: Vec<Point> = ccw.iter().rev().cloned().collect();
        assert!(twice_signed_area(&cw).is_negative());
    }
}
