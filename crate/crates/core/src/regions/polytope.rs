//! Two-dimensional polytopes over exact rationals.
//!
//! Regions live in the nonnegative quadrant and are cut by half-planes
//! `a1*d1 + a2*d2 <= b` with nonnegative coefficients. Vertex enumeration
//! intersects every pair of boundary lines (the axes included), keeps the
//! feasible intersections and takes their convex hull.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Rational64;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn int(n: usize) -> Rational {
    Rational::from_integer(n as i64)
}

/// `a1*d1 + a2*d2 <= b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HalfPlane {
    pub a1: Rational,
    pub a2: Rational,
    pub b: Rational,
}

impl HalfPlane {
    pub fn new(a1: Rational, a2: Rational, b: Rational) -> Result<Self> {
        if a1.is_zero() && a2.is_zero() {
            return Err(Error::Domain("half-plane with zero normal".into()));
        }
        if a1.is_negative() || a2.is_negative() || b.is_negative() {
            return Err(Error::Domain(format!(
                "half-plane coefficients must be nonnegative: {a1}, {a2}, {b}"
            )));
        }
        Ok(Self { a1, a2, b })
    }

    pub fn d1_at_most(b: Rational) -> Self {
        Self { a1: Rational::from_integer(1), a2: Rational::zero(), b }
    }

    pub fn d2_at_most(b: Rational) -> Self {
        Self { a1: Rational::zero(), a2: Rational::from_integer(1), b }
    }

    pub fn value(&self, p: &DofPoint) -> Rational {
        self.a1 * p.d1 + self.a2 * p.d2
    }

    pub fn satisfied_by(&self, p: &DofPoint) -> bool {
        self.value(p) <= self.b
    }

    pub fn tight_at(&self, p: &DofPoint) -> bool {
        self.value(p) == self.b
    }

    fn swapped(&self) -> Self {
        Self { a1: self.a2, a2: self.a1, b: self.b }
    }
}

impl fmt::Display for HalfPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |c: Rational, v: &str| -> Option<String> {
            if c.is_zero() {
                None
            } else if c == Rational::from_integer(1) {
                Some(v.to_string())
            } else {
                Some(format!("{c} {v}"))
            }
        };
        let lhs: Vec<String> = [term(self.a1, "d1"), term(self.a2, "d2")]
            .into_iter()
            .flatten()
            .collect();
        write!(f, "{} <= {}", lhs.join(" + "), self.b)
    }
}

/// A DoF pair `(d1, d2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DofPoint {
    pub d1: Rational,
    pub d2: Rational,
}

impl DofPoint {
    pub fn new(d1: Rational, d2: Rational) -> Self {
        Self { d1, d2 }
    }

    pub fn origin() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(self.d1), to_f64(self.d2))
    }
}

impl fmt::Display for DofPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.d1, self.d2)
    }
}

pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|_| Error::Parse(format!("bad rational {s:?}")))
}

/// Bounded 2D DoF polytope: the listed half-planes intersected with
/// `d1 >= 0, d2 >= 0`. Redundant half-planes are kept; vertices are cached
/// counterclockwise from the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofRegion {
    inequalities: Vec<HalfPlane>,
    vertices: Vec<DofPoint>,
}

impl DofRegion {
    pub fn new(inequalities: Vec<HalfPlane>) -> Result<Self> {
        let vertices = enumerate_vertices(&inequalities)?;
        Ok(Self { inequalities, vertices })
    }

    pub fn inequalities(&self) -> &[HalfPlane] {
        &self.inequalities
    }

    pub fn vertices(&self) -> &[DofPoint] {
        &self.vertices
    }

    pub fn contains(&self, p: &DofPoint) -> bool {
        !p.d1.is_negative()
            && !p.d2.is_negative()
            && self.inequalities.iter().all(|h| h.satisfied_by(p))
    }

    pub fn is_vertex(&self, p: &DofPoint) -> bool {
        self.vertices.contains(p)
    }

    /// Exchanges the roles of the two users.
    pub fn swap_users(&self) -> Result<Self> {
        Self::new(self.inequalities.iter().map(HalfPlane::swapped).collect())
    }

    /// Largest `d2` with `(d1, d2)` in the region, if `d1` is feasible at all.
    pub fn max_d2_at(&self, d1: Rational) -> Option<Rational> {
        if d1.is_negative() {
            return None;
        }
        let mut best: Option<Rational> = None;
        for h in &self.inequalities {
            let slack = h.b - h.a1 * d1;
            if slack.is_negative() {
                return None;
            }
            if !h.a2.is_zero() {
                let cap = slack / h.a2;
                best = Some(best.map_or(cap, |b| b.min(cap)));
            }
        }
        best
    }
}

/// Same polytope: identical canonical vertex lists.
pub fn region_equal(r1: &DofRegion, r2: &DofRegion) -> bool {
    r1.vertices == r2.vertices
}

/// `r1 ⊆ r2`; both are convex, so checking the vertices of `r1` suffices.
pub fn region_subset(r1: &DofRegion, r2: &DofRegion) -> bool {
    r1.vertices.iter().all(|v| r2.contains(v))
}

pub fn region_strict_subset(r1: &DofRegion, r2: &DofRegion) -> bool {
    region_subset(r1, r2) && !region_equal(r1, r2)
}

fn intersect(h: &HalfPlane, g: &HalfPlane) -> Option<DofPoint> {
    let det = h.a1 * g.a2 - h.a2 * g.a1;
    if det.is_zero() {
        return None;
    }
    let d1 = (h.b * g.a2 - h.a2 * g.b) / det;
    let d2 = (h.a1 * g.b - h.b * g.a1) / det;
    Some(DofPoint::new(d1, d2))
}

fn cross(o: &DofPoint, a: &DofPoint, b: &DofPoint) -> Rational {
    (a.d1 - o.d1) * (b.d2 - o.d2) - (a.d2 - o.d2) * (b.d1 - o.d1)
}

/// Exact vertices of `{d >= 0} ∩ inequalities`, counterclockwise starting
/// at the origin, duplicate-free and without collinear boundary points.
pub fn enumerate_vertices(inequalities: &[HalfPlane]) -> Result<Vec<DofPoint>> {
    let bounded_d1 = inequalities.iter().any(|h| h.a1.is_positive());
    let bounded_d2 = inequalities.iter().any(|h| h.a2.is_positive());
    if !bounded_d1 || !bounded_d2 {
        return Err(Error::Internal("DoF region is unbounded".into()));
    }

    let zero = Rational::zero();
    let one = Rational::from_integer(1);
    // Axes written as lines a1*d1 + a2*d2 = 0.
    let mut lines: Vec<HalfPlane> = vec![
        HalfPlane { a1: one, a2: zero, b: zero },
        HalfPlane { a1: zero, a2: one, b: zero },
    ];
    lines.extend_from_slice(inequalities);

    let region = |p: &DofPoint| {
        !p.d1.is_negative() && !p.d2.is_negative() && inequalities.iter().all(|h| h.satisfied_by(p))
    };
    let mut points: Vec<DofPoint> = Vec::new();
    for (i, h) in lines.iter().enumerate() {
        for g in &lines[i + 1..] {
            if let Some(p) = intersect(h, g) {
                if region(&p) {
                    points.push(p);
                }
            }
        }
    }
    points.sort();
    points.dedup();

    Ok(convex_hull(points))
}

/// Andrew's monotone chain; strict turns only, so collinear points drop out.
fn convex_hull(points: Vec<DofPoint>) -> Vec<DofPoint> {
    if points.len() <= 2 {
        return points;
    }
    let mut lower: Vec<DofPoint> = Vec::new();
    for p in &points {
        while lower.len() >= 2
            && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).cmp(&Rational::zero())
                != Ordering::Greater
        {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<DofPoint> = Vec::new();
    for p in points.iter().rev() {
        while upper.len() >= 2
            && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).cmp(&Rational::zero())
                != Ordering::Greater
        {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[derive(Serialize, Deserialize)]
struct HalfPlaneJson {
    a1: String,
    a2: String,
    b: String,
}

#[derive(Serialize, Deserialize)]
struct RegionJson {
    inequalities: Vec<HalfPlaneJson>,
    vertices: Vec<[String; 2]>,
}

impl Serialize for DofRegion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RegionJson {
            inequalities: self
                .inequalities
                .iter()
                .map(|h| HalfPlaneJson {
                    a1: h.a1.to_string(),
                    a2: h.a2.to_string(),
                    b: h.b.to_string(),
                })
                .collect(),
            vertices: self
                .vertices
                .iter()
                .map(|v| [v.d1.to_string(), v.d2.to_string()])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DofRegion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RegionJson::deserialize(d)?;
        let inequalities = raw
            .inequalities
            .iter()
            .map(|h| {
                HalfPlane::new(
                    parse_rational(&h.a1)?,
                    parse_rational(&h.a2)?,
                    parse_rational(&h.b)?,
                )
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let region = DofRegion::new(inequalities).map_err(D::Error::custom)?;
        let listed = raw
            .vertices
            .iter()
            .map(|[a, b]| Ok(DofPoint::new(parse_rational(a)?, parse_rational(b)?)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        if listed != region.vertices {
            return Err(D::Error::custom(
                "listed vertices do not match the inequalities",
            ));
        }
        Ok(region)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hp(a1: Rational, a2: Rational, b: Rational) -> HalfPlane {
        HalfPlane::new(a1, a2, b).unwrap()
    }

    fn pts(v: &[(Rational, Rational)]) -> Vec<DofPoint> {
        v.iter().map(|&(a, b)| DofPoint::new(a, b)).collect()
    }

    /// Independent oracle: every feasible pairwise intersection that is not
    /// strictly inside a segment between two other feasible intersections.
    fn oracle_vertices(hs: &[HalfPlane]) -> Vec<DofPoint> {
        let mut all = hs.to_vec();
        let z = Rational::zero();
        let o = Rational::from_integer(1);
        all.push(HalfPlane { a1: o, a2: z, b: z });
        all.push(HalfPlane { a1: z, a2: o, b: z });
        let feasible = |p: &DofPoint| p.d1 >= z && p.d2 >= z && hs.iter().all(|h| h.satisfied_by(p));
        let mut cand = Vec::new();
        for i in 0..all.len() {
            for j in 0..all.len() {
                if i < j {
                    if let Some(p) = intersect(&all[i], &all[j]) {
                        if feasible(&p) && !cand.contains(&p) {
                            cand.push(p);
                        }
                    }
                }
            }
        }
        let mut out: Vec<DofPoint> = cand
            .iter()
            .filter(|p| {
                !cand.iter().any(|q| {
                    cand.iter().any(|r| {
                        q != *p && r != *p && cross(p, q, r).is_zero() && {
                            let dot = (q.d1 - p.d1) * (r.d1 - p.d1) + (q.d2 - p.d2) * (r.d2 - p.d2);
                            dot.is_negative()
                        }
                    })
                })
            })
            .copied()
            .collect();
        out.sort();
        out
    }

    #[test]
    fn unit_box() {
        let r = DofRegion::new(vec![HalfPlane::d1_at_most(int(1)), HalfPlane::d2_at_most(int(1))]).unwrap();
        assert_eq!(r.vertices(), pts(&[(int(0), int(0)), (int(1), int(0)), (int(1), int(1)), (int(0), int(1))]));
    }

    #[test]
    fn trapezoid_with_fractional_corner() {
        let hs = vec![
            HalfPlane::d1_at_most(int(1)),
            HalfPlane::d2_at_most(int(3)),
            hp(int(1), rat(2, 3), int(2)),
        ];
        let expected = pts(&[(int(0), int(0)), (int(1), int(0)), (int(1), rat(3, 2)), (int(0), int(3))]);
        let mut o = oracle_vertices(&hs);
        let mut e = expected.clone();
        o.sort();
        e.sort();
        assert_eq!(o, e);
        assert_eq!(DofRegion::new(hs).unwrap().vertices(), expected);
    }

    #[test]
    fn simplex_drops_inactive_box() {
        let r = DofRegion::new(vec![
            HalfPlane::d1_at_most(int(2)),
            HalfPlane::d2_at_most(int(2)),
            hp(int(1), int(1), int(2)),
        ])
        .unwrap();
        assert_eq!(r.vertices(), pts(&[(int(0), int(0)), (int(2), int(0)), (int(0), int(2))]));
    }

    #[test]
    fn unbounded_is_an_error() {
        let err = DofRegion::new(vec![HalfPlane::d1_at_most(int(1))]).unwrap_err();
        assert!(matches!(err, Error::Internal(_)));
    }

    #[test]
    fn rejects_bad_half_planes() {
        assert!(HalfPlane::new(int(0), int(0), int(1)).is_err());
        assert!(HalfPlane::new(rat(-1, 2), int(1), int(1)).is_err());
    }

    #[test]
    fn contains_is_exact() {
        let r = DofRegion::new(vec![
            HalfPlane::d1_at_most(int(1)),
            HalfPlane::d2_at_most(int(3)),
            hp(int(1), rat(2, 3), int(2)),
        ])
        .unwrap();
        assert!(r.contains(&DofPoint::new(int(1), rat(3, 2))));
        assert!(!r.contains(&DofPoint::new(int(1), int(2))));
        assert!(!r.contains(&DofPoint::new(int(1), rat(3, 2) + rat(1, 1_000_000))));
        assert!(r.contains(&DofPoint::origin()));
        assert_eq!(r.max_d2_at(int(1)), Some(rat(3, 2)));
        assert_eq!(r.max_d2_at(int(2)), None);
    }

    #[test]
    fn equality_ignores_redundant_constraints() {
        let a = DofRegion::new(vec![HalfPlane::d1_at_most(int(1)), HalfPlane::d2_at_most(int(1))]).unwrap();
        let b = DofRegion::new(vec![
            HalfPlane::d1_at_most(int(1)),
            HalfPlane::d2_at_most(int(1)),
            hp(int(1), int(1), int(5)),
        ])
        .unwrap();
        assert!(region_equal(&a, &b));
        assert!(region_subset(&a, &b) && region_subset(&b, &a));
        assert!(!region_strict_subset(&a, &b));
    }

    #[test]
    fn json_layout() {
        let r = DofRegion::new(vec![
            HalfPlane::d1_at_most(int(1)),
            HalfPlane::d2_at_most(int(3)),
            hp(int(1), rat(2, 3), int(2)),
        ])
        .unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"inequalities":[{"a1":"1","a2":"0","b":"1"},{"a1":"0","a2":"1","b":"3"},{"a1":"1","a2":"2/3","b":"2"}],"vertices":[["0","0"],["1","0"],["1","3/2"],["0","3"]]}"#
        );
        let back: DofRegion = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn json_rejects_inconsistent_vertices() {
        let s = r#"{"inequalities":[{"a1":"1","a2":"0","b":"1"},{"a1":"0","a2":"1","b":"1"}],"vertices":[["0","0"],["1","0"]]}"#;
        assert!(serde_json::from_str::<DofRegion>(s).is_err());
    }

    fn arb_half_plane() -> impl Strategy<Value = HalfPlane> {
        (0i64..5, 1i64..4, 0i64..5, 1i64..4, 1i64..9, 1i64..4)
            .prop_filter("nonzero normal", |(a, _, c, _, _, _)| *a != 0 || *c != 0)
            .prop_map(|(a, ad, c, cd, b, bd)| HalfPlane::new(rat(a, ad), rat(c, cd), rat(b, bd)).unwrap())
    }

    proptest! {
        #[test]
        fn vertices_match_oracle(extra in proptest::collection::vec(arb_half_plane(), 0..4), bx in 1i64..6, by in 1i64..6) {
            let mut hs = vec![HalfPlane::d1_at_most(int(bx as usize)), HalfPlane::d2_at_most(int(by as usize))];
            hs.extend(extra);
            let r = DofRegion::new(hs.clone()).unwrap();
            let mut got = r.vertices().to_vec();
            prop_assert_eq!(got[0], DofPoint::origin());
            for v in &got {
                prop_assert!(r.contains(v));
                let tight = hs.iter().filter(|h| h.tight_at(v)).count()
                    + usize::from(v.d1.is_zero()) + usize::from(v.d2.is_zero());
                prop_assert!(tight >= 2);
            }
            for w in got.windows(3) {
                prop_assert!(cross(&w[0], &w[1], &w[2]).is_positive());
            }
            got.sort();
            prop_assert_eq!(got, oracle_vertices(&hs));
        }

        #[test]
        fn json_round_trip(extra in proptest::collection::vec(arb_half_plane(), 0..3)) {
            let mut hs = vec![HalfPlane::d1_at_most(int(3)), HalfPlane::d2_at_most(int(4))];
            hs.extend(extra);
            let r = DofRegion::new(hs).unwrap();
            let s = serde_json::to_string(&r).unwrap();
            let back: DofRegion = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), s);
        }
    }
}
