//! Convex rate-region algebra in the nonnegative quadrant.
//!
//! Regions are closed convex polygons stored as CCW vertex lists starting at
//! the origin. The primitive cell is [`RatePentagon`], the three-inequality
//! set `{0 <= R1 <= a, 0 <= R2 <= b, R1 + R2 <= c}`. All coordinates are in
//! bits. Degenerate regions (a single point or a segment) are first-class:
//! they appear whenever a bound collapses to the origin.

use serde::{Deserialize, Serialize};

/// Cross-product tolerance for convexity/collinearity predicates.
pub const GEOM_TOL: f64 = 1e-12;

/// A 2D rate point `(R1, R2)` in bits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub r1: f64,
    pub r2: f64,
}

impl Point {
    pub fn new(r1: f64, r2: f64) -> Self {
        Point { r1, r2 }
    }

    pub fn origin() -> Self {
        Point { r1: 0.0, r2: 0.0 }
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.r1 * other.r1 + self.r2 * other.r2
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(self.r1 + other.r1, self.r2 + other.r2)
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::new(self.r1 - other.r1, self.r2 - other.r2)
    }

    pub fn scale(&self, c: f64) -> Point {
        Point::new(c * self.r1, c * self.r2)
    }

    pub fn norm(&self) -> f64 {
        self.r1.hypot(self.r2)
    }

    fn lex_le(&self, other: &Point) -> bool {
        (self.r1, self.r2) <= (other.r1, other.r2)
    }
}

impl From<[f64; 2]> for Point {
    fn from(v: [f64; 2]) -> Self {
        Point::new(v[0], v[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.r1, p.r2]
    }
}

/// Signed area of the triangle `(o, a, b)`; positive when `o -> a -> b` turns left.
pub fn cross(o: &Point, a: &Point, b: &Point) -> f64 {
    (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1)
}

/// The rate pentagon `{0 <= R1 <= a, 0 <= R2 <= b, R1 + R2 <= c}`.
///
/// Negative inputs are clamped to zero on construction, matching the rule
/// that a bound with a negative right-hand side denotes the empty rate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatePentagon {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl RatePentagon {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        RatePentagon {
            a: a.max(0.0),
            b: b.max(0.0),
            c: c.max(0.0),
        }
    }

    /// Extreme points of the pentagon (duplicates possible in degenerate cases).
    pub fn corner_candidates(&self) -> Vec<Point> {
        let (a, b, c) = (self.a, self.b, self.c);
        let ae = a.min(c);
        let be = b.min(c);
        let mut pts = vec![Point::origin(), Point::new(ae, 0.0), Point::new(0.0, be)];
        if a + b > c {
            if a < c {
                pts.push(Point::new(a, c - a));
            }
            if b < c {
                pts.push(Point::new(c - b, b));
            }
        } else {
            // Sum constraint slack: the region is the rectangle [0,a] x [0,b].
            pts.push(Point::new(a, b));
        }
        pts
    }

    pub fn to_region(&self) -> RateRegion {
        RateRegion::from_points(&self.corner_candidates())
    }

    /// True when every face is zero, i.e. the pentagon is the origin.
    pub fn is_origin(&self) -> bool {
        self.a == 0.0 && self.b == 0.0 && self.c == 0.0
    }

    /// Componentwise domination: `self` dominated by `other` implies region containment.
    pub fn dominated_by(&self, other: &RatePentagon) -> bool {
        self.a <= other.a && self.b <= other.b && self.c <= other.c
    }
}

/// Closed convex polygon in the nonnegative quadrant containing the origin.
///
/// Vertices are CCW starting from `(0, 0)`; collinear and duplicate vertices
/// are pruned at tolerance [`GEOM_TOL`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateRegion {
    vertices: Vec<Point>,
}

impl RateRegion {
    /// The degenerate region `{(0, 0)}`.
    pub fn origin() -> Self {
        RateRegion {
            vertices: vec![Point::origin()],
        }
    }

    /// Convex hull of `points`, canonicalized CCW from the lexicographic minimum.
    pub fn from_points(points: &[Point]) -> Self {
        RateRegion {
            vertices: convex_hull(points),
        }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Violated invariants, if any (empty vector means the region is well formed).
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        if self.vertices.is_empty() {
            problems.push("empty vertex list".to_string());
            return problems;
        }
        if !self
            .vertices
            .iter()
            .any(|v| v.r1.abs() <= GEOM_TOL && v.r2.abs() <= GEOM_TOL)
        {
            problems.push("region does not contain the origin".to_string());
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if v.r1 < -GEOM_TOL || v.r2 < -GEOM_TOL {
                problems.push(format!("vertex {i} has a negative coordinate"));
            }
        }
        let k = self.vertices.len();
        if k >= 3 {
            for i in 0..k {
                let o = &self.vertices[i];
                let a = &self.vertices[(i + 1) % k];
                let b = &self.vertices[(i + 2) % k];
                if cross(o, a, b) < -GEOM_TOL {
                    problems.push(format!("vertex triple starting at {i} turns right"));
                }
            }
        }
        problems
    }

    /// Minkowski sum by merging the two CCW edge cycles in angular order.
    pub fn minkowski_sum(&self, other: &RateRegion) -> RateRegion {
        // A single point translates the other region.
        if self.vertices.len() == 1 {
            let t = self.vertices[0];
            return RateRegion::from_points(
                &other.vertices.iter().map(|v| v.add(&t)).collect::<Vec<_>>(),
            );
        }
        if other.vertices.len() == 1 {
            return other.minkowski_sum(self);
        }
        let ea = edge_cycle(&self.vertices);
        let eb = edge_cycle(&other.vertices);
        let start = bottom_most(&self.vertices).add(&bottom_most(&other.vertices));
        let mut chain = vec![start];
        let mut p = start;
        let (mut i, mut j) = (0usize, 0usize);
        while i < ea.len() || j < eb.len() {
            let step = if i == ea.len() {
                let e = eb[j];
                j += 1;
                e
            } else if j == eb.len() {
                let e = ea[i];
                i += 1;
                e
            } else {
                match angle_cmp(&ea[i], &eb[j]) {
                    std::cmp::Ordering::Less => {
                        let e = ea[i];
                        i += 1;
                        e
                    }
                    std::cmp::Ordering::Greater => {
                        let e = eb[j];
                        j += 1;
                        e
                    }
                    std::cmp::Ordering::Equal => {
                        let e = ea[i].add(&eb[j]);
                        i += 1;
                        j += 1;
                        e
                    }
                }
            };
            p = p.add(&step);
            chain.push(p);
        }
        RateRegion::from_points(&chain)
    }

    /// Scalar multiple `c * A`; `c = 0` collapses to the origin.
    pub fn scale(&self, c: f64) -> RateRegion {
        assert!(c >= 0.0, "scale factor must be nonnegative");
        RateRegion::from_points(&self.vertices.iter().map(|v| v.scale(c)).collect::<Vec<_>>())
    }

    /// Convex hull of the union of a nonempty list of regions.
    pub fn hull_of_union(regions: &[RateRegion]) -> RateRegion {
        assert!(!regions.is_empty(), "hull of an empty list");
        let pts: Vec<Point> = regions
            .iter()
            .flat_map(|r| r.vertices.iter().copied())
            .collect();
        RateRegion::from_points(&pts)
    }

    /// Intersection of a nonempty list of regions (never empty: all contain the origin).
    pub fn intersect(regions: &[RateRegion]) -> RateRegion {
        assert!(!regions.is_empty(), "intersection of an empty list");
        let mut acc = regions[0].clone();
        for r in &regions[1..] {
            acc = acc.intersect_pair(r);
        }
        acc
    }

    fn intersect_pair(&self, other: &RateRegion) -> RateRegion {
        // Clip self by each half-plane of other (left of every CCW edge).
        let mut poly: Vec<Point> = self.vertices.clone();
        if other.vertices.len() == 1 {
            // Other is the origin; intersection is the origin.
            return RateRegion::origin();
        }
        for (a, b) in edge_pairs(&other.vertices) {
            poly = clip_half_plane(&poly, &a, &b);
            if poly.is_empty() {
                return RateRegion::origin();
            }
        }
        RateRegion::from_points(&poly)
    }

    /// Support value `max_{v in A} <v, dir>` and its attaining vertex.
    ///
    /// Ties within `1e-12` go to the lexicographically largest vertex.
    pub fn support(&self, dir: &Point) -> (f64, Point) {
        assert!(dir.norm() > 0.0, "support direction must be nonzero");
        let mut best = f64::NEG_INFINITY;
        let mut arg = self.vertices[0];
        for v in &self.vertices {
            let d = v.dot(dir);
            if d > best + 1e-12 {
                best = d;
                arg = *v;
            } else if (d - best).abs() <= 1e-12 && arg.lex_le(v) {
                arg = *v;
            }
        }
        (best, arg)
    }

    /// Euclidean distance from `p` to the region (zero when inside).
    pub fn distance_to_point(&self, p: &Point) -> f64 {
        if self.contains_point(p, 0.0) {
            return 0.0;
        }
        match self.vertices.len() {
            1 => p.sub(&self.vertices[0]).norm(),
            _ => edge_pairs(&self.vertices)
                .map(|(a, b)| point_segment_distance(p, &a, &b))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// True when `p` lies in the region inflated by `tol` (Euclidean slack).
    pub fn contains_point(&self, p: &Point, tol: f64) -> bool {
        match self.vertices.len() {
            1 => p.sub(&self.vertices[0]).norm() <= tol.max(GEOM_TOL),
            2 => point_segment_distance(p, &self.vertices[0], &self.vertices[1]) <= tol.max(GEOM_TOL),
            _ => edge_pairs(&self.vertices).all(|(a, b)| {
                let e = b.sub(&a);
                let len = e.norm();
                // Signed distance of p to the edge line, positive on the inside.
                cross(&a, &b, p) >= -(tol.max(GEOM_TOL)) * len
            }),
        }
    }

    /// True when every vertex of `other` lies in `self` within `tol`.
    pub fn contains_region(&self, other: &RateRegion, tol: f64) -> bool {
        other.vertices.iter().all(|v| self.contains_point(v, tol))
    }

    /// Largest distance from a vertex of `other` to `self` (containment defect).
    pub fn containment_defect(&self, other: &RateRegion) -> f64 {
        other
            .vertices
            .iter()
            .map(|v| self.distance_to_point(v))
            .fold(0.0, f64::max)
    }

    /// Symmetric Hausdorff distance between two convex regions.
    pub fn hausdorff(&self, other: &RateRegion) -> f64 {
        let d1 = other.containment_defect(self);
        let d2 = self.containment_defect(other);
        d1.max(d2)
    }

    /// Tightest pentagon parameters `(max R1, max R2, max R1+R2)` over the region.
    pub fn pentagon_params(&self) -> (f64, f64, f64) {
        let a = self.vertices.iter().map(|v| v.r1).fold(0.0, f64::max);
        let b = self.vertices.iter().map(|v| v.r2).fold(0.0, f64::max);
        let c = self
            .vertices
            .iter()
            .map(|v| v.r1 + v.r2)
            .fold(0.0, f64::max);
        (a, b, c)
    }

    /// Vertex rows "r1,r2" for plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r1,r2\n");
        for v in &self.vertices {
            out.push_str(&format!("{},{}\n", v.r1, v.r2));
        }
        out
    }
}

/// One inclusion check of a sup/sub-additivity triple `(n, m, n + m)`.
#[derive(Clone, Debug, Serialize)]
pub struct TripleCheck {
    pub n: usize,
    pub m: usize,
    pub total: usize,
    /// Worst containment defect over the vertices of the included side, in bits.
    pub violation: f64,
    pub ok: bool,
}

/// Report of [`check_superadditive`] / [`check_subadditive`] over an indexed sequence.
#[derive(Clone, Debug, Serialize)]
pub struct AdditivityReport {
    pub kind: String,
    pub tolerance: f64,
    pub triples: Vec<TripleCheck>,
}

impl AdditivityReport {
    pub fn all_ok(&self) -> bool {
        self.triples.iter().all(|t| t.ok)
    }

    pub fn worst_violation(&self) -> f64 {
        self.triples.iter().map(|t| t.violation).fold(0.0, f64::max)
    }
}

fn lookup(seq: &[(usize, RateRegion)], n: usize) -> Option<&RateRegion> {
    seq.iter().find(|(k, _)| *k == n).map(|(_, r)| r)
}

/// Checks `N * A_N ⊇ n * A_n + (N - n) * A_{N-n}` for every triple available in `seq`.
pub fn check_superadditive(seq: &[(usize, RateRegion)], tau: f64) -> AdditivityReport {
    additivity_check(seq, tau, true)
}

/// Checks `N * A_N ⊆ n * A_n + (N - n) * A_{N-n}` for every triple available in `seq`.
pub fn check_subadditive(seq: &[(usize, RateRegion)], tau: f64) -> AdditivityReport {
    additivity_check(seq, tau, false)
}

fn additivity_check(seq: &[(usize, RateRegion)], tau: f64, sup: bool) -> AdditivityReport {
    let mut triples = Vec::new();
    let mut indices: Vec<usize> = seq.iter().map(|(n, _)| *n).collect();
    indices.sort_unstable();
    indices.dedup();
    for &total in &indices {
        for &n in &indices {
            let m = match total.checked_sub(n) {
                Some(m) if m >= 1 && n <= m => m,
                _ => continue,
            };
            let (Some(an), Some(am), Some(at)) =
                (lookup(seq, n), lookup(seq, m), lookup(seq, total))
            else {
                continue;
            };
            let scaled_total = at.scale(total as f64);
            let sum = an.scale(n as f64).minkowski_sum(&am.scale(m as f64));
            let violation = if sup {
                scaled_total.containment_defect(&sum)
            } else {
                sum.containment_defect(&scaled_total)
            };
            triples.push(TripleCheck {
                n,
                m,
                total,
                violation,
                ok: violation <= tau,
            });
        }
    }
    AdditivityReport {
        kind: if sup { "sup-additive" } else { "sub-additive" }.to_string(),
        tolerance: tau,
        triples,
    }
}

/// Andrew monotone chain; returns CCW vertices starting at the lexicographic minimum.
fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|p, q| {
        p.r1.partial_cmp(&q.r1)
            .unwrap()
            .then(p.r2.partial_cmp(&q.r2).unwrap())
    });
    pts.dedup_by(|p, q| (p.r1 - q.r1).abs() <= GEOM_TOL && (p.r2 - q.r2).abs() <= GEOM_TOL);
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= GEOM_TOL
        {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= GEOM_TOL
        {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 1 {
        return lower;
    }
    lower
}

/// CCW edge vectors starting from the bottom-most (then left-most) vertex.
fn edge_cycle(vertices: &[Point]) -> Vec<Point> {
    let k = vertices.len();
    if k == 2 {
        // A segment traverses forward then back.
        let e = vertices[1].sub(&vertices[0]);
        let start = if vertices[0].r2 < vertices[1].r2
            || (vertices[0].r2 == vertices[1].r2 && vertices[0].r1 <= vertices[1].r1)
        {
            e
        } else {
            e.scale(-1.0)
        };
        return vec![start, start.scale(-1.0)];
    }
    let start = (0..k)
        .min_by(|&i, &j| {
            (vertices[i].r2, vertices[i].r1)
                .partial_cmp(&(vertices[j].r2, vertices[j].r1))
                .unwrap()
        })
        .unwrap();
    (0..k)
        .map(|off| {
            let i = (start + off) % k;
            vertices[(i + 1) % k].sub(&vertices[i])
        })
        .collect()
}

fn bottom_most(vertices: &[Point]) -> Point {
    *vertices
        .iter()
        .min_by(|p, q| (p.r2, p.r1).partial_cmp(&(q.r2, q.r1)).unwrap())
        .unwrap()
}

/// Compares edge vectors by CCW angle from the positive x-axis, in `[0, 2*pi)`.
fn angle_cmp(a: &Point, b: &Point) -> std::cmp::Ordering {
    let half = |p: &Point| -> u8 {
        if p.r2 > 0.0 || (p.r2 == 0.0 && p.r1 > 0.0) {
            0
        } else {
            1
        }
    };
    let (ha, hb) = (half(a), half(b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    let cr = a.r1 * b.r2 - a.r2 * b.r1;
    if cr > GEOM_TOL {
        std::cmp::Ordering::Less
    } else if cr < -GEOM_TOL {
        std::cmp::Ordering::Greater
    } else {
        std::cmp::Ordering::Equal
    }
}

fn edge_pairs(vertices: &[Point]) -> impl Iterator<Item = (Point, Point)> + '_ {
    let k = vertices.len();
    (0..k).map(move |i| (vertices[i], vertices[(i + 1) % k]))
}

/// Sutherland-Hodgman clip of `poly` by the half-plane left of `a -> b`.
fn clip_half_plane(poly: &[Point], a: &Point, b: &Point) -> Vec<Point> {
    if poly.is_empty() {
        return Vec::new();
    }
    let edge_len = b.sub(a).norm().max(GEOM_TOL);
    let side = |p: &Point| cross(a, b, p) / edge_len;
    if poly.len() == 1 {
        return if side(&poly[0]) >= -GEOM_TOL {
            poly.to_vec()
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    let k = poly.len();
    for i in 0..k {
        let p = poly[i];
        let q = poly[(i + 1) % k];
        let (dp, dq) = (side(&p), side(&q));
        if dp >= -GEOM_TOL {
            out.push(p);
        }
        if (dp > GEOM_TOL && dq < -GEOM_TOL) || (dp < -GEOM_TOL && dq > GEOM_TOL) {
            let t = dp / (dp - dq);
            out.push(Point::new(p.r1 + t * (q.r1 - p.r1), p.r2 + t * (q.r2 - p.r2)));
        }
    }
    out
}

fn point_segment_distance(p: &Point, a: &Point, b: &Point) -> f64 {
    let ab = b.sub(a);
    let len2 = ab.dot(&ab);
    if len2 <= GEOM_TOL * GEOM_TOL {
        return p.sub(a).norm();
    }
    let t = (p.sub(a).dot(&ab) / len2).clamp(0.0, 1.0);
    p.sub(&Point::new(a.r1 + t * ab.r1, a.r2 + t * ab.r2)).norm()
}
