//! Small planar geometry helpers: points, polygons, half-plane clipping.

/// A point (or vector) in the plane.
pub type Point = [f64; 2];

#[inline]
pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn scale(a: Point, s: f64) -> Point {
    [a[0] * s, a[1] * s]
}

#[inline]
pub fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

#[inline]
pub fn lerp(a: Point, b: Point, t: f64) -> Point {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

/// Signed polygon area by the shoelace formula; positive for counterclockwise.
pub fn polygon_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    let mut acc = 0.0;
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        acc += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * acc
}

/// Area centroid of a simple polygon.
pub fn polygon_centroid(poly: &[Point]) -> Point {
    let n = poly.len();
    let mut cx = 0.0;
    let mut cy = 0.0;
    let mut a = 0.0;
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let w = p[0] * q[1] - q[0] * p[1];
        a += w;
        cx += (p[0] + q[0]) * w;
        cy += (p[1] + q[1]) * w;
    }
    let a = 0.5 * a;
    [cx / (6.0 * a), cy / (6.0 * a)]
}

/// An oriented line given by a unit normal and offset: the kept half-plane is
/// `{ x : <normal, x> - offset >= 0 }`, and `signed_dist` is a true distance.
#[derive(Debug, Clone, Copy)]
pub struct HalfPlane {
    pub normal: Point,
    pub offset: f64,
}

impl HalfPlane {
    #[inline]
    pub fn signed_dist(&self, p: Point) -> f64 {
        dot(self.normal, p) - self.offset
    }

    /// Orthogonal projection of `p` onto the boundary line.
    #[inline]
    pub fn project(&self, p: Point) -> Point {
        let d = self.signed_dist(p);
        sub(p, scale(self.normal, d))
    }
}

/// Sutherland-Hodgman clip of a counterclockwise polygon against one half-plane.
///
/// Vertices within `snap_tol` of the boundary line count as inside and are
/// snapped onto the line; intersection points are likewise projected onto the
/// line so that boundary edges satisfy the line equation to machine precision.
/// Returns an empty vector when the result is degenerate (fewer than three
/// distinct vertices or nonpositive area).
pub fn clip_polygon_halfplane(poly: &[Point], hp: &HalfPlane, snap_tol: f64) -> Vec<Point> {
    if poly.len() < 3 {
        return Vec::new();
    }
    let n = poly.len();
    let dist: Vec<f64> = poly.iter().map(|&p| hp.signed_dist(p)).collect();
    if dist.iter().all(|&d| d > snap_tol) {
        return poly.to_vec();
    }
    let mut out: Vec<Point> = Vec::with_capacity(n + 1);
    for i in 0..n {
        let j = (i + 1) % n;
        let (s, e) = (poly[i], poly[j]);
        let (ds, de) = (dist[i], dist[j]);
        let s_on = ds.abs() <= snap_tol;
        let e_on = de.abs() <= snap_tol;
        let s_in = s_on || ds > 0.0;
        let e_in = e_on || de > 0.0;
        if e_in {
            if !s_in && !e_on {
                out.push(hp.project(lerp(s, e, ds / (ds - de))));
            }
            out.push(if e_on { hp.project(e) } else { e });
        } else if s_in && !s_on {
            out.push(hp.project(lerp(s, e, ds / (ds - de))));
        }
    }
    // Drop duplicate consecutive vertices created by snapping.
    let mut cleaned: Vec<Point> = Vec::with_capacity(out.len());
    for &p in &out {
        if let Some(&last) = cleaned.last() {
            if norm(sub(p, last)) <= snap_tol {
                continue;
            }
        }
        cleaned.push(p);
    }
    if cleaned.len() >= 2 {
        let first = cleaned[0];
        let last = *cleaned.last().unwrap();
        if norm(sub(first, last)) <= snap_tol {
            cleaned.pop();
        }
    }
    if cleaned.len() < 3 || polygon_area(&cleaned) <= 0.0 {
        return Vec::new();
    }
    cleaned
}
