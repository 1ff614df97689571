//! Quadrature rules on segments and small convex polygons.
//!
//! Face rules are mapped Gauss-Legendre rules. Polygon rules triangulate the
//! (convex) cut polygon and use a collapsed tensor-product Gauss rule on each
//! triangle, which keeps every weight positive at any requested degree.

use crate::error::QuadratureError;
use crate::geom::{self, Point};

/// Nodes and weights with a certified polynomial exactness degree.
#[derive(Debug, Clone)]
pub struct QuadRule {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    pub exact_degree: usize,
}

impl QuadRule {
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, f: impl Fn(Point) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&p, &w)| w * f(p)).sum()
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], exact through degree 2n - 1.
///
/// Nodes are found by Newton iteration on the Legendre recurrence; this is
/// accurate to machine precision for the supported range.
pub fn gauss_legendre_1d(n: usize) -> Result<(Vec<f64>, Vec<f64>), QuadratureError> {
    if n == 0 || n > 20 {
        return Err(QuadratureError::PointCountOutOfRange(n));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre value and derivative at x by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok((nodes, weights))
}

fn points_for_degree(d: usize) -> usize {
    (d + 2) / 2
}

/// Rule on the segment from `a` to `b`, exact for traces of 2D polynomials of
/// total degree `d`.
pub fn segment_rule(a: Point, b: Point, d: usize) -> QuadRule {
    let n = points_for_degree(d).max(1);
    let (nodes, weights) = gauss_legendre_1d(n).expect("segment rule point count in range");
    let len = geom::norm(geom::sub(b, a));
    let points = nodes.iter().map(|&t| geom::lerp(a, b, 0.5 * (t + 1.0))).collect();
    let weights = weights.iter().map(|&w| 0.5 * len * w).collect();
    QuadRule { points, weights, exact_degree: 2 * n - 1 }
}

/// Rule exact to total degree `d` on the triangle (v0, v1, v2).
///
/// Uses the Duffy-type map of a Gauss product rule; the (1 - u) Jacobian is
/// absorbed into the weights, so all weights stay strictly positive.
pub fn triangle_rule(v0: Point, v1: Point, v2: Point, d: usize) -> QuadRule {
    // s = u, t = v (1 - u): monomials of total degree d pick up one extra
    // power of u from the Jacobian.
    let nu = (d + 3) / 2;
    let nv = (d + 2) / 2;
    let (xu, wu) = gauss_legendre_1d(nu.clamp(1, 20)).unwrap();
    let (xv, wv) = gauss_legendre_1d(nv.clamp(1, 20)).unwrap();
    let jac2 = geom::polygon_area(&[v0, v1, v2]) * 2.0;
    let mut points = Vec::with_capacity(nu * nv);
    let mut weights = Vec::with_capacity(nu * nv);
    for (iu, &u_raw) in xu.iter().enumerate() {
        let u = 0.5 * (u_raw + 1.0);
        for (iv, &v_raw) in xv.iter().enumerate() {
            let v = 0.5 * (v_raw + 1.0);
            let s = u;
            let t = v * (1.0 - u);
            let x = v0[0] + s * (v1[0] - v0[0]) + t * (v2[0] - v0[0]);
            let y = v0[1] + s * (v1[1] - v0[1]) + t * (v2[1] - v0[1]);
            points.push([x, y]);
            weights.push(0.25 * wu[iu] * wv[iv] * (1.0 - u) * jac2);
        }
    }
    QuadRule { points, weights, exact_degree: d }
}

/// Rule exact to total degree `d` on a simple convex CCW polygon with 3 to 5
/// vertices, by fanning triangles from the centroid (a triangle is used
/// directly). All weights are positive.
pub fn polygon_rule(polygon: &[Point], d: usize) -> Result<QuadRule, QuadratureError> {
    if !(3..=5).contains(&polygon.len()) {
        return Err(QuadratureError::UnsupportedPolygon(polygon.len()));
    }
    if polygon.len() == 3 {
        let r = triangle_rule(polygon[0], polygon[1], polygon[2], d);
        if r.total_weight() <= 0.0 {
            return Err(QuadratureError::NonSimplePolygon);
        }
        return Ok(r);
    }
    let c = geom::polygon_centroid(polygon);
    let m = polygon.len();
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for k in 0..m {
        let v1 = polygon[k];
        let v2 = polygon[(k + 1) % m];
        if geom::polygon_area(&[c, v1, v2]) <= 0.0 {
            return Err(QuadratureError::NonSimplePolygon);
        }
        let tri = triangle_rule(c, v1, v2, d);
        points.extend(tri.points);
        weights.extend(tri.weights);
    }
    Ok(QuadRule { points, weights, exact_degree: d })
}

/// Tensor Gauss rule on the axis-aligned square `[lo, lo+side]^2`, exact for
/// total (indeed tensor) degree `d`.
pub fn square_rule(lo: Point, side: f64, d: usize) -> QuadRule {
    let n = points_for_degree(d).max(1);
    let (nodes, w1) = gauss_legendre_1d(n.min(20)).unwrap();
    let half = 0.5 * side;
    let cx = lo[0] + half;
    let cy = lo[1] + half;
    let mut points = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for (i, &xi) in nodes.iter().enumerate() {
        for (j, &yj) in nodes.iter().enumerate() {
            points.push([cx + half * xi, cy + half * yj]);
            weights.push(w1[i] * w1[j] * half * half);
        }
    }
    QuadRule { points, weights, exact_degree: 2 * n - 1 }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Analytic polygon moment via the divergence theorem:
    /// integral of x^a y^b over P equals the boundary integral of
    /// x^(a+1) y^b / (a+1) dy, accumulated edge by edge with exact
    /// 1D Gauss quadrature in the edge parameter.
    fn moment_oracle(poly: &[Point], a: usize, b: usize) -> f64 {
        let deg = a + 1 + b;
        let (nodes, weights) = gauss_legendre_1d(deg / 2 + 1).unwrap();
        let m = poly.len();
        let mut acc = 0.0;
        for k in 0..m {
            let p = poly[k];
            let q = poly[(k + 1) % m];
            let dy = q[1] - p[1];
            let mut edge = 0.0;
            for (t, w) in nodes.iter().zip(&weights) {
                let s = 0.5 * (t + 1.0);
                let x = p[0] + s * (q[0] - p[0]);
                let y = p[1] + s * (q[1] - p[1]);
                edge += w * 0.5 * x.powi(a as i32 + 1) * y.powi(b as i32);
            }
            acc += edge * dy / (a as f64 + 1.0);
        }
        acc
    }

    #[test]
    fn gauss_midpoint_rule() {
        let (x, w) = gauss_legendre_1d(1).unwrap();
        assert_eq!(x, vec![0.0]);
        assert_eq!(w, vec![2.0]);
    }

    #[test]
    fn gauss_two_point_rule() {
        let (x, w) = gauss_legendre_1d(2).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert!((x[0] + r).abs() < 1e-15 && (x[1] - r).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15 && (w[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gauss_five_point_degree_eight() {
        let (x, w) = gauss_legendre_1d(5).unwrap();
        let integral: f64 = x.iter().zip(&w).map(|(&t, &w)| w * t.powi(8)).sum();
        assert!((integral - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_rejects_out_of_range() {
        assert!(gauss_legendre_1d(0).is_err());
        assert!(gauss_legendre_1d(21).is_err());
    }

    #[test]
    fn face_rule_linear_moment_is_midpoint_value() {
        let r = segment_rule([0.0, 0.5], [1.0, 0.5], 1);
        let m = r.integrate(|p| p[0]);
        assert!((m - 0.5).abs() < 1e-15);
    }

    #[test]
    fn face_rule_on_ramp_matches_parametric_integral() {
        // Segment from (0.2, 0.0) to (0.7, 0.5) at 45 degrees; integrate x^2 y^2 ds.
        let (a, b) = ([0.2, 0.0], [0.7, 0.5]);
        let r = segment_rule(a, b, 4);
        let got = r.integrate(|p| p[0] * p[0] * p[1] * p[1]);
        // Parametric: x = 0.2 + t/2, y = t/2, ds = dt * |b-a|, t in [0,1].
        let len = std::f64::consts::SQRT_2 * 0.5;
        let exact = {
            // integral of (0.2 + s)^2 s^2 ds over s in [0, 0.5], scaled by ds/dx = sqrt(2)
            // with substitution s = t/2. Expand: s^4 + 0.4 s^3 + 0.04 s^2.
            let s = 0.5f64;
            std::f64::consts::SQRT_2
                * (s.powi(5) / 5.0 + 0.4 * s.powi(4) / 4.0 + 0.04 * s.powi(3) / 3.0)
        };
        assert!((got - exact).abs() < 1e-12, "got {got}, exact {exact}");
        let _ = len;
    }

    #[test]
    fn face_rule_degree_zero_is_midpoint() {
        let r = segment_rule([0.0, 0.0], [2.0, 0.0], 0);
        assert_eq!(r.points.len(), 1);
        assert!((r.points[0][0] - 1.0).abs() < 1e-15);
        assert!((r.weights[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn polygon_rule_unit_square_moments() {
        let square = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let r = polygon_rule(&square, 3).unwrap();
        assert!((r.integrate(|_| 1.0) - 1.0).abs() < 1e-14);
        assert!((r.integrate(|p| p[0]) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn polygon_rule_pentagon_weight_sum() {
        let pentagon = [
            [0.25, 0.0],
            [0.26, 0.0],
            [0.5, 0.24],
            [0.5, 0.25],
            [0.25, 0.25],
        ];
        let r = polygon_rule(&pentagon, 0).unwrap();
        assert!((r.total_weight() - 0.0337).abs() < 1e-15);
    }

    #[test]
    fn triangle_xy_moment() {
        let r = polygon_rule(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], 2).unwrap();
        assert!((r.integrate(|p| p[0] * p[1]) - 1.0 / 24.0).abs() < 1e-14);
    }

    #[test]
    fn weights_positive_everywhere() {
        let pentagon = [
            [0.25, 0.0],
            [0.26, 0.0],
            [0.5, 0.24],
            [0.5, 0.25],
            [0.25, 0.25],
        ];
        for d in 0..=12 {
            let r = polygon_rule(&pentagon, d).unwrap();
            assert!(r.weights.iter().all(|&w| w > 0.0), "degree {d}");
        }
    }

    #[test]
    fn exactness_against_moment_oracle() {
        // Polygons of the kinds the mesher produces.
        let polys: Vec<Vec<Point>> = vec![
            vec![[0.5, 0.24], [0.51, 0.25], [0.5, 0.25]],
            vec![[0.25, 0.0], [0.26, 0.0], [0.5, 0.24], [0.5, 0.25], [0.25, 0.25]],
            vec![[0.0, 0.1], [0.3, 0.05], [0.3, 0.4], [0.0, 0.4]],
        ];
        for poly in &polys {
            for d in 0..=8usize {
                let r = polygon_rule(poly, d).unwrap();
                for a in 0..=d {
                    for b in 0..=(d - a) {
                        let got = r.integrate(|p| p[0].powi(a as i32) * p[1].powi(b as i32));
                        let want = moment_oracle(poly, a, b);
                        let scale = want.abs().max(1e-30);
                        assert!(
                            (got - want).abs() / scale < 1e-11,
                            "poly {poly:?} d={d} moment ({a},{b}): got {got}, want {want}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn square_rule_matches_polygon_rule() {
        let lo = [0.25, 0.5];
        let side = 0.25;
        let sq = square_rule(lo, side, 6);
        let poly = [
            lo,
            [lo[0] + side, lo[1]],
            [lo[0] + side, lo[1] + side],
            [lo[0], lo[1] + side],
        ];
        let pr = polygon_rule(&poly, 6).unwrap();
        for (a, b) in [(0, 0), (2, 1), (3, 3)] {
            let f = |p: Point| p[0].powi(a) * p[1].powi(b);
            assert!((sq.integrate(f) - pr.integrate(f)).abs() < 1e-14);
        }
    }
}
