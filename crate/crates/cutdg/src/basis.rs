//! Modal basis of total degree p anchored to background squares.
//!
//! Each cell uses scaled Legendre products on the reference coordinates of its
//! *background* square, restricted to total degree <= p. The basis is
//! orthonormal with respect to 1/|square| times the square's L2 inner product,
//! so full-cell mass matrices equal h^2 times the identity, and conditioning
//! does not degrade under refinement. Because the functions are plain
//! polynomials in global coordinates, evaluating them outside the cell is
//! well-defined; that evaluation is exactly the extension operator used by
//! the stabilization.

use crate::geom::Point;

pub const MAX_DEGREE: usize = 8;

/// Legendre values P_0..P_deg at x (valid for any real x).
#[inline]
fn legendre(deg: usize, x: f64, out: &mut [f64]) {
    out[0] = 1.0;
    if deg == 0 {
        return;
    }
    out[1] = x;
    for k in 1..deg {
        let kf = k as f64;
        out[k + 1] = ((2.0 * kf + 1.0) * x * out[k] - kf * out[k - 1]) / (kf + 1.0);
    }
}

/// Legendre derivatives P'_0..P'_deg at x via P'_{n+1} = (2n+1) P_n + P'_{n-1}.
#[inline]
fn legendre_deriv(deg: usize, p: &[f64], out: &mut [f64]) {
    out[0] = 0.0;
    if deg == 0 {
        return;
    }
    out[1] = 1.0;
    for k in 1..deg {
        out[k + 1] = (2.0 * k as f64 + 1.0) * p[k] + out[k - 1];
    }
}

#[derive(Debug, Clone)]
pub struct Basis {
    pub p: usize,
    pub ndof: usize,
    /// Mode exponents (a, b) with a + b <= p, graded by total degree.
    pub modes: Vec<(usize, usize)>,
    scales: Vec<f64>,
}

impl Basis {
    pub fn new(p: usize) -> Self {
        assert!(p <= MAX_DEGREE, "degree {p} above supported maximum {MAX_DEGREE}");
        let mut modes = Vec::new();
        for d in 0..=p {
            for a in (0..=d).rev() {
                modes.push((a, d - a));
            }
        }
        let scales = modes
            .iter()
            .map(|&(a, b)| (((2 * a + 1) * (2 * b + 1)) as f64).sqrt())
            .collect();
        let ndof = modes.len();
        debug_assert_eq!(ndof, (p + 1) * (p + 2) / 2);
        Self { p, ndof, modes, scales }
    }

    /// Values of all basis functions of the cell anchored at `center`/`h`,
    /// evaluated at the (arbitrary) point `x`.
    pub fn values(&self, center: Point, h: f64, x: Point, out: &mut [f64]) {
        self.values_scaled(center, [h, h], x, out);
    }

    /// Like [`values`](Self::values) with separate anchor extents per axis.
    pub fn values_scaled(&self, center: Point, extent: [f64; 2], x: Point, out: &mut [f64]) {
        let xi = 2.0 * (x[0] - center[0]) / extent[0];
        let eta = 2.0 * (x[1] - center[1]) / extent[1];
        let mut lx = [0.0; MAX_DEGREE + 1];
        let mut ly = [0.0; MAX_DEGREE + 1];
        legendre(self.p, xi, &mut lx);
        legendre(self.p, eta, &mut ly);
        for (k, &(a, b)) in self.modes.iter().enumerate() {
            out[k] = self.scales[k] * lx[a] * ly[b];
        }
    }

    /// Gradients of all basis functions, same conventions as `values`.
    pub fn gradients(&self, center: Point, h: f64, x: Point, out: &mut [[f64; 2]]) {
        let xi = 2.0 * (x[0] - center[0]) / h;
        let eta = 2.0 * (x[1] - center[1]) / h;
        let mut lx = [0.0; MAX_DEGREE + 1];
        let mut ly = [0.0; MAX_DEGREE + 1];
        let mut dx = [0.0; MAX_DEGREE + 1];
        let mut dy = [0.0; MAX_DEGREE + 1];
        legendre(self.p, xi, &mut lx);
        legendre(self.p, eta, &mut ly);
        legendre_deriv(self.p, &lx, &mut dx);
        legendre_deriv(self.p, &ly, &mut dy);
        let scale = 2.0 / h;
        for (k, &(a, b)) in self.modes.iter().enumerate() {
            out[k] = [
                self.scales[k] * dx[a] * ly[b] * scale,
                self.scales[k] * lx[a] * dy[b] * scale,
            ];
        }
    }
}

/// Coefficients of an element of the broken polynomial space: one modal block
/// of length `ndof` per mesh cell.
#[derive(Debug, Clone)]
pub struct DgFunction {
    pub ndof: usize,
    pub data: Vec<f64>,
}

impl DgFunction {
    pub fn zeros(ndof: usize, ncells: usize) -> Self {
        Self { ndof, data: vec![0.0; ndof * ncells] }
    }

    pub fn ncells(&self) -> usize {
        self.data.len() / self.ndof
    }

    #[inline]
    pub fn block(&self, cell: u32) -> &[f64] {
        let k = cell as usize * self.ndof;
        &self.data[k..k + self.ndof]
    }

    #[inline]
    pub fn block_mut(&mut self, cell: u32) -> &mut [f64] {
        let k = cell as usize * self.ndof;
        &mut self.data[k..k + self.ndof]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_count_is_triangular_number() {
        for p in 0..=3 {
            assert_eq!(Basis::new(p).ndof, (p + 1) * (p + 2) / 2);
        }
    }

    #[test]
    fn constant_mode_is_one_everywhere() {
        let basis = Basis::new(2);
        let mut vals = vec![0.0; basis.ndof];
        for x in [[0.3, 0.4], [5.0, -2.0]] {
            basis.values([0.5, 0.5], 0.25, x, &mut vals);
            assert_eq!(vals[0], 1.0);
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let basis = Basis::new(3);
        let center = [0.375, 0.125];
        let h = 0.25;
        let mut grad = vec![[0.0; 2]; basis.ndof];
        let mut vp = vec![0.0; basis.ndof];
        let mut vm = vec![0.0; basis.ndof];
        let eps = 1e-6;
        for x in [[0.3, 0.1], [0.41, 0.2], [0.5, 0.0]] {
            basis.gradients(center, h, x, &mut grad);
            basis.values(center, h, [x[0] + eps, x[1]], &mut vp);
            basis.values(center, h, [x[0] - eps, x[1]], &mut vm);
            for k in 0..basis.ndof {
                let fd = (vp[k] - vm[k]) / (2.0 * eps);
                assert!((grad[k][0] - fd).abs() < 1e-7, "mode {k} d/dx");
            }
            basis.values(center, h, [x[0], x[1] + eps], &mut vp);
            basis.values(center, h, [x[0], x[1] - eps], &mut vm);
            for k in 0..basis.ndof {
                let fd = (vp[k] - vm[k]) / (2.0 * eps);
                assert!((grad[k][1] - fd).abs() < 1e-7, "mode {k} d/dy");
            }
        }
    }
}
