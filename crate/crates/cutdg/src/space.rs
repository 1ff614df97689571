//! The broken polynomial space on a cut-cell mesh: quadrature-point tables,
//! cell mass matrices with their factorizations, projection, and evaluation.
//!
//! Tables and matrices are shared between cells where the geometry allows it:
//! all full cells see identical basis values at their quadrature points and
//! identical mass matrices, so they reference one canonical table. Cut cells
//! carry their own.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::basis::{Basis, DgFunction};
use crate::geom::Point;
use crate::mesh::{CellKind, CutCellMesh, FaceKind};
use crate::quadrature::{polygon_rule, segment_rule, square_rule};

/// Per-cell quadrature and basis data at the assembly degree.
pub struct CellTable {
    pub weights: Vec<f64>,
    /// Basis values, `nq x ndof` row-major by point.
    pub phi: Vec<f64>,
    /// Basis gradients, same layout.
    pub gphi: Vec<[f64; 2]>,
    pub mass: DMatrix<f64>,
    /// Upper-triangular factor with R^T R = M, from a QR of the weighted
    /// value matrix. Solving through R avoids squaring the condition number
    /// of nearly degenerate cut cells.
    pub rfac: DMatrix<f64>,
    /// First moments: integral of each basis function over the cell.
    pub moment: Vec<f64>,
    /// Mass solves re-anchored to the cell bounding box. The background-square
    /// basis degenerates on sliver cut cells (the Gram matrix can overrun f64
    /// entirely); in the local frame the same solve is benign.
    loc: Option<LocalSolve>,
}

/// Change of basis to polynomials anchored at the cell bounding box, plus the
/// mass factorization in that frame.
struct LocalSolve {
    /// c_loc = T c_bg.
    t_lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    tt_lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    /// Upper-triangular factor of the local-frame cell mass matrix.
    rfac_loc: DMatrix<f64>,
}

pub struct CellData {
    pub points: Vec<Point>,
    pub table: Arc<CellTable>,
}

/// Basis traces of one adjacent cell at the face quadrature points.
pub struct TraceTable {
    /// `nq x ndof` row-major by point.
    pub phi: Vec<f64>,
}

pub struct FaceData {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    /// Traces for the two sides; index 0 is `e1` (or the only cell).
    pub traces: [Option<Arc<TraceTable>>; 2],
}

pub struct DgSpace {
    pub mesh: Arc<CutCellMesh>,
    pub basis: Basis,
    /// Polynomial degree integrated exactly by the assembly tables.
    pub quad_degree: usize,
    cells: Vec<CellData>,
    faces: Vec<FaceData>,
}

/// Reference edges of a cell's background square, used to share trace tables.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum CellEdge {
    Left,
    Right,
    Bottom,
    Top,
}

impl DgSpace {
    pub fn new(mesh: Arc<CutCellMesh>, p: usize) -> Self {
        let basis = Basis::new(p);
        let quad_degree = 2 * p + 2;
        let h = mesh.h;

        // Canonical table for full cells, anchored at the origin-centered square.
        let full_rule = square_rule([-0.5 * h, -0.5 * h], h, quad_degree);
        let canonical =
            Arc::new(build_cell_table(&basis, [0.0, 0.0], h, &full_rule.points, &full_rule.weights, None));
        let full_offsets = full_rule.points.clone();

        let mut cells = Vec::with_capacity(mesh.cells.len());
        for cell in &mesh.cells {
            let center = mesh.bg_center(cell.id);
            if cell.kind == CellKind::Full {
                let points = full_offsets
                    .iter()
                    .map(|&o| [center[0] + o[0], center[1] + o[1]])
                    .collect();
                cells.push(CellData { points, table: Arc::clone(&canonical) });
            } else {
                let rule = polygon_rule(&cell.polygon, quad_degree)
                    .expect("mesh produces convex 3-5 vertex polygons");
                let table = build_cell_table(
                    &basis,
                    center,
                    h,
                    &rule.points,
                    &rule.weights,
                    Some(&cell.polygon),
                );
                cells.push(CellData { points: rule.points, table: Arc::new(table) });
            }
        }

        // Canonical traces for full-length faces, one per cell edge.
        let nq_face = (quad_degree + 2) / 2;
        let canon_edge = |edge: CellEdge| -> Arc<TraceTable> {
            // Reference points along the edge in the direction of the face
            // parameterization (a -> b is +y for vertical, +x for horizontal).
            let (nodes, _) = crate::quadrature::gauss_legendre_1d(nq_face).unwrap();
            let mut phi = vec![0.0; nodes.len() * basis.ndof];
            let mut vals = vec![0.0; basis.ndof];
            for (q, &t) in nodes.iter().enumerate() {
                let half = 0.5 * h;
                let local = match edge {
                    CellEdge::Left => [-half, t * half],
                    CellEdge::Right => [half, t * half],
                    CellEdge::Bottom => [t * half, -half],
                    CellEdge::Top => [t * half, half],
                };
                basis.values([0.0, 0.0], h, local, &mut vals);
                phi[q * basis.ndof..(q + 1) * basis.ndof].copy_from_slice(&vals);
            }
            Arc::new(TraceTable { phi })
        };
        let tr_left = canon_edge(CellEdge::Left);
        let tr_right = canon_edge(CellEdge::Right);
        let tr_bottom = canon_edge(CellEdge::Bottom);
        let tr_top = canon_edge(CellEdge::Top);
        let canon_for = |edge: CellEdge| match edge {
            CellEdge::Left => Arc::clone(&tr_left),
            CellEdge::Right => Arc::clone(&tr_right),
            CellEdge::Bottom => Arc::clone(&tr_bottom),
            CellEdge::Top => Arc::clone(&tr_top),
        };

        let mut faces = Vec::with_capacity(mesh.faces.len());
        for face in &mesh.faces {
            let rule = segment_rule(face.a, face.b, quad_degree);
            let full_length = (face.len - h).abs() <= 1e-12 * h;
            let adj: [Option<u32>; 2] = match face.kind {
                FaceKind::Interior { e1, e2 } => [Some(e1), Some(e2)],
                FaceKind::ExtCartesian { cell } | FaceKind::ExtRamp { cell } => [Some(cell), None],
            };
            let vertical = face.normal[1] == 0.0;
            let mut traces: [Option<Arc<TraceTable>>; 2] = [None, None];
            for (side, maybe_cell) in adj.iter().enumerate() {
                let Some(cell) = *maybe_cell else { continue };
                let is_ramp = matches!(face.kind, FaceKind::ExtRamp { .. });
                if full_length && !is_ramp {
                    let center = mesh.bg_center(cell);
                    let mid = face.midpoint();
                    let edge = if vertical {
                        if mid[0] > center[0] { CellEdge::Right } else { CellEdge::Left }
                    } else if mid[1] > center[1] {
                        CellEdge::Top
                    } else {
                        CellEdge::Bottom
                    };
                    traces[side] = Some(canon_for(edge));
                } else {
                    let center = mesh.bg_center(cell);
                    let mut phi = vec![0.0; rule.points.len() * basis.ndof];
                    let mut vals = vec![0.0; basis.ndof];
                    for (q, &pt) in rule.points.iter().enumerate() {
                        basis.values(center, h, pt, &mut vals);
                        phi[q * basis.ndof..(q + 1) * basis.ndof].copy_from_slice(&vals);
                    }
                    traces[side] = Some(Arc::new(TraceTable { phi }));
                }
            }
            faces.push(FaceData { points: rule.points, weights: rule.weights, traces });
        }

        Self { mesh, basis, quad_degree, cells, faces }
    }

    #[inline]
    pub fn ndof(&self) -> usize {
        self.basis.ndof
    }

    pub fn ncells(&self) -> usize {
        self.mesh.cells.len()
    }

    pub fn num_dofs(&self) -> usize {
        self.ndof() * self.ncells()
    }

    pub fn zero_function(&self) -> DgFunction {
        DgFunction::zeros(self.ndof(), self.ncells())
    }

    #[inline]
    pub fn cell_data(&self, cell: u32) -> &CellData {
        &self.cells[cell as usize]
    }

    #[inline]
    pub fn face_data(&self, face: u32) -> &FaceData {
        &self.faces[face as usize]
    }

    /// Evaluate the polynomial stored on `cell` at an arbitrary point. For
    /// points outside the cell this is the extension operator.
    pub fn eval(&self, u: &DgFunction, cell: u32, x: Point) -> f64 {
        assert!((cell as usize) < self.ncells(), "invalid cell id {cell}");
        let center = self.mesh.bg_center(cell);
        let mut vals = vec![0.0; self.ndof()];
        self.basis.values(center, self.mesh.h, x, &mut vals);
        vals.iter().zip(u.block(cell)).map(|(v, c)| v * c).sum()
    }

    /// Gradient counterpart of [`eval`](Self::eval), likewise valid everywhere.
    pub fn eval_grad(&self, u: &DgFunction, cell: u32, x: Point) -> [f64; 2] {
        assert!((cell as usize) < self.ncells(), "invalid cell id {cell}");
        let center = self.mesh.bg_center(cell);
        let mut grads = vec![[0.0; 2]; self.ndof()];
        self.basis.gradients(center, self.mesh.h, x, &mut grads);
        let mut out = [0.0, 0.0];
        for (g, c) in grads.iter().zip(u.block(cell)) {
            out[0] += g[0] * c;
            out[1] += g[1] * c;
        }
        out
    }

    pub fn mass_matrix(&self, cell: u32) -> &DMatrix<f64> {
        &self.cells[cell as usize].table.mass
    }

    /// Estimated 2-norm condition number of the cell mass matrix, from the
    /// diagonal of its triangular factor.
    pub fn mass_condition(&self, cell: u32) -> f64 {
        let r = &self.cells[cell as usize].table.rfac;
        let diag: Vec<f64> = (0..r.nrows()).map(|i| r[(i, i)].abs()).collect();
        let hi = diag.iter().cloned().fold(0.0f64, f64::max);
        let lo = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        (hi / lo) * (hi / lo)
    }

    /// Per-cell L2 projection of a scalar field.
    pub fn project(&self, f: impl Fn(Point) -> f64) -> DgFunction {
        let ndof = self.ndof();
        let mut u = self.zero_function();
        for cell in 0..self.ncells() as u32 {
            let data = &self.cells[cell as usize];
            let block = u.block_mut(cell);
            block.fill(0.0);
            for (q, &pt) in data.points.iter().enumerate() {
                let wf = data.table.weights[q] * f(pt);
                let row = &data.table.phi[q * ndof..(q + 1) * ndof];
                for k in 0..ndof {
                    block[k] += wf * row[k];
                }
            }
            mass_solve(&data.table, block);
        }
        u
    }

    /// Solve the block-diagonal mass system in place: each cell block of
    /// `residual` is replaced by M_E^{-1} times itself.
    pub fn apply_inverse_mass(&self, residual: &mut [f64]) {
        let ndof = self.ndof();
        assert_eq!(residual.len(), self.num_dofs());
        let apply = |(cell, block): (usize, &mut [f64])| {
            mass_solve(&self.cells[cell].table, block);
        };
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            residual.par_chunks_mut(ndof).enumerate().for_each(apply);
        }
        #[cfg(not(feature = "parallel"))]
        residual.chunks_mut(ndof).enumerate().for_each(apply);
    }

    /// Squared L2 norm over the domain, accumulated pointwise at the
    /// quadrature nodes (nonnegative by construction).
    pub fn l2_norm_sq(&self, u: &[f64]) -> f64 {
        let ndof = self.ndof();
        let mut acc = 0.0;
        for (cell, block) in u.chunks(ndof).enumerate() {
            let table = &self.cells[cell].table;
            for (q, &w) in table.weights.iter().enumerate() {
                let row = &table.phi[q * ndof..(q + 1) * ndof];
                let mut v = 0.0;
                for k in 0..ndof {
                    v += row[k] * block[k];
                }
                acc += w * v * v;
            }
        }
        acc
    }

    /// Integral of the function over the domain (its total mass).
    pub fn integral(&self, u: &[f64]) -> f64 {
        let ndof = self.ndof();
        let mut acc = 0.0;
        for (cell, block) in u.chunks(ndof).enumerate() {
            let m = &self.cells[cell].table.moment;
            for k in 0..ndof {
                acc += m[k] * block[k];
            }
        }
        acc
    }
}

fn build_cell_table(
    basis: &Basis,
    center: Point,
    h: f64,
    points: &[Point],
    weights: &[f64],
    polygon: Option<&[Point]>,
) -> CellTable {
    let ndof = basis.ndof;
    let nq = points.len();
    let mut phi = vec![0.0; nq * ndof];
    let mut gphi = vec![[0.0; 2]; nq * ndof];
    let mut vals = vec![0.0; ndof];
    let mut grads = vec![[0.0; 2]; ndof];
    for (q, &pt) in points.iter().enumerate() {
        basis.values(center, h, pt, &mut vals);
        basis.gradients(center, h, pt, &mut grads);
        phi[q * ndof..(q + 1) * ndof].copy_from_slice(&vals);
        gphi[q * ndof..(q + 1) * ndof].copy_from_slice(&grads);
    }
    let mut mass = DMatrix::zeros(ndof, ndof);
    let mut moment = vec![0.0; ndof];
    for q in 0..nq {
        let w = weights[q];
        let row = &phi[q * ndof..(q + 1) * ndof];
        for i in 0..ndof {
            moment[i] += w * row[i];
            for j in 0..ndof {
                mass[(i, j)] += w * row[i] * row[j];
            }
        }
    }
    // QR of the weighted value matrix A = sqrt(W) Phi gives R with R^T R = M.
    let mut a = DMatrix::zeros(nq, ndof);
    for q in 0..nq {
        let sw = weights[q].sqrt();
        for k in 0..ndof {
            a[(q, k)] = sw * phi[q * ndof + k];
        }
    }
    let qr = a.qr();
    let rfac = qr.r();
    let loc = polygon.map(|poly| build_local_solve(basis, center, h, poly, points, weights));
    CellTable { weights: weights.to_vec(), phi, gphi, mass, rfac, moment, loc }
}

fn build_local_solve(
    basis: &Basis,
    bg_center: Point,
    h: f64,
    polygon: &[Point],
    points: &[Point],
    weights: &[f64],
) -> LocalSolve {
    let ndof = basis.ndof;
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for v in polygon {
        for d in 0..2 {
            lo[d] = lo[d].min(v[d]);
            hi[d] = hi[d].max(v[d]);
        }
    }
    let center = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])];
    let extent = [hi[0] - lo[0], hi[1] - lo[1]];

    // Change of basis: T_{k,i} = <phi_bg_i, phi_loc_k> / |box|, integrated
    // exactly over the bounding box (both factors are degree-p polynomials).
    let n1 = basis.p + 1;
    let (nodes, w1) = crate::quadrature::gauss_legendre_1d(n1).unwrap();
    let mut t = DMatrix::<f64>::zeros(ndof, ndof);
    let mut vb = vec![0.0; ndof];
    let mut vl = vec![0.0; ndof];
    for (ix, &gx) in nodes.iter().enumerate() {
        for (iy, &gy) in nodes.iter().enumerate() {
            let x = [
                center[0] + 0.5 * extent[0] * gx,
                center[1] + 0.5 * extent[1] * gy,
            ];
            // Quarter of the product weight: the box measure cancels against
            // the normalization of the local basis.
            let w = 0.25 * w1[ix] * w1[iy];
            basis.values(bg_center, h, x, &mut vb);
            basis.values_scaled(center, extent, x, &mut vl);
            for k in 0..ndof {
                for i in 0..ndof {
                    t[(k, i)] += w * vl[k] * vb[i];
                }
            }
        }
    }
    let t_lu = t.clone().lu();
    let tt_lu = t.transpose().lu();

    // Mass factor in the local frame over the cell polygon itself.
    let nq = points.len();
    let mut a = DMatrix::<f64>::zeros(nq, ndof);
    for (q, &pt) in points.iter().enumerate() {
        basis.values_scaled(center, extent, pt, &mut vl);
        let sw = weights[q].sqrt();
        for k in 0..ndof {
            a[(q, k)] = sw * vl[k];
        }
    }
    let rfac_loc = a.qr().r();
    LocalSolve { t_lu, tt_lu, rfac_loc }
}

/// Solve M x = b in place. Full cells go straight through the triangular
/// factor; cut cells detour through the local frame, which keeps the solve
/// accurate even when the background-frame Gram matrix is near singular.
#[inline]
pub(crate) fn mass_solve(table: &CellTable, x: &mut [f64]) {
    let n = x.len();
    debug_assert!(n <= 64);
    let mut scratch = [0.0; 64];
    match &table.loc {
        None => solve_rtr(&table.rfac, x, &mut scratch[..n]),
        Some(loc) => {
            // M_bg = T^T M_loc T, so M_bg^{-1} r = T^{-1} M_loc^{-1} T^{-T} r.
            let mut v = nalgebra::DVector::from_column_slice(x);
            let ok = loc.tt_lu.solve_mut(&mut v);
            debug_assert!(ok);
            let mut y: Vec<f64> = v.data.into();
            solve_rtr(&loc.rfac_loc, &mut y, &mut scratch[..n]);
            let mut v = nalgebra::DVector::from_vec(y);
            let ok = loc.t_lu.solve_mut(&mut v);
            debug_assert!(ok);
            x.copy_from_slice(v.as_slice());
        }
    }
}

/// Solve (R^T R) x = b in place given the upper-triangular factor R.
#[inline]
pub(crate) fn solve_rtr(r: &DMatrix<f64>, x: &mut [f64], scratch: &mut [f64]) {
    let n = x.len();
    let rs = r.as_slice(); // column-major, r[(i, j)] = rs[j * n + i]
    // Forward: R^T y = b.
    for i in 0..n {
        let mut v = x[i];
        for k in 0..i {
            v -= rs[i * n + k] * scratch[k];
        }
        scratch[i] = v / rs[i * n + i];
    }
    // Backward: R x = y.
    for i in (0..n).rev() {
        let mut v = scratch[i];
        for k in (i + 1)..n {
            v -= rs[k * n + i] * x[k];
        }
        x[i] = v / rs[i * n + i];
    }
}
