//! Cut-cell mesh over (0,1)^2 with a planar ramp boundary.
//!
//! The background N x N Cartesian grid is intersected with the half-plane
//! above the ramp line through (x0, 0) at angle gamma. Faces are classified
//! into the interior skeleton, Cartesian boundary faces, and ramp boundary
//! faces. Triangular cut cells are identified together with their inflow and
//! outflow neighbors, which is the structure the stabilization acts on.

use crate::error::MeshError;
use crate::geom::{self, HalfPlane, Point};

/// Planar ramp: the kept domain is `{ (x,y) in (0,1)^2 : y >= tan(gamma) (x - x0) }`.
#[derive(Debug, Clone, Copy)]
pub struct RampGeometry {
    pub x0: f64,
    pub gamma: f64,
    sin_g: f64,
    cos_g: f64,
}

impl RampGeometry {
    pub fn new(x0: f64, gamma: f64) -> Result<Self, MeshError> {
        if !(gamma > 0.0 && gamma < std::f64::consts::FRAC_PI_2) {
            return Err(MeshError::InvalidGeometry(format!(
                "ramp angle must lie in (0, pi/2), got {gamma}"
            )));
        }
        if !(x0 > 0.0) {
            return Err(MeshError::InvalidGeometry(format!(
                "ramp foot x0 must be positive, got {x0}"
            )));
        }
        Ok(Self { x0, gamma, sin_g: gamma.sin(), cos_g: gamma.cos() })
    }

    pub fn from_degrees(x0: f64, gamma_deg: f64) -> Result<Self, MeshError> {
        Self::new(x0, gamma_deg.to_radians())
    }

    /// Unit tangent of the ramp line, pointing up-slope.
    #[inline]
    pub fn tangent(&self) -> Point {
        [self.cos_g, self.sin_g]
    }

    /// Unit normal pointing out of the domain (below the ramp).
    #[inline]
    pub fn outward_normal(&self) -> Point {
        [self.sin_g, -self.cos_g]
    }

    /// Signed distance above the ramp line (positive inside the domain).
    #[inline]
    pub fn signed_dist(&self, p: Point) -> f64 {
        self.cos_g * p[1] - self.sin_g * (p[0] - self.x0)
    }

    /// Half-plane whose kept side is the domain.
    #[inline]
    pub fn half_plane(&self) -> HalfPlane {
        HalfPlane { normal: [-self.sin_g, self.cos_g], offset: -self.sin_g * self.x0 }
    }

    /// Exact area of the kept domain inside the unit square.
    pub fn domain_area(&self) -> f64 {
        if self.x0 >= 1.0 {
            return 1.0;
        }
        let t = self.sin_g / self.cos_g;
        let reach = 1.0 - self.x0;
        if t * reach <= 1.0 {
            1.0 - 0.5 * t * reach * reach
        } else {
            // Ramp exits through the top: removed area is a right trapezoid.
            let x_top = self.x0 + 1.0 / t;
            1.0 - ((1.0 - x_top) + 0.5 / t)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    Full,
    Cut3,
    Cut4,
    Cut5,
}

#[derive(Debug, Clone)]
pub struct Cell {
    pub id: u32,
    /// Background-grid index (i, j).
    pub bg: (usize, usize),
    /// Counterclockwise vertex loop.
    pub polygon: Vec<Point>,
    pub area: f64,
    pub kind: CellKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceKind {
    /// Shared by two cells; the normal points from `e1` toward `e2`,
    /// where `e1` is the lexicographically lower background index.
    Interior { e1: u32, e2: u32 },
    /// On the boundary of the unit square.
    ExtCartesian { cell: u32 },
    /// On the ramp line.
    ExtRamp { cell: u32 },
}

#[derive(Debug, Clone)]
pub struct Face {
    pub id: u32,
    pub a: Point,
    pub b: Point,
    pub len: f64,
    /// Unit normal of fixed orientation (outward for exterior faces).
    pub normal: Point,
    pub kind: FaceKind,
}

impl Face {
    /// Normal oriented outward from the given adjacent cell.
    pub fn normal_from(&self, cell: u32) -> Point {
        match self.kind {
            FaceKind::Interior { e1, .. } => {
                if cell == e1 {
                    self.normal
                } else {
                    [-self.normal[0], -self.normal[1]]
                }
            }
            _ => self.normal,
        }
    }

    pub fn other_cell(&self, cell: u32) -> Option<u32> {
        match self.kind {
            FaceKind::Interior { e1, e2 } => {
                if cell == e1 {
                    Some(e2)
                } else {
                    Some(e1)
                }
            }
            _ => None,
        }
    }

    #[inline]
    pub fn midpoint(&self) -> Point {
        [0.5 * (self.a[0] + self.b[0]), 0.5 * (self.a[1] + self.b[1])]
    }
}

/// Triangular cut cell with its inflow/outflow structure for ramp-parallel flow.
#[derive(Debug, Clone, Copy)]
pub struct StabilizationPattern {
    pub cut_cell: u32,
    pub e_in: u32,
    pub e_out: u32,
    pub inflow_neighbor: u32,
    pub outflow_neighbor: u32,
    /// Boundary integral of the negative part of the normal velocity.
    pub inflow_integral: f64,
}

#[derive(Debug)]
pub struct CutCellMesh {
    pub n: usize,
    pub h: f64,
    pub ramp: RampGeometry,
    pub cells: Vec<Cell>,
    pub faces: Vec<Face>,
    /// Background index (i * n + j) -> cell id.
    cell_lookup: Vec<Option<u32>>,
    /// Incident faces per cell, ascending by face id.
    cell_faces: Vec<Vec<u32>>,
}

/// Clip one axis-aligned square against the kept side of the ramp.
///
/// Returns the counterclockwise intersection polygon, or an empty vector when
/// the square lies (up to snapping tolerance) below the line. Vertices within
/// `1e-12 * side` of the line are snapped onto it.
pub fn clip_cell_to_halfplane(lo: Point, side: f64, ramp: &RampGeometry) -> Vec<Point> {
    let square = [
        lo,
        [lo[0] + side, lo[1]],
        [lo[0] + side, lo[1] + side],
        [lo[0], lo[1] + side],
    ];
    geom::clip_polygon_halfplane(&square, &ramp.half_plane(), 1e-12 * side)
}

fn classify_kind(polygon: &[Point], lo: Point, side: f64) -> CellKind {
    if polygon.len() == 4 {
        let corners = [
            lo,
            [lo[0] + side, lo[1]],
            [lo[0] + side, lo[1] + side],
            [lo[0], lo[1] + side],
        ];
        let full = polygon
            .iter()
            .all(|v| corners.iter().any(|c| c[0] == v[0] && c[1] == v[1]));
        if full {
            return CellKind::Full;
        }
    }
    match polygon.len() {
        3 => CellKind::Cut3,
        4 => CellKind::Cut4,
        5 => CellKind::Cut5,
        k => unreachable!("half-plane clip of a square produced {k} vertices"),
    }
}

/// Build the cut-cell mesh for an `n` x `n` grid on the unit square.
///
/// Fails when the ramp line passes within `1e-12 * h` of any grid node, which
/// would make the cut topology ambiguous; the caller must perturb `x0`.
pub fn build_mesh(n: usize, ramp: RampGeometry) -> Result<CutCellMesh, MeshError> {
    if n < 2 {
        return Err(MeshError::ResolutionTooSmall(n));
    }
    let h = 1.0 / n as f64;
    let node_tol = 1e-12 * h;
    for i in 0..=n {
        for j in 0..=n {
            let p = [i as f64 * h, j as f64 * h];
            if ramp.signed_dist(p).abs() < node_tol {
                return Err(MeshError::RampNearNode { i, j });
            }
        }
    }

    let mut cells: Vec<Cell> = Vec::new();
    let mut cell_lookup = vec![None; n * n];
    for i in 0..n {
        for j in 0..n {
            let lo = [i as f64 * h, j as f64 * h];
            let polygon = clip_cell_to_halfplane(lo, h, &ramp);
            if polygon.is_empty() {
                continue;
            }
            let id = cells.len() as u32;
            let kind = classify_kind(&polygon, lo, h);
            let area = geom::polygon_area(&polygon);
            cells.push(Cell { id, bg: (i, j), polygon, area, kind });
            cell_lookup[i * n + j] = Some(id);
        }
    }

    let mut faces: Vec<Face> = Vec::new();
    let len_tol = 1e-14 * h;
    let cell_at = |i: usize, j: usize| -> Option<u32> { cell_lookup[i * n + j] };
    let push_face = |a: Point, b: Point, normal: Point, kind: FaceKind, faces: &mut Vec<Face>| {
        let len = geom::norm(geom::sub(b, a));
        debug_assert!(len > len_tol);
        faces.push(Face { id: faces.len() as u32, a, b, len, normal, kind });
    };

    // Kept part of a vertical grid segment: signed distance increases with y,
    // so the surviving piece is the upper part.
    let clip_vertical = |x: f64, y0: f64, y1: f64| -> Option<(f64, f64)> {
        let d0 = ramp.signed_dist([x, y0]);
        let d1 = ramp.signed_dist([x, y1]);
        if d1 <= 0.0 {
            None
        } else if d0 >= 0.0 {
            Some((y0, y1))
        } else {
            Some((y0 + (y1 - y0) * (-d0) / (d1 - d0), y1))
        }
    };
    // Kept part of a horizontal grid segment: distance decreases with x,
    // so the surviving piece is the left part.
    let clip_horizontal = |y: f64, x0: f64, x1: f64| -> Option<(f64, f64)> {
        let d0 = ramp.signed_dist([x0, y]);
        let d1 = ramp.signed_dist([x1, y]);
        if d0 <= 0.0 {
            None
        } else if d1 >= 0.0 {
            Some((x0, x1))
        } else {
            Some((x0, x0 + (x1 - x0) * d0 / (d0 - d1)))
        }
    };

    // Interior vertical faces on grid lines x = i*h.
    for i in 1..n {
        let x = i as f64 * h;
        for j in 0..n {
            if let Some((ya, yb)) = clip_vertical(x, j as f64 * h, (j + 1) as f64 * h) {
                if yb - ya <= len_tol {
                    continue;
                }
                let e1 = cell_at(i - 1, j).expect("vertical face must have a left cell");
                let e2 = cell_at(i, j).expect("vertical face must have a right cell");
                push_face([x, ya], [x, yb], [1.0, 0.0], FaceKind::Interior { e1, e2 }, &mut faces);
            }
        }
    }
    // Interior horizontal faces on grid lines y = j*h.
    for j in 1..n {
        let y = j as f64 * h;
        for i in 0..n {
            if let Some((xa, xb)) = clip_horizontal(y, i as f64 * h, (i + 1) as f64 * h) {
                if xb - xa <= len_tol {
                    continue;
                }
                let e1 = cell_at(i, j - 1).expect("horizontal face must have a lower cell");
                let e2 = cell_at(i, j).expect("horizontal face must have an upper cell");
                push_face([xa, y], [xb, y], [0.0, 1.0], FaceKind::Interior { e1, e2 }, &mut faces);
            }
        }
    }
    // Cartesian boundary faces: bottom, top, left, right.
    for i in 0..n {
        if let Some((xa, xb)) = clip_horizontal(0.0, i as f64 * h, (i + 1) as f64 * h) {
            if xb - xa > len_tol {
                let cell = cell_at(i, 0).expect("bottom face cell");
                push_face([xa, 0.0], [xb, 0.0], [0.0, -1.0], FaceKind::ExtCartesian { cell }, &mut faces);
            }
        }
    }
    for i in 0..n {
        if let Some((xa, xb)) = clip_horizontal(1.0, i as f64 * h, (i + 1) as f64 * h) {
            if xb - xa > len_tol {
                let cell = cell_at(i, n - 1).expect("top face cell");
                push_face([xa, 1.0], [xb, 1.0], [0.0, 1.0], FaceKind::ExtCartesian { cell }, &mut faces);
            }
        }
    }
    for j in 0..n {
        if let Some((ya, yb)) = clip_vertical(0.0, j as f64 * h, (j + 1) as f64 * h) {
            if yb - ya > len_tol {
                let cell = cell_at(0, j).expect("left face cell");
                push_face([0.0, ya], [0.0, yb], [-1.0, 0.0], FaceKind::ExtCartesian { cell }, &mut faces);
            }
        }
    }
    for j in 0..n {
        if let Some((ya, yb)) = clip_vertical(1.0, j as f64 * h, (j + 1) as f64 * h) {
            if yb - ya > len_tol {
                let cell = cell_at(n - 1, j).expect("right face cell");
                push_face([1.0, ya], [1.0, yb], [1.0, 0.0], FaceKind::ExtCartesian { cell }, &mut faces);
            }
        }
    }
    // Ramp faces: for each cut cell, the polygon edge lying on the line.
    let on_tol = 1e-12 * h;
    for cell in &cells {
        if cell.kind == CellKind::Full {
            continue;
        }
        let m = cell.polygon.len();
        let mut found = 0usize;
        for k in 0..m {
            let a = cell.polygon[k];
            let b = cell.polygon[(k + 1) % m];
            if ramp.signed_dist(a).abs() <= on_tol && ramp.signed_dist(b).abs() <= on_tol {
                push_face(a, b, ramp.outward_normal(), FaceKind::ExtRamp { cell: cell.id }, &mut faces);
                found += 1;
            }
        }
        debug_assert_eq!(found, 1, "cut cell must carry exactly one ramp edge");
    }

    let mut cell_faces = vec![Vec::new(); cells.len()];
    for face in &faces {
        match face.kind {
            FaceKind::Interior { e1, e2 } => {
                cell_faces[e1 as usize].push(face.id);
                cell_faces[e2 as usize].push(face.id);
            }
            FaceKind::ExtCartesian { cell } | FaceKind::ExtRamp { cell } => {
                cell_faces[cell as usize].push(face.id);
            }
        }
    }

    Ok(CutCellMesh { n, h, ramp, cells, faces, cell_lookup, cell_faces })
}

impl CutCellMesh {
    pub fn cell_at(&self, i: usize, j: usize) -> Option<u32> {
        self.cell_lookup[i * self.n + j]
    }

    pub fn faces_of(&self, cell: u32) -> &[u32] {
        &self.cell_faces[cell as usize]
    }

    /// Center of the background square the cell is anchored to.
    pub fn bg_center(&self, cell: u32) -> Point {
        let (i, j) = self.cells[cell as usize].bg;
        [(i as f64 + 0.5) * self.h, (j as f64 + 0.5) * self.h]
    }

    pub fn total_area(&self) -> f64 {
        self.cells.iter().map(|c| c.area).sum()
    }

    /// Cells with no face on the Cartesian boundary. Functions supported on
    /// these cells have no trace on the in-/outflow boundary.
    pub fn interior_mask(&self) -> Vec<bool> {
        let mut mask = vec![true; self.cells.len()];
        for face in &self.faces {
            if let FaceKind::ExtCartesian { cell } = face.kind {
                mask[cell as usize] = false;
            }
        }
        mask
    }

    /// Cell containing the point, if any (points below the ramp return None).
    pub fn locate(&self, p: Point) -> Option<u32> {
        if !(0.0..=1.0).contains(&p[0]) || !(0.0..=1.0).contains(&p[1]) {
            return None;
        }
        if self.ramp.signed_dist(p) < 0.0 {
            return None;
        }
        let clamp = |v: f64| (v.floor() as usize).min(self.n - 1);
        self.cell_at(clamp(p[0] / self.h), clamp(p[1] / self.h))
    }

    /// Structured-text dump of cells and faces, one record per line.
    pub fn dump(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        for c in &self.cells {
            let verts: Vec<String> =
                c.polygon.iter().map(|v| format!("({:.16e},{:.16e})", v[0], v[1])).collect();
            writeln!(
                out,
                "cell {} bg=({},{}) kind={:?} area={:.16e} verts={}",
                c.id, c.bg.0, c.bg.1, c.kind, c.area, verts.join(";")
            )
            .unwrap();
        }
        for f in &self.faces {
            let kind = match f.kind {
                FaceKind::Interior { e1, e2 } => format!("Interior({e1},{e2})"),
                FaceKind::ExtCartesian { cell } => format!("ExtCartesian({cell})"),
                FaceKind::ExtRamp { cell } => format!("ExtRamp({cell})"),
            };
            writeln!(
                out,
                "face {} kind={} endpoints=({:.16e},{:.16e})-({:.16e},{:.16e}) normal=({:.16e},{:.16e})",
                f.id, kind, f.a[0], f.a[1], f.b[0], f.b[1], f.normal[0], f.normal[1]
            )
            .unwrap();
        }
        out
    }
}

/// Find the triangular cut cells and their inflow/outflow structure.
///
/// Requires the velocity to be parallel to the ramp so that every triangular
/// cut cell has exactly one strict-inflow and one outflow non-ramp edge.
pub fn find_stabilized_cells(
    mesh: &CutCellMesh,
    beta: Point,
) -> Result<Vec<StabilizationPattern>, MeshError> {
    let tol = 1e-14 * geom::norm(beta);
    let mut patterns = Vec::new();
    for cell in &mesh.cells {
        if cell.kind != CellKind::Cut3 {
            continue;
        }
        let fail = |reason: &str| MeshError::PatternInvalid {
            cell: cell.id,
            reason: reason.to_string(),
        };
        let mut inflow: Option<(u32, u32, f64)> = None;
        let mut outflow: Option<(u32, u32)> = None;
        let mut inflow_integral = 0.0;
        for &fid in mesh.faces_of(cell.id) {
            let face = &mesh.faces[fid as usize];
            if matches!(face.kind, FaceKind::ExtRamp { .. }) {
                continue;
            }
            let b = geom::dot(beta, face.normal_from(cell.id));
            inflow_integral += 0.5 * (b.abs() - b) * face.len;
            let neighbor = face
                .other_cell(cell.id)
                .ok_or_else(|| fail("non-ramp edge of a triangular cut cell is not interior"))?;
            if b < -tol {
                if inflow.replace((fid, neighbor, -b)).is_some() {
                    return Err(fail("two strict-inflow edges"));
                }
            } else if b > tol {
                if outflow.replace((fid, neighbor)).is_some() {
                    return Err(fail("two outflow edges"));
                }
            } else {
                return Err(fail("edge with vanishing normal velocity"));
            }
        }
        let (e_in, inflow_neighbor, _) = inflow.ok_or_else(|| fail("no strict-inflow edge"))?;
        let (e_out, outflow_neighbor) = outflow.ok_or_else(|| fail("no outflow edge"))?;
        patterns.push(StabilizationPattern {
            cut_cell: cell.id,
            e_in,
            e_out,
            inflow_neighbor,
            outflow_neighbor,
            inflow_integral,
        });
    }
    Ok(patterns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::polygon_area;

    fn ramp45_026() -> RampGeometry {
        RampGeometry::from_degrees(0.26, 45.0).unwrap()
    }

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "expected {b}, got {a} (diff {})", (a - b).abs());
    }

    #[test]
    fn clip_untouched_square() {
        let poly = clip_cell_to_halfplane([0.0, 0.0], 0.25, &ramp45_026());
        assert_eq!(poly.len(), 4);
        assert_close(polygon_area(&poly), 0.0625, 1e-16);
    }

    #[test]
    fn clip_pentagon_example() {
        let poly = clip_cell_to_halfplane([0.25, 0.0], 0.25, &ramp45_026());
        assert_eq!(poly.len(), 5);
        // Shoelace oracle: square minus the cut corner triangle.
        assert_close(polygon_area(&poly), 0.0625 - 0.5 * 0.24 * 0.24, 1e-15);
        let expected = [[0.25, 0.0], [0.26, 0.0], [0.5, 0.24], [0.5, 0.25], [0.25, 0.25]];
        for v in &expected {
            assert!(
                poly.iter().any(|p| (p[0] - v[0]).abs() < 1e-12 && (p[1] - v[1]).abs() < 1e-12),
                "missing vertex {v:?} in {poly:?}"
            );
        }
    }

    #[test]
    fn clip_triangle_example() {
        let poly = clip_cell_to_halfplane([0.5, 0.0], 0.25, &ramp45_026());
        assert_eq!(poly.len(), 3);
        assert_close(polygon_area(&poly), 5e-5, 1e-17);
    }

    #[test]
    fn clip_fully_below_is_empty() {
        let ramp = RampGeometry::from_degrees(0.26, 45.0).unwrap();
        // Square far below the line.
        let poly = clip_cell_to_halfplane([0.9, 0.0], 0.05, &ramp);
        assert!(poly.is_empty());
    }

    #[test]
    fn mesh_area_45_degrees() {
        let ramp = RampGeometry::from_degrees(0.2001, 45.0).unwrap();
        let mesh = build_mesh(4, ramp).unwrap();
        assert_close(mesh.total_area(), 1.0 - 0.5 * 0.7999 * 0.7999, 1e-12);
        assert_close(mesh.total_area(), ramp.domain_area(), 1e-12);
    }

    #[test]
    fn mesh_area_25_degrees() {
        let ramp = RampGeometry::from_degrees(0.2001, 25.0).unwrap();
        let mesh = build_mesh(4, ramp).unwrap();
        let t = 25f64.to_radians().tan();
        assert_close(mesh.total_area(), 1.0 - 0.5 * 0.7999 * (0.7999 * t), 1e-10);
    }

    #[test]
    fn mesh_with_ramp_below_grid_is_all_full() {
        let ramp = RampGeometry::from_degrees(1.5, 45.0).unwrap();
        let mesh = build_mesh(4, ramp).unwrap();
        assert_eq!(mesh.cells.len(), 16);
        assert!(mesh.cells.iter().all(|c| c.kind == CellKind::Full));
        assert!(!mesh.faces.iter().any(|f| matches!(f.kind, FaceKind::ExtRamp { .. })));
    }

    #[test]
    fn mesh_rejects_ramp_through_node() {
        let ramp = RampGeometry::from_degrees(0.25, 45.0).unwrap();
        assert!(matches!(build_mesh(4, ramp), Err(MeshError::RampNearNode { .. })));
    }

    #[test]
    fn ramp_faces_lie_on_line() {
        let ramp = RampGeometry::from_degrees(0.2001, 25.0).unwrap();
        let mesh = build_mesh(8, ramp).unwrap();
        let beta = [2.0 * ramp.tangent()[0], 2.0 * ramp.tangent()[1]];
        let mut count = 0;
        for f in &mesh.faces {
            if matches!(f.kind, FaceKind::ExtRamp { .. }) {
                count += 1;
                assert!(ramp.signed_dist(f.a).abs() <= 1e-12);
                assert!(ramp.signed_dist(f.b).abs() <= 1e-12);
                assert!(geom::dot(beta, f.normal).abs() <= 1e-14 * geom::norm(beta));
            }
        }
        assert!(count > 0);
    }

    #[test]
    fn interior_faces_match_cell_boundary_overlap() {
        let ramp = RampGeometry::from_degrees(0.2001, 45.0).unwrap();
        let mesh = build_mesh(5, ramp).unwrap();
        for f in &mesh.faces {
            if let FaceKind::Interior { e1, e2 } = f.kind {
                // The face must be an edge of both adjacent cell polygons.
                for cell in [e1, e2] {
                    let poly = &mesh.cells[cell as usize].polygon;
                    let m = poly.len();
                    let matches = (0..m).any(|k| {
                        let p = poly[k];
                        let q = poly[(k + 1) % m];
                        let fwd = geom::norm(geom::sub(p, f.a)) < 1e-12
                            && geom::norm(geom::sub(q, f.b)) < 1e-12;
                        let rev = geom::norm(geom::sub(q, f.a)) < 1e-12
                            && geom::norm(geom::sub(p, f.b)) < 1e-12;
                        fwd || rev
                    });
                    assert!(matches, "face {} not an edge of cell {}", f.id, cell);
                }
            }
        }
    }

    #[test]
    fn mesh_graph_is_connected() {
        let ramp = RampGeometry::from_degrees(0.2001, 25.0).unwrap();
        let mesh = build_mesh(6, ramp).unwrap();
        let mut seen = vec![false; mesh.cells.len()];
        let mut stack = vec![0u32];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for &fid in mesh.faces_of(c) {
                if let Some(o) = mesh.faces[fid as usize].other_cell(c) {
                    if !seen[o as usize] {
                        seen[o as usize] = true;
                        stack.push(o);
                    }
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn stabilized_triangle_example() {
        let ramp = ramp45_026();
        let mesh = build_mesh(4, ramp).unwrap();
        let s = std::f64::consts::SQRT_2;
        let patterns = find_stabilized_cells(&mesh, [s, s]).unwrap();
        // The [0.5,0.75] x [0,0.25] background cell holds the tiny triangle.
        let tri = patterns
            .iter()
            .find(|p| mesh.cells[p.cut_cell as usize].bg == (2, 0))
            .expect("triangle pattern at bg (2,0)");
        let e_in = &mesh.faces[tri.e_in as usize];
        let e_out = &mesh.faces[tri.e_out as usize];
        assert!((e_in.a[0] - e_in.b[0]).abs() < 1e-15, "inflow edge is vertical");
        assert!((e_out.a[1] - e_out.b[1]).abs() < 1e-15, "outflow edge is horizontal");
        assert_close(tri.inflow_integral, s * 0.01, 1e-15);
        assert_eq!(mesh.cells[tri.inflow_neighbor as usize].bg, (1, 0));
        assert_eq!(mesh.cells[tri.outflow_neighbor as usize].bg, (2, 1));
    }

    #[test]
    fn no_patterns_without_triangles() {
        let ramp = RampGeometry::from_degrees(1.5, 45.0).unwrap();
        let mesh = build_mesh(4, ramp).unwrap();
        let patterns = find_stabilized_cells(&mesh, [2.0, 0.0]).unwrap();
        assert!(patterns.is_empty());
    }

    #[test]
    fn pattern_roles_on_fine_mesh() {
        let ramp = RampGeometry::from_degrees(0.2001, 45.0).unwrap();
        let mesh = build_mesh(20, ramp).unwrap();
        let t = ramp.tangent();
        let patterns = find_stabilized_cells(&mesh, [2.0 * t[0], 2.0 * t[1]]).unwrap();
        assert!(!patterns.is_empty());
        for p in &patterns {
            let (i, j) = mesh.cells[p.cut_cell as usize].bg;
            assert_eq!(mesh.cells[p.inflow_neighbor as usize].bg, (i - 1, j), "left neighbor");
            assert_eq!(mesh.cells[p.outflow_neighbor as usize].bg, (i, j + 1), "upper neighbor");
        }
    }

    #[test]
    fn dump_contains_cells_and_faces() {
        let mesh = build_mesh(2, RampGeometry::from_degrees(1.5, 45.0).unwrap()).unwrap();
        let dump = mesh.dump();
        assert_eq!(dump.lines().filter(|l| l.starts_with("cell ")).count(), 4);
        assert!(dump.lines().any(|l| l.contains("ExtCartesian")));
    }
}
