//! Cut-cell discontinuous Galerkin solver for 2D linear advection on ramp
//! geometries, with domain-of-dependence (DoD) stabilization of small cut
//! cells so that explicit SSP Runge-Kutta time stepping remains stable at a
//! CFL number chosen for the background grid.

pub mod basis;
pub mod error;
pub mod geom;
pub mod mesh;
pub mod quadrature;
pub mod space;

pub use basis::{Basis, DgFunction};
pub use error::{ConfigError, MeshError, QuadratureError, SolveError};
pub use mesh::{
    build_mesh, clip_cell_to_halfplane, find_stabilized_cells, Cell, CellKind, CutCellMesh, Face,
    FaceKind, RampGeometry, StabilizationPattern,
};
pub use quadrature::{gauss_legendre_1d, polygon_rule, segment_rule, QuadRule};
pub use space::DgSpace;
