//! Exact lattice-level bookkeeping for Spin-polynomial invariants of
//! simply connected 4-manifolds carrying an algebraic structure.
//!
//! The crate never computes invariant values. It decides statuses
//! (certified zero, certified nonzero, unknown) from intersection-lattice
//! data and emits certificates that can be rechecked independently.

pub mod arith;
pub mod gam;
pub mod index;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod simplicity;
pub mod surface;
pub mod verdict;
pub mod walls;

pub use arith::{int, Int, Rational};
pub use index::{BundleTopology, IndexError, IndexReport};
pub use lattice::{IntersectionLattice, LatticeClass, LatticeError, SpinCStructure};
pub use surface::{preset, Polarization, Preset, SurfaceModel};
