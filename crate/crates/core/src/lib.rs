//! Commuting-projector lattice models on cellulated closed surfaces and
//! numerical checks of their topological-order conditions.

pub mod algebra;
pub mod complex;
pub mod config;
pub mod dw;
pub mod error;
pub mod lw;
pub mod model;
pub mod spectra;
pub mod verify;

pub use algebra::{builtin_fusion, builtin_group, FiniteGroup, FusionData};
pub use complex::{CellComplex, DiskRegion, Family, Region, SurfaceTag};
pub use config::{Caps, Settings, Tolerances};
pub use error::{Error, Result};
pub use model::{GroundSpace, LatticeModel, LocalOperator, RegionOperator, Term, TermKind};
pub use spectra::{GramMatrix, LinearOperator, SparseOperator, C64};
pub use verify::{Distance, Ground, VerificationReport};
