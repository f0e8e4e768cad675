//! Algebraic input data: finite groups and fusion categories.

mod fusion;
mod group;

pub use fusion::{builtin_fusion, load_fusion, FKey, FusionData};
pub use group::{builtin_group, load_group, FiniteGroup};
