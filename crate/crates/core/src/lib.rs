pub mod abelian;
pub mod control;
pub mod error;
pub mod examples;
pub mod factorize;
pub mod fragments;
pub mod granules;
pub mod trellis;

#[cfg(any(test, feature = "testing"))]
pub mod testing;

pub use abelian::{GroupElement, ProductGroup, QuotientView, Subgroup};
pub use error::{Error, Result};
pub use fragments::Fragment;
pub use trellis::{compute_behavior, reduce, BehaviorBundle, Layout, Realization, Trajectory};
