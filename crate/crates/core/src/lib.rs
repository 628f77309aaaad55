//! Exact linear algebra for gluing, extending and polarizing mixed Hodge
//! structures: monodromy filtrations, split mixed Hodge structures, quivers
//! on the disk, logarithmic extensions, Brieskorn–Pham spectra and
//! nilpotent-orbit fiber computations, all over ℚ(i).

#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod error;
pub mod exact;
pub mod filtration;
pub mod logext;
pub mod mhs;
pub mod ncext;
pub mod neron;
pub mod oracle;
pub mod quiver;
pub mod singularity;
pub mod verify;

pub use error::{Error, Result};
