//! Finite truncations of cusped Cayley graphs and the coarse-geometry
//! measurements that make sense on them.
//!
//! The library builds exact models of a handful of finitely generated groups
//! (free, free abelian, finite cyclic, and free products of these), glues
//! combinatorial horoballs onto peripheral cosets to obtain truncated cusped
//! Cayley graphs, and then measures hyperbolicity constants, horospherical
//! distortion/dilation, boundary perfection signatures, and the constants of
//! cusp-extended quasi-isometries — always against exact BFS metrics, with
//! seeded sampling wherever exhaustive search is out of reach.

pub mod caps;
pub mod cusped;
pub mod distortion;
pub mod error;
pub mod export;
pub mod extension;
pub mod groups;
pub mod horoball;
pub mod hyperbolicity;
pub mod perfection;
pub mod report;
pub mod runner;
pub mod runspec;
pub mod sampling;
pub mod space;

pub use error::{Error, Result};
