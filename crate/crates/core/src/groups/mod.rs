//! Exact group models, elements, word metrics, and group pairs.

mod element;
mod model;
mod pair;
mod parse;

pub use element::{GroupElement, Letter, Syllable};
pub use model::{make_group, Factor, GroupDescriptor, GroupModel, PrimitiveKind, DEFAULT_RADIUS_CAP};
pub use pair::{GroupPair, PairDescriptor, Peripheral, PeripheralDescriptor};
