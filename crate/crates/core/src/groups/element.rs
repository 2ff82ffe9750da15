//! Normal-form words.
//!
//! A `GroupElement` is a sequence of syllables `(generator, exponent)` in the
//! canonical form of its owning [`GroupModel`](super::GroupModel):
//!
//! * free: adjacent syllables use distinct generators, exponents nonzero;
//! * free abelian: generators strictly increasing, exponents nonzero;
//! * finite cyclic of order m: at most one syllable, exponent in `1..m`;
//! * free product: blocks of consecutive syllables alternate between factors,
//!   each block canonical in its factor.
//!
//! Equality of elements is equality of normal forms.

use serde::Serialize;

/// One syllable `generator^exponent` of a normal form. Exponents are nonzero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Syllable {
    pub gen: u16,
    pub exp: i64,
}

impl Syllable {
    pub fn new(gen: u16, exp: i64) -> Self {
        Syllable { gen, exp }
    }
}

/// A group element in canonical normal form.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GroupElement {
    syllables: Vec<Syllable>,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { syllables: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    /// Wrap a syllable list that is already in canonical form.
    pub(crate) fn from_canonical(syllables: Vec<Syllable>) -> Self {
        GroupElement { syllables }
    }
}

/// A single letter of a word: a generator or its formal inverse.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Letter {
    pub gen: u16,
    pub inverse: bool,
}
