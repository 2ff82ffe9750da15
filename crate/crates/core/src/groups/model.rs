//! Exact models of finitely generated groups.
//!
//! The supported kinds — free, free abelian, finite cyclic, and free products
//! of these — all have solvable word problems via canonical normal forms and
//! exact word metrics for their standard generating sets, which is what the
//! rest of the library leans on.

use super::element::{GroupElement, Letter, Syllable};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::HashMap;

pub const DEFAULT_RADIUS_CAP: u32 = 12;

/// Group kinds a single free-product factor can have.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimitiveKind {
    Free { rank: usize },
    FreeAbelian { rank: usize },
    FiniteCyclic { order: u64 },
}

impl PrimitiveKind {
    fn rank(&self) -> usize {
        match *self {
            PrimitiveKind::Free { rank } | PrimitiveKind::FreeAbelian { rank } => rank,
            PrimitiveKind::FiniteCyclic { .. } => 1,
        }
    }
}

/// One factor of the (possibly trivial) free-product decomposition,
/// occupying a contiguous range of generator indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub kind: PrimitiveKind,
    pub first_gen: usize,
    pub gen_count: usize,
}

/// Description of a group, as read from spec files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupDescriptor {
    Free {
        rank: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<String>>,
    },
    FreeAbelian {
        rank: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<String>>,
    },
    FiniteCyclic {
        order: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generator: Option<String>,
    },
    FreeProduct {
        factors: Vec<GroupDescriptor>,
    },
}

/// An exact group model: generator alphabet, normal forms, word metric.
/// Immutable after construction; all operations are pure.
#[derive(Clone, Debug)]
pub struct GroupModel {
    names: Vec<String>,
    factors: Vec<Factor>,
    gen_factor: Vec<u16>,
    radius_cap: u32,
}

/// Build a model from a descriptor. Nested free products are flattened.
pub fn make_group(spec: &GroupDescriptor) -> Result<GroupModel> {
    GroupModel::new(spec)
}

impl GroupModel {
    pub fn new(spec: &GroupDescriptor) -> Result<Self> {
        let mut names = Vec::new();
        let mut factors = Vec::new();
        collect_factors(spec, &mut names, &mut factors, 0)?;
        if factors.is_empty() {
            return Err(Error::Config("group has no factors".into()));
        }
        // Default names fill the gaps left as empty strings.
        let mut used: HashMap<String, usize> = HashMap::new();
        for (i, n) in names.iter_mut().enumerate() {
            if n.is_empty() {
                *n = default_name(i);
            }
            validate_name(n)?;
            if used.insert(n.clone(), i).is_some() {
                return Err(Error::Config(format!("duplicate generator name '{n}'")));
            }
        }
        let mut gen_factor = vec![0u16; names.len()];
        for (fi, f) in factors.iter().enumerate() {
            gen_factor[f.first_gen..f.first_gen + f.gen_count].fill(fi as u16);
        }
        Ok(GroupModel {
            names,
            factors,
            gen_factor,
            radius_cap: DEFAULT_RADIUS_CAP,
        })
    }

    pub fn free(rank: usize) -> Result<Self> {
        Self::new(&GroupDescriptor::Free { rank, generators: None })
    }

    pub fn free_abelian(rank: usize) -> Result<Self> {
        Self::new(&GroupDescriptor::FreeAbelian { rank, generators: None })
    }

    pub fn finite_cyclic(order: u64) -> Result<Self> {
        Self::new(&GroupDescriptor::FiniteCyclic { order, generator: None })
    }

    pub fn with_radius_cap(mut self, cap: u32) -> Self {
        self.radius_cap = cap;
        self
    }

    pub fn radius_cap(&self) -> u32 {
        self.radius_cap
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_index(&self, name: &str) -> Option<u16> {
        self.names.iter().position(|n| n == name).map(|i| i as u16)
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_free_product(&self) -> bool {
        self.factors.len() > 1
    }

    pub fn factor_of_gen(&self, gen: u16) -> u16 {
        self.gen_factor[gen as usize]
    }

    /// Structural equality of the group (same kinds, ranks, orders, names).
    pub fn same_shape(&self, other: &GroupModel) -> bool {
        self.names == other.names && self.factors == other.factors
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity()
    }

    /// Canonicalize an arbitrary word. Idempotent on normal forms.
    /// Exponents are bounded so that reductions cannot overflow.
    pub fn normal_form(&self, raw: &[Syllable]) -> Result<GroupElement> {
        const EXP_BOUND: i64 = 1 << 40;
        for s in raw {
            if s.gen as usize >= self.names.len() {
                return Err(Error::UnknownGenerator(format!("#{}", s.gen)));
            }
            if s.exp.abs() > EXP_BOUND {
                return Err(Error::Input(format!(
                    "exponent {} out of supported range",
                    s.exp
                )));
            }
        }
        Ok(GroupElement::from_canonical(
            self.reduce(raw.iter().copied()),
        ))
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement::from_canonical(
            self.reduce(a.syllables().iter().chain(b.syllables()).copied()),
        )
    }

    pub fn invert(&self, a: &GroupElement) -> GroupElement {
        GroupElement::from_canonical(self.reduce(
            a.syllables().iter().rev().map(|s| Syllable::new(s.gen, -s.exp)),
        ))
    }

    /// Exact word metric for the standard symmetric generating set.
    pub fn distance(&self, a: &GroupElement, b: &GroupElement) -> u64 {
        if a == b {
            return 0;
        }
        self.word_length(&self.multiply(&self.invert(a), b))
    }

    /// Word length of a normal form: sum of factor-metric syllable lengths.
    pub fn word_length(&self, a: &GroupElement) -> u64 {
        a.syllables()
            .iter()
            .map(|s| self.syllable_length(s))
            .sum()
    }

    fn syllable_length(&self, s: &Syllable) -> u64 {
        match self.factors[self.gen_factor[s.gen as usize] as usize].kind {
            PrimitiveKind::FiniteCyclic { order } => {
                let e = s.exp.rem_euclid(order as i64) as u64;
                e.min(order - e)
            }
            _ => s.exp.unsigned_abs(),
        }
    }

    /// The normal form spelled as single letters, in minimal-length form.
    pub fn letters<'a>(&'a self, a: &'a GroupElement) -> impl Iterator<Item = Letter> + 'a {
        a.syllables().iter().flat_map(move |s| {
            let (count, inverse) =
                match self.factors[self.gen_factor[s.gen as usize] as usize].kind {
                    PrimitiveKind::FiniteCyclic { order } => {
                        let e = s.exp.rem_euclid(order as i64) as u64;
                        // Ties (2e == order) spell positively: shortlex prefers it.
                        if 2 * e <= order {
                            (e, false)
                        } else {
                            (order - e, true)
                        }
                    }
                    _ => (s.exp.unsigned_abs(), s.exp < 0),
                };
            std::iter::repeat_n(Letter { gen: s.gen, inverse }, count as usize)
        })
    }

    /// Shortlex order: length first, then letters with `g < g^-1 < h < ...`.
    pub fn cmp_shortlex(&self, a: &GroupElement, b: &GroupElement) -> Ordering {
        let la = self.word_length(a);
        let lb = self.word_length(b);
        match la.cmp(&lb) {
            Ordering::Equal => self.letters(a).cmp(self.letters(b)),
            o => o,
        }
    }

    /// The standard symmetric generating set as elements (length 1 each).
    pub fn generators(&self) -> Vec<GroupElement> {
        let mut out = Vec::with_capacity(2 * self.names.len());
        for g in 0..self.names.len() as u16 {
            for exp in [1i64, -1] {
                let e = self
                    .normal_form(&[Syllable::new(g, exp)])
                    .expect("generator in alphabet");
                if !e.is_identity() {
                    out.push(e);
                }
            }
        }
        // Involutions appear twice (g = g^-1 as elements); keep one copy.
        out.dedup();
        out
    }

    /// Elements at word distance at most `radius` from `center`, sorted
    /// shortlex. Deterministic; refuses radii above the safety cap.
    pub fn ball(&self, center: &GroupElement, radius: u32) -> Result<Vec<GroupElement>> {
        if radius > self.radius_cap {
            return Err(Error::RadiusCap {
                requested: radius,
                cap: self.radius_cap,
            });
        }
        self.ball_bounded(center, radius, usize::MAX)
    }

    /// As `ball`, but guarded by an element budget instead of the radius cap.
    /// Builders use this so that polynomial-growth groups can take wide balls
    /// while exponential ones still fail fast.
    pub fn ball_bounded(
        &self,
        center: &GroupElement,
        radius: u32,
        max_elements: usize,
    ) -> Result<Vec<GroupElement>> {
        let gens = self.generators();
        let mut seen: HashMap<GroupElement, u32> = HashMap::new();
        seen.insert(center.clone(), 0);
        let mut frontier = vec![center.clone()];
        for layer in 1..=radius {
            let mut next = Vec::new();
            for g in &frontier {
                for s in &gens {
                    let h = self.multiply(g, s);
                    if !seen.contains_key(&h) {
                        if seen.len() >= max_elements {
                            return Err(Error::VertexBudget {
                                needed: seen.len() + 1,
                                cap: max_elements,
                            });
                        }
                        seen.insert(h.clone(), layer);
                        next.push(h);
                    }
                }
            }
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        let mut out: Vec<GroupElement> = seen.into_keys().collect();
        out.sort_by(|a, b| self.cmp_shortlex(a, b));
        Ok(out)
    }

    /// Display form, e.g. `a^2*b^-1`; the identity prints as `e`.
    pub fn display(&self, a: &GroupElement) -> String {
        if a.is_identity() {
            return "e".to_string();
        }
        let parts: Vec<String> = a
            .syllables()
            .iter()
            .map(|s| {
                if s.exp == 1 {
                    self.names[s.gen as usize].clone()
                } else {
                    format!("{}^{}", self.names[s.gen as usize], s.exp)
                }
            })
            .collect();
        parts.join("*")
    }

    // ---- reduction ----------------------------------------------------

    fn reduce(&self, input: impl Iterator<Item = Syllable>) -> Vec<Syllable> {
        // Stack of factor blocks; adjacent blocks always have distinct
        // factors, each block canonical within its factor.
        let mut blocks: Vec<(u16, BlockElem)> = Vec::new();
        for syl in input {
            if syl.exp == 0 {
                continue;
            }
            let f = self.gen_factor[syl.gen as usize];
            let merged = match blocks.last_mut() {
                Some((top_f, elem)) if *top_f == f => {
                    elem.push_syllable(&self.factors[f as usize], syl);
                    if elem.is_identity(&self.factors[f as usize]) {
                        blocks.pop();
                    }
                    true
                }
                _ => false,
            };
            if !merged {
                let mut elem = BlockElem::new(&self.factors[f as usize]);
                elem.push_syllable(&self.factors[f as usize], syl);
                if !elem.is_identity(&self.factors[f as usize]) {
                    blocks.push((f, elem));
                }
            }
        }
        let mut out = Vec::new();
        for (f, elem) in blocks {
            elem.emit(&self.factors[f as usize], &mut out);
        }
        out
    }
}

enum BlockElem {
    /// Free factor: reduced word, adjacent generators distinct.
    Word(Vec<Syllable>),
    /// Free abelian factor: exponent per local generator.
    Coords(Vec<i64>),
    /// Finite cyclic factor: exponent in `0..order`.
    Cyclic(u64),
}

impl BlockElem {
    fn new(factor: &Factor) -> Self {
        match factor.kind {
            PrimitiveKind::Free { .. } => BlockElem::Word(Vec::new()),
            PrimitiveKind::FreeAbelian { .. } => BlockElem::Coords(vec![0; factor.gen_count]),
            PrimitiveKind::FiniteCyclic { .. } => BlockElem::Cyclic(0),
        }
    }

    fn push_syllable(&mut self, factor: &Factor, syl: Syllable) {
        match self {
            BlockElem::Word(word) => {
                if let Some(last) = word.last_mut() {
                    if last.gen == syl.gen {
                        last.exp += syl.exp;
                        if last.exp == 0 {
                            word.pop();
                        }
                        return;
                    }
                }
                word.push(syl);
            }
            BlockElem::Coords(coords) => {
                coords[syl.gen as usize - factor.first_gen] += syl.exp;
            }
            BlockElem::Cyclic(e) => {
                let order = match factor.kind {
                    PrimitiveKind::FiniteCyclic { order } => order,
                    _ => unreachable!(),
                };
                let add = syl.exp.rem_euclid(order as i64) as u64;
                *e = (*e + add) % order;
            }
        }
    }

    fn is_identity(&self, _factor: &Factor) -> bool {
        match self {
            BlockElem::Word(w) => w.is_empty(),
            BlockElem::Coords(c) => c.iter().all(|&x| x == 0),
            BlockElem::Cyclic(e) => *e == 0,
        }
    }

    fn emit(self, factor: &Factor, out: &mut Vec<Syllable>) {
        match self {
            BlockElem::Word(w) => out.extend(w),
            BlockElem::Coords(c) => {
                for (i, &exp) in c.iter().enumerate() {
                    if exp != 0 {
                        out.push(Syllable::new((factor.first_gen + i) as u16, exp));
                    }
                }
            }
            BlockElem::Cyclic(e) => {
                if e != 0 {
                    out.push(Syllable::new(factor.first_gen as u16, e as i64));
                }
            }
        }
    }
}

fn collect_factors(
    spec: &GroupDescriptor,
    names: &mut Vec<String>,
    factors: &mut Vec<Factor>,
    depth: usize,
) -> Result<()> {
    if depth > 8 {
        return Err(Error::Config("free product nesting too deep".into()));
    }
    match spec {
        GroupDescriptor::Free { rank, generators } => {
            push_factor(PrimitiveKind::Free { rank: *rank }, generators, names, factors)
        }
        GroupDescriptor::FreeAbelian { rank, generators } => push_factor(
            PrimitiveKind::FreeAbelian { rank: *rank },
            generators,
            names,
            factors,
        ),
        GroupDescriptor::FiniteCyclic { order, generator } => {
            let gens = generator.as_ref().map(|g| vec![g.clone()]);
            push_factor(PrimitiveKind::FiniteCyclic { order: *order }, &gens, names, factors)
        }
        GroupDescriptor::FreeProduct { factors: fs } => {
            if fs.len() < 2 {
                return Err(Error::Config(
                    "free product needs at least 2 factors".into(),
                ));
            }
            for f in fs {
                collect_factors(f, names, factors, depth + 1)?;
            }
            Ok(())
        }
    }
}

fn push_factor(
    kind: PrimitiveKind,
    generators: &Option<Vec<String>>,
    names: &mut Vec<String>,
    factors: &mut Vec<Factor>,
) -> Result<()> {
    match kind {
        PrimitiveKind::Free { rank } | PrimitiveKind::FreeAbelian { rank } if rank < 1 => {
            return Err(Error::Config("rank must be >= 1".into()));
        }
        PrimitiveKind::FiniteCyclic { order } if !(2..=1_000_000_000).contains(&order) => {
            return Err(Error::Config(
                "cyclic order must be in 2..=1_000_000_000".into(),
            ));
        }
        _ => {}
    }
    let count = kind.rank();
    let first = names.len();
    match generators {
        Some(gs) => {
            if gs.len() != count {
                return Err(Error::Config(format!(
                    "expected {} generator names, got {}",
                    count,
                    gs.len()
                )));
            }
            names.extend(gs.iter().cloned());
        }
        None => names.extend(std::iter::repeat_n(String::new(), count)),
    }
    factors.push(Factor {
        kind,
        first_gen: first,
        gen_count: count,
    });
    Ok(())
}

fn default_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("g{i}")
    }
}

fn validate_name(name: &str) -> Result<()> {
    if name.is_empty()
        || !name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_')
        || !name.chars().next().unwrap().is_ascii_alphabetic()
    {
        return Err(Error::Config(format!(
            "generator name '{name}' must be alphanumeric and start with a letter"
        )));
    }
    Ok(())
}
