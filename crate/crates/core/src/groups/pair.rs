//! Group pairs: an ambient group with designated peripheral subgroups.
//!
//! Peripherals are restricted to subgroups generated by a subset of the
//! ambient alphabet lying inside a single free-product factor (or the factor
//! itself). For these, membership, canonical coset representatives, and
//! nearest-point projections are all exact syllable manipulations, and the
//! ambient generating set is adapted by construction: the generators meeting
//! the peripheral generate it.

use super::element::{GroupElement, Syllable};
use super::model::{GroupDescriptor, GroupModel, PrimitiveKind};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeripheralDescriptor {
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDescriptor {
    pub group: GroupDescriptor,
    pub peripherals: Vec<PeripheralDescriptor>,
}

/// A peripheral subgroup: ambient generator subset plus its induced model.
#[derive(Clone, Debug)]
pub struct Peripheral {
    /// Ambient generator indices, strictly increasing.
    gens: Vec<u16>,
    /// Induced group model on those generators (same names).
    model: GroupModel,
    /// Ambient generator index -> local index, dense over the alphabet.
    local: Vec<Option<u16>>,
    /// The free-product factor housing this peripheral.
    home_factor: u16,
}

impl Peripheral {
    pub fn gens(&self) -> &[u16] {
        &self.gens
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn home_factor(&self) -> u16 {
        self.home_factor
    }

    fn is_peripheral_gen(&self, gen: u16) -> bool {
        self.local[gen as usize].is_some()
    }

    /// Ambient element of the subgroup -> peripheral coordinates.
    pub fn to_coords(&self, ambient: &GroupModel, g: &GroupElement) -> Result<GroupElement> {
        let _ = ambient;
        let mut sylls = Vec::with_capacity(g.syllables().len());
        for s in g.syllables() {
            match self.local[s.gen as usize] {
                Some(l) => sylls.push(Syllable::new(l, s.exp)),
                None => {
                    return Err(Error::Invariant(format!(
                        "element uses generator #{} outside the peripheral",
                        s.gen
                    )))
                }
            }
        }
        self.model.normal_form(&sylls)
    }

    /// Peripheral coordinates -> ambient element.
    pub fn from_coords(&self, ambient: &GroupModel, p: &GroupElement) -> GroupElement {
        let sylls: Vec<Syllable> = p
            .syllables()
            .iter()
            .map(|s| Syllable::new(self.gens[s.gen as usize], s.exp))
            .collect();
        ambient
            .normal_form(&sylls)
            .expect("peripheral generators are ambient generators")
    }
}

/// A group pair `(ambient, peripherals)` with an adapted generating set.
#[derive(Clone, Debug)]
pub struct GroupPair {
    ambient: GroupModel,
    peripherals: Vec<Peripheral>,
}

impl GroupPair {
    pub fn from_descriptor(desc: &PairDescriptor) -> Result<Self> {
        let ambient = GroupModel::new(&desc.group)?;
        let mut gen_sets = Vec::new();
        for p in &desc.peripherals {
            let mut gens = Vec::new();
            for name in &p.generators {
                let idx = ambient
                    .generator_index(name)
                    .ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
                gens.push(idx);
            }
            gen_sets.push(gens);
        }
        Self::new(ambient, gen_sets)
    }

    pub fn new(ambient: GroupModel, peripheral_gens: Vec<Vec<u16>>) -> Result<Self> {
        let mut peripherals = Vec::new();
        for gens in peripheral_gens {
            peripherals.push(build_peripheral(&ambient, gens)?);
        }
        Ok(GroupPair { ambient, peripherals })
    }

    pub fn ambient(&self) -> &GroupModel {
        &self.ambient
    }

    pub fn peripherals(&self) -> &[Peripheral] {
        &self.peripherals
    }

    /// Does `g` lie in peripheral `p`?
    pub fn peripheral_contains(&self, p: usize, g: &GroupElement) -> bool {
        self.coset_representative(p, g).is_identity()
    }

    /// Canonical (minimal-length, hence shortlex-minimal) representative of
    /// the left coset `g P`.
    pub fn coset_representative(&self, p: usize, g: &GroupElement) -> GroupElement {
        let per = &self.peripherals[p];
        let sylls = g.syllables();
        let mut end = sylls.len();
        // Trailing run of syllables in the peripheral's home factor.
        let run_start = sylls
            .iter()
            .rposition(|s| self.ambient.factor_of_gen(s.gen) != per.home_factor)
            .map_or(0, |i| i + 1);
        let factor_kind = self.ambient.factors()[per.home_factor as usize].kind;
        match factor_kind {
            PrimitiveKind::Free { .. } => {
                while end > run_start && per.is_peripheral_gen(sylls[end - 1].gen) {
                    end -= 1;
                }
            }
            PrimitiveKind::FreeAbelian { .. } => {
                // The run is sorted by generator; drop peripheral coordinates.
                let keep: Vec<Syllable> = sylls[run_start..]
                    .iter()
                    .filter(|s| !per.is_peripheral_gen(s.gen))
                    .copied()
                    .collect();
                let mut out = sylls[..run_start].to_vec();
                out.extend(keep);
                return self
                    .ambient
                    .normal_form(&out)
                    .expect("subword of a normal form");
            }
            PrimitiveKind::FiniteCyclic { .. } => {
                end = run_start;
            }
        }
        self.ambient
            .normal_form(&sylls[..end])
            .expect("subword of a normal form")
    }

    /// The element of `P` (in ambient form) nearest to `g`, i.e. the leading
    /// peripheral part of `g`.
    pub fn peripheral_projection(&self, p: usize, g: &GroupElement) -> GroupElement {
        let per = &self.peripherals[p];
        let sylls = g.syllables();
        // Leading run of syllables in the home factor.
        let run_end = sylls
            .iter()
            .position(|s| self.ambient.factor_of_gen(s.gen) != per.home_factor)
            .unwrap_or(sylls.len());
        let factor_kind = self.ambient.factors()[per.home_factor as usize].kind;
        let part: Vec<Syllable> = match factor_kind {
            PrimitiveKind::Free { .. } => {
                let mut take = 0;
                while take < run_end && per.is_peripheral_gen(sylls[take].gen) {
                    take += 1;
                }
                sylls[..take].to_vec()
            }
            PrimitiveKind::FreeAbelian { .. } => sylls[..run_end]
                .iter()
                .filter(|s| per.is_peripheral_gen(s.gen))
                .copied()
                .collect(),
            PrimitiveKind::FiniteCyclic { .. } => sylls[..run_end].to_vec(),
        };
        self.ambient
            .normal_form(&part)
            .expect("subword of a normal form")
    }

    /// Exact distance from `x` to the coset `rep * P`.
    pub fn distance_to_coset(&self, p: usize, rep: &GroupElement, x: &GroupElement) -> u64 {
        let y = self
            .ambient
            .multiply(&self.ambient.invert(rep), x);
        let q = self.peripheral_projection(p, &y);
        let r = self.ambient.multiply(&self.ambient.invert(&q), &y);
        self.ambient.word_length(&r)
    }

    /// One entry per left coset `g P` meeting the radius ball about the
    /// identity: `(peripheral index, canonical representative)`, sorted.
    pub fn enumerate_peripheral_cosets(
        &self,
        radius: u32,
    ) -> Result<Vec<(usize, GroupElement)>> {
        let ball = self.ambient.ball(&self.ambient.identity(), radius)?;
        let mut out = Vec::new();
        for p in 0..self.peripherals.len() {
            let mut seen = HashSet::new();
            let mut reps = Vec::new();
            for g in &ball {
                let rep = self.coset_representative(p, g);
                if seen.insert(rep.clone()) {
                    reps.push(rep);
                }
            }
            reps.sort_by(|a, b| self.ambient.cmp_shortlex(a, b));
            out.extend(reps.into_iter().map(|r| (p, r)));
        }
        Ok(out)
    }
}

fn build_peripheral(ambient: &GroupModel, mut gens: Vec<u16>) -> Result<Peripheral> {
    gens.sort_unstable();
    gens.dedup();
    if gens.is_empty() {
        return Err(Error::Config("peripheral has no generators".into()));
    }
    for &g in &gens {
        if g as usize >= ambient.generator_count() {
            return Err(Error::UnknownGenerator(format!("#{g}")));
        }
    }
    let home_factor = ambient.factor_of_gen(gens[0]);
    if gens.iter().any(|&g| ambient.factor_of_gen(g) != home_factor) {
        return Err(Error::Config(
            "peripheral generators must lie in a single free factor".into(),
        ));
    }
    let factor = &ambient.factors()[home_factor as usize];
    let names: Vec<String> = gens
        .iter()
        .map(|&g| ambient.generator_names()[g as usize].clone())
        .collect();
    let desc = match factor.kind {
        PrimitiveKind::Free { .. } => GroupDescriptor::Free {
            rank: gens.len(),
            generators: Some(names),
        },
        PrimitiveKind::FreeAbelian { .. } => GroupDescriptor::FreeAbelian {
            rank: gens.len(),
            generators: Some(names),
        },
        PrimitiveKind::FiniteCyclic { order } => {
            if gens.len() != factor.gen_count {
                return Err(Error::Config(
                    "a finite cyclic peripheral must use the whole factor".into(),
                ));
            }
            GroupDescriptor::FiniteCyclic {
                order,
                generator: Some(names[0].clone()),
            }
        }
    };
    let model = GroupModel::new(&desc)?.with_radius_cap(ambient.radius_cap());
    let mut local = vec![None; ambient.generator_count()];
    for (l, &g) in gens.iter().enumerate() {
        local[g as usize] = Some(l as u16);
    }
    Ok(Peripheral {
        gens,
        model,
        local,
        home_factor,
    })
}
