//! Isomorphism-closed classes of modules given by an intrinsic membership
//! predicate, paired with a finite universe of representatives.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::comma::{CommaObject, TriangularRing};
use crate::error::Result;
use crate::module::{gen_member, hom_dim, isomorphic, ModuleRep};
use crate::presentation::Presentation;
use crate::Limits;

/// Which comma family: `𝔘`, `𝔅` or `𝔍`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CommaKind {
    /// `A ∈ 𝒞` and `B ∈ 𝒟`.
    Components,
    /// `φ̄` mono, `A ∈ 𝒞`, `B / Im φ ∈ 𝒟`.
    Mono,
    /// `φ̃` epi, `ker φ̃ ∈ 𝒞`, `B ∈ 𝒟`.
    Epi,
}

impl CommaKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CommaKind::Components => "components",
            CommaKind::Mono => "mono",
            CommaKind::Epi => "epi",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "components" => Some(CommaKind::Components),
            "mono" => Some(CommaKind::Mono),
            "epi" => Some(CommaKind::Epi),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    All,
    Zero,
    /// Isomorphic to one of the listed modules.
    Explicit(Vec<ModuleRep>),
    Gen(ModuleRep),
    DSigma(Box<Presentation>),
    /// `F^⊥`: no nonzero map from a member of `F` (among its universe).
    PerpRight(Box<ModuleFamily>),
    /// `⊥F`: no nonzero map into a member of `F` (among its universe).
    PerpLeft(Box<ModuleFamily>),
    /// `𝔘`, `𝔅` or `𝔍` built from a family `c` over `R` and `d` over `S`.
    Comma {
        ring: Arc<TriangularRing>,
        kind: CommaKind,
        c: Box<ModuleFamily>,
        d: Box<ModuleFamily>,
    },
}

#[derive(Clone, PartialEq, Eq)]
pub struct ModuleFamily {
    label: String,
    membership: Membership,
    universe: Vec<ModuleRep>,
}

impl fmt::Debug for ModuleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleFamily({}, {} in universe)", self.label, self.universe.len())
    }
}

impl ModuleFamily {
    pub fn new(label: impl Into<String>, membership: Membership, universe: Vec<ModuleRep>) -> Self {
        Self {
            label: label.into(),
            membership,
            universe,
        }
    }

    pub fn all(universe: Vec<ModuleRep>) -> Self {
        Self::new("all", Membership::All, universe)
    }

    pub fn zero(universe: Vec<ModuleRep>) -> Self {
        Self::new("zero", Membership::Zero, universe)
    }

    pub fn explicit(label: impl Into<String>, members: Vec<ModuleRep>, universe: Vec<ModuleRep>) -> Self {
        Self::new(label, Membership::Explicit(members), universe)
    }

    pub fn gen(t: ModuleRep, universe: Vec<ModuleRep>) -> Self {
        Self::new("Gen", Membership::Gen(t), universe)
    }

    pub fn d_sigma(s: Presentation, universe: Vec<ModuleRep>) -> Self {
        Self::new("D_sigma", Membership::DSigma(Box::new(s)), universe)
    }

    /// `F^⊥` over `F`'s own universe.
    pub fn perp_right(f: &ModuleFamily) -> Self {
        let label = format!("({})^perp", f.label);
        Self::new(label, Membership::PerpRight(Box::new(f.clone())), f.universe.clone())
    }

    /// `⊥F` over `F`'s own universe.
    pub fn perp_left(f: &ModuleFamily) -> Self {
        let label = format!("perp({})", f.label);
        Self::new(label, Membership::PerpLeft(Box::new(f.clone())), f.universe.clone())
    }

    /// A comma family over the given universe of `T`-modules.
    pub fn comma(
        ring: Arc<TriangularRing>,
        kind: CommaKind,
        c: &ModuleFamily,
        d: &ModuleFamily,
        universe: Vec<ModuleRep>,
    ) -> Self {
        let label = format!("{}[{}; {}]", kind.as_str(), c.label, d.label);
        Self::new(
            label,
            Membership::Comma {
                ring,
                kind,
                c: Box::new(c.clone()),
                d: Box::new(d.clone()),
            },
            universe,
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn membership(&self) -> &Membership {
        &self.membership
    }

    pub fn universe(&self) -> &[ModuleRep] {
        &self.universe
    }

    pub fn with_universe(mut self, universe: Vec<ModuleRep>) -> Self {
        self.universe = universe;
        self
    }

    /// Evaluates the intrinsic predicate on an arbitrary module.
    pub fn contains(&self, m: &ModuleRep, limits: &Limits) -> Result<bool> {
        match &self.membership {
            Membership::All => Ok(true),
            Membership::Zero => Ok(m.is_zero()),
            Membership::Explicit(list) => {
                for x in list {
                    if x.compatible(m) && isomorphic(x, m, limits)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Membership::Gen(t) => gen_member(t, m),
            Membership::DSigma(s) => s.d_sigma_member(m),
            Membership::PerpRight(f) => {
                for x in f.members(limits)? {
                    if hom_dim(&x, m)? != 0 {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Membership::PerpLeft(f) => {
                for x in f.members(limits)? {
                    if hom_dim(m, &x)? != 0 {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Membership::Comma { ring, kind, c, d } => {
                let (obj, _) = CommaObject::from_t_module(ring.clone(), m)?;
                comma_member(&obj, *kind, c, d, limits)
            }
        }
    }

    /// Membership of every universe element, in universe order.
    pub fn bitmap(&self, limits: &Limits) -> Result<Vec<bool>> {
        self.universe.iter().map(|u| self.contains(u, limits)).collect()
    }

    /// The universe elements that belong to the family.
    pub fn members(&self, limits: &Limits) -> Result<Vec<ModuleRep>> {
        let mut out = Vec::new();
        for u in &self.universe {
            if self.contains(u, limits)? {
                out.push(u.clone());
            }
        }
        Ok(out)
    }
}

/// Membership of a comma object in `𝔘`, `𝔅` or `𝔍` built from `c` and `d`.
pub fn comma_member(
    obj: &CommaObject,
    kind: CommaKind,
    c: &ModuleFamily,
    d: &ModuleFamily,
    limits: &Limits,
) -> Result<bool> {
    match kind {
        CommaKind::Components => Ok(c.contains(obj.a(), limits)? && d.contains(obj.b(), limits)?),
        CommaKind::Mono => {
            let (_, bar) = obj.phi_bar()?;
            if !bar.is_injective() {
                return Ok(false);
            }
            Ok(c.contains(obj.a(), limits)? && d.contains(&obj.phi_cokernel()?.module, limits)?)
        }
        CommaKind::Epi => {
            let (_, tilde) = obj.tilde_phi()?;
            if !tilde.is_surjective() {
                return Ok(false);
            }
            let ker = obj.tilde_phi_kernel()?;
            Ok(c.contains(&ker.module, limits)? && d.contains(obj.b(), limits)?)
        }
    }
}

/// Equality of two families as membership bitmaps over a shared universe.
pub fn same_members(a: &ModuleFamily, b: &ModuleFamily, universe: &[ModuleRep], limits: &Limits) -> Result<Vec<usize>> {
    let mut differ = Vec::new();
    for (i, u) in universe.iter().enumerate() {
        if a.contains(u, limits)? != b.contains(u, limits)? {
            differ.push(i);
        }
    }
    Ok(differ)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::A2;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn comma_family_examples() {
        let a2 = A2::new();
        let c = a2.comma();
        let all_r = ModuleFamily::all(a2.r_universe());
        let zero_s = ModuleFamily::zero(a2.s_universe());
        let zero_r = ModuleFamily::zero(a2.r_universe());
        let all_s = ModuleFamily::all(a2.s_universe());
        assert!(comma_member(&c.p, CommaKind::Mono, &all_r, &zero_s, &limits()).unwrap());
        assert!(!comma_member(&c.s_r, CommaKind::Mono, &all_r, &zero_s, &limits()).unwrap());
        assert!(!comma_member(&c.s_s, CommaKind::Epi, &zero_r, &all_s, &limits()).unwrap());
        let fam = ModuleFamily::comma(a2.ring.clone(), CommaKind::Mono, &all_r, &zero_s, a2.t_universe());
        assert_eq!(fam.bitmap(&limits()).unwrap(), [true, false, false, true, false]);
    }

    #[test]
    fn perps_on_a2() {
        let a2 = A2::new();
        let t = a2.t_modules();
        let u = a2.t_universe();
        let all = ModuleFamily::all(u.clone());
        let zero = ModuleFamily::zero(u.clone());
        assert_eq!(
            ModuleFamily::perp_right(&all).bitmap(&limits()).unwrap(),
            [true, false, false, false, false]
        );
        assert!(ModuleFamily::perp_right(&zero)
            .bitmap(&limits())
            .unwrap()
            .iter()
            .all(|&b| b));
        let p = ModuleFamily::explicit("P", alloc::vec![t.p.clone()], u.clone());
        assert_eq!(
            ModuleFamily::perp_right(&p).bitmap(&limits()).unwrap(),
            [true, false, true, false, false]
        );
        let s_s = ModuleFamily::explicit("S_S", alloc::vec![t.s_s.clone()], u.clone());
        assert_eq!(
            ModuleFamily::perp_left(&s_s).bitmap(&limits()).unwrap(),
            [true, true, false, true, false]
        );
    }

    #[test]
    fn membership_is_isomorphism_invariant() {
        let a2 = A2::new();
        let t = a2.t_modules();
        let u = a2.t_universe();
        let swapped = crate::module::direct_sum(&[t.s_s.clone(), t.s_r.clone()])
            .unwrap()
            .module;
        let fams = [
            ModuleFamily::gen(t.p.clone(), u.clone()),
            ModuleFamily::explicit("N", alloc::vec![t.n.clone()], u.clone()),
            ModuleFamily::perp_left(&ModuleFamily::explicit("P", alloc::vec![t.p.clone()], u.clone())),
        ];
        for f in &fams {
            assert_eq!(
                f.contains(&t.n, &limits()).unwrap(),
                f.contains(&swapped, &limits()).unwrap()
            );
        }
    }
}
