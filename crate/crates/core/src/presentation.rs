//! Projective presentations `σ: P1 → P0`, the class `D_σ`, and the silting
//! decision procedures relative to a fixed presentation.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{regular_module, FDAlgebra};
use crate::comma::{functor_p, functor_p_map, TriangularRing};
use crate::error::{Error, Result};
use crate::family::ModuleFamily;
use crate::linalg::FpMatrix;
use crate::module::{
    cokernel, direct_sum2, gen_member, generated_subspace, hom_dim, hom_space, invariant_submodule, kernel, power,
    ModuleMap, ModuleRep, Side,
};
use crate::verdict::{Certificate, Fact, Outcome, Verdict};
use crate::Limits;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PresentationViolation {
    SigmaNotIntertwiner,
    WitnessNotIntertwiner,
    Shapes,
    NotProjective(&'static str),
    WitnessNotEpi,
    /// `witness ∘ σ ≠ 0`
    NotComplex,
    /// `ker(witness) ⊄ Im σ`
    NotExact,
}

impl fmt::Display for PresentationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresentationViolation::SigmaNotIntertwiner => write!(f, "sigma is not a module map"),
            PresentationViolation::WitnessNotIntertwiner => write!(f, "witness is not a module map"),
            PresentationViolation::Shapes => write!(f, "sigma, witness and target do not compose"),
            PresentationViolation::NotProjective(which) => write!(f, "{which} is not projective"),
            PresentationViolation::WitnessNotEpi => write!(f, "witness is not surjective"),
            PresentationViolation::NotComplex => write!(f, "witness after sigma is not zero"),
            PresentationViolation::NotExact => write!(f, "kernel of the witness is larger than the image of sigma"),
        }
    }
}

/// `P1 --σ--> P0 --witness--> M → 0`, exact with `P1`, `P0` projective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    sigma: ModuleMap,
    target: ModuleRep,
    witness: ModuleMap,
}

impl Presentation {
    pub fn new(sigma: ModuleMap, target: ModuleRep, witness: ModuleMap) -> Result<Self> {
        let s = Self::from_parts(sigma, target, witness);
        if let Some(v) = s.validate()?.first() {
            return Err(Error::InvalidPresentation(format!("{v}")));
        }
        Ok(s)
    }

    pub fn from_parts(sigma: ModuleMap, target: ModuleRep, witness: ModuleMap) -> Self {
        Self { sigma, target, witness }
    }

    /// The presentation of `coker σ` by `σ` itself.
    pub fn from_sigma(sigma: ModuleMap) -> Result<Self> {
        let q = cokernel(&sigma)?;
        Ok(Self::from_parts(sigma, q.module, q.projection))
    }

    /// `0 → P`, presenting the projective `P`.
    pub fn of_projective(p: &ModuleRep) -> Self {
        let zero = ModuleRep::zero(p.algebra().clone(), p.side());
        Self::from_parts(ModuleMap::zero(&zero, p), p.clone(), ModuleMap::identity(p))
    }

    /// `P → 0`, presenting `0` with `D_σ = {X : Hom(P, X) = 0}`. With `P`
    /// regular this is the presentation for which `0` is silting.
    pub fn killing(p: &ModuleRep) -> Self {
        let zero = ModuleRep::zero(p.algebra().clone(), p.side());
        Self::from_parts(ModuleMap::zero(p, &zero), zero.clone(), ModuleMap::identity(&zero))
    }

    /// `0 → 0`
    pub fn zero(algebra: &Arc<FDAlgebra>) -> Self {
        Self::of_projective(&ModuleRep::zero(algebra.clone(), Side::Left))
    }

    pub fn sigma(&self) -> &ModuleMap {
        &self.sigma
    }

    pub fn target(&self) -> &ModuleRep {
        &self.target
    }

    pub fn witness(&self) -> &ModuleMap {
        &self.witness
    }

    pub fn p1(&self) -> &ModuleRep {
        self.sigma.source()
    }

    pub fn p0(&self) -> &ModuleRep {
        self.sigma.target()
    }

    pub fn algebra(&self) -> &Arc<FDAlgebra> {
        self.target.algebra()
    }

    pub fn validate(&self) -> Result<Vec<PresentationViolation>> {
        let mut out = Vec::new();
        let shapes = self.witness.source() == self.sigma.target()
            && self.witness.target() == &self.target
            && self.sigma.matrix().rows() == self.p0().dim()
            && self.sigma.matrix().cols() == self.p1().dim()
            && self.witness.matrix().rows() == self.target.dim()
            && self.witness.matrix().cols() == self.p0().dim();
        if !shapes {
            out.push(PresentationViolation::Shapes);
            return Ok(out);
        }
        if !self.sigma.is_intertwiner() {
            out.push(PresentationViolation::SigmaNotIntertwiner);
        }
        if !self.witness.is_intertwiner() {
            out.push(PresentationViolation::WitnessNotIntertwiner);
        }
        if !is_projective(self.p1())? {
            out.push(PresentationViolation::NotProjective("P1"));
        }
        if !is_projective(self.p0())? {
            out.push(PresentationViolation::NotProjective("P0"));
        }
        if !self.witness.is_surjective() {
            out.push(PresentationViolation::WitnessNotEpi);
        }
        let composite = self.witness.matrix().mul(self.sigma.matrix());
        if !composite.is_zero() {
            out.push(PresentationViolation::NotComplex);
        } else if self.witness.matrix().kernel_basis().cols() > self.sigma.rank() {
            out.push(PresentationViolation::NotExact);
        }
        Ok(out)
    }

    /// `x ∈ D_σ`: precomposition with `σ` maps `Hom(P0, x)` onto `Hom(P1, x)`.
    pub fn d_sigma_member(&self, x: &ModuleRep) -> Result<bool> {
        let target = hom_dim(self.p1(), x)?;
        if target == 0 {
            return Ok(true);
        }
        let basis = hom_space(self.p0(), x)?;
        if basis.is_empty() {
            return Ok(false);
        }
        let p = x.p();
        let len = x.dim() * self.p1().dim();
        let cols: Vec<Vec<u32>> = basis
            .iter()
            .map(|h| h.matrix().mul(self.sigma.matrix()).entries().to_vec())
            .collect();
        Ok(FpMatrix::from_columns(p, len, &cols).rank() == target)
    }

    /// `D_σ` as a family over the given universe.
    pub fn d_sigma(&self, universe: Vec<ModuleRep>) -> ModuleFamily {
        ModuleFamily::d_sigma(self.clone(), universe)
    }
}

/// Greedy generating set: standard basis vectors not already in the
/// submodule generated by the earlier choices.
pub fn greedy_generators(m: &ModuleRep) -> Vec<Vec<u32>> {
    let p = m.p();
    let n = m.dim();
    let mut chosen: Vec<Vec<u32>> = Vec::new();
    let mut span = FpMatrix::zeros(p, n, 0);
    for i in 0..n {
        if span.cols() == n {
            break;
        }
        let mut e = alloc::vec![0u32; n];
        e[i] = 1;
        let grown = generated_subspace(m, &span.hstack(&FpMatrix::column_vector(p, &e)));
        if grown.cols() > span.cols() {
            chosen.push(e);
            span = grown;
        }
    }
    chosen
}

/// `A^g → m` sending the `k`-th copy of `1` to the `k`-th generator.
pub fn free_cover(m: &ModuleRep, generators: &[Vec<u32>]) -> ModuleMap {
    let alg = m.algebra();
    let reg = regular_module(alg, Side::Left);
    let free = power(&reg, generators.len());
    let p = m.p();
    let d = alg.dim();
    let mut matrix = FpMatrix::zeros(p, m.dim(), d * generators.len());
    for (k, g) in generators.iter().enumerate() {
        for i in 0..d {
            let col = m.action()[i].mul_vec_or_zero(g, m.dim());
            for (row, v) in col.into_iter().enumerate() {
                matrix.set(row, k * d + i, v);
            }
        }
    }
    ModuleMap::from_parts(free, m.clone(), matrix)
}

/// Projectivity of a left module: its free cover on a generating set splits.
pub fn is_projective(m: &ModuleRep) -> Result<bool> {
    if m.side() != Side::Left {
        return Err(Error::SideMismatch("is_projective expects a left module"));
    }
    if m.is_zero() {
        return Ok(true);
    }
    let cover = free_cover(m, &greedy_generators(m));
    let sections = hom_space(m, cover.source())?;
    if sections.is_empty() {
        return Ok(false);
    }
    let p = m.p();
    let n = m.dim();
    let cols: Vec<Vec<u32>> = sections
        .iter()
        .map(|s| cover.matrix().mul(s.matrix()).entries().to_vec())
        .collect();
    let system = FpMatrix::from_columns(p, n * n, &cols);
    Ok(system.solve(FpMatrix::identity(p, n).entries())?.is_some())
}

/// `A^h → A^g → m → 0` with one generator per basis vector of `m` and of the
/// kernel.
pub fn free_presentation(m: &ModuleRep) -> Result<Presentation> {
    build_presentation_with(m, |x: &ModuleRep| {
        (0..x.dim())
            .map(|i| {
                let mut e = alloc::vec![0u32; x.dim()];
                e[i] = 1;
                e
            })
            .collect()
    })
}

/// As [`free_presentation`] but with greedily chosen generating sets for the
/// module and for the kernel.
pub fn free_presentation_minimized(m: &ModuleRep) -> Result<Presentation> {
    build_presentation_with(m, greedy_generators)
}

fn build_presentation_with(m: &ModuleRep, gens: impl Fn(&ModuleRep) -> Vec<Vec<u32>>) -> Result<Presentation> {
    if m.side() != Side::Left {
        return Err(Error::SideMismatch("free_presentation expects a left module"));
    }
    let pi = free_cover(m, &gens(m));
    let k = kernel(&pi)?;
    let cover_k = free_cover(&k.module, &gens(&k.module));
    let sigma = ModuleMap::from_parts(
        cover_k.source().clone(),
        pi.source().clone(),
        k.inclusion.matrix().mul(cover_k.matrix()),
    );
    Ok(Presentation::from_parts(sigma, m.clone(), pi))
}

/// The presentation of `p(A, B)` over `T` assembled from presentations of
/// `A` and `B`: `p(σ_A, σ_B): p(P1, Q1) → p(P0, Q0)`.
pub fn sigma_for_p(ring: &Arc<TriangularRing>, sa: &Presentation, sb: &Presentation) -> Result<Presentation> {
    let sigma = functor_p_map(ring, sa.sigma(), sb.sigma())?.to_t_map();
    let witness = functor_p_map(ring, sa.witness(), sb.witness())?.to_t_map();
    let target = functor_p(ring, sa.target(), sb.target())?.to_t_module();
    Ok(Presentation::from_parts(sigma, target, witness))
}

fn dsigma_cert(clause: &str, s: &Presentation, universe: &[ModuleRep], m: &ModuleRep, member: bool) -> Certificate {
    Certificate::new(
        clause,
        Fact::Member {
            family: s.d_sigma(universe.to_vec()),
            module: m.clone(),
            member,
        },
    )
}

/// `m ∈ D_σ` and `D_σ ∩ universe` closed under pairwise sums within
/// `limits.max_dim`. Images and extensions are not checked: `D_σ` is closed
/// under both for every `σ`.
pub fn is_partial_silting(m: &ModuleRep, s: &Presentation, universe: &[ModuleRep], limits: &Limits) -> Result<Verdict> {
    let mut certs = Vec::new();
    let mut holds = true;
    let own = s.d_sigma_member(m)?;
    if !own {
        holds = false;
        certs.push(dsigma_cert("module lies in D_sigma", s, universe, m, false));
    }
    let members: Vec<&ModuleRep> = universe
        .iter()
        .filter_map(|u| match s.d_sigma_member(u) {
            Ok(true) => Some(Ok(u)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<_>>()?;
    'outer: for (i, x) in members.iter().enumerate() {
        for y in &members[i..] {
            if x.dim() + y.dim() > limits.max_dim || x.is_zero() || y.is_zero() {
                continue;
            }
            let sum = direct_sum2(x, y)?;
            if !s.d_sigma_member(&sum)? {
                holds = false;
                certs.push(dsigma_cert("D_sigma closed under sums", s, universe, x, true));
                certs.push(dsigma_cert("D_sigma closed under sums", s, universe, y, true));
                certs.push(dsigma_cert("D_sigma closed under sums", s, universe, &sum, false));
                break 'outer;
            }
        }
    }
    let detail = if holds {
        String::from("module in D_sigma; D_sigma closed under sums on the universe")
    } else if !own {
        String::from("module not in D_sigma")
    } else {
        String::from("D_sigma not closed under a direct sum")
    };
    Ok(Verdict::new(
        "partial-silting",
        Outcome::from_bool(holds),
        detail,
        certs,
    ))
}

/// `D_σ = Gen m` on the universe together with `m` itself.
pub fn is_silting(m: &ModuleRep, s: &Presentation, universe: &[ModuleRep], _limits: &Limits) -> Result<Verdict> {
    let mut certs = Vec::new();
    let mut disagreements = 0usize;
    let mut candidates: Vec<ModuleRep> = universe.to_vec();
    candidates.push(m.clone());
    let gen = ModuleFamily::gen(m.clone(), universe.to_vec());
    for u in &candidates {
        let d = s.d_sigma_member(u)?;
        let g = gen_member(m, u)?;
        if d != g {
            disagreements += 1;
            let clause = if d {
                "D_sigma contained in Gen"
            } else {
                "Gen contained in D_sigma"
            };
            certs.push(dsigma_cert(clause, s, universe, u, d));
            certs.push(Certificate::new(
                clause,
                Fact::Member {
                    family: gen.clone(),
                    module: u.clone(),
                    member: g,
                },
            ));
        }
    }
    let detail = if disagreements == 0 {
        String::from("D_sigma and Gen agree on the universe")
    } else {
        format!("D_sigma and Gen disagree on {disagreements} module(s)")
    };
    Ok(Verdict::new(
        "silting",
        Outcome::from_bool(disagreements == 0),
        detail,
        certs,
    ))
}

/// `Hom(f, x)` is onto for every universe member `x` of the family.
pub fn is_left_approximation(f: &ModuleMap, family: &ModuleFamily, limits: &Limits) -> Result<bool> {
    for x in family.universe() {
        if !family.contains(x, limits)? {
            continue;
        }
        let needed = hom_dim(f.source(), x)?;
        if needed == 0 {
            continue;
        }
        let basis = hom_space(f.target(), x)?;
        let p = x.p();
        let len = x.dim() * f.source().dim();
        let cols: Vec<Vec<u32>> = basis
            .iter()
            .map(|h| h.matrix().mul(f.matrix()).entries().to_vec())
            .collect();
        let rank = if cols.is_empty() {
            0
        } else {
            FpMatrix::from_columns(p, len, &cols).rank()
        };
        if rank < needed {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks a witness for the approximation criterion of silting: an exact
/// `A --α--> T0 → T1 → 0` with `α` a left `D_σ`-approximation. Membership of
/// `T0`, `T1` in `Add T` is given by the caller as splittings into copies of
/// `T` and is checked with [`invariant_submodule`].
pub fn check_approximation_sequence(
    alpha: &ModuleMap,
    beta: &ModuleMap,
    s: &Presentation,
    universe: &[ModuleRep],
    limits: &Limits,
) -> Result<bool> {
    let reg = regular_module(s.algebra(), Side::Left);
    if alpha.source() != &reg || alpha.target() != beta.source() {
        return Ok(false);
    }
    if !alpha.is_intertwiner() || !beta.is_intertwiner() || !beta.is_surjective() {
        return Ok(false);
    }
    if !beta.matrix().mul(alpha.matrix()).is_zero() {
        return Ok(false);
    }
    let ker = invariant_submodule(beta.source(), &beta.matrix().kernel_basis())?;
    if ker.module.dim() != alpha.rank() {
        return Ok(false);
    }
    for t in [alpha.target(), beta.target()] {
        if !gen_member(s.target(), t)? {
            return Ok(false);
        }
    }
    is_left_approximation(alpha, &s.d_sigma(universe.to_vec()), limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{DualNumbers, A2};

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn projectivity() {
        let a2 = A2::new();
        let t = a2.t_modules();
        assert!(is_projective(&t.p).unwrap());
        assert!(is_projective(&t.s_s).unwrap());
        assert!(!is_projective(&t.s_r).unwrap());
        assert!(!is_projective(&t.n).unwrap());
        let d = DualNumbers::new();
        assert!(is_projective(&d.r_reg).unwrap());
        assert!(!is_projective(&d.r_k).unwrap());
    }

    #[test]
    fn free_presentations() {
        let d = DualNumbers::new();
        let pres = free_presentation(&d.r_k).unwrap();
        assert!(pres.validate().unwrap().is_empty());
        assert_eq!((pres.p1().dim(), pres.p0().dim()), (2, 2));
        // σ is multiplication by x: rank 1 with square zero.
        assert_eq!(pres.sigma().rank(), 1);
        assert!(pres.sigma().matrix().mul(pres.sigma().matrix()).is_zero());
        let min = free_presentation_minimized(&d.r_k).unwrap();
        assert_eq!(min.sigma(), pres.sigma());
        let reg = free_presentation(&d.r_reg).unwrap();
        assert!(reg.validate().unwrap().is_empty());
        assert_eq!(free_presentation_minimized(&d.r_reg).unwrap().p1().dim(), 0);
        let zero = free_presentation(&d.ring.zero_r()).unwrap();
        assert_eq!((zero.p1().dim(), zero.p0().dim()), (0, 0));
    }

    #[test]
    fn d_sigma_examples() {
        let d = DualNumbers::new();
        let x = free_presentation(&d.r_k).unwrap();
        // Only modules with X = xX lie in D_σ, so only 0.
        assert!(!x.d_sigma_member(&d.r_k).unwrap());
        assert!(!x.d_sigma_member(&d.r_reg).unwrap());
        assert!(x.d_sigma_member(&d.ring.zero_r()).unwrap());
        let a2 = A2::new();
        let t = a2.t_modules();
        let incl = hom_space(&t.s_s, &t.p).unwrap().pop().unwrap();
        let s = Presentation::from_sigma(incl).unwrap();
        assert!(s.validate().unwrap().is_empty());
        let members: Vec<bool> = a2.t_universe().iter().map(|m| s.d_sigma_member(m).unwrap()).collect();
        assert_eq!(members, [true, true, false, true, false]);
    }

    #[test]
    fn silting_examples() {
        let a2 = A2::new();
        let t = a2.t_modules();
        let u = a2.t_universe();
        let reg = regular_module(a2.ring.t(), Side::Left);
        let s = Presentation::of_projective(&reg);
        assert!(is_silting(&reg, &s, &u, &limits()).unwrap().holds());
        assert!(is_partial_silting(&reg, &s, &u, &limits()).unwrap().holds());
        let incl = hom_space(&t.s_s, &t.p).unwrap().pop().unwrap();
        let s = Presentation::from_sigma(incl).unwrap();
        assert!(is_partial_silting(&t.s_r, &s, &u, &limits()).unwrap().holds());
        let v = is_silting(&t.s_r, &s, &u, &limits()).unwrap();
        assert!(!v.holds());
        assert!(v.replay(&limits()).unwrap());
        let d = DualNumbers::new();
        let x = free_presentation(&d.r_k).unwrap();
        let v = is_partial_silting(&d.r_k, &x, &d.r_universe(), &limits()).unwrap();
        assert!(!v.holds());
        assert!(v.replay(&limits()).unwrap());
    }

    #[test]
    fn zero_is_silting_when_presented_by_the_regular_module() {
        let d = DualNumbers::new();
        let s = Presentation::killing(&d.r_reg);
        assert!(s.validate().unwrap().is_empty());
        let zero = d.ring.zero_r();
        assert!(is_silting(&zero, &s, &d.r_universe(), &limits()).unwrap().holds());
        assert!(
            !is_silting(&zero, &Presentation::zero(d.ring.r()), &d.r_universe(), &limits())
                .unwrap()
                .holds()
        );
    }

    #[test]
    fn approximations() {
        let a2 = A2::new();
        let t = a2.t_modules();
        let fam = ModuleFamily::all(a2.t_universe());
        assert!(is_left_approximation(&ModuleMap::identity(&t.p), &fam, &limits()).unwrap());
        assert!(!is_left_approximation(&ModuleMap::zero(&t.p, &t.zero), &fam, &limits()).unwrap());
        let reg = regular_module(a2.ring.t(), Side::Left);
        let s = Presentation::of_projective(&reg);
        let id = ModuleMap::identity(&reg);
        let coker = ModuleMap::zero(&reg, &ModuleRep::zero(a2.ring.t().clone(), Side::Left));
        assert!(check_approximation_sequence(&id, &coker, &s, &a2.t_universe(), &limits()).unwrap());
    }

    #[test]
    fn sigma_for_p_presents_p() {
        let d = DualNumbers::new();
        let sa = free_presentation(&d.r_k).unwrap();
        let sb = Presentation::zero(d.ring.s());
        let s = sigma_for_p(&d.ring, &sa, &sb).unwrap();
        assert!(s.validate().unwrap().is_empty());
        let a2 = A2::new();
        let sa = Presentation::of_projective(&a2.r_k);
        let sb = Presentation::of_projective(&a2.s_k);
        let s = sigma_for_p(&a2.ring, &sa, &sb).unwrap();
        assert!(s.validate().unwrap().is_empty());
        assert_eq!(s.p1().dim(), 0);
        assert!(crate::module::isomorphic(s.target(), &regular_module(a2.ring.t(), Side::Left), &limits()).unwrap());
    }
}
