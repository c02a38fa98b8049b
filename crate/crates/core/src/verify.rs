//! Verifiers for the transfer statements about `T = [[R, 0], [U, S]]`.
//!
//! Each verifier evaluates both sides of a statement independently on the
//! universes of a [`Setting`] and reports whether they agree. Nothing here
//! assumes the statement is true.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::regular_module;
use crate::comma::{
    functor_h, functor_p, hom_comma_dim, hom_formula, tensor_t, CommaObject, HomKind, RightTModule, TriangularRing,
};
use crate::error::Result;
use crate::family::{CommaKind, ModuleFamily};
use crate::fixtures::{DualNumbers, A2, A2_NAMES};
use crate::module::{hom_dim, isomorphic, ModuleRep, Side};
use crate::presentation::{free_presentation_minimized, is_partial_silting, is_silting, sigma_for_p, Presentation};
use crate::tensor::{tensor_over, tensor_over_algebra};
use crate::torsion::{is_torsion_class, is_torsion_pair, perp_left, perp_right};
use crate::universe::{right_t_universe, t_universe};
use crate::verdict::{universe_hash, Certificate, Fact, Outcome, Verdict};
use crate::Limits;

/// Everything the verifiers quantify over.
#[derive(Clone, Debug)]
pub struct Setting {
    pub name: String,
    pub ring: Arc<TriangularRing>,
    pub r_universe: Vec<ModuleRep>,
    pub r_names: Vec<String>,
    pub s_universe: Vec<ModuleRep>,
    pub s_names: Vec<String>,
    pub comma_universe: Vec<CommaObject>,
    pub t_names: Vec<String>,
    pub right_universe: Vec<RightTModule>,
    pub r_presentations: Vec<(String, Presentation)>,
    pub s_presentations: Vec<(String, Presentation)>,
    pub limits: Limits,
}

fn numbered(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

impl Setting {
    /// Builds the comma and right universes from the component universes.
    #[allow(clippy::too_many_arguments)]
    pub fn build(
        name: &str,
        ring: Arc<TriangularRing>,
        r_universe: Vec<ModuleRep>,
        s_universe: Vec<ModuleRep>,
        right_r_universe: &[ModuleRep],
        right_s_universe: &[ModuleRep],
        r_presentations: Vec<(String, Presentation)>,
        s_presentations: Vec<(String, Presentation)>,
        limits: Limits,
    ) -> Result<Self> {
        let comma_universe = t_universe(&ring, &r_universe, &s_universe, &limits)?;
        let right_universe = right_t_universe(&ring, right_r_universe, right_s_universe, &limits)?;
        Ok(Self {
            name: name.to_string(),
            r_names: numbered("R", r_universe.len()),
            s_names: numbered("S", s_universe.len()),
            t_names: numbered("T", comma_universe.len()),
            ring,
            r_universe,
            s_universe,
            comma_universe,
            right_universe,
            r_presentations,
            s_presentations,
            limits,
        })
    }

    /// The lower triangular `2 × 2` matrices over `F_2`, with the comma
    /// universe in the fixed order `0, S_R, S_S, P, N`.
    pub fn a2(limits: Limits) -> Result<Self> {
        let a2 = A2::new();
        let r = a2.ring.r().clone();
        let s = a2.ring.s().clone();
        let mut setting = Self::build(
            "a2",
            a2.ring.clone(),
            a2.r_universe(),
            a2.s_universe(),
            &a2.right_r_universe(),
            &a2.right_s_universe(),
            vec![
                ("k".to_string(), Presentation::of_projective(&a2.r_k)),
                ("0".to_string(), Presentation::zero(&r)),
                ("0 from R".to_string(), Presentation::killing(&a2.r_k)),
            ],
            vec![
                ("k".to_string(), Presentation::of_projective(&a2.s_k)),
                ("0".to_string(), Presentation::zero(&s)),
                ("0 from S".to_string(), Presentation::killing(&a2.s_k)),
            ],
            limits,
        )?;
        setting.comma_universe = a2.comma().all();
        setting.t_names = A2_NAMES.iter().map(|s| s.to_string()).collect();
        setting.r_names = vec!["0".into(), "k".into()];
        setting.s_names = vec!["0".into(), "k".into()];
        Ok(setting)
    }

    /// `R = F_2[x]/(x²)`, `S = F_2`, `U = k`.
    pub fn dual_numbers(limits: Limits) -> Result<Self> {
        let dn = DualNumbers::new();
        let r = dn.ring.r().clone();
        let s = dn.ring.s().clone();
        let mut setting = Self::build(
            "dual-numbers",
            dn.ring.clone(),
            dn.r_universe(),
            dn.s_universe(),
            &dn.right_r_universe(),
            &dn.right_s_universe(),
            vec![
                ("k by x".to_string(), free_presentation_minimized(&dn.r_k)?),
                ("R".to_string(), Presentation::of_projective(&dn.r_reg)),
                ("0".to_string(), Presentation::zero(&r)),
                ("0 from R".to_string(), Presentation::killing(&dn.r_reg)),
            ],
            vec![
                ("k".to_string(), Presentation::of_projective(&dn.s_k)),
                ("0".to_string(), Presentation::zero(&s)),
                ("0 from S".to_string(), Presentation::killing(&dn.s_k)),
            ],
            limits,
        )?;
        setting.r_names = vec!["0".into(), "k".into(), "R".into(), "k2".into()];
        setting.s_names = vec!["0".into(), "k".into(), "k2".into()];
        Ok(setting)
    }

    /// A built-in setting by name.
    pub fn fixture(name: &str, limits: Limits) -> Result<Option<Self>> {
        match name {
            "a2" => Self::a2(limits).map(Some),
            "dual-numbers" => Self::dual_numbers(limits).map(Some),
            _ => Ok(None),
        }
    }

    pub fn t_universe(&self) -> Vec<ModuleRep> {
        self.comma_universe.iter().map(CommaObject::to_t_module).collect()
    }

    /// Hash of the `T`-universe, recorded on every top-level verdict.
    pub fn hash(&self) -> String {
        universe_hash(&self.t_universe())
    }
}

fn member_cert(clause: &str, family: &ModuleFamily, module: &ModuleRep, member: bool) -> Certificate {
    Certificate::new(
        clause,
        Fact::Member {
            family: family.clone(),
            module: module.clone(),
            member,
        },
    )
}

fn yes(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// Membership as its own verdict, certified either way.
fn membership_verdict(claim: &str, family: &ModuleFamily, module: &ModuleRep, limits: &Limits) -> Result<Verdict> {
    let m = family.contains(module, limits)?;
    Ok(Verdict::new(
        claim,
        Outcome::from_bool(m),
        format!("membership in {} is {}", family.label(), yes(m)),
        vec![member_cert(claim, family, module, m)],
    ))
}

/// `LHS ⟺ RHS`, with both sides attached as parts.
fn equivalence(claim: &str, instance: &str, lhs: Verdict, rhs: Verdict) -> Verdict {
    let outcome = if lhs.outcome == Outcome::OutOfScope || rhs.outcome == Outcome::OutOfScope {
        Outcome::OutOfScope
    } else {
        Outcome::from_bool(lhs.holds() == rhs.holds())
    };
    let detail = format!(
        "{instance}: left side {}, right side {}",
        lhs.outcome.as_str(),
        rhs.outcome.as_str()
    );
    Verdict::new(claim, outcome, detail, Vec::new()).with_sub(vec![lhs, rhs])
}

/// Conjunction of parts; out of scope if any part is.
fn conjunction(claim: &str, parts: Vec<Verdict>) -> Verdict {
    let outcome = if parts.iter().any(|v| v.outcome == Outcome::OutOfScope) {
        Outcome::OutOfScope
    } else {
        Outcome::from_bool(parts.iter().all(Verdict::holds))
    };
    let detail = format!(
        "{} of {} parts hold",
        parts.iter().filter(|v| v.holds()).count(),
        parts.len()
    );
    Verdict::new(claim, outcome, detail, Vec::new()).with_sub(parts)
}

fn out_of_scope(claim: &str, detail: String, sub: Vec<Verdict>) -> Verdict {
    Verdict::new(claim, Outcome::OutOfScope, detail, Vec::new()).with_sub(sub)
}

fn p_object(s: &Setting, a: &Presentation, b: &Presentation) -> Result<(ModuleRep, Presentation)> {
    let sigma = sigma_for_p(&s.ring, a, b)?;
    let m = functor_p(&s.ring, a.target(), b.target())?.to_t_module();
    Ok((m, sigma))
}

fn induced(s: &Setting, a: &ModuleRep) -> Result<ModuleRep> {
    Ok(tensor_over(s.ring.u(), a)?.module)
}

// ---- presentations over T ----

/// `(M, N) ∈ D_σ ⟺ M ∈ D_σA ∧ N ∈ D_σB` on every comma object.
pub fn verify_dsigma_componentwise(s: &Setting, a: &Presentation, b: &Presentation, instance: &str) -> Result<Verdict> {
    let claim = "dsigma-componentwise";
    let sigma = sigma_for_p(&s.ring, a, b)?;
    let tf = sigma.d_sigma(s.t_universe());
    let af = a.d_sigma(s.r_universe.clone());
    let bf = b.d_sigma(s.s_universe.clone());
    let mut certs = Vec::new();
    let mut bad = Vec::new();
    for (i, c) in s.comma_universe.iter().enumerate() {
        let t = c.to_t_module();
        let lhs = tf.contains(&t, &s.limits)?;
        let ma = af.contains(c.a(), &s.limits)?;
        let mb = bf.contains(c.b(), &s.limits)?;
        if lhs != (ma && mb) {
            bad.push(s.t_names[i].clone());
            certs.push(member_cert(claim, &tf, &t, lhs));
            certs.push(member_cert(claim, &af, c.a(), ma));
            certs.push(member_cert(claim, &bf, c.b(), mb));
        }
    }
    let detail = if bad.is_empty() {
        format!("{instance}: agrees on all {} comma objects", s.comma_universe.len())
    } else {
        format!("{instance}: disagrees on {}", bad.join(", "))
    };
    Ok(Verdict::new(claim, Outcome::from_bool(bad.is_empty()), detail, certs))
}

/// The three inclusions into `D_σ`: `(M, 0)`, `(0, N)` and `(M, FM)`.
pub fn verify_dsigma_inclusions(s: &Setting, a: &Presentation, b: &Presentation, instance: &str) -> Result<Verdict> {
    let claim = "dsigma-inclusions";
    let sigma = sigma_for_p(&s.ring, a, b)?;
    let tf = sigma.d_sigma(s.t_universe());
    let af = a.d_sigma(s.r_universe.clone());
    let bf = b.d_sigma(s.s_universe.clone());
    let mut certs = Vec::new();
    let mut failures = 0usize;
    let mut check = |premises: Vec<Certificate>, obj: CommaObject| -> Result<()> {
        let t = obj.to_t_module();
        if !tf.contains(&t, &s.limits)? {
            failures += 1;
            certs.extend(premises);
            certs.push(member_cert(claim, &tf, &t, false));
        }
        Ok(())
    };
    for m in &s.r_universe {
        if !af.contains(m, &s.limits)? {
            continue;
        }
        check(
            vec![member_cert(claim, &af, m, true)],
            CommaObject::upper(s.ring.clone(), m.clone()),
        )?;
        let fm = induced(s, m)?;
        if bf.contains(&fm, &s.limits)? {
            let obj = functor_p(&s.ring, m, &s.ring.zero_s())?;
            check(
                vec![member_cert(claim, &af, m, true), member_cert(claim, &bf, &fm, true)],
                obj,
            )?;
        }
    }
    for n in &s.s_universe {
        if bf.contains(n, &s.limits)? {
            check(
                vec![member_cert(claim, &bf, n, true)],
                CommaObject::lower(s.ring.clone(), n.clone()),
            )?;
        }
    }
    let detail = format!("{instance}: {failures} inclusion failure(s)");
    Ok(Verdict::new(claim, Outcome::from_bool(failures == 0), detail, certs))
}

/// `D_σ` is a torsion class over `T` iff `D_σA` and `D_σB` are.
pub fn verify_dsigma_torsion_class(s: &Setting, a: &Presentation, b: &Presentation, instance: &str) -> Result<Verdict> {
    let sigma = sigma_for_p(&s.ring, a, b)?;
    let tu = s.t_universe();
    let lhs = is_torsion_class(&sigma.d_sigma(tu.clone()), &tu, &s.limits)?;
    let ra = is_torsion_class(&a.d_sigma(s.r_universe.clone()), &s.r_universe, &s.limits)?;
    let rb = is_torsion_class(&b.d_sigma(s.s_universe.clone()), &s.s_universe, &s.limits)?;
    Ok(equivalence(
        "dsigma-torsion-class-componentwise",
        instance,
        lhs,
        conjunction("both components", vec![ra, rb]),
    ))
}

/// `p(A, B)` partial silting w.r.t. `p(σA, σB)` iff `A`, `B` are and `FA ∈ D_σB`.
pub fn verify_partial_silting_transfer(
    s: &Setting,
    a: &Presentation,
    b: &Presentation,
    instance: &str,
) -> Result<Verdict> {
    let (m, sigma) = p_object(s, a, b)?;
    let lhs = is_partial_silting(&m, &sigma, &s.t_universe(), &s.limits)?;
    let fa = induced(s, a.target())?;
    let rhs = conjunction(
        "components",
        vec![
            is_partial_silting(a.target(), a, &s.r_universe, &s.limits)?,
            is_partial_silting(b.target(), b, &s.s_universe, &s.limits)?,
            membership_verdict("induced-in-dsigma", &b.d_sigma(s.s_universe.clone()), &fa, &s.limits)?,
        ],
    );
    Ok(equivalence("partial-silting-transfer", instance, lhs, rhs))
}

/// `p(A, B)` silting w.r.t. `p(σA, σB)` iff `A`, `B` are and `FA ∈ Gen B`.
pub fn verify_silting_transfer(s: &Setting, a: &Presentation, b: &Presentation, instance: &str) -> Result<Verdict> {
    let (m, sigma) = p_object(s, a, b)?;
    let lhs = is_silting(&m, &sigma, &s.t_universe(), &s.limits)?;
    let fa = induced(s, a.target())?;
    let gen_b = ModuleFamily::gen(b.target().clone(), s.s_universe.clone()).with_label("Gen B");
    let rhs = conjunction(
        "components",
        vec![
            is_silting(a.target(), a, &s.r_universe, &s.limits)?,
            is_silting(b.target(), b, &s.s_universe, &s.limits)?,
            membership_verdict("induced-in-gen", &gen_b, &fa, &s.limits)?,
        ],
    );
    Ok(equivalence("silting-transfer", instance, lhs, rhs))
}

/// `p(A, S)` against `A`, and `(0, B)` against `B`, for silting and partial
/// silting alike. `S` is presented by `0 → S` and the zero `R`-module by
/// `R → 0`, the presentations for which each is silting.
pub fn verify_silting_sum_corollary(s: &Setting) -> Result<Verdict> {
    let claim = "silting-sum-corollary";
    let s_reg = Presentation::of_projective(&regular_module(s.ring.s(), Side::Left));
    let r_zero = Presentation::killing(&regular_module(s.ring.r(), Side::Left));
    let tu = s.t_universe();
    let mut parts = Vec::new();
    for (name, a) in &s.r_presentations {
        let (m, sigma) = p_object(s, a, &s_reg)?;
        parts.push(equivalence(
            claim,
            &format!("silting, A = {name}, B = S"),
            is_silting(&m, &sigma, &tu, &s.limits)?,
            is_silting(a.target(), a, &s.r_universe, &s.limits)?,
        ));
        parts.push(equivalence(
            claim,
            &format!("partial silting, A = {name}, B = S"),
            is_partial_silting(&m, &sigma, &tu, &s.limits)?,
            is_partial_silting(a.target(), a, &s.r_universe, &s.limits)?,
        ));
    }
    for (name, b) in &s.s_presentations {
        let (m, sigma) = p_object(s, &r_zero, b)?;
        parts.push(equivalence(
            claim,
            &format!("silting, A = 0, B = {name}"),
            is_silting(&m, &sigma, &tu, &s.limits)?,
            is_silting(b.target(), b, &s.s_universe, &s.limits)?,
        ));
        parts.push(equivalence(
            claim,
            &format!("partial silting, A = 0, B = {name}"),
            is_partial_silting(&m, &sigma, &tu, &s.limits)?,
            is_partial_silting(b.target(), b, &s.s_universe, &s.limits)?,
        ));
    }
    Ok(Verdict::aggregate(claim, format!("{} instances", parts.len()), parts))
}

// ---- Hom and tensor formulas ----

/// One Hom formula against `hom_comma` and against Hom of the `T`-modules,
/// on every pair of the comma universe where it applies.
pub fn verify_hom_formula(s: &Setting, kind: HomKind) -> Result<Verdict> {
    let claim = match kind {
        HomKind::TargetUpper => "hom-into-upper",
        HomKind::SourceLower => "hom-from-lower",
        HomKind::SourceInduced => "hom-from-induced",
        HomKind::TargetCoinduced => "hom-into-coinduced",
        HomKind::SourceRegular => "hom-from-regular-is-kernel",
    };
    let t = s.t_universe();
    let mut certs = Vec::new();
    let mut applicable = 0usize;
    let mut bad = Vec::new();
    for (i, x) in s.comma_universe.iter().enumerate() {
        for (j, y) in s.comma_universe.iter().enumerate() {
            if !kind.applies(x, y, &s.limits)? {
                continue;
            }
            applicable += 1;
            let predicted = hom_formula(kind, x, y, &s.limits)?;
            let comma = hom_comma_dim(x, y)?;
            let direct = hom_dim(&t[i], &t[j])?;
            if predicted != comma || comma != direct {
                bad.push(format!("({}, {})", s.t_names[i], s.t_names[j]));
                certs.push(Certificate::new(
                    claim,
                    Fact::HomDim {
                        source: t[i].clone(),
                        target: t[j].clone(),
                        dim: direct,
                    },
                ));
            }
        }
    }
    let detail = if bad.is_empty() {
        format!("{} agrees on {applicable} applicable pairs", kind.name())
    } else {
        format!("{} disagrees on {}", kind.name(), bad.join(", "))
    };
    Ok(Verdict::new(claim, Outcome::from_bool(bad.is_empty()), detail, certs))
}

/// The shapes for which the tensor product over `T` reduces to one side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorShape {
    /// `(X, 0) ⊗ (C, D) ≅ X ⊗_R C`
    RightLowerZero,
    /// `(X, Y) ⊗ (0, D) ≅ Y ⊗_S D`
    LeftUpperZero,
    /// `(X, Y) ⊗ (C, U ⊗ C) ≅ X ⊗_R C`
    Induced,
    /// `(Y ⊗ U, Y) ⊗ (C, D) ≅ Y ⊗_S D`
    InducedRight,
    /// `(0, Y) ⊗ (C, D) ≅ Y ⊗_S (D / Im φ)`
    Cokernel,
}

impl TensorShape {
    pub const ALL: [TensorShape; 5] = [
        TensorShape::RightLowerZero,
        TensorShape::LeftUpperZero,
        TensorShape::Induced,
        TensorShape::InducedRight,
        TensorShape::Cokernel,
    ];

    pub fn claim(self) -> &'static str {
        match self {
            TensorShape::RightLowerZero => "tensor-right-lower-zero",
            TensorShape::LeftUpperZero => "tensor-left-upper-zero",
            TensorShape::Induced => "tensor-with-induced",
            TensorShape::InducedRight => "tensor-with-induced-right",
            TensorShape::Cokernel => "tensor-with-cokernel",
        }
    }

    pub fn applies(self, r: &RightTModule, c: &CommaObject) -> Result<bool> {
        Ok(match self {
            TensorShape::RightLowerZero => r.y().is_zero(),
            TensorShape::LeftUpperZero => c.a().is_zero(),
            TensorShape::Induced => c.phi_bar()?.1.is_isomorphism(),
            TensorShape::InducedRight => r.psi_bar()?.1.is_isomorphism(),
            TensorShape::Cokernel => r.x().is_zero(),
        })
    }

    /// The one-sided tensor the shape predicts, as the pair it is taken of.
    pub fn prediction(self, r: &RightTModule, c: &CommaObject) -> Result<(ModuleRep, ModuleRep)> {
        Ok(match self {
            TensorShape::RightLowerZero | TensorShape::Induced => (r.x().clone(), c.a().clone()),
            TensorShape::LeftUpperZero | TensorShape::InducedRight => (r.y().clone(), c.b().clone()),
            TensorShape::Cokernel => (r.y().clone(), c.phi_cokernel()?.module),
        })
    }
}

/// `tensor_t` against the predicted one-sided tensor and against the
/// balanced tensor of the `T`-modules.
pub fn verify_tensor_shape(s: &Setting, shape: TensorShape) -> Result<Verdict> {
    let claim = shape.claim();
    let mut certs = Vec::new();
    let mut applicable = 0usize;
    let mut bad = 0usize;
    for (i, r) in s.right_universe.iter().enumerate() {
        let rt = r.to_t_module();
        for (j, c) in s.comma_universe.iter().enumerate() {
            if !shape.applies(r, c)? {
                continue;
            }
            applicable += 1;
            let got = tensor_t(r, c)?.dim;
            let (l, rr) = shape.prediction(r, c)?;
            let predicted = tensor_over_algebra(&l, &rr)?.dim;
            let ct = c.to_t_module();
            let direct = tensor_over_algebra(&rt, &ct)?.dim;
            if got != predicted || got != direct {
                bad += 1;
                certs.push(Certificate::new(
                    &format!("right {i}, left {}", s.t_names[j]),
                    Fact::TensorDim {
                        right: l,
                        left: rr,
                        dim: predicted,
                    },
                ));
                certs.push(Certificate::new(
                    &format!("right {i}, left {}", s.t_names[j]),
                    Fact::TensorDim {
                        right: rt.clone(),
                        left: ct,
                        dim: direct,
                    },
                ));
            }
        }
    }
    let detail = format!("{bad} disagreement(s) among {applicable} applicable pairs");
    Ok(Verdict::new(claim, Outcome::from_bool(bad == 0), detail, certs))
}

/// `Hom(p(A, B), M) = Hom_R(A, M_A) ⊕ Hom_S(B, M_B)` and
/// `Hom(M, h(A, B)) = Hom_R(M_A, A) ⊕ Hom_S(M_B, B)` in dimension.
pub fn verify_adjunctions(s: &Setting) -> Result<Verdict> {
    let claim = "adjunction-dimensions";
    let mut certs = Vec::new();
    let mut checked = 0usize;
    for a in &s.r_universe {
        for b in &s.s_universe {
            let p = functor_p(&s.ring, a, b)?;
            let h = functor_h(&s.ring, a, b)?;
            let (pt, ht) = (p.to_t_module(), h.to_t_module());
            for m in &s.comma_universe {
                checked += 1;
                let mt = m.to_t_module();
                let left = hom_comma_dim(&p, m)?;
                if left != hom_dim(a, m.a())? + hom_dim(b, m.b())? {
                    certs.push(Certificate::new(
                        "p left adjoint to q",
                        Fact::HomDim {
                            source: pt.clone(),
                            target: mt.clone(),
                            dim: left,
                        },
                    ));
                }
                let right = hom_comma_dim(m, &h)?;
                if right != hom_dim(m.a(), a)? + hom_dim(m.b(), b)? {
                    certs.push(Certificate::new(
                        "q left adjoint to h",
                        Fact::HomDim {
                            source: mt,
                            target: ht.clone(),
                            dim: right,
                        },
                    ));
                }
            }
        }
    }
    let detail = format!("{} failure(s) among {checked} triples", certs.len());
    Ok(Verdict::new(claim, Outcome::from_bool(certs.is_empty()), detail, certs))
}

/// `from_t_module ∘ to_t_module` returns an isomorphic object with a
/// witness isomorphism.
pub fn verify_round_trip(s: &Setting) -> Result<Verdict> {
    let claim = "t-module-round-trip";
    let mut certs = Vec::new();
    for c in &s.comma_universe {
        let t = c.to_t_module();
        let (back, w) = CommaObject::from_t_module(s.ring.clone(), &t)?;
        let ok = w.is_intertwiner()
            && w.is_isomorphism()
            && isomorphic(back.a(), c.a(), &s.limits)?
            && isomorphic(back.b(), c.b(), &s.limits)?;
        if !ok {
            certs.push(Certificate::new(
                claim,
                Fact::Isomorphic {
                    a: t.clone(),
                    b: back.to_t_module(),
                    iso: w,
                },
            ));
        }
    }
    let detail = format!("{} failure(s) among {} objects", certs.len(), s.comma_universe.len());
    Ok(Verdict::new(claim, Outcome::from_bool(certs.is_empty()), detail, certs))
}

// ---- perpendicular families and torsion pairs ----

/// `{0}`, all, `Gen M` and `(Gen M)^⊥` for nonzero `M`, deduplicated by
/// membership on the universe.
pub fn side_families(universe: &[ModuleRep], names: &[String], limits: &Limits) -> Result<Vec<ModuleFamily>> {
    let mut out: Vec<(Vec<bool>, ModuleFamily)> = Vec::new();
    let mut push = |f: ModuleFamily| -> Result<()> {
        let bits = f.bitmap(limits)?;
        if !out.iter().any(|(b, _)| *b == bits) {
            out.push((bits, f));
        }
        Ok(())
    };
    push(ModuleFamily::zero(universe.to_vec()))?;
    push(ModuleFamily::all(universe.to_vec()))?;
    for (m, name) in universe.iter().zip(names) {
        if m.is_zero() {
            continue;
        }
        let g = ModuleFamily::gen(m.clone(), universe.to_vec()).with_label(format!("Gen {name}"));
        push(perp_right(&g, universe).with_label(format!("(Gen {name})^perp")))?;
        push(g)?;
    }
    Ok(out.into_iter().map(|(_, f)| f).collect())
}

/// `({0}, all)`, `(all, {0})` and `(Gen M, (Gen M)^⊥)`, deduplicated.
pub fn torsion_candidates(
    universe: &[ModuleRep],
    names: &[String],
    limits: &Limits,
) -> Result<Vec<(ModuleFamily, ModuleFamily)>> {
    let mut out: Vec<(Vec<bool>, Vec<bool>, ModuleFamily, ModuleFamily)> = Vec::new();
    let mut push = |x: ModuleFamily, y: ModuleFamily| -> Result<()> {
        let (bx, by) = (x.bitmap(limits)?, y.bitmap(limits)?);
        if !out.iter().any(|(a, b, _, _)| *a == bx && *b == by) {
            out.push((bx, by, x, y));
        }
        Ok(())
    };
    push(
        ModuleFamily::zero(universe.to_vec()),
        ModuleFamily::all(universe.to_vec()),
    )?;
    push(
        ModuleFamily::all(universe.to_vec()),
        ModuleFamily::zero(universe.to_vec()),
    )?;
    for (m, name) in universe.iter().zip(names) {
        if m.is_zero() {
            continue;
        }
        let g = ModuleFamily::gen(m.clone(), universe.to_vec()).with_label(format!("Gen {name}"));
        let y = perp_right(&g, universe).with_label(format!("(Gen {name})^perp"));
        push(g, y)?;
    }
    Ok(out.into_iter().map(|(_, _, x, y)| (x, y)).collect())
}

fn comma_family(s: &Setting, kind: CommaKind, c: &ModuleFamily, d: &ModuleFamily) -> ModuleFamily {
    ModuleFamily::comma(s.ring.clone(), kind, c, d, s.t_universe())
}

/// Compares two families on the `T`-universe in one direction:
/// `sub ⊆ sup`. Certificates name every counterexample.
fn inclusion(claim: &str, s: &Setting, sub: &ModuleFamily, sup: &ModuleFamily) -> Result<Verdict> {
    let mut certs = Vec::new();
    let mut bad = Vec::new();
    for (i, t) in s.t_universe().iter().enumerate() {
        if sub.contains(t, &s.limits)? && !sup.contains(t, &s.limits)? {
            bad.push(s.t_names[i].clone());
            certs.push(member_cert(claim, sub, t, true));
            certs.push(member_cert(claim, sup, t, false));
        }
    }
    let detail = if bad.is_empty() {
        format!("{} is contained in {}", sub.label(), sup.label())
    } else {
        format!("{} not contained in {}: {}", sub.label(), sup.label(), bad.join(", "))
    };
    Ok(Verdict::new(claim, Outcome::from_bool(bad.is_empty()), detail, certs))
}

/// `(𝔅^C_D)^⊥ = 𝔘^{C^⊥}_{D^⊥}`.
pub fn verify_mono_right_perp(s: &Setting, c: &ModuleFamily, d: &ModuleFamily) -> Result<Verdict> {
    let claim = "mono-family-right-perp";
    let tu = s.t_universe();
    let lhs = perp_right(&comma_family(s, CommaKind::Mono, c, d), &tu);
    let rhs = comma_family(
        s,
        CommaKind::Components,
        &perp_right(c, &s.r_universe),
        &perp_right(d, &s.s_universe),
    );
    let parts = vec![inclusion(claim, s, &lhs, &rhs)?, inclusion(claim, s, &rhs, &lhs)?];
    Ok(Verdict::aggregate(
        claim,
        format!("C = {}, D = {}", c.label(), d.label()),
        parts,
    ))
}

/// `𝔅^{⊥C}_{⊥D} ⊆ ⊥𝔘^C_D`, and the reverse inclusion when `S⁺ ∈ D`.
pub fn verify_mono_left_perp(s: &Setting, c: &ModuleFamily, d: &ModuleFamily) -> Result<Verdict> {
    let claim = "mono-family-left-perp";
    let tu = s.t_universe();
    let b = comma_family(
        s,
        CommaKind::Mono,
        &perp_left(c, &s.r_universe),
        &perp_left(d, &s.s_universe),
    );
    let u = perp_left(&comma_family(s, CommaKind::Components, c, d), &tu);
    let forward = inclusion(claim, s, &b, &u)?;
    let hyp = d.contains(&s.ring.s_dual(), &s.limits)?;
    let converse = if hyp {
        inclusion(claim, s, &u, &b)?
    } else {
        out_of_scope(claim, String::from("converse needs the dual of S in D"), Vec::new())
    };
    Ok(Verdict::aggregate(
        claim,
        format!("C = {}, D = {}", c.label(), d.label()),
        vec![forward, converse],
    ))
}

/// `⊥𝔍^C_D = 𝔘^{⊥C}_{⊥D}`.
pub fn verify_epi_left_perp(s: &Setting, c: &ModuleFamily, d: &ModuleFamily) -> Result<Verdict> {
    let claim = "epi-family-left-perp";
    let tu = s.t_universe();
    let lhs = perp_left(&comma_family(s, CommaKind::Epi, c, d), &tu);
    let rhs = comma_family(
        s,
        CommaKind::Components,
        &perp_left(c, &s.r_universe),
        &perp_left(d, &s.s_universe),
    );
    let parts = vec![inclusion(claim, s, &lhs, &rhs)?, inclusion(claim, s, &rhs, &lhs)?];
    Ok(Verdict::aggregate(
        claim,
        format!("C = {}, D = {}", c.label(), d.label()),
        parts,
    ))
}

/// `𝔍^{C^⊥}_{D^⊥} ⊆ (𝔘^C_D)^⊥`, and the reverse inclusion when `R ∈ C`.
pub fn verify_epi_right_perp(s: &Setting, c: &ModuleFamily, d: &ModuleFamily) -> Result<Verdict> {
    let claim = "epi-family-right-perp";
    let tu = s.t_universe();
    let j = comma_family(
        s,
        CommaKind::Epi,
        &perp_right(c, &s.r_universe),
        &perp_right(d, &s.s_universe),
    );
    let u = perp_right(&comma_family(s, CommaKind::Components, c, d), &tu);
    let forward = inclusion(claim, s, &j, &u)?;
    let hyp = c.contains(&regular_module(s.ring.r(), Side::Left), &s.limits)?;
    let converse = if hyp {
        inclusion(claim, s, &u, &j)?
    } else {
        out_of_scope(claim, String::from("converse needs R in C"), Vec::new())
    };
    Ok(Verdict::aggregate(
        claim,
        format!("C = {}, D = {}", c.label(), d.label()),
        vec![forward, converse],
    ))
}

/// With `S⁺ ∈ d2`: `(c1, c2)` and `(d1, d2)` are torsion pairs iff
/// `(𝔅^{c1}_{d1}, 𝔘^{c2}_{d2})` is.
pub fn verify_torsion_transfer_mono(
    s: &Setting,
    c: (&ModuleFamily, &ModuleFamily),
    d: (&ModuleFamily, &ModuleFamily),
) -> Result<Verdict> {
    let claim = "torsion-transfer-mono";
    let instance = format!(
        "({}, {}) and ({}, {})",
        c.0.label(),
        c.1.label(),
        d.0.label(),
        d.1.label()
    );
    if !d.1.contains(&s.ring.s_dual(), &s.limits)? {
        return Ok(out_of_scope(
            claim,
            format!("{instance}: the dual of S is not in the second S-family"),
            Vec::new(),
        ));
    }
    let rhs = conjunction(
        "component torsion pairs",
        vec![
            is_torsion_pair(c.0, c.1, &s.r_universe, &s.limits)?,
            is_torsion_pair(d.0, d.1, &s.s_universe, &s.limits)?,
        ],
    );
    let x = comma_family(s, CommaKind::Mono, c.0, d.0);
    let y = comma_family(s, CommaKind::Components, c.1, d.1);
    let lhs = is_torsion_pair(&x, &y, &s.t_universe(), &s.limits)?;
    Ok(equivalence(claim, &instance, lhs, rhs))
}

/// With `R ∈ c1`: `(c1, c2)` and `(d1, d2)` are torsion pairs iff
/// `(𝔘^{c1}_{d1}, 𝔍^{c2}_{d2})` is.
pub fn verify_torsion_transfer_epi(
    s: &Setting,
    c: (&ModuleFamily, &ModuleFamily),
    d: (&ModuleFamily, &ModuleFamily),
) -> Result<Verdict> {
    let claim = "torsion-transfer-epi";
    let instance = format!(
        "({}, {}) and ({}, {})",
        c.0.label(),
        c.1.label(),
        d.0.label(),
        d.1.label()
    );
    if !c.0.contains(&regular_module(s.ring.r(), Side::Left), &s.limits)? {
        return Ok(out_of_scope(
            claim,
            format!("{instance}: R is not in the first R-family"),
            Vec::new(),
        ));
    }
    let rhs = conjunction(
        "component torsion pairs",
        vec![
            is_torsion_pair(c.0, c.1, &s.r_universe, &s.limits)?,
            is_torsion_pair(d.0, d.1, &s.s_universe, &s.limits)?,
        ],
    );
    let x = comma_family(s, CommaKind::Components, c.0, d.0);
    let y = comma_family(s, CommaKind::Epi, c.1, d.1);
    let lhs = is_torsion_pair(&x, &y, &s.t_universe(), &s.limits)?;
    Ok(equivalence(claim, &instance, lhs, rhs))
}

/// For `p(A, B)` partial silting: the torsion pairs built from
/// `(Gen A, A^⊥)` and `(Gen B, B^⊥)` under the mono and epi hypotheses.
pub fn verify_torsion_corollaries(
    s: &Setting,
    a: &Presentation,
    b: &Presentation,
    instance: &str,
) -> Result<Vec<Verdict>> {
    let (m, sigma) = p_object(s, a, b)?;
    let premise = is_partial_silting(&m, &sigma, &s.t_universe(), &s.limits)?;
    let gen_a = ModuleFamily::gen(a.target().clone(), s.r_universe.clone()).with_label("Gen A");
    let gen_b = ModuleFamily::gen(b.target().clone(), s.s_universe.clone()).with_label("Gen B");
    let perp_a = perp_right(&gen_a, &s.r_universe).with_label("A^perp");
    let perp_b = perp_right(&gen_b, &s.s_universe).with_label("B^perp");
    let tu = s.t_universe();
    let mut out = Vec::new();
    for (claim, kind_x, kind_y, hyp) in [
        (
            "torsion-corollary-mono",
            CommaKind::Mono,
            CommaKind::Components,
            perp_b.contains(&s.ring.s_dual(), &s.limits)?,
        ),
        (
            "torsion-corollary-epi",
            CommaKind::Components,
            CommaKind::Epi,
            gen_a.contains(&regular_module(s.ring.r(), Side::Left), &s.limits)?,
        ),
    ] {
        if !premise.holds() {
            out.push(out_of_scope(
                claim,
                format!("{instance}: p(A, B) is not partial silting"),
                vec![premise.clone()],
            ));
            continue;
        }
        if !hyp {
            out.push(out_of_scope(
                claim,
                format!("{instance}: side hypothesis fails"),
                Vec::new(),
            ));
            continue;
        }
        let x = comma_family(s, kind_x, &gen_a, &gen_b);
        let y = comma_family(s, kind_y, &perp_a, &perp_b);
        let v = is_torsion_pair(&x, &y, &tu, &s.limits)?;
        let detail = format!("{instance}: {}", v.detail);
        out.push(Verdict::new(claim, v.outcome, detail, Vec::new()).with_sub(vec![premise.clone(), v]));
    }
    Ok(out)
}

/// Every claim, one aggregated verdict each, in a fixed order.
pub fn verify_all(s: &Setting) -> Result<Verdict> {
    let mut claims = Vec::new();
    let pairs: Vec<(String, &Presentation, &Presentation)> = s
        .r_presentations
        .iter()
        .flat_map(|(na, a)| {
            s.s_presentations
                .iter()
                .map(move |(nb, b)| (format!("A = {na}, B = {nb}"), a, b))
        })
        .collect();

    type PairCheck = fn(&Setting, &Presentation, &Presentation, &str) -> Result<Verdict>;
    let per_pair: [(&str, PairCheck); 5] = [
        ("dsigma-componentwise", verify_dsigma_componentwise),
        ("dsigma-inclusions", verify_dsigma_inclusions),
        ("dsigma-torsion-class-componentwise", verify_dsigma_torsion_class),
        ("partial-silting-transfer", verify_partial_silting_transfer),
        ("silting-transfer", verify_silting_transfer),
    ];
    for (claim, check) in per_pair {
        let parts = pairs
            .iter()
            .map(|(n, a, b)| check(s, a, b, n))
            .collect::<Result<Vec<_>>>()?;
        claims.push(Verdict::aggregate(
            claim,
            format!("{} presentation pairs", parts.len()),
            parts,
        ));
    }
    claims.push(verify_silting_sum_corollary(s)?);

    for kind in HomKind::ALL {
        claims.push(verify_hom_formula(s, kind)?);
    }
    for shape in TensorShape::ALL {
        claims.push(verify_tensor_shape(s, shape)?);
    }
    claims.push(verify_adjunctions(s)?);
    claims.push(verify_round_trip(s)?);

    let r_fams = side_families(&s.r_universe, &s.r_names, &s.limits)?;
    let s_fams = side_families(&s.s_universe, &s.s_names, &s.limits)?;
    type PerpCheck = fn(&Setting, &ModuleFamily, &ModuleFamily) -> Result<Verdict>;
    let perps: [(&str, PerpCheck); 4] = [
        ("mono-family-right-perp", verify_mono_right_perp),
        ("mono-family-left-perp", verify_mono_left_perp),
        ("epi-family-left-perp", verify_epi_left_perp),
        ("epi-family-right-perp", verify_epi_right_perp),
    ];
    for (claim, check) in perps {
        let mut parts = Vec::new();
        for c in &r_fams {
            for d in &s_fams {
                parts.push(check(s, c, d)?);
            }
        }
        claims.push(Verdict::aggregate(
            claim,
            format!("{} family pairs", parts.len()),
            parts,
        ));
    }

    let r_pairs = torsion_candidates(&s.r_universe, &s.r_names, &s.limits)?;
    let s_pairs = torsion_candidates(&s.s_universe, &s.s_names, &s.limits)?;
    let mut mono = Vec::new();
    let mut epi = Vec::new();
    for (c1, c2) in &r_pairs {
        for (d1, d2) in &s_pairs {
            mono.push(verify_torsion_transfer_mono(s, (c1, c2), (d1, d2))?);
            epi.push(verify_torsion_transfer_epi(s, (c1, c2), (d1, d2))?);
        }
    }
    claims.push(Verdict::aggregate(
        "torsion-transfer-mono",
        format!("{} combinations", mono.len()),
        mono,
    ));
    claims.push(Verdict::aggregate(
        "torsion-transfer-epi",
        format!("{} combinations", epi.len()),
        epi,
    ));

    let mut cor_mono = Vec::new();
    let mut cor_epi = Vec::new();
    for (n, a, b) in &pairs {
        let mut v = verify_torsion_corollaries(s, a, b, n)?.into_iter();
        cor_mono.extend(v.next());
        cor_epi.extend(v.next());
    }
    claims.push(Verdict::aggregate(
        "torsion-corollary-mono",
        format!("{} presentation pairs", cor_mono.len()),
        cor_mono,
    ));
    claims.push(Verdict::aggregate(
        "torsion-corollary-epi",
        format!("{} presentation pairs", cor_epi.len()),
        cor_epi,
    ));

    Ok(Verdict::aggregate("verify-all", format!("setting {}", s.name), claims).with_hash(&s.hash()))
}

/// `dim Hom` between every pair of the comma universe, rows are sources.
pub fn hom_table(s: &Setting) -> Result<Vec<Vec<usize>>> {
    s.comma_universe
        .iter()
        .map(|x| s.comma_universe.iter().map(|y| hom_comma_dim(x, y)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Setting {
        Setting::a2(Limits::default()).unwrap()
    }

    #[test]
    fn a2_hom_table() {
        let t = hom_table(&a2()).unwrap();
        assert_eq!(
            t,
            vec![
                vec![0, 0, 0, 0, 0],
                vec![0, 1, 0, 0, 1],
                vec![0, 0, 1, 1, 1],
                vec![0, 1, 0, 1, 1],
                vec![0, 1, 1, 1, 2],
            ]
        );
    }

    #[test]
    fn a2_candidates() {
        let s = a2();
        assert_eq!(
            torsion_candidates(&s.r_universe, &s.r_names, &s.limits).unwrap().len(),
            2
        );
        assert_eq!(side_families(&s.s_universe, &s.s_names, &s.limits).unwrap().len(), 2);
    }

    #[test]
    fn silting_transfer_on_a2() {
        let s = a2();
        let (k, zero) = (&s.r_presentations[0].1, &s.s_presentations[1].1);
        let v = verify_silting_transfer(&s, k, &s.s_presentations[0].1, "k, k").unwrap();
        assert!(v.holds());
        assert!(v.sub[0].holds() && v.sub[1].holds());
        let v = verify_silting_transfer(&s, k, zero, "k, 0").unwrap();
        assert!(v.holds());
        assert!(!v.sub[0].holds() && !v.sub[1].holds());
        assert!(v.replay(&s.limits).unwrap());
    }

    #[test]
    fn decisive_mono_instance_fails() {
        let s = a2();
        let u = s.r_universe.clone();
        let (all_r, zero_r) = (ModuleFamily::all(u.clone()), ModuleFamily::zero(u));
        let (all_s, zero_s) = (
            ModuleFamily::all(s.s_universe.clone()),
            ModuleFamily::zero(s.s_universe.clone()),
        );
        let v = verify_torsion_transfer_mono(&s, (&all_r, &zero_r), (&zero_s, &all_s)).unwrap();
        assert_eq!(v.outcome, Outcome::Fails);
        assert!(!v.sub[0].holds() && v.sub[1].holds());
        assert!(v.replay(&s.limits).unwrap());
    }

    #[test]
    fn verify_all_on_a2_replays() {
        let s = a2();
        let v = verify_all(&s).unwrap();
        assert_eq!(v.sub.len(), 26);
        assert!(v.replay(&s.limits).unwrap());
        for claim in [
            "dsigma-componentwise",
            "silting-transfer",
            "hom-from-regular-is-kernel",
            "adjunction-dimensions",
        ] {
            assert!(v.find(claim).unwrap().holds(), "{claim}");
        }
        assert_eq!(v.find("torsion-transfer-mono").unwrap().outcome, Outcome::Fails);
    }
}
