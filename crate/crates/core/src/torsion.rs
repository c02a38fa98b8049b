//! Torsion pairs and torsion classes decided on a finite universe.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Result;
use crate::family::ModuleFamily;
use crate::module::{
    all_submodules, direct_sum2, extension_middle_terms, hom_space, quotient_module, trace_of, ModuleRep,
};
use crate::verdict::{universe_hash, Certificate, Fact, Outcome, Verdict};
use crate::Limits;

/// `F^⊥` with `F` restricted to the given universe.
pub fn perp_right(f: &ModuleFamily, universe: &[ModuleRep]) -> ModuleFamily {
    ModuleFamily::perp_right(&f.clone().with_universe(universe.to_vec()))
}

/// `⊥F` with `F` restricted to the given universe.
pub fn perp_left(f: &ModuleFamily, universe: &[ModuleRep]) -> ModuleFamily {
    ModuleFamily::perp_left(&f.clone().with_universe(universe.to_vec()))
}

fn member(clause: &str, family: &ModuleFamily, module: &ModuleRep, is_member: bool) -> Certificate {
    Certificate::new(
        clause,
        Fact::Member {
            family: family.clone(),
            module: module.clone(),
            member: is_member,
        },
    )
}

fn members_of(f: &ModuleFamily, universe: &[ModuleRep], limits: &Limits) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, u) in universe.iter().enumerate() {
        if f.contains(u, limits)? {
            out.push(i);
        }
    }
    Ok(out)
}

/// Checks, in order: `Hom(x, y) = 0` on members; for every `M` the trace `t`
/// of the `x`-members satisfies `t ∈ x` and `M/t ∈ y`; `x^⊥ = y` and
/// `⊥y = x` on the universe. Certificates name the first failure only.
pub fn is_torsion_pair(x: &ModuleFamily, y: &ModuleFamily, universe: &[ModuleRep], limits: &Limits) -> Result<Verdict> {
    let claim = "torsion-pair";
    let hash = universe_hash(universe);
    let fail = |detail: String, certs: Vec<Certificate>| {
        Ok(Verdict::new(claim, Outcome::Fails, detail, certs).with_hash(&hash))
    };
    let xs = members_of(x, universe, limits)?;
    let ys = members_of(y, universe, limits)?;

    for &i in &xs {
        for &j in &ys {
            if let Some(f) = hom_space(&universe[i], &universe[j])?.into_iter().next() {
                return fail(
                    format!("nonzero map from universe member {i} to universe member {j}"),
                    alloc::vec![
                        member("hom vanishing", x, &universe[i], true),
                        member("hom vanishing", y, &universe[j], true),
                        Certificate::new("hom vanishing", Fact::NonzeroMap { map: f }),
                    ],
                );
            }
        }
    }

    let gens: Vec<ModuleRep> = xs.iter().map(|&i| universe[i].clone()).collect();
    for (i, m) in universe.iter().enumerate() {
        let t = trace_of(&gens, m)?;
        if !x.contains(&t.module, limits)? {
            return fail(
                format!("trace in universe member {i} is not torsion"),
                alloc::vec![member("torsion sequence", x, &t.module, false)],
            );
        }
        let q = quotient_module(m, t.inclusion.matrix())?;
        if !y.contains(&q.module, limits)? {
            return fail(
                format!("quotient of universe member {i} by its trace is not torsion-free"),
                alloc::vec![member("torsion sequence", y, &q.module, false)],
            );
        }
    }

    let xr = perp_right(x, universe);
    let yl = perp_left(y, universe);
    for (i, u) in universe.iter().enumerate() {
        let in_y = ys.contains(&i);
        if xr.contains(u, limits)? != in_y {
            return fail(
                format!("right perpendicular and second family differ at universe member {i}"),
                alloc::vec![
                    member("right perpendicular", &xr, u, !in_y),
                    member("right perpendicular", y, u, in_y)
                ],
            );
        }
        let in_x = xs.contains(&i);
        if yl.contains(u, limits)? != in_x {
            return fail(
                format!("left perpendicular and first family differ at universe member {i}"),
                alloc::vec![
                    member("left perpendicular", &yl, u, !in_x),
                    member("left perpendicular", x, u, in_x)
                ],
            );
        }
    }

    Ok(Verdict::new(
        claim,
        Outcome::Holds,
        format!(
            "{} torsion and {} torsion-free members; every member splits",
            xs.len(),
            ys.len()
        ),
        Vec::new(),
    )
    .with_hash(&hash))
}

/// Closure of the members under quotients, pairwise sums and extensions,
/// with sums and extensions bounded by `limits.max_dim`. A truncated
/// extension enumeration that found no failure is reported out of scope.
pub fn is_torsion_class(f: &ModuleFamily, universe: &[ModuleRep], limits: &Limits) -> Result<Verdict> {
    let claim = "torsion-class";
    let hash = universe_hash(universe);
    let fail = |detail: String, certs: Vec<Certificate>| {
        Ok(Verdict::new(claim, Outcome::Fails, detail, certs).with_hash(&hash))
    };
    let members: Vec<&ModuleRep> = members_of(f, universe, limits)?
        .into_iter()
        .map(|i| &universe[i])
        .filter(|m| !m.is_zero())
        .collect();

    for m in &members {
        for sub in all_submodules(m, limits)? {
            let q = quotient_module(m, &sub)?;
            if !f.contains(&q.module, limits)? {
                return fail(
                    String::from("a quotient of a member leaves the family"),
                    alloc::vec![
                        member("images", f, m, true),
                        Certificate::new(
                            "images",
                            Fact::NonzeroMap {
                                map: q.projection.clone()
                            }
                        ),
                        member("images", f, &q.module, false),
                    ],
                );
            }
        }
    }

    for (i, a) in members.iter().enumerate() {
        for b in &members[i..] {
            if a.dim() + b.dim() > limits.max_dim {
                continue;
            }
            let s = direct_sum2(a, b)?;
            if !f.contains(&s, limits)? {
                return fail(
                    String::from("a direct sum of members leaves the family"),
                    alloc::vec![
                        member("direct sums", f, a, true),
                        member("direct sums", f, b, true),
                        member("direct sums", f, &s, false),
                    ],
                );
            }
        }
    }

    let mut truncated = false;
    for a in &members {
        for b in &members {
            if a.dim() + b.dim() > limits.max_dim {
                continue;
            }
            let ext = extension_middle_terms(a, b, limits)?;
            truncated |= ext.truncated;
            for e in &ext.middles {
                if !f.contains(e, limits)? {
                    return fail(
                        String::from("an extension of members leaves the family"),
                        alloc::vec![
                            member("extensions", f, a, true),
                            member("extensions", f, b, true),
                            member("extensions", f, e, false),
                        ],
                    );
                }
            }
        }
    }

    let (outcome, detail) = if truncated {
        (
            Outcome::OutOfScope,
            format!(
                "no failure among {} members, but extension enumeration was truncated",
                members.len()
            ),
        )
    } else {
        (
            Outcome::Holds,
            format!(
                "{} nonzero members closed under quotients, sums and extensions",
                members.len()
            ),
        )
    };
    Ok(Verdict::new(claim, outcome, detail, Vec::new()).with_hash(&hash))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::A2;
    use alloc::vec;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn trivial_pairs() {
        let u = A2::new().t_universe();
        let all = ModuleFamily::all(u.clone());
        let zero = ModuleFamily::zero(u.clone());
        assert!(is_torsion_pair(&zero, &all, &u, &limits()).unwrap().holds());
        assert!(is_torsion_pair(&all, &zero, &u, &limits()).unwrap().holds());
        assert!(!is_torsion_pair(&all, &all, &u, &limits()).unwrap().holds());
    }

    #[test]
    fn a2_split_pair() {
        let a2 = A2::new();
        let t = a2.t_modules();
        let u = a2.t_universe();
        let x = ModuleFamily::gen(t.s_r.clone(), u.clone());
        let y = ModuleFamily::explicit("S_S", vec![t.zero.clone(), t.s_s.clone()], u.clone());
        // Gen S_R is only {0, S_R}; P has S_R on top but is not generated by it.
        assert_eq!(x.bitmap(&limits()).unwrap(), [true, true, false, false, false]);
        let v = is_torsion_pair(&x, &y, &u, &limits()).unwrap();
        assert_eq!(v.outcome, Outcome::Fails);
        assert!(v.replay(&limits()).unwrap());

        let x = ModuleFamily::explicit("P, S_R", vec![t.zero.clone(), t.p.clone(), t.s_r.clone()], u.clone());
        assert!(is_torsion_pair(&x, &y, &u, &limits()).unwrap().holds());

        let x = ModuleFamily::explicit(
            "P, S_R, N",
            vec![t.zero.clone(), t.p.clone(), t.s_r.clone(), t.n.clone()],
            u.clone(),
        );
        let v = is_torsion_pair(&x, &y, &u, &limits()).unwrap();
        assert!(v.detail.starts_with("nonzero map"), "{}", v.detail);
    }

    #[test]
    fn gen_and_its_perp_vanish() {
        let a2 = A2::new();
        let u = a2.t_universe();
        for g in &u {
            let x = ModuleFamily::gen(g.clone(), u.clone());
            let y = perp_right(&x, &u);
            let v = is_torsion_pair(&x, &y, &u, &limits()).unwrap();
            assert!(!v.detail.starts_with("nonzero map"), "{}", v.detail);
            assert!(v.replay(&limits()).unwrap());
        }
    }

    #[test]
    fn torsion_classes_on_a2() {
        let a2 = A2::new();
        let t = a2.t_modules();
        let u = a2.t_universe();
        let l = limits();
        assert!(is_torsion_class(&ModuleFamily::all(u.clone()), &u, &l).unwrap().holds());
        // Gen S_S is the sums of S_S; there are no nonsplit self-extensions.
        let ss = ModuleFamily::gen(t.s_s.clone(), u.clone());
        assert!(is_torsion_class(&ss, &u, &l).unwrap().holds());
        let p = ModuleFamily::explicit("P", vec![t.zero.clone(), t.p.clone()], u.clone());
        let v = is_torsion_class(&p, &u, &l).unwrap();
        assert_eq!(v.outcome, Outcome::Fails);
        assert!(v.detail.contains("quotient"));
        assert!(v.replay(&l).unwrap());
    }
}
