//! Finite universes of `T`-modules built from universes over `R` and `S`.
//!
//! Pairs are visited with the `R`-side module outer and the `S`-side module
//! inner. For each pair every structure map is enumerated in coefficient
//! order and kept only if it is not isomorphic to an object already found,
//! so the output order is deterministic.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::comma::{CommaObject, RightTModule, TriangularRing};
use crate::error::Result;
use crate::module::{checked_count, combine_maps, for_each_vector, hom_space, isomorphic, ModuleRep};
use crate::tensor::{tensor_over, tensor_right};
use crate::Limits;

fn push_new(found: &mut Vec<ModuleRep>, m: ModuleRep, limits: &Limits) -> Result<bool> {
    for f in found.iter() {
        if f.dim() == m.dim() && isomorphic(f, &m, limits)? {
            return Ok(false);
        }
    }
    found.push(m);
    Ok(true)
}

/// Every comma object `(A, B, φ)` with `A`, `B` from the given universes and
/// `dim A + dim B ≤ limits.max_dim`, one per isomorphism class.
pub fn t_universe(
    ring: &Arc<TriangularRing>,
    r_universe: &[ModuleRep],
    s_universe: &[ModuleRep],
    limits: &Limits,
) -> Result<Vec<CommaObject>> {
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for a in r_universe {
        let fa = tensor_over(ring.u(), a)?;
        for b in s_universe {
            if a.dim() + b.dim() > limits.max_dim {
                continue;
            }
            let basis = hom_space(&fa.module, b)?;
            checked_count(ring.p(), basis.len(), limits.enumeration_cap, "structure maps")?;
            let mut candidates = Vec::new();
            for_each_vector(ring.p(), basis.len(), |c| {
                let bar = combine_maps(&fa.module, b, &basis, c);
                candidates.push(bar.matrix().mul(&fa.projection));
                true
            });
            for phi in candidates {
                let obj = CommaObject::new(ring.clone(), a.clone(), b.clone(), phi)?;
                if push_new(&mut seen, obj.to_t_module(), limits)? {
                    out.push(obj);
                }
            }
        }
    }
    Ok(out)
}

/// Every right `T`-module `(X, Y, ψ)` with `X`, `Y` from the given right
/// universes and `dim X + dim Y ≤ limits.max_dim`, one per isomorphism class.
pub fn right_t_universe(
    ring: &Arc<TriangularRing>,
    x_universe: &[ModuleRep],
    y_universe: &[ModuleRep],
    limits: &Limits,
) -> Result<Vec<RightTModule>> {
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for x in x_universe {
        for y in y_universe {
            if x.dim() + y.dim() > limits.max_dim {
                continue;
            }
            let yu = tensor_right(y, ring.u())?;
            let basis = hom_space(&yu.module, x)?;
            checked_count(ring.p(), basis.len(), limits.enumeration_cap, "structure maps")?;
            let mut candidates = Vec::new();
            for_each_vector(ring.p(), basis.len(), |c| {
                let bar = combine_maps(&yu.module, x, &basis, c);
                candidates.push(bar.matrix().mul(&yu.projection));
                true
            });
            for psi in candidates {
                let obj = RightTModule::new(ring.clone(), x.clone(), y.clone(), psi)?;
                if push_new(&mut seen, obj.to_t_module(), limits)? {
                    out.push(obj);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{DualNumbers, A2};
    use crate::module::hom_dim;

    #[test]
    fn a2_universe_has_the_five_objects() {
        let a2 = A2::new();
        let l = Limits::default();
        let u = t_universe(&a2.ring, &a2.r_universe(), &a2.s_universe(), &l).unwrap();
        assert_eq!(u.len(), 5);
        let dims: Vec<usize> = u.iter().map(CommaObject::dim).collect();
        assert_eq!(dims, [0, 1, 1, 2, 2]);
        let fixed = a2.t_universe();
        for obj in &u {
            let m = obj.to_t_module();
            assert_eq!(fixed.iter().filter(|f| isomorphic(f, &m, &l).unwrap()).count(), 1);
        }
    }

    #[test]
    fn right_universe_of_a2() {
        let a2 = A2::new();
        let l = Limits::default();
        let r = a2.right_r_universe();
        let s = a2.right_s_universe();
        let u = right_t_universe(&a2.ring, &r, &s, &l).unwrap();
        assert_eq!(u.len(), 5);
        for m in &u {
            assert!(m.validate().is_empty());
        }
    }

    #[test]
    fn dual_numbers_universe_is_pairwise_distinct() {
        let dn = DualNumbers::new();
        let l = Limits::default();
        let u = t_universe(&dn.ring, &dn.r_universe(), &dn.s_universe(), &l).unwrap();
        assert!(u.len() >= 10, "{}", u.len());
        for (i, x) in u.iter().enumerate() {
            assert!(x.validate().is_empty());
            for y in &u[..i] {
                assert!(!isomorphic(&x.to_t_module(), &y.to_t_module(), &l).unwrap());
            }
            assert!(hom_dim(&x.to_t_module(), &x.to_t_module()).unwrap() >= usize::from(!x.is_zero()));
        }
    }
}
