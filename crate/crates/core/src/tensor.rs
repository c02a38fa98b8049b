//! Tensor products as quotients of the plain tensor product over `F_p` by
//! balancing relations.
//!
//! For a right module `X` and a left module `A` the basis of `X ⊗_k A` is
//! `x_i ⊗ a_j` at index `i * dim A + j`.

use alloc::vec::Vec;

use crate::algebra::Bimodule;
use crate::error::{Error, Result};
use crate::linalg::{quotient_space, FpMatrix};
use crate::module::{ModuleMap, ModuleRep, Side};

/// `X ⊗_A M` as a vector space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedTensor {
    pub dim: usize,
    /// `dim × (dim X · dim M)`, kernel equal to the balancing subspace.
    pub projection: FpMatrix,
    /// `(dim X · dim M) × dim`, a right inverse of `projection`.
    pub section: FpMatrix,
    /// Columns spanning the balancing subspace.
    pub relations: FpMatrix,
}

/// Spanning set of the balancing subspace: the columns of
/// `ρ_X(e) ⊗ 1 − 1 ⊗ ρ_M(e)` for every basis element `e`.
pub fn balancing_relations(x: &ModuleRep, m: &ModuleRep) -> Result<FpMatrix> {
    if x.side() != Side::Right || m.side() != Side::Left {
        return Err(Error::SideMismatch("balanced tensor needs a right and a left module"));
    }
    if !(x.algebra() == m.algebra()) {
        return Err(Error::AlgebraMismatch("balanced tensor"));
    }
    let p = x.p();
    let (dx, dm) = (x.dim(), m.dim());
    let ix = FpMatrix::identity(p, dx);
    let im = FpMatrix::identity(p, dm);
    let mut rel = FpMatrix::zeros(p, dx * dm, 0);
    for (ax, am) in x.action().iter().zip(m.action()) {
        rel = rel.hstack(&ax.kron(&im).sub(&ix.kron(am)));
    }
    Ok(rel)
}

/// `X ⊗_A M` for a right module `X` and a left module `M` over the same algebra.
pub fn tensor_over_algebra(x: &ModuleRep, m: &ModuleRep) -> Result<BalancedTensor> {
    let relations = balancing_relations(x, m)?;
    let q = quotient_space(x.p(), x.dim() * m.dim(), &relations);
    Ok(BalancedTensor {
        dim: q.projection.rows(),
        projection: q.projection,
        section: q.section,
        relations,
    })
}

/// A tensor product carrying an induced module structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorModule {
    pub module: ModuleRep,
    /// From the plain tensor space onto `module`.
    pub projection: FpMatrix,
    pub section: FpMatrix,
    pub relations: FpMatrix,
}

/// `F(A) = U ⊗_R A` as a left `S`-module, basis of `U ⊗_k A` u-major.
pub fn tensor_over(u: &Bimodule, a: &ModuleRep) -> Result<TensorModule> {
    if a.side() != Side::Left {
        return Err(Error::SideMismatch("tensor_over needs a left module"));
    }
    if a.algebra().as_ref() != u.right_algebra().as_ref() {
        return Err(Error::AlgebraMismatch(
            "tensor_over: module is not over the right algebra of U",
        ));
    }
    let bt = tensor_over_algebra(&u.as_right_module(), a)?;
    let ia = FpMatrix::identity(a.p(), a.dim());
    let action = u
        .left_action()
        .iter()
        .map(|s| bt.projection.mul(&s.kron(&ia)).mul(&bt.section))
        .collect();
    let module = ModuleRep::from_parts(u.left_algebra().clone(), Side::Left, bt.dim, action);
    Ok(TensorModule {
        module,
        projection: bt.projection,
        section: bt.section,
        relations: bt.relations,
    })
}

/// `F(f) = U ⊗ f` between the induced modules.
pub fn tensor_map(u: &Bimodule, f: &ModuleMap) -> Result<ModuleMap> {
    let src = tensor_over(u, f.source())?;
    let tgt = tensor_over(u, f.target())?;
    Ok(tensor_map_between(u, f, &src, &tgt))
}

/// `U ⊗ f` when both induced modules are already computed.
pub fn tensor_map_between(u: &Bimodule, f: &ModuleMap, src: &TensorModule, tgt: &TensorModule) -> ModuleMap {
    let iu = FpMatrix::identity(u.p(), u.dim());
    let m = tgt.projection.mul(&iu.kron(f.matrix())).mul(&src.section);
    ModuleMap::from_parts(src.module.clone(), tgt.module.clone(), m)
}

/// `Y ⊗_S U` as a right `R`-module, basis of `Y ⊗_k U` y-major.
pub fn tensor_right(y: &ModuleRep, u: &Bimodule) -> Result<TensorModule> {
    if y.side() != Side::Right {
        return Err(Error::SideMismatch("tensor_right needs a right module"));
    }
    if y.algebra().as_ref() != u.left_algebra().as_ref() {
        return Err(Error::AlgebraMismatch(
            "tensor_right: module is not over the left algebra of U",
        ));
    }
    let bt = tensor_over_algebra(y, &u.as_left_module())?;
    let iy = FpMatrix::identity(y.p(), y.dim());
    let action: Vec<FpMatrix> = u
        .right_action()
        .iter()
        .map(|r| bt.projection.mul(&iy.kron(r)).mul(&bt.section))
        .collect();
    let module = ModuleRep::from_parts(u.right_algebra().clone(), Side::Right, bt.dim, action);
    Ok(TensorModule {
        module,
        projection: bt.projection,
        section: bt.section,
        relations: bt.relations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{regular_module, FDAlgebra};
    use crate::fixtures::{DualNumbers, A2};
    use crate::module::{hom_space, ModuleRep};
    use alloc::sync::Arc;

    #[test]
    fn zero_bimodule_kills_everything() {
        let k = Arc::new(FDAlgebra::field(2).unwrap());
        let u = Bimodule::zero(k.clone(), k.clone()).unwrap();
        let t = tensor_over(&u, &regular_module(&k, Side::Left)).unwrap();
        assert_eq!(t.module.dim(), 0);
    }

    #[test]
    fn a2_tensor_is_one_dimensional() {
        let a2 = A2::new();
        let t = tensor_over(a2.ring.u(), &a2.r_k).unwrap();
        assert_eq!(t.module.dim(), 1);
        assert!(t.module.validate().is_empty());
    }

    #[test]
    fn dual_numbers_balancing_kills_u_times_x() {
        let d = DualNumbers::new();
        let reg = regular_module(d.ring.r(), Side::Left);
        let t = tensor_over(d.ring.u(), &reg).unwrap();
        assert_eq!(t.module.dim(), 1);
        // u ⊗ x is a relation.
        assert!(t.projection.mul_vec(&[0, 1]).iter().all(|&v| v == 0));
    }

    #[test]
    fn tensor_map_is_functorial() {
        let d = DualNumbers::new();
        let u = d.ring.u();
        let reg = regular_module(d.ring.r(), Side::Left);
        let id = ModuleMap::identity(&reg);
        let fid = tensor_map(u, &id).unwrap();
        assert_eq!(fid.matrix(), &FpMatrix::identity(2, fid.source().dim()));
        for f in hom_space(&reg, &d.r_k).unwrap() {
            for g in hom_space(&d.r_k, &d.r_k).unwrap() {
                let lhs = tensor_map(u, &g.after(&f)).unwrap();
                let rhs = tensor_map(u, &g).unwrap().after(&tensor_map(u, &f).unwrap());
                assert_eq!(lhs.matrix(), rhs.matrix());
                assert!(lhs.is_intertwiner());
            }
        }
        let zero = ModuleMap::zero(&reg, &d.r_k);
        assert!(tensor_map(u, &zero).unwrap().matrix().is_zero());
    }

    #[test]
    fn right_tensor_with_regular_is_u() {
        let a2 = A2::new();
        let s = a2.ring.s();
        let y: ModuleRep = regular_module(s, Side::Right);
        let t = tensor_right(&y, a2.ring.u()).unwrap();
        assert_eq!(t.module.dim(), a2.ring.u().dim());
        assert!(t.module.validate().is_empty());
    }

    #[test]
    fn sides_are_checked() {
        let a2 = A2::new();
        let right = regular_module(a2.ring.r(), Side::Right);
        assert!(matches!(tensor_over(a2.ring.u(), &right), Err(Error::SideMismatch(_))));
    }
}
