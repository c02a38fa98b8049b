//! Small worked examples over `F_2`, shared by tests, the CLI and the
//! acceptance suite.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{regular_module, Bimodule, FDAlgebra};
use crate::comma::{CommaObject, TriangularRing};
use crate::linalg::FpMatrix;
use crate::module::{direct_sum2, ModuleRep, Side};

fn one(p: u32) -> FpMatrix {
    FpMatrix::identity(p, 1)
}

fn zero1(p: u32) -> FpMatrix {
    FpMatrix::zeros(p, 1, 1)
}

/// Lower triangular 2×2 matrices over `F_2`: `R = S = U = F_2`.
#[derive(Clone, Debug)]
pub struct A2 {
    pub ring: Arc<TriangularRing>,
    /// `k` as a left `R`-module.
    pub r_k: ModuleRep,
    /// `k` as a left `S`-module.
    pub s_k: ModuleRep,
}

/// The indecomposables of `A2` plus zero and the semisimple `N = S_R ⊕ S_S`.
#[derive(Clone, Debug)]
pub struct A2Objects<M> {
    pub zero: M,
    pub s_r: M,
    pub s_s: M,
    pub p: M,
    pub n: M,
}

impl<M: Clone> A2Objects<M> {
    /// In the order `0, S_R, S_S, P, N`.
    pub fn all(&self) -> Vec<M> {
        vec![
            self.zero.clone(),
            self.s_r.clone(),
            self.s_s.clone(),
            self.p.clone(),
            self.n.clone(),
        ]
    }
}

pub const A2_NAMES: [&str; 5] = ["0", "S_R", "S_S", "P", "N"];

impl A2 {
    pub fn new() -> Self {
        let k = Arc::new(FDAlgebra::field(2).expect("2 is prime"));
        let u = Bimodule::regular(k.clone()).expect("regular bimodule");
        let ring = Arc::new(TriangularRing::new(k.clone(), k.clone(), u).expect("A2 is a triangular algebra"));
        let r_k = regular_module(ring.r(), Side::Left);
        let s_k = regular_module(ring.s(), Side::Left);
        Self { ring, r_k, s_k }
    }

    pub fn comma(&self) -> A2Objects<CommaObject> {
        let ring = &self.ring;
        A2Objects {
            zero: CommaObject::zero(ring.clone()),
            s_r: CommaObject::upper(ring.clone(), self.r_k.clone()),
            s_s: CommaObject::lower(ring.clone(), self.s_k.clone()),
            p: CommaObject::from_parts(ring.clone(), self.r_k.clone(), self.s_k.clone(), one(2)),
            n: CommaObject::from_parts(ring.clone(), self.r_k.clone(), self.s_k.clone(), zero1(2)),
        }
    }

    pub fn t_modules(&self) -> A2Objects<ModuleRep> {
        let c = self.comma();
        A2Objects {
            zero: c.zero.to_t_module(),
            s_r: c.s_r.to_t_module(),
            s_s: c.s_s.to_t_module(),
            p: c.p.to_t_module(),
            n: c.n.to_t_module(),
        }
    }

    /// `0, S_R, S_S, P, N`
    pub fn t_universe(&self) -> Vec<ModuleRep> {
        self.t_modules().all()
    }

    /// `0, k`
    pub fn r_universe(&self) -> Vec<ModuleRep> {
        vec![self.ring.zero_r(), self.r_k.clone()]
    }

    /// `0, k`
    pub fn s_universe(&self) -> Vec<ModuleRep> {
        vec![self.ring.zero_s(), self.s_k.clone()]
    }

    /// `0, k` as right `R`-modules.
    pub fn right_r_universe(&self) -> Vec<ModuleRep> {
        vec![
            ModuleRep::zero(self.ring.r().clone(), Side::Right),
            regular_module(self.ring.r(), Side::Right),
        ]
    }

    /// `0, k` as right `S`-modules.
    pub fn right_s_universe(&self) -> Vec<ModuleRep> {
        vec![
            ModuleRep::zero(self.ring.s().clone(), Side::Right),
            regular_module(self.ring.s(), Side::Right),
        ]
    }
}

impl Default for A2 {
    fn default() -> Self {
        Self::new()
    }
}

/// `R = F_2[x]/(x²)`, `S = F_2`, `U = F_2` with `x` acting as zero.
#[derive(Clone, Debug)]
pub struct DualNumbers {
    pub ring: Arc<TriangularRing>,
    pub r_k: ModuleRep,
    pub r_reg: ModuleRep,
    pub s_k: ModuleRep,
}

impl DualNumbers {
    pub fn new() -> Self {
        let r = Arc::new(FDAlgebra::truncated_polynomial(2, 2).expect("dual numbers"));
        let s = Arc::new(FDAlgebra::field(2).expect("2 is prime"));
        let u = Bimodule::new(s.clone(), r.clone(), 1, vec![one(2)], vec![one(2), zero1(2)])
            .expect("k is an (S, R)-bimodule");
        let ring = Arc::new(TriangularRing::new(r, s, u).expect("triangular algebra"));
        let r_k = ModuleRep::from_parts(ring.r().clone(), Side::Left, 1, vec![one(2), zero1(2)]);
        let r_reg = regular_module(ring.r(), Side::Left);
        let s_k = regular_module(ring.s(), Side::Left);
        Self { ring, r_k, r_reg, s_k }
    }

    /// `0, k, R, k²`
    pub fn r_universe(&self) -> Vec<ModuleRep> {
        vec![
            self.ring.zero_r(),
            self.r_k.clone(),
            self.r_reg.clone(),
            direct_sum2(&self.r_k, &self.r_k).expect("compatible"),
        ]
    }

    /// `0, k, k²`
    pub fn s_universe(&self) -> Vec<ModuleRep> {
        vec![
            self.ring.zero_s(),
            self.s_k.clone(),
            direct_sum2(&self.s_k, &self.s_k).expect("compatible"),
        ]
    }

    /// `0, k, R` as right `R`-modules.
    pub fn right_r_universe(&self) -> Vec<ModuleRep> {
        vec![
            ModuleRep::zero(self.ring.r().clone(), Side::Right),
            ModuleRep::from_parts(self.ring.r().clone(), Side::Right, 1, vec![one(2), zero1(2)]),
            regular_module(self.ring.r(), Side::Right),
        ]
    }

    /// `0, k` as right `S`-modules.
    pub fn right_s_universe(&self) -> Vec<ModuleRep> {
        vec![
            ModuleRep::zero(self.ring.s().clone(), Side::Right),
            regular_module(self.ring.s(), Side::Right),
        ]
    }

    /// The epimorphism `R → k`.
    pub fn augmentation(&self) -> FpMatrix {
        FpMatrix::from_rows(2, &[vec![1, 0]]).expect("valid")
    }
}

impl Default for DualNumbers {
    fn default() -> Self {
        Self::new()
    }
}
