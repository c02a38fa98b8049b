//! Finite-dimensional unital associative algebras given by structure constants,
//! bimodules over a pair of them, and the triangular matrix algebra they form.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{add_mod, is_prime, mul_mod, FpMatrix};
use crate::module::{check_action, ActionViolation, ModuleRep, Side};

/// Algebra over `F_p` with basis `e_0 .. e_{d-1}`.
///
/// `mul[(i * d + j) * d + k]` is the coefficient of `e_k` in `e_i · e_j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FDAlgebra {
    p: u32,
    dim: usize,
    mul: Vec<u32>,
    unit: Vec<u32>,
}

impl fmt::Debug for FDAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FDAlgebra(F_{}, dim {})", self.p, self.dim)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraViolation {
    /// `(e_i e_j) e_k != e_i (e_j e_k)`
    Associativity {
        i: usize,
        j: usize,
        k: usize,
    },
    LeftUnit {
        i: usize,
    },
    RightUnit {
        i: usize,
    },
}

impl fmt::Display for AlgebraViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AlgebraViolation::Associativity { i, j, k } => {
                write!(f, "associativity fails on basis triple ({i}, {j}, {k})")
            }
            AlgebraViolation::LeftUnit { i } => write!(f, "unit * e_{i} != e_{i}"),
            AlgebraViolation::RightUnit { i } => write!(f, "e_{i} * unit != e_{i}"),
        }
    }
}

impl FDAlgebra {
    /// Shape-checked construction from nested structure constants `mul[i][j][k]`.
    /// Associativity and the unit law are not enforced here; see [`FDAlgebra::validate`].
    pub fn from_structure_constants(p: u32, mul: &[Vec<Vec<u32>>], unit: &[u32]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let d = unit.len();
        if mul.len() != d {
            return Err(Error::DimensionMismatch {
                context: "structure constants (outer)",
                expected: d,
                found: mul.len(),
            });
        }
        let mut flat = Vec::with_capacity(d * d * d);
        for row in mul {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    context: "structure constants (middle)",
                    expected: d,
                    found: row.len(),
                });
            }
            for entry in row {
                if entry.len() != d {
                    return Err(Error::DimensionMismatch {
                        context: "structure constants (inner)",
                        expected: d,
                        found: entry.len(),
                    });
                }
                for &c in entry {
                    if c >= p {
                        return Err(Error::Unreduced { value: c, p });
                    }
                    flat.push(c);
                }
            }
        }
        if let Some(&c) = unit.iter().find(|&&c| c >= p) {
            return Err(Error::Unreduced { value: c, p });
        }
        Ok(Self {
            p,
            dim: d,
            mul: flat,
            unit: unit.to_vec(),
        })
    }

    /// Like [`FDAlgebra::from_structure_constants`] but rejects invalid algebras.
    pub fn new(p: u32, mul: &[Vec<Vec<u32>>], unit: &[u32]) -> Result<Self> {
        let a = Self::from_structure_constants(p, mul, unit)?;
        if let Some(v) = a.validate().first() {
            return Err(Error::InvalidAlgebra(format!("{v}")));
        }
        Ok(a)
    }

    /// The field `F_p` as a one-dimensional algebra.
    pub fn field(p: u32) -> Result<Self> {
        Self::new(p, &[vec![vec![1]]], &[1])
    }

    /// `F_p[x]/(x^n)` with basis `1, x, .., x^{n-1}`.
    pub fn truncated_polynomial(p: u32, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidAlgebra("truncated polynomial ring needs n >= 1".into()));
        }
        let mut mul = vec![vec![vec![0u32; n]; n]; n];
        for (i, row) in mul.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                if i + j < n {
                    entry[i + j] = 1;
                }
            }
        }
        let mut unit = vec![0; n];
        unit[0] = 1;
        Self::new(p, &mul, &unit)
    }

    /// `F_p^n` with componentwise multiplication.
    pub fn diagonal(p: u32, n: usize) -> Result<Self> {
        let mut mul = vec![vec![vec![0u32; n]; n]; n];
        for (i, row) in mul.iter_mut().enumerate() {
            row[i][i] = 1;
        }
        Self::new(p, &mul, &vec![1; n])
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[u32] {
        &self.unit
    }

    #[inline]
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> u32 {
        self.mul[(i * self.dim + j) * self.dim + k]
    }

    /// Nested `mul[i][j][k]` form, as written in documents.
    pub fn structure_constants(&self) -> Vec<Vec<Vec<u32>>> {
        let d = self.dim;
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| self.structure_constant(i, j, k)).collect())
                    .collect()
            })
            .collect()
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        v
    }

    pub fn product(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let d = self.dim;
        let p = self.p;
        let mut out = vec![0u32; d];
        for i in 0..d {
            if x[i] == 0 {
                continue;
            }
            for j in 0..d {
                let c = mul_mod(x[i], y[j], p);
                if c == 0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o = add_mod(*o, mul_mod(c, self.structure_constant(i, j, k), p), p);
                }
            }
        }
        out
    }

    /// Matrix of `y ↦ x·y` in the basis.
    pub fn left_mult(&self, x: &[u32]) -> FpMatrix {
        let cols: Vec<Vec<u32>> = (0..self.dim).map(|j| self.product(x, &self.basis_vector(j))).collect();
        FpMatrix::from_columns(self.p, self.dim, &cols)
    }

    /// Matrix of `y ↦ y·x` in the basis.
    pub fn right_mult(&self, x: &[u32]) -> FpMatrix {
        let cols: Vec<Vec<u32>> = (0..self.dim).map(|j| self.product(&self.basis_vector(j), x)).collect();
        FpMatrix::from_columns(self.p, self.dim, &cols)
    }

    /// Every violated associativity triple and unit law, in lexicographic order.
    pub fn validate(&self) -> Vec<AlgebraViolation> {
        let d = self.dim;
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let eij = self.product(&self.basis_vector(i), &self.basis_vector(j));
                for k in 0..d {
                    let lhs = self.product(&eij, &self.basis_vector(k));
                    let ejk = self.product(&self.basis_vector(j), &self.basis_vector(k));
                    let rhs = self.product(&self.basis_vector(i), &ejk);
                    if lhs != rhs {
                        out.push(AlgebraViolation::Associativity { i, j, k });
                    }
                }
            }
        }
        for i in 0..d {
            let e = self.basis_vector(i);
            if self.product(&self.unit, &e) != e {
                out.push(AlgebraViolation::LeftUnit { i });
            }
            if self.product(&e, &self.unit) != e {
                out.push(AlgebraViolation::RightUnit { i });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }
}

/// The algebra acting on itself by multiplication on the chosen side.
pub fn regular_module(a: &Arc<FDAlgebra>, side: Side) -> ModuleRep {
    let action = (0..a.dim())
        .map(|i| match side {
            Side::Left => a.left_mult(&a.basis_vector(i)),
            Side::Right => a.right_mult(&a.basis_vector(i)),
        })
        .collect();
    ModuleRep::from_parts(a.clone(), side, a.dim(), action)
}

/// Left module structure on the linear dual of `s`: `(s·f)(x) = f(x·s)`.
///
/// This is the finite-dimensional stand-in for the character module `Hom_Z(S, Q/Z)`.
pub fn dual_module(s: &Arc<FDAlgebra>) -> ModuleRep {
    let action = (0..s.dim())
        .map(|i| s.right_mult(&s.basis_vector(i)).transpose())
        .collect();
    ModuleRep::from_parts(s.clone(), Side::Left, s.dim(), action)
}

/// An `(S, R)`-bimodule: a left `S`-action and a right `R`-action that commute.
///
/// Action matrices act on coordinate columns; the right action follows the
/// convention `ρ(r·r') = ρ(r')ρ(r)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bimodule {
    left: Arc<FDAlgebra>,
    right: Arc<FDAlgebra>,
    dim: usize,
    left_action: Vec<FpMatrix>,
    right_action: Vec<FpMatrix>,
}

impl fmt::Debug for Bimodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Bimodule(dim {}, left {:?}, right {:?})",
            self.dim, self.left, self.right
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BimoduleViolation {
    Left(ActionViolation),
    Right(ActionViolation),
    /// `(s_i · u) · r_j != s_i · (u · r_j)`
    Commute {
        s: usize,
        r: usize,
    },
}

impl fmt::Display for BimoduleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BimoduleViolation::Left(v) => write!(f, "left action: {v}"),
            BimoduleViolation::Right(v) => write!(f, "right action: {v}"),
            BimoduleViolation::Commute { s, r } => {
                write!(f, "left basis element {s} and right basis element {r} do not commute")
            }
        }
    }
}

impl Bimodule {
    /// Shape-checked construction; see [`Bimodule::validate`] for the axioms.
    pub fn from_parts(
        left: Arc<FDAlgebra>,
        right: Arc<FDAlgebra>,
        dim: usize,
        left_action: Vec<FpMatrix>,
        right_action: Vec<FpMatrix>,
    ) -> Result<Self> {
        if left.p() != right.p() {
            return Err(Error::FieldMismatch {
                expected: left.p(),
                found: right.p(),
            });
        }
        if left_action.len() != left.dim() || right_action.len() != right.dim() {
            return Err(Error::Malformed(format!(
                "bimodule needs {} left and {} right action matrices, found {} and {}",
                left.dim(),
                right.dim(),
                left_action.len(),
                right_action.len()
            )));
        }
        for m in left_action.iter().chain(&right_action) {
            if m.rows() != dim || m.cols() != dim || m.p() != left.p() {
                return Err(Error::Malformed(format!(
                    "bimodule action matrices must be {dim}x{dim} over F_{}",
                    left.p()
                )));
            }
        }
        Ok(Self {
            left,
            right,
            dim,
            left_action,
            right_action,
        })
    }

    /// Shape-checked and axiom-checked construction.
    pub fn new(
        left: Arc<FDAlgebra>,
        right: Arc<FDAlgebra>,
        dim: usize,
        left_action: Vec<FpMatrix>,
        right_action: Vec<FpMatrix>,
    ) -> Result<Self> {
        let b = Self::from_parts(left, right, dim, left_action, right_action)?;
        if let Some(v) = b.validate().first() {
            return Err(Error::InvalidModule(format!("bimodule: {v}")));
        }
        Ok(b)
    }

    /// The zero bimodule.
    pub fn zero(left: Arc<FDAlgebra>, right: Arc<FDAlgebra>) -> Result<Self> {
        let p = left.p();
        let la = (0..left.dim()).map(|_| FpMatrix::zeros(p, 0, 0)).collect();
        let ra = (0..right.dim()).map(|_| FpMatrix::zeros(p, 0, 0)).collect();
        Self::new(left, right, 0, la, ra)
    }

    /// An algebra `A` as an `(A, A)`-bimodule.
    pub fn regular(a: Arc<FDAlgebra>) -> Result<Self> {
        let la = (0..a.dim()).map(|i| a.left_mult(&a.basis_vector(i))).collect();
        let ra = (0..a.dim()).map(|i| a.right_mult(&a.basis_vector(i))).collect();
        Self::new(a.clone(), a.clone(), a.dim(), la, ra)
    }

    pub fn p(&self) -> u32 {
        self.left.p()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The algebra acting on the left (`S`).
    pub fn left_algebra(&self) -> &Arc<FDAlgebra> {
        &self.left
    }

    /// The algebra acting on the right (`R`).
    pub fn right_algebra(&self) -> &Arc<FDAlgebra> {
        &self.right
    }

    pub fn left_action(&self) -> &[FpMatrix] {
        &self.left_action
    }

    pub fn right_action(&self) -> &[FpMatrix] {
        &self.right_action
    }

    /// Matrix of `u ↦ s·u` for an arbitrary element `s` of the left algebra.
    pub fn left_act(&self, s: &[u32]) -> FpMatrix {
        combine(self.p(), self.dim, &self.left_action, s)
    }

    /// Matrix of `u ↦ u·r` for an arbitrary element `r` of the right algebra.
    pub fn right_act(&self, r: &[u32]) -> FpMatrix {
        combine(self.p(), self.dim, &self.right_action, r)
    }

    pub fn as_left_module(&self) -> ModuleRep {
        ModuleRep::from_parts(self.left.clone(), Side::Left, self.dim, self.left_action.clone())
    }

    pub fn as_right_module(&self) -> ModuleRep {
        ModuleRep::from_parts(self.right.clone(), Side::Right, self.dim, self.right_action.clone())
    }

    pub fn validate(&self) -> Vec<BimoduleViolation> {
        let mut out: Vec<BimoduleViolation> = check_action(&self.left, Side::Left, self.dim, &self.left_action)
            .into_iter()
            .map(BimoduleViolation::Left)
            .collect();
        out.extend(
            check_action(&self.right, Side::Right, self.dim, &self.right_action)
                .into_iter()
                .map(BimoduleViolation::Right),
        );
        for (s, ls) in self.left_action.iter().enumerate() {
            for (r, rr) in self.right_action.iter().enumerate() {
                if ls.mul(rr) != rr.mul(ls) {
                    out.push(BimoduleViolation::Commute { s, r });
                }
            }
        }
        out
    }
}

pub(crate) fn combine(p: u32, dim: usize, basis_mats: &[FpMatrix], coeffs: &[u32]) -> FpMatrix {
    let mut acc = FpMatrix::zeros(p, dim, dim);
    for (m, &c) in basis_mats.iter().zip(coeffs) {
        if c != 0 {
            acc = acc.add(&m.scale(c));
        }
    }
    acc
}

/// Structure constants of `T = [[R, 0], [U, S]]` with basis ordered as the
/// `R`-block, then the `U`-block, then the `S`-block.
///
/// `(r, u, s)·(r', u', s') = (r r', u·r' + s·u', s s')`.
pub fn triangular_algebra(r: &FDAlgebra, s: &FDAlgebra, u: &Bimodule) -> Result<FDAlgebra> {
    if r.p() != s.p() || r.p() != u.p() {
        return Err(Error::FieldMismatch {
            expected: r.p(),
            found: if r.p() != s.p() { s.p() } else { u.p() },
        });
    }
    if u.right_algebra().as_ref() != r || u.left_algebra().as_ref() != s {
        return Err(Error::AlgebraMismatch(
            "triangular algebra: bimodule is not over (S, R)",
        ));
    }
    if !r.is_valid() || !s.is_valid() {
        return Err(Error::InvalidAlgebra("triangular algebra: invalid component".into()));
    }
    if let Some(v) = u.validate().first() {
        return Err(Error::InvalidModule(format!("triangular algebra bimodule: {v}")));
    }
    let (dr, du, ds) = (r.dim(), u.dim(), s.dim());
    let d = dr + du + ds;
    let mut mul = vec![vec![vec![0u32; d]; d]; d];
    for i in 0..dr {
        for j in 0..dr {
            for k in 0..dr {
                mul[i][j][k] = r.structure_constant(i, j, k);
            }
        }
    }
    for i in 0..ds {
        for j in 0..ds {
            for k in 0..ds {
                mul[dr + du + i][dr + du + j][dr + du + k] = s.structure_constant(i, j, k);
            }
        }
    }
    // u_i · r_j
    for i in 0..du {
        for j in 0..dr {
            let m = &u.right_action()[j];
            for k in 0..du {
                mul[dr + i][j][dr + k] = m.get(k, i);
            }
        }
    }
    // s_i · u_j
    for i in 0..ds {
        let m = &u.left_action()[i];
        for j in 0..du {
            for k in 0..du {
                mul[dr + du + i][dr + j][dr + k] = m.get(k, j);
            }
        }
    }
    let mut unit = vec![0u32; d];
    unit[..dr].copy_from_slice(r.unit());
    unit[dr + du..].copy_from_slice(s.unit());
    let t = FDAlgebra::from_structure_constants(r.p(), &mul, &unit)?;
    if let Some(v) = t.validate().first() {
        return Err(Error::InvalidAlgebra(format!("triangular algebra: {v}")));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Arc<FDAlgebra> {
        Arc::new(FDAlgebra::field(2).unwrap())
    }

    fn a2_bimodule() -> Bimodule {
        Bimodule::regular(f2()).unwrap()
    }

    #[test]
    fn field_and_dual_numbers_are_valid() {
        assert!(f2().is_valid());
        let d = FDAlgebra::truncated_polynomial(2, 2).unwrap();
        assert!(d.is_valid());
        assert_eq!(d.product(&[0, 1], &[0, 1]), vec![0, 0]);
    }

    #[test]
    fn mutated_structure_constant_reports_triple() {
        let d = FDAlgebra::truncated_polynomial(2, 3).unwrap();
        let mut mul = d.structure_constants();
        // x·x² = x² while x²·x stays 0.
        mul[1][2] = vec![0, 0, 1];
        let bad = FDAlgebra::from_structure_constants(2, &mul, d.unit()).unwrap();
        let report = bad.validate();
        assert!(!report.is_empty());
        // Recheck every reported triple by hand.
        for v in &report {
            if let AlgebraViolation::Associativity { i, j, k } = *v {
                let lhs = bad.product(
                    &bad.product(&bad.basis_vector(i), &bad.basis_vector(j)),
                    &bad.basis_vector(k),
                );
                let rhs = bad.product(
                    &bad.basis_vector(i),
                    &bad.product(&bad.basis_vector(j), &bad.basis_vector(k)),
                );
                assert_ne!(lhs, rhs);
            }
        }
        assert!(report.contains(&AlgebraViolation::Associativity { i: 1, j: 1, k: 1 }));
    }

    #[test]
    fn a2_triangular_algebra() {
        let r = f2();
        let t = triangular_algebra(&r, &r, &a2_bimodule()).unwrap();
        assert_eq!(t.dim(), 3);
        assert!(t.is_valid());
        // e11 = (1,0,0) and e22 = (0,0,1) are orthogonal idempotents summing to 1.
        let e11 = [1, 0, 0];
        let e22 = [0, 0, 1];
        assert_eq!(t.product(&e11, &e11), e11);
        assert_eq!(t.product(&e22, &e22), e22);
        assert_eq!(t.product(&e11, &e22), vec![0, 0, 0]);
        assert_eq!(t.unit(), &[1, 0, 1]);
        // u·r = u, s·u = u, r·u = 0, u·s = 0.
        assert_eq!(t.product(&[0, 1, 0], &e11), vec![0, 1, 0]);
        assert_eq!(t.product(&e22, &[0, 1, 0]), vec![0, 1, 0]);
        assert_eq!(t.product(&e11, &[0, 1, 0]), vec![0, 0, 0]);
        assert_eq!(t.product(&[0, 1, 0], &e22), vec![0, 0, 0]);
    }

    #[test]
    fn zero_bimodule_gives_product_algebra() {
        let r = f2();
        let u = Bimodule::zero(r.clone(), r.clone()).unwrap();
        let t = triangular_algebra(&r, &r, &u).unwrap();
        let prod = FDAlgebra::diagonal(2, 2).unwrap();
        assert_eq!(t, prod);
    }

    #[test]
    fn dual_numbers_triangular() {
        let r = Arc::new(FDAlgebra::truncated_polynomial(2, 2).unwrap());
        let s = f2();
        let u = Bimodule::new(
            s.clone(),
            r.clone(),
            1,
            alloc::vec![FpMatrix::identity(2, 1)],
            alloc::vec![FpMatrix::identity(2, 1), FpMatrix::zeros(2, 1, 1)],
        )
        .unwrap();
        let t = triangular_algebra(&r, &s, &u).unwrap();
        assert_eq!(t.dim(), 4);
        assert!(t.is_valid());
    }

    #[test]
    fn mismatched_bimodule_rejected() {
        let r = f2();
        let f3 = Arc::new(FDAlgebra::field(3).unwrap());
        assert!(matches!(
            triangular_algebra(&r, &f3, &a2_bimodule()),
            Err(Error::FieldMismatch { .. })
        ));
        let d = FDAlgebra::truncated_polynomial(2, 2).unwrap();
        assert!(triangular_algebra(&d, &r, &a2_bimodule()).is_err());
    }

    #[test]
    fn regular_and_dual_modules() {
        let k = f2();
        let m = regular_module(&k, Side::Left);
        assert_eq!(m.dim(), 1);
        assert_eq!(m.action()[0], FpMatrix::identity(2, 1));
        let d = Arc::new(FDAlgebra::truncated_polynomial(2, 2).unwrap());
        let reg = regular_module(&d, Side::Left);
        assert_eq!(
            reg.action()[1].to_rows(),
            alloc::vec![alloc::vec![0, 0], alloc::vec![1, 0]]
        );
        assert!(reg.validate().is_empty());
        let dual = dual_module(&d);
        assert!(dual.validate().is_empty());
        assert_eq!(dual.action()[1], d.right_mult(&[0, 1]).transpose());
        assert!(regular_module(&d, Side::Right).validate().is_empty());
    }
}
