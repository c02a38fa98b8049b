//! Modules over `T = [[R, 0], [U, S]]` as triples `(A, B, φ: U ⊗_R A → B)`.
//!
//! `φ` is stored on the plain tensor space `U ⊗_k A`: a `dim B × (dim U · dim A)`
//! matrix whose column `i · dim A + j` is the image of `u_i ⊗ a_j`. Balance and
//! `S`-linearity are validation invariants.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{regular_module, triangular_algebra, Bimodule, FDAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{quotient_space, FpMatrix};
use crate::module::{
    check_action, direct_sum2, hom_dim, hom_space, isomorphic, kernel, quotient_module, unflatten, ActionViolation,
    Equations, ModuleMap, ModuleRep, QuotientModule, Side, Submodule,
};
use crate::tensor::{tensor_map_between, tensor_over, tensor_over_algebra, tensor_right, BalancedTensor, TensorModule};
use crate::Limits;

/// `R`, `S`, an `(S, R)`-bimodule `U`, and the algebra `T` they form.
#[derive(Clone, PartialEq, Eq)]
pub struct TriangularRing {
    r: Arc<FDAlgebra>,
    s: Arc<FDAlgebra>,
    u: Bimodule,
    t: Arc<FDAlgebra>,
}

impl fmt::Debug for TriangularRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TriangularRing(dim R {}, dim U {}, dim S {})",
            self.r.dim(),
            self.u.dim(),
            self.s.dim()
        )
    }
}

impl TriangularRing {
    pub fn new(r: Arc<FDAlgebra>, s: Arc<FDAlgebra>, u: Bimodule) -> Result<Self> {
        let t = Arc::new(triangular_algebra(&r, &s, &u)?);
        // Share the component algebras with the bimodule so compatibility
        // checks can short-circuit on pointer equality.
        let u = Bimodule::from_parts(
            s.clone(),
            r.clone(),
            u.dim(),
            u.left_action().to_vec(),
            u.right_action().to_vec(),
        )?;
        Ok(Self { r, s, u, t })
    }

    pub fn p(&self) -> u32 {
        self.t.p()
    }

    pub fn r(&self) -> &Arc<FDAlgebra> {
        &self.r
    }

    pub fn s(&self) -> &Arc<FDAlgebra> {
        &self.s
    }

    pub fn u(&self) -> &Bimodule {
        &self.u
    }

    pub fn t(&self) -> &Arc<FDAlgebra> {
        &self.t
    }

    /// Offset of the `U`-block in the basis of `T`.
    pub fn u_offset(&self) -> usize {
        self.r.dim()
    }

    /// Offset of the `S`-block in the basis of `T`.
    pub fn s_offset(&self) -> usize {
        self.r.dim() + self.u.dim()
    }

    /// The idempotent `(1_R, 0, 0)` of `T`.
    pub fn r_idempotent(&self) -> Vec<u32> {
        let mut e = vec![0; self.t.dim()];
        e[..self.r.dim()].copy_from_slice(self.r.unit());
        e
    }

    /// The idempotent `(0, 0, 1_S)` of `T`.
    pub fn s_idempotent(&self) -> Vec<u32> {
        let mut e = vec![0; self.t.dim()];
        e[self.s_offset()..].copy_from_slice(self.s.unit());
        e
    }

    pub fn zero_r(&self) -> ModuleRep {
        ModuleRep::zero(self.r.clone(), Side::Left)
    }

    pub fn zero_s(&self) -> ModuleRep {
        ModuleRep::zero(self.s.clone(), Side::Left)
    }

    /// The linear dual of `S`, standing in for its character module.
    pub fn s_dual(&self) -> ModuleRep {
        crate::algebra::dual_module(&self.s)
    }

    fn check_r(&self, a: &ModuleRep, ctx: &'static str) -> Result<()> {
        if a.side() != Side::Left {
            return Err(Error::SideMismatch(ctx));
        }
        if a.algebra().as_ref() != self.r.as_ref() {
            return Err(Error::AlgebraMismatch(ctx));
        }
        Ok(())
    }

    fn check_s(&self, b: &ModuleRep, ctx: &'static str) -> Result<()> {
        if b.side() != Side::Left {
            return Err(Error::SideMismatch(ctx));
        }
        if b.algebra().as_ref() != self.s.as_ref() {
            return Err(Error::AlgebraMismatch(ctx));
        }
        Ok(())
    }

    /// Re-homes a module over an algebra equal to `R` onto the shared pointer.
    fn adopt(&self, m: &ModuleRep, alg: &Arc<FDAlgebra>) -> ModuleRep {
        ModuleRep::from_parts(alg.clone(), m.side(), m.dim(), m.action().to_vec())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommaViolation {
    /// A component lives over the wrong algebra or side.
    Component(&'static str),
    A(ActionViolation),
    B(ActionViolation),
    Shape {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    /// `φ((u_u · r_r) ⊗ a_a − u_u ⊗ (r_r · a_a)) ≠ 0`
    Balance {
        u: usize,
        r: usize,
        a: usize,
    },
    /// `φ(s_s · (u_u ⊗ a_a)) ≠ s_s · φ(u_u ⊗ a_a)`
    Linearity {
        s: usize,
        u: usize,
        a: usize,
    },
}

impl fmt::Display for CommaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommaViolation::Component(ctx) => write!(f, "{ctx}"),
            CommaViolation::A(v) => write!(f, "first component: {v}"),
            CommaViolation::B(v) => write!(f, "second component: {v}"),
            CommaViolation::Shape {
                rows,
                cols,
                expected_rows,
                expected_cols,
            } => write!(f, "phi is {rows}x{cols}, expected {expected_rows}x{expected_cols}"),
            CommaViolation::Balance { u, r, a } => write!(
                f,
                "phi does not vanish on the balancing relation (u{u}*r{r}) (x) a{a} - u{u} (x) (r{r}*a{a})"
            ),
            CommaViolation::Linearity { s, u, a } => {
                write!(f, "phi is not linear for s{s} on u{u} (x) a{a}")
            }
        }
    }
}

/// A left `T`-module in comma form.
#[derive(Clone, PartialEq, Eq)]
pub struct CommaObject {
    ring: Arc<TriangularRing>,
    a: ModuleRep,
    b: ModuleRep,
    phi: FpMatrix,
}

impl fmt::Debug for CommaObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CommaObject")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("phi", &self.phi)
            .finish()
    }
}

impl CommaObject {
    pub fn new(ring: Arc<TriangularRing>, a: ModuleRep, b: ModuleRep, phi: FpMatrix) -> Result<Self> {
        let c = Self::from_parts(ring, a, b, phi);
        if let Some(v) = c.validate().first() {
            return Err(Error::InvalidComma(format!("{v}")));
        }
        Ok(c)
    }

    pub fn from_parts(ring: Arc<TriangularRing>, a: ModuleRep, b: ModuleRep, phi: FpMatrix) -> Self {
        let a = ring.adopt(&a, &ring.r.clone());
        let b = ring.adopt(&b, &ring.s.clone());
        Self { ring, a, b, phi }
    }

    pub fn zero(ring: Arc<TriangularRing>) -> Self {
        let p = ring.p();
        let (a, b) = (ring.zero_r(), ring.zero_s());
        Self::from_parts(ring, a, b, FpMatrix::zeros(p, 0, 0))
    }

    /// `(A, 0, 0)`
    pub fn upper(ring: Arc<TriangularRing>, a: ModuleRep) -> Self {
        let p = ring.p();
        let cols = ring.u.dim() * a.dim();
        let b = ring.zero_s();
        Self::from_parts(ring, a, b, FpMatrix::zeros(p, 0, cols))
    }

    /// `(0, B, 0)`
    pub fn lower(ring: Arc<TriangularRing>, b: ModuleRep) -> Self {
        let p = ring.p();
        let rows = b.dim();
        let a = ring.zero_r();
        Self::from_parts(ring, a, b, FpMatrix::zeros(p, rows, 0))
    }

    pub fn ring(&self) -> &Arc<TriangularRing> {
        &self.ring
    }

    pub fn a(&self) -> &ModuleRep {
        &self.a
    }

    pub fn b(&self) -> &ModuleRep {
        &self.b
    }

    pub fn phi(&self) -> &FpMatrix {
        &self.phi
    }

    pub fn dim(&self) -> usize {
        self.a.dim() + self.b.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Every violated invariant: component validity, shape, balance, linearity.
    pub fn validate(&self) -> Vec<CommaViolation> {
        let ring = &self.ring;
        let mut out = Vec::new();
        if ring.check_r(&self.a, "").is_err() {
            out.push(CommaViolation::Component("first component is not a left R-module"));
        }
        if ring.check_s(&self.b, "").is_err() {
            out.push(CommaViolation::Component("second component is not a left S-module"));
        }
        if !out.is_empty() {
            return out;
        }
        out.extend(
            check_action(&ring.r, Side::Left, self.a.dim(), self.a.action())
                .into_iter()
                .map(CommaViolation::A),
        );
        out.extend(
            check_action(&ring.s, Side::Left, self.b.dim(), self.b.action())
                .into_iter()
                .map(CommaViolation::B),
        );
        let (da, db, du) = (self.a.dim(), self.b.dim(), ring.u.dim());
        if self.phi.rows() != db || self.phi.cols() != du * da || self.phi.p() != ring.p() {
            out.push(CommaViolation::Shape {
                rows: self.phi.rows(),
                cols: self.phi.cols(),
                expected_rows: db,
                expected_cols: du * da,
            });
            return out;
        }
        if !out.is_empty() {
            return out;
        }
        let p = ring.p();
        let ia = FpMatrix::identity(p, da);
        let iu = FpMatrix::identity(p, du);
        for (r, (ur, ar)) in ring.u.right_action().iter().zip(self.a.action()).enumerate() {
            let rel = ur.kron(&ia).sub(&iu.kron(ar));
            let image = self.phi.mul(&rel);
            for i in 0..du {
                for j in 0..da {
                    if (0..db).any(|row| image.get(row, i * da + j) != 0) {
                        out.push(CommaViolation::Balance { u: i, r, a: j });
                    }
                }
            }
        }
        for (s, (us, bs)) in ring.u.left_action().iter().zip(self.b.action()).enumerate() {
            let lhs = self.phi.mul(&us.kron(&ia));
            let rhs = bs.mul(&self.phi);
            for i in 0..du {
                for j in 0..da {
                    let c = i * da + j;
                    if (0..db).any(|row| lhs.get(row, c) != rhs.get(row, c)) {
                        out.push(CommaViolation::Linearity { s, u: i, a: j });
                    }
                }
            }
        }
        out
    }

    /// `F(A) = U ⊗_R A`.
    pub fn induced(&self) -> Result<TensorModule> {
        tensor_over(&self.ring.u, &self.a)
    }

    /// `φ` descended to `U ⊗_R A`, as a map of left `S`-modules `F(A) → B`.
    pub fn phi_bar(&self) -> Result<(TensorModule, ModuleMap)> {
        let fa = self.induced()?;
        let m = self.phi.mul(&fa.section);
        let map = ModuleMap::from_parts(fa.module.clone(), self.b.clone(), m);
        Ok((fa, map))
    }

    /// `B / Im φ` with the induced action.
    pub fn phi_cokernel(&self) -> Result<QuotientModule> {
        quotient_module(&self.b, &self.phi)
    }

    /// The same module with `T` acting on `A ⊕ B`:
    /// `(r, u, s)·(a, b) = (r·a, φ(u ⊗ a) + s·b)`.
    pub fn to_t_module(&self) -> ModuleRep {
        let ring = &self.ring;
        let p = ring.p();
        let (da, db) = (self.a.dim(), self.b.dim());
        let n = da + db;
        let mut action = Vec::with_capacity(ring.t.dim());
        for ra in self.a.action() {
            let mut m = FpMatrix::zeros(p, n, n);
            m.paste(0, 0, ra);
            action.push(m);
        }
        for i in 0..ring.u.dim() {
            let mut m = FpMatrix::zeros(p, n, n);
            m.paste(da, 0, &self.phi.submatrix(0..db, i * da..(i + 1) * da));
            action.push(m);
        }
        for sb in self.b.action() {
            let mut m = FpMatrix::zeros(p, n, n);
            m.paste(da, da, sb);
            action.push(m);
        }
        ModuleRep::from_parts(ring.t.clone(), Side::Left, n, action)
    }

    /// Slices a left `T`-module by the idempotents `(1,0,0)` and `(0,0,1)`.
    /// Returns the comma object and an isomorphism `m → to_t_module()`.
    pub fn from_t_module(ring: Arc<TriangularRing>, m: &ModuleRep) -> Result<(Self, ModuleMap)> {
        if m.side() != Side::Left {
            return Err(Error::SideMismatch("from_t_module"));
        }
        if m.algebra().as_ref() != ring.t.as_ref() {
            return Err(Error::AlgebraMismatch("from_t_module"));
        }
        let er = m.act(&ring.r_idempotent());
        let es = m.act(&ring.s_idempotent());
        let ba = er.column_space_basis();
        let bb = es.column_space_basis();
        let (da, db) = (ba.cols(), bb.cols());
        let change = ba.hstack(&bb);
        let inv = change
            .inverse()
            .ok_or_else(|| Error::InvalidModule("idempotent slices do not span the module".into()))?;
        let conj = |i: usize| inv.mul(&m.action()[i]).mul(&change);
        let n = da + db;
        let a_action = (0..ring.r.dim()).map(|i| conj(i).submatrix(0..da, 0..da)).collect();
        let b_action = (0..ring.s.dim())
            .map(|i| conj(ring.s_offset() + i).submatrix(da..n, da..n))
            .collect();
        let du = ring.u.dim();
        let mut phi = FpMatrix::zeros(ring.p(), db, du * da);
        for k in 0..du {
            phi.paste(0, k * da, &conj(ring.u_offset() + k).submatrix(da..n, 0..da));
        }
        let a = ModuleRep::from_parts(ring.r.clone(), Side::Left, da, a_action);
        let b = ModuleRep::from_parts(ring.s.clone(), Side::Left, db, b_action);
        let c = Self::from_parts(ring, a, b, phi);
        let witness = ModuleMap::from_parts(m.clone(), c.to_t_module(), inv);
        Ok((c, witness))
    }

    /// `φ̃: A → Hom_S(U, B)`, `φ̃(a)(u) = φ(u ⊗ a)`.
    pub fn tilde_phi(&self) -> Result<(HomModule, ModuleMap)> {
        let hom = HomModule::new(&self.ring, &self.b)?;
        let (da, db, du) = (self.a.dim(), self.b.dim(), self.ring.u.dim());
        let p = self.ring.p();
        let mut m = FpMatrix::zeros(p, hom.dim(), da);
        for j in 0..da {
            let mut f = FpMatrix::zeros(p, db, du);
            for i in 0..du {
                for row in 0..db {
                    f.set(row, i, self.phi.get(row, i * da + j));
                }
            }
            let coords = hom
                .coordinates(&f)
                .ok_or_else(|| Error::InvalidComma("phi is not S-linear in the U variable".into()))?;
            for (k, &c) in coords.iter().enumerate() {
                m.set(k, j, c);
            }
        }
        let map = ModuleMap::from_parts(self.a.clone(), hom.module.clone(), m);
        Ok((hom, map))
    }

    /// `ker φ̃` with its `R`-action.
    pub fn tilde_phi_kernel(&self) -> Result<Submodule> {
        kernel(&self.tilde_phi()?.1)
    }

    /// `A ⊕ A'` and `B ⊕ B'` with `φ ⊕ φ'`.
    pub fn direct_sum(&self, other: &CommaObject) -> Result<CommaObject> {
        if self.ring != other.ring {
            return Err(Error::AlgebraMismatch("comma direct sum"));
        }
        let ring = self.ring.clone();
        let a = direct_sum2(&self.a, &other.a)?;
        let b = direct_sum2(&self.b, &other.b)?;
        let (da, da2, du) = (self.a.dim(), other.a.dim(), ring.u.dim());
        let p = ring.p();
        let mut phi = FpMatrix::zeros(p, b.dim(), du * a.dim());
        for i in 0..du {
            for j in 0..da {
                for row in 0..self.b.dim() {
                    phi.set(row, i * (da + da2) + j, self.phi.get(row, i * da + j));
                }
            }
            for j in 0..da2 {
                for row in 0..other.b.dim() {
                    phi.set(
                        self.b.dim() + row,
                        i * (da + da2) + da + j,
                        other.phi.get(row, i * da2 + j),
                    );
                }
            }
        }
        Ok(Self::from_parts(ring, a, b, phi))
    }
}

/// `Hom_S(U, B)` as a left `R`-module via `(r·f)(u) = f(u·r)`.
///
/// Coordinates are taken in the basis returned by `hom_space(U, B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomModule {
    pub module: ModuleRep,
    /// Basis maps `U → B`, each `dim B × dim U`.
    pub basis: Vec<FpMatrix>,
    flat: FpMatrix,
}

impl HomModule {
    pub fn new(ring: &TriangularRing, b: &ModuleRep) -> Result<Self> {
        ring.check_s(b, "Hom_S(U, -)")?;
        let b = ring.adopt(b, &ring.s);
        let u = ring.u.as_left_module();
        let basis: Vec<FpMatrix> = hom_space(&u, &b)?.into_iter().map(|f| f.matrix().clone()).collect();
        let p = ring.p();
        let len = b.dim() * ring.u.dim();
        let cols: Vec<Vec<u32>> = basis.iter().map(|f| f.entries().to_vec()).collect();
        let flat = FpMatrix::from_columns(p, len, &cols);
        let h = basis.len();
        let mut action = Vec::with_capacity(ring.r.dim());
        for ur in ring.u.right_action() {
            let images: Vec<Vec<u32>> = basis.iter().map(|f| f.mul(ur).entries().to_vec()).collect();
            let images = FpMatrix::from_columns(p, len, &images);
            let m = if h == 0 {
                FpMatrix::zeros(p, 0, 0)
            } else {
                flat.solve_matrix(&images)
                    .expect("Hom_S(U, B) is closed under the R-action")
            };
            action.push(m);
        }
        let module = ModuleRep::from_parts(ring.r.clone(), Side::Left, h, action);
        Ok(Self { module, basis, flat })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of an `S`-linear map `U → B`, if it is one.
    pub fn coordinates(&self, f: &FpMatrix) -> Option<Vec<u32>> {
        if self.basis.is_empty() {
            return if f.is_zero() { Some(Vec::new()) } else { None };
        }
        self.flat.solve(f.entries()).ok().flatten()
    }

    pub fn element(&self, coeffs: &[u32]) -> FpMatrix {
        let v = self.flat.mul_vec(coeffs);
        let rows = if self.basis.is_empty() { 0 } else { self.basis[0].rows() };
        let cols = if self.basis.is_empty() { 0 } else { self.basis[0].cols() };
        unflatten(self.flat.p(), rows, cols, &v)
    }
}

/// A morphism of comma objects: `f: A → A'` and `g: B → B'` with
/// `g ∘ φ = φ' ∘ (U ⊗ f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommaMap {
    source: CommaObject,
    target: CommaObject,
    f: FpMatrix,
    g: FpMatrix,
}

impl CommaMap {
    pub fn new(source: CommaObject, target: CommaObject, f: FpMatrix, g: FpMatrix) -> Result<Self> {
        let m = Self::from_parts(source, target, f, g);
        if !m.is_valid() {
            return Err(Error::InvalidMap(
                "comma map components do not form a commuting square".into(),
            ));
        }
        Ok(m)
    }

    pub fn from_parts(source: CommaObject, target: CommaObject, f: FpMatrix, g: FpMatrix) -> Self {
        Self { source, target, f, g }
    }

    pub fn source(&self) -> &CommaObject {
        &self.source
    }

    pub fn target(&self) -> &CommaObject {
        &self.target
    }

    pub fn f(&self) -> &FpMatrix {
        &self.f
    }

    pub fn g(&self) -> &FpMatrix {
        &self.g
    }

    pub fn alpha(&self) -> ModuleMap {
        ModuleMap::from_parts(self.source.a.clone(), self.target.a.clone(), self.f.clone())
    }

    pub fn beta(&self) -> ModuleMap {
        ModuleMap::from_parts(self.source.b.clone(), self.target.b.clone(), self.g.clone())
    }

    pub fn square_commutes(&self) -> bool {
        let iu = FpMatrix::identity(self.f.p(), self.source.ring.u.dim());
        self.g.mul(&self.source.phi) == self.target.phi.mul(&iu.kron(&self.f))
    }

    pub fn is_valid(&self) -> bool {
        let shapes = self.f.rows() == self.target.a.dim()
            && self.f.cols() == self.source.a.dim()
            && self.g.rows() == self.target.b.dim()
            && self.g.cols() == self.source.b.dim();
        shapes && self.alpha().is_intertwiner() && self.beta().is_intertwiner() && self.square_commutes()
    }

    /// The same morphism between the `T`-modules, `f ⊕ g`.
    pub fn to_t_map(&self) -> ModuleMap {
        ModuleMap::from_parts(
            self.source.to_t_module(),
            self.target.to_t_module(),
            self.f.block_diag(&self.g),
        )
    }

    /// `self ∘ first`
    pub fn after(&self, first: &CommaMap) -> CommaMap {
        Self::from_parts(
            first.source.clone(),
            self.target.clone(),
            self.f.mul(&first.f),
            self.g.mul(&first.g),
        )
    }
}

/// Basis of the comma morphisms `x → y`, solved directly from both
/// intertwining systems and the square condition.
pub fn hom_comma(x: &CommaObject, y: &CommaObject) -> Result<Vec<CommaMap>> {
    if x.ring != y.ring {
        return Err(Error::AlgebraMismatch("hom_comma"));
    }
    let ring = &x.ring;
    let p = ring.p();
    let (da, db, da2, db2, du) = (x.a.dim(), x.b.dim(), y.a.dim(), y.b.dim(), ring.u.dim());
    let nf = da2 * da;
    let ng = db2 * db;
    let nvars = nf + ng;
    if nvars == 0 {
        return Ok(Vec::new());
    }
    let mut eqs = Equations::new(p, nvars);
    for (t, s) in y.a.action().iter().zip(x.a.action()) {
        eqs.sylvester(0, da2, da, t, s);
    }
    for (t, s) in y.b.action().iter().zip(x.b.action()) {
        eqs.sylvester(nf, db2, db, t, s);
    }
    // g·φ − φ'·(1 ⊗ f) = 0, entry (row, i·da + j).
    let neg = |v: u32| if v == 0 { 0 } else { p - v };
    for row in 0..db2 {
        for i in 0..du {
            for j in 0..da {
                let mut eq = vec![0u32; nvars];
                for k in 0..db {
                    let v = x.phi.get(k, i * da + j);
                    if v != 0 {
                        let idx = nf + row * db + k;
                        eq[idx] = (eq[idx] + v) % p;
                    }
                }
                for m in 0..da2 {
                    let v = y.phi.get(row, i * da2 + m);
                    if v != 0 {
                        let idx = m * da + j;
                        eq[idx] = (eq[idx] + neg(v)) % p;
                    }
                }
                eqs.push(eq);
            }
        }
    }
    let ker = eqs.kernel();
    Ok((0..ker.cols())
        .map(|c| {
            let v = ker.column(c);
            CommaMap::from_parts(
                x.clone(),
                y.clone(),
                unflatten(p, da2, da, &v[..nf]),
                unflatten(p, db2, db, &v[nf..]),
            )
        })
        .collect())
}

pub fn hom_comma_dim(x: &CommaObject, y: &CommaObject) -> Result<usize> {
    hom_comma(x, y).map(|b| b.len())
}

/// `p(A, B) = (A, F(A) ⊕ B, (1, 0)ᵀ)`.
pub fn functor_p(ring: &Arc<TriangularRing>, a: &ModuleRep, b: &ModuleRep) -> Result<CommaObject> {
    ring.check_r(a, "functor p")?;
    ring.check_s(b, "functor p")?;
    let fa = tensor_over(&ring.u, a)?;
    let lower = direct_sum2(&fa.module, &ring.adopt(b, &ring.s))?;
    let p = ring.p();
    let phi = fa
        .projection
        .vstack(&FpMatrix::zeros(p, b.dim(), ring.u.dim() * a.dim()));
    Ok(CommaObject::from_parts(ring.clone(), a.clone(), lower, phi))
}

/// `p(f, g) = (f, F(f) ⊕ g)`.
pub fn functor_p_map(ring: &Arc<TriangularRing>, f: &ModuleMap, g: &ModuleMap) -> Result<CommaMap> {
    let src = functor_p(ring, f.source(), g.source())?;
    let tgt = functor_p(ring, f.target(), g.target())?;
    let fs = tensor_over(&ring.u, f.source())?;
    let ft = tensor_over(&ring.u, f.target())?;
    let ff = tensor_map_between(&ring.u, f, &fs, &ft);
    Ok(CommaMap::from_parts(
        src,
        tgt,
        f.matrix().clone(),
        ff.matrix().block_diag(g.matrix()),
    ))
}

/// `q(A, B, φ) = (A, B)`.
pub fn functor_q(c: &CommaObject) -> (ModuleRep, ModuleRep) {
    (c.a.clone(), c.b.clone())
}

pub fn functor_q_map(m: &CommaMap) -> (ModuleMap, ModuleMap) {
    (m.alpha(), m.beta())
}

/// `h(A, B) = (A ⊕ Hom_S(U, B), B)` with `φ` the evaluation on the Hom summand.
pub fn functor_h(ring: &Arc<TriangularRing>, a: &ModuleRep, b: &ModuleRep) -> Result<CommaObject> {
    ring.check_r(a, "functor h")?;
    ring.check_s(b, "functor h")?;
    let hom = HomModule::new(ring, b)?;
    let upper = direct_sum2(&ring.adopt(a, &ring.r), &hom.module)?;
    let (da, dn, du, db) = (a.dim(), upper.dim(), ring.u.dim(), b.dim());
    let mut phi = FpMatrix::zeros(ring.p(), db, du * dn);
    for (k, f) in hom.basis.iter().enumerate() {
        for i in 0..du {
            for row in 0..db {
                phi.set(row, i * dn + da + k, f.get(row, i));
            }
        }
    }
    Ok(CommaObject::from_parts(ring.clone(), upper, b.clone(), phi))
}

/// `h(f, g) = (f ⊕ Hom_S(U, g), g)`.
pub fn functor_h_map(ring: &Arc<TriangularRing>, f: &ModuleMap, g: &ModuleMap) -> Result<CommaMap> {
    let src = functor_h(ring, f.source(), g.source())?;
    let tgt = functor_h(ring, f.target(), g.target())?;
    let hs = HomModule::new(ring, g.source())?;
    let ht = HomModule::new(ring, g.target())?;
    let mut hg = FpMatrix::zeros(ring.p(), ht.dim(), hs.dim());
    for (k, basis_map) in hs.basis.iter().enumerate() {
        let coords = ht
            .coordinates(&g.matrix().mul(basis_map))
            .ok_or_else(|| Error::InvalidMap("g is not S-linear".into()))?;
        for (row, &c) in coords.iter().enumerate() {
            hg.set(row, k, c);
        }
    }
    Ok(CommaMap::from_parts(
        src,
        tgt,
        f.matrix().block_diag(&hg),
        g.matrix().clone(),
    ))
}

/// The five Hom isomorphisms, each predicting a Hom dimension from data on
/// one side only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HomKind {
    /// Target `(C, 0)`: `Hom_R(A, C)`.
    TargetUpper,
    /// Source `(0, B)`: `Hom_S(B, D)`.
    SourceLower,
    /// Source `(A, U ⊗_R A)`: `Hom_R(A, C)`.
    SourceInduced,
    /// Target `(Hom_S(U, D), D)`: `Hom_S(B, D)`.
    TargetCoinduced,
    /// Source `(R, 0)`: `ker φ̃` of the target.
    SourceRegular,
}

impl HomKind {
    pub const ALL: [HomKind; 5] = [
        HomKind::TargetUpper,
        HomKind::SourceLower,
        HomKind::SourceInduced,
        HomKind::TargetCoinduced,
        HomKind::SourceRegular,
    ];

    /// 1-based position in [`HomKind::ALL`].
    pub fn index(self) -> usize {
        HomKind::ALL.iter().position(|&k| k == self).unwrap() + 1
    }

    pub fn from_index(i: usize) -> Option<Self> {
        i.checked_sub(1).and_then(|i| HomKind::ALL.get(i).copied())
    }

    pub fn name(self) -> &'static str {
        match self {
            HomKind::TargetUpper => "target-upper",
            HomKind::SourceLower => "source-lower",
            HomKind::SourceInduced => "source-induced",
            HomKind::TargetCoinduced => "target-coinduced",
            HomKind::SourceRegular => "source-regular",
        }
    }

    /// Whether the pair has the shape this isomorphism speaks about.
    pub fn applies(self, source: &CommaObject, target: &CommaObject, limits: &Limits) -> Result<bool> {
        Ok(match self {
            HomKind::TargetUpper => target.b.is_zero(),
            HomKind::SourceLower => source.a.is_zero(),
            HomKind::SourceInduced => {
                let (_, bar) = source.phi_bar()?;
                bar.is_isomorphism()
            }
            HomKind::TargetCoinduced => target.tilde_phi()?.1.is_isomorphism(),
            HomKind::SourceRegular => {
                let reg = regular_module(&source.ring.r, Side::Left);
                source.b.is_zero() && isomorphic(&reg, &source.a, limits)?
            }
        })
    }
}

/// Right-hand side of the Hom isomorphism of the given kind.
pub fn hom_formula(kind: HomKind, source: &CommaObject, target: &CommaObject, limits: &Limits) -> Result<usize> {
    if !kind.applies(source, target, limits)? {
        return Err(Error::Malformed(format!(
            "the pair does not have the shape required by {}",
            kind.name()
        )));
    }
    match kind {
        HomKind::TargetUpper | HomKind::SourceInduced => hom_dim(&source.a, &target.a),
        HomKind::SourceLower | HomKind::TargetCoinduced => hom_dim(&source.b, &target.b),
        HomKind::SourceRegular => Ok(target.tilde_phi_kernel()?.module.dim()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RightViolation {
    Component(&'static str),
    X(ActionViolation),
    Y(ActionViolation),
    Shape {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    /// `ψ((y_y · s_s) ⊗ u_u − y_y ⊗ (s_s · u_u)) ≠ 0`
    Balance {
        y: usize,
        s: usize,
        u: usize,
    },
    /// `ψ((y_y ⊗ u_u) · r_r) ≠ ψ(y_y ⊗ u_u) · r_r`
    Linearity {
        r: usize,
        y: usize,
        u: usize,
    },
}

impl fmt::Display for RightViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RightViolation::Component(ctx) => write!(f, "{ctx}"),
            RightViolation::X(v) => write!(f, "first component: {v}"),
            RightViolation::Y(v) => write!(f, "second component: {v}"),
            RightViolation::Shape {
                rows,
                cols,
                expected_rows,
                expected_cols,
            } => write!(f, "psi is {rows}x{cols}, expected {expected_rows}x{expected_cols}"),
            RightViolation::Balance { y, s, u } => write!(
                f,
                "psi does not vanish on the balancing relation (y{y}*s{s}) (x) u{u} - y{y} (x) (s{s}*u{u})"
            ),
            RightViolation::Linearity { r, y, u } => {
                write!(f, "psi is not linear for r{r} on y{y} (x) u{u}")
            }
        }
    }
}

/// A right `T`-module `(X, Y, ψ: Y ⊗_S U → X)`; `ψ` is `dim X × (dim Y · dim U)`
/// with column `i · dim U + k` the image of `y_i ⊗ u_k`.
#[derive(Clone, PartialEq, Eq)]
pub struct RightTModule {
    ring: Arc<TriangularRing>,
    x: ModuleRep,
    y: ModuleRep,
    psi: FpMatrix,
}

impl fmt::Debug for RightTModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RightTModule")
            .field("x", &self.x)
            .field("y", &self.y)
            .field("psi", &self.psi)
            .finish()
    }
}

impl RightTModule {
    pub fn new(ring: Arc<TriangularRing>, x: ModuleRep, y: ModuleRep, psi: FpMatrix) -> Result<Self> {
        let m = Self::from_parts(ring, x, y, psi);
        if let Some(v) = m.validate().first() {
            return Err(Error::InvalidComma(format!("right module: {v}")));
        }
        Ok(m)
    }

    pub fn from_parts(ring: Arc<TriangularRing>, x: ModuleRep, y: ModuleRep, psi: FpMatrix) -> Self {
        let x = ring.adopt(&x, &ring.r.clone());
        let y = ring.adopt(&y, &ring.s.clone());
        Self { ring, x, y, psi }
    }

    /// `(X, 0, 0)`
    pub fn upper(ring: Arc<TriangularRing>, x: ModuleRep) -> Self {
        let p = ring.p();
        let y = ModuleRep::zero(ring.s.clone(), Side::Right);
        let rows = x.dim();
        Self::from_parts(ring, x, y, FpMatrix::zeros(p, rows, 0))
    }

    /// `(0, Y, 0)`
    pub fn lower(ring: Arc<TriangularRing>, y: ModuleRep) -> Self {
        let p = ring.p();
        let x = ModuleRep::zero(ring.r.clone(), Side::Right);
        let cols = y.dim() * ring.u.dim();
        Self::from_parts(ring, x, y, FpMatrix::zeros(p, 0, cols))
    }

    /// `(Y ⊗_S U, Y, 1)`
    pub fn induced(ring: Arc<TriangularRing>, y: ModuleRep) -> Result<Self> {
        let t = tensor_right(&y, &ring.u)?;
        Ok(Self::from_parts(ring, t.module, y, t.projection))
    }

    pub fn ring(&self) -> &Arc<TriangularRing> {
        &self.ring
    }

    pub fn x(&self) -> &ModuleRep {
        &self.x
    }

    pub fn y(&self) -> &ModuleRep {
        &self.y
    }

    pub fn psi(&self) -> &FpMatrix {
        &self.psi
    }

    pub fn dim(&self) -> usize {
        self.x.dim() + self.y.dim()
    }

    pub fn validate(&self) -> Vec<RightViolation> {
        let ring = &self.ring;
        let mut out = Vec::new();
        if self.x.side() != Side::Right || self.x.algebra().as_ref() != ring.r.as_ref() {
            out.push(RightViolation::Component("first component is not a right R-module"));
        }
        if self.y.side() != Side::Right || self.y.algebra().as_ref() != ring.s.as_ref() {
            out.push(RightViolation::Component("second component is not a right S-module"));
        }
        if !out.is_empty() {
            return out;
        }
        out.extend(
            check_action(&ring.r, Side::Right, self.x.dim(), self.x.action())
                .into_iter()
                .map(RightViolation::X),
        );
        out.extend(
            check_action(&ring.s, Side::Right, self.y.dim(), self.y.action())
                .into_iter()
                .map(RightViolation::Y),
        );
        let (dx, dy, du) = (self.x.dim(), self.y.dim(), ring.u.dim());
        if self.psi.rows() != dx || self.psi.cols() != dy * du || self.psi.p() != ring.p() {
            out.push(RightViolation::Shape {
                rows: self.psi.rows(),
                cols: self.psi.cols(),
                expected_rows: dx,
                expected_cols: dy * du,
            });
            return out;
        }
        let p = ring.p();
        let iy = FpMatrix::identity(p, dy);
        let iu = FpMatrix::identity(p, du);
        for (s, (ys, us)) in self.y.action().iter().zip(ring.u.left_action()).enumerate() {
            let rel = ys.kron(&iu).sub(&iy.kron(us));
            let image = self.psi.mul(&rel);
            for i in 0..dy {
                for k in 0..du {
                    if (0..dx).any(|row| image.get(row, i * du + k) != 0) {
                        out.push(RightViolation::Balance { y: i, s, u: k });
                    }
                }
            }
        }
        for (r, (ur, xr)) in ring.u.right_action().iter().zip(self.x.action()).enumerate() {
            let lhs = self.psi.mul(&iy.kron(ur));
            let rhs = xr.mul(&self.psi);
            for i in 0..dy {
                for k in 0..du {
                    let c = i * du + k;
                    if (0..dx).any(|row| lhs.get(row, c) != rhs.get(row, c)) {
                        out.push(RightViolation::Linearity { r, y: i, u: k });
                    }
                }
            }
        }
        out
    }

    /// `ψ` descended to `Y ⊗_S U`.
    pub fn psi_bar(&self) -> Result<(TensorModule, ModuleMap)> {
        let t = tensor_right(&self.y, &self.ring.u)?;
        let m = self.psi.mul(&t.section);
        let map = ModuleMap::from_parts(t.module.clone(), self.x.clone(), m);
        Ok((t, map))
    }

    /// The right `T`-module on `X ⊕ Y`: `(x, y)·(r, u, s) = (x·r + ψ(y ⊗ u), y·s)`.
    pub fn to_t_module(&self) -> ModuleRep {
        let ring = &self.ring;
        let p = ring.p();
        let (dx, dy, du) = (self.x.dim(), self.y.dim(), ring.u.dim());
        let n = dx + dy;
        let mut action = Vec::with_capacity(ring.t.dim());
        for xr in self.x.action() {
            let mut m = FpMatrix::zeros(p, n, n);
            m.paste(0, 0, xr);
            action.push(m);
        }
        for k in 0..du {
            let mut block = FpMatrix::zeros(p, dx, dy);
            for i in 0..dy {
                for row in 0..dx {
                    block.set(row, i, self.psi.get(row, i * du + k));
                }
            }
            let mut m = FpMatrix::zeros(p, n, n);
            m.paste(0, dx, &block);
            action.push(m);
        }
        for ys in self.y.action() {
            let mut m = FpMatrix::zeros(p, n, n);
            m.paste(dx, dx, ys);
            action.push(m);
        }
        ModuleRep::from_parts(ring.t.clone(), Side::Right, n, action)
    }
}

/// `(X, Y)_ψ ⊗_T (A, B)_φ` as a vector space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorT {
    pub dim: usize,
    /// From `(X ⊗_k A) ⊕ (Y ⊗_k B)` onto the tensor product.
    pub projection: FpMatrix,
    pub xa: BalancedTensor,
    pub yb: BalancedTensor,
    /// Images of the generators `ψ(y ⊗ u) ⊗ a − y ⊗ φ(u ⊗ a)` in the balanced
    /// sum, one column per basis triple `(y, u, a)` in that nesting order.
    pub h: FpMatrix,
}

/// `((X ⊗_R A) ⊕ (Y ⊗_S B)) / H`, computed in two stages: the balanced
/// quotients first, then the quotient by the images of the `H` generators.
pub fn tensor_t(r: &RightTModule, c: &CommaObject) -> Result<TensorT> {
    if r.ring != c.ring {
        return Err(Error::AlgebraMismatch("tensor over T"));
    }
    let ring = &r.ring;
    let p = ring.p();
    let xa = tensor_over_algebra(&r.x, &c.a)?;
    let yb = tensor_over_algebra(&r.y, &c.b)?;
    let (dx, dy, du, da, db) = (r.x.dim(), r.y.dim(), ring.u.dim(), c.a.dim(), c.b.dim());
    let (n1, n2) = (xa.dim, yb.dim);
    let mut h = FpMatrix::zeros(p, n1 + n2, 0);
    for i in 0..dy {
        for k in 0..du {
            for j in 0..da {
                let mut left = vec![0u32; dx * da];
                for m in 0..dx {
                    left[m * da + j] = r.psi.get(m, i * du + k);
                }
                let mut right = vec![0u32; dy * db];
                for n in 0..db {
                    right[i * db + n] = c.phi.get(n, k * da + j);
                }
                let mut v = if n1 == 0 {
                    Vec::new()
                } else {
                    xa.projection.mul_vec(&left)
                };
                let w = if n2 == 0 {
                    Vec::new()
                } else {
                    yb.projection.mul_vec(&right)
                };
                v.extend(w.into_iter().map(|e| if e == 0 { 0 } else { p - e }));
                h = h.hstack(&FpMatrix::column_vector(p, &v));
            }
        }
    }
    let q = quotient_space(p, n1 + n2, &h);
    let projection = q.projection.mul(&xa.projection.block_diag(&yb.projection));
    Ok(TensorT {
        dim: q.projection.rows(),
        projection,
        xa,
        yb,
        h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{DualNumbers, A2};
    use crate::module::is_isomorphic;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn a2_p_is_indecomposable_projective() {
        let a2 = A2::new();
        let c = a2.comma();
        let p = c.p.to_t_module();
        assert!(p.validate().is_empty());
        let reg = regular_module(a2.ring.t(), Side::Left);
        let sum = direct_sum2(&p, &c.s_s.to_t_module()).unwrap();
        assert!(isomorphic(&reg, &sum, &limits()).unwrap());
    }

    #[test]
    fn inflations() {
        let a2 = A2::new();
        let lower = CommaObject::lower(a2.ring.clone(), a2.s_k.clone());
        let m = lower.to_t_module();
        assert!(m.action()[0].is_zero() && m.action()[1].is_zero());
        let upper = CommaObject::upper(a2.ring.clone(), a2.r_k.clone());
        let m = upper.to_t_module();
        assert!(m.action()[1].is_zero() && m.action()[2].is_zero());
    }

    #[test]
    fn round_trip_through_t_modules() {
        let a2 = A2::new();
        for c in a2.comma().all() {
            let m = c.to_t_module();
            let (back, witness) = CommaObject::from_t_module(a2.ring.clone(), &m).unwrap();
            assert!(witness.is_intertwiner() && witness.is_isomorphism());
            assert!(isomorphic(&back.to_t_module(), &m, &limits()).unwrap());
            assert!(back.validate().is_empty());
        }
        let reg = regular_module(a2.ring.t(), Side::Left);
        let (c, _) = CommaObject::from_t_module(a2.ring.clone(), &reg).unwrap();
        assert_eq!((c.a().dim(), c.b().dim()), (1, 2));
        let zero = CommaObject::zero(a2.ring.clone());
        let (z, _) = CommaObject::from_t_module(a2.ring.clone(), &zero.to_t_module()).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn functor_examples() {
        let a2 = A2::new();
        let c = a2.comma();
        let ring = &a2.ring;
        let p0b = functor_p(ring, &a2.ring.zero_r(), &a2.s_k).unwrap();
        assert_eq!(p0b.to_t_module(), c.s_s.to_t_module());
        let pk0 = functor_p(ring, &a2.r_k, &a2.ring.zero_s()).unwrap();
        assert!(isomorphic(&pk0.to_t_module(), &c.p.to_t_module(), &limits()).unwrap());
        let pkk = functor_p(ring, &a2.r_k, &a2.s_k).unwrap();
        assert!(isomorphic(&pkk.to_t_module(), &regular_module(ring.t(), Side::Left), &limits()).unwrap());
        let (qa, qb) = functor_q(&c.p);
        assert_eq!((qa.dim(), qb.dim()), (1, 1));
        let h0k = functor_h(ring, &a2.ring.zero_r(), &a2.s_k).unwrap();
        assert!(h0k.validate().is_empty());
        assert!(isomorphic(&h0k.to_t_module(), &c.p.to_t_module(), &limits()).unwrap());
        let hk0 = functor_h(ring, &a2.r_k, &a2.ring.zero_s()).unwrap();
        assert!(isomorphic(&hk0.to_t_module(), &c.s_r.to_t_module(), &limits()).unwrap());
        assert!(functor_h(ring, &ring.zero_r(), &ring.zero_s()).unwrap().is_zero());
    }

    #[test]
    fn functor_maps_are_comma_maps() {
        let d = DualNumbers::new();
        let ring = &d.ring;
        let reg = regular_module(ring.r(), Side::Left);
        for f in hom_space(&reg, &d.r_k).unwrap() {
            for g in hom_space(&d.s_k, &d.s_k).unwrap() {
                assert!(functor_p_map(ring, &f, &g).unwrap().is_valid());
                assert!(functor_h_map(ring, &f, &g).unwrap().is_valid());
            }
        }
    }

    #[test]
    fn hom_comma_matches_t_modules_on_a2() {
        let a2 = A2::new();
        let objs = a2.comma().all();
        for x in &objs {
            for y in &objs {
                let direct = hom_comma(x, y).unwrap();
                for m in &direct {
                    assert!(m.is_valid());
                    assert!(m.to_t_map().is_intertwiner());
                }
                assert_eq!(direct.len(), hom_dim(&x.to_t_module(), &y.to_t_module()).unwrap());
            }
        }
        let c = a2.comma();
        assert_eq!(hom_comma_dim(&c.p, &c.s_s).unwrap(), 0);
        assert_eq!(hom_comma_dim(&c.s_s, &c.p).unwrap(), 1);
    }

    #[test]
    fn hom_formula_examples() {
        let a2 = A2::new();
        let c = a2.comma();
        assert_eq!(hom_formula(HomKind::TargetUpper, &c.p, &c.s_r, &limits()).unwrap(), 1);
        assert_eq!(hom_formula(HomKind::SourceInduced, &c.p, &c.s_s, &limits()).unwrap(), 0);
        assert_eq!(hom_formula(HomKind::SourceRegular, &c.s_r, &c.p, &limits()).unwrap(), 0);
        assert!(matches!(
            hom_formula(HomKind::TargetUpper, &c.p, &c.p, &limits()),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn tilde_phi_examples() {
        let a2 = A2::new();
        let c = a2.comma();
        let (_, t) = c.p.tilde_phi().unwrap();
        assert!(t.is_isomorphism() && t.is_intertwiner());
        assert_eq!(c.s_r.tilde_phi_kernel().unwrap().module.dim(), 1);
        let (hom, t) = c.s_s.tilde_phi().unwrap();
        assert_eq!((hom.dim(), t.rank()), (1, 0));
    }

    #[test]
    fn invalid_phi_is_reported() {
        let d = DualNumbers::new();
        let reg = regular_module(d.ring.r(), Side::Left);
        // φ(u ⊗ x) = 1 breaks balance since u·x = 0.
        let phi = FpMatrix::from_rows(2, &[alloc::vec![0, 1]]).unwrap();
        let c = CommaObject::from_parts(d.ring.clone(), reg, d.s_k.clone(), phi);
        let v = c.validate();
        assert!(v.contains(&CommaViolation::Balance { u: 0, r: 1, a: 0 }));
    }

    #[test]
    fn tensor_t_examples() {
        let a2 = A2::new();
        let c = a2.comma();
        let s_right = regular_module(a2.ring.s(), Side::Right);
        let lower = RightTModule::lower(a2.ring.clone(), s_right);
        assert!(lower.validate().is_empty());
        assert_eq!(tensor_t(&lower, &c.p).unwrap().dim, 0);
        assert_eq!(tensor_t(&lower, &c.n).unwrap().dim, 1);
        let r_right = regular_module(a2.ring.r(), Side::Right);
        let upper = RightTModule::upper(a2.ring.clone(), r_right);
        for x in c.all() {
            let expected = tensor_over_algebra(upper.x(), x.a()).unwrap().dim;
            assert_eq!(tensor_t(&upper, &x).unwrap().dim, expected);
        }
    }

    #[test]
    fn right_t_module_is_a_module() {
        let d = DualNumbers::new();
        let s_right = regular_module(d.ring.s(), Side::Right);
        let ind = RightTModule::induced(d.ring.clone(), s_right).unwrap();
        assert!(ind.validate().is_empty());
        assert!(ind.to_t_module().validate().is_empty());
        assert!(is_isomorphic(&ind.to_t_module(), &ind.to_t_module(), &limits())
            .unwrap()
            .is_some());
    }
}
