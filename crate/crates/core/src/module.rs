//! Modules as action-matrix representations and the maps between them.
//!
//! A module over an algebra `A` of dimension `d` is a vector space `F_p^n`
//! together with one `n × n` matrix per basis element of `A`. Matrices act on
//! coordinate columns. Left modules satisfy `ρ(e_i)ρ(e_j) = ρ(e_i e_j)`; right
//! modules satisfy `ρ(e_j)ρ(e_i) = ρ(e_i e_j)`.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{combine, FDAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{add_mod, neg_mod, quotient_space, FpMatrix};
use crate::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionViolation {
    /// Action matrix `i` has the wrong shape or modulus.
    Shape { i: usize },
    /// The wrong number of action matrices.
    Count { expected: usize, found: usize },
    /// The unit does not act as the identity.
    Unit,
    /// The action of `e_i e_j` disagrees with the composite of the actions.
    Product { i: usize, j: usize },
}

impl fmt::Display for ActionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionViolation::Shape { i } => write!(f, "action matrix {i} has the wrong shape"),
            ActionViolation::Count { expected, found } => {
                write!(f, "expected {expected} action matrices, found {found}")
            }
            ActionViolation::Unit => write!(f, "unit does not act as the identity"),
            ActionViolation::Product { i, j } => {
                write!(f, "action is not multiplicative on basis pair ({i}, {j})")
            }
        }
    }
}

/// Checks the module axioms for a candidate action.
pub fn check_action(algebra: &FDAlgebra, side: Side, dim: usize, action: &[FpMatrix]) -> Vec<ActionViolation> {
    let d = algebra.dim();
    let p = algebra.p();
    if action.len() != d {
        return vec![ActionViolation::Count {
            expected: d,
            found: action.len(),
        }];
    }
    let mut out: Vec<ActionViolation> = action
        .iter()
        .enumerate()
        .filter(|(_, m)| m.rows() != dim || m.cols() != dim || m.p() != p)
        .map(|(i, _)| ActionViolation::Shape { i })
        .collect();
    if !out.is_empty() {
        return out;
    }
    if combine(p, dim, action, algebra.unit()) != FpMatrix::identity(p, dim) {
        out.push(ActionViolation::Unit);
    }
    for i in 0..d {
        for j in 0..d {
            let composite = match side {
                Side::Left => action[i].mul(&action[j]),
                Side::Right => action[j].mul(&action[i]),
            };
            let coeffs: Vec<u32> = (0..d).map(|k| algebra.structure_constant(i, j, k)).collect();
            if composite != combine(p, dim, action, &coeffs) {
                out.push(ActionViolation::Product { i, j });
            }
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModuleRep {
    algebra: Arc<FDAlgebra>,
    side: Side,
    dim: usize,
    action: Vec<FpMatrix>,
}

impl fmt::Debug for ModuleRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModuleRep")
            .field("side", &self.side)
            .field("dim", &self.dim)
            .field("action", &self.action)
            .finish()
    }
}

impl ModuleRep {
    /// Builds a module, checking the module axioms.
    pub fn new(algebra: Arc<FDAlgebra>, side: Side, dim: usize, action: Vec<FpMatrix>) -> Result<Self> {
        if let Some(v) = check_action(&algebra, side, dim, &action).first() {
            return Err(Error::InvalidModule(format!("{v}")));
        }
        Ok(Self::from_parts(algebra, side, dim, action))
    }

    /// Builds a module without checking the axioms; see [`ModuleRep::validate`].
    pub fn from_parts(algebra: Arc<FDAlgebra>, side: Side, dim: usize, action: Vec<FpMatrix>) -> Self {
        Self {
            algebra,
            side,
            dim,
            action,
        }
    }

    pub fn zero(algebra: Arc<FDAlgebra>, side: Side) -> Self {
        let p = algebra.p();
        let action = (0..algebra.dim()).map(|_| FpMatrix::zeros(p, 0, 0)).collect();
        Self::from_parts(algebra, side, 0, action)
    }

    /// The module on which every basis element acts by the given scalar
    /// multiple of the identity; useful for semisimple fixtures.
    pub fn scalar(algebra: Arc<FDAlgebra>, side: Side, dim: usize, scalars: &[u32]) -> Result<Self> {
        let p = algebra.p();
        let action = scalars.iter().map(|&c| FpMatrix::identity(p, dim).scale(c)).collect();
        Self::new(algebra, side, dim, action)
    }

    pub fn validate(&self) -> Vec<ActionViolation> {
        check_action(&self.algebra, self.side, self.dim, &self.action)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.algebra.p()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn side(&self) -> Side {
        self.side
    }

    pub fn algebra(&self) -> &Arc<FDAlgebra> {
        &self.algebra
    }

    pub fn action(&self) -> &[FpMatrix] {
        &self.action
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    /// Matrix by which an arbitrary algebra element acts.
    pub fn act(&self, element: &[u32]) -> FpMatrix {
        combine(self.p(), self.dim, &self.action, element)
    }

    /// Same algebra (structurally) and same side.
    pub fn compatible(&self, other: &ModuleRep) -> bool {
        self.side == other.side && (Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra)
    }

    pub(crate) fn ensure_compatible(&self, other: &ModuleRep, ctx: &'static str) -> Result<()> {
        if self.side != other.side {
            return Err(Error::SideMismatch(ctx));
        }
        if !(Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra) {
            return Err(Error::AlgebraMismatch(ctx));
        }
        Ok(())
    }

    /// Deterministic byte encoding of the module data.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&self.p().to_le_bytes());
        out.push(match self.side {
            Side::Left => 0,
            Side::Right => 1,
        });
        out.extend_from_slice(&(self.algebra.dim() as u64).to_le_bytes());
        out.extend_from_slice(&(self.dim as u64).to_le_bytes());
        for m in &self.action {
            for &e in m.entries() {
                out.extend_from_slice(&e.to_le_bytes());
            }
        }
        out
    }
}

/// A homomorphism `source → target`, stored as a `target.dim × source.dim` matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleMap {
    source: ModuleRep,
    target: ModuleRep,
    matrix: FpMatrix,
}

impl ModuleMap {
    /// Checked construction: shapes must agree and the matrix must intertwine.
    pub fn new(source: ModuleRep, target: ModuleRep, matrix: FpMatrix) -> Result<Self> {
        source.ensure_compatible(&target, "module map")?;
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::InvalidMap(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        let map = Self::from_parts(source, target, matrix);
        if let Some(i) = map.intertwining_failure() {
            return Err(Error::InvalidMap(format!(
                "matrix does not intertwine the action of basis element {i}"
            )));
        }
        Ok(map)
    }

    pub fn from_parts(source: ModuleRep, target: ModuleRep, matrix: FpMatrix) -> Self {
        Self { source, target, matrix }
    }

    pub fn identity(m: &ModuleRep) -> Self {
        Self::from_parts(m.clone(), m.clone(), FpMatrix::identity(m.p(), m.dim()))
    }

    pub fn zero(source: &ModuleRep, target: &ModuleRep) -> Self {
        Self::from_parts(
            source.clone(),
            target.clone(),
            FpMatrix::zeros(source.p(), target.dim(), source.dim()),
        )
    }

    pub fn source(&self) -> &ModuleRep {
        &self.source
    }

    pub fn target(&self) -> &ModuleRep {
        &self.target
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.matrix
    }

    /// First basis element whose action is not intertwined, if any.
    pub fn intertwining_failure(&self) -> Option<usize> {
        let s = self.source.action();
        let t = self.target.action();
        (0..s.len()).find(|&i| t[i].mul(&self.matrix) != self.matrix.mul(&s[i]))
    }

    pub fn is_intertwiner(&self) -> bool {
        self.matrix.rows() == self.target.dim()
            && self.matrix.cols() == self.source.dim()
            && self.intertwining_failure().is_none()
    }

    /// `self ∘ first`
    pub fn after(&self, first: &ModuleMap) -> Self {
        Self::from_parts(
            first.source.clone(),
            self.target.clone(),
            self.matrix.mul(&first.matrix),
        )
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.dim() == self.target.dim() && self.is_injective()
    }
}

/// A submodule together with its inclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submodule {
    pub module: ModuleRep,
    pub inclusion: ModuleMap,
}

/// A quotient module together with the canonical projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientModule {
    pub module: ModuleRep,
    pub projection: ModuleMap,
}

/// Linear equations over `F_p` collected row by row.
pub(crate) struct Equations {
    p: u32,
    nvars: usize,
    rows: Vec<u32>,
    count: usize,
}

impl Equations {
    pub(crate) fn new(p: u32, nvars: usize) -> Self {
        Self {
            p,
            nvars,
            rows: Vec::new(),
            count: 0,
        }
    }

    pub(crate) fn push(&mut self, row: Vec<u32>) {
        debug_assert_eq!(row.len(), self.nvars);
        if row.iter().any(|&x| x != 0) {
            self.rows.extend(row);
            self.count += 1;
        }
    }

    /// Adds the entries of `A·X − X·B = 0` where `X` is the `rows × cols`
    /// block of unknowns starting at `offset` (row-major).
    pub(crate) fn sylvester(&mut self, offset: usize, rows: usize, cols: usize, a: &FpMatrix, b: &FpMatrix) {
        let p = self.p;
        for r in 0..rows {
            for c in 0..cols {
                let mut eq = vec![0u32; self.nvars];
                for k in 0..rows {
                    let v = a.get(r, k);
                    if v != 0 {
                        let idx = offset + k * cols + c;
                        eq[idx] = add_mod(eq[idx], v, p);
                    }
                }
                for k in 0..cols {
                    let v = b.get(k, c);
                    if v != 0 {
                        let idx = offset + r * cols + k;
                        eq[idx] = add_mod(eq[idx], neg_mod(v, p), p);
                    }
                }
                self.push(eq);
            }
        }
    }

    pub(crate) fn matrix(&self) -> FpMatrix {
        FpMatrix::from_raw(self.p, self.count, self.nvars, self.rows.clone())
    }

    /// Solution space, one basis vector per column.
    pub(crate) fn kernel(&self) -> FpMatrix {
        if self.count == 0 {
            return FpMatrix::identity(self.p, self.nvars);
        }
        self.matrix().kernel_basis()
    }
}

pub(crate) fn unflatten(p: u32, rows: usize, cols: usize, v: &[u32]) -> FpMatrix {
    FpMatrix::from_raw(p, rows, cols, v.to_vec())
}

/// A basis of `Hom(m, n)`: all intertwiners `X` with `ρ_n(e_i) X = X ρ_m(e_i)`.
pub fn hom_space(m: &ModuleRep, n: &ModuleRep) -> Result<Vec<ModuleMap>> {
    m.ensure_compatible(n, "hom_space")?;
    let (dm, dn) = (m.dim(), n.dim());
    let nvars = dm * dn;
    if nvars == 0 {
        return Ok(Vec::new());
    }
    let mut eqs = Equations::new(m.p(), nvars);
    for (a, b) in n.action().iter().zip(m.action()) {
        eqs.sylvester(0, dn, dm, a, b);
    }
    let ker = eqs.kernel();
    Ok((0..ker.cols())
        .map(|c| ModuleMap::from_parts(m.clone(), n.clone(), unflatten(m.p(), dn, dm, &ker.column(c))))
        .collect())
}

pub fn hom_dim(m: &ModuleRep, n: &ModuleRep) -> Result<usize> {
    hom_space(m, n).map(|b| b.len())
}

/// Linear combination of maps sharing source and target.
pub fn combine_maps(source: &ModuleRep, target: &ModuleRep, basis: &[ModuleMap], coeffs: &[u32]) -> ModuleMap {
    let p = source.p();
    let mut acc = FpMatrix::zeros(p, target.dim(), source.dim());
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            acc = acc.add(&b.matrix().scale(c));
        }
    }
    ModuleMap::from_parts(source.clone(), target.clone(), acc)
}

/// Calls `f` on every coefficient vector in `F_p^len` in lexicographic order
/// (last coordinate fastest) until it returns `false`.
pub fn for_each_vector(p: u32, len: usize, mut f: impl FnMut(&[u32]) -> bool) {
    let mut v = vec![0u32; len];
    loop {
        if !f(&v) {
            return;
        }
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            v[i] += 1;
            if v[i] < p {
                break;
            }
            v[i] = 0;
        }
    }
}

pub(crate) fn checked_count(p: u32, exponent: usize, cap: usize, what: &'static str) -> Result<usize> {
    let mut total: usize = 1;
    for _ in 0..exponent {
        total = total
            .checked_mul(p as usize)
            .filter(|&t| t <= cap)
            .ok_or(Error::EnumerationCap { what, cap })?;
    }
    Ok(total)
}

/// Direct sum with its structure maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectSum {
    pub module: ModuleRep,
    pub injections: Vec<ModuleMap>,
    pub projections: Vec<ModuleMap>,
}

/// Block-diagonal direct sum. An empty list needs the algebra and side
/// supplied through `zero_of`.
pub fn direct_sum_with(zero_of: &ModuleRep, ms: &[ModuleRep]) -> Result<DirectSum> {
    for m in ms {
        zero_of.ensure_compatible(m, "direct_sum")?;
    }
    let p = zero_of.p();
    let total: usize = ms.iter().map(ModuleRep::dim).sum();
    let d = zero_of.algebra().dim();
    let mut action = vec![FpMatrix::zeros(p, total, total); d];
    let mut offset = 0;
    for m in ms {
        for (i, a) in action.iter_mut().enumerate() {
            a.paste(offset, offset, &m.action()[i]);
        }
        offset += m.dim();
    }
    let sum = ModuleRep::from_parts(zero_of.algebra().clone(), zero_of.side(), total, action);
    let mut injections = Vec::with_capacity(ms.len());
    let mut projections = Vec::with_capacity(ms.len());
    let mut offset = 0;
    for m in ms {
        let mut inj = FpMatrix::zeros(p, total, m.dim());
        inj.paste(offset, 0, &FpMatrix::identity(p, m.dim()));
        projections.push(ModuleMap::from_parts(sum.clone(), m.clone(), inj.transpose()));
        injections.push(ModuleMap::from_parts(m.clone(), sum.clone(), inj));
        offset += m.dim();
    }
    Ok(DirectSum {
        module: sum,
        injections,
        projections,
    })
}

/// Direct sum of a nonempty list.
pub fn direct_sum(ms: &[ModuleRep]) -> Result<DirectSum> {
    let first = ms
        .first()
        .ok_or_else(|| Error::Malformed("direct_sum of an empty list needs an algebra; use direct_sum_with".into()))?;
    direct_sum_with(first, ms)
}

pub fn direct_sum2(a: &ModuleRep, b: &ModuleRep) -> Result<ModuleRep> {
    direct_sum_with(a, &[a.clone(), b.clone()]).map(|s| s.module)
}

/// `m^k`
pub fn power(m: &ModuleRep, k: usize) -> ModuleRep {
    let copies = vec![m.clone(); k];
    direct_sum_with(m, &copies).expect("copies are compatible").module
}

/// Direct sum of two maps `f ⊕ g`.
pub fn map_sum(f: &ModuleMap, g: &ModuleMap) -> Result<ModuleMap> {
    let src = direct_sum2(f.source(), g.source())?;
    let tgt = direct_sum2(f.target(), g.target())?;
    Ok(ModuleMap::from_parts(src, tgt, f.matrix().block_diag(g.matrix())))
}

/// Submodule spanned by the columns of `basis`, which must be invariant.
pub fn invariant_submodule(m: &ModuleRep, basis: &FpMatrix) -> Result<Submodule> {
    let basis = basis.column_space_basis();
    let r = basis.cols();
    let p = m.p();
    let left = if r == 0 {
        FpMatrix::zeros(p, 0, m.dim())
    } else {
        basis.left_inverse().expect("independent columns")
    };
    let mut action = Vec::with_capacity(m.action().len());
    for a in m.action() {
        let image = a.mul(&basis);
        if r > 0 && !basis.spans(&image) {
            return Err(Error::InvalidModule("subspace is not invariant".into()));
        }
        action.push(left.mul(&image));
    }
    let sub = ModuleRep::from_parts(m.algebra().clone(), m.side(), r, action);
    let inclusion = ModuleMap::from_parts(sub.clone(), m.clone(), basis);
    Ok(Submodule { module: sub, inclusion })
}

/// Smallest invariant subspace containing the given columns.
pub fn generated_subspace(m: &ModuleRep, vectors: &FpMatrix) -> FpMatrix {
    let mut span = vectors.column_space_basis();
    loop {
        let mut grown = span.clone();
        for a in m.action() {
            grown = grown.hstack(&a.mul(&span));
        }
        let next = grown.column_space_basis();
        if next.cols() == span.cols() {
            return span;
        }
        span = next;
    }
}

pub fn generated_submodule(m: &ModuleRep, vectors: &FpMatrix) -> Submodule {
    invariant_submodule(m, &generated_subspace(m, vectors)).expect("generated subspace is invariant")
}

/// Quotient of `m` by the invariant subspace spanned by the columns of `sub`.
pub fn quotient_module(m: &ModuleRep, sub: &FpMatrix) -> Result<QuotientModule> {
    let p = m.p();
    let q = quotient_space(p, m.dim(), sub);
    let mut action = Vec::with_capacity(m.action().len());
    for a in m.action() {
        if sub.cols() > 0 && !q.projection.mul(a).mul(sub).is_zero() {
            return Err(Error::InvalidModule("quotient by a non-invariant subspace".into()));
        }
        action.push(q.projection.mul(a).mul(&q.section));
    }
    let module = ModuleRep::from_parts(m.algebra().clone(), m.side(), q.projection.rows(), action);
    let projection = ModuleMap::from_parts(m.clone(), module.clone(), q.projection);
    Ok(QuotientModule { module, projection })
}

/// Image, kernel and cokernel of a module map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapDecomposition {
    pub image: Submodule,
    pub kernel: Submodule,
    pub cokernel: QuotientModule,
}

pub fn image_kernel_cokernel(f: &ModuleMap) -> Result<MapDecomposition> {
    let image = invariant_submodule(f.target(), f.matrix())?;
    let kernel = invariant_submodule(f.source(), &f.matrix().kernel_basis())?;
    let cokernel = quotient_module(f.target(), f.matrix())?;
    Ok(MapDecomposition {
        image,
        kernel,
        cokernel,
    })
}

pub fn image(f: &ModuleMap) -> Result<Submodule> {
    invariant_submodule(f.target(), f.matrix())
}

pub fn kernel(f: &ModuleMap) -> Result<Submodule> {
    invariant_submodule(f.source(), &f.matrix().kernel_basis())
}

pub fn cokernel(f: &ModuleMap) -> Result<QuotientModule> {
    quotient_module(f.target(), f.matrix())
}

/// Sum of the images of all homomorphisms from the generators into `m`.
pub fn trace_of(generators: &[ModuleRep], m: &ModuleRep) -> Result<Submodule> {
    let p = m.p();
    let mut span = FpMatrix::zeros(p, m.dim(), 0);
    for g in generators {
        for f in hom_space(g, m)? {
            span = span.hstack(f.matrix());
        }
    }
    invariant_submodule(m, &span)
}

/// `x ∈ Gen t`, decided by comparing the trace of `t` in `x` with `x`.
pub fn gen_member(t: &ModuleRep, x: &ModuleRep) -> Result<bool> {
    Ok(trace_of(core::slice::from_ref(t), x)?.module.dim() == x.dim())
}

/// An isomorphism `m → n` if one exists.
///
/// Searches the Hom space exhaustively; fails with [`Error::IsoCapExceeded`]
/// rather than guessing when the space is larger than `limits.iso_cap`.
pub fn is_isomorphic(m: &ModuleRep, n: &ModuleRep, limits: &Limits) -> Result<Option<ModuleMap>> {
    m.ensure_compatible(n, "is_isomorphic")?;
    if m.dim() != n.dim() {
        return Ok(None);
    }
    if m.dim() == 0 {
        return Ok(Some(ModuleMap::zero(m, n)));
    }
    if m == n {
        return Ok(Some(ModuleMap::identity(m)));
    }
    let basis = hom_space(m, n)?;
    let h = basis.len();
    if h == 0 || h != hom_dim(m, m)? || h != hom_dim(n, n)? || hom_dim(n, m)? != h {
        return Ok(None);
    }
    if h > limits.iso_cap {
        return Err(Error::IsoCapExceeded {
            hom_dim: h,
            cap: limits.iso_cap,
        });
    }
    let mut found = None;
    // Normalizing the first nonzero coefficient to 1 skips scalar multiples.
    for_each_vector(m.p(), h, |coeffs| {
        let lead = coeffs.iter().find(|&&c| c != 0);
        if lead != Some(&1) {
            return true;
        }
        let f = combine_maps(m, n, &basis, coeffs);
        if f.matrix().is_invertible() {
            found = Some(f);
            return false;
        }
        true
    });
    Ok(found)
}

pub fn isomorphic(m: &ModuleRep, n: &ModuleRep, limits: &Limits) -> Result<bool> {
    is_isomorphic(m, n, limits).map(|w| w.is_some())
}

/// Middle terms `E` of extensions `0 → n → E → m → 0`, up to isomorphism.
#[derive(Clone, Debug)]
pub struct Extensions {
    pub middles: Vec<ModuleRep>,
    /// Dimension of the extension group (cocycles modulo coboundaries).
    pub ext_dim: usize,
    /// Set when more than `limits.ext_cap` cocycle classes would be needed.
    pub truncated: bool,
}

/// Enumerates extension classes by solving for cocycles `c` such that
/// `ρ_E(a) = [[ρ_n(a), c(a)], [0, ρ_m(a)]]` is a module structure, modulo
/// coboundaries `c(a) = ρ_n(a)X − Xρ_m(a)`. Middle terms are deduplicated up
/// to isomorphism; the split extension comes first.
pub fn extension_middle_terms(m: &ModuleRep, n: &ModuleRep, limits: &Limits) -> Result<Extensions> {
    m.ensure_compatible(n, "extension_middle_terms")?;
    let alg = m.algebra().clone();
    let p = alg.p();
    let d = alg.dim();
    let (dm, dn) = (m.dim(), n.dim());
    let block = dn * dm;
    let nvars = d * block;
    if block == 0 {
        return Ok(Extensions {
            middles: vec![direct_sum2(n, m)?],
            ext_dim: 0,
            truncated: false,
        });
    }
    let mut eqs = Equations::new(p, nvars);
    // Top-right block of the product rule, linear in c.
    for i in 0..d {
        for j in 0..d {
            let (first, second) = match m.side() {
                Side::Left => (i, j),
                Side::Right => (j, i),
            };
            // ρ_n(e_first) c_second + c_first ρ_m(e_second) − Σ_k mul_ijk c_k = 0
            for r in 0..dn {
                for c in 0..dm {
                    let mut eq = vec![0u32; nvars];
                    let an = &n.action()[first];
                    for k in 0..dn {
                        let v = an.get(r, k);
                        if v != 0 {
                            let idx = second * block + k * dm + c;
                            eq[idx] = add_mod(eq[idx], v, p);
                        }
                    }
                    let am = &m.action()[second];
                    for k in 0..dm {
                        let v = am.get(k, c);
                        if v != 0 {
                            let idx = first * block + r * dm + k;
                            eq[idx] = add_mod(eq[idx], v, p);
                        }
                    }
                    for k in 0..d {
                        let v = alg.structure_constant(i, j, k);
                        if v != 0 {
                            let idx = k * block + r * dm + c;
                            eq[idx] = add_mod(eq[idx], neg_mod(v, p), p);
                        }
                    }
                    eqs.push(eq);
                }
            }
        }
    }
    // The unit acts by the identity, so its off-diagonal block vanishes.
    for r in 0..dn {
        for c in 0..dm {
            let mut eq = vec![0u32; nvars];
            for (i, &u) in alg.unit().iter().enumerate() {
                if u != 0 {
                    eq[i * block + r * dm + c] = u;
                }
            }
            eqs.push(eq);
        }
    }
    let cocycles = eqs.kernel();
    let mut coboundaries = FpMatrix::zeros(p, nvars, 0);
    for r in 0..dn {
        for c in 0..dm {
            let mut x = FpMatrix::zeros(p, dn, dm);
            x.set(r, c, 1);
            let mut v = Vec::with_capacity(nvars);
            for i in 0..d {
                let cb = n.action()[i].mul(&x).sub(&x.mul(&m.action()[i]));
                v.extend_from_slice(cb.entries());
            }
            coboundaries = coboundaries.hstack(&FpMatrix::column_vector(p, &v));
        }
    }
    let q = quotient_space(p, nvars, &coboundaries);
    let projected = q.projection.mul(&cocycles);
    let (_, reps) = projected.rref();
    let reps = cocycles.select_columns(&reps);
    let ext_dim = reps.cols();

    let mut middles: Vec<ModuleRep> = Vec::new();
    let mut truncated = false;
    let mut visited = 0usize;
    let mut failure = None;
    for_each_vector(p, ext_dim, |coeffs| {
        if visited >= limits.ext_cap {
            truncated = true;
            return false;
        }
        visited += 1;
        let cocycle = reps.mul_vec_or_zero(coeffs, nvars);
        let action = (0..d)
            .map(|i| {
                let mut a = FpMatrix::zeros(p, dn + dm, dn + dm);
                a.paste(0, 0, &n.action()[i]);
                a.paste(dn, dn, &m.action()[i]);
                a.paste(0, dn, &unflatten(p, dn, dm, &cocycle[i * block..(i + 1) * block]));
                a
            })
            .collect();
        let e = ModuleRep::from_parts(alg.clone(), m.side(), dn + dm, action);
        for known in &middles {
            match isomorphic(known, &e, limits) {
                Ok(true) => return true,
                Ok(false) => {}
                Err(err) => {
                    failure = Some(err);
                    return false;
                }
            }
        }
        middles.push(e);
        true
    });
    if let Some(err) = failure {
        return Err(err);
    }
    Ok(Extensions {
        middles,
        ext_dim,
        truncated,
    })
}

impl FpMatrix {
    /// `self · coeffs`, or the zero vector of length `rows` when there are no columns.
    pub(crate) fn mul_vec_or_zero(&self, coeffs: &[u32], rows: usize) -> Vec<u32> {
        if self.cols() == 0 {
            return vec![0; rows];
        }
        self.mul_vec(coeffs)
    }
}

/// Every submodule of `m`, as basis matrices in canonical (RREF-derived) form.
///
/// Grows the lattice from `0` by adding cyclic submodules; exhaustive over
/// all vectors, so only meant for small modules.
pub fn all_submodules(m: &ModuleRep, limits: &Limits) -> Result<Vec<FpMatrix>> {
    let p = m.p();
    let n = m.dim();
    let count = checked_count(p, n, limits.enumeration_cap, "vectors of a module")?;
    let mut vectors = Vec::with_capacity(count);
    for_each_vector(p, n, |v| {
        if v.iter().any(|&x| x != 0) {
            vectors.push(v.to_vec());
        }
        true
    });
    let canon = |basis: &FpMatrix| -> FpMatrix {
        let (r, piv) = basis.transpose().rref();
        r.submatrix(0..piv.len(), 0..n).transpose()
    };
    let mut found: Vec<FpMatrix> = vec![FpMatrix::zeros(p, n, 0)];
    let mut frontier = found.clone();
    while let Some(current) = frontier.pop() {
        for v in &vectors {
            let grown = generated_subspace(m, &current.hstack(&FpMatrix::column_vector(p, v)));
            if grown.cols() == current.cols() {
                continue;
            }
            let c = canon(&grown);
            if !found.contains(&c) {
                if found.len() >= limits.enumeration_cap {
                    return Err(Error::EnumerationCap {
                        what: "submodules",
                        cap: limits.enumeration_cap,
                    });
                }
                found.push(c.clone());
                frontier.push(c);
            }
        }
    }
    Ok(found)
}

/// Checks that `sub` spans an invariant subspace of `m`.
pub fn is_invariant(m: &ModuleRep, sub: &FpMatrix) -> bool {
    m.action().iter().all(|a| sub.spans(&a.mul(sub)))
}
