//! Brute-force reference computations, written against raw action matrices
//! with their own elimination so they share no code with the library.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::HashSet;

use commacat_core::ModuleRep;

pub type Mat = Vec<Vec<u32>>;

/// A module as plain data: one `dim × dim` matrix per algebra basis element,
/// acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raw {
    pub p: u32,
    pub dim: usize,
    pub act: Vec<Mat>,
}

impl From<&ModuleRep> for Raw {
    fn from(m: &ModuleRep) -> Self {
        Raw {
            p: m.p(),
            dim: m.dim(),
            act: m.action().iter().map(|a| a.to_rows()).collect(),
        }
    }
}

fn inv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let (mut b, mut e) = (a as u64 % p as u64, p as u64 - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Row reduction in place; returns pivot columns.
pub fn rref(rows: &mut [Vec<u32>], ncols: usize, p: u32) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let f = inv(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = (*x as u64 * f as u64 % p as u64) as u32;
        }
        for k in 0..rows.len() {
            if k != r && rows[k][c] != 0 {
                let f = rows[k][c];
                for j in 0..ncols {
                    let sub = (f as u64 * rows[r][j] as u64 % p as u64) as u32;
                    rows[k][j] = (rows[k][j] + p - sub) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(vectors: &[Vec<u32>], len: usize, p: u32) -> usize {
    let mut rows = vectors.to_vec();
    rref(&mut rows, len, p).len()
}

/// Basis of `{v : rows · v = 0}`.
pub fn nullspace(rows: &[Vec<u32>], ncols: usize, p: u32) -> Vec<Vec<u32>> {
    let mut r = rows.to_vec();
    let pivots = rref(&mut r, ncols, p);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0; ncols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - r[i][f]) % p;
            }
            v
        })
        .collect()
}

pub fn mul(a: &Mat, b: &Mat, inner: usize, cols: usize, p: u32) -> Mat {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| ((0..inner).map(|k| row[k] as u64 * b[k][c] as u64).sum::<u64>() % p as u64) as u32)
                .collect()
        })
        .collect()
}

pub fn apply(a: &Mat, v: &[u32], p: u32) -> Vec<u32> {
    a.iter()
        .map(|row| (row.iter().zip(v).map(|(&x, &y)| x as u64 * y as u64).sum::<u64>() % p as u64) as u32)
        .collect()
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Basis of `Hom(m, n)` as `dim n × dim m` matrices: `X m_i = n_i X`.
pub fn hom_basis(m: &Raw, n: &Raw) -> Vec<Mat> {
    let (dm, dn, p) = (m.dim, n.dim, m.p);
    let vars = dm * dn;
    if vars == 0 {
        return Vec::new();
    }
    let mut eqs = Vec::new();
    for (mi, ni) in m.act.iter().zip(&n.act) {
        for r in 0..dn {
            for c in 0..dm {
                let mut row = vec![0u32; vars];
                for k in 0..dm {
                    row[r * dm + k] = (row[r * dm + k] + mi[k][c]) % p;
                }
                for k in 0..dn {
                    row[k * dm + c] = (row[k * dm + c] + p - ni[r][k]) % p;
                }
                eqs.push(row);
            }
        }
    }
    nullspace(&eqs, vars, p)
        .into_iter()
        .map(|v| v.chunks(dm).map(<[u32]>::to_vec).collect())
        .collect()
}

pub fn hom_dim(m: &Raw, n: &Raw) -> usize {
    hom_basis(m, n).len()
}

/// Every element of `Hom(m, n)`.
pub fn hom_elements(m: &Raw, n: &Raw) -> Vec<Mat> {
    let basis = hom_basis(m, n);
    let p = m.p;
    let zero: Mat = vec![vec![0; m.dim]; n.dim];
    let mut out = vec![zero];
    for b in &basis {
        let mut next = Vec::with_capacity(out.len() * p as usize);
        for x in &out {
            for c in 0..p {
                let mut y = x.clone();
                for (yr, br) in y.iter_mut().zip(b) {
                    for (a, &bb) in yr.iter_mut().zip(br) {
                        *a = (*a + c * bb) % p;
                    }
                }
                next.push(y);
            }
        }
        out = next;
    }
    out
}

fn columns(m: &Mat, rows: usize, cols: usize) -> Vec<Vec<u32>> {
    (0..cols).map(|c| (0..rows).map(|r| m[r][c]).collect()).collect()
}

/// `x ∈ Gen t` by searching for `t^n → x` onto, `n ≤ dim x`.
pub fn gen_member(t: &Raw, x: &Raw) -> bool {
    if x.dim == 0 {
        return true;
    }
    let maps: Vec<Vec<Vec<u32>>> = hom_elements(t, x)
        .into_iter()
        .map(|f| columns(&f, x.dim, t.dim))
        .filter(|cols| cols.iter().any(|c| c.iter().any(|&v| v != 0)))
        .collect();
    fn search(maps: &[Vec<Vec<u32>>], start: usize, left: usize, acc: &mut Vec<Vec<u32>>, dim: usize, p: u32) -> bool {
        if rank(acc, dim, p) == dim {
            return true;
        }
        if left == 0 {
            return false;
        }
        for i in start..maps.len() {
            let n = acc.len();
            acc.extend(maps[i].iter().cloned());
            if search(maps, i, left - 1, acc, dim, p) {
                return true;
            }
            acc.truncate(n);
        }
        false
    }
    search(&maps, 0, x.dim, &mut Vec::new(), x.dim, x.p)
}

/// `x ∈ D_σ` for `σ: p1 → p0`: every map `p1 → x` factors through `σ`.
pub fn dsigma_member(p1: &Raw, p0: &Raw, sigma: &Mat, x: &Raw) -> bool {
    let reachable: HashSet<Mat> = hom_elements(p0, x)
        .iter()
        .map(|g| mul(g, sigma, p0.dim, p1.dim, x.p))
        .collect();
    hom_elements(p1, x).iter().all(|f| {
        // maps out of a zero module are all the empty matrix
        reachable.contains(f) || f.iter().all(|r| r.iter().all(|&v| v == 0))
    })
}

/// All subspaces of `F_p^n` stable under the action, each as a basis.
pub fn submodules(m: &Raw) -> Vec<Vec<Vec<u32>>> {
    let (n, p) = (m.dim, m.p);
    let mut seen: HashSet<Vec<Vec<u32>>> = HashSet::new();
    let mut frontier: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
    seen.insert(Vec::new());
    let all: Vec<Vec<u32>> = (0..(p as usize).pow(n as u32))
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let d = (k % p as usize) as u32;
                    k /= p as usize;
                    d
                })
                .collect()
        })
        .collect();
    while let Some(w) = frontier.pop() {
        for v in &all {
            let mut rows = w.clone();
            rows.push(v.clone());
            let piv = rref(&mut rows, n, p);
            rows.truncate(piv.len());
            if rows.len() > w.len() && seen.insert(rows.clone()) {
                frontier.push(rows);
            }
        }
    }
    let mut out: Vec<Vec<Vec<u32>>> = seen
        .into_iter()
        .filter(|w| {
            w.iter().all(|v| {
                m.act.iter().all(|a| {
                    let img = apply(a, v, p);
                    let mut rows = w.clone();
                    rows.push(img);
                    rank(&rows, n, p) == w.len()
                })
            })
        })
        .collect();
    out.sort();
    out
}

/// Coordinates of `v` in the basis given by the columns of `b`.
fn coords(basis: &[Vec<u32>], v: &[u32], p: u32) -> Vec<u32> {
    let k = basis.len();
    let n = v.len();
    let mut rows: Vec<Vec<u32>> = (0..n)
        .map(|r| {
            let mut row: Vec<u32> = basis.iter().map(|b| b[r]).collect();
            row.push(v[r]);
            row
        })
        .collect();
    let piv = rref(&mut rows, k + 1, p);
    assert!(!piv.contains(&k), "vector outside the span");
    let mut x = vec![0; k];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = rows[i][k];
    }
    x
}

/// The submodule on `w` and the quotient `m / w`.
pub fn split(m: &Raw, w: &[Vec<u32>]) -> (Raw, Raw) {
    let (n, p) = (m.dim, m.p);
    let mut basis: Vec<Vec<u32>> = w.to_vec();
    for i in 0..n {
        let e = unit(n, i);
        let mut rows = basis.clone();
        rows.push(e.clone());
        if rank(&rows, n, p) > basis.len() {
            basis.push(e);
        }
    }
    let k = w.len();
    let mut sub = Vec::new();
    let mut quo = Vec::new();
    for a in &m.act {
        let images: Vec<Vec<u32>> = basis.iter().map(|b| coords(&basis, &apply(a, b, p), p)).collect();
        sub.push((0..k).map(|r| (0..k).map(|c| images[c][r]).collect()).collect());
        quo.push((k..n).map(|r| (k..n).map(|c| images[c][r]).collect()).collect());
    }
    (
        Raw { p, dim: k, act: sub },
        Raw {
            p,
            dim: n - k,
            act: quo,
        },
    )
}

/// `dim (x ⊗_A m)` for a right module `x` and a left module `m`, as the
/// quotient of `x ⊗ m` by `x·e_i ⊗ m − x ⊗ e_i·m` over all basis triples.
pub fn tensor_dim(x: &Raw, m: &Raw) -> usize {
    let (dx, dm, p) = (x.dim, m.dim, x.p);
    let len = dx * dm;
    if len == 0 {
        return 0;
    }
    let mut rels = Vec::new();
    for (xa, ma) in x.act.iter().zip(&m.act) {
        for b in 0..dx {
            for c in 0..dm {
                let xb = apply(xa, &unit(dx, b), p);
                let mc = apply(ma, &unit(dm, c), p);
                let mut v = vec![0u32; len];
                for i in 0..dx {
                    v[i * dm + c] = (v[i * dm + c] + xb[i]) % p;
                }
                for j in 0..dm {
                    v[b * dm + j] = (v[b * dm + j] + p - mc[j]) % p;
                }
                rels.push(v);
            }
        }
    }
    len - rank(&rels, len, p)
}

/// A family given by an intrinsic predicate, evaluated by brute force.
#[derive(Clone, Debug)]
pub enum Fam {
    Zero,
    All,
    Gen(Raw),
    /// No nonzero map from any universe member of the inner family.
    PerpRight(Box<Fam>, Vec<Raw>),
    /// No nonzero map into any universe member of the inner family.
    PerpLeft(Box<Fam>, Vec<Raw>),
    /// Comma families over `A2` with `C`, `D` each all or zero, decided from
    /// ranks of the idempotent and arrow actions.
    A2Comma {
        kind: &'static str,
        c_all: bool,
        d_all: bool,
    },
}

impl Fam {
    pub fn member(&self, x: &Raw) -> bool {
        match self {
            Fam::Zero => x.dim == 0,
            Fam::All => true,
            Fam::Gen(t) => gen_member(t, x),
            Fam::PerpRight(f, u) => u.iter().filter(|y| f.member(y)).all(|y| hom_dim(y, x) == 0),
            Fam::PerpLeft(f, u) => u.iter().filter(|y| f.member(y)).all(|y| hom_dim(x, y) == 0),
            Fam::A2Comma { kind, c_all, d_all } => {
                let r = |m: &Mat| rank(m, x.dim, x.p);
                let (da, phi, db) = (r(&x.act[0]), r(&x.act[1]), r(&x.act[2]));
                match *kind {
                    "components" => (*c_all || da == 0) && (*d_all || db == 0),
                    // φ injective, A ∈ C, coker φ ∈ D
                    "mono" => phi == da && (*c_all || da == 0) && (*d_all || phi == db),
                    // φ̃ onto, ker φ̃ ∈ C, B ∈ D
                    "epi" => phi == db && (*c_all || phi == da) && (*d_all || db == 0),
                    _ => unreachable!(),
                }
            }
        }
    }
}

/// Torsion pair on a universe straight from the definition: no maps from
/// the first family to the second, and every member has a submodule in the
/// first with quotient in the second.
pub fn torsion_pair(x: &Fam, y: &Fam, universe: &[Raw]) -> bool {
    let xs: Vec<&Raw> = universe.iter().filter(|m| x.member(m)).collect();
    let ys: Vec<&Raw> = universe.iter().filter(|m| y.member(m)).collect();
    if xs.iter().any(|a| ys.iter().any(|b| hom_dim(a, b) != 0)) {
        return false;
    }
    universe.iter().all(|m| {
        submodules(m).iter().any(|w| {
            let (t, q) = split(m, w);
            x.member(&t) && y.member(&q)
        })
    })
}

/// Universe positions with no submodule in `x` whose quotient is in `y`.
pub fn unsplit(x: &Fam, y: &Fam, universe: &[Raw]) -> Vec<usize> {
    (0..universe.len())
        .filter(|&i| {
            !submodules(&universe[i]).iter().any(|w| {
                let (t, q) = split(&universe[i], w);
                x.member(&t) && y.member(&q)
            })
        })
        .collect()
}

/// An intertwining invertible matrix `m → n`.
pub fn is_iso(f: &Mat, m: &Raw, n: &Raw) -> bool {
    if m.dim != n.dim {
        return false;
    }
    let p = m.p;
    let commutes = m
        .act
        .iter()
        .zip(&n.act)
        .all(|(a, b)| mul(f, a, m.dim, m.dim, p) == mul(b, f, n.dim, m.dim, p));
    commutes && rank(f, m.dim, p) == m.dim
}
