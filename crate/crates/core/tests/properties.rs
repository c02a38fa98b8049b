use std::sync::Arc;

use commacat_core::comma::{functor_p, hom_comma, hom_comma_dim};
use commacat_core::fixtures::DualNumbers;
use commacat_core::module::{combine_maps, gen_member, hom_dim, hom_space};
use commacat_core::presentation::{is_partial_silting, is_silting, sigma_for_p};
use commacat_core::tensor::tensor_over;
use commacat_core::torsion::{perp_left, perp_right};
use commacat_core::verify::Setting;
use commacat_core::{
    CommaObject, FpMatrix, Limits, ModuleFamily, ModuleMap, ModuleRep, Presentation, Side, TriangularRing,
};
use proptest::prelude::*;

fn matrix(p: u32, rows: usize, cols: usize) -> impl Strategy<Value = FpMatrix> {
    proptest::collection::vec(0..p, rows * cols).prop_map(move |d| FpMatrix::new(p, rows, cols, d).unwrap())
}

fn any_matrix() -> impl Strategy<Value = FpMatrix> {
    (prop::sample::select(vec![2u32, 3, 5, 7]), 0usize..5, 0usize..5).prop_flat_map(|(p, r, c)| matrix(p, r, c))
}

fn invertible(p: u32, n: usize) -> impl Strategy<Value = FpMatrix> {
    matrix(p, n, n).prop_filter("invertible", FpMatrix::is_invertible)
}

fn dual() -> &'static DualNumbers {
    use std::sync::OnceLock;
    static D: OnceLock<DualNumbers> = OnceLock::new();
    D.get_or_init(DualNumbers::new)
}

/// A module over `F_2[x]/(x²)` of dimension `n` with `blocks` Jordan blocks
/// of size two, in a random basis.
fn dual_module(max: usize) -> impl Strategy<Value = ModuleRep> {
    (1usize..=max)
        .prop_flat_map(|n| (Just(n), 0..=n / 2, invertible(2, n)))
        .prop_map(|(n, blocks, basis)| {
            let mut x = FpMatrix::zeros(2, n, n);
            for b in 0..blocks {
                x.set(2 * b + 1, 2 * b, 1);
            }
            let x = basis.mul(&x).mul(&basis.inverse().unwrap());
            ModuleRep::new(
                dual().ring.r().clone(),
                Side::Left,
                n,
                vec![FpMatrix::identity(2, n), x],
            )
            .unwrap()
        })
}

fn conjugate(m: &ModuleRep, basis: &FpMatrix) -> ModuleRep {
    let inv = basis.inverse().unwrap();
    let action = m.action().iter().map(|a| basis.mul(a).mul(&inv)).collect();
    ModuleRep::new(m.algebra().clone(), m.side(), m.dim(), action).unwrap()
}

/// A comma object over the dual-numbers ring with a random structure map.
fn comma_object() -> impl Strategy<Value = CommaObject> {
    let ring: Arc<TriangularRing> = dual().ring.clone();
    let s_side = dual().s_universe();
    (
        dual_module(2),
        prop::sample::select(s_side),
        proptest::collection::vec(0u32..2, 8),
    )
        .prop_map(move |(a, b, coeffs)| {
            let fa = tensor_over(ring.u(), &a).unwrap();
            let basis = hom_space(&fa.module, &b).unwrap();
            let bar = combine_maps(&fa.module, &b, &basis, &coeffs[..basis.len()]);
            CommaObject::new(ring.clone(), a, b, bar.matrix().mul(&fa.projection)).unwrap()
        })
}

fn families(universe: &[ModuleRep]) -> Vec<ModuleFamily> {
    let d = dual();
    let gen_k = ModuleFamily::gen(d.r_k.clone(), universe.to_vec());
    let gen_r = ModuleFamily::gen(d.r_reg.clone(), universe.to_vec());
    let setting = Setting::dual_numbers(Limits::default()).unwrap();
    let sigma = setting.r_presentations[0].1.clone();
    vec![
        perp_right(&gen_k, universe),
        perp_left(&gen_k, universe),
        ModuleFamily::explicit("k", vec![d.r_k.clone()], universe.to_vec()),
        ModuleFamily::d_sigma(sigma, universe.to_vec()),
        gen_k,
        gen_r,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(a in any_matrix()) {
        let k = a.kernel_basis();
        prop_assert_eq!(k.rows(), a.cols());
        prop_assert_eq!(a.rank() + k.cols(), a.cols());
        prop_assert!(a.mul(&k).is_zero());
        prop_assert_eq!(k.rank(), k.cols());
    }

    #[test]
    fn rank_of_transpose(a in any_matrix()) {
        prop_assert_eq!(a.rank(), a.transpose().rank());
    }

    #[test]
    fn solve_recovers_a_consistent_right_side(
        (a, x) in (prop::sample::select(vec![2u32, 3, 5]), 1usize..5, 1usize..5)
            .prop_flat_map(|(p, r, c)| (matrix(p, r, c), proptest::collection::vec(0..p, c)))
    ) {
        let b = a.mul_vec(&x);
        let y = a.solve(&b).unwrap().expect("consistent by construction");
        prop_assert_eq!(a.mul_vec(&y), b);
    }

    #[test]
    fn inverse_is_two_sided(a in (prop::sample::select(vec![2u32, 3, 5]), 1usize..5).prop_flat_map(|(p, n)| invertible(p, n))) {
        let inv = a.inverse().unwrap();
        let id = FpMatrix::identity(a.p(), a.rows());
        prop_assert_eq!(a.mul(&inv), id.clone());
        prop_assert_eq!(inv.mul(&a), id);
    }

    #[test]
    fn membership_is_isomorphism_invariant(
        (m, basis) in dual_module(4).prop_flat_map(|m| { let n = m.dim(); (Just(m), invertible(2, n)) })
    ) {
        let n = conjugate(&m, &basis);
        let universe = dual().r_universe();
        let limits = Limits::default();
        for f in families(&universe) {
            prop_assert_eq!(f.contains(&m, &limits).unwrap(), f.contains(&n, &limits).unwrap(), "{}", f.label());
        }
    }

    #[test]
    fn perps_shrink_as_the_universe_grows(extra in dual_module(3), mask in 0u8..16, x in dual_module(3)) {
        let mut big = dual().r_universe();
        big.push(extra);
        let small: Vec<ModuleRep> = big.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, m)| m.clone()).collect();
        let limits = Limits::default();
        for g in [&dual().r_k, &dual().r_reg] {
            let (fs, fb) = (ModuleFamily::gen(g.clone(), small.clone()), ModuleFamily::gen(g.clone(), big.clone()));
            if perp_right(&fb, &big).contains(&x, &limits).unwrap() {
                prop_assert!(perp_right(&fs, &small).contains(&x, &limits).unwrap());
            }
            if perp_left(&fb, &big).contains(&x, &limits).unwrap() {
                prop_assert!(perp_left(&fs, &small).contains(&x, &limits).unwrap());
            }
        }
    }

    #[test]
    fn silting_implies_partial_silting(a in 1usize..3, b in 1usize..3, coeffs in proptest::collection::vec(0u32..2, 16)) {
        let d = dual();
        let p1 = commacat_core::module::power(&d.r_reg, a);
        let p0 = commacat_core::module::power(&d.r_reg, b);
        let basis = hom_space(&p1, &p0).unwrap();
        let sigma: ModuleMap = combine_maps(&p1, &p0, &basis, &coeffs[..basis.len()]);
        let s = Presentation::from_sigma(sigma).unwrap();
        let universe = d.r_universe();
        let limits = Limits::default();
        if is_silting(s.target(), &s, &universe, &limits).unwrap().holds() {
            prop_assert!(is_partial_silting(s.target(), &s, &universe, &limits).unwrap().holds());
        }
    }

    #[test]
    fn generated_modules_have_no_maps_to_the_perp(g in dual_module(2), x in dual_module(4), y in dual_module(4)) {
        if gen_member(&g, &x).unwrap() && hom_dim(&g, &y).unwrap() == 0 {
            prop_assert_eq!(hom_dim(&x, &y).unwrap(), 0);
        }
    }

    #[test]
    fn comma_maps_are_the_t_module_maps(c in comma_object(), d in comma_object()) {
        let maps = hom_comma(&c, &d).unwrap();
        let (ct, dt) = (c.to_t_module(), d.to_t_module());
        prop_assert_eq!(maps.len(), hom_dim(&ct, &dt).unwrap());
        prop_assert_eq!(hom_comma_dim(&c, &d).unwrap(), maps.len());
        let mut stacked: Option<FpMatrix> = None;
        for m in &maps {
            prop_assert!(m.is_valid());
            let t = m.to_t_map();
            prop_assert!(t.is_intertwiner());
            let flat = FpMatrix::new(2, 1, dt.dim() * ct.dim(), t.matrix().entries().to_vec()).unwrap();
            stacked = Some(match stacked { None => flat, Some(s) => s.vstack(&flat) });
        }
        if let Some(s) = stacked {
            prop_assert_eq!(s.rank(), maps.len());
        }
    }

    #[test]
    fn dsigma_is_componentwise(c in comma_object(), i in 0usize..4, j in 0usize..3) {
        let s = Setting::dual_numbers(Limits::default()).unwrap();
        let (a, b) = (&s.r_presentations[i].1, &s.s_presentations[j].1);
        let sigma = sigma_for_p(&s.ring, a, b).unwrap();
        let whole = sigma.d_sigma_member(&c.to_t_module()).unwrap();
        prop_assert_eq!(whole, a.d_sigma_member(c.a()).unwrap() && b.d_sigma_member(c.b()).unwrap());
    }

    #[test]
    fn p_is_left_adjoint_to_q(c in comma_object(), i in 0usize..4, j in 0usize..3) {
        let d = dual();
        let (a, b) = (&d.r_universe()[i], &d.s_universe()[j]);
        let p = functor_p(&d.ring, a, b).unwrap();
        prop_assert_eq!(
            hom_comma_dim(&p, &c).unwrap(),
            hom_dim(a, c.a()).unwrap() + hom_dim(b, c.b()).unwrap()
        );
    }
}
