mod common;

use std::collections::BTreeMap;

use common::{ch, denominator, env, re_s, scan_roots};
use gsp4_lfactors::{tate_factor, Error, EulerFactor};
use proptest::prelude::*;

fn bind(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[test]
fn tate_factors() {
    let e = env();
    assert_eq!(tate_factor(&e.context().trivial()).degree(), 1);
    assert!(tate_factor(&ch(&e, "r")).is_one());
    assert!(tate_factor(&ch(&e, "nu^{1/2} r")).is_one());
    assert_eq!(
        tate_factor(&ch(&e, "nu^{1/2} sigma")).to_string(),
        "L(s, nu^{1/2} sigma)"
    );
}

#[test]
fn multiset_operations() {
    let e = env();
    let f = tate_factor(&ch(&e, "nu^{1/2} sigma"));
    assert_eq!(EulerFactor::one().mul(&f), f);
    let sq = f.pow(2);
    assert!(f.divides(&sq));
    assert!(!sq.divides(&f));
    assert_eq!(f.quotient_of(&sq).unwrap(), f);
    assert!(matches!(sq.quotient_of(&f), Err(Error::NotDivisor)));
    assert_eq!(sq.to_string(), "L(s, nu^{1/2} sigma)^2");
    assert_eq!(EulerFactor::one().to_string(), "1");
}

#[test]
fn trivial_factor_has_no_poles() {
    let s = EulerFactor::one()
        .specialize(9.0, &BTreeMap::new())
        .unwrap();
    assert!(s.poles().is_empty());
}

#[test]
fn single_pole() {
    let e = env();
    let f = tate_factor(&ch(&e, "nu^{1/2} sigma"));
    let poles = f.specialize(9.0, &bind(&[("sigma", 1.0)])).unwrap().poles();
    assert_eq!(poles.len(), 1);
    assert!((poles[0].x - 3.0).abs() < 1e-12);
    assert!((poles[0].re_s + 0.5).abs() < 1e-12);
}

#[test]
fn three_poles_against_root_scan() {
    // q = 4, u_sigma = 2, u_chi = 1: Satake values 2, 2 and 2 q^{-1/2} = 1.
    let e = env();
    let f = EulerFactor::product(
        ["sigma", "chi^2 sigma", "nu^{1/2} chi sigma"]
            .iter()
            .map(|c| tate_factor(&ch(&e, c)))
            .collect::<Vec<_>>()
            .iter(),
    );
    let q = 4.0;
    let units = bind(&[("sigma", 2.0), ("chi", 1.0)]);
    let lib = f.specialize(q, &units).unwrap().poles();
    let mut scan = scan_roots(&denominator(&f, q, |u| units[u]));
    scan.sort_by(|a, b| re_s(a.x, q).partial_cmp(&re_s(b.x, q)).unwrap());
    assert_eq!(lib.len(), scan.len());
    for (p, r) in lib.iter().zip(&scan) {
        assert!((p.x - r.x).abs() < 1e-9, "{p:?} vs {r:?}");
        assert_eq!(p.multiplicity, r.multiplicity);
        assert!((p.re_s - re_s(r.x, q)).abs() < 1e-9);
    }
    let found: Vec<(f64, usize)> = lib.iter().map(|p| (p.x, p.multiplicity)).collect();
    // Sorted by Re(s): 0 then 1/2.
    assert_eq!(found, vec![(1.0, 1), (0.5, 2)]);
}

#[test]
fn negative_satake_values() {
    // chi_{K/k} over an unramified extension has Satake value -1.
    let e = env();
    let f = tate_factor(&ch(&e, "chi_{K/k} sigma")).mul(&tate_factor(&ch(&e, "sigma")));
    let q = 5.0;
    let units = bind(&[("sigma", 0.5)]);
    let lib = f.specialize(q, &units).unwrap().poles();
    let scan = scan_roots(&denominator(&f, q, |u| units[u]));
    let xs: Vec<f64> = lib.iter().map(|p| p.x).collect();
    assert_eq!(xs, vec![-2.0, 2.0]);
    assert_eq!(scan.len(), 2);
    assert!((scan[0].x + 2.0).abs() < 1e-9 && (scan[1].x - 2.0).abs() < 1e-9);
}

#[test]
fn unbound_units_and_bad_q() {
    let e = env();
    let f = tate_factor(&ch(&e, "sigma"));
    assert!(matches!(
        f.specialize(9.0, &BTreeMap::new()),
        Err(Error::UnboundUnit(u)) if u == "u_sigma"
    ));
    assert!(matches!(
        f.specialize(1.0, &bind(&[("sigma", 1.0)])),
        Err(Error::InvalidQ(_))
    ));
}

#[test]
fn serde_round_trip() {
    let e = env();
    let f = tate_factor(&ch(&e, "nu^{-3/2} chi_{K/k} sigma^2 xi")).pow(3);
    let json = serde_json::to_string(&f).unwrap();
    assert_eq!(serde_json::from_str::<EulerFactor>(&json).unwrap(), f);
}

fn factor_strategy() -> impl Strategy<Value = Vec<(i64, i64, i64, bool)>> {
    prop::collection::vec((-4i64..=4, -2i64..=2, -2i64..=2, any::<bool>()), 0..6)
}

fn build(spec: &[(i64, i64, i64, bool)]) -> EulerFactor {
    let e = env();
    let ctx = e.context();
    let factors: Vec<EulerFactor> = spec
        .iter()
        .map(|&(nu2, a, b, chi)| {
            let mut c = ctx.nu(num_rational::Ratio::new(nu2, 2)).unwrap();
            c = &c * &ch(&e, "sigma").pow(a);
            c = &c * &ch(&e, "chi").pow(b);
            if chi {
                c = &c * &ctx.chi_kk();
            }
            tate_factor(&c)
        })
        .collect();
    EulerFactor::product(factors.iter())
}

proptest! {
    #[test]
    fn multiplication_is_multiset_union(a in factor_strategy(), b in factor_strategy()) {
        let (fa, fb) = (build(&a), build(&b));
        let ab = fa.mul(&fb);
        prop_assert_eq!(ab.degree(), fa.degree() + fb.degree());
        prop_assert_eq!(&ab, &fb.mul(&fa));
        prop_assert!(fa.divides(&ab) && fb.divides(&ab));
        prop_assert_eq!(fa.quotient_of(&ab).unwrap(), fb);
    }

    #[test]
    fn evaluation_agrees(
        spec in factor_strategy(),
        q in prop::sample::select(vec![2.0, 3.0, 4.0, 5.0, 7.0, 9.0, 25.0]),
        us in 0.25f64..4.0,
        uc in 0.25f64..4.0,
        x in -0.05f64..0.05,
    ) {
        let f = build(&spec);
        let units = bind(&[("sigma", us), ("chi", uc)]);
        let s = f.specialize(q, &units).unwrap();
        let direct = s.eval(x);
        let expanded = s.eval_expanded(x);
        let oracle = 1.0 / denominator(&f, q, |u| units[u])
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c);
        let tol = 1e-12 * direct.abs().max(1.0);
        prop_assert!((direct - expanded).abs() <= tol, "{} vs {}", direct, expanded);
        prop_assert!((direct - oracle).abs() <= tol, "{} vs {}", direct, oracle);
    }
}
