mod common;

use common::{ch, env, rep, SAMPLES};
use gsp4_lfactors::TypeSymbol;
use proptest::prelude::*;

#[test]
fn samples_cover_the_catalog() {
    let e = env();
    let mut seen: Vec<TypeSymbol> = SAMPLES
        .iter()
        .map(|(t, s)| {
            let r = rep(&e, s);
            assert_eq!(r.symbol(), *t, "{s}");
            r.validate().unwrap();
            *t
        })
        .collect();
    seen.sort();
    let mut all = TypeSymbol::ALL.to_vec();
    all.sort();
    assert_eq!(seen, all);
}

#[test]
fn central_characters() {
    let e = env();
    assert_eq!(
        rep(&e, "chi1 x chi2 |x sigma").central_character(),
        ch(&e, "chi1 chi2 sigma^2")
    );
    assert_eq!(
        rep(&e, "chi one |x sigma").central_character(),
        ch(&e, "chi^2 sigma^2")
    );
    assert_eq!(
        rep(&e, "tau(T, nu^{-1/2} sigma)").central_character(),
        ch(&e, "sigma^2")
    );
    assert_eq!(
        rep(&e, "chi |x pi").central_character(),
        ch(&e, "chi omega")
    );
}

#[test]
fn twists() {
    let e = env();
    let mu = ch(&e, "mu");
    assert_eq!(
        rep(&e, "chi St |x sigma").twist(&mu),
        rep(&e, "chi St |x mu sigma")
    );
    for (_, s) in SAMPLES {
        let r = rep(&e, s);
        assert_eq!(r.twist(&e.context().trivial()), r);
    }
}

#[test]
fn genericity_and_extended_sk() {
    let e = env();
    let flags = |s: &str| {
        let r = rep(&e, s);
        (r.is_generic(), r.is_extended_sk())
    };
    assert_eq!(flags("tau(T, nu^{-1/2} sigma)"), (false, true));
    assert_eq!(flags("L(nu^2, nu^{-1} sigma St)"), (false, false));
    assert_eq!(flags("pi |x sigma"), (true, false));
}

#[test]
fn xi_must_be_quadratic_and_nontrivial() {
    let e = env();
    assert!(
        gsp4_lfactors::notation::parse_rep("L(nu^{1/2} sigma St, nu^{-1/2} sigma)", &e).is_err()
    );
    assert!(gsp4_lfactors::notation::parse_rep("L(nu^{1/2} St, nu^{-1/2} sigma)", &e).is_ok());
}

fn mu_text() -> impl Strategy<Value = String> {
    (
        -4i64..=4,
        prop::sample::select(vec!["", "mu", "m^2", "r", "xi", "chi_{K/k}", "mu^-1 r^3"]),
    )
        .prop_map(|(n, g)| format!("nu^{{{n}/2}} {g}"))
}

proptest! {
    #[test]
    fn central_character_covariance(i in 0usize..SAMPLES.len(), mu in mu_text()) {
        let e = env();
        let r = rep(&e, SAMPLES[i].1);
        let mu = ch(&e, &mu);
        let t = r.twist(&mu);
        prop_assert_eq!(t.symbol(), r.symbol());
        prop_assert_eq!(t.central_character(), &mu.pow(2) * &r.central_character());
        prop_assert_eq!(t.twist(&mu.inverse()), r);
    }

    #[test]
    fn twists_compose(i in 0usize..SAMPLES.len(), a in mu_text(), b in mu_text()) {
        let e = env();
        let r = rep(&e, SAMPLES[i].1);
        let (a, b) = (ch(&e, &a), ch(&e, &b));
        prop_assert_eq!(r.twist(&a).twist(&b), r.twist(&(&a * &b)));
    }
}
