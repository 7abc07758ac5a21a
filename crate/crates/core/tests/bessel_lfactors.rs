mod common;

use common::{ch, chk, env, env_with, rep};
use gsp4_lfactors::lfactor::{
    analyze, anisotropic_lambda_condition, caveats, h_functional_dim, has_anisotropic_bessel,
    l_exceptional, l_full_anisotropic, l_full_any_model, l_regular, Caveat, LambdaSet,
};
use gsp4_lfactors::{
    tate_factor, BesselDatum, Environment, Error, EulerFactor, Ramification, TypeSymbol,
};

fn bd(e: &Environment, lambda: &str) -> BesselDatum {
    BesselDatum::new(chk(e, lambda))
}

fn l(e: &Environment, chars: &[&str]) -> EulerFactor {
    EulerFactor::product(
        chars
            .iter()
            .map(|c| tate_factor(&ch(e, c)))
            .collect::<Vec<_>>()
            .iter(),
    )
}

#[test]
fn vib_lambda_is_exactly_sigma_norm() {
    for ext in [Ramification::Unramified, Ramification::Ramified] {
        let e = env_with(ext, false);
        let c = anisotropic_lambda_condition(&rep(&e, "tau(T, nu^{-1/2} sigma)"));
        assert_eq!(c.set, LambdaSet::Exactly(vec![chk(&e, "norm(sigma)")]));
    }
}

#[test]
fn iiib_has_no_lambda() {
    let e = env();
    let r = rep(&e, "chi |x sigma one");
    assert!(anisotropic_lambda_condition(&r).is_none());
    assert!(!has_anisotropic_bessel(&r, &bd(&e, "norm(sigma)")).unwrap());
}

#[test]
fn vb_guard_fails_when_xi_is_chi() {
    let e = env_with(Ramification::Unramified, true);
    let r = rep(&e, "L(nu^{1/2} xi St, nu^{-1/2} sigma)");
    let c = anisotropic_lambda_condition(&r);
    assert!(c.is_none());
    assert_eq!(c.guard.unwrap().holds, Some(false));
    assert!(!has_anisotropic_bessel(&r, &bd(&e, "norm(sigma)")).unwrap());
}

#[test]
fn vib_model_only_for_sigma_norm() {
    let e = env();
    let r = rep(&e, "tau(T, nu^{-1/2} sigma)");
    assert!(has_anisotropic_bessel(&r, &bd(&e, "norm(sigma)")).unwrap());
    assert!(!has_anisotropic_bessel(&r, &bd(&e, "norm(nu sigma)")).unwrap());
}

#[test]
fn restriction_must_match_central_character() {
    let e = env();
    let r = rep(&e, "chi1 x chi2 |x sigma");
    // lam restricts to omega, not chi1 chi2 sigma^2.
    assert!(!has_anisotropic_bessel(&r, &bd(&e, "lam")).unwrap());
    assert!(!has_anisotropic_bessel(&r, &bd(&e, "norm(sigma) lam1")).unwrap());
    let r = rep(&e, "chi1 x chi1^-1 |x sigma");
    assert!(has_anisotropic_bessel(&r, &bd(&e, "norm(sigma) lam1")).unwrap());
}

#[test]
fn h_functionals() {
    let e = env();
    assert_eq!(
        h_functional_dim(&rep(&e, "tau(T, nu^{-1/2} sigma)"), &ch(&e, "sigma")).unwrap(),
        1
    );
    let iia = rep(&e, "chi St |x sigma");
    for rho in ["sigma", "chi sigma", "1", "mu"] {
        assert_eq!(h_functional_dim(&iia, &ch(&e, rho)).unwrap(), 0);
    }
    let e = env_with(Ramification::Unramified, true);
    let vd = rep(&e, "L(nu xi, xi |x nu^{-1/2} sigma)");
    assert_eq!(h_functional_dim(&vd, &ch(&e, "xi sigma")).unwrap(), 1);
    assert_eq!(h_functional_dim(&vd, &ch(&e, "sigma")).unwrap(), 1);
    assert_eq!(h_functional_dim(&vd, &ch(&e, "chi sigma")).unwrap(), 0);
}

#[test]
fn exceptional_factor_of_iib_with_mu() {
    let e = env();
    let r = rep(&e, "chi one |x sigma");
    let ex = l_exceptional(&r, &bd(&e, "norm(chi sigma)"), &ch(&e, "mu")).unwrap();
    assert_eq!(ex, l(&e, &["nu^{1/2} mu chi sigma"]));
}

#[test]
fn exceptional_factor_of_borel_is_one() {
    let e = env();
    let lam = bd(&e, "norm(sigma) lam1");
    let r = rep(&e, "chi1 x chi1^-1 |x sigma");
    assert!(has_anisotropic_bessel(&r, &lam).unwrap());
    assert!(l_exceptional(&r, &lam, &e.context().trivial())
        .unwrap()
        .is_one());
}

#[test]
fn exceptional_factor_of_vd() {
    let e = env_with(Ramification::Unramified, true);
    let r = rep(&e, "L(nu xi, xi |x nu^{-1/2} sigma)");
    let ex = l_exceptional(&r, &bd(&e, "norm(sigma)"), &e.context().trivial()).unwrap();
    assert_eq!(ex, l(&e, &["nu^{1/2} sigma", "nu^{1/2} xi sigma"]));
}

#[test]
fn regular_factor_of_ivb() {
    let e = env();
    let r = rep(&e, "L(nu^2, nu^{-1} sigma St)");
    let reg = l_regular(&r, &bd(&e, "norm(sigma)"), &e.context().trivial()).unwrap();
    assert_eq!(reg, l(&e, &["nu^{3/2} sigma", "nu^{-1/2} sigma"]));
}

#[test]
fn regular_factor_of_vii_is_one() {
    let e = env();
    let r = rep(&e, "chi^2 |x pi");
    let lam = bd(&e, "lam norm(chi)");
    assert!(has_anisotropic_bessel(&r, &lam).unwrap());
    assert!(l_regular(&r, &lam, &e.context().trivial())
        .unwrap()
        .is_one());
}

#[test]
fn regular_factor_of_iia_with_unramified_mu() {
    let e = env();
    let r = rep(&e, "chi St |x sigma");
    let lam = bd(&e, "norm(chi sigma) lam1");
    assert!(has_anisotropic_bessel(&r, &lam).unwrap());
    // The excluded character.
    assert!(!has_anisotropic_bessel(&r, &bd(&e, "norm(chi sigma)")).unwrap());
    let reg = l_regular(&r, &lam, &ch(&e, "mu")).unwrap();
    assert_eq!(
        reg,
        l(&e, &["mu sigma", "mu chi^2 sigma", "nu^{1/2} mu chi sigma"])
    );
}

#[test]
fn full_factors() {
    let e = env();
    let one = e.context().trivial();
    let vib = rep(&e, "tau(T, nu^{-1/2} sigma)");
    let t = l_full_anisotropic(&vib, &bd(&e, "norm(sigma)"), &one).unwrap();
    assert_eq!(t.full, l(&e, &["nu^{1/2} sigma", "nu^{1/2} sigma"]));
    assert_eq!(t.full, t.regular.mul(&t.exceptional));

    let xib = rep(&e, "L(nu^{1/2} pi0, nu^{-1/2} sigma)");
    let t = l_full_anisotropic(&xib, &bd(&e, "norm(sigma)"), &one).unwrap();
    assert_eq!(t.full, l(&e, &["nu^{1/2} sigma", "nu^{-1/2} sigma"]));

    let ivd = rep(&e, "sigma one_G");
    assert!(matches!(
        l_full_any_model(&ivd, &one),
        Err(Error::NoBesselModel(TypeSymbol::IVd))
    ));
}

#[test]
fn no_model_is_an_error_not_a_factor() {
    let e = env();
    let r = rep(&e, "chi |x sigma one");
    let err = l_full_anisotropic(&r, &bd(&e, "norm(sigma)"), &e.context().trivial());
    assert!(matches!(err, Err(Error::NoAnisotropicModel { .. })));
}

#[test]
fn caveats_surface() {
    let e = env();
    let vastar = rep(&e, "theta_-(sigma St, xi sigma St)");
    assert!(
        caveats(&vastar, None).contains(&Caveat::OddResidueCharacteristic {
            row: TypeSymbol::VaStar
        })
    );
    let xib = rep(&e, "L(nu^{1/2} pi0, nu^{-1/2} sigma)");
    assert!(caveats(&xib, None).contains(&Caveat::DeclaredData {
        row: TypeSymbol::XIb
    }));
    let vib = rep(&e, "tau(T, nu^{-1/2} sigma)");
    assert!(caveats(&vib, None).is_empty());
    assert_eq!(
        caveats(&vib, Some(&ch(&e, "mu"))),
        vec![Caveat::TwistIdentity]
    );
}

#[test]
fn analyze_reports_trace() {
    let e = env();
    let r = rep(&e, "tau(T, nu^{-1/2} sigma)");
    let report = analyze(&r, &bd(&e, "norm(sigma)"), &e.context().trivial()).unwrap();
    assert_eq!(report.symbol, TypeSymbol::VIb);
    assert_eq!(report.condition_trace.row, TypeSymbol::VIb);
    assert_eq!(report.factors.full.to_string(), "L(s, nu^{1/2} sigma)^2");
}

#[test]
fn undeclared_period_is_reported() {
    use gsp4_lfactors::{
        CharWord, ContextDecl, CuspDecl, EnvironmentDecl, ExtensionDatum, GeneratorDecl,
    };
    let ctx = ContextDecl::new(ExtensionDatum::new("K", Ramification::Unramified))
        .generator(GeneratorDecl::unramified("sigma"));
    let mut decl = EnvironmentDecl::new(ctx);
    decl.cuspidals
        .push(CuspDecl::new("pi0", CharWord::trivial()));
    let e = Environment::new(decl).unwrap();
    let r = rep(&e, "L(nu^{1/2} pi0, nu^{-1/2} sigma)");
    assert!(matches!(
        has_anisotropic_bessel(&r, &bd(&e, "norm(sigma)")),
        Err(Error::UndeclaredFlag { .. })
    ));
}
