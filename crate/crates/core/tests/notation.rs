mod common;

use common::{ch, env, rep, SAMPLES};
use gsp4_lfactors::notation::{
    parse_character, parse_rep, print_character, print_factor, print_rep, Style,
};
use gsp4_lfactors::{tate_factor, Error, EulerFactor, TypeSymbol};
use proptest::prelude::*;

#[test]
fn parses_spec_examples() {
    let e = env();
    assert_eq!(
        rep(&e, "L(nu^{1/2} xi St, nu^{-1/2} sigma)").symbol(),
        TypeSymbol::Vb
    );
    assert_eq!(rep(&e, "chi1 x chi2 |x sigma").symbol(), TypeSymbol::I);
    assert_eq!(rep(&e, "tau(T, nu^{-1/2} sigma)").symbol(), TypeSymbol::VIb);
}

#[test]
fn prints_spec_examples() {
    let e = env();
    assert_eq!(
        print_rep(&rep(&e, "tau(T, nu^{-1/2} sigma)"), Style::Ascii),
        "tau(T, nu^{-1/2} sigma)"
    );
    assert_eq!(print_factor(&EulerFactor::one(), Style::Ascii), "1");
    let f = tate_factor(&ch(&e, "nu^{1/2} sigma")).pow(2);
    assert_eq!(print_factor(&f, Style::Ascii), "L(s, nu^{1/2} sigma)^2");
}

#[test]
fn unicode_is_display_only() {
    let e = env();
    let s = print_character(&ch(&e, "nu^{1/2} sigma"), Style::Unicode);
    assert!(s.contains('ν') && s.contains('σ'), "{s}");
    let r = print_rep(&rep(&e, "chi1 x chi2 |x sigma"), Style::Unicode);
    assert!(r.contains('⋊'), "{r}");
}

#[test]
fn samples_round_trip() {
    let e = env();
    for (t, s) in SAMPLES {
        let r = rep(&e, s);
        let printed = print_rep(&r, Style::Ascii);
        let again = parse_rep(&printed, &e).unwrap_or_else(|err| panic!("{printed}: {err}"));
        assert_eq!(again, r, "{t:?}: {s} -> {printed}");
    }
}

#[test]
fn errors_carry_positions() {
    let e = env();
    for (text, pos) in [
        ("chi1 x", 6),
        ("sigma^{", 7),
        ("tau(T, nu^{-1/2} sigma", 22),
    ] {
        match parse_rep(text, &e) {
            Err(Error::Parse(p)) => assert!(p.offset <= pos + 1, "{text}: {p:?}"),
            other => panic!("{text}: {other:?}"),
        }
    }
    assert!(matches!(
        parse_character("zeta", e.context()),
        Err(Error::Parse(_))
    ));
}

fn char_text() -> impl Strategy<Value = String> {
    let atom = prop::sample::select(vec![
        "chi1",
        "chi2",
        "sigma",
        "mu",
        "r",
        "xi",
        "chi_{K/k}",
        "1",
        "nu",
    ]);
    prop::collection::vec((atom, -3i64..=3, -4i64..=4), 1..5).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(a, n, h)| {
                if n == 0 {
                    format!("nu^{{{h}/2}}")
                } else {
                    format!("{a}^{{{n}}}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    })
}

proptest! {
    #[test]
    fn characters_round_trip(text in char_text()) {
        let e = env();
        let c = parse_character(&text, e.context()).unwrap();
        let printed = print_character(&c, Style::Ascii);
        prop_assert_eq!(parse_character(&printed, e.context()).unwrap(), c);
    }

    #[test]
    fn arbitrary_input_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..64)) {
        let e = env();
        let text = String::from_utf8_lossy(&bytes);
        let _ = parse_rep(&text, &e);
        let _ = parse_character(&text, e.context());
    }

    #[test]
    fn near_miss_input_never_panics(
        s in "[a-zA-Z0-9_ ^{}()/,|x*-]{0,40}",
    ) {
        let e = env();
        let _ = parse_rep(&s, &e);
    }
}
