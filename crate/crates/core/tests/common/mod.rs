//! Shared fixtures and the numeric root-scan oracle.
#![allow(dead_code)]

use gsp4_lfactors::catalog::PredicateRecord;
use gsp4_lfactors::notation::{parse_character, parse_character_k, parse_gl2, parse_rep};
use gsp4_lfactors::{
    CharWord, Character, CharacterK, ContextDecl, CuspDecl, Environment, EnvironmentDecl,
    EulerFactor, ExtensionDatum, GeneratorDecl, Gl2Rep, Gsp4Rep, OpaqueDecl, Ramification,
    TypeSymbol,
};

fn yes() -> PredicateRecord {
    PredicateRecord {
        default: Some(true),
        overrides: Vec::new(),
    }
}

/// Generators `chi1 chi2 chi sigma omega mu m` (unramified), `r` (ramified),
/// `xi` (quadratic, or `= chi_{K/k}` when `xi_is_chi`); cuspidals `pi`, `pi1`
/// (central `omega`) and `pi0` (trivial central); opaque `Pi` (generic) and
/// `Pi2` (non-generic); abstract `lam` restricting to `omega` and `lam1`
/// restricting to 1.
pub fn env_with(extension: Ramification, xi_is_chi: bool) -> Environment {
    let mut ctx = ContextDecl::new(ExtensionDatum::new("K", extension));
    for g in ["chi1", "chi2", "chi", "sigma", "omega", "mu", "m"] {
        ctx = ctx.generator(GeneratorDecl::unramified(g));
    }
    ctx = ctx.generator(GeneratorDecl::ramified("r"));
    ctx = ctx.generator(if xi_is_chi {
        GeneratorDecl::substitution("xi", CharWord::chi_kk())
    } else {
        GeneratorDecl::unramified("xi").with_order(2)
    });
    ctx = ctx
        .k_character("lam", CharWord::generator("omega"), Ramification::Ramified)
        .k_character("lam1", CharWord::trivial(), Ramification::Ramified);
    let mut decl = EnvironmentDecl::new(ctx);
    for (name, central) in [
        ("pi", CharWord::generator("omega")),
        ("pi1", CharWord::generator("omega")),
        ("pi0", CharWord::trivial()),
    ] {
        let mut c = CuspDecl::new(name, central);
        c.waldspurger = yes();
        c.jacquet_langlands = yes();
        decl.cuspidals.push(c);
    }
    for (name, generic) in [("Pi", true), ("Pi2", false)] {
        decl.opaque.push(OpaqueDecl {
            name: name.into(),
            generic,
            central: CharWord::generator("omega"),
            bessel: yes(),
        });
    }
    Environment::new(decl).expect("fixture declarations are valid")
}

pub fn env() -> Environment {
    env_with(Ramification::Unramified, false)
}

pub fn rep(e: &Environment, text: &str) -> Gsp4Rep {
    parse_rep(text, e).unwrap_or_else(|err| panic!("{text}: {err}"))
}

pub fn ch(e: &Environment, text: &str) -> Character {
    parse_character(text, e.context()).unwrap_or_else(|err| panic!("{text}: {err}"))
}

pub fn chk(e: &Environment, text: &str) -> CharacterK {
    parse_character_k(text, e.context()).unwrap_or_else(|err| panic!("{text}: {err}"))
}

pub fn gl2(e: &Environment, text: &str) -> Gl2Rep {
    parse_gl2(text, e).unwrap_or_else(|err| panic!("{text}: {err}"))
}

/// One instance of every catalog type, written as in the tables.
pub const SAMPLES: [(TypeSymbol, &str); 29] = [
    (TypeSymbol::I, "chi1 x chi2 |x sigma"),
    (TypeSymbol::IIa, "chi St |x sigma"),
    (TypeSymbol::IIb, "chi one |x sigma"),
    (TypeSymbol::IIIa, "chi |x sigma St"),
    (TypeSymbol::IIIb, "chi |x sigma one"),
    (TypeSymbol::IVa, "sigma St_G"),
    (TypeSymbol::IVb, "L(nu^2, nu^{-1} sigma St)"),
    (TypeSymbol::IVc, "L(nu^{3/2} St, nu^{-3/2} sigma)"),
    (TypeSymbol::IVd, "sigma one_G"),
    (TypeSymbol::Va, "delta([xi, nu xi], nu^{-1/2} sigma)"),
    (TypeSymbol::Vb, "L(nu^{1/2} xi St, nu^{-1/2} sigma)"),
    (TypeSymbol::Vc, "Vc: L(nu^{1/2} xi St, nu^{-1/2} xi sigma)"),
    (TypeSymbol::Vd, "L(nu xi, xi |x nu^{-1/2} sigma)"),
    (TypeSymbol::VIa, "tau(S, nu^{-1/2} sigma)"),
    (TypeSymbol::VIb, "tau(T, nu^{-1/2} sigma)"),
    (TypeSymbol::VIc, "L(nu^{1/2} St, nu^{-1/2} sigma)"),
    (TypeSymbol::VId, "L(nu, 1 |x nu^{-1/2} sigma)"),
    (TypeSymbol::VII, "chi |x pi"),
    (TypeSymbol::VIIIa, "tau(S, pi)"),
    (TypeSymbol::VIIIb, "tau(T, pi)"),
    (TypeSymbol::IXa, "delta(nu xi, nu^{-1/2} pi)"),
    (TypeSymbol::IXb, "L(nu xi, nu^{-1/2} pi)"),
    (TypeSymbol::X, "pi |x sigma"),
    (TypeSymbol::XIa, "delta(nu^{1/2} pi0, nu^{-1/2} sigma)"),
    (TypeSymbol::XIb, "L(nu^{1/2} pi0, nu^{-1/2} sigma)"),
    (TypeSymbol::CuspGeneric, "cusp(Pi)"),
    (TypeSymbol::VaStar, "theta_-(sigma St, xi sigma St)"),
    (TypeSymbol::XIaStar, "theta_-(sigma St, sigma pi0)"),
    (TypeSymbol::CuspOtherNonGeneric, "cusp(Pi2)"),
];

/// A real root of a polynomial with its multiplicity.
#[derive(Clone, Copy, Debug)]
pub struct Root {
    pub x: f64,
    pub multiplicity: usize,
}

/// `∏ (1 − v X)` expanded, constant term first. Values are computed here from
/// the monomials' sign, unit exponents and `q`-power, independently of the
/// library's specialization code.
pub fn denominator(f: &EulerFactor, q: f64, unit: impl Fn(&str) -> f64) -> Vec<f64> {
    let mut coeffs = vec![1.0];
    for m in f.monomials() {
        let mut v = f64::from(m.sign()) * q.powf(rational_f64(&m.q_exponent()));
        for (u, e) in m.units() {
            v *= unit(&u.name).powi(*e as i32);
        }
        let mut next = vec![0.0; coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= c * v;
        }
        coeffs = next;
    }
    coeffs
}

fn rational_f64(r: &num_rational::Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

/// `Σ |c_i| |x|^i`, the scale against which `|P(x)|` is judged small.
fn magnitude(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x.abs() + a.abs())
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, a)| a * i as f64)
        .collect()
}

fn relative(c: &[f64], x: f64) -> f64 {
    let m = magnitude(c, x);
    if m == 0.0 {
        0.0
    } else {
        horner(c, x).abs() / m
    }
}

/// Real roots of `c` with `10^-4 <= |x| <= 10^4`, by a dense logarithmic scan
/// for local minima of `|P|`, golden-section refinement, a multiplicity test on
/// successive derivatives and Newton polishing of `P^{(m-1)}`.
pub fn scan_roots(c: &[f64]) -> Vec<Root> {
    const STEPS: i32 = 16_000;
    let mut roots: Vec<Root> = Vec::new();
    for sign in [1.0, -1.0] {
        let xs: Vec<f64> = (0..=STEPS)
            .map(|i| sign * 10f64.powf(-4.0 + 8.0 * f64::from(i) / f64::from(STEPS)))
            .collect();
        let vals: Vec<f64> = xs.iter().map(|&x| relative(c, x)).collect();
        for i in 1..xs.len() - 1 {
            if !(vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1] && vals[i] < 1e-2) {
                continue;
            }
            let x = golden(|x| relative(c, x), xs[i - 1], xs[i + 1]);
            let mut derivs = vec![c.to_vec()];
            while relative(derivs.last().unwrap(), x) < 1e-5 && derivs.len() <= c.len() {
                let next = derivative(derivs.last().unwrap());
                derivs.push(next);
            }
            let multiplicity = derivs.len() - 1;
            if multiplicity == 0 {
                continue;
            }
            let x = newton(&derivs[multiplicity - 1], &derivs[multiplicity], x);
            if !roots.iter().any(|r| (r.x - x).abs() <= 1e-6 * x.abs()) {
                roots.push(Root { x, multiplicity });
            }
        }
    }
    roots.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());
    roots
}

fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    (a + b) / 2.0
}

fn newton(p: &[f64], dp: &[f64], mut x: f64) -> f64 {
    for _ in 0..60 {
        let d = horner(dp, x);
        if d == 0.0 {
            break;
        }
        let step = horner(p, x) / d;
        x -= step;
        if step.abs() <= 1e-16 * x.abs() {
            break;
        }
    }
    x
}

/// `Re(s)` of the pole at `X = q^{-s} = x`.
pub fn re_s(x: f64, q: f64) -> f64 {
    -x.abs().ln() / q.ln()
}
