use std::fmt::{self, Write};

use crate::catalog::{CuspidalGl2, Gl2Rep, Gsp4Rep, OpaqueCusp};
use crate::character::{format_rational, one, Character, CharacterK, Rational};
use crate::euler::{EulerFactor, SatakeMonomial};

/// Output alphabet.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Style {
    /// Parseable ASCII.
    #[default]
    Ascii,
    /// Display only: Greek letters, `⋊`, `×`.
    Unicode,
}

const GREEK: &[(&str, &str)] = &[
    ("alpha", "α"),
    ("beta", "β"),
    ("gamma", "γ"),
    ("delta", "δ"),
    ("epsilon", "ε"),
    ("eta", "η"),
    ("theta", "θ"),
    ("kappa", "κ"),
    ("lambda", "λ"),
    ("Lambda", "Λ"),
    ("mu", "μ"),
    ("nu", "ν"),
    ("xi", "ξ"),
    ("pi", "π"),
    ("rho", "ρ"),
    ("sigma", "σ"),
    ("tau", "τ"),
    ("phi", "φ"),
    ("chi", "χ"),
    ("psi", "ψ"),
    ("omega", "ω"),
];

/// Greek rendering of `name`, keeping any suffix after the letter name.
fn name(n: &str, style: Style) -> String {
    if style == Style::Ascii {
        return n.to_string();
    }
    for (ascii, greek) in GREEK {
        if let Some(rest) = n.strip_prefix(ascii) {
            if rest.is_empty() || !rest.starts_with(|c: char| c.is_ascii_alphabetic()) {
                return format!("{greek}{rest}");
            }
        }
    }
    n.to_string()
}

fn exponent(e: &Rational) -> String {
    format!("^{{{}}}", format_rational(e))
}

fn push_term(out: &mut String, term: &str) {
    if !out.is_empty() {
        out.push(' ');
    }
    out.push_str(term);
}

fn nu_term(e: &Rational, style: Style) -> String {
    let base = name("nu", style);
    if *e == one() {
        base
    } else {
        format!("{base}{}", exponent(e))
    }
}

fn gen_term(g: &str, e: i64, style: Style) -> String {
    if e == 1 {
        name(g, style)
    } else {
        format!("{}^{{{e}}}", name(g, style))
    }
}

fn chi_kk(style: Style) -> &'static str {
    match style {
        Style::Ascii => "chi_{K/k}",
        Style::Unicode => "χ_{K/k}",
    }
}

/// Canonical text of a character: `ν` power, then `χ_{K/k}`, then generators
/// in name order; `1` for the trivial character.
pub fn print_character(c: &Character, style: Style) -> String {
    let mut out = String::new();
    let nu = c.nu_exponent();
    if nu != Rational::from_integer(0) {
        push_term(&mut out, &nu_term(&nu, style));
    }
    if c.chi_kk_exponent() == 1 {
        push_term(&mut out, chi_kk(style));
    }
    for (g, e) in c.generator_exponents() {
        push_term(&mut out, &gen_term(g, *e, style));
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

/// Canonical text of a character of `K^×`: abstract generators, then `norm(ρ)`.
pub fn print_character_k(c: &CharacterK, style: Style) -> String {
    let mut out = String::new();
    for (g, e) in c.abstract_part() {
        push_term(&mut out, &gen_term(g, *e, style));
    }
    let rho = c.norm_part();
    if !rho.is_trivial() {
        let inner = print_character(&rho, style);
        let term = match style {
            Style::Ascii => format!("norm({inner})"),
            Style::Unicode => format!("({inner})∘N"),
        };
        push_term(&mut out, &term);
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

/// `c` followed by a marker, dropping a trivial `c`.
fn with_marker(c: &Character, marker: &str, style: Style) -> String {
    if c.is_trivial() {
        marker.to_string()
    } else {
        format!("{} {marker}", print_character(c, style))
    }
}

fn cusp(pi: &CuspidalGl2, shift: Rational, style: Style) -> String {
    with_marker(&pi.twist.times_nu(shift), &name(pi.name(), style), style)
}

fn opaque(o: &OpaqueCusp, style: Style) -> String {
    if o.twist.is_trivial() {
        format!("cusp({})", o.name())
    } else {
        format!("cusp({}, {})", o.name(), print_character(&o.twist, style))
    }
}

struct Words {
    st: &'static str,
    one: &'static str,
    st_g: &'static str,
    one_g: &'static str,
    times: &'static str,
    rtimes: &'static str,
    delta: &'static str,
    tau: &'static str,
    theta: &'static str,
}

fn words(style: Style) -> Words {
    match style {
        Style::Ascii => Words {
            st: "St",
            one: "one",
            st_g: "St_G",
            one_g: "one_G",
            times: "x",
            rtimes: "|x",
            delta: "delta",
            tau: "tau",
            theta: "theta_-",
        },
        Style::Unicode => Words {
            st: "St",
            one: "1",
            st_g: "St_G",
            one_g: "1_G",
            times: "×",
            rtimes: "⋊",
            delta: "δ",
            tau: "τ",
            theta: "θ₋",
        },
    }
}

/// Canonical text of a `GSp(4)` representation in the classification notation.
///
/// Type Vc is prefixed with `Vc: ` because `Vc(ξ, σ) ≅ Vb(ξ, ξσ)` print alike.
pub fn print_rep(rep: &Gsp4Rep, style: Style) -> String {
    use Gsp4Rep::*;
    let w = words(style);
    let c = |x: &Character| print_character(x, style);
    let h = |x: &Character, e: i64| print_character(&x.times_nu(Rational::new(e, 2)), style);
    let nu_half = |x: &Character, e: i64| x.times_nu(Rational::new(e, 2));
    match rep {
        I { chi1, chi2, sigma } => {
            format!(
                "{} {} {} {} {}",
                c(chi1),
                w.times,
                c(chi2),
                w.rtimes,
                c(sigma)
            )
        }
        IIa { chi, sigma } => format!(
            "{} {} {}",
            with_marker(chi, w.st, style),
            w.rtimes,
            c(sigma)
        ),
        IIb { chi, sigma } => format!(
            "{} {} {}",
            with_marker(chi, w.one, style),
            w.rtimes,
            c(sigma)
        ),
        IIIa { chi, sigma } => format!(
            "{} {} {}",
            c(chi),
            w.rtimes,
            with_marker(sigma, w.st, style)
        ),
        IIIb { chi, sigma } => format!(
            "{} {} {}",
            c(chi),
            w.rtimes,
            with_marker(sigma, w.one, style)
        ),
        IVa { sigma } => with_marker(sigma, w.st_g, style),
        IVb { sigma } => format!(
            "L({}, {})",
            nu_term(&Rational::from_integer(2), style),
            with_marker(&nu_half(sigma, -2), w.st, style)
        ),
        IVc { sigma } => format!(
            "L({} {}, {})",
            nu_term(&Rational::new(3, 2), style),
            w.st,
            h(sigma, -3)
        ),
        IVd { sigma } => with_marker(sigma, w.one_g, style),
        Va { xi, sigma } => format!("{}([{}, {}], {})", w.delta, c(xi), h(xi, 2), h(sigma, -1)),
        Vb { xi, sigma } => format!(
            "L({}, {})",
            with_marker(&nu_half(xi, 1), w.st, style),
            h(sigma, -1)
        ),
        Vc { xi, sigma } => format!(
            "Vc: L({}, {})",
            with_marker(&nu_half(xi, 1), w.st, style),
            h(&(xi * sigma), -1)
        ),
        Vd { xi, sigma } => format!("L({}, {} {} {})", h(xi, 2), c(xi), w.rtimes, h(sigma, -1)),
        VIa { sigma } => format!("{}(S, {})", w.tau, h(sigma, -1)),
        VIb { sigma } => format!("{}(T, {})", w.tau, h(sigma, -1)),
        VIc { sigma } => format!(
            "L({} {}, {})",
            nu_term(&Rational::new(1, 2), style),
            w.st,
            h(sigma, -1)
        ),
        VId { sigma } => format!(
            "L({}, 1 {} {})",
            nu_term(&one(), style),
            w.rtimes,
            h(sigma, -1)
        ),
        VII { chi, pi } => format!("{} {} {}", c(chi), w.rtimes, cusp(pi, 0.into(), style)),
        VIIIa { pi } => format!("{}(S, {})", w.tau, cusp(pi, 0.into(), style)),
        VIIIb { pi } => format!("{}(T, {})", w.tau, cusp(pi, 0.into(), style)),
        IXa { xi, pi } => format!(
            "{}({}, {})",
            w.delta,
            h(xi, 2),
            cusp(pi, Rational::new(-1, 2), style)
        ),
        IXb { xi, pi } => format!("L({}, {})", h(xi, 2), cusp(pi, Rational::new(-1, 2), style)),
        X { pi, sigma } => format!("{} {} {}", cusp(pi, 0.into(), style), w.rtimes, c(sigma)),
        XIa { pi, sigma } => format!(
            "{}({}, {})",
            w.delta,
            cusp(pi, Rational::new(1, 2), style),
            h(sigma, -1)
        ),
        XIb { pi, sigma } => format!(
            "L({}, {})",
            cusp(pi, Rational::new(1, 2), style),
            h(sigma, -1)
        ),
        VaStar { sigma, xi } => format!(
            "{}({}, {})",
            w.theta,
            with_marker(sigma, w.st, style),
            with_marker(&(xi * sigma), w.st, style)
        ),
        XIaStar { sigma, pi } => format!(
            "{}({}, {})",
            w.theta,
            with_marker(sigma, w.st, style),
            cusp(&pi.twisted(sigma), 0.into(), style)
        ),
        CuspGeneric(o) | CuspOtherNonGeneric(o) => opaque(o, style),
    }
}

/// Canonical text of a `GL(2)` representation.
pub fn print_gl2(rep: &Gl2Rep, style: Style) -> String {
    let w = words(style);
    match rep {
        Gl2Rep::Principal(a, b) => format!(
            "{} {} {}",
            print_character(a, style),
            w.times,
            print_character(b, style)
        ),
        Gl2Rep::Special(m) => with_marker(m, w.st, style),
        Gl2Rep::OneDim(m) => with_marker(m, w.one, style),
        Gl2Rep::Cuspidal(pi) => cusp(pi, 0.into(), style),
    }
}

/// The character whose Tate factor is this monomial's factor.
fn monomial_text(m: &SatakeMonomial, style: Style) -> String {
    let mut out = String::new();
    let nu = -m.q_exponent();
    if nu != Rational::from_integer(0) {
        push_term(&mut out, &nu_term(&nu, style));
    }
    if m.sign() < 0 {
        push_term(&mut out, chi_kk(style));
    }
    for (u, e) in m.units() {
        push_term(&mut out, &gen_term(&u.name, *e, style));
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

/// `L(s, expr)^n` per distinct monomial, in canonical monomial order; `1` when empty.
pub fn print_factor(f: &EulerFactor, style: Style) -> String {
    if f.is_one() {
        return "1".into();
    }
    let mut out = String::new();
    for (m, n) in f.counts() {
        if !out.is_empty() {
            out.push(' ');
        }
        let _ = write!(out, "L(s, {})", monomial_text(&m, style));
        if n > 1 {
            let _ = write!(out, "^{n}");
        }
    }
    out
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_character(self, Style::Ascii))
    }
}

impl fmt::Display for CharacterK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_character_k(self, Style::Ascii))
    }
}

impl fmt::Display for Gsp4Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_rep(self, Style::Ascii))
    }
}

impl fmt::Display for Gl2Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_gl2(self, Style::Ascii))
    }
}

impl fmt::Display for EulerFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_factor(self, Style::Ascii))
    }
}
