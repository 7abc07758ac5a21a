//! Anisotropic Bessel models and spinor L-factors.
//!
//! Three independent encodings live here:
//! * the per-type regular and exceptional factors for `μ = 1`, together with the
//!   characters `Λ` of `K^×` giving an anisotropic Bessel model;
//! * the `μ`-dependent exceptional factors of the six non-cuspidal types with a
//!   nontrivial one;
//! * the full factor valid for every Bessel model.
//!
//! General `μ` is handled by `L(s, Π, Λ, μ) = L(s, μ⊗Π, (μ∘N)Λ, 1)`.

use std::fmt;

use serde::Serialize;

use crate::catalog::{BesselDatum, CuspidalGl2, Gsp4Rep, OpaqueCusp, TypeSymbol};
use crate::character::{half, norm_pullback, Character, CharacterK, Rational};
use crate::error::{Error, Result};
use crate::euler::{tate_factor, EulerFactor};
use crate::notation::print_character_k;

/// The set of `Λ` (restricting to `ω_Π` on `k^×`) in one row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LambdaSet {
    None,
    All,
    AllExcept(Vec<CharacterK>),
    Exactly(Vec<CharacterK>),
}

/// `Hom_{T̃}(π, Λ) ≠ 0` (or `= 0`), for `π^{JL}` when `jl`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodFilter {
    pub pi: CuspidalGl2,
    pub jl: bool,
    pub nonvanishing: bool,
}

/// A `Λ`-independent side condition of a row, e.g. `ξ ≠ χ_{K/k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Guard {
    pub text: String,
    /// `None` when it depends on an undeclared flag.
    pub holds: Option<bool>,
    #[serde(skip)]
    missing: Option<Error>,
}

impl Guard {
    fn fixed(text: impl Into<String>, holds: bool) -> Self {
        Guard {
            text: text.into(),
            holds: Some(holds),
            missing: None,
        }
    }

    fn declared(text: impl Into<String>, value: Result<bool>) -> Self {
        match value {
            Ok(v) => Guard::fixed(text, v),
            Err(e) => Guard {
                text: text.into(),
                holds: None,
                missing: Some(e),
            },
        }
    }
}

/// Which `Λ` give an anisotropic Bessel model, for one representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaCondition {
    pub row: TypeSymbol,
    pub set: LambdaSet,
    pub guard: Option<Guard>,
    pub period: Option<PeriodFilter>,
    pub declared: Option<OpaqueCusp>,
}

impl LambdaCondition {
    fn new(row: TypeSymbol, set: LambdaSet) -> Self {
        LambdaCondition {
            row,
            set,
            guard: None,
            period: None,
            declared: None,
        }
    }

    fn guarded(mut self, guard: Guard) -> Self {
        self.guard = Some(guard);
        self
    }

    fn with_period(mut self, pi: CuspidalGl2, jl: bool, nonvanishing: bool) -> Self {
        self.period = Some(PeriodFilter {
            pi,
            jl,
            nonvanishing,
        });
        self
    }

    /// True when no `Λ` can qualify.
    pub fn is_none(&self) -> bool {
        self.set == LambdaSet::None || self.guard.as_ref().is_some_and(|g| g.holds == Some(false))
    }

    /// Whether `Λ` satisfies the row condition. The restriction `Λ|_{k^×} = ω`
    /// is checked separately by [`has_anisotropic_bessel`].
    pub fn contains(&self, lambda: &CharacterK) -> Result<bool> {
        let in_set = match &self.set {
            LambdaSet::None => return Ok(false),
            LambdaSet::All => true,
            LambdaSet::AllExcept(v) => !v.contains(lambda),
            LambdaSet::Exactly(v) => v.contains(lambda),
        };
        if let Some(g) = &self.guard {
            match (g.holds, &g.missing) {
                (Some(false), _) => return Ok(false),
                (None, Some(e)) => return Err(e.clone()),
                _ => {}
            }
        }
        if !in_set {
            return Ok(false);
        }
        if let Some(p) = &self.period {
            if p.pi.torus_period(lambda, p.jl)? != p.nonvanishing {
                return Ok(false);
            }
        }
        if let Some(o) = &self.declared {
            return o.has_model(lambda);
        }
        Ok(true)
    }

    /// Whether the answer relies on declared Waldspurger or Bessel data.
    pub fn uses_declared_data(&self) -> bool {
        self.period.is_some()
            || self.declared.is_some()
            || matches!(self.row, TypeSymbol::XIb | TypeSymbol::XIaStar)
    }
}

fn list(v: &[CharacterK]) -> String {
    v.iter()
        .map(|c| print_character_k(c, crate::notation::Style::Ascii))
        .collect::<Vec<_>>()
        .join(", ")
}

impl LambdaCondition {
    /// The period side condition, e.g. `Hom_T(pi, Lambda) != 0`.
    pub fn period_text(&self) -> Option<String> {
        self.period.as_ref().map(|p| {
            let pi = if p.jl {
                format!("{}^JL", p.pi.name())
            } else {
                crate::notation::print_gl2(
                    &crate::catalog::Gl2Rep::Cuspidal(p.pi.clone()),
                    crate::notation::Style::Ascii,
                )
            };
            let op = if p.nonvanishing { "!=" } else { "=" };
            format!("Hom_T({pi}, Lambda) {op} 0")
        })
    }

    /// The row condition without evaluating its guard.
    pub fn describe(&self) -> String {
        let mut out = match &self.set {
            LambdaSet::None => "none".to_string(),
            LambdaSet::All => "all".to_string(),
            LambdaSet::AllExcept(v) if v.is_empty() => "all".to_string(),
            LambdaSet::AllExcept(v) => format!("all except {}", list(v)),
            LambdaSet::Exactly(v) if v.is_empty() => "none".to_string(),
            LambdaSet::Exactly(v) => format!("exactly {}", list(v)),
        };
        if let Some(p) = self.period_text() {
            out.push_str(&format!(" with {p}"));
        }
        if let Some(o) = &self.declared {
            out.push_str(&format!(" as declared for {}", o.name()));
        }
        if let Some(g) = &self.guard {
            out.push_str(&format!(" if {}", g.text));
        }
        out
    }
}

impl fmt::Display for LambdaCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())?;
        if let Some(g) = &self.guard {
            let state = match g.holds {
                Some(true) => "holds",
                Some(false) => "fails",
                None => "undeclared",
            };
            write!(f, " ({state})")?;
        }
        Ok(())
    }
}

impl Serialize for LambdaCondition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let (kind, chars) = match &self.set {
            LambdaSet::None => ("none", &[][..]),
            LambdaSet::All => ("all", &[][..]),
            LambdaSet::AllExcept(v) => ("all_except", v.as_slice()),
            LambdaSet::Exactly(v) => ("exactly", v.as_slice()),
        };
        let texts: Vec<String> = chars.iter().map(|c| c.to_string()).collect();
        let mut st = s.serialize_struct("LambdaCondition", 6)?;
        st.serialize_field("row", &self.row)?;
        st.serialize_field("kind", kind)?;
        st.serialize_field("characters", &texts)?;
        st.serialize_field("guard", &self.guard)?;
        st.serialize_field(
            "period",
            &self
                .period
                .as_ref()
                .map(|p| period_record(p.pi.name(), &p.pi.twist.to_string(), p.jl, p.nonvanishing)),
        )?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}

#[derive(Serialize)]
struct PeriodRecord {
    cuspidal: String,
    twist: String,
    jacquet_langlands: bool,
    nonvanishing: bool,
}

fn period_record(name: &str, twist: &str, jl: bool, nonvanishing: bool) -> PeriodRecord {
    PeriodRecord {
        cuspidal: name.to_string(),
        twist: twist.to_string(),
        jacquet_langlands: jl,
        nonvanishing,
    }
}

fn is_chi_kk(xi: &Character) -> bool {
    *xi == xi.context().chi_kk()
}

/// The characters `Λ` of `K^×` giving anisotropic Bessel models of `rep`.
pub fn anisotropic_lambda_condition(rep: &Gsp4Rep) -> LambdaCondition {
    use Gsp4Rep::*;
    use LambdaSet as S;
    let row = rep.symbol();
    let n = norm_pullback;
    let c = |set| LambdaCondition::new(row, set);
    let xi_chi = |xi: &Character| Guard::fixed("xi = chi_{K/k}", is_chi_kk(xi));
    let xi_not_chi = |xi: &Character| Guard::fixed("xi != chi_{K/k}", !is_chi_kk(xi));
    match rep {
        I { .. } | IIIa { .. } | VII { .. } => c(S::All),
        IIa { chi, sigma } => c(S::AllExcept(vec![n(&(chi * sigma))])),
        IIb { chi, sigma } => c(S::Exactly(vec![n(&(chi * sigma))])),
        IIIb { .. } | IVc { .. } | IVd { .. } | VIc { .. } | VId { .. } => c(S::None),
        IVa { sigma } | VIa { sigma } => c(S::AllExcept(vec![n(sigma)])),
        IVb { sigma } | VIb { sigma } => c(S::Exactly(vec![n(sigma)])),
        Va { xi, sigma } => c(S::AllExcept(vec![n(sigma), n(&(xi * sigma))])),
        Vb { xi, sigma } => c(S::Exactly(vec![n(sigma)])).guarded(xi_not_chi(xi)),
        Vc { xi, sigma } => c(S::Exactly(vec![n(&(xi * sigma))])).guarded(xi_not_chi(xi)),
        Vd { xi, sigma } => c(S::Exactly(vec![n(sigma)])).guarded(xi_chi(xi)),
        VIIIa { pi } => c(S::All).with_period(pi.clone(), false, true),
        VIIIb { pi } => c(S::All).with_period(pi.clone(), false, false),
        IXa { xi, pi } | IXb { xi, pi } => {
            let excluded = if is_chi_kk(xi) {
                match pi.dihedral() {
                    Ok((m, m2)) => Ok(vec![m, m2]),
                    Err(e) => Err(e),
                }
            } else {
                Ok(Vec::new())
            };
            let is_a = matches!(rep, IXa { .. });
            match excluded {
                Ok(v) if is_a => c(S::AllExcept(v)),
                Ok(v) => c(S::Exactly(v)).guarded(xi_chi(xi)),
                Err(e) => {
                    let set = if is_a { S::All } else { S::Exactly(Vec::new()) };
                    c(set).guarded(Guard::declared("dihedral parameters declared", Err(e)))
                }
            }
        }
        X { pi, sigma } => c(S::All).with_period(pi.twisted(sigma), false, true),
        XIa { pi, sigma } => {
            c(S::AllExcept(vec![n(sigma)])).with_period(pi.twisted(sigma), false, true)
        }
        XIb { pi, sigma } => {
            let trivial = sigma.context().trivial_k();
            c(S::Exactly(vec![n(sigma)])).guarded(Guard::declared(
                format!("Hom_T({}, 1) != 0", pi.name()),
                pi.torus_period(&trivial, false),
            ))
        }
        VaStar { sigma, xi } => c(S::Exactly(vec![n(sigma)])).guarded(xi_chi(xi)),
        XIaStar { sigma, pi } => {
            let trivial = sigma.context().trivial_k();
            c(S::Exactly(vec![n(sigma)])).guarded(Guard::declared(
                format!("Hom_T({}^JL, 1) != 0", pi.name()),
                pi.torus_period(&trivial, true),
            ))
        }
        CuspGeneric(o) | CuspOtherNonGeneric(o) => {
            let mut cond = c(S::All);
            cond.declared = Some(o.clone());
            cond
        }
    }
}

/// Whether `(Λ, ψ)` is an anisotropic Bessel model of `rep`.
pub fn has_anisotropic_bessel(rep: &Gsp4Rep, bd: &BesselDatum) -> Result<bool> {
    if bd.lambda.context().id() != rep.context().id() {
        return Err(Error::ContextMismatch);
    }
    if bd.restriction() != rep.central_character() {
        return Ok(false);
    }
    anisotropic_lambda_condition(rep).contains(&bd.lambda)
}

/// Dimension of the space of `(H, ρ∘λ_G)`-equivariant functionals.
///
/// Nonzero only for the extended Saito–Kurokawa types; Va* and XIa* are
/// included through their exceptional poles.
pub fn h_functional_dim(rep: &Gsp4Rep, rho: &Character) -> Result<u8> {
    use Gsp4Rep::*;
    let one = |b: bool| Ok(u8::from(b));
    match rep {
        IIb { chi, sigma } => one(*rho == chi * sigma),
        Vb { xi, sigma } => one(!is_chi_kk(xi) && rho == sigma),
        Vc { xi, sigma } => one(!is_chi_kk(xi) && *rho == xi * sigma),
        Vd { xi, sigma } | VaStar { sigma, xi } => {
            one(is_chi_kk(xi) && (rho == sigma || *rho == xi * sigma))
        }
        VIb { sigma } => one(rho == sigma),
        XIb { pi, sigma } => {
            if rho != sigma {
                return Ok(0);
            }
            one(pi.torus_period(&sigma.context().trivial_k(), false)?)
        }
        XIaStar { sigma, pi } => {
            if rho != sigma {
                return Ok(0);
            }
            one(pi.torus_period(&sigma.context().trivial_k(), true)?)
        }
        _ => Ok(0),
    }
}

fn l(c: &Character) -> EulerFactor {
    tate_factor(c)
}

/// `L(s, ν^{k/2} c)`.
fn lh(c: &Character, k: i64) -> EulerFactor {
    tate_factor(&c.times_nu(Rational::new(k, 2)))
}

fn prod(fs: Vec<EulerFactor>) -> EulerFactor {
    EulerFactor::product(fs.iter())
}

/// Regular factor at `μ = 1`; `None` for rows without anisotropic models.
pub fn regular_table(rep: &Gsp4Rep) -> Option<EulerFactor> {
    use Gsp4Rep::*;
    Some(match rep {
        I { chi1, chi2, sigma } => prod(vec![
            l(sigma),
            l(&(chi1 * sigma)),
            l(&(chi2 * sigma)),
            l(&(&(chi1 * chi2) * sigma)),
        ]),
        IIa { chi, sigma } => prod(vec![
            l(sigma),
            l(&(&chi.pow(2) * sigma)),
            lh(&(chi * sigma), 1),
        ]),
        IIb { chi, sigma } => prod(vec![
            l(sigma),
            l(&(&chi.pow(2) * sigma)),
            lh(&(chi * sigma), -1),
        ]),
        IIIa { chi, sigma } => prod(vec![lh(&(chi * sigma), 1), lh(sigma, 1)]),
        IVa { sigma } => lh(sigma, 3),
        IVb { sigma } => prod(vec![lh(sigma, 3), lh(sigma, -1)]),
        Va { xi, sigma } => prod(vec![lh(sigma, 1), lh(&(xi * sigma), 1)]),
        Vb { xi, sigma } => prod(vec![lh(sigma, -1), lh(&(xi * sigma), 1)]),
        Vc { xi, sigma } => prod(vec![lh(sigma, 1), lh(&(xi * sigma), -1)]),
        Vd { xi, sigma } => prod(vec![lh(sigma, -1), lh(&(xi * sigma), -1)]),
        VIa { sigma } => lh(sigma, 1).pow(2),
        VIb { sigma } => lh(sigma, 1),
        X { pi, sigma } => prod(vec![l(sigma), l(&(&pi.central() * sigma))]),
        XIa { sigma, .. } => lh(sigma, 1),
        XIb { sigma, .. } => lh(sigma, -1),
        VII { .. } | VIIIa { .. } | VIIIb { .. } | IXa { .. } | IXb { .. } => EulerFactor::one(),
        CuspGeneric(_) | CuspOtherNonGeneric(_) | VaStar { .. } | XIaStar { .. } => {
            EulerFactor::one()
        }
        IIIb { .. } | IVc { .. } | IVd { .. } | VIc { .. } | VId { .. } => return None,
    })
}

/// Exceptional factor at `μ = 1`; `None` for rows without anisotropic models.
pub fn exceptional_table(rep: &Gsp4Rep) -> Option<EulerFactor> {
    use Gsp4Rep::*;
    Some(match rep {
        IIb { chi, sigma } => lh(&(chi * sigma), 1),
        Vb { sigma, .. } | VIb { sigma } | XIb { sigma, .. } | XIaStar { sigma, .. } => {
            lh(sigma, 1)
        }
        Vc { xi, sigma } => lh(&(xi * sigma), 1),
        Vd { xi, sigma } | VaStar { sigma, xi } => prod(vec![lh(sigma, 1), lh(&(xi * sigma), 1)]),
        IIIb { .. } | IVc { .. } | IVd { .. } | VIc { .. } | VId { .. } => return None,
        _ => EulerFactor::one(),
    })
}

/// The `μ`-dependent exceptional factor, for the six non-cuspidal types that
/// have one. `None` for every other type.
pub fn exceptional_table_mu(rep: &Gsp4Rep, mu: &Character) -> Option<EulerFactor> {
    use Gsp4Rep::*;
    Some(match rep {
        IIb { chi, sigma } => lh(&(&(mu * chi) * sigma), 1),
        Vb { sigma, .. } | VIb { sigma } | XIb { sigma, .. } => lh(&(mu * sigma), 1),
        Vc { xi, sigma } => lh(&(&(mu * xi) * sigma), 1),
        Vd { xi, sigma } => prod(vec![lh(&(mu * sigma), 1), lh(&(&(mu * xi) * sigma), 1)]),
        _ => return None,
    })
}

/// Spinor factor at `μ = 1` valid for every Bessel model.
pub fn spinor_table(rep: &Gsp4Rep) -> Result<EulerFactor> {
    use Gsp4Rep::*;
    Ok(match rep {
        I { chi1, chi2, sigma } => prod(vec![
            l(sigma),
            l(&(chi1 * sigma)),
            l(&(chi2 * sigma)),
            l(&(&(chi1 * chi2) * sigma)),
        ]),
        IIa { chi, sigma } => prod(vec![
            l(sigma),
            l(&(&chi.pow(2) * sigma)),
            lh(&(chi * sigma), 1),
        ]),
        IIb { chi, sigma } => prod(vec![
            l(sigma),
            l(&(&chi.pow(2) * sigma)),
            lh(&(chi * sigma), -1),
            lh(&(chi * sigma), 1),
        ]),
        IIIa { chi, sigma } => prod(vec![lh(&(chi * sigma), 1), lh(sigma, 1)]),
        IIIb { chi, sigma } => prod(vec![
            lh(&(chi * sigma), 1),
            lh(sigma, 1),
            lh(&(chi * sigma), -1),
            lh(sigma, -1),
        ]),
        IVa { sigma } => lh(sigma, 3),
        IVb { sigma } => prod(vec![lh(sigma, 3), lh(sigma, -1)]),
        IVc { sigma } => prod(vec![lh(sigma, 3), lh(sigma, 1), lh(sigma, -3)]),
        IVd { .. } => return Err(Error::NoBesselModel(TypeSymbol::IVd)),
        Va { xi, sigma } | VaStar { sigma, xi } => prod(vec![lh(sigma, 1), lh(&(xi * sigma), 1)]),
        Vb { xi, sigma } => prod(vec![lh(&(xi * sigma), 1), lh(sigma, 1), lh(sigma, -1)]),
        Vc { xi, sigma } => prod(vec![
            lh(sigma, 1),
            lh(&(xi * sigma), 1),
            lh(&(xi * sigma), -1),
        ]),
        Vd { xi, sigma } => prod(vec![
            lh(sigma, 1),
            lh(&(xi * sigma), 1),
            lh(sigma, -1),
            lh(&(xi * sigma), -1),
        ]),
        VIa { sigma } | VIb { sigma } => lh(sigma, 1).pow(2),
        VIc { sigma } => prod(vec![lh(sigma, 1).pow(2), lh(sigma, -1)]),
        VId { sigma } => prod(vec![lh(sigma, 1).pow(2), lh(sigma, -1).pow(2)]),
        VII { .. } | VIIIa { .. } | VIIIb { .. } | IXa { .. } | IXb { .. } => EulerFactor::one(),
        X { pi, sigma } => prod(vec![l(sigma), l(&(&pi.central() * sigma))]),
        XIa { sigma, .. } | XIaStar { sigma, .. } => lh(sigma, 1),
        XIb { sigma, .. } => prod(vec![lh(sigma, 1), lh(sigma, -1)]),
        CuspGeneric(_) | CuspOtherNonGeneric(_) => EulerFactor::one(),
    })
}

fn require_model(rep: &Gsp4Rep, bd: &BesselDatum) -> Result<()> {
    if has_anisotropic_bessel(rep, bd)? {
        Ok(())
    } else {
        Err(Error::NoAnisotropicModel { ty: rep.symbol() })
    }
}

/// `L_reg(s, Π, Λ, μ)`.
pub fn l_regular(rep: &Gsp4Rep, bd: &BesselDatum, mu: &Character) -> Result<EulerFactor> {
    require_model(rep, bd)?;
    regular_table(&rep.twist(mu)).ok_or(Error::NoAnisotropicModel { ty: rep.symbol() })
}

/// `L_ex(s, Π, Λ, μ)`.
pub fn l_exceptional(rep: &Gsp4Rep, bd: &BesselDatum, mu: &Character) -> Result<EulerFactor> {
    require_model(rep, bd)?;
    if mu.is_trivial() {
        return exceptional_table(rep).ok_or(Error::NoAnisotropicModel { ty: rep.symbol() });
    }
    match rep.symbol() {
        TypeSymbol::VaStar | TypeSymbol::XIaStar => Err(Error::MuUnsupported(rep.symbol())),
        _ => Ok(exceptional_table_mu(rep, mu).unwrap_or_else(EulerFactor::one)),
    }
}

/// Regular, exceptional and full factor for one anisotropic Bessel model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LFactorTriple {
    pub regular: EulerFactor,
    pub exceptional: EulerFactor,
    pub full: EulerFactor,
}

pub fn l_full_anisotropic(
    rep: &Gsp4Rep,
    bd: &BesselDatum,
    mu: &Character,
) -> Result<LFactorTriple> {
    let regular = l_regular(rep, bd, mu)?;
    let exceptional = l_exceptional(rep, bd, mu)?;
    let full = regular.mul(&exceptional);
    Ok(LFactorTriple {
        regular,
        exceptional,
        full,
    })
}

/// `L(s, Π, Λ, μ)` for any Bessel model, split or anisotropic.
pub fn l_full_any_model(rep: &Gsp4Rep, mu: &Character) -> Result<EulerFactor> {
    spinor_table(&rep.twist(mu))
}

/// Provenance notes attached to results.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Caveat {
    /// The row is only established for odd residue characteristic.
    OddResidueCharacteristic { row: TypeSymbol },
    /// The answer uses declared torus-period or Bessel data.
    DeclaredData { row: TypeSymbol },
    /// `μ ≠ 1` was handled by the twist identity.
    TwistIdentity,
}

impl fmt::Display for Caveat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Caveat::OddResidueCharacteristic { row } => {
                write!(f, "note: row {row} requires odd residue characteristic")
            }
            Caveat::DeclaredData { row } => {
                write!(
                    f,
                    "note: row {row} depends on declared Waldspurger/Bessel data"
                )
            }
            Caveat::TwistIdentity => {
                write!(
                    f,
                    "note: mu != 1 handled via L(s,Pi,Lambda,mu) = L(s,mu Pi,(mu o N)Lambda,1)"
                )
            }
        }
    }
}

pub fn caveats(rep: &Gsp4Rep, mu: Option<&Character>) -> Vec<Caveat> {
    let row = rep.symbol();
    let mut out = Vec::new();
    if row.needs_odd_residue_characteristic() {
        out.push(Caveat::OddResidueCharacteristic { row });
    }
    if anisotropic_lambda_condition(rep).uses_declared_data() {
        out.push(Caveat::DeclaredData { row });
    }
    if mu.is_some_and(|m| !m.is_trivial()) {
        out.push(Caveat::TwistIdentity);
    }
    out
}

/// Everything reported for one L-factor query.
#[derive(Clone, Debug, Serialize)]
pub struct LFactorReport {
    #[serde(rename = "type")]
    pub symbol: TypeSymbol,
    pub representation: String,
    pub lambda: String,
    pub mu: String,
    pub condition_trace: LambdaCondition,
    #[serde(flatten)]
    pub factors: LFactorTriple,
    pub caveats: Vec<Caveat>,
}

/// Runs the full anisotropic query, with trace and caveats.
pub fn analyze(rep: &Gsp4Rep, bd: &BesselDatum, mu: &Character) -> Result<LFactorReport> {
    let factors = l_full_anisotropic(rep, bd, mu)?;
    Ok(LFactorReport {
        symbol: rep.symbol(),
        representation: rep.to_string(),
        lambda: bd.lambda.to_string(),
        mu: mu.to_string(),
        condition_trace: anisotropic_lambda_condition(rep),
        factors,
        caveats: caveats(rep, Some(mu)),
    })
}

/// `ν^{1/2}ρ` whose Tate factor is the exceptional pole attached to `ρ`.
pub fn exceptional_pole_character(rho: &Character) -> Character {
    rho.times_nu(half())
}
