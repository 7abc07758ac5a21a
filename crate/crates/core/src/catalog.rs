//! Irreducible admissible representations of `GSp(4,k)` and `GL(2,k)` in the
//! Sally-Tadić classification, as symbolic values.
//!
//! Representations are stored by their inducing data exactly as displayed in
//! the classification (e.g. `VIb = τ(T, ν^{-1/2}σ)` carries `σ`). Irreducibility
//! side conditions are not re-derived; constructors only check what the L-factor
//! rules rely on: arity, quadraticity of `ξ`, and trivial central characters of
//! the cuspidal `π` in types XI and XIa*.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::character::{
    norm_pullback, CharWord, Character, CharacterK, CharacterKRecord, Context, ContextDecl,
    ExtensionDatum,
};
use crate::error::{Error, Result};

/// Classification symbol of a `GSp(4)` representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeSymbol {
    I,
    IIa,
    IIb,
    IIIa,
    IIIb,
    IVa,
    IVb,
    IVc,
    IVd,
    Va,
    Vb,
    Vc,
    Vd,
    VIa,
    VIb,
    VIc,
    VId,
    VII,
    VIIIa,
    VIIIb,
    IXa,
    IXb,
    X,
    XIa,
    XIb,
    CuspGeneric,
    VaStar,
    XIaStar,
    CuspOtherNonGeneric,
}

impl TypeSymbol {
    /// All symbols in table order.
    pub const ALL: [TypeSymbol; 29] = [
        TypeSymbol::I,
        TypeSymbol::IIa,
        TypeSymbol::IIb,
        TypeSymbol::IIIa,
        TypeSymbol::IIIb,
        TypeSymbol::IVa,
        TypeSymbol::IVb,
        TypeSymbol::IVc,
        TypeSymbol::IVd,
        TypeSymbol::Va,
        TypeSymbol::Vb,
        TypeSymbol::Vc,
        TypeSymbol::Vd,
        TypeSymbol::VIa,
        TypeSymbol::VIb,
        TypeSymbol::VIc,
        TypeSymbol::VId,
        TypeSymbol::VII,
        TypeSymbol::VIIIa,
        TypeSymbol::VIIIb,
        TypeSymbol::IXa,
        TypeSymbol::IXb,
        TypeSymbol::X,
        TypeSymbol::XIa,
        TypeSymbol::XIb,
        TypeSymbol::CuspGeneric,
        TypeSymbol::VaStar,
        TypeSymbol::XIaStar,
        TypeSymbol::CuspOtherNonGeneric,
    ];

    pub fn as_str(self) -> &'static str {
        use TypeSymbol::*;
        match self {
            I => "I",
            IIa => "IIa",
            IIb => "IIb",
            IIIa => "IIIa",
            IIIb => "IIIb",
            IVa => "IVa",
            IVb => "IVb",
            IVc => "IVc",
            IVd => "IVd",
            Va => "Va",
            Vb => "Vb",
            Vc => "Vc",
            Vd => "Vd",
            VIa => "VIa",
            VIb => "VIb",
            VIc => "VIc",
            VId => "VId",
            VII => "VII",
            VIIIa => "VIIIa",
            VIIIb => "VIIIb",
            IXa => "IXa",
            IXb => "IXb",
            X => "X",
            XIa => "XIa",
            XIb => "XIb",
            CuspGeneric => "cuspidal-generic",
            VaStar => "Va*",
            XIaStar => "XIa*",
            CuspOtherNonGeneric => "cuspidal-other",
        }
    }

    pub fn is_generic(self) -> bool {
        use TypeSymbol::*;
        matches!(
            self,
            I | IIa | IIIa | IVa | Va | VIa | VII | VIIIa | IXa | X | XIa | CuspGeneric
        )
    }

    /// Types IIb, Vbcd, VIbcd, XIb, Va*, XIa*.
    pub fn is_extended_sk(self) -> bool {
        use TypeSymbol::*;
        matches!(
            self,
            IIb | Vb | Vc | Vd | VIb | VIc | VId | XIb | VaStar | XIaStar
        )
    }

    pub fn is_cuspidal(self) -> bool {
        use TypeSymbol::*;
        matches!(self, CuspGeneric | VaStar | XIaStar | CuspOtherNonGeneric)
    }

    /// Rows whose values are only established for odd residue characteristic.
    pub fn needs_odd_residue_characteristic(self) -> bool {
        use TypeSymbol::*;
        matches!(self, CuspGeneric | VaStar | XIaStar | CuspOtherNonGeneric)
    }

    /// Parameter names in display order.
    pub fn parameter_names(self) -> &'static [&'static str] {
        use TypeSymbol::*;
        match self {
            I => &["chi1", "chi2", "sigma"],
            IIa | IIb | IIIa | IIIb => &["chi", "sigma"],
            IVa | IVb | IVc | IVd | VIa | VIb | VIc | VId => &["sigma"],
            Va | Vb | Vc | Vd => &["xi", "sigma"],
            VII => &["chi", "pi"],
            VIIIa | VIIIb => &["pi"],
            IXa | IXb => &["xi", "pi"],
            X | XIa | XIb => &["pi", "sigma"],
            VaStar => &["sigma", "xi"],
            XIaStar => &["sigma", "pi"],
            CuspGeneric | CuspOtherNonGeneric => &["cusp"],
        }
    }
}

impl fmt::Display for TypeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TypeSymbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = match s {
            "VaStar" => "Va*",
            "XIaStar" => "XIa*",
            "CuspGeneric" => "cuspidal-generic",
            "CuspOtherNonGeneric" => "cuspidal-other",
            other => other,
        };
        TypeSymbol::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

impl Serialize for TypeSymbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for TypeSymbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A yes/no fact about `K^×`-characters that cannot be computed from the data
/// model: a default plus per-`Λ` overrides.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeclaredPredicate {
    pub default: Option<bool>,
    pub overrides: Vec<(CharacterK, bool)>,
}

impl DeclaredPredicate {
    pub fn constant(value: bool) -> Self {
        DeclaredPredicate {
            default: Some(value),
            overrides: Vec::new(),
        }
    }

    pub fn evaluate(&self, lambda: &CharacterK) -> Option<bool> {
        self.overrides
            .iter()
            .find(|(l, _)| l == lambda)
            .map(|(_, v)| *v)
            .or(self.default)
    }

    pub fn is_declared(&self) -> bool {
        self.default.is_some() || !self.overrides.is_empty()
    }

    pub fn record(&self) -> PredicateRecord {
        PredicateRecord {
            default: self.default,
            overrides: self
                .overrides
                .iter()
                .map(|(l, v)| (l.record(), *v))
                .collect(),
        }
    }

    fn from_record(ctx: &Arc<Context>, r: &PredicateRecord) -> Result<Self> {
        Ok(DeclaredPredicate {
            default: r.default,
            overrides: r
                .overrides
                .iter()
                .map(|(l, v)| Ok((ctx.character_k(l)?, *v)))
                .collect::<Result<_>>()?,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub overrides: Vec<(CharacterKRecord, bool)>,
}

/// Declared data of a cuspidal representation of `GL(2,k)`.
#[derive(Debug, PartialEq, Eq)]
pub struct CuspData {
    pub name: String,
    pub central: Character,
    /// `(μ, μ')` when `π = π(μ)` is dihedral with respect to `K/k`.
    pub dihedral: Option<(CharacterK, CharacterK)>,
    /// Whether `Hom_{T̃}(π, Λ) ≠ 0`.
    pub waldspurger: DeclaredPredicate,
    /// Whether `Hom_{T̃}(π^{JL}, Λ) ≠ 0`.
    pub jacquet_langlands: DeclaredPredicate,
}

/// `μ ⊗ π` for a declared cuspidal `π`.
#[derive(Clone, Debug)]
pub struct CuspidalGl2 {
    pub data: Arc<CuspData>,
    pub twist: Character,
}

impl PartialEq for CuspidalGl2 {
    fn eq(&self, other: &Self) -> bool {
        self.data.name == other.data.name && self.twist == other.twist
    }
}

impl Eq for CuspidalGl2 {}

impl CuspidalGl2 {
    pub fn new(data: Arc<CuspData>) -> Self {
        let twist = data.central.context().trivial();
        CuspidalGl2 { data, twist }
    }

    pub fn name(&self) -> &str {
        &self.data.name
    }

    pub fn central(&self) -> Character {
        &self.data.central * &self.twist.pow(2)
    }

    pub fn twisted(&self, mu: &Character) -> CuspidalGl2 {
        CuspidalGl2 {
            data: self.data.clone(),
            twist: &self.twist * mu,
        }
    }

    /// `Hom_{T̃}(π, Λ) ≠ 0` (or for `π^{JL}` when `jl`), using the declared data of
    /// the untwisted representation. Vanishes unless `Λ` restricts to `ω_π`.
    pub fn torus_period(&self, lambda: &CharacterK, jl: bool) -> Result<bool> {
        if lambda.restrict_to_base() != self.central() {
            return Ok(false);
        }
        let untwisted = lambda * &norm_pullback(&self.twist.inverse());
        let (pred, flag) = if jl {
            (&self.data.jacquet_langlands, "jacquet_langlands")
        } else {
            (&self.data.waldspurger, "waldspurger")
        };
        pred.evaluate(&untwisted)
            .ok_or_else(|| Error::UndeclaredFlag {
                name: self.data.name.clone(),
                flag: flag.to_string(),
            })
    }

    /// Dihedral parameters `(μ, μ')` of this twist, as characters of `K^×`.
    pub fn dihedral(&self) -> Result<(CharacterK, CharacterK)> {
        let (mu, mu_conj) = self
            .data
            .dihedral
            .as_ref()
            .ok_or_else(|| Error::DihedralUndeclared(self.data.name.clone()))?;
        let shift = norm_pullback(&self.twist);
        Ok((mu * &shift, mu_conj * &shift))
    }
}

/// An irreducible representation of `GL(2,k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gl2Rep {
    /// `μ₁ × μ₂`.
    Principal(Character, Character),
    /// `μ·St`.
    Special(Character),
    /// `μ∘det`.
    OneDim(Character),
    Cuspidal(CuspidalGl2),
}

impl Gl2Rep {
    /// `μ₁ × μ₂`, rejecting the reducible case `μ₁ = μ₂ν^{±1}`.
    pub fn principal(mu1: Character, mu2: Character) -> Result<Gl2Rep> {
        let ratio = mu1.try_mul(&mu2.inverse())?;
        let nu = mu1.context().nu(1.into())?;
        if ratio == nu || ratio == nu.inverse() {
            return Err(Error::Reducible(format!("{mu1} x {mu2}")));
        }
        Ok(Gl2Rep::Principal(mu1, mu2))
    }

    pub fn central(&self) -> Character {
        match self {
            Gl2Rep::Principal(a, b) => a * b,
            Gl2Rep::Special(m) | Gl2Rep::OneDim(m) => m.pow(2),
            Gl2Rep::Cuspidal(c) => c.central(),
        }
    }

    pub fn is_generic(&self) -> bool {
        !matches!(self, Gl2Rep::OneDim(_))
    }

    /// Special or cuspidal.
    pub fn is_discrete_series(&self) -> bool {
        matches!(self, Gl2Rep::Special(_) | Gl2Rep::Cuspidal(_))
    }

    pub fn twist(&self, mu: &Character) -> Gl2Rep {
        match self {
            Gl2Rep::Principal(a, b) => Gl2Rep::Principal(a * mu, b * mu),
            Gl2Rep::Special(m) => Gl2Rep::Special(m * mu),
            Gl2Rep::OneDim(m) => Gl2Rep::OneDim(m * mu),
            Gl2Rep::Cuspidal(c) => Gl2Rep::Cuspidal(c.twisted(mu)),
        }
    }
}

/// Declared data of a cuspidal `GSp(4)` representation treated as opaque.
#[derive(Debug, PartialEq, Eq)]
pub struct OpaqueData {
    pub name: String,
    pub generic: bool,
    pub central: Character,
    /// Whether `(Λ, ψ)` is an anisotropic Bessel model.
    pub bessel: DeclaredPredicate,
}

#[derive(Clone, Debug)]
pub struct OpaqueCusp {
    pub data: Arc<OpaqueData>,
    pub twist: Character,
}

impl PartialEq for OpaqueCusp {
    fn eq(&self, other: &Self) -> bool {
        self.data.name == other.data.name && self.twist == other.twist
    }
}

impl Eq for OpaqueCusp {}

impl OpaqueCusp {
    pub fn new(data: Arc<OpaqueData>) -> Self {
        let twist = data.central.context().trivial();
        OpaqueCusp { data, twist }
    }

    pub fn name(&self) -> &str {
        &self.data.name
    }

    pub fn central(&self) -> Character {
        &self.data.central * &self.twist.pow(2)
    }

    pub fn has_model(&self, lambda: &CharacterK) -> Result<bool> {
        if lambda.restrict_to_base() != self.central() {
            return Ok(false);
        }
        let untwisted = lambda * &norm_pullback(&self.twist.inverse());
        self.data
            .bessel
            .evaluate(&untwisted)
            .ok_or_else(|| Error::UndeclaredFlag {
                name: self.data.name.clone(),
                flag: "bessel".into(),
            })
    }
}

/// A classified irreducible representation of `GSp(4,k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gsp4Rep {
    /// `χ₁ × χ₂ ⋊ σ`
    I {
        chi1: Character,
        chi2: Character,
        sigma: Character,
    },
    /// `χSt ⋊ σ`
    IIa {
        chi: Character,
        sigma: Character,
    },
    /// `χ1_{GL(2)} ⋊ σ`
    IIb {
        chi: Character,
        sigma: Character,
    },
    /// `χ ⋊ σSt`
    IIIa {
        chi: Character,
        sigma: Character,
    },
    /// `χ ⋊ σ1`
    IIIb {
        chi: Character,
        sigma: Character,
    },
    /// `σSt_G`
    IVa {
        sigma: Character,
    },
    /// `L(ν², ν^{-1}σSt)`
    IVb {
        sigma: Character,
    },
    /// `L(ν^{3/2}St, ν^{-3/2}σ)`
    IVc {
        sigma: Character,
    },
    /// `σ1_G`
    IVd {
        sigma: Character,
    },
    /// `δ([ξ,νξ], ν^{-1/2}σ)`
    Va {
        xi: Character,
        sigma: Character,
    },
    /// `L(ν^{1/2}ξSt, ν^{-1/2}σ)`
    Vb {
        xi: Character,
        sigma: Character,
    },
    /// `L(ν^{1/2}ξSt, ν^{-1/2}ξσ)`
    Vc {
        xi: Character,
        sigma: Character,
    },
    /// `L(νξ, ξ ⋊ ν^{-1/2}σ)`
    Vd {
        xi: Character,
        sigma: Character,
    },
    /// `τ(S, ν^{-1/2}σ)`
    VIa {
        sigma: Character,
    },
    /// `τ(T, ν^{-1/2}σ)`
    VIb {
        sigma: Character,
    },
    /// `L(ν^{1/2}St, ν^{-1/2}σ)`
    VIc {
        sigma: Character,
    },
    /// `L(ν, 1 ⋊ ν^{-1/2}σ)`
    VId {
        sigma: Character,
    },
    /// `χ ⋊ π`
    VII {
        chi: Character,
        pi: CuspidalGl2,
    },
    /// `τ(S, π)`
    VIIIa {
        pi: CuspidalGl2,
    },
    /// `τ(T, π)`
    VIIIb {
        pi: CuspidalGl2,
    },
    /// `δ(νξ, ν^{-1/2}π)` with `π = π(μ)`
    IXa {
        xi: Character,
        pi: CuspidalGl2,
    },
    /// `L(νξ, ν^{-1/2}π)` with `π = π(μ)`
    IXb {
        xi: Character,
        pi: CuspidalGl2,
    },
    /// `π ⋊ σ`
    X {
        pi: CuspidalGl2,
        sigma: Character,
    },
    /// `δ(ν^{1/2}π, ν^{-1/2}σ)`
    XIa {
        pi: CuspidalGl2,
        sigma: Character,
    },
    /// `L(ν^{1/2}π, ν^{-1/2}σ)`
    XIb {
        pi: CuspidalGl2,
        sigma: Character,
    },
    CuspGeneric(OpaqueCusp),
    /// `θ₋(σSt, ξσSt)`
    VaStar {
        sigma: Character,
        xi: Character,
    },
    /// `θ₋(σSt, σπ)`
    XIaStar {
        sigma: Character,
        pi: CuspidalGl2,
    },
    CuspOtherNonGeneric(OpaqueCusp),
}

/// A named parameter of a representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Param {
    Character(Character),
    Cuspidal(CuspidalGl2),
    Opaque(OpaqueCusp),
}

impl Gsp4Rep {
    pub fn symbol(&self) -> TypeSymbol {
        use Gsp4Rep::*;
        match self {
            I { .. } => TypeSymbol::I,
            IIa { .. } => TypeSymbol::IIa,
            IIb { .. } => TypeSymbol::IIb,
            IIIa { .. } => TypeSymbol::IIIa,
            IIIb { .. } => TypeSymbol::IIIb,
            IVa { .. } => TypeSymbol::IVa,
            IVb { .. } => TypeSymbol::IVb,
            IVc { .. } => TypeSymbol::IVc,
            IVd { .. } => TypeSymbol::IVd,
            Va { .. } => TypeSymbol::Va,
            Vb { .. } => TypeSymbol::Vb,
            Vc { .. } => TypeSymbol::Vc,
            Vd { .. } => TypeSymbol::Vd,
            VIa { .. } => TypeSymbol::VIa,
            VIb { .. } => TypeSymbol::VIb,
            VIc { .. } => TypeSymbol::VIc,
            VId { .. } => TypeSymbol::VId,
            VII { .. } => TypeSymbol::VII,
            VIIIa { .. } => TypeSymbol::VIIIa,
            VIIIb { .. } => TypeSymbol::VIIIb,
            IXa { .. } => TypeSymbol::IXa,
            IXb { .. } => TypeSymbol::IXb,
            X { .. } => TypeSymbol::X,
            XIa { .. } => TypeSymbol::XIa,
            XIb { .. } => TypeSymbol::XIb,
            CuspGeneric(_) => TypeSymbol::CuspGeneric,
            VaStar { .. } => TypeSymbol::VaStar,
            XIaStar { .. } => TypeSymbol::XIaStar,
            CuspOtherNonGeneric(_) => TypeSymbol::CuspOtherNonGeneric,
        }
    }

    /// Parameters in the order of [`TypeSymbol::parameter_names`].
    pub fn parameters(&self) -> Vec<Param> {
        use Gsp4Rep::*;
        use Param::{Character as C, Cuspidal as P};
        match self {
            I { chi1, chi2, sigma } => vec![C(chi1.clone()), C(chi2.clone()), C(sigma.clone())],
            IIa { chi, sigma } | IIb { chi, sigma } | IIIa { chi, sigma } | IIIb { chi, sigma } => {
                vec![C(chi.clone()), C(sigma.clone())]
            }
            IVa { sigma }
            | IVb { sigma }
            | IVc { sigma }
            | IVd { sigma }
            | VIa { sigma }
            | VIb { sigma }
            | VIc { sigma }
            | VId { sigma } => vec![C(sigma.clone())],
            Va { xi, sigma } | Vb { xi, sigma } | Vc { xi, sigma } | Vd { xi, sigma } => {
                vec![C(xi.clone()), C(sigma.clone())]
            }
            VII { chi, pi } => vec![C(chi.clone()), P(pi.clone())],
            VIIIa { pi } | VIIIb { pi } => vec![P(pi.clone())],
            IXa { xi, pi } | IXb { xi, pi } => vec![C(xi.clone()), P(pi.clone())],
            X { pi, sigma } | XIa { pi, sigma } | XIb { pi, sigma } => {
                vec![P(pi.clone()), C(sigma.clone())]
            }
            VaStar { sigma, xi } => vec![C(sigma.clone()), C(xi.clone())],
            XIaStar { sigma, pi } => vec![C(sigma.clone()), P(pi.clone())],
            CuspGeneric(o) | CuspOtherNonGeneric(o) => vec![Param::Opaque(o.clone())],
        }
    }

    /// Builds and validates a representation from positional parameters.
    pub fn from_parameters(symbol: TypeSymbol, params: Vec<Param>) -> Result<Gsp4Rep> {
        use TypeSymbol as T;
        let arity = symbol.parameter_names().len();
        let bad = |reason: &str| Error::InvalidParameters {
            ty: symbol,
            reason: reason.to_string(),
        };
        if params.len() != arity {
            return Err(bad(&format!(
                "expected {arity} parameters, got {}",
                params.len()
            )));
        }
        let mut it = params.into_iter();
        let mut c = || match it.next() {
            Some(Param::Character(c)) => Ok(c),
            _ => Err(bad("expected a character")),
        };
        let rep = match symbol {
            T::I => Gsp4Rep::I {
                chi1: c()?,
                chi2: c()?,
                sigma: c()?,
            },
            T::IIa => Gsp4Rep::IIa {
                chi: c()?,
                sigma: c()?,
            },
            T::IIb => Gsp4Rep::IIb {
                chi: c()?,
                sigma: c()?,
            },
            T::IIIa => Gsp4Rep::IIIa {
                chi: c()?,
                sigma: c()?,
            },
            T::IIIb => Gsp4Rep::IIIb {
                chi: c()?,
                sigma: c()?,
            },
            T::IVa => Gsp4Rep::IVa { sigma: c()? },
            T::IVb => Gsp4Rep::IVb { sigma: c()? },
            T::IVc => Gsp4Rep::IVc { sigma: c()? },
            T::IVd => Gsp4Rep::IVd { sigma: c()? },
            T::Va => Gsp4Rep::Va {
                xi: c()?,
                sigma: c()?,
            },
            T::Vb => Gsp4Rep::Vb {
                xi: c()?,
                sigma: c()?,
            },
            T::Vc => Gsp4Rep::Vc {
                xi: c()?,
                sigma: c()?,
            },
            T::Vd => Gsp4Rep::Vd {
                xi: c()?,
                sigma: c()?,
            },
            T::VIa => Gsp4Rep::VIa { sigma: c()? },
            T::VIb => Gsp4Rep::VIb { sigma: c()? },
            T::VIc => Gsp4Rep::VIc { sigma: c()? },
            T::VId => Gsp4Rep::VId { sigma: c()? },
            T::VaStar => Gsp4Rep::VaStar {
                sigma: c()?,
                xi: c()?,
            },
            _ => {
                let params: Vec<Param> = it.collect();
                return Self::from_parameters_with_gl2(symbol, params);
            }
        };
        rep.validate()?;
        Ok(rep)
    }

    fn from_parameters_with_gl2(symbol: TypeSymbol, params: Vec<Param>) -> Result<Gsp4Rep> {
        use TypeSymbol as T;
        let bad = |reason: &str| Error::InvalidParameters {
            ty: symbol,
            reason: reason.to_string(),
        };
        let mut it = params.into_iter();
        let mut next = || it.next().ok_or_else(|| bad("missing parameter"));
        let chr = |p: Param| match p {
            Param::Character(c) => Ok(c),
            _ => Err(bad("expected a character")),
        };
        let cusp = |p: Param| match p {
            Param::Cuspidal(c) => Ok(c),
            _ => Err(bad("expected a cuspidal GL(2) representation")),
        };
        let rep = match symbol {
            T::VII => Gsp4Rep::VII {
                chi: chr(next()?)?,
                pi: cusp(next()?)?,
            },
            T::VIIIa => Gsp4Rep::VIIIa { pi: cusp(next()?)? },
            T::VIIIb => Gsp4Rep::VIIIb { pi: cusp(next()?)? },
            T::IXa => Gsp4Rep::IXa {
                xi: chr(next()?)?,
                pi: cusp(next()?)?,
            },
            T::IXb => Gsp4Rep::IXb {
                xi: chr(next()?)?,
                pi: cusp(next()?)?,
            },
            T::X => Gsp4Rep::X {
                pi: cusp(next()?)?,
                sigma: chr(next()?)?,
            },
            T::XIa => Gsp4Rep::XIa {
                pi: cusp(next()?)?,
                sigma: chr(next()?)?,
            },
            T::XIb => Gsp4Rep::XIb {
                pi: cusp(next()?)?,
                sigma: chr(next()?)?,
            },
            T::XIaStar => Gsp4Rep::XIaStar {
                sigma: chr(next()?)?,
                pi: cusp(next()?)?,
            },
            T::CuspGeneric | T::CuspOtherNonGeneric => {
                let o = match next()? {
                    Param::Opaque(o) => o,
                    _ => return Err(bad("expected an opaque cuspidal declaration")),
                };
                if o.data.generic != (symbol == T::CuspGeneric) {
                    return Err(bad("genericity of the declaration does not match the type"));
                }
                if symbol == T::CuspGeneric {
                    Gsp4Rep::CuspGeneric(o)
                } else {
                    Gsp4Rep::CuspOtherNonGeneric(o)
                }
            }
            _ => unreachable!("character-only types handled by from_parameters"),
        };
        rep.validate()?;
        Ok(rep)
    }

    /// Checks arity-independent constraints: common context, quadratic
    /// nontrivial `ξ`, trivial central character of `π` where required.
    pub fn validate(&self) -> Result<()> {
        let ty = self.symbol();
        let bad = |reason: String| Error::InvalidParameters { ty, reason };
        let ctx = self.context().id();
        for p in self.parameters() {
            let id = match &p {
                Param::Character(c) => c.context().id(),
                Param::Cuspidal(c) => c.twist.context().id(),
                Param::Opaque(o) => o.twist.context().id(),
            };
            if id != ctx {
                return Err(Error::ContextMismatch);
            }
        }
        if let Some(xi) = self.xi() {
            if !xi.pow(2).is_trivial() || xi.is_trivial() {
                return Err(bad(format!(
                    "xi = {xi} must be a nontrivial quadratic character"
                )));
            }
        }
        if matches!(ty, TypeSymbol::XIa | TypeSymbol::XIb | TypeSymbol::XIaStar) {
            let pi = self.pi().expect("XI types carry pi");
            if !pi.central().is_trivial() {
                return Err(bad(format!(
                    "pi = {} must have trivial central character",
                    pi.name()
                )));
            }
        }
        Ok(())
    }

    pub fn context(&self) -> Arc<Context> {
        match &self.parameters()[0] {
            Param::Character(c) => c.context().clone(),
            Param::Cuspidal(c) => c.twist.context().clone(),
            Param::Opaque(o) => o.twist.context().clone(),
        }
    }

    pub fn sigma(&self) -> Option<&Character> {
        use Gsp4Rep::*;
        match self {
            I { sigma, .. }
            | IIa { sigma, .. }
            | IIb { sigma, .. }
            | IIIa { sigma, .. }
            | IIIb { sigma, .. }
            | IVa { sigma }
            | IVb { sigma }
            | IVc { sigma }
            | IVd { sigma }
            | Va { sigma, .. }
            | Vb { sigma, .. }
            | Vc { sigma, .. }
            | Vd { sigma, .. }
            | VIa { sigma }
            | VIb { sigma }
            | VIc { sigma }
            | VId { sigma }
            | X { sigma, .. }
            | XIa { sigma, .. }
            | XIb { sigma, .. }
            | VaStar { sigma, .. }
            | XIaStar { sigma, .. } => Some(sigma),
            _ => None,
        }
    }

    pub fn xi(&self) -> Option<&Character> {
        use Gsp4Rep::*;
        match self {
            Va { xi, .. }
            | Vb { xi, .. }
            | Vc { xi, .. }
            | Vd { xi, .. }
            | IXa { xi, .. }
            | IXb { xi, .. }
            | VaStar { xi, .. } => Some(xi),
            _ => None,
        }
    }

    pub fn pi(&self) -> Option<&CuspidalGl2> {
        use Gsp4Rep::*;
        match self {
            VII { pi, .. }
            | VIIIa { pi }
            | VIIIb { pi }
            | IXa { pi, .. }
            | IXb { pi, .. }
            | X { pi, .. }
            | XIa { pi, .. }
            | XIb { pi, .. }
            | XIaStar { pi, .. } => Some(pi),
            _ => None,
        }
    }

    /// Central character, computed from the inducing data.
    pub fn central_character(&self) -> Character {
        use Gsp4Rep::*;
        match self {
            I { chi1, chi2, sigma } => &(chi1 * chi2) * &sigma.pow(2),
            IIa { chi, sigma } | IIb { chi, sigma } => &chi.pow(2) * &sigma.pow(2),
            IIIa { chi, sigma } | IIIb { chi, sigma } => chi * &sigma.pow(2),
            IVa { sigma }
            | IVb { sigma }
            | IVc { sigma }
            | IVd { sigma }
            | VIa { sigma }
            | VIb { sigma }
            | VIc { sigma }
            | VId { sigma } => sigma.pow(2),
            Va { sigma, .. } | Vb { sigma, .. } | Vc { sigma, .. } | Vd { sigma, .. } => {
                sigma.pow(2)
            }
            VII { chi, pi } => chi * &pi.central(),
            VIIIa { pi } | VIIIb { pi } => pi.central(),
            IXa { xi, pi } | IXb { xi, pi } => xi * &pi.central(),
            X { pi, sigma } | XIa { pi, sigma } | XIb { pi, sigma } => {
                &pi.central() * &sigma.pow(2)
            }
            VaStar { sigma, .. } => sigma.pow(2),
            XIaStar { sigma, pi } => &pi.central() * &sigma.pow(2),
            CuspGeneric(o) | CuspOtherNonGeneric(o) => o.central(),
        }
    }

    /// `μ ⊗ Π`: the `σ` slot absorbs `μ`; Klingen-type cuspidal `π` becomes `μπ`.
    pub fn twist(&self, mu: &Character) -> Gsp4Rep {
        use Gsp4Rep::*;
        let s = |sigma: &Character| sigma * mu;
        match self {
            I { chi1, chi2, sigma } => I {
                chi1: chi1.clone(),
                chi2: chi2.clone(),
                sigma: s(sigma),
            },
            IIa { chi, sigma } => IIa {
                chi: chi.clone(),
                sigma: s(sigma),
            },
            IIb { chi, sigma } => IIb {
                chi: chi.clone(),
                sigma: s(sigma),
            },
            IIIa { chi, sigma } => IIIa {
                chi: chi.clone(),
                sigma: s(sigma),
            },
            IIIb { chi, sigma } => IIIb {
                chi: chi.clone(),
                sigma: s(sigma),
            },
            IVa { sigma } => IVa { sigma: s(sigma) },
            IVb { sigma } => IVb { sigma: s(sigma) },
            IVc { sigma } => IVc { sigma: s(sigma) },
            IVd { sigma } => IVd { sigma: s(sigma) },
            Va { xi, sigma } => Va {
                xi: xi.clone(),
                sigma: s(sigma),
            },
            Vb { xi, sigma } => Vb {
                xi: xi.clone(),
                sigma: s(sigma),
            },
            Vc { xi, sigma } => Vc {
                xi: xi.clone(),
                sigma: s(sigma),
            },
            Vd { xi, sigma } => Vd {
                xi: xi.clone(),
                sigma: s(sigma),
            },
            VIa { sigma } => VIa { sigma: s(sigma) },
            VIb { sigma } => VIb { sigma: s(sigma) },
            VIc { sigma } => VIc { sigma: s(sigma) },
            VId { sigma } => VId { sigma: s(sigma) },
            VII { chi, pi } => VII {
                chi: chi.clone(),
                pi: pi.twisted(mu),
            },
            VIIIa { pi } => VIIIa { pi: pi.twisted(mu) },
            VIIIb { pi } => VIIIb { pi: pi.twisted(mu) },
            IXa { xi, pi } => IXa {
                xi: xi.clone(),
                pi: pi.twisted(mu),
            },
            IXb { xi, pi } => IXb {
                xi: xi.clone(),
                pi: pi.twisted(mu),
            },
            X { pi, sigma } => X {
                pi: pi.clone(),
                sigma: s(sigma),
            },
            XIa { pi, sigma } => XIa {
                pi: pi.clone(),
                sigma: s(sigma),
            },
            XIb { pi, sigma } => XIb {
                pi: pi.clone(),
                sigma: s(sigma),
            },
            VaStar { sigma, xi } => VaStar {
                sigma: s(sigma),
                xi: xi.clone(),
            },
            XIaStar { sigma, pi } => XIaStar {
                sigma: s(sigma),
                pi: pi.clone(),
            },
            CuspGeneric(o) => CuspGeneric(OpaqueCusp {
                data: o.data.clone(),
                twist: &o.twist * mu,
            }),
            CuspOtherNonGeneric(o) => CuspOtherNonGeneric(OpaqueCusp {
                data: o.data.clone(),
                twist: &o.twist * mu,
            }),
        }
    }

    pub fn is_generic(&self) -> bool {
        self.symbol().is_generic()
    }

    pub fn is_extended_sk(&self) -> bool {
        self.symbol().is_extended_sk()
    }
}

/// Marker for the additive character `ψ`: always nontrivial on `S`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Nondegenerate;

/// An anisotropic Bessel datum `(Λ, ψ)` for the extension `K/k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BesselDatum {
    pub extension: ExtensionDatum,
    pub lambda: CharacterK,
    pub psi: Nondegenerate,
}

impl BesselDatum {
    pub fn new(lambda: CharacterK) -> Self {
        BesselDatum {
            extension: lambda.context().extension().clone(),
            lambda,
            psi: Nondegenerate,
        }
    }

    /// `Λ|_{k^×}`.
    pub fn restriction(&self) -> Character {
        self.lambda.restrict_to_base()
    }
}

/// Serializable declaration of a cuspidal `GL(2)` representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspDecl {
    pub name: String,
    pub central: CharWord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dihedral: Option<(CharacterKRecord, CharacterKRecord)>,
    #[serde(default)]
    pub waldspurger: PredicateRecord,
    #[serde(default)]
    pub jacquet_langlands: PredicateRecord,
}

impl CuspDecl {
    pub fn new(name: impl Into<String>, central: CharWord) -> Self {
        CuspDecl {
            name: name.into(),
            central,
            dihedral: None,
            waldspurger: PredicateRecord::default(),
            jacquet_langlands: PredicateRecord::default(),
        }
    }
}

/// Serializable declaration of an opaque cuspidal `GSp(4)` representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpaqueDecl {
    pub name: String,
    pub generic: bool,
    pub central: CharWord,
    #[serde(default)]
    pub bessel: PredicateRecord,
}

/// Everything a query needs: the character context plus cuspidal declarations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvironmentDecl {
    pub context: ContextDecl,
    #[serde(default)]
    pub cuspidals: Vec<CuspDecl>,
    #[serde(default)]
    pub opaque: Vec<OpaqueDecl>,
}

impl EnvironmentDecl {
    pub fn new(context: ContextDecl) -> Self {
        EnvironmentDecl {
            context,
            cuspidals: Vec::new(),
            opaque: Vec::new(),
        }
    }
}

/// Frozen declarations; names resolve against it.
#[derive(Clone, Debug)]
pub struct Environment {
    ctx: Arc<Context>,
    decl: EnvironmentDecl,
    cusps: BTreeMap<String, Arc<CuspData>>,
    opaque: BTreeMap<String, Arc<OpaqueData>>,
}

impl Environment {
    pub fn new(decl: EnvironmentDecl) -> Result<Environment> {
        let ctx = Context::new(decl.context.clone())?;
        Self::with_context(ctx, decl)
    }

    /// Builds on an existing frozen context (its declarations replace `decl.context`).
    pub fn with_context(ctx: Arc<Context>, mut decl: EnvironmentDecl) -> Result<Environment> {
        decl.context = ctx.decl().clone();
        let mut cusps = BTreeMap::new();
        let mut opaque = BTreeMap::new();
        for c in &decl.cuspidals {
            check_new_name(&ctx, &c.name, &cusps, &opaque)?;
            let dihedral = c
                .dihedral
                .as_ref()
                .map(|(a, b)| Ok::<_, Error>((ctx.character_k(a)?, ctx.character_k(b)?)))
                .transpose()?;
            let data = CuspData {
                name: c.name.clone(),
                central: ctx.character(&c.central)?,
                dihedral,
                waldspurger: DeclaredPredicate::from_record(&ctx, &c.waldspurger)?,
                jacquet_langlands: DeclaredPredicate::from_record(&ctx, &c.jacquet_langlands)?,
            };
            cusps.insert(c.name.clone(), Arc::new(data));
        }
        for o in &decl.opaque {
            check_new_name(&ctx, &o.name, &cusps, &opaque)?;
            let data = OpaqueData {
                name: o.name.clone(),
                generic: o.generic,
                central: ctx.character(&o.central)?,
                bessel: DeclaredPredicate::from_record(&ctx, &o.bessel)?,
            };
            opaque.insert(o.name.clone(), Arc::new(data));
        }
        Ok(Environment {
            ctx,
            decl,
            cusps,
            opaque,
        })
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn decl(&self) -> &EnvironmentDecl {
        &self.decl
    }

    pub fn cuspidal(&self, name: &str) -> Option<CuspidalGl2> {
        self.cusps.get(name).cloned().map(CuspidalGl2::new)
    }

    pub fn opaque(&self, name: &str) -> Option<OpaqueCusp> {
        self.opaque.get(name).cloned().map(OpaqueCusp::new)
    }

    pub fn character(&self, name: &str) -> Result<Character> {
        self.ctx.generator(name)
    }

    /// The opaque cuspidal with this name, declaring it on the fly if needed.
    ///
    /// Used by packet constructors for the cuspidal members they cannot describe.
    pub(crate) fn synthesized_opaque(
        &self,
        name: &str,
        generic: bool,
        central: &Character,
    ) -> OpaqueCusp {
        match self.opaque.get(name) {
            Some(d) if d.generic == generic && d.central == *central => OpaqueCusp::new(d.clone()),
            _ => OpaqueCusp::new(Arc::new(OpaqueData {
                name: name.to_string(),
                generic,
                central: central.clone(),
                bessel: DeclaredPredicate::default(),
            })),
        }
    }
}

fn check_new_name(
    ctx: &Context,
    name: &str,
    cusps: &BTreeMap<String, Arc<CuspData>>,
    opaque: &BTreeMap<String, Arc<OpaqueData>>,
) -> Result<()> {
    if !crate::character::is_identifier(name) {
        return Err(Error::InvalidDeclaration(format!(
            "`{name}` is not an identifier"
        )));
    }
    if crate::character::RESERVED_NAMES.contains(&name)
        || ctx.has_generator(name)
        || ctx.has_k_character(name)
        || cusps.contains_key(name)
        || opaque.contains_key(name)
    {
        return Err(Error::InvalidDeclaration(format!(
            "`{name}` is reserved or declared twice"
        )));
    }
    Ok(())
}
