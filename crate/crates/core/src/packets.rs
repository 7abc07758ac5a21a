//! Endoscopic L-packets `Π±(π₁, π₂)` and Saito–Kurokawa packets `Π±^SK(π)`.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::catalog::{Environment, Gl2Rep, Gsp4Rep, OpaqueCusp, Param, TypeSymbol};
use crate::character::{half, Character};
use crate::error::{Error, Result};
use crate::euler::{tate_factor, EulerFactor};
use crate::lfactor::l_full_any_model;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PacketSource {
    Endoscopic(Gl2Rep, Gl2Rep),
    SaitoKurokawa(Gl2Rep),
}

impl fmt::Display for PacketSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PacketSource::Endoscopic(a, b) => write!(f, "endoscopic({a}; {b})"),
            PacketSource::SaitoKurokawa(p) => write!(f, "saito_kurokawa({p})"),
        }
    }
}

/// Rows of the endoscopic lift table, in table order.
pub const ENDOSCOPIC_ROWS: [&str; 8] = [
    "principal, principal",
    "principal, special",
    "principal, cuspidal",
    "special, same special",
    "special, quadratic twist of special",
    "cuspidal, special",
    "cuspidal, same cuspidal",
    "cuspidal, other cuspidal",
];

/// Rows of the Saito–Kurokawa table, in table order.
pub const SK_ROWS: [&str; 4] = [
    "principal mu x mu^-1",
    "Steinberg",
    "quadratic twist of Steinberg",
    "cuspidal",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packet {
    pub source: PacketSource,
    /// Index into [`ENDOSCOPIC_ROWS`] or [`SK_ROWS`].
    pub row: usize,
    pub plus: Gsp4Rep,
    pub minus: Option<Gsp4Rep>,
}

impl Packet {
    pub fn row_label(&self) -> &'static str {
        match self.source {
            PacketSource::Endoscopic(..) => ENDOSCOPIC_ROWS[self.row],
            PacketSource::SaitoKurokawa(_) => SK_ROWS[self.row],
        }
    }
}

fn rank(p: &Gl2Rep) -> u8 {
    match p {
        Gl2Rep::Principal(..) => 0,
        Gl2Rep::Cuspidal(_) => 1,
        Gl2Rep::Special(_) => 2,
        Gl2Rep::OneDim(_) => 3,
    }
}

fn build(ty: TypeSymbol, params: Vec<Param>) -> Result<Gsp4Rep> {
    Gsp4Rep::from_parameters(ty, params)
}

fn c(x: Character) -> Param {
    Param::Character(x)
}

/// The endoscopic packet of two generic `GL(2)` representations with equal
/// central characters. Inputs are accepted in either order.
pub fn endoscopic_packet(pi1: &Gl2Rep, pi2: &Gl2Rep, env: &Environment) -> Result<Packet> {
    for p in [pi1, pi2] {
        if !p.is_generic() {
            return Err(Error::NonGeneric(p.to_string()));
        }
    }
    let (w1, w2) = (pi1.central(), pi2.central());
    if w1 != w2 {
        return Err(Error::CentralCharacterMismatch(
            w1.to_string(),
            w2.to_string(),
        ));
    }
    let source = PacketSource::Endoscopic(pi1.clone(), pi2.clone());
    let (a, b) = if rank(pi1) <= rank(pi2) {
        (pi1, pi2)
    } else {
        (pi2, pi1)
    };
    use Gl2Rep::*;
    use TypeSymbol as T;
    let (row, plus, minus) = match (a, b) {
        (Principal(m1, _), Principal(m3, m4)) => {
            let inv = m1.inverse();
            let plus = build(T::I, vec![c(m3 * &inv), c(m4 * &inv), c(m1.clone())])?;
            (0, plus, None)
        }
        (Principal(m1, _), Special(m)) => {
            let plus = build(T::IIa, vec![c(m * &m1.inverse()), c(m1.clone())])?;
            (1, plus, None)
        }
        (Principal(m1, _), Cuspidal(p2)) => {
            let plus = build(
                T::X,
                vec![Param::Cuspidal(p2.twisted(&m1.inverse())), c(m1.clone())],
            )?;
            (2, plus, None)
        }
        (Special(x), Special(m)) if x == m => (
            3,
            build(T::VIa, vec![c(m.clone())])?,
            Some(build(T::VIb, vec![c(m.clone())])?),
        ),
        (Special(x), Special(m)) => {
            let xi = x * &m.inverse();
            (
                4,
                build(T::Va, vec![c(xi.clone()), c(m.clone())])?,
                Some(build(T::VaStar, vec![c(m.clone()), c(xi)])?),
            )
        }
        (Cuspidal(p1), Special(m)) => {
            let pi = p1.twisted(&m.inverse());
            (
                5,
                build(T::XIa, vec![Param::Cuspidal(pi.clone()), c(m.clone())])?,
                Some(build(T::XIaStar, vec![c(m.clone()), Param::Cuspidal(pi)])?),
            )
        }
        (Cuspidal(p1), Cuspidal(p2)) if p1 == p2 => (
            6,
            build(T::VIIIa, vec![Param::Cuspidal(p1.clone())])?,
            Some(build(T::VIIIb, vec![Param::Cuspidal(p1.clone())])?),
        ),
        (Cuspidal(p1), Cuspidal(p2)) => {
            let stem = format!("{}_{}", p1.name(), p2.name());
            let lift = |suffix: &str, generic: bool| -> OpaqueCusp {
                env.synthesized_opaque(&format!("{stem}_{suffix}"), generic, &w1)
            };
            (
                7,
                build(T::CuspGeneric, vec![Param::Opaque(lift("plus", true))])?,
                Some(build(
                    T::CuspOtherNonGeneric,
                    vec![Param::Opaque(lift("minus", false))],
                )?),
            )
        }
        _ => unreachable!("one-dimensional inputs rejected above"),
    };
    Ok(Packet {
        source,
        row,
        plus,
        minus,
    })
}

/// The Saito–Kurokawa packet of a generic `GL(2)` representation with trivial
/// central character.
pub fn sk_packet(pi: &Gl2Rep) -> Result<Packet> {
    if !pi.is_generic() {
        return Err(Error::NonGeneric(pi.to_string()));
    }
    if !pi.central().is_trivial() {
        return Err(Error::NontrivialCentralCharacter(pi.to_string()));
    }
    use TypeSymbol as T;
    let source = PacketSource::SaitoKurokawa(pi.clone());
    let (row, plus, minus) = match pi {
        Gl2Rep::Principal(m, _) => (0, build(T::IIb, vec![c(m.clone()), c(m.inverse())])?, None),
        Gl2Rep::Special(xi) => {
            let one = xi.context().trivial();
            if xi.is_trivial() {
                (
                    1,
                    build(T::VIc, vec![c(one.clone())])?,
                    Some(build(T::VIb, vec![c(one)])?),
                )
            } else {
                (
                    2,
                    build(T::Vb, vec![c(xi.clone()), c(one.clone())])?,
                    Some(build(T::VaStar, vec![c(one), c(xi.clone())])?),
                )
            }
        }
        Gl2Rep::Cuspidal(p) => {
            let one = p.twist.context().trivial();
            (
                3,
                build(T::XIb, vec![Param::Cuspidal(p.clone()), c(one.clone())])?,
                Some(build(T::XIaStar, vec![c(one), Param::Cuspidal(p.clone())])?),
            )
        }
        Gl2Rep::OneDim(_) => unreachable!("rejected above"),
    };
    Ok(Packet {
        source,
        row,
        plus,
        minus,
    })
}

/// `L(s, π ⊗ μ)` for an irreducible representation of `GL(2)`.
pub fn gl2_lfactor(pi: &Gl2Rep, mu: &Character) -> EulerFactor {
    match pi.twist(mu) {
        Gl2Rep::Principal(a, b) => tate_factor(&a).mul(&tate_factor(&b)),
        Gl2Rep::Special(x) => tate_factor(&x.times_nu(half())),
        Gl2Rep::OneDim(x) => {
            tate_factor(&x.times_nu(-half())).mul(&tate_factor(&x.times_nu(half())))
        }
        Gl2Rep::Cuspidal(_) => EulerFactor::one(),
    }
}

/// One member's spinor factor against the product formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemberCheck {
    pub rep: Gsp4Rep,
    pub lhs: EulerFactor,
    pub rhs: EulerFactor,
}

impl MemberCheck {
    pub fn equal(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PacketReport {
    pub packet: Packet,
    pub mu: Character,
    pub plus: MemberCheck,
    pub minus: Option<MemberCheck>,
}

impl PacketReport {
    pub fn equal(&self) -> bool {
        self.plus.equal() && self.minus.as_ref().is_none_or(MemberCheck::equal)
    }
}

impl Serialize for PacketReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Sides {
            plus: String,
            minus: Option<String>,
        }
        let side = |f: fn(&MemberCheck) -> &EulerFactor| Sides {
            plus: f(&self.plus).to_string(),
            minus: self.minus.as_ref().map(|m| f(m).to_string()),
        };
        let mut st = s.serialize_struct("PacketReport", 8)?;
        st.serialize_field("source", &self.packet.source.to_string())?;
        st.serialize_field("row", self.packet.row_label())?;
        st.serialize_field("mu", &self.mu.to_string())?;
        st.serialize_field("plus", &self.plus.rep.to_string())?;
        st.serialize_field("minus", &self.minus.as_ref().map(|m| m.rep.to_string()))?;
        st.serialize_field("lhs", &side(|m| &m.lhs))?;
        st.serialize_field("rhs", &side(|m| &m.rhs))?;
        st.serialize_field("verdict", if self.equal() { "equal" } else { "unequal" })?;
        st.end()
    }
}

/// Compares each member's full spinor factor with the packet's product formula.
pub fn verify_packet_identity(p: &Packet, mu: &Character) -> Result<PacketReport> {
    let nu = |e| tate_factor(&mu.times_nu(e));
    let (rhs_plus, rhs_minus) = match &p.source {
        PacketSource::Endoscopic(a, b) => {
            let f = gl2_lfactor(a, mu).mul(&gl2_lfactor(b, mu));
            (f.clone(), f)
        }
        PacketSource::SaitoKurokawa(pi) => {
            let base = gl2_lfactor(pi, mu).mul(&nu(half()));
            (base.mul(&nu(-half())), base)
        }
    };
    let plus = MemberCheck {
        rep: p.plus.clone(),
        lhs: l_full_any_model(&p.plus, mu)?,
        rhs: rhs_plus,
    };
    let minus = match &p.minus {
        Some(m) => Some(MemberCheck {
            rep: m.clone(),
            lhs: l_full_any_model(m, mu)?,
            rhs: rhs_minus,
        }),
        None => None,
    };
    Ok(PacketReport {
        packet: p.clone(),
        mu: mu.clone(),
        plus,
        minus,
    })
}
