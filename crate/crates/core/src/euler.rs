//! Local Euler factors `∏ (1 − m·X)^{-1}` with `X = q^{-s}`, stored as a
//! multiset of Satake monomials `m`.
//!
//! Factors are never expanded symbolically: equality, divisibility and
//! quotients are multiset operations. Numeric work happens only after
//! [`EulerFactor::specialize`] binds `q` and every unit symbol.

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::character::{rational_string, Character, Rational};
use crate::error::{Error, Result};

/// Abstract unit `u_g = g(ϖ)` of an unramified generator `g`, with its declared order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnitSymbol {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
}

impl UnitSymbol {
    pub fn label(&self) -> String {
        format!("u_{}", self.name)
    }
}

/// `sign · ∏ u^e · q^{q_exp}` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SatakeMonomial {
    sign: i8,
    units: BTreeMap<UnitSymbol, i64>,
    q_exp: Rational,
}

impl SatakeMonomial {
    pub fn new(sign: i8, units: BTreeMap<UnitSymbol, i64>, q_exp: Rational) -> Self {
        let mut units = units;
        for (u, e) in units.iter_mut() {
            if let Some(n) = u.order {
                *e = e.rem_euclid(n as i64);
            }
        }
        units.retain(|_, e| *e != 0);
        SatakeMonomial {
            sign: if sign < 0 { -1 } else { 1 },
            units,
            q_exp,
        }
    }

    pub fn one() -> Self {
        SatakeMonomial::new(1, BTreeMap::new(), Rational::zero())
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn units(&self) -> &BTreeMap<UnitSymbol, i64> {
        &self.units
    }

    pub fn q_exponent(&self) -> Rational {
        self.q_exp
    }

    pub fn mul(&self, other: &SatakeMonomial) -> SatakeMonomial {
        let mut units = self.units.clone();
        for (u, e) in &other.units {
            *units.entry(u.clone()).or_insert(0) += e;
        }
        SatakeMonomial::new(self.sign * other.sign, units, self.q_exp + other.q_exp)
    }

    /// Numeric value for `q` and bound units.
    pub fn evaluate(&self, q: f64, units: &BTreeMap<String, f64>) -> Result<f64> {
        let mut v = self.sign as f64;
        for (u, e) in &self.units {
            let value = units
                .get(&u.name)
                .or_else(|| units.get(&u.label()))
                .ok_or_else(|| Error::UnboundUnit(u.label()))?;
            v *= value.powi(*e as i32);
        }
        let exp = self.q_exp.to_f64().expect("finite rational");
        Ok(v * q.powf(exp))
    }

    fn record(&self) -> MonomialRecord {
        MonomialRecord {
            sign: self.sign,
            units: self
                .units
                .iter()
                .map(|(u, e)| UnitPower {
                    name: u.name.clone(),
                    exp: *e,
                    order: u.order,
                })
                .collect(),
            q_exp: self.q_exp,
        }
    }

    fn from_record(r: &MonomialRecord) -> Self {
        let units = r
            .units
            .iter()
            .map(|p| {
                (
                    UnitSymbol {
                        name: p.name.clone(),
                        order: p.order,
                    },
                    p.exp,
                )
            })
            .collect();
        SatakeMonomial::new(r.sign, units, r.q_exp)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct UnitPower {
    name: String,
    exp: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct MonomialRecord {
    sign: i8,
    units: Vec<UnitPower>,
    #[serde(with = "rational_string")]
    q_exp: Rational,
}

impl Serialize for SatakeMonomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.record().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SatakeMonomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        MonomialRecord::deserialize(d).map(|r| SatakeMonomial::from_record(&r))
    }
}

/// A product of Tate-type factors `(1 − m·q^{-s})^{-1}`; the empty product is `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EulerFactor {
    // Kept sorted so that equality is multiset equality.
    monomials: Vec<SatakeMonomial>,
}

impl EulerFactor {
    pub fn one() -> Self {
        EulerFactor::default()
    }

    pub fn from_monomials(monomials: impl IntoIterator<Item = SatakeMonomial>) -> Self {
        let mut monomials: Vec<_> = monomials.into_iter().collect();
        monomials.sort();
        EulerFactor { monomials }
    }

    pub fn monomials(&self) -> &[SatakeMonomial] {
        &self.monomials
    }

    pub fn is_one(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.monomials.len()
    }

    /// Multiplicity of `(1 − m·X)^{-1}`.
    pub fn multiplicity(&self, m: &SatakeMonomial) -> usize {
        self.monomials.iter().filter(|x| *x == m).count()
    }

    pub fn mul(&self, other: &EulerFactor) -> EulerFactor {
        EulerFactor::from_monomials(self.monomials.iter().chain(&other.monomials).cloned())
    }

    pub fn product<'a>(factors: impl IntoIterator<Item = &'a EulerFactor>) -> EulerFactor {
        factors
            .into_iter()
            .fold(EulerFactor::one(), |acc, f| acc.mul(f))
    }

    pub fn pow(&self, n: usize) -> EulerFactor {
        EulerFactor::from_monomials(
            std::iter::repeat_n(self.monomials.iter().cloned(), n).flatten(),
        )
    }

    /// Multiset inclusion `self ⊆ other`.
    pub fn divides(&self, other: &EulerFactor) -> bool {
        self.counts()
            .iter()
            .all(|(m, n)| other.multiplicity(m) >= *n)
    }

    /// `dividend / self` as multiset difference.
    pub fn quotient_of(&self, dividend: &EulerFactor) -> Result<EulerFactor> {
        if !self.divides(dividend) {
            return Err(Error::NotDivisor);
        }
        let mut rest = dividend.monomials.clone();
        for m in &self.monomials {
            let i = rest
                .iter()
                .position(|x| x == m)
                .expect("divisibility checked");
            rest.remove(i);
        }
        Ok(EulerFactor { monomials: rest })
    }

    /// Distinct monomials with multiplicities, in canonical order.
    pub fn counts(&self) -> Vec<(SatakeMonomial, usize)> {
        let mut out: Vec<(SatakeMonomial, usize)> = Vec::new();
        for m in &self.monomials {
            match out.last_mut() {
                Some((last, n)) if last == m => *n += 1,
                _ => out.push((m.clone(), 1)),
            }
        }
        out
    }

    /// Binds `q` and the unit symbols, giving a numeric rational function in `X`.
    pub fn specialize(&self, q: f64, units: &BTreeMap<String, f64>) -> Result<SpecializedFactor> {
        if q.is_nan() || q <= 1.0 || !q.is_finite() {
            return Err(Error::InvalidQ(q.to_string()));
        }
        let values = self
            .monomials
            .iter()
            .map(|m| m.evaluate(q, units))
            .collect::<Result<Vec<_>>>()?;
        Ok(SpecializedFactor { q, values })
    }
}

/// Tate factor `L(s, χ)`: trivial if `χ` is ramified, else `(1 − χ(ϖ)X)^{-1}`.
pub fn tate_factor(chi: &Character) -> EulerFactor {
    match chi.satake_value() {
        Ok(m) => EulerFactor::from_monomials([m]),
        Err(_) => EulerFactor::one(),
    }
}

/// Product of Tate factors.
pub fn tate_product<'a>(chars: impl IntoIterator<Item = &'a Character>) -> EulerFactor {
    EulerFactor::from_monomials(chars.into_iter().filter_map(|c| c.satake_value().ok()))
}

/// A pole in `X = q^{-s}` with its order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Pole {
    pub x: f64,
    pub multiplicity: usize,
    /// `Re(s)`; `s` itself is only defined modulo `2πi/ln q`.
    pub re_s: f64,
}

/// An Euler factor with `q` and all units bound to real numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecializedFactor {
    q: f64,
    values: Vec<f64>,
}

impl SpecializedFactor {
    pub fn q(&self) -> f64 {
        self.q
    }

    /// Numeric Satake values, one per monomial.
    pub fn satake_values(&self) -> &[f64] {
        &self.values
    }

    /// `1 / ∏ (1 − m_i X)`.
    pub fn eval(&self, x: f64) -> f64 {
        1.0 / self.values.iter().map(|m| 1.0 - m * x).product::<f64>()
    }

    /// Coefficients (constant term first) of the expanded denominator `∏ (1 − m_i X)`.
    pub fn denominator(&self) -> Vec<f64> {
        let mut coeffs = vec![1.0];
        for m in &self.values {
            let mut next = vec![0.0; coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i] += c;
                next[i + 1] -= c * m;
            }
            coeffs = next;
        }
        coeffs
    }

    /// Evaluates via the expanded denominator (Horner).
    pub fn eval_expanded(&self, x: f64) -> f64 {
        1.0 / self
            .denominator()
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c)
    }

    /// Poles `X = 1/m` grouped with multiplicity, sorted by `Re(s)`.
    pub fn poles(&self) -> Vec<Pole> {
        let mut xs: Vec<f64> = self
            .values
            .iter()
            .filter(|m| **m != 0.0)
            .map(|m| 1.0 / m)
            .collect();
        xs.sort_by(|a, b| a.partial_cmp(b).expect("finite poles"));
        let mut poles: Vec<Pole> = Vec::new();
        for x in xs {
            match poles.last_mut() {
                Some(p) if (p.x - x).abs() <= 1e-12 * p.x.abs().max(1.0) => p.multiplicity += 1,
                _ => poles.push(Pole {
                    x,
                    multiplicity: 1,
                    re_s: -x.abs().ln() / self.q.ln(),
                }),
            }
        }
        poles.sort_by(|a, b| a.re_s.partial_cmp(&b.re_s).expect("finite"));
        poles
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::{
        half, rat, Context, ContextDecl, ExtensionDatum, GeneratorDecl, Ramification,
    };

    fn ctx() -> std::sync::Arc<Context> {
        Context::new(
            ContextDecl::new(ExtensionDatum::new("K", Ramification::Unramified))
                .generator(GeneratorDecl::unramified("sigma"))
                .generator(GeneratorDecl::ramified("eta")),
        )
        .unwrap()
    }

    #[test]
    fn tate_factor_cases() {
        let c = ctx();
        let t = tate_factor(&c.trivial());
        assert_eq!(t.monomials(), &[SatakeMonomial::one()]);
        assert!(tate_factor(&c.generator("eta").unwrap()).is_one());
        let s = c.generator("sigma").unwrap().times_nu(half());
        let f = tate_factor(&s);
        assert_eq!(f.degree(), 1);
        let m = &f.monomials()[0];
        assert_eq!(m.q_exponent(), rat(-1, 2));
        assert_eq!(m.units().values().collect::<Vec<_>>(), vec![&1]);
    }

    #[test]
    fn divides_and_quotient() {
        let c = ctx();
        let l = tate_factor(&c.generator("sigma").unwrap().times_nu(half()));
        let sq = l.mul(&l);
        assert!(l.divides(&sq));
        assert!(!sq.divides(&l));
        assert_eq!(l.quotient_of(&sq).unwrap(), l);
        assert_eq!(sq.quotient_of(&l), Err(Error::NotDivisor));
        assert_eq!(EulerFactor::one().mul(&l), l);
    }

    #[test]
    fn specialize_rejects_bad_input() {
        let c = ctx();
        let l = tate_factor(&c.generator("sigma").unwrap());
        assert!(matches!(
            l.specialize(1.0, &BTreeMap::new()),
            Err(Error::InvalidQ(_))
        ));
        assert!(matches!(
            l.specialize(9.0, &BTreeMap::new()),
            Err(Error::UnboundUnit(_))
        ));
    }

    #[test]
    fn single_pole_at_sqrt_q() {
        let c = ctx();
        let l = tate_factor(&c.generator("sigma").unwrap().times_nu(half()));
        let units = BTreeMap::from([("u_sigma".to_string(), 1.0)]);
        let poles = l.specialize(9.0, &units).unwrap().poles();
        assert_eq!(poles.len(), 1);
        assert!((poles[0].x - 3.0).abs() < 1e-12);
        assert!((poles[0].re_s + 0.5).abs() < 1e-12);
        assert!(EulerFactor::one()
            .specialize(9.0, &units)
            .unwrap()
            .poles()
            .is_empty());
    }

    #[test]
    fn unit_order_is_respected() {
        let u = UnitSymbol {
            name: "xi".into(),
            order: Some(2),
        };
        let m = SatakeMonomial::new(1, BTreeMap::from([(u, 1)]), Rational::zero());
        assert_eq!(m.mul(&m), SatakeMonomial::one());
    }

    #[test]
    fn monomial_serde_round_trip() {
        let c = ctx();
        let f = tate_factor(&c.generator("sigma").unwrap().times_nu(half())).pow(2);
        let json = serde_json::to_string(&f).unwrap();
        let back: EulerFactor = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }
}
