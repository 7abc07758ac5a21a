//! Smooth characters of `k^×` and `K^×` as elements of a finitely presented
//! abelian group.
//!
//! A [`Context`] freezes a set of generator declarations (with ramification,
//! finite orders and acyclic substitution rules) together with the quadratic
//! extension `K/k`. Every [`Character`] is kept in normal form with respect to
//! its context, so structural equality is group equality.
//!
//! The group is `⊕ free generators (mod declared orders) × ν^ℚ × ⟨χ_{K/k}⟩`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Mul;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler::{SatakeMonomial, UnitSymbol};

pub type Rational = Ratio<i64>;

/// Shorthand for `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Formats a rational as `p/q`, or `p` when integral.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `-p`, `p/q` or `-p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = n.parse().ok()?;
    let d: i64 = d.parse().ok()?;
    if d == 0 || d.checked_abs().is_none() || n.checked_abs().is_none() {
        return None;
    }
    Some(Rational::new(n, d))
}

pub(crate) mod rational_string {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| D::Error::custom(format!("malformed rational `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ramification {
    Unramified,
    Ramified,
}

/// The quadratic extension `K/k` underlying anisotropic Bessel models.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionDatum {
    pub label: String,
    pub kind: Ramification,
}

impl ExtensionDatum {
    pub fn new(label: impl Into<String>, kind: Ramification) -> Self {
        ExtensionDatum {
            label: label.into(),
            kind,
        }
    }

    pub fn is_unramified(&self) -> bool {
        self.kind == Ramification::Unramified
    }
}

/// An unnormalized word in the generators, `ν` and `χ_{K/k}`.
///
/// Words are what the parser produces and what declarations store; a
/// [`Context`] turns them into normal-form [`Character`]s.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharWord {
    #[serde(default, with = "gen_list")]
    pub generators: BTreeMap<String, i64>,
    #[serde(default = "Rational::zero", with = "rational_string")]
    pub nu: Rational,
    #[serde(default)]
    pub chi_kk: i64,
}

mod gen_list {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<String, i64>, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<(&String, &i64)> = m.iter().collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, i64>, D::Error> {
        let v: Vec<(String, i64)> = Vec::deserialize(d)?;
        let mut m = BTreeMap::new();
        for (k, e) in v {
            *m.entry(k).or_insert(0) += e;
        }
        Ok(m)
    }
}

impl CharWord {
    pub fn trivial() -> Self {
        CharWord::default()
    }

    pub fn generator(name: impl Into<String>) -> Self {
        let mut w = CharWord::default();
        w.generators.insert(name.into(), 1);
        w
    }

    pub fn nu(e: Rational) -> Self {
        CharWord {
            nu: e,
            ..CharWord::default()
        }
    }

    pub fn chi_kk() -> Self {
        CharWord {
            chi_kk: 1,
            ..CharWord::default()
        }
    }

    pub fn mul(&self, other: &CharWord) -> CharWord {
        let mut out = self.clone();
        for (k, e) in &other.generators {
            *out.generators.entry(k.clone()).or_insert(0) += e;
        }
        out.generators.retain(|_, e| *e != 0);
        out.nu += other.nu;
        out.chi_kk += other.chi_kk;
        out
    }

    pub fn pow(&self, n: i64) -> CharWord {
        CharWord {
            generators: self
                .generators
                .iter()
                .filter(|(_, e)| **e * n != 0)
                .map(|(k, e)| (k.clone(), e * n))
                .collect(),
            nu: self.nu * n,
            chi_kk: self.chi_kk * n,
        }
    }
}

/// Relation attached to a generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `g^n = 1`.
    Order(u32),
    /// `g = word`, resolved by substitution.
    Equals(CharWord),
}

/// Declaration of a formal character generator of `k^×`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDecl {
    pub name: String,
    /// Required for free generators; derived (and checked if given) for substituted ones.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ramification: Option<Ramification>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<Relation>,
}

impl GeneratorDecl {
    pub fn new(name: impl Into<String>, ramification: Ramification) -> Self {
        GeneratorDecl {
            name: name.into(),
            ramification: Some(ramification),
            relation: None,
        }
    }

    pub fn unramified(name: impl Into<String>) -> Self {
        Self::new(name, Ramification::Unramified)
    }

    pub fn ramified(name: impl Into<String>) -> Self {
        Self::new(name, Ramification::Ramified)
    }

    pub fn with_order(mut self, n: u32) -> Self {
        self.relation = Some(Relation::Order(n));
        self
    }

    pub fn substitution(name: impl Into<String>, word: CharWord) -> Self {
        GeneratorDecl {
            name: name.into(),
            ramification: None,
            relation: Some(Relation::Equals(word)),
        }
    }
}

/// An abstract character of `K^×`, known only through its restriction to `k^×`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractKDecl {
    pub name: String,
    pub restriction: CharWord,
    pub ramification: Ramification,
}

/// Serializable declaration set; freeze it with [`Context::new`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextDecl {
    pub extension: ExtensionDatum,
    #[serde(default)]
    pub generators: Vec<GeneratorDecl>,
    #[serde(default)]
    pub k_characters: Vec<AbstractKDecl>,
    /// Allow `ν`-exponents with arbitrary denominators.
    #[serde(default)]
    pub arbitrary_nu: bool,
}

impl ContextDecl {
    pub fn new(extension: ExtensionDatum) -> Self {
        ContextDecl {
            extension,
            generators: Vec::new(),
            k_characters: Vec::new(),
            arbitrary_nu: false,
        }
    }

    pub fn generator(mut self, decl: GeneratorDecl) -> Self {
        self.generators.push(decl);
        self
    }

    pub fn k_character(
        mut self,
        name: impl Into<String>,
        restriction: CharWord,
        ramification: Ramification,
    ) -> Self {
        self.k_characters.push(AbstractKDecl {
            name: name.into(),
            restriction,
            ramification,
        });
        self
    }
}

/// Names the notation reserves for itself.
pub const RESERVED_NAMES: &[&str] = &[
    "nu", "x", "St", "St_G", "one", "one_G", "L", "delta", "tau", "theta_", "S", "T", "norm",
    "cusp", "chi_", "s",
];

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct NormalForm {
    pub gens: BTreeMap<String, i64>,
    pub nu: Rational,
    pub chi: u8,
}

impl NormalForm {
    fn trivial() -> Self {
        NormalForm {
            gens: BTreeMap::new(),
            nu: Rational::zero(),
            chi: 0,
        }
    }

    fn is_trivial(&self) -> bool {
        self.gens.is_empty() && self.nu.is_zero() && self.chi == 0
    }

    fn to_word(&self) -> CharWord {
        CharWord {
            generators: self.gens.clone(),
            nu: self.nu,
            chi_kk: self.chi as i64,
        }
    }
}

#[derive(Clone, Debug)]
enum Resolved {
    Free {
        ramification: Ramification,
        order: Option<u32>,
    },
    Substituted(NormalForm),
}

static NEXT_CONTEXT_ID: AtomicU64 = AtomicU64::new(1);

/// A frozen declaration context. All characters built from it share it via `Arc`.
#[derive(Debug)]
pub struct Context {
    id: u64,
    decl: ContextDecl,
    resolved: BTreeMap<String, Resolved>,
    k_restrictions: BTreeMap<String, (NormalForm, Ramification)>,
}

impl Context {
    /// Validates and freezes a declaration set.
    pub fn new(decl: ContextDecl) -> Result<Arc<Context>> {
        let mut seen = BTreeSet::new();
        let all_names = decl
            .generators
            .iter()
            .map(|g| &g.name)
            .chain(decl.k_characters.iter().map(|k| &k.name));
        for name in all_names {
            if !is_identifier(name) {
                return Err(Error::InvalidDeclaration(format!(
                    "`{name}` is not an identifier"
                )));
            }
            if RESERVED_NAMES.contains(&name.as_str()) || name.starts_with("chi_{") {
                return Err(Error::InvalidDeclaration(format!("`{name}` is reserved")));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::InvalidDeclaration(format!(
                    "`{name}` declared twice"
                )));
            }
        }

        let mut ctx = Context {
            id: NEXT_CONTEXT_ID.fetch_add(1, Ordering::Relaxed),
            decl: decl.clone(),
            resolved: BTreeMap::new(),
            k_restrictions: BTreeMap::new(),
        };

        for g in &decl.generators {
            match &g.relation {
                None | Some(Relation::Order(_)) => {
                    let ramification = g.ramification.ok_or_else(|| {
                        Error::InvalidDeclaration(format!(
                            "generator `{}` needs a declared ramification",
                            g.name
                        ))
                    })?;
                    let order = match g.relation {
                        Some(Relation::Order(0)) => {
                            return Err(Error::InvalidDeclaration(format!(
                                "order of `{}` must be >= 1",
                                g.name
                            )))
                        }
                        Some(Relation::Order(n)) => Some(n),
                        _ => None,
                    };
                    ctx.resolved.insert(
                        g.name.clone(),
                        Resolved::Free {
                            ramification,
                            order,
                        },
                    );
                }
                Some(Relation::Equals(_)) => {}
            }
        }

        // Resolve substitution rules in dependency order, rejecting cycles.
        let subs: BTreeMap<&str, &CharWord> = decl
            .generators
            .iter()
            .filter_map(|g| match &g.relation {
                Some(Relation::Equals(w)) => Some((g.name.as_str(), w)),
                _ => None,
            })
            .collect();
        for name in subs.keys() {
            let mut stack = Vec::new();
            ctx.resolve_substitution(name, &subs, &mut stack)?;
        }
        for g in &decl.generators {
            if let (Some(Relation::Equals(_)), Some(declared)) = (&g.relation, g.ramification) {
                let Some(Resolved::Substituted(nf)) = ctx.resolved.get(&g.name) else {
                    unreachable!("substitution resolved above")
                };
                if ctx.nf_ramification(nf) != declared {
                    return Err(Error::InvalidDeclaration(format!(
                        "declared ramification of `{}` contradicts its defining word",
                        g.name
                    )));
                }
            }
        }

        for k in &decl.k_characters {
            let nf = ctx.normalize(&k.restriction)?;
            ctx.k_restrictions
                .insert(k.name.clone(), (nf, k.ramification));
        }
        Ok(Arc::new(ctx))
    }

    fn resolve_substitution<'a>(
        &mut self,
        name: &'a str,
        subs: &BTreeMap<&'a str, &'a CharWord>,
        stack: &mut Vec<&'a str>,
    ) -> Result<NormalForm> {
        if let Some(Resolved::Substituted(nf)) = self.resolved.get(name) {
            return Ok(nf.clone());
        }
        if stack.contains(&name) {
            stack.push(name);
            return Err(Error::InvalidDeclaration(format!(
                "cyclic substitution: {}",
                stack.join(" -> ")
            )));
        }
        stack.push(name);
        let word = subs[name];
        let mut acc = NormalForm {
            gens: BTreeMap::new(),
            nu: word.nu,
            chi: word.chi_kk.rem_euclid(2) as u8,
        };
        for (g, e) in &word.generators {
            match self.resolved.get(g.as_str()) {
                Some(Resolved::Free { .. }) => *acc.gens.entry(g.clone()).or_insert(0) += e,
                Some(Resolved::Substituted(nf)) => {
                    let nf = nf.clone();
                    self.accumulate(&mut acc, &nf, *e);
                }
                None if subs.contains_key(g.as_str()) => {
                    let (key, _) = subs.get_key_value(g.as_str()).expect("checked");
                    let nf = self.resolve_substitution(key, subs, stack)?;
                    self.accumulate(&mut acc, &nf, *e);
                }
                None => return Err(Error::UnknownName(g.clone())),
            }
        }
        let nf = self.reduce(acc)?;
        stack.pop();
        self.resolved
            .insert(name.to_string(), Resolved::Substituted(nf.clone()));
        Ok(nf)
    }

    fn accumulate(&self, acc: &mut NormalForm, nf: &NormalForm, e: i64) {
        for (g, f) in &nf.gens {
            *acc.gens.entry(g.clone()).or_insert(0) += f * e;
        }
        acc.nu += nf.nu * e;
        acc.chi = ((acc.chi as i64 + nf.chi as i64 * e).rem_euclid(2)) as u8;
    }

    fn reduce(&self, mut nf: NormalForm) -> Result<NormalForm> {
        for (g, e) in nf.gens.iter_mut() {
            if let Some(Resolved::Free { order: Some(n), .. }) = self.resolved.get(g) {
                *e = e.rem_euclid(*n as i64);
            }
        }
        nf.gens.retain(|_, e| *e != 0);
        if !self.decl.arbitrary_nu && !(nf.nu * 2).is_integer() {
            return Err(Error::NuExponent(format_rational(&nf.nu)));
        }
        Ok(nf)
    }

    fn normalize(&self, word: &CharWord) -> Result<NormalForm> {
        let mut acc = NormalForm {
            gens: BTreeMap::new(),
            nu: word.nu,
            chi: word.chi_kk.rem_euclid(2) as u8,
        };
        for (g, e) in &word.generators {
            match self.resolved.get(g) {
                Some(Resolved::Free { .. }) => *acc.gens.entry(g.clone()).or_insert(0) += e,
                Some(Resolved::Substituted(nf)) => self.accumulate(&mut acc, nf, *e),
                None => return Err(Error::UnknownName(g.clone())),
            }
        }
        self.reduce(acc)
    }

    fn nf_ramification(&self, nf: &NormalForm) -> Ramification {
        let gens_unramified = nf.gens.keys().all(|g| {
            matches!(
                self.resolved.get(g),
                Some(Resolved::Free {
                    ramification: Ramification::Unramified,
                    ..
                })
            )
        });
        if gens_unramified && (nf.chi == 0 || self.decl.extension.is_unramified()) {
            Ramification::Unramified
        } else {
            Ramification::Ramified
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn decl(&self) -> &ContextDecl {
        &self.decl
    }

    pub fn extension(&self) -> &ExtensionDatum {
        &self.decl.extension
    }

    /// Declared generator names (free or substituted), in declaration order.
    pub fn generator_names(&self) -> impl Iterator<Item = &str> {
        self.decl.generators.iter().map(|g| g.name.as_str())
    }

    pub fn has_generator(&self, name: &str) -> bool {
        self.resolved.contains_key(name)
    }

    pub fn has_k_character(&self, name: &str) -> bool {
        self.k_restrictions.contains_key(name)
    }

    /// Declared finite order of a free generator.
    pub fn generator_order(&self, name: &str) -> Option<u32> {
        match self.resolved.get(name) {
            Some(Resolved::Free { order, .. }) => *order,
            _ => None,
        }
    }

    pub fn trivial(self: &Arc<Self>) -> Character {
        Character {
            ctx: self.clone(),
            nf: NormalForm::trivial(),
        }
    }

    /// `ν^e`.
    pub fn nu(self: &Arc<Self>, e: Rational) -> Result<Character> {
        self.character(&CharWord::nu(e))
    }

    pub fn chi_kk(self: &Arc<Self>) -> Character {
        Character {
            ctx: self.clone(),
            nf: NormalForm {
                gens: BTreeMap::new(),
                nu: Rational::zero(),
                chi: 1,
            },
        }
    }

    pub fn generator(self: &Arc<Self>, name: &str) -> Result<Character> {
        self.character(&CharWord::generator(name))
    }

    /// Normalizes a word into a character of this context.
    pub fn character(self: &Arc<Self>, word: &CharWord) -> Result<Character> {
        Ok(Character {
            ctx: self.clone(),
            nf: self.normalize(word)?,
        })
    }

    pub fn trivial_k(self: &Arc<Self>) -> CharacterK {
        CharacterK {
            ctx: self.clone(),
            abstract_part: BTreeMap::new(),
            base: NormalForm::trivial(),
        }
    }

    /// An abstract declared character of `K^×`.
    pub fn k_character(self: &Arc<Self>, name: &str) -> Result<CharacterK> {
        if !self.k_restrictions.contains_key(name) {
            return Err(Error::UnknownName(name.to_string()));
        }
        let mut abstract_part = BTreeMap::new();
        abstract_part.insert(name.to_string(), 1);
        Ok(CharacterK {
            ctx: self.clone(),
            abstract_part,
            base: NormalForm::trivial(),
        })
    }

    /// Builds a `K^×` character from a record.
    pub fn character_k(self: &Arc<Self>, record: &CharacterKRecord) -> Result<CharacterK> {
        let mut k = norm_pullback(&self.character(&record.norm)?);
        for (name, e) in &record.abstract_part {
            k = k.try_mul(&self.k_character(name)?.pow(*e))?;
        }
        Ok(k)
    }
}

/// A smooth character of `k^×` in normal form.
#[derive(Clone)]
pub struct Character {
    ctx: Arc<Context>,
    nf: NormalForm,
}

impl Character {
    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn same_context(&self, other: &Character) -> bool {
        self.ctx.id == other.ctx.id
    }

    pub fn try_mul(&self, other: &Character) -> Result<Character> {
        if !self.same_context(other) {
            return Err(Error::ContextMismatch);
        }
        let mut acc = self.nf.clone();
        self.ctx.accumulate(&mut acc, &other.nf, 1);
        Ok(Character {
            ctx: self.ctx.clone(),
            nf: self.ctx.reduce(acc)?,
        })
    }

    pub fn pow(&self, n: i64) -> Character {
        let mut acc = NormalForm::trivial();
        self.ctx.accumulate(&mut acc, &self.nf, n);
        Character {
            ctx: self.ctx.clone(),
            // Integer powers keep nu half-integral.
            nf: self.ctx.reduce(acc).expect("powers stay in the group"),
        }
    }

    pub fn inverse(&self) -> Character {
        self.pow(-1)
    }

    /// Multiplies by `ν^e`.
    pub fn times_nu(&self, e: Rational) -> Character {
        let mut nf = self.nf.clone();
        nf.nu += e;
        Character {
            ctx: self.ctx.clone(),
            nf: self
                .ctx
                .reduce(nf)
                .expect("callers only shift by half-integers"),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.nf.is_trivial()
    }

    pub fn is_unramified(&self) -> bool {
        self.ctx.nf_ramification(&self.nf) == Ramification::Unramified
    }

    pub fn ramification(&self) -> Ramification {
        self.ctx.nf_ramification(&self.nf)
    }

    pub fn nu_exponent(&self) -> Rational {
        self.nf.nu
    }

    pub fn chi_kk_exponent(&self) -> u8 {
        self.nf.chi
    }

    /// Exponents of free generators in the normal form.
    pub fn generator_exponents(&self) -> &BTreeMap<String, i64> {
        &self.nf.gens
    }

    /// The normal form as a word (exact serialization record).
    pub fn word(&self) -> CharWord {
        self.nf.to_word()
    }

    /// Value at a uniformizer: `(±1) · ∏ u_g^{e_g} · q^{-nu}`.
    pub fn satake_value(&self) -> Result<SatakeMonomial> {
        if !self.is_unramified() {
            return Err(Error::Ramified(self.to_string()));
        }
        let units = self
            .nf
            .gens
            .iter()
            .map(|(g, e)| {
                (
                    UnitSymbol {
                        name: g.clone(),
                        order: self.ctx.generator_order(g),
                    },
                    *e,
                )
            })
            .collect();
        let sign = if self.nf.chi == 1 { -1 } else { 1 };
        Ok(SatakeMonomial::new(sign, units, -self.nf.nu))
    }
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.id == other.ctx.id && self.nf == other.nf
    }
}

impl Eq for Character {}

impl Hash for Character {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.id.hash(state);
        self.nf.hash(state);
    }
}

impl PartialOrd for Character {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Character {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.ctx.id, &self.nf).cmp(&(other.ctx.id, &other.nf))
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Character({self})")
    }
}

impl Serialize for Character {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.word().serialize(s)
    }
}

impl Mul for &Character {
    type Output = Character;

    /// Panics on characters from different contexts; use [`Character::try_mul`]
    /// where that can happen.
    fn mul(self, rhs: &Character) -> Character {
        self.try_mul(rhs).expect("character context mismatch")
    }
}

impl Mul for Character {
    type Output = Character;

    fn mul(self, rhs: Character) -> Character {
        &self * &rhs
    }
}

/// Exact record of a `K^×` character: abstract generators times a norm pullback.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterKRecord {
    #[serde(default, rename = "abstract", with = "gen_list")]
    pub abstract_part: BTreeMap<String, i64>,
    #[serde(default)]
    pub norm: CharWord,
}

/// A smooth character of `K^×`: a product of declared abstract characters
/// and a norm pullback `ρ∘N_{K/k}`.
///
/// Since `χ_{K/k}` is trivial on norms, the pullback part is stored modulo
/// `χ_{K/k}`, so `(ρχ_{K/k})∘N = ρ∘N` holds structurally.
#[derive(Clone)]
pub struct CharacterK {
    ctx: Arc<Context>,
    abstract_part: BTreeMap<String, i64>,
    base: NormalForm,
}

/// `ρ ↦ ρ∘N_{K/k}`.
pub fn norm_pullback(rho: &Character) -> CharacterK {
    let mut base = rho.nf.clone();
    base.chi = 0;
    CharacterK {
        ctx: rho.ctx.clone(),
        abstract_part: BTreeMap::new(),
        base,
    }
}

impl CharacterK {
    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn try_mul(&self, other: &CharacterK) -> Result<CharacterK> {
        if self.ctx.id != other.ctx.id {
            return Err(Error::ContextMismatch);
        }
        let mut abstract_part = self.abstract_part.clone();
        for (k, e) in &other.abstract_part {
            *abstract_part.entry(k.clone()).or_insert(0) += e;
        }
        abstract_part.retain(|_, e| *e != 0);
        let mut base = self.base.clone();
        self.ctx.accumulate(&mut base, &other.base, 1);
        base.chi = 0;
        Ok(CharacterK {
            ctx: self.ctx.clone(),
            abstract_part,
            base: self.ctx.reduce(base)?,
        })
    }

    pub fn pow(&self, n: i64) -> CharacterK {
        let mut base = NormalForm::trivial();
        self.ctx.accumulate(&mut base, &self.base, n);
        CharacterK {
            ctx: self.ctx.clone(),
            abstract_part: self
                .abstract_part
                .iter()
                .filter(|(_, e)| **e * n != 0)
                .map(|(k, e)| (k.clone(), e * n))
                .collect(),
            base: self.ctx.reduce(base).expect("powers stay in the group"),
        }
    }

    pub fn inverse(&self) -> CharacterK {
        self.pow(-1)
    }

    pub fn is_trivial(&self) -> bool {
        self.abstract_part.is_empty() && self.base.is_trivial()
    }

    /// `Some(ρ)` with `χ_{K/k}`-exponent 0 when this is `ρ∘N_{K/k}`.
    pub fn as_norm_pullback(&self) -> Option<Character> {
        self.abstract_part.is_empty().then(|| Character {
            ctx: self.ctx.clone(),
            nf: self.base.clone(),
        })
    }

    pub fn abstract_part(&self) -> &BTreeMap<String, i64> {
        &self.abstract_part
    }

    /// The norm-pullback factor `ρ` (with `χ_{K/k}`-exponent 0).
    pub fn norm_part(&self) -> Character {
        Character {
            ctx: self.ctx.clone(),
            nf: self.base.clone(),
        }
    }

    /// Restriction to `k^× ⊂ K^×`; `ρ∘N` restricts to `ρ²`.
    pub fn restrict_to_base(&self) -> Character {
        let mut acc = NormalForm::trivial();
        self.ctx.accumulate(&mut acc, &self.base, 2);
        for (name, e) in &self.abstract_part {
            let (nf, _) = &self.ctx.k_restrictions[name];
            self.ctx.accumulate(&mut acc, nf, *e);
        }
        Character {
            ctx: self.ctx.clone(),
            nf: self
                .ctx
                .reduce(acc)
                .expect("restriction of a valid character is valid"),
        }
    }

    pub fn is_unramified(&self) -> bool {
        let base_unramified = self.norm_part().is_unramified();
        base_unramified
            && self
                .abstract_part
                .keys()
                .all(|k| self.ctx.k_restrictions[k].1 == Ramification::Unramified)
    }

    pub fn record(&self) -> CharacterKRecord {
        CharacterKRecord {
            abstract_part: self.abstract_part.clone(),
            norm: self.base.to_word(),
        }
    }
}

impl PartialEq for CharacterK {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.id == other.ctx.id
            && self.abstract_part == other.abstract_part
            && self.base == other.base
    }
}

impl Eq for CharacterK {}

impl Hash for CharacterK {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.id.hash(state);
        self.abstract_part.hash(state);
        self.base.hash(state);
    }
}

impl fmt::Debug for CharacterK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CharacterK({self})")
    }
}

impl Serialize for CharacterK {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.record().serialize(s)
    }
}

impl Mul for &CharacterK {
    type Output = CharacterK;

    fn mul(self, rhs: &CharacterK) -> CharacterK {
        self.try_mul(rhs).expect("character context mismatch")
    }
}

/// `1/2` as a [`Rational`].
pub fn half() -> Rational {
    Rational::new(1, 2)
}

pub(crate) fn one() -> Rational {
    Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Arc<Context> {
        Context::new(
            ContextDecl::new(ExtensionDatum::new("K", Ramification::Unramified))
                .generator(GeneratorDecl::unramified("sigma"))
                .generator(GeneratorDecl::ramified("rho"))
                .generator(GeneratorDecl::unramified("xi").with_order(2))
                .generator(GeneratorDecl::substitution(
                    "eta",
                    CharWord::chi_kk().mul(&CharWord::generator("sigma")),
                )),
        )
        .unwrap()
    }

    #[test]
    fn inverse_cancels() {
        let c = ctx();
        let s = c.generator("sigma").unwrap();
        assert!((&s * &s.inverse()).is_trivial());
    }

    #[test]
    fn half_powers_of_nu_add() {
        let c = ctx();
        let h = c.nu(half()).unwrap();
        assert_eq!(&h * &h, c.nu(one()).unwrap());
    }

    #[test]
    fn declared_order_reduces() {
        let c = ctx();
        let xi = c.generator("xi").unwrap();
        assert!((&xi * &xi).is_trivial());
        assert_eq!(xi.pow(3), xi);
    }

    #[test]
    fn ramification_predicates() {
        let c = ctx();
        let t = c.trivial();
        assert!(t.is_trivial() && t.is_unramified());
        let x = &c.nu(half()).unwrap() * &c.generator("rho").unwrap();
        assert!(!x.is_trivial() && !x.is_unramified());
        let chi = c.chi_kk();
        assert!(!chi.is_trivial() && chi.is_unramified());
    }

    #[test]
    fn chi_kk_ramified_over_ramified_extension() {
        let c = Context::new(ContextDecl::new(ExtensionDatum::new(
            "K",
            Ramification::Ramified,
        )))
        .unwrap();
        assert!(!c.chi_kk().is_unramified());
        assert!(c.chi_kk().satake_value().is_err());
    }

    #[test]
    fn substitution_is_applied() {
        let c = ctx();
        let eta = c.generator("eta").unwrap();
        assert_eq!(eta, &c.chi_kk() * &c.generator("sigma").unwrap());
        assert_eq!(eta.generator_exponents().get("eta"), None);
    }

    #[test]
    fn cyclic_substitution_rejected() {
        let decl = ContextDecl::new(ExtensionDatum::new("K", Ramification::Ramified))
            .generator(GeneratorDecl::substitution("a", CharWord::generator("b")))
            .generator(GeneratorDecl::substitution("b", CharWord::generator("a")));
        assert!(matches!(
            Context::new(decl),
            Err(Error::InvalidDeclaration(_))
        ));
    }

    #[test]
    fn free_generator_needs_ramification() {
        let decl = ContextDecl::new(ExtensionDatum::new("K", Ramification::Ramified)).generator(
            GeneratorDecl {
                name: "a".into(),
                ramification: None,
                relation: None,
            },
        );
        assert!(Context::new(decl).is_err());
    }

    #[test]
    fn quarter_nu_rejected_by_default() {
        let c = ctx();
        assert!(matches!(c.nu(rat(1, 4)), Err(Error::NuExponent(_))));
        let mut decl = c.decl().clone();
        decl.arbitrary_nu = true;
        let relaxed = Context::new(decl).unwrap();
        assert!(relaxed.nu(rat(1, 4)).is_ok());
    }

    #[test]
    fn contexts_do_not_mix() {
        let a = ctx();
        let b = ctx();
        let s = a.generator("sigma").unwrap();
        let t = b.generator("sigma").unwrap();
        assert_ne!(s, t);
        assert_eq!(s.try_mul(&t), Err(Error::ContextMismatch));
    }

    #[test]
    fn norm_pullback_restricts_to_square() {
        let c = ctx();
        let s = c.generator("sigma").unwrap();
        assert_eq!(norm_pullback(&s).restrict_to_base(), s.pow(2));
        assert!(norm_pullback(&c.trivial()).is_trivial());
        let h = c.nu(half()).unwrap();
        assert_eq!(norm_pullback(&h).restrict_to_base(), c.nu(one()).unwrap());
    }

    #[test]
    fn norm_pullback_ignores_chi_kk() {
        let c = ctx();
        let s = c.generator("sigma").unwrap();
        assert_eq!(norm_pullback(&s), norm_pullback(&(&s * &c.chi_kk())));
    }

    #[test]
    fn satake_values() {
        let c = ctx();
        let h = c.nu(half()).unwrap().satake_value().unwrap();
        assert_eq!(h, SatakeMonomial::new(1, BTreeMap::new(), rat(-1, 2)));
        let s = c.generator("sigma").unwrap().satake_value().unwrap();
        assert_eq!(s.units().len(), 1);
        assert_eq!(c.chi_kk().satake_value().unwrap().sign(), -1);
        assert!(c.generator("rho").unwrap().satake_value().is_err());
    }

    #[test]
    fn abstract_k_character_restriction() {
        let decl = ctx().decl().clone().k_character(
            "Lambda",
            CharWord::generator("rho"),
            Ramification::Ramified,
        );
        let c = Context::new(decl).unwrap();
        let l = c.k_character("Lambda").unwrap();
        assert_eq!(l.restrict_to_base(), c.generator("rho").unwrap());
        assert!(l.as_norm_pullback().is_none());
        let s = c.generator("sigma").unwrap();
        let prod = &l * &norm_pullback(&s);
        assert_eq!(
            prod.restrict_to_base(),
            &c.generator("rho").unwrap() * &s.pow(2)
        );
        let rec = prod.record();
        assert_eq!(c.character_k(&rec).unwrap(), prod);
    }

    #[test]
    fn parse_and_format_rationals() {
        assert_eq!(parse_rational("-1/2"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("3"), Some(rat(3, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("a"), None);
        assert_eq!(format_rational(&rat(2, 4)), "1/2");
        assert_eq!(format_rational(&rat(-3, 1)), "-3");
    }
}
