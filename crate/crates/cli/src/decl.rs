//! Command-line declaration flags, turned into an `EnvironmentDecl`.

use std::sync::Arc;

use gsp4_lfactors::catalog::PredicateRecord;
use gsp4_lfactors::character::{AbstractKDecl, Relation};
use gsp4_lfactors::notation::{parse_character, parse_character_k};
use gsp4_lfactors::{
    CharWord, Context, ContextDecl, CuspDecl, EnvironmentDecl, ExtensionDatum, GeneratorDecl,
    OpaqueDecl, Ramification,
};

/// Raw flag values, in the order they were given.
#[derive(Default)]
pub struct DeclFlags {
    pub extension: Option<Ramification>,
    pub generators: Vec<String>,
    pub k_characters: Vec<String>,
    pub cusps: Vec<String>,
    pub opaque: Vec<String>,
}

fn ramification(word: &str) -> Option<Ramification> {
    match word {
        "unramified" => Some(Ramification::Unramified),
        "ramified" => Some(Ramification::Ramified),
        _ => None,
    }
}

fn yes_no(key: &str, v: &str) -> Result<bool, String> {
    match v {
        "yes" | "true" => Ok(true),
        "no" | "false" => Ok(false),
        _ => Err(format!("{key}: expected yes or no, got `{v}`")),
    }
}

fn split(spec: &str) -> (&str, Vec<&str>) {
    let mut parts = spec.split(':');
    let name = parts.next().unwrap_or_default().trim();
    (name, parts.map(str::trim).collect())
}

/// `NAME[:unramified|:ramified][:order=N][:eq=EXPR]`; the word is kept as text
/// until every generator name is known.
fn generator(spec: &str) -> Result<(GeneratorDecl, Option<String>), String> {
    let (name, opts) = split(spec);
    let mut ram = None;
    let mut order = None;
    let mut eq = None;
    for o in opts {
        if let Some(r) = ramification(o) {
            ram = Some(r);
        } else if let Some(n) = o.strip_prefix("order=") {
            let n: u32 = n
                .parse()
                .map_err(|_| format!("--declare {name}: bad order `{n}`"))?;
            order = Some(n);
        } else if let Some(e) = o.strip_prefix("eq=") {
            eq = Some(e.to_string());
        } else {
            return Err(format!("--declare {name}: unknown option `{o}`"));
        }
    }
    if eq.is_some() && order.is_some() {
        return Err(format!("--declare {name}: order= and eq= are exclusive"));
    }
    let relation = order.map(Relation::Order);
    let ramification = match (&eq, ram) {
        (Some(_), r) => r,
        (None, r) => Some(r.unwrap_or(Ramification::Unramified)),
    };
    Ok((
        GeneratorDecl {
            name: name.to_string(),
            ramification,
            relation,
        },
        eq,
    ))
}

/// A context where every declared name is a free generator, used only to read
/// the words on the right of `eq=` and `restriction=`.
fn scratch_context(extension: &ExtensionDatum, names: &[String]) -> Result<Arc<Context>, String> {
    let mut decl = ContextDecl::new(extension.clone());
    for n in names {
        decl = decl.generator(GeneratorDecl::unramified(n.clone()));
    }
    Context::new(decl).map_err(|e| e.to_string())
}

fn word(text: &str, ctx: &Arc<Context>) -> Result<CharWord, String> {
    parse_character(text, ctx)
        .map(|c| c.word())
        .map_err(|e| format!("`{text}`: {e}"))
}

impl DeclFlags {
    /// Appends the flag declarations to `base` (or to an empty declaration).
    pub fn build(&self, base: Option<EnvironmentDecl>) -> Result<EnvironmentDecl, String> {
        let mut env = base.unwrap_or_else(|| {
            EnvironmentDecl::new(ContextDecl::new(ExtensionDatum::new(
                "K",
                Ramification::Unramified,
            )))
        });
        if let Some(r) = self.extension {
            env.context.extension.kind = r;
        }
        let mut pending = Vec::new();
        for spec in &self.generators {
            let (g, eq) = generator(spec)?;
            pending.push((g.name.clone(), eq));
            env.context.generators.push(g);
        }
        let names: Vec<String> = env
            .context
            .generators
            .iter()
            .map(|g| g.name.clone())
            .collect();
        let scratch = scratch_context(&env.context.extension, &names)?;
        for (name, eq) in pending {
            if let Some(text) = eq {
                let w = word(&text, &scratch)?;
                let g = env
                    .context
                    .generators
                    .iter_mut()
                    .rev()
                    .find(|g| g.name == name)
                    .expect("just pushed");
                g.relation = Some(Relation::Equals(w));
            }
        }
        for spec in &self.k_characters {
            env.context.k_characters.push(k_character(spec, &scratch)?);
        }
        if self.cusps.is_empty() && self.opaque.is_empty() {
            return Ok(env);
        }
        // Central characters and dihedral data need the real context.
        let ctx = Context::new(env.context.clone()).map_err(|e| e.to_string())?;
        for spec in &self.cusps {
            env.cuspidals.push(cusp(spec, &ctx)?);
        }
        for spec in &self.opaque {
            env.opaque.push(opaque(spec, &ctx)?);
        }
        Ok(env)
    }
}

/// `NAME:restriction=EXPR[:unramified|:ramified]`.
fn k_character(spec: &str, scratch: &Arc<Context>) -> Result<AbstractKDecl, String> {
    let (name, opts) = split(spec);
    let mut restriction = None;
    let mut ram = Ramification::Unramified;
    for o in opts {
        if let Some(r) = ramification(o) {
            ram = r;
        } else if let Some(e) = o.strip_prefix("restriction=") {
            restriction = Some(word(e, scratch)?);
        } else {
            return Err(format!("--declare-k {name}: unknown option `{o}`"));
        }
    }
    Ok(AbstractKDecl {
        name: name.to_string(),
        restriction: restriction
            .ok_or_else(|| format!("--declare-k {name}: restriction= is required"))?,
        ramification: ram,
    })
}

/// `NAME:central=EXPR[:waldspurger=yes|no][:jl=yes|no][:dihedral=KEXPR,KEXPR]`.
fn cusp(spec: &str, ctx: &Arc<Context>) -> Result<CuspDecl, String> {
    let (name, opts) = split(spec);
    let mut central = None;
    let mut decl = CuspDecl::new(name, CharWord::trivial());
    for o in opts {
        let (key, value) = o
            .split_once('=')
            .ok_or_else(|| format!("--cusp {name}: expected key=value, got `{o}`"))?;
        match key {
            "central" => central = Some(word(value, ctx)?),
            "waldspurger" => decl.waldspurger = flag(key, value)?,
            "jl" => decl.jacquet_langlands = flag(key, value)?,
            "dihedral" => {
                let (a, b) = value
                    .split_once(',')
                    .ok_or_else(|| format!("--cusp {name}: dihedral needs two characters"))?;
                let k = |t: &str| {
                    parse_character_k(t.trim(), ctx)
                        .map(|c| c.record())
                        .map_err(|e| format!("`{t}`: {e}"))
                };
                decl.dihedral = Some((k(a)?, k(b)?));
            }
            _ => return Err(format!("--cusp {name}: unknown option `{key}`")),
        }
    }
    decl.central = central.ok_or_else(|| format!("--cusp {name}: central= is required"))?;
    Ok(decl)
}

/// `NAME:central=EXPR[:generic|:nongeneric][:bessel=yes|no]`.
fn opaque(spec: &str, ctx: &Arc<Context>) -> Result<OpaqueDecl, String> {
    let (name, opts) = split(spec);
    let mut central = None;
    let mut generic = true;
    let mut bessel = PredicateRecord::default();
    for o in opts {
        match o.split_once('=') {
            None if o == "generic" => generic = true,
            None if o == "nongeneric" => generic = false,
            Some(("central", v)) => central = Some(word(v, ctx)?),
            Some(("bessel", v)) => bessel = flag("bessel", v)?,
            _ => return Err(format!("--opaque {name}: unknown option `{o}`")),
        }
    }
    Ok(OpaqueDecl {
        name: name.to_string(),
        generic,
        central: central.ok_or_else(|| format!("--opaque {name}: central= is required"))?,
        bessel,
    })
}

fn flag(key: &str, value: &str) -> Result<PredicateRecord, String> {
    Ok(PredicateRecord {
        default: Some(yes_no(key, value)?),
        overrides: Vec::new(),
    })
}
