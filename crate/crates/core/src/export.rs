//! Machine-readable dump of every encoded table, with symbolic parameters.

use std::fmt;

use serde::Serialize;

use crate::catalog::{
    CuspDecl, Environment, EnvironmentDecl, Gl2Rep, Gsp4Rep, OpaqueDecl, Param, PredicateRecord,
    TypeSymbol,
};
use crate::character::{
    CharWord, CharacterKRecord, ContextDecl, ExtensionDatum, GeneratorDecl, Ramification,
};
use crate::error::Result;
use crate::lfactor::{
    anisotropic_lambda_condition, caveats, exceptional_table, exceptional_table_mu,
    h_functional_dim, regular_table, spinor_table, Caveat, LambdaCondition, LambdaSet,
};
use crate::packets::{
    endoscopic_packet, sk_packet, verify_packet_identity, Packet, PacketReport, ENDOSCOPIC_ROWS,
    SK_ROWS,
};
use crate::verify::TWIST_ROWS;

#[derive(Clone, Debug, Serialize)]
pub struct ExportedTable {
    pub name: &'static str,
    pub description: &'static str,
    pub rows: Vec<ExportRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExportRow {
    pub row: String,
    #[serde(flatten)]
    pub content: RowContent,
    pub caveats: Vec<Caveat>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
#[allow(clippy::large_enum_variant)]
pub enum RowContent {
    Exceptional {
        representation: String,
        lambda: LambdaExport,
        factor: String,
    },
    HFunctional {
        representation: String,
        rho: Vec<String>,
        condition: Option<String>,
    },
    Anisotropic {
        representation: String,
        cases: Vec<AnisotropicCase>,
    },
    Spinor {
        representation: String,
        full: Option<String>,
        note: Option<String>,
    },
    Packet {
        inputs: Vec<String>,
        identity: PacketReport,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaExport {
    pub kind: &'static str,
    pub characters: Vec<String>,
    pub guard: Option<String>,
    pub period: Option<String>,
    pub declared: Option<String>,
    pub text: String,
}

impl LambdaExport {
    fn new(c: &LambdaCondition) -> Self {
        let (kind, chars) = match &c.set {
            LambdaSet::None => ("none", &[][..]),
            LambdaSet::All => ("all", &[][..]),
            LambdaSet::AllExcept(v) if v.is_empty() => ("all", &[][..]),
            LambdaSet::AllExcept(v) => ("all_except", v.as_slice()),
            LambdaSet::Exactly(v) if v.is_empty() => ("none", &[][..]),
            LambdaSet::Exactly(v) => ("exactly", v.as_slice()),
        };
        LambdaExport {
            kind,
            characters: chars.iter().map(|x| x.to_string()).collect(),
            guard: c.guard.as_ref().map(|g| g.text.clone()),
            period: c.period_text(),
            declared: c.declared.as_ref().map(|o| o.name().to_string()),
            text: c.describe(),
        }
    }
}

/// One branch of a row: the guard assumption and what it yields.
#[derive(Clone, Debug, Serialize)]
pub struct AnisotropicCase {
    pub assumption: Option<String>,
    pub lambda: LambdaExport,
    /// `None` when no `Λ` qualifies under this assumption.
    pub regular: Option<String>,
    pub exceptional: Option<String>,
}

#[derive(Clone, Copy, Default)]
struct Opts {
    xi_is_chi: bool,
    period: Option<bool>,
    generic_opaque: bool,
}

fn symbolic_env(ty: TypeSymbol, o: Opts) -> Result<Environment> {
    let mut ctx = ContextDecl::new(ExtensionDatum::new("K", Ramification::Unramified));
    for g in ["chi1", "chi2", "chi", "sigma", "omega", "mu"] {
        ctx = ctx.generator(GeneratorDecl::unramified(g));
    }
    ctx = ctx.generator(if o.xi_is_chi {
        GeneratorDecl::substitution("xi", CharWord::chi_kk())
    } else {
        GeneratorDecl::unramified("xi").with_order(2)
    });
    let trivial_central = matches!(ty, TypeSymbol::XIa | TypeSymbol::XIb | TypeSymbol::XIaStar);
    let central = if trivial_central {
        CharWord::trivial()
    } else {
        CharWord::generator("omega")
    };
    let restriction = central.mul(&CharWord::chi_kk());
    ctx = ctx
        .k_character("mu_L", restriction.clone(), Ramification::Ramified)
        .k_character("mu_L'", restriction, Ramification::Ramified);
    let mut decl = EnvironmentDecl::new(ctx);
    let k = |n: &str| CharacterKRecord {
        abstract_part: [(n.to_string(), 1)].into_iter().collect(),
        norm: CharWord::trivial(),
    };
    let flag = PredicateRecord {
        default: o.period,
        overrides: Vec::new(),
    };
    let mut cusp = CuspDecl::new("pi", central);
    cusp.dihedral = Some((k("mu_L"), k("mu_L'")));
    cusp.waldspurger = flag.clone();
    cusp.jacquet_langlands = flag;
    decl.cuspidals.push(cusp);
    decl.opaque.push(OpaqueDecl {
        name: "Pi".into(),
        generic: o.generic_opaque,
        central: CharWord::generator("omega"),
        bessel: PredicateRecord::default(),
    });
    Environment::new(decl)
}

fn symbolic_rep(ty: TypeSymbol, o: Opts) -> Result<Gsp4Rep> {
    let env = symbolic_env(ty, o)?;
    let params = ty
        .parameter_names()
        .iter()
        .map(|n| {
            Ok(match *n {
                "pi" => Param::Cuspidal(env.cuspidal("pi").expect("declared above")),
                "cusp" => Param::Opaque(env.opaque("Pi").expect("declared above")),
                "chi1" | "chi2" | "chi" | "sigma" | "xi" => Param::Character(env.character(n)?),
                other => unreachable!("unknown parameter {other}"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Gsp4Rep::from_parameters(ty, params)
}

fn text(f: &crate::euler::EulerFactor) -> String {
    f.to_string()
}

/// Guard branches a row is exported under.
fn branches(ty: TypeSymbol) -> Vec<(Option<String>, Opts)> {
    use TypeSymbol as T;
    let base = Opts {
        generic_opaque: ty == T::CuspGeneric,
        ..Opts::default()
    };
    match ty {
        T::Vb | T::Vc | T::Vd | T::VaStar | T::IXa | T::IXb => vec![
            (Some("xi != chi_{K/k}".into()), base),
            (
                Some("xi = chi_{K/k}".into()),
                Opts {
                    xi_is_chi: true,
                    ..base
                },
            ),
        ],
        T::XIb | T::XIaStar => {
            let pi = if ty == T::XIb { "pi" } else { "pi^JL" };
            vec![
                (
                    Some(format!("Hom_T({pi}, 1) != 0")),
                    Opts {
                        period: Some(true),
                        ..base
                    },
                ),
                (
                    Some(format!("Hom_T({pi}, 1) = 0")),
                    Opts {
                        period: Some(false),
                        ..base
                    },
                ),
            ]
        }
        _ => vec![(None, base)],
    }
}

/// The branch under which a row's exceptional factor is nontrivial.
fn live_branch(ty: TypeSymbol) -> Opts {
    Opts {
        xi_is_chi: matches!(ty, TypeSymbol::Vd | TypeSymbol::VaStar),
        period: Some(true),
        generic_opaque: ty == TypeSymbol::CuspGeneric,
    }
}

fn exceptional_rows() -> Result<Vec<ExportRow>> {
    TWIST_ROWS
        .iter()
        .map(|&ty| {
            let o = live_branch(ty);
            let rep = symbolic_rep(ty, o)?;
            let mu = rep.context().generator("mu")?;
            let factor = exceptional_table_mu(&rep, &mu).expect("listed row");
            Ok(ExportRow {
                row: ty.to_string(),
                content: RowContent::Exceptional {
                    representation: rep.to_string(),
                    lambda: LambdaExport::new(&anisotropic_lambda_condition(&rep)),
                    factor: text(&factor),
                },
                caveats: caveats(&rep, None),
            })
        })
        .collect()
}

const H_ROWS: [TypeSymbol; 6] = TWIST_ROWS;

fn h_functional_rows() -> Result<Vec<ExportRow>> {
    H_ROWS
        .iter()
        .map(|&ty| {
            let rep = symbolic_rep(ty, live_branch(ty))?;
            let ctx = rep.context();
            let sigma = rep.sigma().expect("all rows have sigma").clone();
            let mut candidates = vec![sigma.clone(), &ctx.chi_kk() * &sigma];
            if let Gsp4Rep::IIb { chi, .. } = &rep {
                candidates.push(chi * &sigma);
            }
            if let Some(xi) = rep.xi() {
                candidates.push(xi * &sigma);
            }
            let mut rho = Vec::new();
            for c in candidates {
                let s = c.to_string();
                if h_functional_dim(&rep, &c)? == 1 && !rho.contains(&s) {
                    rho.push(s);
                }
            }
            Ok(ExportRow {
                row: ty.to_string(),
                content: RowContent::HFunctional {
                    representation: rep.to_string(),
                    rho,
                    condition: anisotropic_lambda_condition(&rep).guard.map(|g| g.text),
                },
                caveats: caveats(&rep, None),
            })
        })
        .collect()
}

fn anisotropic_rows() -> Result<Vec<ExportRow>> {
    TypeSymbol::ALL
        .iter()
        .map(|&ty| {
            let mut cases = Vec::new();
            let mut shown = None;
            for (assumption, o) in branches(ty) {
                let rep = symbolic_rep(ty, o)?;
                let cond = anisotropic_lambda_condition(&rep);
                let live = !cond.is_none();
                let mut lambda = LambdaExport::new(&cond);
                if !live {
                    lambda.kind = "none";
                }
                cases.push(AnisotropicCase {
                    assumption,
                    lambda,
                    regular: regular_table(&rep).filter(|_| live).map(|f| text(&f)),
                    exceptional: exceptional_table(&rep).filter(|_| live).map(|f| text(&f)),
                });
                shown.get_or_insert(rep);
            }
            let rep = shown.expect("at least one branch");
            Ok(ExportRow {
                row: ty.to_string(),
                content: RowContent::Anisotropic {
                    representation: rep.to_string(),
                    cases,
                },
                caveats: caveats(&rep, None),
            })
        })
        .collect()
}

fn spinor_rows() -> Result<Vec<ExportRow>> {
    TypeSymbol::ALL
        .iter()
        .map(|&ty| {
            let rep = symbolic_rep(ty, live_branch(ty))?;
            let (full, note) = match spinor_table(&rep) {
                Ok(f) => (Some(text(&f)), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let mut cav = caveats(&rep, None);
            cav.retain(|c| matches!(c, Caveat::OddResidueCharacteristic { .. }));
            Ok(ExportRow {
                row: ty.to_string(),
                content: RowContent::Spinor {
                    representation: rep.to_string(),
                    full,
                    note,
                },
                caveats: cav,
            })
        })
        .collect()
}

fn packet_env(cusp_central: CharWord, second_cusp: bool) -> Result<Environment> {
    let mut ctx = ContextDecl::new(ExtensionDatum::new("K", Ramification::Unramified));
    for g in ["mu1", "mu2", "mu3", "mu0", "omega", "mu"] {
        ctx = ctx.generator(GeneratorDecl::unramified(g));
    }
    ctx = ctx
        .generator(GeneratorDecl::unramified("xi").with_order(2))
        .generator(GeneratorDecl::substitution(
            "mu4",
            CharWord::generator("mu1")
                .mul(&CharWord::generator("mu2"))
                .mul(&CharWord::generator("mu3").pow(-1)),
        ));
    let mut decl = EnvironmentDecl::new(ctx);
    decl.cuspidals
        .push(CuspDecl::new("pi1", cusp_central.clone()));
    if second_cusp {
        decl.cuspidals.push(CuspDecl::new("pi2", cusp_central));
    }
    Environment::new(decl)
}

fn packet_row(packet: Packet, env: &Environment, inputs: &[Gl2Rep]) -> Result<ExportRow> {
    let mu = env.character("mu")?;
    let identity = verify_packet_identity(&packet, &mu)?;
    let mut cav: Vec<Caveat> = caveats(&packet.plus, None);
    if let Some(m) = &packet.minus {
        cav.extend(caveats(m, None));
    }
    cav.retain(|c| matches!(c, Caveat::OddResidueCharacteristic { .. }));
    cav.sort();
    cav.dedup();
    Ok(ExportRow {
        row: packet.row_label().to_string(),
        content: RowContent::Packet {
            inputs: inputs.iter().map(|p| p.to_string()).collect(),
            identity,
        },
        caveats: cav,
    })
}

fn endoscopic_rows() -> Result<Vec<ExportRow>> {
    let g = CharWord::generator;
    (0..ENDOSCOPIC_ROWS.len())
        .map(|row| {
            let central = match row {
                2 => g("mu1").mul(&g("mu2")),
                5 => g("mu0").pow(2),
                _ => g("omega"),
            };
            let env = packet_env(central, row == 7)?;
            let c = |n: &str| env.character(n);
            let pi = |n: &str| Gl2Rep::Cuspidal(env.cuspidal(n).expect("declared"));
            let inputs = match row {
                0 => vec![
                    Gl2Rep::principal(c("mu1")?, c("mu2")?)?,
                    Gl2Rep::principal(c("mu3")?, c("mu4")?)?,
                ],
                1 => {
                    let m = c("mu0")?;
                    let m2 = &m.pow(2) * &c("mu1")?.inverse();
                    vec![Gl2Rep::principal(c("mu1")?, m2)?, Gl2Rep::Special(m)]
                }
                2 => vec![Gl2Rep::principal(c("mu1")?, c("mu2")?)?, pi("pi1")],
                3 => vec![Gl2Rep::Special(c("mu0")?), Gl2Rep::Special(c("mu0")?)],
                4 => vec![
                    Gl2Rep::Special(&c("xi")? * &c("mu0")?),
                    Gl2Rep::Special(c("mu0")?),
                ],
                5 => vec![pi("pi1"), Gl2Rep::Special(c("mu0")?)],
                6 => vec![pi("pi1"), pi("pi1")],
                _ => vec![pi("pi1"), pi("pi2")],
            };
            let packet = endoscopic_packet(&inputs[0], &inputs[1], &env)?;
            packet_row(packet, &env, &inputs)
        })
        .collect()
}

fn saito_kurokawa_rows() -> Result<Vec<ExportRow>> {
    (0..SK_ROWS.len())
        .map(|row| {
            let env = packet_env(CharWord::trivial(), false)?;
            let c = |n: &str| env.character(n);
            let input = match row {
                0 => Gl2Rep::principal(c("mu1")?, c("mu1")?.inverse())?,
                1 => Gl2Rep::Special(env.context().trivial()),
                2 => Gl2Rep::Special(c("xi")?),
                _ => Gl2Rep::Cuspidal(env.cuspidal("pi1").expect("declared")),
            };
            packet_row(sk_packet(&input)?, &env, &[input])
        })
        .collect()
}

/// All six tables, in a fixed order.
pub fn export_tables() -> Result<Vec<ExportedTable>> {
    Ok(vec![
        ExportedTable {
            name: "exceptional",
            description: "mu-dependent exceptional factors",
            rows: exceptional_rows()?,
        },
        ExportedTable {
            name: "h_functionals",
            description: "characters rho with a nonzero (H, rho o lambda)-equivariant functional",
            rows: h_functional_rows()?,
        },
        ExportedTable {
            name: "anisotropic",
            description: "anisotropic Bessel models with regular and exceptional factors at mu = 1",
            rows: anisotropic_rows()?,
        },
        ExportedTable {
            name: "spinor",
            description: "spinor factors at mu = 1, valid for every Bessel model",
            rows: spinor_rows()?,
        },
        ExportedTable {
            name: "endoscopic",
            description: "endoscopic packets and their L-factor identity",
            rows: endoscopic_rows()?,
        },
        ExportedTable {
            name: "saito_kurokawa",
            description: "Saito-Kurokawa packets and their L-factor identity",
            rows: saito_kurokawa_rows()?,
        },
    ])
}

impl fmt::Display for ExportedTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "== {} ({} rows): {}",
            self.name,
            self.rows.len(),
            self.description
        )?;
        for r in &self.rows {
            match &r.content {
                RowContent::Exceptional {
                    representation,
                    lambda,
                    factor,
                } => writeln!(
                    f,
                    "{:<6} {representation} | Lambda {} | {factor}",
                    r.row, lambda.text
                )?,
                RowContent::HFunctional {
                    representation,
                    rho,
                    condition,
                } => {
                    write!(
                        f,
                        "{:<6} {representation} | rho in {{{}}}",
                        r.row,
                        rho.join(", ")
                    )?;
                    if let Some(c) = condition {
                        write!(f, " if {c}")?;
                    }
                    writeln!(f)?;
                }
                RowContent::Anisotropic {
                    representation,
                    cases,
                } => {
                    writeln!(f, "{:<6} {representation}", r.row)?;
                    for c in cases {
                        if let Some(a) = &c.assumption {
                            write!(f, "       [{a}]")?;
                        } else {
                            write!(f, "      ")?;
                        }
                        write!(f, " Lambda {}", c.lambda.text)?;
                        match (&c.regular, &c.exceptional) {
                            (Some(reg), Some(ex)) => writeln!(f, " | reg {reg} | ex {ex}")?,
                            _ => writeln!(f, " | no model")?,
                        }
                    }
                }
                RowContent::Spinor {
                    representation,
                    full,
                    note,
                } => writeln!(
                    f,
                    "{:<6} {representation} | {}",
                    r.row,
                    full.as_deref().or(note.as_deref()).unwrap_or("")
                )?,
                RowContent::Packet { inputs, identity } => {
                    writeln!(f, "{} <- ({})", r.row, inputs.join("; "))?;
                    writeln!(f, "    plus  {} : {}", identity.plus.rep, identity.plus.lhs)?;
                    if let Some(m) = &identity.minus {
                        writeln!(f, "    minus {} : {}", m.rep, m.lhs)?;
                    }
                    let verdict = if identity.equal() { "equal" } else { "UNEQUAL" };
                    writeln!(f, "    identity with mu: {verdict}")?;
                }
            }
            for c in &r.caveats {
                writeln!(f, "       {c}")?;
            }
        }
        Ok(())
    }
}
