//! `nib`: JSON reports on towers of abelian fields, normal integral basis
//! obstructions, resolvent valuations and Galois algebras.
//!
//! Exit codes: 0 when the answer is positive, 2 when it is negative (the
//! hypotheses are not met, a tower is not split, a check fails), 1 on errors.

mod report;

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use nib_core::cyclotomic::DEFAULT_PRECISION_CAP;
use nib_core::galois_algebra::{
    amitsur_minus_report, base_change, construct_psi, cyclic_character_class, wild_layer_class, GExtension,
};
use nib_core::group::{abelian_groups_of_order, all_subgroups};
use nib_core::obstruction::{check_nownib1, check_nownib2, nib_split_decision, wnib_forces_disjoint_ram, Status};
use nib_core::resolvent::{
    faithful_character, norm_compat_case, pattern_case, resolvent_ideal_above_p_with_cap,
    verify_valuation_pattern_with_cap,
};
use nib_core::spec::{parse_field, parse_tower, tower_from_parts};
use nib_core::stickelberger::minus_part_report;
use nib_core::tower::{cyclic_prime_power_decomposition, is_arithmetically_split, DEFAULT_SUBGROUP_BOUND};
use nib_core::units::unit_group;
use nib_core::{AbelianField, AbelianGroup, Error, Tower};

use report::{error_envelope, render_text, Outcome, Report};

#[derive(Parser)]
#[command(name = "nib", version, about = "Towers of abelian number fields and normal integral bases")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Config {
    /// Cap on subgroup enumeration in the exhaustive split oracle.
    #[arg(long, global = true, default_value_t = DEFAULT_SUBGROUP_BOUND, value_parser = clap::value_parser!(u64).range(1..))]
    bound_subgroups: u64,
    /// Largest p-adic precision used by valuation computations.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION_CAP, value_parser = clap::value_parser!(u32).range(1..))]
    hensel_cap: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for batch input (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Abelian number fields.
    Field {
        #[command(subcommand)]
        cmd: FieldCmd,
    },
    /// Towers Q <= k <= K <= L.
    Tower {
        #[command(subcommand)]
        cmd: TowerCmd,
    },
    /// Obstructions to (weak) normal integral bases.
    Obstruct {
        #[command(subcommand)]
        cmd: ObstructCmd,
    },
    /// Minus parts of Stickelberger elements for one (l, r).
    Minuspart {
        /// Odd prime l.
        #[arg(long)]
        l: u64,
        /// Odd prime r with r | l - 1.
        #[arg(long)]
        r: u64,
    },
    /// Resolvent ideals above a tamely ramified prime.
    Resolvent {
        #[command(subcommand)]
        cmd: ResolventCmd,
    },
    /// G-Galois algebras over Q.
    Halgebra {
        #[command(subcommand)]
        cmd: HalgebraCmd,
    },
}

#[derive(Subcommand)]
enum FieldCmd {
    /// Degree, conductor, characters and ramification of a field.
    Info {
        /// Preset (`cyclotomic:n`, `maxreal:n`, `cyclic_subfield:p:d`, `Q`) or JSON object.
        #[arg(long)]
        preset: String,
    },
}

#[derive(Args, Clone)]
struct TowerInput {
    /// Field spec for k.
    #[arg(long, default_value = "Q")]
    base: String,
    /// Field spec for K.
    #[arg(long)]
    middle: Option<String>,
    /// Field spec for L.
    #[arg(long)]
    top: Option<String>,
    /// Tower as JSON `{"base", "middle", "top"}`.
    #[arg(long, conflicts_with_all = ["middle", "top"])]
    tower: Option<String>,
    /// File with one tower JSON per line; `-` reads stdin.
    #[arg(long, conflicts_with_all = ["middle", "top", "tower"])]
    batch: Option<String>,
}

#[derive(Subcommand)]
enum TowerCmd {
    /// Degrees, ramification and disjointness data.
    Analyze(TowerInput),
    /// Whether L = K L' with L'/k arithmetically disjoint from K/k.
    Split(TowerInput),
}

#[derive(Subcommand)]
enum ObstructCmd {
    /// Obstruction to WNIB from a prime ramified in both layers.
    Nownib1(TowerInput),
    /// Obstruction to WNIB for totally real K and [L:K] an odd prime.
    Nownib2(TowerInput),
    /// WNIB forces disjoint ramification.
    Prop(TowerInput),
    /// NIB versus arithmetic splitting for odd [L:Q].
    Nibsplit(TowerInput),
}

#[derive(Subcommand)]
enum ResolventCmd {
    /// Valuation pattern of the resolvent ideal for L of degree l and conductor p.
    Verify {
        /// Degree of L, an odd prime.
        #[arg(long)]
        l: u64,
        /// Conductor of L, a prime with l | p - 1.
        #[arg(long)]
        p: u64,
        /// Tower JSON with K = Q; defaults to the degree-l subfield of Q(zeta_p).
        #[arg(long)]
        tower: Option<String>,
    },
    /// Compare I for L of degree l^m with the ideal for its index-t subfield.
    Normcompat {
        /// Odd prime l.
        #[arg(long)]
        l: u64,
        /// Exponent: L has degree l^m.
        #[arg(long)]
        m: u32,
        /// Conductor of L, a prime with l^m | p - 1.
        #[arg(long)]
        p: u64,
        /// Index of the subfield; defaults to l.
        #[arg(long)]
        t: Option<u64>,
    },
    /// Above-p exponent vector of the resolvent ideal for a generator of X_L.
    Ideal {
        /// Field spec for L.
        #[arg(long)]
        top: String,
        /// Tamely ramified prime.
        #[arg(long)]
        p: u64,
    },
}

#[derive(Subcommand)]
enum HalgebraCmd {
    /// Product of two classes.
    Product {
        /// Class spec: `cyclic:p:d`, `wild:p:a`, `identity:orders` or JSON.
        #[arg(long)]
        a: String,
        /// Class spec.
        #[arg(long)]
        b: String,
    },
    /// Opposite (inverse) class.
    Op {
        /// Class spec.
        #[arg(long)]
        a: String,
    },
    /// Image, kernel, core field and ramification of a class.
    Core {
        /// Class spec.
        #[arg(long)]
        a: String,
    },
    /// Class with the local components at S removed, plus the identity check.
    Psi {
        /// Class spec.
        #[arg(long)]
        a: String,
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',')]
        s: Vec<u64>,
    },
    /// Restriction of a class to an abelian field.
    Basechange {
        /// Class spec.
        #[arg(long)]
        a: String,
        /// Field spec for the new base.
        #[arg(long)]
        field: String,
    },
    /// Exactness of the minus Amitsur complex for G (and all subgroups unless given).
    Amitsur {
        /// Cyclic factor orders of G, comma-separated.
        #[arg(long, value_delimiter = ',', required_unless_present = "max_order")]
        group: Vec<u64>,
        /// Generators of G_0, each as comma-separated coordinates, separated by `;`.
        #[arg(long)]
        subgroup: Option<String>,
        /// Check every odd abelian G of order at most this bound.
        #[arg(long, conflicts_with = "group")]
        max_order: Option<u64>,
    },
}

type CmdResult = nib_core::Result<Report>;

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NonUnitGenerator(..) => "NonUnitGenerator",
        Error::GeneratorOutOfRange(_) => "GeneratorOutOfRange",
        Error::NotATower(_) => "NotATower",
        Error::BoundExceeded { .. } => "BoundExceeded",
        Error::PreconditionFailed(_) => "PreconditionFailed",
        Error::ZeroElement => "ZeroElement",
        Error::PrecisionExceeded(_) => "PrecisionExceeded",
        Error::ConductorMismatch(..) => "ConductorMismatch",
        Error::UnsupportedConductor(_) => "UnsupportedConductor",
        Error::InvalidParameter(_) => "InvalidParameter",
        Error::GroupMismatch(_) => "GroupMismatch",
        Error::Parse(_) => "ParseError",
        Error::Internal(_) => "Internal",
    }
}

fn field_info(f: &AbelianField) -> Value {
    let mut orders: BTreeMap<u64, usize> = BTreeMap::new();
    for c in f.character_group() {
        *orders.entry(c.order).or_default() += 1;
    }
    json!({
        "field": f,
        "conductor": f.conductor(),
        "degree": f.degree(),
        "ramified": f.ramification_data(),
        "totally_real": f.is_totally_real(),
        "roots_of_unity": f.roots_of_unity_order(),
        "character_orders": orders,
    })
}

fn tower_summary(t: &Tower) -> Value {
    json!({ "base": t.base, "middle": t.middle, "top": t.top })
}

fn analyze(t: &Tower, cfg: &Config) -> CmdResult {
    let (disjoint, common) = t.has_disjoint_ramification();
    let split = if t.base.is_rational() || t.top.degree() <= cfg.bound_subgroups {
        Some(is_arithmetically_split(t, cfg.bound_subgroups)?)
    } else {
        None
    };
    let factors = cyclic_prime_power_decomposition(t).ok();
    Ok(Report::positive(json!({
        "tower": tower_summary(t),
        "degree_lower": t.degree_lower(),
        "degree_upper": t.degree_upper(),
        "ramification": t.ramification_table(),
        "tame": t.is_tame(),
        "wild_primes": t.wild_primes(),
        "disjoint_ramification": disjoint,
        "common_ramified_primes": common,
        "ramification_module": t.ramification_module(),
        "cyclic_factors": factors,
        "split": split,
    })))
}

fn split(t: &Tower, cfg: &Config) -> CmdResult {
    let v = is_arithmetically_split(t, cfg.bound_subgroups)?;
    Ok(Report::new(Outcome::from_bool(v.split), json!({ "tower": tower_summary(t), "verdict": v })))
}

fn obstruct(cmd: &ObstructCmd, t: &Tower) -> CmdResult {
    let v = match cmd {
        ObstructCmd::Nownib1(_) => check_nownib1(t)?,
        ObstructCmd::Nownib2(_) => check_nownib2(t)?,
        ObstructCmd::Prop(_) => wnib_forces_disjoint_ram(t)?,
        ObstructCmd::Nibsplit(_) => nib_split_decision(t)?,
    };
    let outcome = Outcome::from_bool(v.status != Status::HypothesesNotMet);
    Ok(Report::new(outcome, json!({ "tower": tower_summary(t), "verdict": v })))
}

fn read_batch(path: &str) -> io::Result<Vec<String>> {
    let lines: Vec<String> = if path == "-" {
        io::stdin().lock().lines().collect::<io::Result<_>>()?
    } else {
        std::fs::read_to_string(path)?.lines().map(String::from).collect()
    };
    Ok(lines.into_iter().filter(|l| !l.trim().is_empty()).collect())
}

fn single_tower(input: &TowerInput) -> nib_core::Result<Tower> {
    match (&input.tower, &input.middle, &input.top) {
        (Some(json), _, _) => parse_tower(json),
        (None, Some(m), Some(t)) => tower_from_parts(&input.base, m, t),
        _ => Err(Error::Parse("give --tower, --batch, or both --middle and --top".into())),
    }
}

/// Run `f` on one tower or on every tower in a batch, keeping input order.
fn with_towers(input: &TowerInput, f: impl Fn(&Tower) -> CmdResult + Sync) -> CmdResult {
    let Some(path) = &input.batch else {
        return f(&single_tower(input)?);
    };
    let lines = read_batch(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    let items: Vec<(Outcome, Value)> = lines
        .par_iter()
        .enumerate()
        .map(|(i, line)| match parse_tower(line).and_then(|t| f(&t)) {
            Ok(r) => (r.outcome, json!({ "line": i + 1, "outcome": r.outcome.label(), "result": r.result })),
            Err(e) => (
                Outcome::Error,
                json!({ "line": i + 1, "outcome": "error", "error": { "kind": error_kind(&e), "message": e.to_string() } }),
            ),
        })
        .collect();
    let outcome = items.iter().map(|(o, _)| *o).max().unwrap_or(Outcome::Positive);
    Ok(Report::new(outcome, items.into_iter().map(|(_, v)| v).collect::<Vec<_>>()))
}

fn parse_class(s: &str) -> nib_core::Result<GExtension> {
    let parts: Vec<&str> = s.trim().split(':').collect();
    let num = |x: &str| x.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad integer {x:?} in {s:?}")));
    match parts.as_slice() {
        ["cyclic", p, d] => cyclic_character_class(num(p)?, num(d)?),
        ["wild", p, a] => wild_layer_class(num(p)?, num(a)? as u32),
        ["identity", orders] => Ok(GExtension::identity(AbelianGroup::new(
            orders.split(',').map(num).collect::<nib_core::Result<_>>()?,
        ))),
        _ => {
            #[derive(serde::Deserialize)]
            #[serde(deny_unknown_fields)]
            struct Repr {
                modulus: u64,
                group: Vec<u64>,
                images: Vec<Vec<u64>>,
            }
            let r: Repr = serde_json::from_str(s)
                .map_err(|e| Error::Parse(format!("{e} (line {}, column {})", e.line(), e.column())))?;
            GExtension::new(r.modulus, AbelianGroup::new(r.group), r.images)
        }
    }
}

fn class_json(m: &GExtension) -> Value {
    let n = m.normalized();
    let ug = unit_group(n.modulus);
    let (g0, core) = n.core();
    json!({
        "modulus": n.modulus,
        "group": n.group.orders(),
        "generators": ug.generators(),
        "images": n.images,
        "image_order": g0.len(),
        "core_field": core,
        "unramified": n.is_unramified(),
        "tame": n.is_tame(),
        "ramified_primes": n.ramified_primes(),
    })
}

fn parse_elements(s: &str, g: &AbelianGroup) -> nib_core::Result<Vec<Vec<u64>>> {
    s.split(';')
        .filter(|x| !x.trim().is_empty())
        .map(|x| {
            let v: Vec<u64> = x
                .split(',')
                .map(|c| c.trim().parse().map_err(|_| Error::Parse(format!("bad coordinate {c:?}"))))
                .collect::<nib_core::Result<_>>()?;
            if !g.contains(&v) {
                return Err(Error::GeneratorOutOfRange(format!("{v:?} for orders {:?}", g.orders())));
            }
            Ok(v)
        })
        .collect()
}

fn amitsur(group: &[u64], subgroup: &Option<String>, max_order: Option<u64>) -> CmdResult {
    let mut pairs = Vec::new();
    match max_order {
        Some(bound) => {
            for n in (1..=bound).step_by(2) {
                for orders in abelian_groups_of_order(n) {
                    let g = AbelianGroup::new(orders);
                    for h in all_subgroups(&g) {
                        pairs.push((g.clone(), h));
                    }
                }
            }
        }
        None => {
            let g = AbelianGroup::new(group.to_vec());
            match subgroup {
                Some(s) => {
                    let h = g.span(&parse_elements(s, &g)?);
                    pairs.push((g, h));
                }
                None => {
                    for h in all_subgroups(&g) {
                        pairs.push((g.clone(), h));
                    }
                }
            }
        }
    }
    let reports = pairs
        .par_iter()
        .map(|(g, h)| amitsur_minus_report(g, h))
        .collect::<nib_core::Result<Vec<_>>>()?;
    let exact = reports.iter().all(|r| r.exact);
    Ok(Report::new(
        Outcome::from_bool(exact),
        json!({ "pairs": reports.len(), "all_exact": exact, "reports": reports }),
    ))
}

fn halgebra(cmd: &HalgebraCmd) -> CmdResult {
    match cmd {
        HalgebraCmd::Product { a, b } => {
            let m = parse_class(a)?.product(&parse_class(b)?)?;
            Ok(Report::positive(class_json(&m)))
        }
        HalgebraCmd::Op { a } => Ok(Report::positive(class_json(&parse_class(a)?.inverse_op()))),
        HalgebraCmd::Core { a } => Ok(Report::positive(class_json(&parse_class(a)?))),
        HalgebraCmd::Psi { a, s } => Ok(Report::positive(class_json(&construct_psi(&parse_class(a)?, s)))),
        HalgebraCmd::Basechange { a, field } => {
            let bc = base_change(&parse_class(a)?, &parse_field(field)?)?;
            Ok(Report::positive(json!({
                "base": bc.base,
                "image_order": bc.image().len(),
                "core_field": bc.core_field(),
                "split": bc.is_split(),
                "unramified": bc.is_unramified(),
            })))
        }
        HalgebraCmd::Amitsur { group, subgroup, max_order } => amitsur(group, subgroup, *max_order),
    }
}

fn resolvent_cmd(cmd: &ResolventCmd, cfg: &Config) -> CmdResult {
    match cmd {
        ResolventCmd::Verify { l, p, tower } => {
            let (t, chi) = match tower {
                Some(json) => {
                    let t = parse_tower(json)?;
                    let chi = faithful_character(&t.top)?;
                    (t, chi)
                }
                None => pattern_case(*l, *p)?,
            };
            if t.top.degree() != *l {
                return Err(Error::PreconditionFailed(format!("[L:Q] = {} but --l {l}", t.top.degree())));
            }
            let rep = verify_valuation_pattern_with_cap(&t, &chi, *p, cfg.hensel_cap)?;
            let ok = rep.statement_a && rep.statement_b && rep.statement_c;
            Ok(Report::new(Outcome::from_bool(ok), rep))
        }
        ResolventCmd::Normcompat { l, m, p, t } => {
            let rep = norm_compat_case(*l, *m, t.unwrap_or(*l), *p)?;
            Ok(Report::new(Outcome::from_bool(rep.holds), rep))
        }
        ResolventCmd::Ideal { top, p } => {
            let l = parse_field(top)?;
            let q = AbelianField::rational();
            let t = Tower::new(q.clone(), q, l.clone())?;
            let chi = faithful_character(&l)?;
            Ok(Report::positive(resolvent_ideal_above_p_with_cap(&t, &chi, *p, cfg.hensel_cap)?))
        }
    }
}

fn run(cli: &Cli) -> (String, CmdResult) {
    let cfg = &cli.config;
    match &cli.command {
        Command::Field { cmd: FieldCmd::Info { preset } } => {
            ("field info".into(), parse_field(preset).map(|f| Report::positive(field_info(&f))))
        }
        Command::Tower { cmd } => match cmd {
            TowerCmd::Analyze(i) => ("tower analyze".into(), with_towers(i, |t| analyze(t, cfg))),
            TowerCmd::Split(i) => ("tower split".into(), with_towers(i, |t| split(t, cfg))),
        },
        Command::Obstruct { cmd } => {
            let (name, input) = match cmd {
                ObstructCmd::Nownib1(i) => ("nownib1", i),
                ObstructCmd::Nownib2(i) => ("nownib2", i),
                ObstructCmd::Prop(i) => ("prop", i),
                ObstructCmd::Nibsplit(i) => ("nibsplit", i),
            };
            (format!("obstruct {name}"), with_towers(input, |t| obstruct(cmd, t)))
        }
        Command::Minuspart { l, r } => {
            ("minuspart".into(), minus_part_report(*l, *r).map(Report::positive))
        }
        Command::Resolvent { cmd } => {
            let name = match cmd {
                ResolventCmd::Verify { .. } => "verify",
                ResolventCmd::Normcompat { .. } => "normcompat",
                ResolventCmd::Ideal { .. } => "ideal",
            };
            (format!("resolvent {name}"), resolvent_cmd(cmd, cfg))
        }
        Command::Halgebra { cmd } => {
            let name = match cmd {
                HalgebraCmd::Product { .. } => "product",
                HalgebraCmd::Op { .. } => "op",
                HalgebraCmd::Core { .. } => "core",
                HalgebraCmd::Psi { .. } => "psi",
                HalgebraCmd::Basechange { .. } => "basechange",
                HalgebraCmd::Amitsur { .. } => "amitsur",
            };
            (format!("halgebra {name}"), halgebra(cmd))
        }
    }
}

fn emit(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("json"),
        Format::Text => render_text(v),
    }
}

/// Print, ignoring a closed pipe (e.g. output piped into `head`).
fn print_out(s: &str) {
    let _ = writeln!(io::stdout().lock(), "{s}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.config.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.config.jobs)
            .build_global()
            .expect("thread pool is configured once");
    }
    let (command, result) = run(&cli);
    match result {
        Ok(r) => {
            print_out(&emit(&r.envelope(&command), cli.config.format));
            match r.outcome {
                Outcome::Positive => ExitCode::SUCCESS,
                Outcome::Negative => ExitCode::from(2),
                Outcome::Error => ExitCode::from(1),
            }
        }
        Err(e) => {
            print_out(&emit(&error_envelope(&command, error_kind(&e), &e.to_string()), cli.config.format));
            ExitCode::from(1)
        }
    }
}
