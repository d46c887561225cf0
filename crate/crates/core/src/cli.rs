//! Command-line frontend behind the `singinv` binary.
//!
//! Exit codes: 0 ok, 1 other errors, 2 parse errors, 3 non-isolated
//! singularity, 4 resolution failure, 5 internal inconsistency.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::cz::{cz_index, find_crossings, parse_path_json, Crossing, CzError, HalfInteger};
use crate::family::{family_check, FamilyError, FamilySpec};
use crate::invariants::{fiber_topology, lct, lefschetz, zeta, FiberTopology, ZetaFunction};
use crate::local_algebra::milnor_number;
use crate::mclean::{e1_page, lct_via_floer, multiplicity_via_ss, E1Page};
use crate::poly::{parse_poly, serde_rational, Extended, Polynomial, Rational};
use crate::resolution::{embedded_resolution, make_separating, ResolutionError, ResolutionTree};

#[derive(Debug, Parser)]
#[command(name = "singinv", version, about = "Invariants of isolated hypersurface singularities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct PolyArgs {
    /// Polynomial, e.g. "x^2 + y^3".
    pub poly: String,
    /// Comma-separated variable order (default: identifiers in sorted order).
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
    /// Machine-readable output.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// μ, ν, lct, Lefschetz numbers, zeta function and fiber topology.
    Invariants(PolyArgs),
    /// Embedded resolution of a plane curve.
    Resolve {
        #[command(flatten)]
        poly: PolyArgs,
        /// Write the dual graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Refine until adjacent multiplicities sum past M.
        #[arg(long, value_name = "M")]
        separating: Option<u64>,
    },
    /// Lefschetz numbers of monodromy iterates.
    Lefschetz {
        #[command(flatten)]
        poly: PolyArgs,
        /// A single iterate (default: 1..=min(2 lcm(m_i), 60)).
        #[arg(long)]
        m: Option<u64>,
    },
    /// Monodromy zeta function.
    Zeta {
        #[command(flatten)]
        poly: PolyArgs,
    },
    /// E1 page of the spectral sequence for the m-th iterate.
    Ss {
        #[command(flatten)]
        poly: PolyArgs,
        /// Iterate (default: the first with a nonzero page).
        #[arg(long)]
        m: Option<u64>,
        /// Comma-separated ample weights for the separating resolution.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<u64>>,
        /// Separate at M ≥ m instead of m.
        #[arg(long, value_name = "M")]
        separating: Option<u64>,
    },
    /// Log canonical threshold.
    Lct {
        #[command(flatten)]
        poly: PolyArgs,
        /// Estimate from Floer degrees of the E1 pages.
        #[arg(long)]
        via_floer: bool,
        /// Largest iterate used with --via-floer (default: lcm(m_i)).
        #[arg(long, value_name = "K")]
        mmax: Option<u64>,
    },
    /// Check a one-parameter family described by a JSON file.
    Family {
        spec: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Conley–Zehnder index of a path described by a JSON file.
    Cz {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("singularity at the origin is not isolated")]
    NonIsolated,
    #[error("resolution failed: {0}")]
    Resolution(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Other(_) => 1,
            CliError::Parse(_) => 2,
            CliError::NonIsolated => 3,
            CliError::Resolution(_) => 4,
            CliError::Inconsistent(_) => 5,
        }
    }
}

impl From<ResolutionError> for CliError {
    fn from(e: ResolutionError) -> Self {
        match e {
            ResolutionError::NotIsolated => CliError::NonIsolated,
            ResolutionError::NonRationalCenter { .. } | ResolutionError::TooManyBlowups(_) => {
                CliError::Resolution(e.to_string())
            }
            _ => CliError::Other(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

#[derive(Debug, Serialize)]
pub struct InvariantReport {
    pub input: String,
    pub vars: Vec<String>,
    pub mu: Extended,
    pub nu: u64,
    #[serde(with = "serde_rational::option")]
    pub lct: Option<Rational>,
    pub lefschetz: Option<Vec<i64>>,
    pub zeta: Option<ZetaFunction>,
    pub fiber: Option<FiberTopology>,
}

/// Identifiers appearing in `text`, sorted and deduplicated.
pub fn infer_vars(text: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut cur = String::new();
    let mut in_number = false;
    for c in text.chars().chain(std::iter::once(' ')) {
        if c.is_ascii_alphanumeric() || c == '_' {
            if cur.is_empty() && c.is_ascii_digit() {
                in_number = true;
            }
            if !in_number {
                cur.push(c);
            }
        } else {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            in_number = false;
        }
    }
    out.sort();
    out.dedup();
    out
}

fn read_poly(args: &PolyArgs) -> Result<Polynomial, CliError> {
    let vars = args.vars.clone().unwrap_or_else(|| infer_vars(&args.poly));
    parse_poly(&args.poly, &vars).map_err(|e| CliError::Parse(e.to_string()))
}

fn isolated_at_origin(f: &Polynomial) -> Result<u64, CliError> {
    if f.is_zero() || !f.constant_term().is_zero() {
        return Err(CliError::Other("the polynomial does not vanish at the origin".into()));
    }
    milnor_number(f).finite().ok_or(CliError::NonIsolated)
}

fn resolve(f: &Polynomial) -> Result<ResolutionTree, CliError> {
    isolated_at_origin(f)?;
    Ok(embedded_resolution(f)?)
}

fn default_range(tree: &ResolutionTree) -> u64 {
    tree.lcm_multiplicities().saturating_mul(2).clamp(1, 60)
}

fn json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Other(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

pub fn invariant_report(f: &Polynomial) -> Result<InvariantReport, CliError> {
    let mu = isolated_at_origin(f)?;
    let nu = f.min_total_degree().finite().unwrap_or(0);
    let mut report = InvariantReport {
        input: f.to_string(),
        vars: f.vars().to_vec(),
        mu: Extended::Finite(mu),
        nu,
        lct: None,
        lefschetz: None,
        zeta: None,
        fiber: None,
    };
    if f.nvars() == 2 {
        let tree = embedded_resolution(f)?;
        let fiber = fiber_topology(&tree).map_err(|e| CliError::Inconsistent(e.to_string()))?;
        if fiber.mu != mu {
            return Err(CliError::Inconsistent(format!(
                "fiber topology gives mu = {}, standard basis gives {mu}",
                fiber.mu
            )));
        }
        report.lct = Some(lct(&tree));
        report.lefschetz = Some((1..=default_range(&tree)).map(|m| lefschetz(&tree, m)).collect());
        report.zeta = Some(zeta(&tree));
        report.fiber = Some(fiber);
    }
    Ok(report)
}

fn print_tree(out: &mut dyn Write, tree: &ResolutionTree) -> Result<(), CliError> {
    for d in &tree.divisors {
        let adj: Vec<String> = d.adjacent.iter().map(|j| format!("E{j}")).collect();
        writeln!(
            out,
            "E{}  m={}  a={}  self={}  adjacent=[{}]  strict={}",
            d.id,
            d.m,
            d.a,
            d.self_intersection,
            adj.join(", "),
            d.strict_points
        )?;
    }
    Ok(())
}

fn print_page(out: &mut dyn Write, page: &E1Page) -> Result<(), CliError> {
    writeln!(out, "m: {}", page.m)?;
    let w: Vec<String> = page.weights.iter().map(u64::to_string).collect();
    writeln!(out, "weights: {}", w.join(","))?;
    for (&(p, q), &r) in &page.entries {
        writeln!(out, "E1[{p},{q}] = Z^{r}")?;
    }
    writeln!(out, "euler: {}", page.euler_characteristic())?;
    Ok(())
}

#[derive(Serialize)]
struct CzReport {
    crossings: Vec<Crossing>,
    cz: HalfInteger,
}

/// Runs one command, writing its report to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Invariants(args) => {
            let r = invariant_report(&read_poly(args)?)?;
            if args.json {
                return json(out, &r);
            }
            writeln!(out, "input: {}", r.input)?;
            writeln!(out, "vars: {}", r.vars.join(", "))?;
            writeln!(out, "mu: {}", r.mu)?;
            writeln!(out, "nu: {}", r.nu)?;
            let unavailable = || "unavailable".to_string();
            writeln!(out, "lct: {}", r.lct.as_ref().map_or_else(unavailable, |q| q.to_string()))?;
            match &r.lefschetz {
                Some(l) => {
                    let l: Vec<String> = l.iter().map(i64::to_string).collect();
                    writeln!(out, "lefschetz (m = 1..{}): {}", l.len(), l.join(" "))?;
                }
                None => writeln!(out, "lefschetz: unavailable")?,
            }
            writeln!(out, "zeta: {}", r.zeta.as_ref().map_or_else(unavailable, |z| z.to_string()))?;
            match &r.fiber {
                Some(t) => writeln!(
                    out,
                    "fiber: mu {}, branches {}, euler {}, genus {}",
                    t.mu, t.branches, t.euler, t.genus
                )?,
                None => writeln!(out, "fiber: unavailable")?,
            }
            Ok(())
        }
        Command::Resolve { poly, dot, separating } => {
            let mut tree = resolve(&read_poly(poly)?)?;
            if let Some(m) = separating {
                tree = make_separating(&tree, *m);
            }
            tree.validate().map_err(CliError::Inconsistent)?;
            if let Some(path) = dot {
                std::fs::write(path, tree.to_dot())?;
            }
            if poly.json {
                return json(out, &tree);
            }
            print_tree(out, &tree)
        }
        Command::Lefschetz { poly, m } => {
            let tree = resolve(&read_poly(poly)?)?;
            let range = match m {
                Some(m) if *m == 0 => return Err(CliError::Other("m must be positive".into())),
                Some(m) => *m..=*m,
                None => 1..=default_range(&tree),
            };
            let values: Vec<(u64, i64)> = range.map(|k| (k, lefschetz(&tree, k))).collect();
            if poly.json {
                #[derive(Serialize)]
                struct Entry {
                    m: u64,
                    lefschetz: i64,
                }
                let v: Vec<Entry> = values.iter().map(|&(m, l)| Entry { m, lefschetz: l }).collect();
                return json(out, &v);
            }
            for (k, l) in values {
                writeln!(out, "{k} {l}")?;
            }
            Ok(())
        }
        Command::Zeta { poly } => {
            let z = zeta(&resolve(&read_poly(poly)?)?);
            if poly.json {
                return json(out, &z);
            }
            writeln!(out, "{z}")?;
            Ok(())
        }
        Command::Ss { poly, m, weights, separating } => {
            let tree = resolve(&read_poly(poly)?)?;
            let m = m.unwrap_or_else(|| multiplicity_via_ss(&tree));
            if m == 0 {
                return Err(CliError::Other("m must be positive".into()));
            }
            let level = separating.unwrap_or(m);
            if level < m {
                return Err(CliError::Other(format!("--separating {level} is below m = {m}")));
            }
            let tree = make_separating(&tree, level);
            let page = e1_page(&tree, m, weights.as_deref()).map_err(|e| CliError::Other(e.to_string()))?;
            if page.euler_characteristic() != -lefschetz(&tree, m) {
                return Err(CliError::Inconsistent("E1 Euler characteristic differs from -Λ(φ^m)".into()));
            }
            if poly.json {
                return json(out, &page);
            }
            print_page(out, &page)
        }
        Command::Lct { poly, via_floer, mmax } => {
            let tree = resolve(&read_poly(poly)?)?;
            let value = if *via_floer {
                let k = mmax.unwrap_or_else(|| tree.lcm_multiplicities());
                lct_via_floer(&tree, k).map_err(|e| CliError::Other(e.to_string()))?
            } else {
                lct(&tree)
            };
            if poly.json {
                #[derive(Serialize)]
                struct Lct {
                    #[serde(with = "serde_rational")]
                    lct: Rational,
                }
                return json(out, &Lct { lct: value });
            }
            writeln!(out, "{value}")?;
            Ok(())
        }
        Command::Family { spec, json: as_json } => {
            let text = std::fs::read_to_string(spec)?;
            let spec = FamilySpec::from_json(&text).map_err(|e| CliError::Parse(e.to_string()))?;
            let report = family_check(&spec).map_err(|e| match e {
                FamilyError::Poly(p) => CliError::Parse(p.to_string()),
                other => CliError::Other(other.to_string()),
            })?;
            if *as_json {
                return json(out, &report);
            }
            write!(out, "{report}")?;
            Ok(())
        }
        Command::Cz { path, json: as_json } => {
            let text = std::fs::read_to_string(path)?;
            let p = parse_path_json(&text).map_err(|e| match e {
                CzError::Parse(s) => CliError::Parse(s),
                other => CliError::Other(other.to_string()),
            })?;
            let crossings = find_crossings(&p).map_err(|e| CliError::Other(e.to_string()))?;
            let cz = cz_index(&p).map_err(|e| CliError::Other(e.to_string()))?;
            if *as_json {
                return json(out, &CzReport { crossings, cz });
            }
            for c in &crossings {
                writeln!(
                    out,
                    "t={:.10}  kernel={}  signature={:+}{}",
                    c.time,
                    c.kernel_dim,
                    c.signature,
                    if c.endpoint { "  (endpoint)" } else { "" }
                )?;
            }
            writeln!(out, "cz: {cz}")?;
            Ok(())
        }
    }
}
