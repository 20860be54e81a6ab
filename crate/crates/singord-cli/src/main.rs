use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use singord::bounds::{
    analytic_bound_chain, check_degree_bounds, check_order_bounds, germ_invariants, minimal_degree_e39, order_targets,
    BoundReport, Flavor, Verdict,
};
use singord::cohomology::{castelnuovo, cohomology, generic_orders};
use singord::colength::{classify, milnor_number, multiplicity, origin, tjurina_number};
use singord::corpus::{run_acceptance, CRITERIA};
use singord::puiseux::resolve;
use singord::realizer::{ak_family, construct_ak_3d, normal_form, realize_critical_point, realize_plane_curve};
use singord::schemes::{build_scheme, Position, SampleMode, SchemeKind, ZeroDimScheme};
use singord::{Error, MultiPoly};

#[derive(Parser)]
#[command(name = "singord", version, about = "Exact invariants, schemes and interpolation orders of plane singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every random choice
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report to this file instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Milnor and Tjurina numbers, multiplicity, delta, branches and tree
    Invariants { poly: String },
    /// Zero-dimensional scheme of a germ at the origin
    Scheme {
        poly: String,
        #[arg(long, default_value = "s")]
        kind: String,
    },
    /// h0 and h1 of the ideal sheaf twisted by `degree`
    Cohomology {
        scheme: PathBuf,
        #[arg(long)]
        degree: usize,
    },
    /// Hilbert data, orders and Castelnuovo function
    Castelnuovo { scheme: PathBuf },
    /// Generic orders of sampled representatives
    Orders {
        scheme: PathBuf,
        #[arg(long, default_value = "iso")]
        mode: String,
        #[arg(long, default_value_t = 5)]
        trials: usize,
    },
    /// Applicable bounds for a germ or a scheme file
    Bounds {
        input: String,
        #[arg(long, default_value = "iso")]
        mode: String,
        #[arg(long, default_value_t = 5)]
        trials: usize,
    },
    /// Realize prescribed singularities
    Realize {
        /// Type name (A7, D4, E6), polynomial, comma separated list, or a
        /// JSON file holding an array of those
        #[arg(long)]
        target: String,
        #[arg(long, default_value = "crit")]
        flavor: String,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// The explicit A_(2m^2-1) family
    AkFamily {
        #[arg(long)]
        m: u32,
    },
    /// A_k critical point in three variables
    Ak3d {
        #[arg(long)]
        k: usize,
    },
    /// Full acceptance corpus
    Corpus {
        /// Print wall time per criterion to standard error
        #[arg(long)]
        timings: bool,
    },
}

enum Failure {
    Lib(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Out = Result<(Value, u8), Failure>;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::GenericityFailure(_) => 3,
        Error::NonFiniteColength(_) | Error::ExtensionDepth(_) => 4,
        Error::InvariantBreach(_) | Error::ConditionFailed(_) | Error::VerificationFailure(_) => 1,
        _ => 2,
    }
}

fn verdict_code(rs: &[BoundReport]) -> u8 {
    if rs.iter().any(|b| b.verdict == Verdict::Fail) {
        1
    } else if rs.iter().any(|b| b.verdict == Verdict::Inconclusive) {
        3
    } else {
        0
    }
}

fn value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn poly(text: &str) -> Result<MultiPoly, Failure> {
    Ok(MultiPoly::parse(text)?)
}

fn load_scheme(path: &Path) -> Result<ZeroDimScheme, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(ZeroDimScheme::from_json(&v)?)
}

fn invariants(text: &str) -> Out {
    let f = poly(text)?;
    let res = resolve(&f, &origin(2))?;
    let v = json!({
        "polynomial": f.to_string(),
        "type": classify(&f)?.name(),
        "mu": milnor_number(&f)?,
        "tau": tjurina_number(&f)?,
        "mt": multiplicity(&f),
        "delta": res.delta,
        "branches": res.r,
        "tree": value(&res.tree),
        "branch_classes": value(&res.branches),
    });
    Ok((v, 0))
}

fn scheme(text: &str, kind: &str) -> Out {
    let f = poly(text)?;
    let kind: SchemeKind = kind.parse()?;
    let germ = (!matches!(kind, SchemeKind::Fat(_))).then_some(&f);
    let z = build_scheme(germ, &kind, Position::origin())?;
    Ok((json!({"kind": kind.to_string(), "degree": z.degree(), "m2": z.m2()?, "scheme": z.to_json()}), 0))
}

fn bounds(input: &str, mode: &str, trials: usize, seed: u64) -> Out {
    if Path::new(input).is_file() {
        let z = load_scheme(Path::new(input))?;
        let (rs, g) = check_order_bounds(&z, mode.parse::<SampleMode>()?, trials, seed)?;
        let code = verdict_code(&rs);
        return Ok((json!({"scheme": z.provenance, "bounds": value(&rs), "orders": value(&g)}), code));
    }
    let f = poly(input)?;
    let inv = germ_invariants(&f)?;
    let mut rs = check_degree_bounds(&f)?;
    if !inv.sing.is_simple() {
        rs.push(analytic_bound_chain(&inv));
    }
    let targets: Vec<_> = [Flavor::Crit, Flavor::Top, Flavor::An].iter().flat_map(|&fl| order_targets(&inv, fl)).collect();
    let code = verdict_code(&rs);
    Ok((json!({"invariants": value(&inv), "bounds": value(&rs), "degree_targets": value(&targets)}), code))
}

fn target_list(target: &str) -> Result<Vec<MultiPoly>, Failure> {
    let items: Vec<String> = if Path::new(target).is_file() {
        let text = std::fs::read_to_string(target).map_err(|e| Failure::Input(format!("{target}: {e}")))?;
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{target}: expected an array of strings: {e}")))?
    } else {
        target.split(',').map(|s| s.trim().to_string()).collect()
    };
    if items.is_empty() {
        return Err(Failure::Input("no targets".into()));
    }
    items.iter().map(|t| normal_form(t).or_else(|_| MultiPoly::parse(t)).map_err(Failure::from)).collect()
}

fn realize(target: &str, flavor: &str, degree: Option<usize>, seed: u64) -> Out {
    let targets = target_list(target)?;
    let flavor: Flavor = flavor.parse()?;
    let r = match flavor {
        Flavor::Crit => {
            if targets.len() != 1 {
                return Err(Failure::Input("critical point realization takes one target".into()));
            }
            realize_critical_point(&targets[0], seed)?
        }
        _ => {
            let d = match degree {
                Some(d) => d,
                None => {
                    let invs = targets.iter().map(germ_invariants).collect::<singord::Result<Vec<_>>>()?;
                    minimal_degree_e39(&invs)
                }
            };
            realize_plane_curve(&targets, d, flavor, seed)?
        }
    };
    let code = if r.verified { 0 } else { 1 };
    Ok((value(&r), code))
}

fn dispatch(cli: &Cli) -> Out {
    let seed = cli.seed;
    match &cli.command {
        Command::Invariants { poly } => invariants(poly),
        Command::Scheme { poly, kind } => scheme(poly, kind),
        Command::Cohomology { scheme, degree } => {
            let z = load_scheme(scheme)?;
            let (h0, h1) = cohomology(&z, *degree)?;
            Ok((json!({"degree": degree, "h0": h0, "h1": h1, "scheme_degree": z.degree()}), 0))
        }
        Command::Castelnuovo { scheme } => {
            let z = load_scheme(scheme)?;
            Ok((value(&castelnuovo(&z)?), 0))
        }
        Command::Orders { scheme, mode, trials } => {
            let z = load_scheme(scheme)?;
            let g = generic_orders(&z, mode.parse()?, *trials, seed)?;
            let code = if g.stable { 0 } else { 3 };
            Ok((value(&g), code))
        }
        Command::Bounds { input, mode, trials } => bounds(input, mode, *trials, seed),
        Command::Realize { target, flavor, degree } => realize(target, flavor, *degree, seed),
        Command::AkFamily { m } => {
            let r = ak_family(*m)?;
            Ok((value(&r), if r.verified { 0 } else { 1 }))
        }
        Command::Ak3d { k } => {
            let r = construct_ak_3d(*k, seed)?;
            Ok((value(&r), if r.verified { 0 } else { 1 }))
        }
        Command::Corpus { timings } => {
            let r = run_acceptance(seed);
            if *timings {
                for ((id, title), t) in CRITERIA.iter().zip(&r.timings) {
                    eprintln!("criterion {id:>2} {:>9.3}s  {title}", t.as_secs_f64());
                }
            }
            Ok((value(&r), if r.all_pass { 0 } else { 1 }))
        }
    }
}

fn emit(v: &Value, output: Option<&Path>) -> anyhow::Result<()> {
    // serde_json maps are ordered, so keys come out sorted
    let text = serde_json::to_string_pretty(v)? + "\n";
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (v, code) = match dispatch(&cli) {
        Ok(r) => r,
        Err(Failure::Lib(e)) => (json!({"error": e.to_string()}), exit_code(&e)),
        Err(Failure::Input(m)) => (json!({"error": m}), 2),
    };
    if let Err(e) = emit(&v, cli.output.as_deref()) {
        eprintln!("singord: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
