use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use skewcode::code::{find_generators, Code, DEFAULT_SEARCH_BUDGET};
use skewcode::duality::dual_report;
use skewcode::lab::{self, Lab, LabConfig};
use skewcode::quotient::{ContextSpec, QuotientContext, RingRef};
use skewcode::ring::default_modulus;
use skewcode::{AutomorphismPair, Error, Ring, RingSpec, SkewPoly, SkewRing};

#[derive(Parser)]
#[command(
    name = "skewcode",
    version,
    about = "Bivariate skew polynomials and 2-D skew constacyclic codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a coefficient ring and the fixed subrings of ρ, θ and ρθ.
    RingInfo {
        #[command(flatten)]
        skew: SkewArgs,
        #[arg(long)]
        json: bool,
    },
    /// Star product f ⋆ g.
    PolyMul {
        #[command(flatten)]
        skew: SkewArgs,
        f: String,
        g: String,
        #[arg(long)]
        json: bool,
    },
    /// Right division f = q ⋆ g + r by a monic g.
    PolyDiv {
        #[command(flatten)]
        skew: SkewArgs,
        f: String,
        g: String,
        #[arg(long)]
        json: bool,
    },
    /// Canonical representative of f in the quotient by x^l - λ1 and y^s - λ2.
    Reduce {
        #[command(flatten)]
        ctx: ContextArgs,
        f: String,
        #[arg(long)]
        json: bool,
    },
    /// Build the code generated by g and print its report as JSON.
    CodeBuild {
        #[command(flatten)]
        ctx: ContextArgs,
        g: String,
        /// Also compute the minimum distance by enumeration.
        #[arg(long)]
        min_distance: bool,
    },
    /// Dual of the code generated by g, as JSON.
    CodeDual {
        #[command(flatten)]
        ctx: ContextArgs,
        g: String,
    },
    /// Whether x^k y^t ⋆ ψ(h) generates the dual, for every code of a context.
    OpenProblem {
        #[command(flatten)]
        ctx: ContextArgs,
        /// Emit JSON instead of CSV.
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
    },
    /// Run the theorem lab.
    Verify {
        /// Run every suite, ignoring the suite list of the config.
        #[arg(long, conflicts_with = "suite")]
        all: bool,
        /// Run only these suites (repeatable).
        #[arg(long)]
        suite: Vec<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Print the suite ids and exit.
        #[arg(long)]
        list: bool,
        #[arg(long)]
        json: bool,
        /// Per-suite wall time on stderr.
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Args)]
struct SkewArgs {
    /// Ring name such as gf4, gf9, z4.
    #[arg(long, default_value = "gf4")]
    ring: String,
    /// ρ = Frobenius^rho.
    #[arg(long, default_value_t = 0)]
    rho: u32,
    /// θ = Frobenius^theta.
    #[arg(long, default_value_t = 0)]
    theta: u32,
}

impl SkewArgs {
    fn build(&self) -> skewcode::Result<SkewRing> {
        let ring = Ring::from_name(&self.ring)?;
        Ok(SkewRing::new(ring, AutomorphismPair::new(self.rho, self.theta)))
    }
}

#[derive(Args)]
struct ContextArgs {
    /// Context as a JSON file or inline JSON object; overrides the flags below.
    #[arg(long)]
    context: Option<String>,
    #[command(flatten)]
    skew: SkewArgs,
    #[arg(long, default_value_t = 2)]
    l: usize,
    #[arg(long, default_value_t = 2)]
    s: usize,
    #[arg(long, default_value = "1")]
    lambda1: String,
    #[arg(long, default_value = "1")]
    lambda2: String,
}

impl ContextArgs {
    fn build(&self) -> skewcode::Result<QuotientContext> {
        let spec = match &self.context {
            Some(c) => {
                let text = if c.trim_start().starts_with('{') {
                    c.clone()
                } else {
                    std::fs::read_to_string(c).map_err(|e| Error::Usage(format!("{c}: {e}")))?
                };
                serde_json::from_str::<ContextSpec>(&text)
                    .map_err(|e| Error::Usage(format!("context: {e}")))?
            }
            None => ContextSpec {
                ring: RingRef::Name(self.skew.ring.clone()),
                rho_power: self.skew.rho,
                theta_power: self.skew.theta,
                l: self.l,
                s: self.s,
                lambda1: self.lambda1.clone(),
                lambda2: self.lambda2.clone(),
            },
        };
        QuotientContext::from_spec(&spec)
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidRing(_) => "invalid-ring",
        Error::RingMismatch => "ring-mismatch",
        Error::ContextMismatch => "context-mismatch",
        Error::NotAUnit(_) => "not-a-unit",
        Error::EnumerationCap { .. } => "enumeration-cap",
        Error::ZeroPolynomial => "zero-polynomial",
        Error::NonMonicDivisor => "non-monic-divisor",
        Error::DivisionByZero => "division-by-zero",
        Error::NotOrdinary(_) => "not-ordinary",
        Error::InvalidContext(_) => "invalid-context",
        Error::ShapeMismatch { .. } => "shape-mismatch",
        Error::NotAGenerator { .. } => "not-a-generator",
        Error::NotMinimalGenerator { .. } => "not-minimal-generator",
        Error::NotApplicable(_) => "not-applicable",
        Error::Parse(_) => "parse",
        Error::Usage(_) => "usage",
        Error::TheoremViolation(_) => "theorem-violation",
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> skewcode::Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| Error::Usage(e.to_string()))
}

fn ring_info(skew: &SkewRing, as_json: bool) -> skewcode::Result<String> {
    let ring = skew.ring();
    let autos = skew.autos();
    let modulus = match ring.spec() {
        RingSpec::Gf { p, m, modulus } if modulus.is_empty() => default_modulus(*p, *m)?,
        RingSpec::Gf { modulus, .. } => modulus.clone(),
        RingSpec::Zn { .. } => Vec::new(),
    };
    let elements = ring.elements()?;
    let fixed = |rho: i64, theta: i64| {
        let a = skewcode::Automorphism::new(rho, theta);
        elements
            .iter()
            .filter(|&&e| autos.is_fixed(ring, e, &[a]))
            .count()
    };
    let info = json!({
        "name": ring.name(),
        "size": ring.size(),
        "characteristic": ring.characteristic(),
        "degree": ring.degree(),
        "is_field": ring.is_field(),
        "modulus": modulus,
        "units": ring.units()?.len(),
        "rho_power": autos.rho_power,
        "theta_power": autos.theta_power,
        "fixed_by_rho": fixed(1, 0),
        "fixed_by_theta": fixed(0, 1),
        "fixed_by_rho_theta": fixed(1, 1),
    });
    if as_json {
        return to_json(&info);
    }
    let mut out = String::new();
    for (k, v) in info.as_object().expect("object") {
        match v.as_str() {
            Some(text) => out.push_str(&format!("{k}: {text}\n")),
            None => out.push_str(&format!("{k}: {v}\n")),
        }
    }
    Ok(out.trim_end().to_string())
}

fn run(cli: Cli) -> skewcode::Result<(String, bool)> {
    let ok = |s: String| Ok((s, true));
    match cli.command {
        Command::RingInfo { skew, json } => ok(ring_info(&skew.build()?, json)?),
        Command::PolyMul { skew, f, g, json } => {
            let ctx = skew.build()?;
            let p = SkewPoly::parse(&ctx, &f)?.try_star(&SkewPoly::parse(&ctx, &g)?)?;
            if json {
                ok(to_json(&json!({ "product": p.to_string() }))?)
            } else {
                ok(p.to_string())
            }
        }
        Command::PolyDiv { skew, f, g, json } => {
            let ctx = skew.build()?;
            let (q, r) = SkewPoly::parse(&ctx, &f)?.right_divide(&SkewPoly::parse(&ctx, &g)?)?;
            if json {
                ok(to_json(
                    &json!({ "quotient": q.to_string(), "remainder": r.to_string() }),
                )?)
            } else {
                ok(format!("quotient: {q}\nremainder: {r}"))
            }
        }
        Command::Reduce { ctx, f, json } => {
            let ctx = ctx.build()?;
            let r = ctx.reduce(&SkewPoly::parse(ctx.skew(), &f)?)?;
            let array = r.array().format(ctx.ring());
            if json {
                ok(to_json(&json!({ "poly": r.to_string(), "array": array }))?)
            } else {
                let rows: Vec<String> = array.iter().map(|row| row.join(" ")).collect();
                ok(format!("{r}\n{}", rows.join("\n")))
            }
        }
        Command::CodeBuild { ctx, g, min_distance } => {
            let ctx = ctx.build()?;
            let code = Code::build(&ctx, &SkewPoly::parse(ctx.skew(), &g)?)?;
            ok(to_json(&code.report(min_distance)?)?)
        }
        Command::CodeDual { ctx, g } => {
            let ctx = ctx.build()?;
            let code = Code::build(&ctx, &SkewPoly::parse(ctx.skew(), &g)?)?;
            ok(to_json(&dual_report(&code)?)?)
        }
        Command::OpenProblem { ctx, json, budget } => {
            let ctx = ctx.build()?;
            let search = find_generators(&ctx, budget)?;
            let rows = lab::probe_table(&ctx, &search)?;
            for (d, n) in &search.skipped {
                eprintln!("degree {d}: {n} candidates over budget, not searched");
            }
            if json {
                return ok(to_json(&rows)?);
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r).map_err(|e| Error::Usage(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Usage(e.to_string()))?;
            ok(String::from_utf8_lossy(&bytes).trim_end().to_string())
        }
        Command::Verify {
            all,
            suite,
            config,
            seed,
            list,
            json,
            timings,
        } => {
            if list {
                return ok(lab::suite_ids().join("\n"));
            }
            let mut cfg = match &config {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Error::Usage(format!("{}: {e}", path.display())))?;
                    LabConfig::from_json(&text).map_err(|e| match e {
                        Error::Usage(m) => Error::Usage(format!("{}: {m}", path.display())),
                        other => other,
                    })?
                }
                None => LabConfig::default(),
            };
            if all {
                cfg.suites = None;
            } else if !suite.is_empty() {
                cfg.suites = Some(suite);
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let lab = Lab::new(cfg)?;
            let (report, times) = lab.run();
            if timings {
                for (id, d) in &times {
                    eprintln!("{id:34} {:>10.3} s", d.as_secs_f64());
                }
            }
            let out = if json {
                to_json(&report)?
            } else {
                let mut lines: Vec<String> = report
                    .suites
                    .iter()
                    .map(|s| {
                        let verdict = match (s.kind, s.counterexamples) {
                            (lab::SuiteKind::Observation, _) => "observed",
                            (_, 0) => "ok",
                            _ => "FAILED",
                        };
                        format!(
                            "{:34} {:>9} instances {:>6} counterexamples  {verdict}",
                            s.id, s.instances, s.counterexamples
                        )
                    })
                    .collect();
                lines.push(format!(
                    "seed {}: {} instances, {} counterexamples, {}",
                    report.seed,
                    report.total_instances,
                    report.total_counterexamples,
                    if report.passed { "passed" } else { "failed" }
                ));
                lines.join("\n")
            };
            Ok((out, report.passed))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, passed)) => {
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout(), "{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let body = json!({ "error": { "kind": error_kind(&e), "message": e.to_string() } });
            eprintln!("error: {e}");
            eprintln!("{body}");
            ExitCode::from(if matches!(e, Error::Usage(_)) { 2 } else { 1 })
        }
    }
}
