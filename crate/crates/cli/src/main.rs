use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use banachlab::gallery::run_gallery;
use banachlab::ideals::{cohen_factorize, hsa_factorize, support_idempotent};
use banachlab::io::{parse_coeffs, resolve_algebra};
use banachlab::linalg::C64;
use banachlab::mideals::{
    cssw_lift, default_alpha, quotient_numrange, real_positive_lift, segment_lift, LiftMode, MIdealIdeal,
};
use banachlab::plot::{emit_overlay, emit_plot, Layer};
use banachlab::roots::{power_balakrishnan, power_series, principal_power};
use banachlab::sample::{self, SEED};
use banachlab::states::{numerical_range, numrange_outer, WilliamsGrid};
use banachlab::{Algebra, Element, Error};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const EXIT_CLAIM: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_COMPUTE: u8 = 1;

/// Real-positivity calculus in finite-dimensional Banach algebras.
///
/// ALGEBRA is a JSON algebra file, a catalog name (group:N, semigroup4,
/// lower-triangular, pointwise:N, truncated:K, scalars, dual, m2) or an l∞
/// sum such as group:2+scalars. COEFFS is a comma-separated list of complex
/// coefficients in the algebra basis, e.g. `0.5,0.5` or `1,-0.25i`.
#[derive(Parser)]
#[command(name = "banachlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the regression gallery; exits 2 if any claim fails.
    Gallery {
        /// Only cases whose id contains this string.
        #[arg(long)]
        filter: Option<String>,
        /// Write the full report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Outer and inner estimates of the numerical range W(x).
    Numrange {
        algebra: String,
        #[arg(allow_hyphen_values = true)]
        coeffs: String,
        /// Write (θ, h(θ)) support samples here instead of stdout.
        #[arg(long)]
        support_csv: Option<PathBuf>,
        #[arg(long)]
        inner_csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value_t = 400)]
        samples: usize,
        /// Multiply the λ-grid density by 2^refine.
        #[arg(long, default_value_t = 0)]
        refine: u32,
    },
    /// Principal power x^t.
    Root {
        algebra: String,
        #[arg(allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Support idempotent s(x) of an accretive element.
    Support {
        algebra: String,
        #[arg(allow_hyphen_values = true)]
        coeffs: String,
    },
    /// Greedy Cohen factorization x_i = z w_i against a pool of elements of 𝔉_A.
    Factorize {
        algebra: String,
        /// Target coefficient lists separated by `;`.
        #[arg(long)]
        targets: String,
        /// Pool coefficient lists separated by `;`.
        #[arg(long)]
        pool: String,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Two-sided factorization x_i = z w_i z.
        #[arg(long)]
        hereditary: bool,
    },
    /// Lift an element of A/J to A preserving norm and numerical range.
    Lift {
        algebra: String,
        #[arg(allow_hyphen_values = true)]
        coeffs: String,
        /// `left` or `right` summand of a two-term l∞ sum, `mask:1,1,0`, or `central:COEFFS`.
        #[arg(long)]
        ideal: String,
        /// Interior point of W(Q(x)), as `re,im`; defaults to the centroid.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// `auto` uses the closed form, or the segment lift when W(Q(x)) has empty interior.
        #[arg(long, value_enum, default_value_t = LiftKind::Auto)]
        mode: LiftKind,
        /// Steps for `--mode iterate`.
        #[arg(long, default_value_t = 60)]
        steps: usize,
        /// Overlay of W(Q(x)) and W(v).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    Series,
    Quad,
}

#[derive(Clone, Copy, ValueEnum)]
enum LiftKind {
    Auto,
    Closed,
    Iterate,
    Segment,
    RealPositive,
}

enum Failure {
    Input(String),
    Compute(Error),
    Claims(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_)
            | Error::Io(_)
            | Error::InconsistentDimensions(_)
            | Error::NotAssociative { .. }
            | Error::NotSubmultiplicative { .. }
            | Error::NotHomomorphism { .. }
            | Error::NotIdentity(_)
            | Error::IdentityNorm(_) => Failure::Input(e.to_string()),
            other => Failure::Compute(other),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

/// `print!` that ends the process quietly once stdout is closed, as under `| head`.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if let Err(e) = write!(std::io::stdout().lock(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            panic!("writing to stdout: {e}");
        }
    }};
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_COMPUTE)
        }
        Err(Failure::Claims(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_CLAIM)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Gallery { filter, json } => gallery(filter.as_deref(), json.as_deref()),
        Command::Numrange { algebra, coeffs, support_csv, inner_csv, svg, samples, refine } => {
            let x = element(&algebra, &coeffs)?;
            let mut grid = WilliamsGrid::default();
            for _ in 0..refine {
                grid = grid.refined();
            }
            let mut rng = sample::rng(SEED);
            let est = numerical_range(&x, grid, samples, &mut rng)?;
            let mut support = String::from("theta,h\n");
            for (t, h) in est.angles.iter().zip(&est.outer) {
                let _ = writeln!(support, "{t:.12},{h:.12}");
            }
            match support_csv {
                Some(path) => write(&path, &support)?,
                None => out!("{support}"),
            }
            if let Some(path) = inner_csv {
                let mut inner = String::from("re,im\n");
                for z in &est.inner {
                    let _ = writeln!(inner, "{:.12},{:.12}", z.re, z.im);
                }
                write(&path, &inner)?;
            }
            if let Some(path) = svg {
                emit_plot(&est, "W(x)", &path)?;
            }
            if let Some(gap) = est.hausdorff_gap {
                eprintln!("min Re {:.9}, outer/inner support gap {gap:.3e}", est.min_re());
            }
            Ok(())
        }
        Command::Root { algebra, coeffs, t, method, tol } => {
            let x = element(&algebra, &coeffs)?;
            let r = match method {
                Method::Auto => principal_power(&x, t, tol)?,
                Method::Series => power_series(&x, t, tol)?,
                Method::Quad => power_balakrishnan(&x, t, tol)?,
            };
            print_json(&json!({
                "t": t,
                "coeffs": coeff_json(&r.value),
                "method": format!("{:?}", r.method).to_lowercase(),
                "est_error": r.est_error,
                "terms_or_nodes": r.terms_or_nodes,
            }));
            Ok(())
        }
        Command::Support { algebra, coeffs } => {
            let x = element(&algebra, &coeffs)?;
            let s = support_idempotent(&x)?;
            print_json(&json!({
                "s": coeff_json(&s.s),
                "limit": coeff_json(&s.limit),
                "route_gap": s.route_gap,
                "defects": s.defects,
            }));
            Ok(())
        }
        Command::Factorize { algebra, targets, pool, eps, hereditary } => {
            let alg = resolve_algebra(&algebra)?;
            let targets = element_list(&alg, &targets)?;
            let pool = element_list(&alg, &pool)?;
            let f =
                if hereditary { hsa_factorize(&targets, &pool, eps) } else { cohen_factorize(&targets, &pool, eps) };
            match f {
                Ok(f) => {
                    print_json(&json!({
                        "z": coeff_json(&f.z),
                        "factors": f.factors.iter().map(coeff_json).collect::<Vec<_>>(),
                        "residuals": f.residuals,
                        "trace": f.trace,
                    }));
                    Ok(())
                }
                Err(Error::PoolExhausted { step, defect, bound }) => {
                    print_json(&json!({ "pool_exhausted": { "step": step, "defect": defect, "bound": bound } }));
                    Err(Failure::Compute(Error::PoolExhausted { step, defect, bound }))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Lift { algebra, coeffs, ideal, alpha, mode, steps, svg } => {
            let x = element(&algebra, &coeffs)?;
            let j = parse_ideal(x.algebra(), &ideal)?;
            let mode = match mode {
                LiftKind::Auto if alpha.is_none() => {
                    match default_alpha(&x, &j).and_then(|a| cssw_lift(&x, &j, a, LiftMode::ClosedForm)) {
                        Err(Error::EmptyInterior(_)) => LiftKind::Segment,
                        _ => LiftKind::Closed,
                    }
                }
                LiftKind::Auto => LiftKind::Closed,
                m => m,
            };
            let (v, extra) = match mode {
                LiftKind::Closed | LiftKind::Iterate | LiftKind::Auto => {
                    let alpha = match alpha {
                        Some(a) => parse_point(&a)?,
                        None => default_alpha(&x, &j)?,
                    };
                    let lift_mode = if matches!(mode, LiftKind::Closed) {
                        LiftMode::ClosedForm
                    } else {
                        LiftMode::PaperIteration { steps }
                    };
                    let l = cssw_lift(&x, &j, alpha, lift_mode)?;
                    let extra = json!({
                        "alpha": [l.alpha.re, l.alpha.im],
                        "containment_excess": l.containment_excess,
                        "closed_form_gap": l.closed_form_gap,
                        "steps": l.steps,
                    });
                    (l.v, extra)
                }
                LiftKind::Segment => {
                    let l = segment_lift(&x, &j)?;
                    let triangle = l.triangle.map(|t| t.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>());
                    (l.a, json!({ "triangle": triangle, "eps_tri": l.eps_tri, "halvings": l.halvings }))
                }
                LiftKind::RealPositive => (real_positive_lift(&x, &j)?, json!({})),
            };
            let mut out = json!({
                "coeffs": coeff_json(&v),
                "norm": v.norm(),
                "quotient_norm": j.qnorm(&x),
                "quotient_gap": j.complement(&(&v - &x)).norm(),
            });
            if let (Value::Object(o), Value::Object(e)) = (&mut out, extra) {
                o.extend(e);
            }
            print_json(&out);
            if let Some(path) = svg {
                let body = quotient_numrange(&x, &j, WilliamsGrid::default())?;
                let lifted = numrange_outer(&v, WilliamsGrid::default())?;
                emit_overlay(&[Layer::from_estimate("W(Q(x))", &body), Layer::from_estimate("W(v)", &lifted)], &path)?;
            }
            Ok(())
        }
    }
}

fn gallery(filter: Option<&str>, json: Option<&Path>) -> Outcome {
    let report = run_gallery(filter)?;
    for case in &report.cases {
        for claim in &case.claims {
            let status = if claim.passed { "PASS" } else { "FAIL" };
            out!("{status} {:<20} {} (margin {:.3e})\n", case.id, claim.description, claim.margin());
            if let Some(e) = &claim.error {
                out!("     error: {e}\n");
            }
            if !claim.passed {
                if let Some(note) = &claim.note {
                    out!("     note: {note}\n");
                }
            }
        }
        for u in &case.untestable {
            out!("SKIP {:<20} untestable: {u}\n", case.id);
        }
    }
    if let Some(path) = json {
        write(path, &report.to_json())?;
    }
    match report.ensure_passed() {
        Ok(()) => Ok(()),
        Err(e) => Err(Failure::Claims(e.to_string())),
    }
}

fn element(algebra: &str, coeffs: &str) -> Result<Element, Failure> {
    let alg = resolve_algebra(algebra)?;
    Ok(Element::from_slice(&alg, &parse_coeffs(coeffs)?)?)
}

fn element_list(alg: &Arc<Algebra>, list: &str) -> Result<Vec<Element>, Failure> {
    list.split(';').filter(|s| !s.trim().is_empty()).map(|s| Ok(Element::from_slice(alg, &parse_coeffs(s)?)?)).collect()
}

fn parse_point(s: &str) -> Result<C64, Failure> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Input(format!("cannot parse `{s}` as re,im")))?;
    match parts.as_slice() {
        [re] => Ok(C64::new(*re, 0.0)),
        [re, im] => Ok(C64::new(*re, *im)),
        _ => Err(Failure::Input(format!("expected re,im, got `{s}`"))),
    }
}

fn parse_ideal(alg: &Arc<Algebra>, spec: &str) -> Result<MIdealIdeal, Failure> {
    if let Some(mask) = spec.strip_prefix("mask:") {
        let mask = mask
            .split(',')
            .map(|m| match m.trim() {
                "1" => Ok(true),
                "0" => Ok(false),
                other => Err(Failure::Input(format!("mask entries are 0 or 1, got `{other}`"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(MIdealIdeal::coordinate(alg, &mask)?);
    }
    if let Some(coeffs) = spec.strip_prefix("central:") {
        let z = Element::from_slice(alg, &parse_coeffs(coeffs)?)?;
        return Ok(MIdealIdeal::from_central_idempotent(&z)?);
    }
    let (left, right) = match alg.norm_kind() {
        banachlab::NormKind::LinfSum { left, right } => (left.dim(), right.dim()),
        _ => return Err(Failure::Input(format!("`{spec}` needs an l∞ sum algebra; use mask: or central:"))),
    };
    let mask: Vec<bool> = match spec {
        "left" => (0..left + right).map(|i| i < left).collect(),
        "right" => (0..left + right).map(|i| i >= left).collect(),
        _ => return Err(Failure::Input(format!("unknown ideal descriptor `{spec}`"))),
    };
    Ok(MIdealIdeal::coordinate(alg, &mask)?)
}

fn coeff_json(x: &Element) -> Value {
    json!(x.coeffs().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
}

fn print_json(v: &Value) {
    out!("{}\n", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn write(path: &Path, contents: &str) -> Outcome {
    std::fs::write(path, contents).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}
