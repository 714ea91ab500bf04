//! Command-line front end.
//!
//! Every subcommand prints one JSON document (the `flow` trajectory defaults
//! to CSV). Exit status is 0 on success, 1 when a computation fails and 2 on
//! usage errors.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cartan::{build_context, GroupKind};
use crate::catalog::{
    bracket_preset, critical_bracket_check, derivation_report, jordan_label, BracketPreset,
    BracketTensor, Partition,
};
use crate::error::Error;
use crate::flows::{gradient_flow, verify_flow_equivalence, FlowParams};
use crate::hesselink::{
    enumerate_labels, kn_label_via_flow_with_tol, optimal_class_for_group, project_to_sl,
    stratum_membership, DEFAULT_WEIGHT_CAP, KN_MATCH_TOL,
};
use crate::io::{matrix_from_rows, matrix_rows, LabelDocument};
use crate::linalg::Matrix;
use crate::moment::{closed_form_moment, criticality_residual, moment};
use crate::rational::{format_rational, parse_rational, RationalVector};
use crate::reps::{Family, RepSpec, RepVector, VectorDocument, WeightVector};

#[derive(Parser, Debug)]
#[command(name = "strata", version, about = "Moment maps, gradient flows and instability strata for GL_n and SL_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimension, coordinate order and weights of a representation.
    RepInfo(Common),
    /// Moment map, energy and criticality residual of a vector.
    Moment(Common),
    /// Gradient-flow trajectory (CSV by default).
    Flow(Common),
    /// Integrates the three equivalent flows and compares them.
    VerifyFlows {
        #[command(flatten)]
        common: Common,
        /// Initial group element as JSON rows; random (from --seed) or identity otherwise.
        #[arg(long)]
        h0: Option<String>,
    },
    /// Exact optimal class of a vector for the diagonal torus.
    Label(Common),
    /// All stratum labels of a representation.
    LabelsEnumerate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_WEIGHT_CAP)]
        cap: usize,
    },
    /// Membership of a vector in the strata pieces of a label.
    Stratum {
        #[command(flatten)]
        common: Common,
        /// Label JSON inline, `@file`, or `-` for standard input.
        #[arg(long)]
        label: String,
    },
    /// Label of the Jordan nilpotent with the given block sizes.
    Jordan {
        #[command(flatten)]
        common: Common,
        /// Also compare with the gradient-flow limit.
        #[arg(long)]
        kn: bool,
    },
    /// Critical-bracket and derivation diagnostics.
    Bracket {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        preset: Option<PresetArg>,
        /// Flow to a critical direction before checking.
        #[arg(long)]
        flow: bool,
        /// Candidate derivation as JSON rows.
        #[arg(long)]
        derivation: Option<String>,
    },
    /// Orthogonal projection of a label onto the trace-zero hyperplane.
    ProjectSl {
        #[command(flatten)]
        common: Common,
        /// JSON array of rationals (`"p/q"` strings or numbers).
        #[arg(long)]
        eta: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PresetArg {
    Heisenberg,
    Chain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// standard, dual, adjoint, lambda2, brackets or torus.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Coordinates as a JSON array (or vector document), inline or `@file`.
    #[arg(long)]
    vector: Option<String>,
    /// Torus weights as a JSON array of integer arrays, inline or `@file`.
    #[arg(long)]
    weights: Option<String>,
    /// gl or sl.
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    partition: Option<String>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    dt0: Option<f64>,
    /// Residual tolerance of the gradient flow.
    #[arg(long)]
    tol: Option<f64>,
    /// Spectrum tolerance of the flow/label comparison.
    #[arg(long)]
    match_tol: Option<f64>,
    #[arg(long)]
    sample_stride: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// File of `key=value` lines; flags given explicitly take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

type Outcome = std::result::Result<String, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read_source(arg: &str, stdin: &mut dyn Read) -> std::result::Result<String, Failure> {
    if arg == "-" {
        let mut s = String::new();
        stdin
            .read_to_string(&mut s)
            .map_err(|e| usage(format!("cannot read standard input: {e}")))?;
        Ok(s)
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn parse_json(text: &str, what: &str) -> std::result::Result<Value, Failure> {
    serde_json::from_str(text).map_err(|e| usage(format!("invalid {what} JSON: {e}")))
}

impl Common {
    fn merge_config(&mut self) -> std::result::Result<(), Failure> {
        let Some(path) = self.config.clone() else {
            return Ok(());
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut entries = BTreeMap::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("config line {} is not key=value", k + 1)))?;
            entries.insert(key.trim().replace('_', "-"), value.trim().to_string());
        }
        fn set<T: std::str::FromStr>(
            slot: &mut Option<T>,
            key: &str,
            value: &str,
        ) -> std::result::Result<(), Failure> {
            if slot.is_none() {
                *slot = Some(
                    value
                        .parse()
                        .map_err(|_| usage(format!("bad config value for {key}: `{value}`")))?,
                );
            }
            Ok(())
        }
        for (key, value) in &entries {
            match key.as_str() {
                "family" => set(&mut self.family, key, value)?,
                "n" => set(&mut self.n, key, value)?,
                "vector" => set(&mut self.vector, key, value)?,
                "weights" => set(&mut self.weights, key, value)?,
                "group" => set(&mut self.group, key, value)?,
                "partition" => set(&mut self.partition, key, value)?,
                "t-max" => set(&mut self.t_max, key, value)?,
                "dt0" => set(&mut self.dt0, key, value)?,
                "tol" | "residual-tol" => set(&mut self.tol, key, value)?,
                "match-tol" => set(&mut self.match_tol, key, value)?,
                "sample-stride" => set(&mut self.sample_stride, key, value)?,
                "seed" => set(&mut self.seed, key, value)?,
                "format" => {
                    if self.format.is_none() {
                        self.format = Some(
                            Format::from_str(value, true)
                                .map_err(|_| usage(format!("bad config value for format: `{value}`")))?,
                        );
                    }
                }
                other => return Err(usage(format!("unknown config key `{other}`"))),
            }
        }
        Ok(())
    }

    fn group(&self) -> std::result::Result<GroupKind, Failure> {
        match &self.group {
            None => Ok(GroupKind::GL),
            Some(g) => g.parse().map_err(|e: Error| usage(e.to_string())),
        }
    }

    fn spec(&self, stdin: &mut dyn Read) -> std::result::Result<RepSpec, Failure> {
        if let Some(w) = &self.weights {
            if let Some(f) = &self.family {
                let family: Family = f.parse().map_err(|e: Error| usage(e.to_string()))?;
                if family != Family::TorusWeights {
                    return Err(usage("--weights only applies to the torus family"));
                }
            }
            let value = parse_json(&read_source(w, stdin)?, "weights")?;
            let rows: Vec<Vec<i64>> = serde_json::from_value(value)
                .map_err(|e| usage(format!("weights must be integer arrays: {e}")))?;
            return Ok(RepSpec::torus(rows.into_iter().map(WeightVector).collect())?);
        }
        let family: Family = self
            .family
            .as_deref()
            .ok_or_else(|| usage("--family is required"))?
            .parse()
            .map_err(|e: Error| usage(e.to_string()))?;
        if family == Family::TorusWeights {
            return Err(usage("the torus family needs --weights"));
        }
        let n = self.n.ok_or_else(|| usage("--n is required"))?;
        Ok(RepSpec::new(family, n)?)
    }

    /// The vector, and its representation (which a vector document may supply).
    fn vector(&self, stdin: &mut dyn Read) -> std::result::Result<RepVector, Failure> {
        let raw = self.vector.as_deref().ok_or_else(|| usage("--vector is required"))?;
        let value = parse_json(&read_source(raw, stdin)?, "vector")?;
        if value.is_object() {
            let doc: VectorDocument = serde_json::from_value(value)
                .map_err(|e| usage(format!("invalid vector document: {e}")))?;
            return Ok(doc.to_vector()?);
        }
        let coords: Vec<f64> = serde_json::from_value(value)
            .map_err(|e| usage(format!("vector must be an array of numbers: {e}")))?;
        let spec = self.spec(stdin)?;
        if coords.len() != spec.dim() {
            return Err(usage(format!(
                "{spec} has dimension {} but the vector has {} coordinates",
                spec.dim(),
                coords.len()
            )));
        }
        Ok(RepVector::from_slice(spec, &coords)?)
    }

    fn flow_params(&self) -> FlowParams {
        let d = FlowParams::default();
        FlowParams {
            dt0: self.dt0.unwrap_or(d.dt0),
            t_max: self.t_max.unwrap_or(d.t_max),
            residual_tol: self.tol.unwrap_or(d.residual_tol),
            sample_stride: self.sample_stride.unwrap_or(d.sample_stride),
            ..d
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn rationals(v: &RationalVector) -> Vec<String> {
    v.to_strings()
}

fn rep_info(c: &Common, stdin: &mut dyn Read) -> Outcome {
    let spec = c.spec(stdin)?;
    let weights: Vec<Vec<i64>> = spec.weights().into_iter().map(|w| w.0).collect();
    Ok(to_json(&json!({
        "family": spec.family().to_string(),
        "n": spec.n(),
        "dim": spec.dim(),
        "coordinates": spec.coordinate_labels(),
        "weights": weights,
        "inner_product": if spec.family() == Family::Brackets {
            "2 * sum of squares (ordered pairs)"
        } else {
            "sum of squares"
        },
    })))
}

fn moment_cmd(c: &Common, stdin: &mut dyn Read) -> Outcome {
    let v = c.vector(stdin)?;
    let ctx = build_context(v.spec().n(), c.group()?)?;
    let m = moment(&ctx, v.spec(), &v)?;
    let residual = criticality_residual(&ctx, v.spec(), &v)?;
    let closed = if ctx.group() == GroupKind::GL && v.spec().family() != Family::TorusWeights {
        Some(matrix_rows(&closed_form_moment(v.spec(), &v)?.matrix))
    } else {
        None
    };
    Ok(to_json(&json!({
        "family": v.spec().family().to_string(),
        "n": v.spec().n(),
        "group": ctx.group().to_string(),
        "moment": m,
        "criticality_residual": residual,
        "closed_form": closed,
    })))
}

fn flow_cmd(c: &Common, stdin: &mut dyn Read) -> Outcome {
    let v = c.vector(stdin)?;
    let ctx = build_context(v.spec().n(), c.group()?)?;
    let r = gradient_flow(&ctx, v.spec(), &v, &c.flow_params())?;
    match c.format.unwrap_or(Format::Csv) {
        Format::Csv => Ok(r.to_csv(&v.spec().coordinate_labels())),
        Format::Json => Ok(to_json(&r)),
    }
}

fn random_h0(n: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::identity(n, n) + Matrix::from_fn(n, n, |_, _| rng.gen_range(-0.3..0.3))
}

fn parse_matrix(raw: &str, stdin: &mut dyn Read, what: &str) -> std::result::Result<Matrix, Failure> {
    let rows: Vec<Vec<f64>> = serde_json::from_value(parse_json(&read_source(raw, stdin)?, what)?)
        .map_err(|e| usage(format!("{what} must be an array of rows: {e}")))?;
    matrix_from_rows(&rows).map_err(|e| usage(e.to_string()))
}

fn verify_flows(c: &Common, h0: Option<&str>, stdin: &mut dyn Read) -> Outcome {
    let v = c.vector(stdin)?;
    let n = v.spec().n();
    let ctx = build_context(n, c.group()?)?;
    let h0 = match (h0, c.seed) {
        (Some(raw), _) => parse_matrix(raw, stdin, "h0")?,
        (None, Some(seed)) => random_h0(n, seed),
        (None, None) => Matrix::identity(n, n),
    };
    if h0.nrows() != n || h0.ncols() != n {
        return Err(usage(format!("h0 must be {n}x{n}")));
    }
    let horizon = c.t_max.unwrap_or(5.0);
    let report = verify_flow_equivalence(&ctx, v.spec(), &v, &h0, horizon, &c.flow_params())?;
    Ok(to_json(&json!({
        "h0": matrix_rows(&h0),
        "horizon": horizon,
        "report": report,
    })))
}

fn label_cmd(c: &Common, stdin: &mut dyn Read) -> Outcome {
    let v = c.vector(stdin)?;
    let class = optimal_class_for_group(c.group()?, v.spec(), &v)?;
    Ok(to_json(&LabelDocument::from_class(&class, v.spec().n())))
}

fn labels_enumerate(c: &Common, cap: usize, stdin: &mut dyn Read) -> Outcome {
    let spec = c.spec(stdin)?;
    let e = enumerate_labels(&spec, cap)?;
    let labels: Vec<LabelDocument> = e.labels.iter().map(LabelDocument::from_label).collect();
    Ok(to_json(&json!({
        "family": spec.family().to_string(),
        "n": spec.n(),
        "includes_zero": e.includes_zero,
        "labels": labels,
    })))
}

fn stratum_cmd(c: &Common, label: &str, stdin: &mut dyn Read) -> Outcome {
    let text = read_source(label, stdin)?;
    let doc: LabelDocument = serde_json::from_str(&text)
        .map_err(|e| usage(format!("invalid label JSON: {e}")))?;
    let label = doc.to_label()?;
    let v = c.vector(stdin)?;
    let r = stratum_membership(v.spec(), &v, &label)?;
    let grading: Vec<Value> = r
        .grading
        .iter()
        .map(|(w, q)| json!({"weight": w.0, "r": format_rational(q)}))
        .collect();
    Ok(to_json(&json!({
        "beta": matrix_rows(&r.beta),
        "q": format_rational(&r.q),
        "grading": grading,
        "in_V_ge0": r.in_v_ge0,
        "v0": r.v0.coords().iter().copied().collect::<Vec<f64>>(),
        "in_U_ge0": r.in_u_ge0,
        "optimal_class_matches": r.optimal_class_matches,
    })))
}

fn jordan_cmd(c: &Common, kn: bool) -> Outcome {
    let p: Partition = c
        .partition
        .as_deref()
        .ok_or_else(|| usage("--partition is required"))?
        .parse()
        .map_err(|e: Error| usage(e.to_string()))?;
    let r = jordan_label(&p)?;
    let mut out = json!({
        "partition": p.to_string(),
        "eta": rationals(&r.label.eta),
        "q": format_rational(&r.label.q),
        "eta_normalized": rationals(&r.label.eta_normalized),
        "beta_paper": rationals(&r.beta_paper),
        "q_paper": format_rational(&r.q_paper),
        "q_formula": format_rational(&r.q_formula),
        "display_ok": r.display_ok,
        "identity_ok": r.identity_ok,
        "max_ad_eigenvalue": format_rational(&r.max_ad_eigenvalue),
        "negdef_ok": r.negdef_ok,
        "displayed_bound_ok": r.displayed_bound_ok,
    });
    if kn {
        let x = crate::catalog::jordan_vector(&p)?;
        let ctx = build_context(p.n(), GroupKind::GL)?;
        let cmp = kn_label_via_flow_with_tol(
            &ctx,
            x.spec(),
            &x,
            &c.flow_params(),
            c.match_tol.unwrap_or(KN_MATCH_TOL),
        )?;
        out["kn"] = serde_json::to_value(&cmp).expect("serializable");
    }
    Ok(to_json(&out))
}

fn bracket_cmd(
    c: &Common,
    preset: Option<PresetArg>,
    flow: bool,
    derivation: Option<&str>,
    stdin: &mut dyn Read,
) -> Outcome {
    let mu = match preset {
        Some(p) => {
            let n = c.n.ok_or_else(|| usage("--n is required with --preset"))?;
            let p = match p {
                PresetArg::Heisenberg => BracketPreset::Heisenberg,
                PresetArg::Chain => BracketPreset::Chain,
            };
            bracket_preset(p, n)?
        }
        None => {
            let v = c.vector(stdin)?;
            BracketTensor::from_rep_vector(&v)?
        }
    };
    let n = mu.n();
    let mut out = json!({
        "n": n,
        "coords": mu.coords(),
        "jacobi_residual": mu.jacobi_residual(),
        "jacobi_ok": mu.jacobi_ok(),
    });
    if let Some(raw) = derivation {
        let d = parse_matrix(raw, stdin, "derivation")?;
        out["derivation"] = serde_json::to_value(derivation_report(&mu, &d)?).expect("serializable");
        return Ok(to_json(&out));
    }
    let ctx = build_context(n, c.group()?)?;
    let target = if flow {
        let v = mu.to_rep_vector()?;
        let r = gradient_flow(&ctx, v.spec(), &v, &c.flow_params())?;
        out["flow"] = json!({
            "converged": r.converged,
            "t": r.final_time(),
            "residual": r.final_residual(),
            "diagnostic": r.diagnostic,
        });
        let limit = BracketTensor::from_rep_vector(&r.limit)?;
        out["limit_coords"] = json!(limit.coords());
        limit
    } else {
        mu
    };
    out["critical"] = serde_json::to_value(critical_bracket_check(&ctx, &target)?).expect("serializable");
    Ok(to_json(&out))
}

fn project_sl_cmd(eta: &str, stdin: &mut dyn Read) -> Outcome {
    let value = parse_json(&read_source(eta, stdin)?, "eta")?;
    let items = value
        .as_array()
        .ok_or_else(|| usage("eta must be a JSON array"))?;
    let coords = items
        .iter()
        .map(|x| match x {
            Value::String(s) => parse_rational(s),
            Value::Number(num) => parse_rational(&num.to_string()),
            _ => Err(Error::Parse(format!("not a rational: {x}"))),
        })
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| usage(e.to_string()))?;
    let eta = RationalVector(coords);
    let projected = project_to_sl(&eta);
    Ok(to_json(&json!({
        "eta": rationals(&eta),
        "projected": rationals(&projected),
        "sum": format_rational(&projected.sum()),
    })))
}

fn dispatch(command: Command, stdin: &mut dyn Read) -> Outcome {
    match command {
        Command::RepInfo(mut c) => {
            c.merge_config()?;
            rep_info(&c, stdin)
        }
        Command::Moment(mut c) => {
            c.merge_config()?;
            moment_cmd(&c, stdin)
        }
        Command::Flow(mut c) => {
            c.merge_config()?;
            flow_cmd(&c, stdin)
        }
        Command::VerifyFlows { mut common, h0 } => {
            common.merge_config()?;
            verify_flows(&common, h0.as_deref(), stdin)
        }
        Command::Label(mut c) => {
            c.merge_config()?;
            label_cmd(&c, stdin)
        }
        Command::LabelsEnumerate { mut common, cap } => {
            common.merge_config()?;
            labels_enumerate(&common, cap, stdin)
        }
        Command::Stratum { mut common, label } => {
            common.merge_config()?;
            stratum_cmd(&common, &label, stdin)
        }
        Command::Jordan { mut common, kn } => {
            common.merge_config()?;
            jordan_cmd(&common, kn)
        }
        Command::Bracket {
            mut common,
            preset,
            flow,
            derivation,
        } => {
            common.merge_config()?;
            bracket_cmd(&common, preset, flow, derivation.as_deref(), stdin)
        }
        Command::ProjectSl { mut common, eta } => {
            common.merge_config()?;
            project_sl_cmd(&eta, stdin)
        }
    }
}

/// Runs the CLI on explicit streams and returns the exit status.
pub fn run_with_io(
    argv: &[String],
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, stdin) {
        Ok(text) => {
            let _ = stdout.write_all(text.as_bytes());
            0
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}\n\nFor more information, try '--help'.");
            2
        }
        Err(Failure::Compute(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

/// Runs the CLI on the process streams.
pub fn run(argv: &[String]) -> i32 {
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_io(argv, &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}
