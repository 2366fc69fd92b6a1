use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use maassforge::classforms::{build_class_group, ideal_to_class, ClassGroup};
use maassforge::heckechar::{check_gauss_relation, make_class_character, DirichletCharacter, HeckeCharacter, InfinityType};
use maassforge::lseries::{hecke_l_coeffs, l1_terms_needed, l_value_at_1};
use maassforge::maassform::{build_theta, check_automorphy};
use maassforge::petersson::{petersson_norm, PeterssonReport, REFERENCE_401_PRODUCT};
use maassforge::quadfield::QuadField;
use maassforge::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

const REL_TOL: f64 = 1e-6;
const AUTOMORPHY_TOL: f64 = 1e-8;
const LVALUE_TOL: f64 = 1e-9;
const GAUSS_TOL: f64 = 1e-9;
const SEED: u64 = 229_445_401;

#[derive(Parser)]
#[command(name = "maassforge", version, about = "Theta lifts of class group characters of real quadratic fields")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for coefficient builds (default: MAASSFORGE_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(clap::Args, Clone, Copy)]
struct CharArgs {
    #[arg(long)]
    disc: i64,
    #[arg(long, default_value_t = 1)]
    char_index: usize,
    /// Sign exponent of the infinity type.
    #[arg(long, default_value_t = 0)]
    epsilon: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Class numbers and fundamental unit.
    Field {
        #[arg(long)]
        disc: i64,
    },
    /// Integral ideals up to a norm, with their narrow classes.
    Ideals {
        #[arg(long)]
        disc: i64,
        #[arg(long, default_value_t = 50)]
        max_norm: u64,
    },
    /// Fourier coefficients a'(n) of the theta lift.
    Coeffs {
        #[command(flatten)]
        ch: CharArgs,
        #[arg(long, default_value_t = 100_000)]
        n_max: u64,
    },
    /// Theta(x + iy) with its tail bound.
    ThetaEval {
        #[command(flatten)]
        ch: CharArgs,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        #[arg(long, default_value_t = 100_000)]
        n_max: u64,
    },
    /// Theta(gamma z) against chi_D(d) Theta(z) for gamma with bottom row (c, d).
    CheckAutomorphy {
        #[command(flatten)]
        ch: CharArgs,
        #[arg(long)]
        c: i64,
        #[arg(long)]
        d: i64,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        /// Defaults to the smallest size that reaches every sample point.
        #[arg(long)]
        n_max: Option<u64>,
    },
    /// L(s, psi (psi-bar o sigma)) at two smoothing cutoffs.
    Lvalue {
        #[command(flatten)]
        ch: CharArgs,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
    },
    /// Petersson norm of the theta lift.
    Petersson {
        #[command(flatten)]
        ch: CharArgs,
    },
    /// Gauss sum of sigma o N against sigma(D) chi_D(p) tau(sigma)^2 for inert p.
    GaussCheck {
        #[arg(long)]
        disc: i64,
        #[arg(long)]
        p: u64,
        /// sigma sends the least primitive root mod p to exp(2 pi i j/(p - 1)).
        #[arg(long, default_value_t = 1)]
        j: u64,
    },
    /// Recompute one of the published norms.
    Reproduce {
        #[arg(long, value_parser = ["229", "445", "401"])]
        example: String,
    },
}

enum Failure {
    Tolerance(String),
    Input(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceCap { .. } | Error::NotEvaluable { .. } => Failure::Resource(e.to_string()),
            Error::Internal(_) => Failure::Tolerance(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// A finished command: JSON body, optional CSV rows, and whether its tolerances held.
struct Report {
    command: &'static str,
    result: Value,
    rows: Option<(Vec<&'static str>, Vec<Vec<Value>>)>,
    failed: Option<String>,
}

impl Report {
    fn new(command: &'static str, result: impl Serialize) -> Self {
        Report {
            command,
            result: serde_json::to_value(result).expect("report serializes"),
            rows: None,
            failed: None,
        }
    }

    fn check(mut self, ok: bool, what: impl FnOnce() -> String) -> Self {
        if !ok && self.failed.is_none() {
            self.failed = Some(what());
        }
        self
    }
}

/// Rounds to 15 significant digits.
fn sig15(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.14e}").parse().unwrap()
}

fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => json!(sig15(n.as_f64().unwrap())),
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        v => v,
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        v => v.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(o) => {
            for (k, v) in o {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, v) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, out);
            }
        }
        v => out.push((prefix.to_string(), scalar(v))),
    }
}

fn render(report: &Report, format: Format) -> String {
    let result = round_floats(report.result.clone());
    match format {
        Format::Json => {
            let body = json!({ "command": report.command, "result": result });
            serde_json::to_string_pretty(&body).unwrap() + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(vec![]);
            match &report.rows {
                Some((header, rows)) => {
                    w.write_record(header).unwrap();
                    for r in rows {
                        w.write_record(r.iter().map(|v| scalar(&round_floats(v.clone())))).unwrap();
                    }
                }
                None => {
                    w.write_record(["key", "value"]).unwrap();
                    let mut kv = vec![];
                    flatten("", &result, &mut kv);
                    for (k, v) in kv {
                        w.write_record([k, v]).unwrap();
                    }
                }
            }
            String::from_utf8(w.into_inner().unwrap()).unwrap()
        }
        Format::Table => {
            let mut kv = vec![];
            match &report.rows {
                Some((header, rows)) => {
                    let mut out = header.join("\t") + "\n";
                    for r in rows {
                        let cells: Vec<String> = r.iter().map(|v| scalar(&round_floats(v.clone()))).collect();
                        out += &(cells.join("\t") + "\n");
                    }
                    return out;
                }
                None => flatten("", &result, &mut kv),
            }
            let width = kv.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            let mut out = String::new();
            for (k, v) in kv {
                out += &format!("{k:<width$}  {v}\n");
            }
            if let Some(why) = &report.failed {
                out += &format!("FAILED: {why}\n");
            }
            out
        }
    }
}

fn class_group(disc: i64) -> Result<Arc<ClassGroup>, Failure> {
    let field = QuadField::new(disc)?;
    Ok(Arc::new(build_class_group(&field)?))
}

fn character(ch: CharArgs) -> Result<HeckeCharacter, Failure> {
    let cg = class_group(ch.disc)?;
    let inf = InfinityType::new(ch.epsilon, Complex64::new(0.0, 0.0))?;
    Ok(make_class_character(&cg, ch.char_index, inf)?)
}

fn cmd_field(disc: i64) -> Result<Report, Failure> {
    let cg = class_group(disc)?;
    let unit = cg.unit();
    Ok(Report::new(
        "field",
        json!({
            "disc": disc,
            "h_wide": cg.h_wide(),
            "h_narrow": cg.h_narrow(),
            "unit": { "x": unit.x.to_string(), "y": unit.y.to_string(), "norm": unit.norm },
            "regulator": unit.regulator,
        }),
    ))
}

fn cmd_ideals(disc: i64, max_norm: u64) -> Result<Report, Failure> {
    let cg = class_group(disc)?;
    let table = cg.field().enumerate_ideals(max_norm)?;
    let mut rows = vec![];
    for id in table.all() {
        let class = ideal_to_class(&cg, id)?;
        rows.push(json!({ "norm": id.norm(), "k": id.k, "a": id.a, "b": id.b, "class": class }));
    }
    let csv_rows = rows
        .iter()
        .map(|r| ["norm", "k", "a", "b", "class"].iter().map(|k| r[*k].clone()).collect())
        .collect();
    let mut report = Report::new("ideals", json!({ "disc": disc, "max_norm": max_norm, "ideals": rows }));
    report.rows = Some((vec!["norm", "k", "a", "b", "class"], csv_rows));
    Ok(report)
}

fn cmd_coeffs(ch: CharArgs, n_max: u64) -> Result<Report, Failure> {
    let form = build_theta(&character(ch)?, n_max)?;
    let rows = form.coefficient_rows();
    let csv_rows = rows.iter().map(|r| vec![json!(r.n), json!(r.re), json!(r.im)]).collect();
    let mut report = Report::new("coeffs", form.to_json());
    report.rows = Some((vec!["n", "re", "im"], csv_rows));
    Ok(report)
}

fn cmd_theta_eval(ch: CharArgs, x: f64, y: f64, n_max: u64) -> Result<Report, Failure> {
    let form = build_theta(&character(ch)?, n_max)?;
    let v = form.eval(x, y)?;
    Ok(Report::new("theta-eval", json!({ "x": x, "y": y, "value": v })))
}

/// Sample points near `-d/c` with `Im z` in `[0.30, 0.34]`, where `Im gamma z` is largest.
fn automorphy_points(c: i64, d: i64, samples: usize) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ (c as u64).rotate_left(17) ^ d as u64);
    let x0 = if c == 0 { 0.0 } else { -(d as f64) / c as f64 };
    (0..samples)
        .map(|_| (x0 + rng.gen_range(-0.05..0.05), rng.gen_range(0.30..0.34)))
        .collect()
}

fn cmd_check_automorphy(ch: CharArgs, c: i64, d: i64, samples: usize, n_max: Option<u64>) -> Result<Report, Failure> {
    let psi = character(ch)?;
    let (g, u, v) = ext_gcd(d, c);
    if g != 1 {
        return Err(Failure::Input(format!("gcd(c, d) = {g}, need 1")));
    }
    let gamma = [[u, -v], [c, d]];
    let points = automorphy_points(c, d, samples);
    let n_max = n_max.unwrap_or_else(|| {
        let min_y = points
            .iter()
            .map(|&(x, y)| {
                let (cx, cy) = (c as f64 * x + d as f64, c as f64 * y);
                y.min(y / (cx * cx + cy * cy))
            })
            .fold(f64::INFINITY, f64::min);
        (45.0 / (2.0 * std::f64::consts::PI * min_y)).ceil() as u64 + 1
    });
    let form = build_theta(&psi, n_max)?;
    let r = check_automorphy(&form, gamma, &points)?;
    let max = r.max_residual;
    Ok(Report::new("check-automorphy", json!({ "n_max": n_max, "points": points, "report": r, "tolerance": AUTOMORPHY_TOL }))
        .check(max < AUTOMORPHY_TOL, || format!("max residual {max:e} >= {AUTOMORPHY_TOL:e}")))
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (g, x, y) = maassforge::arith::ext_gcd(a as i128, b as i128);
    (g as i64, x as i64, y as i64)
}

fn cmd_lvalue(ch: CharArgs, s: f64) -> Result<Report, Failure> {
    let psi = character(ch)?;
    let report = if s == 1.0 {
        l_value_at_1(&psi)?
    } else {
        if maassforge::heckechar::is_norm_induced(&psi) {
            return Err(Error::NormInduced.into());
        }
        hecke_l_coeffs(&psi.twisted_square(), l1_terms_needed(&psi))?.value_report(s)?
    };
    let disc = report.discrepancy;
    Ok(Report::new("lvalue", &report).check(disc < LVALUE_TOL, || format!("cutoff discrepancy {disc:e}")))
}

fn petersson_report(r: PeterssonReport, command: &'static str) -> Report {
    let rel = r.rel_err;
    Report::new(command, &r).check(rel.is_none_or(|e| e < REL_TOL), || {
        format!("relative error {:e} >= {REL_TOL:e}", rel.unwrap())
    })
}

fn cmd_petersson(ch: CharArgs) -> Result<Report, Failure> {
    Ok(petersson_report(petersson_norm(&character(ch)?)?, "petersson"))
}

fn cmd_gauss_check(disc: i64, p: u64, j: u64) -> Result<Report, Failure> {
    let field = QuadField::new(disc)?;
    let sigma = DirichletCharacter::from_prime(p, j)?;
    let r = check_gauss_relation(&field, p, &sigma)?;
    let res = r.residual;
    Ok(Report::new("gauss-check", r).check(res < GAUSS_TOL, || format!("residual {res:e}")))
}

fn of_order(disc: i64, order: u32) -> Result<HeckeCharacter, Failure> {
    let cg = class_group(disc)?;
    for i in 0..cg.h_narrow() {
        let psi = make_class_character(&cg, i, InfinityType::unramified())?;
        if psi.order() == order {
            return Ok(psi);
        }
    }
    Err(Failure::Input(format!("no class character of order {order} for {disc}")))
}

fn cmd_reproduce(example: &str) -> Result<Report, Failure> {
    let report = match example {
        "229" => petersson_norm(&of_order(229, 3)?)?,
        "445" => petersson_norm(&of_order(445, 4)?)?,
        _ => {
            let psi = of_order(401, 5)?;
            let a = petersson_norm(&psi)?;
            let b = petersson_norm(&psi.pow(2))?;
            let total = a.total * b.total;
            let rel_err = ((total - REFERENCE_401_PRODUCT) / REFERENCE_401_PRODUCT).abs();
            let value = json!({
                "example": 401,
                "psi": a,
                "psi_squared": b,
                "total": total,
                "paper_value": REFERENCE_401_PRODUCT,
                "rel_err": rel_err,
            });
            return Ok(Report::new("reproduce", value)
                .check(rel_err < REL_TOL, || format!("relative error {rel_err:e} >= {REL_TOL:e}")));
        }
    };
    let mut out = petersson_report(report, "reproduce");
    out.result["example"] = json!(example.parse::<u64>().unwrap());
    Ok(out)
}

fn init_threads(flag: Option<usize>) -> Result<(), Failure> {
    let env = std::env::var("MAASSFORGE_THREADS").ok();
    let n = match (flag, env) {
        (Some(n), _) => Some(n),
        (None, Some(s)) => Some(
            s.trim()
                .parse()
                .map_err(|_| Failure::Input(format!("MAASSFORGE_THREADS={s} is not a number")))?,
        ),
        (None, None) => None,
    };
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Input(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    init_threads(cli.threads)?;
    match &cli.command {
        Command::Field { disc } => cmd_field(*disc),
        Command::Ideals { disc, max_norm } => cmd_ideals(*disc, *max_norm),
        Command::Coeffs { ch, n_max } => cmd_coeffs(*ch, *n_max),
        Command::ThetaEval { ch, x, y, n_max } => cmd_theta_eval(*ch, *x, *y, *n_max),
        Command::CheckAutomorphy { ch, c, d, samples, n_max } => cmd_check_automorphy(*ch, *c, *d, *samples, *n_max),
        Command::Lvalue { ch, s } => cmd_lvalue(*ch, *s),
        Command::Petersson { ch } => cmd_petersson(*ch),
        Command::GaussCheck { disc, p, j } => cmd_gauss_check(*disc, *p, *j),
        Command::Reproduce { example } => cmd_reproduce(example),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (code, msg) = match run(&cli) {
        Ok(report) => {
            let text = render(&report, cli.format);
            let written = match &cli.output {
                Some(path) => File::create(path).and_then(|mut f| f.write_all(text.as_bytes())),
                None => io::stdout().write_all(text.as_bytes()),
            };
            match (written, report.failed) {
                (Err(e), _) => (2, Some(format!("cannot write output: {e}"))),
                (Ok(()), Some(why)) => (1, Some(format!("tolerance failure: {why}"))),
                (Ok(()), None) => (0, None),
            }
        }
        Err(Failure::Tolerance(m)) => (1, Some(m)),
        Err(Failure::Input(m)) => (2, Some(m)),
        Err(Failure::Resource(m)) => (3, Some(m)),
    };
    if let Some(m) = msg {
        eprintln!("maassforge: {m}");
    }
    ExitCode::from(code)
}
