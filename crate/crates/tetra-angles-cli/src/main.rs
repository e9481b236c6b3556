use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tetra_angles::angle_map::{face_cosines, AngleCosTriple, ApexPoint};
use tetra_angles::base_geometry::{fixtures, BaseTriangle, ToleranceConfig};
use tetra_angles::degeneracy_locus::on_cylinder;
use tetra_angles::format::{fmt_sig, round_sig};
use tetra_angles::inverse_p3p::{preimages, P3PWarning};
use tetra_angles::limits_boundary::{build_boundary_mesh, sigma_membership};
use tetra_angles::pillow::pillow_value;
use tetra_angles::sampling::{sample, SampleRegion};
use tetra_angles::verify::{run_suite, Suite, VerifyConfig};
use tetra_angles::Error;

/// Face-angle cosines of tetrahedra over a fixed base triangle.
#[derive(Parser, Debug)]
#[command(name = "tetra-angles", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Base triangle: a JSON file, inline JSON, or one of
    /// equilateral|pythagorean|obtuse.
    #[arg(long, global = true)]
    base: Option<String>,
    /// Override for the predicate tolerance.
    #[arg(long, global = true)]
    tol_predicate: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Obj,
    Ply,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the face-angle cosines at an apex.
    Map {
        #[arg(long, num_args = 3, value_names = ["P", "Q", "R"], allow_negative_numbers = true, required = true)]
        apex: Vec<f64>,
    },
    /// All apexes with the given face-angle cosines.
    Inverse {
        #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"], allow_negative_numbers = true, required = true)]
        target: Vec<f64>,
    },
    /// Classify a cosine triple against the attainable set.
    Member {
        #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"], allow_negative_numbers = true, required = true)]
        target: Vec<f64>,
    },
    /// Export the boundary mesh as OBJ (default) or PLY.
    Boundary {
        #[arg(long, default_value_t = 64)]
        res: usize,
    },
    /// Run verification suites; exits 0 only if every check passes.
    Verify {
        /// Suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 24)]
        res: usize,
    },
    /// Sample apexes from a region and write their images as CSV.
    Sample {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// plane|halfspace|cylinder|special_regions
        #[arg(long, default_value = "halfspace")]
        region: String,
    },
}

/// Failure carrying its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(String),
    Base(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Numeric(_) => 2,
            Failure::Base(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::DegenerateBase { .. } | Error::InvalidBase(_) => Failure::Base(e.to_string()),
            Error::InvalidTolerance(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

fn load_base(common: &Common) -> Result<BaseTriangle, Failure> {
    let mut tol = ToleranceConfig::default();
    if let Some(t) = common.tol_predicate {
        tol.tol_predicate = t;
    }
    tol.rng_seed = common.seed;
    tol.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let arg = common.base.as_deref().ok_or_else(|| Failure::Usage("--base is required".into()))?;
    let named = match arg {
        "equilateral" => Some(fixtures::equilateral()),
        "pythagorean" => Some(fixtures::pythagorean()),
        "obtuse" => Some(fixtures::obtuse()),
        _ => None,
    };
    if let Some(b) = named {
        return Ok(b.with_tol(tol)?);
    }
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Base(format!("cannot read base file {arg}: {e}")))?
    };
    Ok(BaseTriangle::from_json_with_tolerances(&text, tol)?)
}

fn triple(v: &[f64]) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

fn num(x: f64) -> Value {
    json!(round_sig(x))
}

fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

/// Writes via a temporary file in the target directory, so a failed run
/// never leaves a partial file behind.
fn emit(out: Option<&Path>, body: &str) -> Result<(), Failure> {
    let Some(path) = out else {
        let mut so = std::io::stdout().lock();
        return so.write_all(body.as_bytes()).map_err(|e| Failure::Numeric(e.to_string()));
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| Failure::Usage(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(body.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn json_line(v: &Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("serializable"))
}

fn require_format(given: Option<Format>, allowed: &[Format], cmd: &str) -> Result<Format, Failure> {
    match given {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => Err(Failure::Usage(format!("--format {f:?} is not available for {cmd}").to_lowercase())),
    }
}

fn cmd_map(base: &BaseTriangle, apex: [f64; 3]) -> Result<String, Failure> {
    let a = ApexPoint::new(apex[0], apex[1], apex[2]);
    if !(a.r >= 0.0) {
        return Err(Failure::Usage("apex height r must be non-negative".into()));
    }
    let t = face_cosines(base, &a)?;
    let v = json!({
        "cosines": nums(&t.to_array()),
        "pillow_value": num(pillow_value(&t)),
        "on_cylinder": on_cylinder(base, &a)?,
    });
    Ok(json_line(&v))
}

fn cmd_inverse(base: &BaseTriangle, target: [f64; 3]) -> Result<String, Failure> {
    let t = AngleCosTriple::from_array(target);
    let one = AngleCosTriple::new(1.0, 1.0, 1.0);
    if t.is_finite() && t.max_abs_diff(&one) <= base.tolerances().tol_predicate {
        let v = json!({
            "count": 0,
            "solutions": [],
            "warnings": [],
            "note": "limit point: approached as the apex goes to infinity, never attained",
        });
        return Ok(json_line(&v));
    }
    let sol = preimages(base, &t)?;
    let solutions: Vec<Value> = sol
        .solutions
        .iter()
        .map(|s| {
            json!({
                "apex": nums(&[s.apex.p, s.apex.q, s.apex.r]),
                "residual": num(s.residual),
                "near_cylinder": s.near_cylinder,
                "planar": s.planar,
            })
        })
        .collect();
    let warnings: Vec<&str> = sol
        .warnings
        .iter()
        .map(|w| match w {
            P3PWarning::DegenerateFiber => "degenerate_fiber",
            P3PWarning::DedupCluster => "dedup_cluster",
            P3PWarning::NearVertex => "near_vertex",
        })
        .collect();
    Ok(json_line(&json!({ "count": solutions.len(), "solutions": solutions, "warnings": warnings })))
}

fn cmd_member(base: &BaseTriangle, target: [f64; 3]) -> Result<String, Failure> {
    let s = sigma_membership(base, &AngleCosTriple::from_array(target))?;
    Ok(json_line(&json!({ "status": s.name() })))
}

fn cmd_boundary(base: &BaseTriangle, res: usize, format: Format) -> Result<String, Failure> {
    if res < 8 {
        return Err(Failure::Usage(format!("--res must be at least 8, got {res}")));
    }
    let mesh = build_boundary_mesh(base, res, 1e-8)?;
    Ok(match format {
        Format::Ply => mesh.to_ply(),
        _ => mesh.to_obj(),
    })
}

fn cmd_verify(base: &BaseTriangle, suite: &str, cfg: &VerifyConfig) -> Result<(String, bool), Failure> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse().map_err(Failure::Usage)?]
    };
    let reports: Vec<_> = suites.iter().map(|&s| run_suite(base, s, cfg)).collect();
    let passed = reports.iter().all(|r| r.passed);
    for r in &reports {
        eprint!("{}", r.summary());
    }
    let v = json!({ "passed": passed, "suites": reports });
    Ok((json_line(&v), passed))
}

fn cmd_sample(base: &BaseTriangle, n: usize, region: &str, seed: u64, format: Format) -> Result<String, Failure> {
    let region: SampleRegion = region.parse().map_err(Failure::Usage)?;
    let rows = sample(base, region, n, seed)?;
    if format == Format::Json {
        let v: Vec<Value> = rows
            .iter()
            .map(|s| {
                json!({
                    "apex": nums(&[s.apex.p, s.apex.q, s.apex.r]),
                    "cosines": nums(&s.cosines.to_array()),
                    "pillow_value": num(s.pillow_value),
                    "on_cylinder": s.on_cylinder,
                })
            })
            .collect();
        return Ok(json_line(&Value::Array(v)));
    }
    let mut s = String::from("p,q,r,c_alpha,c_beta,c_gamma,pillow_value,on_cylinder\n");
    for r in rows {
        let c = r.cosines;
        let fields = [r.apex.p, r.apex.q, r.apex.r, c.c_alpha, c.c_beta, c.c_gamma, r.pillow_value];
        let cols: Vec<String> = fields.iter().map(|&x| fmt_sig(x)).collect();
        s += &format!("{},{}\n", cols.join(","), r.on_cylinder);
    }
    Ok(s)
}

fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("TETRA_ANGLES_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("TETRA_ANGLES_THREADS must be a non-negative integer, got {v:?}")))?;
    if n > 0 {
        // an already-initialized pool is fine, it only happens under tests
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    init_threads()?;
    let base = load_base(&cli.common)?;
    let out = cli.common.out.as_deref();
    let fmt = cli.common.format;
    let (body, ok) = match &cli.command {
        Command::Map { apex } => {
            require_format(fmt, &[Format::Json], "map")?;
            (cmd_map(&base, triple(apex))?, true)
        }
        Command::Inverse { target } => {
            require_format(fmt, &[Format::Json], "inverse")?;
            (cmd_inverse(&base, triple(target))?, true)
        }
        Command::Member { target } => {
            require_format(fmt, &[Format::Json], "member")?;
            (cmd_member(&base, triple(target))?, true)
        }
        Command::Boundary { res } => {
            let f = require_format(fmt, &[Format::Obj, Format::Ply], "boundary")?;
            (cmd_boundary(&base, *res, f)?, true)
        }
        Command::Verify { suite, samples, res } => {
            require_format(fmt, &[Format::Json], "verify")?;
            if *res < 8 {
                return Err(Failure::Usage(format!("--res must be at least 8, got {res}")));
            }
            let cfg = VerifyConfig { samples: *samples, seed: cli.common.seed, resolution: *res };
            cmd_verify(&base, suite, &cfg)?
        }
        Command::Sample { samples, region } => {
            let f = require_format(fmt, &[Format::Csv, Format::Json], "sample")?;
            (cmd_sample(&base, *samples, region, cli.common.seed, f)?, true)
        }
    };
    emit(out, &body)?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) | Failure::Numeric(m) | Failure::Base(m) => m,
            };
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
