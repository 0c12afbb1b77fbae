//! Command-line front end. [`run`] does all the work so tests can drive it in-process.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sparsefac::divisibility::{divides_exact, divisibility_witness, DivBackend};
use sparsefac::engine::{
    constant_degree_factors, factor_constant_degree_promise, factor_multiplicity, sparse_factors, sparse_irreducible_test,
};
use sparsefac::irredproj::{parse_oracle, IrredProjOracle, RandomOracle};
use sparsefac::isolation::{find_isolating_prime_capped, IsolationScheme};
use sparsefac::parse::{parse_expression, parse_poly, parse_poly_n, render_poly_with, z_names};
use sparsefac::pit::{find_nonzero_point_whitebox, sparse_pit};
use sparsefac::rational::render_q;
use sparsefac::{par, Config, Error, FactorList, SparsePoly};

#[derive(Parser, Debug)]
#[command(name = "sparsefac", version, about = "Constant-degree and sparse factors of multivariate polynomials over Q")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Worker threads for the parallel loops (1 runs sequentially).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// TOML file with size bounds.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Accept parenthesised products and expand them before dispatch.
    #[arg(long, global = true)]
    pub expand: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// All irreducible factors of degree at most DELTA.
    FactorCd {
        #[arg(long)]
        delta: u32,
        /// Decide divisibility through the identity witness instead of exact division.
        #[arg(long)]
        witness: bool,
        /// Polynomial text; `-` or nothing reads stdin.
        #[arg(allow_hyphen_values = true)]
        poly: Option<String>,
    },
    /// Complete factorization, assuming every factor has degree at most DELTA.
    FactorCdPromise {
        #[arg(long)]
        delta: u32,
        #[arg(allow_hyphen_values = true)]
        poly: Option<String>,
    },
    /// Sparse irreducible factors from a projection oracle.
    FactorSparse {
        #[arg(long)]
        sparsity: usize,
        /// `constant-degree:<delta>`, `su` or `su:<d>`.
        #[arg(long, required_unless_present = "unsound_random_oracle")]
        oracle: Option<String>,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(allow_hyphen_values = true)]
        poly: Option<String>,
    },
    /// Sum-of-univariates factors.
    FactorSu {
        /// Degree bound of the class.
        #[arg(long, default_value_t = 2)]
        degree: u32,
        /// Term bound; defaults to n * degree + 1.
        #[arg(long)]
        sparsity: Option<usize>,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(allow_hyphen_values = true)]
        poly: Option<String>,
    },
    /// Whether G divides F.
    Divides {
        #[arg(long)]
        witness: bool,
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Multiplicity of the irreducible G in F.
    Multiplicity {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Zero test, with a point where a nonzero input does not vanish.
    Pit {
        #[arg(allow_hyphen_values = true)]
        poly: Option<String>,
    },
    /// Irreducibility through a projection oracle.
    Irreducible {
        #[arg(long, required_unless_present = "unsound_random_oracle")]
        oracle: Option<String>,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(allow_hyphen_values = true)]
        poly: Option<String>,
    },
    /// Isolating prime and weights.
    Isolate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: u32,
        /// Lower bound for the prime.
        #[arg(long, default_value_t = 1)]
        extra: u64,
        /// Joint scheme over 2n variables split into w and w'.
        #[arg(long)]
        projection: bool,
    },
}

#[derive(clap::Args, Debug, Clone)]
pub struct GridArgs {
    /// Use only the first K grid points per variable subset.
    #[arg(long)]
    pub sample: Option<u64>,
    /// Refuse to sample: fail when the full grid exceeds the cap.
    #[arg(long, conflicts_with = "sample")]
    pub exhaustive: bool,
    /// Replace the oracle by seeded random pairs (no guarantee).
    #[arg(long, value_name = "SEED")]
    pub unsound_random_oracle: Option<u64>,
}

/// What a run produced.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

struct Ctx {
    cfg: Config,
    expand: bool,
    format: Format,
    stdin: Option<Box<dyn FnOnce() -> Option<String> + Send>>,
    stderr: String,
}

impl Ctx {
    fn input(&mut self, arg: &Option<String>) -> Result<String, Failure> {
        match arg.as_deref() {
            Some(s) if s != "-" => Ok(s.to_string()),
            _ => self.stdin.take().and_then(|read| read()).ok_or_else(|| Failure::Usage("no polynomial given".into())),
        }
    }

    fn parse_many(&self, texts: &[&str]) -> Result<(usize, Vec<SparsePoly>), Failure> {
        let parse_free = |t: &str| if self.expand { parse_expression(t, None) } else { parse_poly(t) };
        let n = texts.iter().map(|t| parse_free(t).map(|p| p.nvars())).collect::<Result<Vec<_>, _>>()?.into_iter().max().unwrap_or(0);
        let n = n.max(1);
        let polys = texts
            .iter()
            .map(|t| if self.expand { parse_expression(t, Some(n)) } else { parse_poly_n(t, n) })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((n, polys))
    }

    fn parse_one(&mut self, arg: &Option<String>) -> Result<(usize, SparsePoly), Failure> {
        let text = self.input(arg)?;
        let (n, mut v) = self.parse_many(&[&text])?;
        Ok((n, v.remove(0)))
    }

    fn emit_list(&self, l: &FactorList, n: usize) -> String {
        let names = z_names(n);
        match self.format {
            Format::Json => l.to_json_with(&names).to_string() + "\n",
            Format::Text => l.to_text_with(&names),
        }
    }

    fn emit(&self, v: Value, text: String) -> String {
        match self.format {
            Format::Json => v.to_string() + "\n",
            Format::Text => text + "\n",
        }
    }

    fn oracle(&mut self, desc: Option<&str>, grid: &GridArgs, n: usize, d: u32) -> Result<Box<dyn IrredProjOracle>, Failure> {
        if let Some(seed) = grid.unsound_random_oracle {
            self.stderr.push_str("warning: random projection pairs carry no irreducibility guarantee\n");
            let count = grid.sample.map(|k| k as usize).unwrap_or(self.cfg.su_sample);
            return Ok(Box::new(RandomOracle { n, count, seed, range: 1000 }));
        }
        let desc = desc.ok_or_else(|| Failure::Usage("--oracle is required".into()))?;
        let is_su = desc == "su" || desc.starts_with("su:");
        if is_su && grid.sample.is_none() && !grid.exhaustive {
            // Fall back to sampling when the complete grid is over the cap.
            match parse_oracle(desc, n, d, None, &self.cfg) {
                Err(Error::Cap(msg)) => {
                    self.stderr.push_str(&format!(
                        "note: {msg}; sampling the first {} grid points per variable subset\n",
                        self.cfg.su_sample
                    ));
                    return Ok(parse_oracle(desc, n, d, Some(self.cfg.su_sample as u64), &self.cfg)?);
                }
                other => return Ok(other?),
            }
        }
        Ok(parse_oracle(desc, n, d, grid.sample, &self.cfg)?)
    }

    fn sparse(&mut self, f: &SparsePoly, n: usize, s: usize, oracle: &dyn IrredProjOracle) -> Result<String, Failure> {
        let r = sparse_factors(f, s, oracle, &self.cfg)?;
        for d in &r.diagnostics {
            self.stderr.push_str(&format!("note: {d}\n"));
        }
        if !r.early_exit {
            self.stderr.push_str("note: list may be partial (search ended without accounting for every projected factor)\n");
        }
        Ok(self.emit_list(&r.list, n))
    }
}

fn dispatch(cli: Cli, ctx: &mut Ctx) -> Result<String, Failure> {
    match cli.command {
        Command::FactorCd { delta, witness, poly } => {
            let (n, f) = ctx.parse_one(&poly)?;
            let backend = if witness { DivBackend::Witness } else { DivBackend::Exact };
            let l = constant_degree_factors(&f, delta, backend, &ctx.cfg)?;
            Ok(ctx.emit_list(&l, n))
        }
        Command::FactorCdPromise { delta, poly } => {
            let (n, f) = ctx.parse_one(&poly)?;
            let l = factor_constant_degree_promise(&f, delta, &ctx.cfg)?;
            Ok(ctx.emit_list(&l, n))
        }
        Command::FactorSparse { sparsity, oracle, grid, poly } => {
            let (n, f) = ctx.parse_one(&poly)?;
            let o = ctx.oracle(oracle.as_deref(), &grid, n, f.degree())?;
            ctx.sparse(&f, n, sparsity, o.as_ref())
        }
        Command::FactorSu { degree, sparsity, grid, poly } => {
            let (n, f) = ctx.parse_one(&poly)?;
            let s = sparsity.unwrap_or(n * degree as usize + 1);
            let o: Box<dyn IrredProjOracle> = if grid.unsound_random_oracle.is_some() {
                ctx.oracle(None, &grid, n, degree)?
            } else {
                let desc = format!("su:{degree}");
                ctx.oracle(Some(&desc), &grid, n, degree)?
            };
            ctx.sparse(&f, n, s, o.as_ref())
        }
        Command::Divides { witness, f, g } => {
            let (n, v) = ctx.parse_many(&[&f, &g])?;
            let names = z_names(n);
            if witness {
                let w = divisibility_witness(&v[0], &v[1])?;
                let q = w.holds.then(|| render_poly_with(&w.quotient(), &names));
                let v = json!({
                    "divides": w.holds,
                    "alpha": w.alpha.iter().map(render_q).collect::<Vec<_>>(),
                    "h_tilde": render_poly_with(&w.h_tilde, &names),
                    "quotient": q,
                });
                Ok(ctx.emit(v, w.holds.to_string()))
            } else {
                let q = divides_exact(&v[0], &v[1])?;
                let v = json!({
                    "divides": q.is_some(),
                    "quotient": q.as_ref().map(|q| render_poly_with(q, &names)),
                });
                Ok(ctx.emit(v.clone(), v["divides"].to_string()))
            }
        }
        Command::Multiplicity { f, g } => {
            let (_, v) = ctx.parse_many(&[&f, &g])?;
            let e = factor_multiplicity(&v[0], &v[1])?;
            Ok(ctx.emit(json!({ "multiplicity": e }), e.to_string()))
        }
        Command::Pit { poly } => {
            let (_, f) = ctx.parse_one(&poly)?;
            if sparse_pit(&f) {
                Ok(ctx.emit(json!({ "zero": true }), "zero".into()))
            } else {
                let pt = find_nonzero_point_whitebox(&f, f.degree())?;
                let pts: Vec<String> = pt.point.iter().map(render_q).collect();
                Ok(ctx.emit(json!({ "zero": false, "point": pts }), format!("nonzero at ({})", pts.join(", "))))
            }
        }
        Command::Irreducible { oracle, grid, poly } => {
            let (n, f) = ctx.parse_one(&poly)?;
            let o = ctx.oracle(oracle.as_deref(), &grid, n, f.degree())?;
            let r = sparse_irreducible_test(&f, o.as_ref(), &ctx.cfg)?;
            Ok(ctx.emit(json!({ "irreducible": r }), r.to_string()))
        }
        Command::Isolate { n, delta, extra, projection } => {
            let s = if projection {
                IsolationScheme::for_projection(n, delta, &ctx.cfg)?
            } else {
                find_isolating_prime_capped(n, delta, extra, ctx.cfg.max_scheme_monomials)?
            };
            Ok(s.to_json().to_string() + "\n")
        }
    }
}

/// Runs the command line on `args` (including the program name) with optional stdin text.
pub fn run(args: &[String], stdin: Option<String>) -> Outcome {
    run_with(args, move || stdin)
}

/// Like [`run`], but stdin is only read if a polynomial argument is missing.
pub fn run_with(args: &[String], read_stdin: impl FnOnce() -> Option<String> + Send + 'static) -> Outcome {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let cfg = match &cli.config {
        Some(p) => match Config::load(p) {
            Ok(c) => c,
            Err(e) => return Outcome { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
        },
        None => Config::default(),
    };
    let mut ctx = Ctx { cfg, expand: cli.expand, format: cli.format, stdin: Some(Box::new(read_stdin)), stderr: String::new() };
    let jobs = cli.jobs;
    let result = match jobs {
        Some(j) => par::with_jobs(j, || dispatch(cli, &mut ctx)),
        None => dispatch(cli, &mut ctx),
    };
    match result {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: ctx.stderr },
        Err(Failure::Usage(m)) => Outcome { code: 1, stdout: String::new(), stderr: format!("{}error: {m}\n", ctx.stderr) },
        Err(Failure::Lib(e)) => {
            let code = if e.is_contract_violation() { 2 } else { 1 };
            Outcome { code, stdout: String::new(), stderr: format!("{}error: {e}\n", ctx.stderr) }
        }
    }
}

