//! Experiment runner: one subcommand per experiment, each writing a CSV
//! table (one header line, comma separated) to `--out` or stdout.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use hbspace::bounds::{classify, opnorm_profile, GrowthModel};
use hbspace::csvfmt::{format_complex, format_real, parse_complex_list};
use hbspace::hayman::{compare_exact, HaymanModel};
use hbspace::pythagoras::{pair_from_phi, DEFAULT_GRID};
use hbspace::series::PhiSpec;
use hbspace::space::{hb_norm, HbContext, HbPolynomial};
use hbspace::summability::{apply_row, load_custom_matrix, TriMatrixSpec};
use hbspace::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Parser)]
#[command(name = "hbspace", version, about = "Norm and summability experiments in H(b) spaces")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// φ = b/a, e.g. `dirichlet`, `dirichlet:0+1i`, `pole:0,3`, `exp:1,0.5`, `rational:1/1,-0.5`.
    #[arg(long, global = true, default_value = "dirichlet")]
    pub phi: PhiSpec,
    /// Cesàro order.
    #[arg(long, global = true, default_value_t = 0.0)]
    pub alpha: f64,
    /// Number of coefficients of φ kept.
    #[arg(long, global = true, default_value_t = 4096)]
    pub trunc: usize,
    /// Subspace degree for operator norms (default 4n per row).
    #[arg(long, global = true)]
    pub gram: Option<usize>,
    /// Boundary samples for the outer-function FFT (power of two).
    #[arg(long, global = true, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    /// Output file; stdout if absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomly generated inputs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// ‖z^n‖ for n = 0..=trunc.
    Norms,
    /// Truncated operator norms of S_n against the lower bound a(0)|γ_nn|‖z^n‖.
    Opnorm {
        #[arg(long, value_delimiter = ',', default_value = "4,16,64")]
        n: Vec<usize>,
        /// Custom lower-triangular matrix file (overrides --alpha).
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Which divergence hypotheses hold for the Cesàro method of order --alpha.
    Classify,
    /// Exact coefficients of exp(β/(1-z)^γ) against both asymptotic estimates.
    Hayman {
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        #[arg(long, value_delimiter = ',', default_value = "0,1,10,100,500,1000,2000,5000")]
        n: Vec<usize>,
    },
    /// ‖σ_n(p) − p‖ for n = 0..=nmax.
    CesaroDemo {
        /// Coefficient file for p; a random polynomial of --degree is used otherwise.
        #[arg(long)]
        sample: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        degree: usize,
        #[arg(long, default_value_t = 200)]
        nmax: usize,
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Taylor coefficients of the pair (a, b) for k = 0..=trunc.
    Pair,
}

fn open_out(out: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot write {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

/// Runs the parsed command, writing CSV to `--out` (or stdout) and any
/// human-readable notes to `notes`.
pub fn run(cli: &Cli, notes: &mut dyn Write) -> anyhow::Result<()> {
    let mut out = open_out(&cli.global.out)?;
    execute(cli, &mut out, notes)?;
    out.flush()?;
    Ok(())
}

/// Like [`run`] but with an explicit CSV sink.
pub fn execute(cli: &Cli, out: &mut dyn Write, notes: &mut dyn Write) -> anyhow::Result<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Norms => cmd_norms(g, out),
        Command::Opnorm { n, matrix } => cmd_opnorm(g, n, matrix.as_ref(), out),
        Command::Classify => cmd_classify(g, out, notes),
        Command::Hayman { beta, gamma, n } => cmd_hayman(*beta, *gamma, n, out),
        Command::CesaroDemo {
            sample,
            degree,
            nmax,
            matrix,
        } => cmd_cesaro_demo(g, sample.as_ref(), *degree, *nmax, matrix.as_ref(), out),
        Command::Pair => cmd_pair(g, out),
    }
}

fn matrix_spec(g: &GlobalOpts, matrix: Option<&PathBuf>) -> anyhow::Result<TriMatrixSpec> {
    Ok(match matrix {
        Some(path) => load_custom_matrix(path).with_context(|| format!("reading matrix {}", path.display()))?,
        None => TriMatrixSpec::cesaro(g.alpha)?,
    })
}

pub fn cmd_norms(g: &GlobalOpts, out: &mut dyn Write) -> anyhow::Result<()> {
    let ctx = HbContext::from_phi(&g.phi, g.trunc)?;
    writeln!(out, "n,norm")?;
    for (n, v) in ctx.monomial_norms().into_iter().enumerate() {
        writeln!(out, "{n},{}", format_real(v))?;
    }
    Ok(())
}

pub fn cmd_opnorm(g: &GlobalOpts, n_list: &[usize], matrix: Option<&PathBuf>, out: &mut dyn Write) -> anyhow::Result<()> {
    let spec = matrix_spec(g, matrix)?;
    let needed = n_list
        .iter()
        .map(|&n| g.gram.unwrap_or(4 * n))
        .max()
        .unwrap_or(0);
    if needed > g.trunc {
        bail!("subspace degree {needed} exceeds --trunc {}", g.trunc);
    }
    let ctx = HbContext::from_phi(&g.phi, g.trunc)?;
    // a(0) only depends weakly on how many coefficients of (a, b) are kept
    let pair = pair_from_phi(&g.phi, g.grid, g.trunc.min(g.grid / 4))?;
    let rows = opnorm_profile(&ctx, pair.a0, &spec, n_list, g.gram)?;
    writeln!(out, "n,lemma_bound,truncated_norm,N")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{}",
            r.n,
            format_real(r.lemma_bound),
            format_real(r.value),
            r.gram_size
        )?;
    }
    Ok(())
}

pub fn cmd_classify(g: &GlobalOpts, out: &mut dyn Write, notes: &mut dyn Write) -> anyhow::Result<()> {
    let ctx = HbContext::from_phi(&g.phi, g.trunc)?;
    let v = classify(&ctx.monomial_norms(), g.alpha)?;
    let (model, rho, c, delta) = match v.fitted_model {
        GrowthModel::PolynomialGrowth { rho } => ("polynomial", format_real(rho), String::new(), String::new()),
        GrowthModel::StretchedExponential { c, delta } => {
            ("stretched", String::new(), format_real(c), format_real(delta))
        }
        GrowthModel::Bounded => ("bounded", String::new(), String::new(), String::new()),
    };
    writeln!(out, "phi,alpha,case_i,case_ii,case_iii,model,rho,c,delta,residual")?;
    writeln!(
        out,
        "{},{},{},{},{},{model},{rho},{c},{delta},{}",
        csv_field(&g.phi.to_string()),
        format_real(g.alpha),
        v.case_i,
        v.case_ii,
        v.case_iii,
        format_real(v.residual)
    )?;
    writeln!(notes, "{} with alpha = {}: {}", g.phi, g.alpha, v.summary())?;
    Ok(())
}

/// Quotes a field containing a comma or quote.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt_real(x: Option<f64>) -> String {
    x.map(format_real).unwrap_or_default()
}

/// Columns are natural logarithms of the coefficient and of both estimates,
/// plus the ratios `exact / estimate`; estimates are blank for `n = 0`.
pub fn cmd_hayman(beta: f64, gamma: f64, n_list: &[usize], out: &mut dyn Write) -> anyhow::Result<()> {
    let model = HaymanModel::new(beta, gamma)?;
    writeln!(out, "n,log_exact,log_estimate,log_closed_form,ratio_estimate,ratio_closed_form")?;
    for r in compare_exact(&model, n_list)? {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n,
            format_real(r.log_exact),
            opt_real(r.log_estimate),
            opt_real(r.log_closed),
            opt_real(r.ratio_estimate()),
            opt_real(r.ratio_closed())
        )?;
    }
    Ok(())
}

pub fn random_polynomial(degree: usize, seed: u64) -> HbPolynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    HbPolynomial::new(
        (0..=degree)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}

pub fn cmd_cesaro_demo(
    g: &GlobalOpts,
    sample: Option<&PathBuf>,
    degree: usize,
    nmax: usize,
    matrix: Option<&PathBuf>,
    out: &mut dyn Write,
) -> anyhow::Result<()> {
    let p = match sample {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let coeffs = parse_complex_list(&text).with_context(|| format!("malformed coefficients in {}", path.display()))?;
            if coeffs.is_empty() {
                HbPolynomial::zero()
            } else {
                HbPolynomial::new(coeffs)
            }
        }
        None => random_polynomial(degree, g.seed),
    };
    if p.degree() > g.trunc {
        bail!("sample degree {} exceeds --trunc {}", p.degree(), g.trunc);
    }
    let spec = matrix_spec(g, matrix)?;
    let ctx = HbContext::from_phi(&g.phi, g.trunc)?;
    writeln!(out, "n,distance")?;
    for n in 0..=nmax {
        let d = hb_norm(&ctx, &apply_row(&spec.row(n)?, &p).sub(&p))?;
        writeln!(out, "{n},{}", format_real(d))?;
    }
    Ok(())
}

pub fn cmd_pair(g: &GlobalOpts, out: &mut dyn Write) -> anyhow::Result<()> {
    let pair = pair_from_phi(&g.phi, g.grid, g.trunc)?;
    writeln!(out, "k,a_k,b_k")?;
    for k in 0..=g.trunc {
        writeln!(out, "{k},{},{}", format_complex(pair.a.get(k)), format_complex(pair.b.get(k)))?;
    }
    Ok(())
}
