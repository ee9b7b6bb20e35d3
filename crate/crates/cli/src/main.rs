use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cyclo_core::cyclotomy::CycloCtx;
use cyclo_core::diffset;
use cyclo_core::field::{FieldCtx, FieldSpec};
use cyclo_core::ledger::Check;
use cyclo_core::linalg::IntMatrix;
use cyclo_core::report::{self, Ledger, Meta};
use cyclo_core::schur::{self, QuadrupleMode, Suite};

#[derive(Parser, Debug)]
#[command(
    name = "cyclo",
    version,
    about = "Cyclotomic numbers, cyclotomic matrices and power difference sets"
)]
struct Cli {
    /// Worker threads for parallel checks (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Args, Debug)]
struct FieldArgs {
    /// Characteristic (odd prime).
    #[arg(long)]
    p: u64,
    /// Extension degree.
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Monic modulus coefficients c0,...,cn (low to high).
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u64>>,
    /// Generator of F_q^* as a canonical index.
    #[arg(long)]
    generator: Option<u64>,
    /// Index of K in F_q^*; must divide q - 1.
    #[arg(long)]
    ell: u64,
}

impl FieldArgs {
    fn context(&self) -> Result<CycloCtx> {
        let mut spec = FieldSpec::new(self.p, self.n);
        if let Some(m) = &self.modulus {
            spec = spec.with_modulus(m.clone());
        }
        if let Some(g) = self.generator {
            spec = spec.with_generator(g);
        }
        let field = FieldCtx::build(&spec).context("building field")?;
        Ok(CycloCtx::new(Arc::new(field), self.ell)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    A,
    M,
    B,
    S,
    Gram,
    Commutator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Schur,
    Identities,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cyclotomic matrix and derived matrices.
    Compute {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "a")]
        emit: Vec<Emit>,
    },
    /// Schur-ring and matrix identities as a ledger.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Seed for sampled quadruples when ell > 12.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Difference-set detectors and certificates.
    Diffset {
        #[command(flatten)]
        field: FieldArgs,
        /// Test K ∪ {0} instead of K.
        #[arg(long)]
        modified: bool,
    },
    /// Sweep prime powers q ≡ 1 (mod ell) for difference sets.
    Search {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        max_q: u64,
        #[arg(long)]
        prime_only: bool,
        /// Also report q = ell + 1, where K = {1} and lambda = 0.
        #[arg(long)]
        include_trivial: bool,
    },
    /// Whether column j of A is a rearrangement of column j + q'.
    Survey {
        #[command(flatten)]
        field: FieldArgs,
    },
}

/// Output text plus whether every check passed.
struct Outcome {
    text: String,
    passed: bool,
}

fn json_doc<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(report::to_json(value, true)? + "\n")
}

fn render_checks(format: Format, meta: Meta, checks: Vec<Check>) -> Result<Outcome> {
    let ledger = Ledger { meta, checks };
    let passed = ledger.passed();
    let text = match format {
        Format::Json => json_doc(&ledger)?,
        Format::Csv => report::checks_csv(&ledger.checks)?,
        Format::Pretty => {
            let failed = ledger.checks.iter().filter(|c| !c.pass).count();
            format!(
                "{}{} checks, {} failed\n",
                report::checks_pretty(&ledger.checks),
                ledger.checks.len(),
                failed
            )
        }
    };
    Ok(Outcome { text, passed })
}

fn compute(ctx: &CycloCtx, emit: &[Emit], format: Format) -> Result<Outcome> {
    let d = ctx.build_matrices()?;
    let mut mats: Vec<(String, IntMatrix)> = Vec::new();
    for e in emit {
        let (name, m) = match e {
            Emit::A => ("a", d.a.clone()),
            Emit::M => ("m", d.m.clone()),
            Emit::B => ("b", d.b.clone()),
            Emit::S => ("s", d.s.clone()),
            Emit::Gram => ("gram", &d.a.transpose() * &d.a),
            Emit::Commutator => (
                "commutator",
                &(&d.a.transpose() * &d.a) - &(&d.a * &d.a.transpose()),
            ),
        };
        if !mats.iter().any(|(n, _)| n == name) {
            mats.push((name.to_string(), m));
        }
    }
    let text = match format {
        Format::Json => {
            let matrices: BTreeMap<&str, &IntMatrix> =
                mats.iter().map(|(n, m)| (n.as_str(), m)).collect();
            json_doc(&json!({
                "meta": Meta::for_context("compute", ctx),
                "k": ctx.k(),
                "qprime": ctx.qprime(),
                "matrices": matrices,
            }))?
        }
        Format::Csv if mats.len() == 1 => report::matrix_csv(&mats[0].1)?,
        Format::Csv => report::named_matrices_csv(&mats)?,
        Format::Pretty => report::named_matrices_pretty(&mats),
    };
    Ok(Outcome { text, passed: true })
}

fn diffset_cmd(ctx: &CycloCtx, modified: bool, format: Format) -> Result<Outcome> {
    if modified {
        let r = diffset::modified_diffset(ctx)?;
        let passed = r.passed();
        let text = match format {
            Format::Json => json_doc(&r)?,
            Format::Csv => report::checks_csv(&r.certificates)?,
            Format::Pretty => format!(
                "q = {}, ell = {}, k0 = {}, lambda0 = {}\nbruteforce = {}, lehmer_modified = {}\n{}",
                r.q,
                r.ell,
                r.k0,
                r.lambda0.map_or("-".into(), |l| l.to_string()),
                r.verdicts.bruteforce,
                r.verdicts.lehmer_modified,
                report::checks_pretty(&r.certificates)
            ),
        };
        return Ok(Outcome { text, passed });
    }
    let r = diffset::analyze(ctx)?;
    let passed = r.passed();
    let text = match format {
        Format::Json => json_doc(&r)?,
        Format::Csv => report::checks_csv(&r.certificates)?,
        Format::Pretty => {
            let mut s = format!(
                "q = {}, ell = {}, k = {}, q' = {}, lambda = {}\n\
                 bruteforce = {}, lehmer = {}, sumsq = {}, gram = {}\n",
                r.q,
                r.ell,
                r.k,
                r.qprime,
                r.lambda.map_or("-".into(), |l| l.to_string()),
                r.verdicts.bruteforce,
                r.verdicts.lehmer,
                r.verdicts.sumsq,
                r.verdicts.gram
            );
            if let Some(d) = &r.determinants {
                s += &format!(
                    "det A = {} (predicted {}), det B = {} (predicted {})\n",
                    d.a.computed, d.a.predicted, d.b.computed, d.b.predicted
                );
            }
            if let Some(sp) = &r.spectra {
                s += &format!("char M: {}\nchar S: {}\n", sp.m_char_poly, sp.s_char_poly);
            }
            s + &report::checks_pretty(&r.certificates)
        }
    };
    Ok(Outcome { text, passed })
}

fn search_cmd(
    ell: u64,
    max_q: u64,
    prime_only: bool,
    include_trivial: bool,
    format: Format,
) -> Result<Outcome> {
    let hits = diffset::search(ell, max_q, prime_only, include_trivial, None)?;
    let passed = hits.iter().all(|h| h.passed());
    let mut text = String::new();
    match format {
        Format::Json => {
            for h in &hits {
                text += &report::to_json(h, false)?;
                text.push('\n');
            }
        }
        Format::Csv => {
            text += "q,ell,k,lambda,q_is_prime,k_is_square,passed\r\n";
            for h in &hits {
                text += &format!(
                    "{},{},{},{},{},{},{}\r\n",
                    h.q,
                    h.ell,
                    h.k,
                    h.lambda.map_or(String::new(), |l| l.to_string()),
                    h.q_is_prime,
                    h.k_is_square,
                    h.passed()
                );
            }
        }
        Format::Pretty => {
            text += &format!(
                "{:>8} {:>8} {:>8}  prime  k-square  certificates\n",
                "q", "k", "lambda"
            );
            for h in &hits {
                text += &format!(
                    "{:>8} {:>8} {:>8}  {:<5}  {:<8}  {}\n",
                    h.q,
                    h.k,
                    h.lambda.unwrap_or(0),
                    h.q_is_prime,
                    h.k_is_square,
                    if h.passed() { "pass" } else { "FAIL" }
                );
            }
        }
    }
    Ok(Outcome { text, passed })
}

fn survey_cmd(ctx: &CycloCtx, format: Format) -> Result<Outcome> {
    let r = schur::column_permutation_survey(ctx)?;
    let text = match format {
        Format::Json => json_doc(&json!({"meta": Meta::for_context("survey", ctx), "survey": r}))?,
        Format::Csv => {
            let mut s = String::from("j,permutation\r\n");
            for c in &r.columns {
                s += &format!("{},{}\r\n", c.j, c.permutation);
            }
            s
        }
        Format::Pretty => {
            let mut s = format!(
                "q = {}, ell = {}, k = {}, q' = {}\n",
                r.q, r.ell, r.k, r.qprime
            );
            for c in &r.columns {
                s += &format!(
                    "column {:>3} vs {:>3}: {}\n",
                    c.j,
                    c.j + r.qprime,
                    c.permutation
                );
            }
            s
        }
    };
    Ok(Outcome { text, passed: true })
}

fn run(cli: Cli) -> Result<Outcome> {
    if let Some(j) = cli.jobs {
        if j == 0 {
            bail!("--jobs must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .context("configuring worker threads")?;
    }
    let format = cli.format;
    match cli.command {
        Command::Compute { field, emit } => compute(&field.context()?, &emit, format),
        Command::Verify { field, suite, seed } => {
            let ctx = field.context()?;
            let suite = match suite {
                SuiteArg::Schur => Suite::Schur,
                SuiteArg::Identities => Suite::Identities,
                SuiteArg::All => Suite::All,
            };
            let result = schur::verify_suite(&ctx, suite, QuadrupleMode::Auto { seed })?;
            render_checks(
                format,
                Meta::for_context("verify", &ctx).with_seed(seed),
                result.checks,
            )
        }
        Command::Diffset { field, modified } => diffset_cmd(&field.context()?, modified, format),
        Command::Search {
            ell,
            max_q,
            prime_only,
            include_trivial,
        } => search_cmd(ell, max_q, prime_only, include_trivial, format),
        Command::Survey { field } => survey_cmd(&field.context()?, format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            if out
                .write_all(outcome.text.as_bytes())
                .and_then(|_| out.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
