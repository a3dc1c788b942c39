use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use discrete_clifford::chebyshev::{build_dirac_solutions, build_kg_solution, Convention};
use discrete_clifford::lattice::{
    kg_residual, write_csv, BoundaryMode, LatticeBox, MassTerm, Semantics,
};
use discrete_clifford::momentum::{write_curve_csv, zero_scan, BrillouinGrid, SymbolOperator};
use discrete_clifford::opcalc::{
    check_laplacian_factorization, check_laplacian_half, check_leibniz,
    check_leibniz_without_involution, check_nilpotent, Dir, IdentityCheck,
};
use discrete_clifford::report::{Anchor, Check, VerificationReport};
use discrete_clifford::verify::{self, Mutation, Suite, VerifyConfig};
use discrete_clifford::{Error, Multivector, Signature};
use serde_json::json;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "dclifford",
    version,
    about = "Discrete Clifford analysis on hZ^n"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity suites and write a JSON report.
    Verify(VerifyArgs),
    /// Build a Klein–Gordon solution from Chebyshev polynomials.
    SolveKg(SolveArgs),
    /// Build the two spinor components of a massive Dirac solution.
    SolveDirac(SolveArgs),
    /// Scan operator symbols over the Brillouin zone.
    Dispersion(DispersionArgs),
    /// Check an operator identity symbolically.
    Opcalc(OpcalcArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest lattice dimension.
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Largest n for the Cl(0,n) and Cl(n,n) suites.
    #[arg(long, default_value_t = 4)]
    algebra_dim: usize,
    /// Mesh widths, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 0.5])]
    h: Vec<f64>,
    /// Masses, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 1.0, std::f64::consts::SQRT_2])]
    mass: Vec<f64>,
    /// Random trials per check; defaults to each suite's own count.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Suites to run, comma separated.
    #[arg(long, value_delimiter = ',')]
    suite: Vec<SuiteArg>,
    #[arg(long, default_value = "report.json")]
    report: PathBuf,
    #[arg(long, hide = true)]
    inject_mutation: Option<MutationArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Algebra,
    Witt,
    Lattice,
    Symbolic,
    Chebyshev,
    Momentum,
    Contested,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Algebra => Suite::Algebra,
            SuiteArg::Witt => Suite::Witt,
            SuiteArg::Lattice => Suite::Lattice,
            SuiteArg::Symbolic => Suite::Symbolic,
            SuiteArg::Chebyshev => Suite::Chebyshev,
            SuiteArg::Momentum => Suite::Momentum,
            SuiteArg::Contested => Suite::Contested,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MutationArg {
    LeibnizNoInvolution,
    LaplacianHalf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    S1,
    S2,
}

#[derive(Clone, Copy, ValueEnum)]
enum MassTermArg {
    Chi,
    K,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Static,
    Shifted,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value_t = 1.0)]
    h: f64,
    #[arg(long, default_value_t = 0.0)]
    mass: f64,
    /// Site range `lo:hi`, either once for every axis or once per axis.
    #[arg(
        long = "box",
        allow_hyphen_values = true,
        value_delimiter = ',',
        default_value = "-4:4"
    )]
    bounds: Vec<String>,
    /// Per-axis split of (mh)², comma separated; must sum to 1.
    #[arg(long, value_delimiter = ',')]
    weights: Vec<f64>,
    /// Amplitude as `blade:value` pairs, e.g. `0:1,12:0.5`.
    #[arg(long, default_value = "0:1")]
    amplitude: String,
    #[arg(long, value_enum, default_value = "static")]
    convention: ConventionArg,
    #[arg(long, value_enum, default_value = "k")]
    mass_term: MassTermArg,
    #[arg(long, value_enum, default_value = "s1")]
    semantics: SemanticsArg,
    #[arg(long, default_value = "field.csv")]
    out: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OperatorArg {
    Central,
    Dh,
    Kg,
}

#[derive(Args)]
struct DispersionArgs {
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value_t = 1.0)]
    h: f64,
    #[arg(long, default_value_t = 64)]
    grid: usize,
    #[arg(long, value_enum, default_value = "dh")]
    operator: OperatorArg,
    #[arg(long, default_value_t = 0.0)]
    mass: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the zero report as JSON on stdout.
    #[arg(long)]
    zeros: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum IdentityArg {
    Leibniz,
    Nilpotent,
    Laplacian,
}

#[derive(Args)]
struct OpcalcArgs {
    #[arg(long, value_enum)]
    check: IdentityArg,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, hide = true)]
    inject_mutation: Option<MutationArg>,
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Io(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type CmdResult = std::result::Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::SolveKg(a) => cmd_solve(a, false),
        Command::SolveDirac(a) => cmd_solve(a, true),
        Command::Dispersion(a) => cmd_dispersion(a),
        Command::Opcalc(a) => cmd_opcalc(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}

fn require_dim(dim: usize) -> std::result::Result<(), Failure> {
    if dim == 0 {
        return Err(Failure::Usage("--dim must be at least 1".into()));
    }
    Ok(())
}

/// Writes through a temporary file in the destination directory, then renames.
fn write_atomic(
    path: &Path,
    fill: impl FnOnce(&mut dyn Write) -> discrete_clifford::Result<()>,
) -> std::result::Result<(), Failure> {
    let io_err = |e: io::Error| Failure::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io_err)?;
    {
        let mut w = io::BufWriter::new(tmp.as_file_mut());
        fill(&mut w).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        w.flush().map_err(io_err)?;
    }
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

fn write_text(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    write_atomic(path, |w| {
        w.write_all(text.as_bytes())
            .map_err(|e| Error::Io(e.to_string()))
    })
}

fn summarize(report: &VerificationReport) {
    use discrete_clifford::report::Status;
    eprintln!(
        "{}: {} pass, {} fail, {} report-only",
        report.suite,
        report.count(Status::Pass),
        report.count(Status::Fail),
        report.count(Status::ReportOnly)
    );
    for c in report.failures() {
        eprintln!("FAIL {} residual {:e}", c.id, c.max_residual);
    }
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    require_dim(a.dim)?;
    if a.algebra_dim == 0 {
        return Err(Failure::Usage("--algebra-dim must be at least 1".into()));
    }
    if a.h.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
        return Err(Failure::Usage("--h values must be positive".into()));
    }
    let mut cfg = VerifyConfig {
        max_dim: a.dim,
        algebra_max_dim: a.algebra_dim,
        h_values: a.h,
        masses: a.mass,
        seed: a.seed,
        mutation: a.inject_mutation.map(|m| match m {
            MutationArg::LeibnizNoInvolution => Mutation::LeibnizNoInvolution,
            MutationArg::LaplacianHalf => Mutation::LaplacianHalf,
        }),
        ..VerifyConfig::default()
    };
    if !a.suite.is_empty() {
        cfg.suites = a.suite.into_iter().map(Suite::from).collect();
    }
    if let Some(t) = a.trials {
        cfg = cfg.with_trials(t);
    }
    let report = verify::run(&cfg)?;
    write_text(&a.report, &report.to_json())?;
    summarize(&report);
    Ok(report.all_pass())
}

fn parse_range(text: &str) -> std::result::Result<(i64, i64), Failure> {
    let bad = || Failure::Usage(format!("bad box range `{text}`, expected lo:hi"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    Ok((
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    ))
}

fn parse_box(dim: usize, h: f64, bounds: &[String]) -> std::result::Result<LatticeBox, Failure> {
    let ranges = bounds
        .iter()
        .map(|b| parse_range(b))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let ranges = match ranges.len() {
        1 => vec![ranges[0]; dim],
        k if k == dim => ranges,
        k => {
            return Err(Failure::Usage(format!(
                "--box has {k} ranges for dimension {dim}"
            )))
        }
    };
    let (lo, hi): (Vec<i64>, Vec<i64>) = ranges.into_iter().unzip();
    Ok(LatticeBox::new(h, lo, hi, BoundaryMode::Shrinking)?)
}

fn stem_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "field".into());
    let ext = out
        .extension()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    out.with_file_name(format!("{stem}.{suffix}.{ext}"))
}

fn cmd_solve(a: SolveArgs, dirac: bool) -> CmdResult {
    require_dim(a.dim)?;
    if !(a.h > 0.0 && a.h.is_finite()) {
        return Err(Failure::Usage("--h must be positive".into()));
    }
    let bx = parse_box(a.dim, a.h, &a.bounds)?;
    let amplitude = Multivector::parse_blade_list(Signature::field_algebra(a.dim)?, &a.amplitude)?;
    let sem = match a.semantics {
        SemanticsArg::S1 => Semantics::Pointwise,
        SemanticsArg::S2 => Semantics::Module,
    };
    let mass_term = match a.mass_term {
        MassTermArg::Chi => MassTerm::Chi,
        MassTermArg::K => MassTerm::K,
    };
    let convention = match a.convention {
        ConventionArg::Static => Convention::Static,
        ConventionArg::Shifted => Convention::Shifted,
    };
    let config = json!({
        "command": if dirac { "solve-dirac" } else { "solve-kg" },
        "dim": a.dim, "h": a.h, "mass": a.mass,
        "box": [bx.lo(), bx.hi()],
        "amplitude": a.amplitude,
    });

    let mut report;
    if dirac {
        let sol = build_dirac_solutions(a.h, a.mass, &amplitude, &bx, sem, mass_term, convention)?;
        let plus = stem_path(&a.out, "plus");
        let minus = stem_path(&a.out, "minus");
        write_atomic(&plus, |w| write_csv(&sol.f_plus.field, w))?;
        write_atomic(&minus, |w| write_csv(&sol.f_minus.field, w))?;
        report = VerificationReport::new("solve-dirac", config);
        let r = &sol.report;
        let mass_anchor = |claim: &str| Anchor::new("massive Dirac equation", claim);
        let tag = |c: Check| {
            c.semantics(sem)
                .mass_term(mass_term)
                .convention(convention)
                .dim(a.dim)
                .mesh(a.h)
                .mass(a.mass)
                .on_box(bx.lo(), bx.hi())
        };
        // Only the involution mass term under pointwise composition is asserted.
        let asserted = sem == Semantics::Pointwise && mass_term == MassTerm::K;
        let graded = |id: &str, anchor: Anchor, residual: f64| {
            tag(if asserted {
                Check::pass_class(id, anchor, residual, 1e-9)
            } else {
                Check::report_only(id, anchor, residual)
            })
        };
        report.checks.push(tag(Check::pass_class(
            "solve.seed-kg",
            Anchor::new("Chebyshev polynomials", "Δ_h g = m² g"),
            r.seed_kg,
            1e-9,
        )));
        report.checks.push(graded(
            "solve.kernel-transport",
            mass_anchor("(D_h − mX)(D_h − mX) g = 0"),
            r.kernel_transport,
        ));
        report.checks.push(graded(
            "solve.cross-coupled",
            mass_anchor("D_h f₊ = −m f₋, D_h f₋ = m f₊"),
            r.cross_coupled.max(),
        ));
        report.checks.push(tag(Check::report_only(
            "solve.coupled",
            mass_anchor("D_h f₊ = m f₊, D_h f₋ = −m f₋"),
            r.coupled.max(),
        )));
    } else {
        let weights = if a.weights.is_empty() {
            vec![1.0 / a.dim as f64; a.dim]
        } else {
            a.weights.clone()
        };
        if weights.len() != a.dim {
            return Err(Failure::Usage(format!(
                "--weights has {} entries for dimension {}",
                weights.len(),
                a.dim
            )));
        }
        let sol = build_kg_solution(a.h, a.mass, &weights, &amplitude, &bx)?;
        write_atomic(&a.out, |w| write_csv(&sol.field, w))?;
        let (_, residual) = kg_residual(&sol.field, a.mass)?;
        report = VerificationReport::new("solve-kg", config);
        report.checks.push(
            Check::pass_class(
                "solve.kg-residual",
                Anchor::new("Chebyshev polynomials", "Δ_h g = m² g"),
                residual,
                1e-9,
            )
            .dim(a.dim)
            .mesh(a.h)
            .mass(a.mass)
            .on_box(bx.lo(), bx.hi()),
        );
    }
    if let Some(path) = &a.report {
        write_text(path, &report.to_json())?;
    }
    summarize(&report);
    Ok(report.all_pass())
}

fn cmd_dispersion(a: DispersionArgs) -> CmdResult {
    require_dim(a.dim)?;
    if !(a.h > 0.0 && a.h.is_finite()) {
        return Err(Failure::Usage("--h must be positive".into()));
    }
    let grid = BrillouinGrid::new(a.dim, a.h, a.grid)?;
    let op = match a.operator {
        OperatorArg::Central => SymbolOperator::Central,
        OperatorArg::Dh => SymbolOperator::Dh,
        OperatorArg::Kg => SymbolOperator::Kg { m: a.mass },
    };
    if let Some(out) = &a.out {
        write_atomic(out, |w| write_curve_csv(&grid, op, w))?;
    }
    if a.zeros {
        let scan = zero_scan(&grid, op)?;
        let text = serde_json::to_string_pretty(&scan).expect("zero scan serializes");
        println!("{text}");
    }
    Ok(true)
}

fn cmd_opcalc(a: OpcalcArgs) -> CmdResult {
    require_dim(a.dim)?;
    let mutated = a.inject_mutation;
    let checks: Vec<(String, IdentityCheck)> = match a.check {
        IdentityArg::Leibniz => Dir::ALL
            .iter()
            .map(|&d| {
                let c = match mutated {
                    Some(MutationArg::LeibnizNoInvolution) => {
                        check_leibniz_without_involution(a.dim, d)
                    }
                    _ => check_leibniz(a.dim, d),
                };
                (format!("leibniz{}", d.symbol()), c)
            })
            .collect(),
        IdentityArg::Nilpotent => Dir::ALL
            .iter()
            .map(|&d| {
                (
                    format!("nilpotent{}", d.symbol()),
                    check_nilpotent(a.dim, d),
                )
            })
            .collect(),
        IdentityArg::Laplacian => {
            let c = match mutated {
                Some(MutationArg::LaplacianHalf) => check_laplacian_half(a.dim),
                _ => check_laplacian_factorization(a.dim),
            };
            vec![("laplacian".to_string(), c)]
        }
    };
    let mut report = VerificationReport::new("opcalc", json!({ "dim": a.dim }));
    for (name, c) in &checks {
        let verdict = if c.holds { "equal" } else { "not equal" };
        println!("{name} n={}: {verdict}", a.dim);
        if !c.holds {
            println!("lhs:\n{}\nrhs:\n{}", c.lhs, c.rhs);
        }
        report.checks.push(
            Check::verdict(
                format!("opcalc.{name}"),
                Anchor::new("operator calculus", name),
                c.holds,
            )
            .dim(a.dim)
            .detail(verdict),
        );
    }
    if let Some(path) = &a.report {
        write_text(path, &report.to_json())?;
    }
    Ok(report.all_pass())
}
