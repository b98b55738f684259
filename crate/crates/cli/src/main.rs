mod job;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dcsa_core::diffmod::{gauge_transform, transport, DiffModule};
use dcsa_core::galois::{classify, tower_description};
use dcsa_core::hypersolve::{fundamental_matrix, solve_diagonal};
use dcsa_core::ideals::{delta_stable_subspaces, flag_criterion, reductive_criterion};
use dcsa_core::{Dcsa, Error, Matrix, RatFunc, SplittingTower};
use serde_json::{json, Value};

use job::InputError;

#[derive(Parser)]
#[command(name = "dcsa", version, about = "Derivations on matrix algebras over Q(x): splitting, ideals, Galois shape")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// P as a JSON array of rows (or {"n":…,"P":…}), inline or a file path.
    #[arg(long = "P", value_name = "JSON|PATH")]
    p: String,
    /// JSON list of hyperexponential generators, e.g. '["(x)^(1/2)"]'.
    #[arg(long)]
    tower: Option<String>,
    /// Print a JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Connection matrix of the associated n²-dimensional module.
    AssociatedOde(Common),
    /// Fundamental matrix of the associated module (or of δY = P·Y with --column).
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        column: bool,
    },
    /// Constants of the derivation over the splitting tower or --tower.
    Constants(Common),
    /// Verify a split certificate Z, or search for one.
    SplitCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long = "Z", value_name = "JSON|PATH")]
        z: Option<String>,
    },
    /// Gauge-transform δY = P·Y by m; with --Z, transport a fundamental matrix.
    GaugeCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long = "m", value_name = "JSON|PATH")]
        m: String,
        #[arg(long = "Z", value_name = "JSON|PATH")]
        z: Option<String>,
    },
    /// Stable subspaces, reductive verdict and flag of δ-right ideals.
    Ideals(Common),
    /// Group descriptor of the associated diagonal, or of the --tower generators.
    Classify(Common),
    /// P_m on the m-th tensor power of the column module.
    TensorPower {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        power: usize,
    },
}

#[derive(Debug, thiserror::Error)]
enum RunError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Math(#[from] Error),
}

impl RunError {
    fn exit_code(&self) -> u8 {
        let e = match self {
            RunError::Math(e) | RunError::Input(InputError::Math { source: e, .. }) => e,
            RunError::Input(_) => return 1,
        };
        match e {
            Error::UnsupportedClass(_) | Error::NonSplitDenominator(_) | Error::NotInClass(_) | Error::SizeLimit { .. } => 2,
            _ => 1,
        }
    }
}

/// A finished analysis: JSON for `--json`, text otherwise.
struct Report {
    json: Value,
    text: String,
}

fn strings(m: &Matrix<impl ToString + dcsa_core::Ring>) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

fn show(m: &Matrix<impl ToString + dcsa_core::Ring>) -> String {
    strings(m).iter().map(|r| format!("  [{}]", r.join(", "))).collect::<Vec<_>>().join("\n")
}

fn tower_or(common: &Common, alg: &Dcsa) -> Result<SplittingTower, RunError> {
    match &common.tower {
        Some(t) => Ok(job::read_tower(t)?),
        None => Ok(alg.splitting_tower()?),
    }
}

fn associated_ode(alg: &Dcsa) -> Report {
    let conn = alg.associated_module().conn().clone();
    Report {
        text: format!("associated connection ({0}×{0}, basis E_kl row-major):\n{1}", conn.rows(), show(&conn)),
        json: json!({ "n": alg.n(), "connection": strings(&conn) }),
    }
}

fn solve(alg: &Dcsa, column: bool) -> Result<Report, RunError> {
    let module = if column { alg.column_module() } else { alg.associated_module() };
    let conn = module.conn();
    let (z, tower) = if conn.is_diagonal() {
        let sol = solve_diagonal(conn)?;
        (sol.fundamental, sol.tower)
    } else {
        fundamental_matrix(conn)?
            .ok_or_else(|| Error::NotInClass("no fundamental matrix with hyperexponential entries".into()))?
    };
    let report = module.verify_fundamental(&z);
    Ok(Report {
        text: format!(
            "module: {}\ntower: {tower}\nfundamental matrix:\n{}\ndeterminant: {}\nverified: {}",
            if column { "column" } else { "associated" },
            show(&z),
            report.determinant,
            report.passed
        ),
        json: json!({
            "module": if column { "column" } else { "associated" },
            "tower": tower,
            "fundamental": strings(&z),
            "determinant": report.determinant,
            "verified": report.passed,
        }),
    })
}

fn constants(alg: &Dcsa, common: &Common) -> Result<Report, RunError> {
    let tower = tower_or(common, alg)?;
    let triv = alg.triviality_check(&tower)?;
    let algebra = alg.constants_algebra(&tower)?;
    let closed = algebra.structure_constants().is_some();
    let basis: Vec<_> = algebra.basis().iter().map(strings).collect();
    let mut text = format!(
        "tower: {tower}\nconstants: dimension {} of {} ({})\nclosed under multiplication: {closed}\nrank over Q(x): {}",
        triv.dimension,
        triv.expected,
        if triv.trivial { "trivial" } else { "not trivial" },
        algebra.rank_over_base()
    );
    for (i, b) in algebra.basis().iter().enumerate() {
        text.push_str(&format!("\nB{}:\n{}", i + 1, show(b)));
    }
    Ok(Report {
        text,
        json: json!({
            "tower": tower,
            "trivial": triv.trivial,
            "dimension": triv.dimension,
            "expected": triv.expected,
            "closed": closed,
            "rank_over_base": algebra.rank_over_base(),
            "basis": basis,
        }),
    })
}

fn split_check(alg: &Dcsa, common: &Common, z: Option<&str>) -> Result<Report, RunError> {
    if let Some(z) = z {
        let z = job::read_tower_matrix(z, "--Z")?;
        let report = alg.split_check(&z);
        let mut text = format!("split certificate: {}\ndeterminant: {}", if report.passed { "passes" } else { "fails" }, report.determinant);
        for f in &report.failures {
            text.push_str(&format!("\nresidual at ({}, {}): {}", f.row + 1, f.col + 1, f.residual));
        }
        return Ok(Report { text, json: serde_json::to_value(&report).expect("report serializes") });
    }
    let tower = tower_or(common, alg)?;
    let twisted = alg.find_split_certificate(&tower)?;
    let untwisted = alg.gauge_to_zero_certificate(&tower)?;
    let mut text = format!("tower: {tower}");
    match &twisted {
        Some(z) => text.push_str(&format!("\ncertificate Z (δZ = P·Z up to a scalar factor):\n{}", show(z))),
        None => text.push_str("\nno split certificate over this tower"),
    }
    match &untwisted {
        Some(z) => text.push_str(&format!("\nsolution of δZ = P·Z:\n{}", show(z))),
        None => text.push_str("\nno solution of δZ = P·Z over this tower"),
    }
    Ok(Report {
        text,
        json: json!({
            "tower": tower,
            "certificate": twisted.as_ref().map(strings),
            "fundamental": untwisted.as_ref().map(strings),
        }),
    })
}

fn gauge_check(alg: &Dcsa, m: &str, z: Option<&str>) -> Result<Report, RunError> {
    let m = job::read_rational_matrix(m, "--m")?;
    let a = gauge_transform(alg.p(), &m)?;
    let mut text = format!("gauge-transformed connection m⁻¹Pm - m⁻¹δm:\n{}", show(&a));
    let mut out = json!({ "connection": strings(&a) });
    if let Some(z) = z {
        let k = job::read_tower_matrix(z, "--Z")?;
        let source = alg.column_module().verify_fundamental(&k);
        let moved = transport(&k, &m)?;
        let target = DiffModule::new(a)?.verify_fundamental(&moved);
        text.push_str(&format!(
            "\nZ solves δZ = P·Z: {}\ntransported m⁻¹Z:\n{}\ntransported matrix verified: {}",
            source.passed,
            show(&moved),
            target.passed
        ));
        out["input_verified"] = json!(source.passed);
        out["transported"] = json!(strings(&moved));
        out["transported_verified"] = json!(target.passed);
    }
    Ok(Report { text, json: out })
}

fn ideals(alg: &Dcsa) -> Result<Report, RunError> {
    let lattice = delta_stable_subspaces(alg.p())?;
    let verdict = reductive_criterion(alg)?;
    let flag = flag_criterion(alg)?;
    let mut text = format!(
        "stable subspaces of the column module: {} (dimensions {:?}){}",
        lattice.subspaces.len(),
        lattice.subspaces.iter().map(|s| s.dim()).collect::<Vec<_>>(),
        if lattice.exhaustive { "" } else { ", not exhaustive" }
    );
    if let Some(note) = &lattice.note {
        text.push_str(&format!("\nnote: {note}"));
    }
    text.push_str(&format!("\nreductive: {}", verdict.reductive));
    if verdict.reductive {
        let dims: Vec<usize> = verdict.decomposition.iter().map(|i| i.linear_dim()).collect();
        text.push_str(&format!("\ndecomposition into {} minimal δ-right ideals of dimensions {dims:?}", dims.len()));
    } else if let Some(w) = &verdict.witness {
        text.push_str(&format!("\nwitness: stable subspace of dimension {} with no stable complement", w.dim()));
    }
    match &flag {
        Some(chain) => text.push_str(&format!("\nflag of δ-right ideals with dimensions {:?}", chain.dims())),
        None => text.push_str("\nno full flag of δ-right ideals"),
    }
    Ok(Report {
        text,
        json: json!({
            "stable_subspaces": lattice,
            "reductive": verdict,
            "flag": flag,
        }),
    })
}

fn classify_report(alg: &Dcsa, common: &Common) -> Result<Report, RunError> {
    let (source, gens): (&str, Vec<RatFunc>) = match &common.tower {
        Some(t) => ("tower", job::read_tower(t)?.log_derivatives()),
        None => {
            let conn = alg.associated_module().conn().clone();
            if !conn.is_diagonal() {
                return Err(Error::UnsupportedClass("classify needs a diagonal P or an explicit --tower".into()).into());
            }
            ("associated", conn.diagonal_entries())
        }
    };
    let desc = tower_description(&gens)?;
    let group = classify(&gens)?;
    let finite = if group.invariant_factors.is_empty() {
        "trivial".to_string()
    } else {
        group.invariant_factors.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" x ")
    };
    Ok(Report {
        text: format!(
            "source: {source}\ntorus rank: {}\nfinite part: {finite} (order {})\ntranscendence degree: {}\nalgebraic degree: {}",
            group.torus_rank,
            group.finite_order(),
            desc.transcendence_degree,
            desc.algebraic_degree
        ),
        json: json!({
            "source": source,
            "group": group,
            "finite_order": group.finite_order(),
            "description": desc,
        }),
    })
}

fn tensor_power(alg: &Dcsa, power: usize) -> Result<Report, RunError> {
    let pm = alg.tensor_power(power)?;
    Ok(Report {
        text: format!("P_{power} ({0}×{0}):\n{1}", pm.n(), show(pm.p())),
        json: serde_json::to_value(&pm).expect("algebra serializes"),
    })
}

fn run(cli: &Cli) -> Result<(Report, bool), RunError> {
    let common = match &cli.command {
        Command::AssociatedOde(c) | Command::Constants(c) | Command::Ideals(c) | Command::Classify(c) => c,
        Command::Solve { common, .. }
        | Command::SplitCheck { common, .. }
        | Command::GaugeCheck { common, .. }
        | Command::TensorPower { common, .. } => common,
    };
    let alg = job::read_algebra(&common.p)?;
    let report = match &cli.command {
        Command::AssociatedOde(_) => associated_ode(&alg),
        Command::Solve { column, .. } => solve(&alg, *column)?,
        Command::Constants(c) => constants(&alg, c)?,
        Command::SplitCheck { common, z } => split_check(&alg, common, z.as_deref())?,
        Command::GaugeCheck { m, z, .. } => gauge_check(&alg, m, z.as_deref())?,
        Command::Ideals(_) => ideals(&alg)?,
        Command::Classify(c) => classify_report(&alg, c)?,
        Command::TensorPower { power, .. } => tensor_power(&alg, *power)?,
    };
    Ok((report, common.json))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, json)) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("report serializes"));
            } else {
                println!("{}", report.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("dcsa: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
