//! `qgraph` command line front end. Every subcommand reads a graph file and
//! writes a CSV table with a one-line header.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::forest::{
    detect_shift_polynomial, enumerate_odd_saturated_forests, enumerate_saturated_forests,
    exact_incidence_determinant, forest_expansion, monomial_analysis,
};
use crate::graph::Parity;
use crate::input::{load_graph, QuantumGraph};
use crate::matrix::{assemble_regular, assemble_scaled};
use crate::spectrum::{
    cluster_analysis, cluster_half_width, cluster_window, scan_spectrum, sigma_min,
    smallest_eigenvalue, ScanOptions,
};
use crate::transfer::cluster_center;

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "QGRAPH_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "qgraph",
    version,
    about = "Spectral experiments on equilateral quantum graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues with multiplicities in a λ range.
    Spectrum {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        lambda_min: f64,
        #[arg(long, default_value_t = 100.0, allow_negative_numbers = true)]
        lambda_max: f64,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Regular determinant and relative smallest singular value on a uniform λ grid.
    DetScan {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        lambda_min: f64,
        #[arg(long, default_value_t = 100.0, allow_negative_numbers = true)]
        lambda_max: f64,
        /// Number of grid points.
        #[arg(long, default_value_t = 1001)]
        points: usize,
    },
    /// Odd saturated forests with component count and exact incidence determinant.
    Forests {
        #[command(flatten)]
        io: IoArgs,
        /// Also list saturated forests containing an even cycle.
        #[arg(long)]
        all: bool,
    },
    /// Compare det M with the forest expansion at λ_k = (2k+1)²π² + d.
    VerifyExpansion {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        d: f64,
        #[arg(long, default_value_t = 10)]
        k_min: u32,
        #[arg(long, default_value_t = 100)]
        k_max: u32,
        #[arg(long, default_value_t = 10)]
        k_step: u32,
    },
    /// Eigenvalue clusters near (2k+1)²π² with shifts and shift-polynomial roots.
    Clusters {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, default_value_t = 0)]
        k_min: u32,
        #[arg(long, default_value_t = 5)]
        k_max: u32,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Check the zero-potential spectral hypotheses on a bouquet of odd cycles.
    AmbarzumianCheck {
        #[command(flatten)]
        io: IoArgs,
        /// Cluster index at which shifts are measured.
        #[arg(long, default_value_t = 50)]
        k_max: u32,
        /// Largest |λ_min| accepted as zero.
        #[arg(long, default_value_t = 1e-8)]
        zero_tol: f64,
        /// Largest |shift| accepted as vanishing at k_max.
        #[arg(long, default_value_t = 0.02)]
        shift_tol: f64,
        /// Relative tolerance for lower-order coefficients of p(d).
        #[arg(long, default_value_t = 1e-9)]
        monomial_tol: f64,
        #[command(flatten)]
        scan: ScanArgs,
    },
}

#[derive(Debug, Args)]
struct IoArgs {
    /// Graph description (JSON).
    #[arg(long)]
    graph: PathBuf,
    /// Write the table here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// Grid step in √λ.
    #[arg(long, default_value_t = 0.05)]
    step: f64,
    /// Largest grid step in λ.
    #[arg(long, default_value_t = 0.25)]
    max_lambda_step: f64,
    /// Relative bracket width at which refinement stops.
    #[arg(long, default_value_t = 1e-13)]
    refine_tol: f64,
    /// Relative singular-value threshold for nullity.
    #[arg(long, default_value_t = 1e-7)]
    null_tol: f64,
}

impl ScanArgs {
    fn options(&self) -> Result<ScanOptions> {
        let o = ScanOptions {
            sqrt_step: self.step,
            max_lambda_step: self.max_lambda_step,
            refine_tol: self.refine_tol,
            null_tol: self.null_tol,
        };
        o.validate()?;
        Ok(o)
    }
}

/// Format with 15 significant digits, `%.15g` style.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..15).contains(&exp) {
        trim(&format!("{:.*}", (14 - exp) as usize, x))
    } else {
        format!("{}e{}", trim(mantissa), exp)
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::EnumerationGuard { .. } => 2,
        _ => 1,
    }
}

/// Run the tool on `argv` (program name first). Returns the process exit code:
/// 0 on success, 1 on validation errors, 2 when the enumeration guard trips.
pub fn run_command<S: AsRef<str>>(argv: &[S], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv.iter().map(|s| s.as_ref())) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let (table, dest) = match execute(&cli.command) {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let written = match dest {
        Some(path) => std::fs::write(path, table.as_bytes()),
        None => out.write_all(table.as_bytes()),
    };
    match written {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

/// Apply [`THREADS_ENV`] to the global worker pool, if set.
pub fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n = v.parse::<usize>().ok().filter(|&n| n > 0).ok_or_else(|| {
            Error::InvalidOption(format!("{THREADS_ENV} must be a positive integer"))
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidOption(e.to_string()))?;
    }
    Ok(())
}

fn execute(cmd: &Command) -> Result<(String, Option<&PathBuf>)> {
    let mut t = String::new();
    let io = match cmd {
        Command::Spectrum {
            io,
            lambda_min,
            lambda_max,
            scan,
        } => {
            let qg = load_graph(&io.graph)?;
            let report = scan_spectrum(&qg, *lambda_min, *lambda_max, &scan.options()?)?;
            t.push_str("index,lambda,multiplicity\n");
            for (i, e) in report.eigenvalues.iter().enumerate() {
                writeln!(t, "{i},{},{}", fmt_num(e.lambda), e.multiplicity).unwrap();
            }
            io
        }
        Command::DetScan {
            io,
            lambda_min,
            lambda_max,
            points,
        } => {
            if *points < 2 || !(lambda_min < lambda_max) {
                return Err(Error::InvalidOption(
                    "need points >= 2 and lambda-min < lambda-max".into(),
                ));
            }
            let qg = load_graph(&io.graph)?;
            t.push_str("lambda,det_regular,sigma_min\n");
            let n = points - 1;
            for i in 0..=n {
                let x = lambda_min + (lambda_max - lambda_min) * i as f64 / n as f64;
                let det = assemble_regular(&qg, x).determinant();
                writeln!(
                    t,
                    "{},{},{}",
                    fmt_num(x),
                    fmt_num(det),
                    fmt_num(sigma_min(&qg, x))
                )
                .unwrap();
            }
            io
        }
        Command::Forests { io, all } => {
            let qg = load_graph(&io.graph)?;
            let g = qg.graph();
            let forests = if *all {
                enumerate_saturated_forests(g)?
            } else {
                enumerate_odd_saturated_forests(g)?
            };
            t.push_str("index,edges,kappa,parity,incidence_det\n");
            for (i, f) in forests.iter().enumerate() {
                let ids: Vec<&str> = f.edges.iter().map(|&j| g.edges()[j].id.as_str()).collect();
                let parity = if f.parities.contains(&Parity::Even) {
                    "even"
                } else {
                    "odd"
                };
                writeln!(
                    t,
                    "{i},{},{},{parity},{}",
                    ids.join(";"),
                    f.components,
                    exact_incidence_determinant(g, f)
                )
                .unwrap();
            }
            io
        }
        Command::VerifyExpansion {
            io,
            d,
            k_min,
            k_max,
            k_step,
        } => {
            if *k_step == 0 || k_min > k_max {
                return Err(Error::InvalidOption(
                    "need k-step > 0 and k-min <= k-max".into(),
                ));
            }
            let qg = load_graph(&io.graph)?;
            let power = (qg.graph().excess() + 1) as f64 / 2.0;
            t.push_str("k,lambda,det_m,expansion,scaled_error\n");
            for k in (*k_min..=*k_max).step_by(*k_step as usize) {
                let lambda = cluster_center(k) + d;
                let det = assemble_scaled(&qg, lambda)?.determinant();
                let approx = forest_expansion(&qg, lambda)?;
                let err = (det - approx).abs() * lambda.powf(power);
                writeln!(
                    t,
                    "{k},{},{},{},{}",
                    fmt_num(lambda),
                    fmt_num(det),
                    fmt_num(approx),
                    fmt_num(err)
                )
                .unwrap();
            }
            io
        }
        Command::Clusters {
            io,
            k_min,
            k_max,
            scan,
        } => {
            if k_min > k_max {
                return Err(Error::InvalidOption("need k-min <= k-max".into()));
            }
            let qg = load_graph(&io.graph)?;
            clusters_table(&qg, *k_min, *k_max, &scan.options()?, &mut t)?;
            io
        }
        Command::AmbarzumianCheck {
            io,
            k_max,
            zero_tol,
            shift_tol,
            monomial_tol,
            scan,
        } => {
            let qg = load_graph(&io.graph)?;
            let opts = scan.options()?;
            ambarzumian_table(
                &qg,
                *k_max,
                *zero_tol,
                *shift_tol,
                *monomial_tol,
                &opts,
                &mut t,
            )?;
            io
        }
    };
    Ok((t, io.output.as_ref()))
}

fn clusters_table(
    qg: &QuantumGraph,
    k_min: u32,
    k_max: u32,
    opts: &ScanOptions,
    t: &mut String,
) -> Result<()> {
    let w = cluster_half_width(qg.graph());
    let roots = detect_shift_polynomial(qg).ok().map(|p| p.real_roots());
    let records: Vec<_> = (k_min..=k_max)
        .map(|k| {
            let (lo, hi) = cluster_window(k, w);
            let report = scan_spectrum(qg, lo, hi, opts)?;
            Ok(cluster_analysis(&report, k, k, w)?.remove(0))
        })
        .collect::<Result<_>>()?;
    t.push_str("k,lambda,multiplicity,shift,nearest_root,gap,total_multiplicity\n");
    for rec in records {
        if rec.members.is_empty() {
            writeln!(t, "{},,0,,,,{}", rec.k, rec.total_multiplicity).unwrap();
        }
        for m in &rec.members {
            let nearest = roots.as_ref().and_then(|r| {
                r.iter()
                    .copied()
                    .min_by(|a, b| (a - m.shift).abs().total_cmp(&(b - m.shift).abs()))
            });
            let (root, gap) = match nearest {
                Some(r) => (fmt_num(r), fmt_num((m.shift - r).abs())),
                None => (String::new(), String::new()),
            };
            writeln!(
                t,
                "{},{},{},{},{root},{gap},{}",
                rec.k,
                fmt_num(m.lambda),
                m.multiplicity,
                fmt_num(m.shift),
                rec.total_multiplicity
            )
            .unwrap();
        }
    }
    Ok(())
}

fn ambarzumian_table(
    qg: &QuantumGraph,
    k: u32,
    zero_tol: f64,
    shift_tol: f64,
    monomial_tol: f64,
    opts: &ScanOptions,
    t: &mut String,
) -> Result<()> {
    let poly = detect_shift_polynomial(qg)?;
    let r = poly.cycle_lengths.len();
    if r < 2 || poly.cycle_lengths.iter().any(|n| n % 2 == 0) {
        return Err(Error::InvalidOption(
            "ambarzumian-check needs a bouquet of at least two odd cycles".into(),
        ));
    }
    let analysis = monomial_analysis(&poly, monomial_tol);
    let lambda_min = smallest_eigenvalue(qg, opts)?;
    let w = cluster_half_width(qg.graph());
    let (lo, hi) = cluster_window(k, w);
    let cluster = cluster_analysis(&scan_spectrum(qg, lo, hi, opts)?, k, k, w)?.remove(0);
    let shifts = cluster.shifts();
    let max_shift = shifts.iter().map(|s| s.abs()).fold(0.0, f64::max);

    let mut violations = Vec::new();
    if lambda_min.abs() > zero_tol {
        violations.push("λ_min ≠ 0");
    }
    if cluster.total_multiplicity != r - 1 {
        violations.push("cluster multiplicity ≠ r−1");
    }
    if max_shift > shift_tol {
        violations.push("cluster shifts do not vanish");
    }
    let verdict = if violations.is_empty() {
        "consistent with q = 0 hypotheses".to_string()
    } else {
        format!("spectrum hypothesis violated: {}", violations.join("; "))
    };

    let join = |v: &[f64]| v.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(";");
    let lengths: Vec<String> = poly.cycle_lengths.iter().map(|n| n.to_string()).collect();
    t.push_str("quantity,value\n");
    let rows: [(&str, String); 11] = [
        ("cycle_lengths", lengths.join(";")),
        ("p_coefficients", join(&poly.coefficients)),
        ("p_monomial", analysis.is_monomial.to_string()),
        ("cycle_means", join(&analysis.means)),
        ("total_integral", fmt_num(analysis.total_integral)),
        ("smallest_eigenvalue", fmt_num(lambda_min)),
        ("cluster_k", k.to_string()),
        (
            "cluster_total_multiplicity",
            cluster.total_multiplicity.to_string(),
        ),
        ("cluster_shifts", join(&shifts)),
        ("max_abs_shift", fmt_num(max_shift)),
        ("verdict", verdict),
    ];
    for (key, value) in rows {
        writeln!(t, "{key},{value}").unwrap();
    }
    Ok(())
}
