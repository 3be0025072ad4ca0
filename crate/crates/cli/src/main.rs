use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ellipsoid_cli::report::ReportJson;
use ellipsoid_cli::scan::{self, OutputFormat, ScanConfig};
use ellipsoid_core::equilibria::state;
use ellipsoid_core::stability::{find_e0_with_tol, stability_report, ClosedForms};
use ellipsoid_core::verify::{self, Suite, VerifyOptions};
use ellipsoid_core::{Family, PhysicalParams, Vec3};

/// Symmetric equilibria of a self-gravitating fluid ellipsoid and their stability.
#[derive(Debug, Parser)]
#[command(name = "ellipsoid", version)]
struct Cli {
    /// Density ρ.
    #[arg(long, global = true, env = "ELLIPSOID_RHO", default_value_t = 1.0, allow_negative_numbers = true)]
    rho: f64,
    /// Gravitational constant G.
    #[arg(long, global = true, env = "ELLIPSOID_GRAV", default_value_t = 1.0, allow_negative_numbers = true)]
    grav: f64,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve for the equilibrium of a family at eccentricity e.
    Family {
        /// spherical, maclaurin, transversal+ or transversal-.
        family: Family,
        /// Eccentricity; ignored for the sphere.
        #[arg(long, allow_negative_numbers = true)]
        e: Option<f64>,
    },
    /// Energy-momentum stability report.
    Stability {
        family: Family,
        #[arg(long, allow_negative_numbers = true)]
        e: Option<f64>,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Tabulate the stability functions over an eccentricity grid.
    Scan {
        family: Family,
        #[arg(long, allow_negative_numbers = true)]
        e_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        e_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        /// Output file; stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Locate the critical MacLaurin eccentricity e0.
    FindE0 {
        /// Bracket width at which the root search stops.
        #[arg(long, default_value_t = 1e-15, allow_negative_numbers = true)]
        tol: f64,
    },
    /// Run the oracle suites.
    Verify {
        /// Run a single suite: numerics, potential, inertia, equilibria or stability.
        #[arg(long)]
        only: Option<Suite>,
        /// Relative perturbation of every oracle value; a nonzero value must fail.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        perturb: f64,
    },
}

enum Failure {
    Verify,
    Domain(String),
    Io(String),
}

impl From<ellipsoid_core::Error> for Failure {
    fn from(e: ellipsoid_core::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let res = PhysicalParams::new(cli.rho, cli.grav).map_err(Failure::from).and_then(|p| run(cli.cmd, &p, &mut out));
    print!("{out}");
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn need_e(family: Family, e: Option<f64>) -> Result<f64, Failure> {
    match (family, e) {
        (Family::Spherical, _) => Ok(0.0),
        (_, Some(e)) => Ok(e),
        (_, None) => Err(Failure::Domain(format!("--e is required for the {} family", family.name()))),
    }
}

/// Prints `-0` as `0`.
fn v3(v: Vec3) -> String {
    format!("[{:?}, {:?}, {:?}]", v[0] + 0.0, v[1] + 0.0, v[2] + 0.0)
}

fn run(cmd: Command, p: &PhysicalParams, out: &mut String) -> Result<(), Failure> {
    match cmd {
        Command::Family { family, e } => {
            let st = state(family, need_e(family, e)?, p)?;
            let f = st.config();
            let _ = writeln!(out, "family: {}", family.name());
            let _ = writeln!(out, "e = {:?}", st.ecc());
            let _ = writeln!(out, "axes: a = {:?}, b = {:?}, c = {:?}", f.0[0][0], f.0[1][1], f.0[2][2]);
            match family {
                Family::Spherical => {}
                Family::MacLaurin => {
                    let _ = writeln!(out, "Omega^2/(pi rho G) = {:?}", st.omega2_over_pi_rho_g);
                    let _ = writeln!(out, "Omega = {:?}", st.omega);
                }
                _ => {
                    let _ = writeln!(out, "omega^2/(pi rho G) = {:?}", st.omega2_over_pi_rho_g);
                    let _ = writeln!(out, "omega = {:?}", st.omega);
                    let _ = writeln!(out, "f = {:?}", st.f_ratio.unwrap_or(f64::NAN));
                }
            }
            let _ = writeln!(out, "xi = ({}, {})", v3(st.xi.xi_l), v3(st.xi.xi_r));
            let _ = writeln!(out, "lambda = {:?}", st.lambda);
            let _ = writeln!(out, "mu = ({}, {})", v3(st.mu.j), v3(st.mu.c));
            let _ = writeln!(
                out,
                "isotropy: G_F = {}, G_mu = {}, G_(F,xi) = {}",
                st.isotropy.g_f, st.isotropy.g_mu, st.isotropy.g_pf
            );
            let _ = writeln!(out, "residual/R = {:e}", st.residual_over_r());
        }
        Command::Stability { family, e, json } => {
            let rep = stability_report(family, need_e(family, e)?, p)?;
            if json {
                let doc = ReportJson::from_report(&rep)?;
                out.push_str(&serde_json::to_string_pretty(&doc).map_err(|e| Failure::Domain(e.to_string()))?);
                out.push('\n');
                return Ok(());
            }
            let r = p.r();
            let _ = writeln!(out, "family: {}", family.name());
            let _ = writeln!(out, "e = {:?}", rep.e);
            let _ = writeln!(out, "verdict: {}", rep.verdict.name());
            match rep.closed {
                ClosedForms::None => {}
                ClosedForms::MacLaurin { s1, s2 } => {
                    let _ = writeln!(out, "S1/R = {:?}", s1 / r);
                    let _ = writeln!(out, "S2/R = {:?}", s2 / r);
                }
                ClosedForms::Transversal { phi, tr_u, det_u, .. } => {
                    let _ = writeln!(out, "phi/R = {:?}", phi / r);
                    let _ = writeln!(out, "trU/R = {:?}", tr_u / r);
                    let _ = writeln!(out, "detU/R^2 = {:?}", det_u / (r * r));
                }
            }
            let list = |v: &[f64]| v.iter().map(|x| format!("{:?}", x / r)).collect::<Vec<_>>().join(", ");
            let _ = writeln!(out, "Arnold form eigenvalues / R: [{}]", list(&rep.arnold_eigenvalues));
            let _ = writeln!(out, "restricted Hessian eigenvalues / R: [{}]", list(&rep.hessian_eigenvalues));
            let _ = writeln!(out, "definiteness margin = {:e}", rep.definiteness_margin);
            if let Some(lh) = &rep.lh_eigenvalues {
                let w = p.pi_rho_g().sqrt();
                let zs: Vec<String> = lh.iter().map(|z| format!("{:?}{:+?}i", z.re / w, z.im / w)).collect();
                let _ = writeln!(out, "linearized eigenvalues / sqrt(pi rho G): [{}]", zs.join(", "));
            }
        }
        Command::Scan { family, e_min, e_max, steps, format, output } => {
            let cfg = ScanConfig { family, e_min, e_max, steps, format };
            let text = scan::render(&scan::run(&cfg, p)?, format);
            match output {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?,
                None => out.push_str(&text),
            }
        }
        Command::FindE0 { tol } => {
            let r = find_e0_with_tol(p, tol)?;
            let _ = writeln!(out, "e0 = {:.6}", r.e0);
            let _ = writeln!(out, "c/a = {:.6}", r.axis_ratio);
            // Spheroids flatter than this bound are unstable.
            let _ = writeln!(out, "c/a rounded up = {:.6}", (r.axis_ratio * 1e6).ceil() / 1e6);
            let _ = writeln!(out, "e0 (full precision) = {:?}", r.e0);
            let _ = writeln!(out, "c/a (full precision) = {:?}", r.axis_ratio);
            let _ = writeln!(out, "bracket width = {:e}", r.bracket_width);
            let _ = writeln!(out, "iterations = {}", r.iterations);
        }
        Command::Verify { only, perturb } => {
            let opts = VerifyOptions { only, perturbation: perturb, params: *p };
            let t = std::time::Instant::now();
            let rep = verify::run(&opts);
            let w = rep.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
            for c in &rep.checks {
                let pad = w - c.name.chars().count();
                let _ = writeln!(
                    out,
                    "{:<10} {}{} {:>10.2e} {:>9.1e}  {}",
                    c.suite.name(),
                    c.name,
                    " ".repeat(pad),
                    c.error,
                    c.tolerance,
                    if c.passed() { "PASS" } else { "FAIL" }
                );
            }
            let failed = rep.failures().count();
            let _ = writeln!(out, "{} checks, {} failed, {:.2} s", rep.checks.len(), failed, t.elapsed().as_secs_f64());
            if failed > 0 {
                return Err(Failure::Verify);
            }
        }
    }
    Ok(())
}
