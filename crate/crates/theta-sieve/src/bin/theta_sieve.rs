//! Command-line front end: every capability of the library as a
//! subcommand emitting CSV or canonical JSON on stdout. Diagnostics and
//! optional run reports go to stderr. Exit codes: 0 success (for `member`,
//! membership holds), 1 non-member or failed verification, 2 usage errors.

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use std::process::ExitCode;
use std::time::Instant;
use theta_sieve::lambda::{g_minus, g_plus, LambdaContext, TABLE1_GRID};
use theta_sieve::report::{fmt_sig, RunReport};
use theta_sieve::theta::check_chain_compat;
use theta_sieve::{
    buchstab, chi_b, chi_d, count_b, count_d, density_estimate, enumerate_b, phi_count,
    solve_f, verify_identity, DensityEstimate, ExtendedReal, ThetaSpec,
};

#[derive(Parser)]
#[command(
    name = "theta-sieve",
    version,
    about = "Chained-set membership, counting, density and decay exponents"
)]
struct Cli {
    /// Significant digits for numeric output
    #[arg(long, global = true, default_value_t = 10)]
    digits: usize,
    /// Emit a replayable run report (JSON) on stderr
    #[arg(long, global = true)]
    report: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Membership test with witness on failure (exit 0 member, 1 not)
    Member {
        #[arg(long)]
        n: u64,
        /// Threshold spec: linear:T | sigma+1 | n+1 | 2^n | pow:C:A |
        /// exp:C:A | explog:C:A | inf | nsq+1:N | table:v1,v2,...
        #[arg(long)]
        theta: String,
        /// B = prime chain, D = divisor chain
        #[arg(long, default_value = "B", value_parser = ["B", "D"])]
        mode: String,
    },
    /// Exact member count up to x
    Count {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        theta: String,
        #[arg(long, default_value = "B", value_parser = ["B", "D"])]
        mode: String,
    },
    /// Stream members up to x, one integer per line
    Enumerate {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        theta: String,
    },
    /// Count of integers <= x free of prime factors <= y
    Phi {
        #[arg(long)]
        x: f64,
        /// A number >= 2, or "inf"
        #[arg(long)]
        y: String,
    },
    /// Certified natural-density enclosure for a supported family
    Density {
        #[arg(long)]
        theta: String,
        #[arg(long, default_value_t = 1e-3)]
        width: f64,
    },
    /// Decay exponent lambda_a with bounds and residual
    Lambda {
        #[arg(long)]
        a: f64,
    },
    /// CSV of lambda_a over the 22-row reference grid
    #[command(name = "lambda-table", alias = "table1")]
    LambdaTable,
    /// CSV of (a, lambda, l_a, u_a) over a in [1, 10] step 0.05
    Figure1,
    /// CSV dump of the Buchstab grid (u, omega, omega')
    Buchstab {
        /// Output sampling step
        #[arg(long, default_value_t = 0.01)]
        out_step: f64,
        #[arg(long, default_value_t = 25.0)]
        u_max: f64,
    },
    /// CSV of the Volterra solution F_a(z)
    Fa {
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 15.0)]
        zmax: f64,
        /// Marching step
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        /// Output sampling step
        #[arg(long, default_value_t = 0.01)]
        out_step: f64,
    },
    /// Counting ratios against log x with fitted slope
    Exponent {
        #[arg(long)]
        theta: String,
        /// Comma-separated x values, e.g. 1e4,1e5,1e6
        #[arg(long)]
        xs: String,
    },
    /// Property suites: identity | db | bounds | omega | zero-free
    Verify {
        suite: String,
        #[arg(long)]
        x: Option<f64>,
        #[arg(long)]
        theta: Option<String>,
        #[arg(long)]
        n_max: Option<u64>,
        /// Grid as lo:hi:step, e.g. 1:10:0.5
        #[arg(long)]
        a_grid: Option<String>,
    },
}

fn parse_theta(text: &str) -> Result<ThetaSpec, ExitCode> {
    match ThetaSpec::parse(text) {
        Ok(s) => Ok(s.normalize()),
        Err(e) => {
            eprintln!("error: {e}");
            Err(ExitCode::from(2))
        }
    }
}

fn main() -> ExitCode {
    theta_sieve::configure_threads();
    let cli = Cli::parse();
    let digits = cli.digits;
    let started = Instant::now();
    let sig = |v: f64| fmt_sig(v, digits);

    let (code, command, inputs, outputs): (ExitCode, &str, Value, Value) = match &cli.cmd {
        Cmd::Member { n, theta, mode } => {
            let spec = match parse_theta(theta) {
                Ok(s) => s,
                Err(c) => return c,
            };
            let res = if mode == "B" {
                chi_b(*n, &spec)
            } else {
                chi_d(*n, &spec)
            };
            let out = serde_json::to_value(&res).unwrap();
            let mut obj = json!({ "member": res.member, "n": n });
            if let Some(w) = out.get("witness") {
                obj["witness"] = w.clone();
            }
            println!("{obj}");
            (
                if res.member {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                },
                "member",
                json!({ "n": n, "theta": spec.canonical_text(), "mode": mode }),
                obj,
            )
        }
        Cmd::Count { x, theta, mode } => {
            let spec = match parse_theta(theta) {
                Ok(s) => s,
                Err(c) => return c,
            };
            let count = if mode == "B" {
                count_b(*x, &spec)
            } else {
                count_d(*x, &spec)
            };
            let obj = json!({ "count": count, "theta": spec.canonical_text(), "x": x });
            println!("{obj}");
            (
                ExitCode::SUCCESS,
                "count",
                json!({ "x": x, "theta": spec.canonical_text(), "mode": mode }),
                obj,
            )
        }
        Cmd::Enumerate { x, theta } => {
            let spec = match parse_theta(theta) {
                Ok(s) => s,
                Err(c) => return c,
            };
            use std::io::Write;
            let stdout = std::io::stdout();
            let mut out = std::io::BufWriter::new(stdout.lock());
            let mut count = 0u64;
            for n in enumerate_b(*x, &spec) {
                writeln!(out, "{n}").expect("stdout");
                count += 1;
            }
            out.flush().expect("stdout");
            (
                ExitCode::SUCCESS,
                "enumerate",
                json!({ "x": x, "theta": spec.canonical_text() }),
                json!({ "emitted": count }),
            )
        }
        Cmd::Phi { x, y } => {
            let yv = if y == "inf" {
                ExtendedReal::Infinity
            } else {
                match y.parse::<f64>() {
                    Ok(v) if v >= 2.0 => ExtendedReal::Finite(v),
                    _ => {
                        eprintln!("error: y must be a number >= 2 or 'inf'");
                        return ExitCode::from(2);
                    }
                }
            };
            let phi = phi_count(*x, yv);
            let obj = json!({ "phi": phi, "x": x, "y": y });
            println!("{obj}");
            (ExitCode::SUCCESS, "phi", json!({ "x": x, "y": y }), obj)
        }
        Cmd::Density { theta, width } => {
            let spec = match parse_theta(theta) {
                Ok(s) => s,
                Err(c) => return c,
            };
            match density_estimate(&spec, *width) {
                Ok(est) => {
                    let obj = density_json(&est, digits);
                    println!("{obj}");
                    (
                        ExitCode::SUCCESS,
                        "density",
                        json!({ "theta": spec.canonical_text(), "width": width }),
                        obj,
                    )
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
        }
        Cmd::Lambda { a } => match LambdaContext::shared().solve_lambda(*a) {
            Ok(r) => {
                let obj = json!({
                    "a": sig(r.a),
                    "l_a": sig(r.l_a),
                    "lambda": sig(r.lambda),
                    "residual": fmt_sig(r.residual, 3),
                    "u_a": sig(r.u_a),
                });
                println!("{obj}");
                (ExitCode::SUCCESS, "lambda", json!({ "a": a }), obj)
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
        Cmd::LambdaTable => {
            use rayon::prelude::*;
            let ctx = LambdaContext::shared();
            let rows: Vec<Result<(f64, f64), String>> = TABLE1_GRID
                .par_iter()
                .map(|&a| {
                    ctx.solve_lambda(a)
                        .map(|r| (a, r.lambda))
                        .map_err(|e| format!("a={a}: {e}"))
                })
                .collect();
            println!("a,lambda");
            for row in &rows {
                match row {
                    Ok((a, lam)) => println!("{},{}", a, sig(*lam)),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(1);
                    }
                }
            }
            (
                ExitCode::SUCCESS,
                "lambda-table",
                json!({}),
                json!({ "rows": rows.len() }),
            )
        }
        Cmd::Figure1 => {
            use rayon::prelude::*;
            let ctx = LambdaContext::shared();
            let grid: Vec<f64> = (0..=180).map(|k| 1.0 + 0.05 * k as f64).collect();
            let rows: Vec<Result<(f64, f64, f64, f64), String>> = grid
                .par_iter()
                .map(|&a| {
                    ctx.solve_lambda(a)
                        .map(|r| (a, r.lambda, r.l_a, r.u_a))
                        .map_err(|e| format!("a={a}: {e}"))
                })
                .collect();
            println!("a,lambda,l_a,u_a");
            for row in &rows {
                match row {
                    Ok((a, lam, l, u)) => {
                        println!("{},{},{},{}", sig(*a), sig(*lam), sig(*l), sig(*u))
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(1);
                    }
                }
            }
            (
                ExitCode::SUCCESS,
                "figure1",
                json!({}),
                json!({ "rows": rows.len() }),
            )
        }
        Cmd::Buchstab { out_step, u_max } => {
            println!("u,omega,omega_prime");
            let mut rows = 0u64;
            let mut u = 1.0f64;
            while u <= *u_max + 1e-12 {
                println!(
                    "{},{},{}",
                    sig(u),
                    sig(buchstab::omega(u)),
                    sig(buchstab::omega_prime(u))
                );
                rows += 1;
                u = 1.0 + rows as f64 * out_step;
            }
            (
                ExitCode::SUCCESS,
                "buchstab",
                json!({ "out_step": out_step, "u_max": u_max }),
                json!({ "rows": rows }),
            )
        }
        Cmd::Fa {
            a,
            zmax,
            h,
            out_step,
        } => {
            let grid = match solve_f(*a, *h, *zmax) {
                Ok(g) => g,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            let every = (out_step / h).round().max(1.0) as usize;
            println!("z,f");
            let mut rows = 0u64;
            for (k, &v) in grid.values.iter().enumerate() {
                if k % every == 0 {
                    println!("{},{}", sig(grid.z(k)), sig(v));
                    rows += 1;
                }
            }
            (
                ExitCode::SUCCESS,
                "fa",
                json!({ "a": a, "zmax": zmax, "h": h, "out_step": out_step }),
                json!({ "rows": rows }),
            )
        }
        Cmd::Exponent { theta, xs } => {
            let spec = match parse_theta(theta) {
                Ok(s) => s,
                Err(c) => return c,
            };
            let xs_parsed: Result<Vec<f64>, _> =
                xs.split(',').map(|s| s.trim().parse::<f64>()).collect();
            let xs_parsed = match xs_parsed {
                Ok(v) if v.len() >= 2 => v,
                _ => {
                    eprintln!("error: --xs needs at least two comma-separated numbers");
                    return ExitCode::from(2);
                }
            };
            let fit = theta_sieve::empirical_exponent(&spec, &xs_parsed);
            println!("x,ratio,loglog_x,log_ratio");
            for (x, r) in &fit.points {
                println!(
                    "{},{},{},{}",
                    sig(*x),
                    sig(*r),
                    sig(x.ln().ln()),
                    sig(r.ln())
                );
            }
            println!("slope,{}", sig(fit.slope));
            (
                ExitCode::SUCCESS,
                "exponent",
                json!({ "theta": spec.canonical_text(), "xs": xs }),
                json!({ "slope": sig(fit.slope) }),
            )
        }
        Cmd::Verify {
            suite,
            x,
            theta,
            n_max,
            a_grid,
        } => {
            let (pass, fail) =
                match run_verify(suite, *x, theta.as_deref(), *n_max, a_grid.as_deref()) {
                    Ok(counts) => counts,
                    Err(code) => return code,
                };
            println!("summary,{pass} passed,{fail} failed");
            (
                if fail == 0 {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                },
                "verify",
                json!({ "suite": suite, "x": x, "theta": theta, "n_max": n_max, "a_grid": a_grid }),
                json!({ "passed": pass, "failed": fail }),
            )
        }
    };

    if cli.report {
        let report = RunReport::new(
            command,
            inputs,
            outputs,
            started.elapsed().as_secs_f64() * 1e3,
        );
        eprintln!("{}", serde_json::to_string(&report).unwrap());
    }
    code
}

fn density_json(est: &DensityEstimate, digits: usize) -> Value {
    json!({
        "cutoff_n": est.cutoff_n,
        "density_hi": fmt_sig(est.density.1, digits),
        "density_lo": fmt_sig(est.density.0, digits),
        "l_hi": fmt_sig(est.l.1, digits),
        "l_lo": fmt_sig(est.l.0, digits),
        "tail_hi": fmt_sig(est.tail.1, 3),
        "theta": est.theta,
    })
}

struct Check {
    pass: u64,
    fail: u64,
}

impl Check {
    fn new() -> Self {
        Check { pass: 0, fail: 0 }
    }

    fn record(&mut self, name: &str, ok: bool, detail: String) {
        if ok {
            self.pass += 1;
            println!("PASS,{name},{detail}");
        } else {
            self.fail += 1;
            println!("FAIL,{name},{detail}");
        }
    }
}

fn parse_grid(text: &str) -> Option<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return None;
    }
    let lo: f64 = parts[0].parse().ok()?;
    let hi: f64 = parts[1].parse().ok()?;
    let step: f64 = parts[2].parse().ok()?;
    if step <= 0.0 || hi < lo {
        return None;
    }
    let n = ((hi - lo) / step).round() as usize;
    Some((0..=n).map(|k| lo + step * k as f64).collect())
}

fn run_verify(
    suite: &str,
    x: Option<f64>,
    theta: Option<&str>,
    n_max: Option<u64>,
    a_grid: Option<&str>,
) -> Result<(u64, u64), ExitCode> {
    let mut check = Check::new();
    match suite {
        "identity" => {
            let x_top = x.unwrap_or(1e5);
            let specs: Vec<String> = match theta {
                Some(t) => vec![t.to_string()],
                None => ["linear:2", "sigma+1", "n+1", "2^n"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
            };
            for text in &specs {
                let spec = match ThetaSpec::parse(text) {
                    Ok(s) => s.normalize(),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return Err(ExitCode::from(2));
                    }
                };
                let mut xv = 10.0;
                while xv <= x_top + 1e-9 {
                    let r = verify_identity(xv, &spec);
                    check.record(
                        "identity",
                        r.holds,
                        format!("theta={text} x={xv} lhs={} rhs={}", r.floor_x, r.sum),
                    );
                    xv *= 10.0;
                }
            }
        }
        "db" => {
            let top = n_max.unwrap_or(10_000);
            let specs: Vec<String> = match theta {
                Some(t) => vec![t.to_string()],
                None => ["linear:2", "sigma+1", "n+1", "2^n", "pow:1:2"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
            };
            for text in &specs {
                let spec = match ThetaSpec::parse(text) {
                    Ok(s) => s.normalize(),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return Err(ExitCode::from(2));
                    }
                };
                let mut subset_ok = true;
                let mut witness = 0u64;
                for n in 1..=top {
                    if chi_d(n, &spec).member && !chi_b(n, &spec).member {
                        subset_ok = false;
                        witness = n;
                        break;
                    }
                }
                check.record(
                    "d-subset-of-b",
                    subset_ok,
                    if subset_ok {
                        format!("theta={text} n<={top}")
                    } else {
                        format!("theta={text} counterexample n={witness}")
                    },
                );
                if check_chain_compat(&spec, top.min(1000)) {
                    let mut equal = true;
                    let mut w = 0u64;
                    for n in 1..=top {
                        if chi_d(n, &spec).member != chi_b(n, &spec).member {
                            equal = false;
                            w = n;
                            break;
                        }
                    }
                    check.record(
                        "d-equals-b-under-compat",
                        equal,
                        if equal {
                            format!("theta={text} n<={top}")
                        } else {
                            format!("theta={text} counterexample n={w}")
                        },
                    );
                }
            }
        }
        "bounds" => {
            let grid = match a_grid {
                Some(g) => match parse_grid(g) {
                    Some(v) => v,
                    None => {
                        eprintln!("error: bad --a-grid (want lo:hi:step)");
                        return Err(ExitCode::from(2));
                    }
                },
                None => parse_grid("1:10:0.5").unwrap(),
            };
            let ctx = LambdaContext::shared();
            for &a in &grid {
                match ctx.solve_lambda(a) {
                    Ok(r) => {
                        let contained = r.l_a < r.lambda && r.lambda < r.u_a;
                        check.record(
                            "bound-containment",
                            contained,
                            format!("a={a} l={} lambda={} u={}", r.l_a, r.lambda, r.u_a),
                        );
                        let certs = g_minus(a, -r.l_a) > 0.0 && g_plus(a, -r.u_a) < 0.0;
                        check.record("bound-certificates", certs, format!("a={a}"));
                    }
                    Err(e) => check.record("bound-containment", false, format!("a={a}: {e}")),
                }
            }
        }
        "omega" => {
            let mut worst: f64 = f64::NEG_INFINITY;
            let mut ok = true;
            let mut u = 1.0f64;
            while u <= 20.0 {
                let bound = buchstab::gamma_reciprocal(u) + 1e-9;
                let dev = (buchstab::omega(u) - theta_sieve::EXP_NEG_GAMMA).abs();
                let dev_prime = buchstab::omega_prime(u).abs();
                if dev > bound || dev_prime > bound {
                    ok = false;
                }
                worst = worst.max(dev - bound).max(dev_prime - bound);
                u += 0.01;
            }
            check.record(
                "gamma-bound",
                ok,
                format!("grid [1,20] step 0.01, worst slack {worst:.2e}"),
            );
            let t2 = theta_sieve::BuchstabTable::build_with_march_start(1e-4, 6.0, 2.0);
            let mut worst_cf: f64 = 0.0;
            let mut uu = 2.0f64;
            while uu <= 3.0 {
                let exact = (1.0 + (uu - 1.0).ln()) / uu;
                worst_cf = worst_cf.max((t2.omega(uu) - exact).abs());
                uu += 0.001;
            }
            check.record(
                "closed-form-agreement",
                worst_cf <= 1e-9,
                format!("max deviation {worst_cf:.2e} on [2,3]"),
            );
        }
        "zero-free" => {
            for k in 1..=10 {
                let a = k as f64;
                match theta_sieve::zero_free_spot_check(a) {
                    Ok(rep) => check.record(
                        "segment-ratio",
                        rep.pass,
                        format!(
                            "a={a} max|h|/|s|={:.4} at tau={:.2}",
                            rep.max_ratio, rep.tau_at_max
                        ),
                    ),
                    Err(e) => check.record("segment-ratio", false, format!("a={a}: {e}")),
                }
            }
            let dev0 = theta_sieve::deviation_integral(1.0, 0.0).unwrap();
            check.record(
                "deviation-mass",
                dev0.hi < 0.16,
                format!("int |omega-limit| in {dev0}"),
            );
            let dev_eg =
                theta_sieve::deviation_integral(theta_sieve::EULER_GAMMA.exp(), 0.0).unwrap();
            check.record(
                "deviation-tail-mass",
                dev_eg.hi <= 0.021,
                format!("from e^gamma: {dev_eg}"),
            );
            let dev01 = theta_sieve::deviation_integral(1.0, 0.1).unwrap();
            check.record(
                "weighted-deviation",
                dev01.hi < 0.175,
                format!("t^0.1 weight: {dev01}"),
            );
            let (iv, thr, ok) = theta_sieve::lambda::large_a_integral_check();
            check.record(
                "large-a-weighted-deviation",
                ok,
                format!("t^1.1 weight: {iv} vs {thr:.4}"),
            );
        }
        other => {
            eprintln!("error: unknown suite '{other}' (want identity|db|bounds|omega|zero-free)");
            return Err(ExitCode::from(2));
        }
    }
    Ok((check.pass, check.fail))
}
