use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use polmech::acceptance::{run_all, AcceptanceConfig};
use polmech::config::{Config, ConfigError};
use polmech::lattice_table::lattice_table;
use polmech::model::{PointSpec, Variant};
use polmech::report::{num, point_report};
use polmech::sim::{compare, simulate_parallel, write_csv};
use polmech::sweep::{closed, run_sweep, Axis, Figure, Param, Quantity, SweepSpec};
use polmech::version_line;
use polmech_core::gaussian::solve_lyapunov;
use polmech_core::working_point::{solve_steady_state, WorkingPoint};
use polmech_core::{Error, SimConfig};

const EXIT_IO: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_UNSTABLE: u8 = 3;
const EXIT_VALIDATION: u8 = 4;

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Self::config(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Unstable { .. } => EXIT_UNSTABLE,
            Error::SingularSystem { .. } | Error::ResidualTooLarge { .. } | Error::NonPhysical { .. } => EXIT_IO,
            _ => EXIT_CONFIG,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

#[derive(Parser)]
#[command(name = "polmech", version, about = "Entanglement and coherence of polariton-mirror Gaussian models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stability, E_N, chi, degrees of coherence and moments at one point.
    Point {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Figure grids or a custom two-parameter grid, as CSV.
    Sweep(SweepArgs),
    /// Runs the acceptance suite; exit code 4 if any check fails.
    Validate {
        #[arg(long, default_value_t = 50)]
        grid: usize,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dipole coupling, exciton frequencies and cavity couplings of the lattice.
    Lattice {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Number of exciton modes listed.
        #[arg(long, default_value_t = 9)]
        k_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ensemble simulation compared entrywise with the Lyapunov covariance.
    Simulate {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Model inputs; flags override `--config` keys. Rates are in units of γ.
#[derive(Args, Clone, Debug, Default)]
struct PointArgs {
    #[arg(long, value_enum)]
    variant: Option<Variant>,
    #[arg(long)]
    nbar: Option<f64>,
    /// Bath squeezing m: `re`, `re,im`, or `max` for sqrt(nbar(nbar+1)).
    #[arg(long, allow_hyphen_values = true)]
    msq: Option<String>,
    #[arg(long = "Gpsi")]
    g_psi: Option<f64>,
    #[arg(long = "Gtheta")]
    g_theta: Option<f64>,
    #[arg(long = "Gt")]
    g_t: Option<f64>,
    #[arg(long = "U")]
    u: Option<f64>,
    /// Mechanical damping γ_m; the printed models use 2γ.
    #[arg(long = "gamma-m")]
    gamma_m: Option<f64>,
    /// `key = value` file with lattice, drive and point keys.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl PointArgs {
    fn is_empty(&self) -> bool {
        self.variant.is_none()
            && self.nbar.is_none()
            && self.msq.is_none()
            && self.g_psi.is_none()
            && self.g_theta.is_none()
            && self.g_t.is_none()
            && self.u.is_none()
            && self.gamma_m.is_none()
            && self.config.is_none()
    }
}

#[derive(Args, Clone, Debug)]
struct SimArgs {
    #[arg(long, default_value_t = SimConfig::default().dt)]
    dt: f64,
    #[arg(long, default_value_t = SimConfig::default().burn_in)]
    burn_in: f64,
    #[arg(long, default_value_t = SimConfig::default().sample_window)]
    window: f64,
    #[arg(long, default_value_t = SimConfig::default().n_trajectories)]
    trajectories: usize,
    #[arg(long, default_value_t = SimConfig::default().seed)]
    seed: u64,
}

impl SimArgs {
    fn config(&self) -> SimConfig {
        SimConfig {
            dt: self.dt,
            burn_in: self.burn_in,
            sample_window: self.window,
            n_trajectories: self.trajectories,
            seed: self.seed,
        }
    }
}

#[derive(Args, Clone, Debug)]
struct SweepArgs {
    /// Preset grid; omit for a custom sweep with --x and --y.
    #[arg(long, value_enum)]
    figure: Option<Figure>,
    /// Points per axis.
    #[arg(long, default_value_t = 50)]
    grid: usize,
    /// Custom outer axis `param:lo:hi`, param one of nbar, Gpsi, Gtheta, Gt, U.
    #[arg(long)]
    x: Option<String>,
    /// Custom inner axis `param:lo:hi`.
    #[arg(long)]
    y: Option<String>,
    /// Custom quantity: E_N or chi.
    #[arg(long, default_value = "E_N")]
    quantity: String,
    #[command(flatten)]
    point: PointArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: &Option<PathBuf>) -> Outcome<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::config(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn parse_msq(s: &str, n_bar: f64) -> Outcome<Complex64> {
    if s == "max" {
        return Ok(Complex64::new((n_bar * (n_bar + 1.0)).sqrt(), 0.0));
    }
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let f = |t: &str| t.parse::<f64>().map_err(|_| Failure::config(format!("msq: cannot parse `{s}`")));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(f(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(f(re)?, f(im)?)),
        _ => Err(Failure::config(format!("msq: expected `re`, `re,im` or `max`, got `{s}`"))),
    }
}

/// Point spec plus the working point when the couplings came from the drive.
struct Resolved {
    spec: PointSpec,
    working_point: Option<WorkingPoint>,
    config: Config,
}

fn resolve_point(a: &PointArgs, require_variant: bool) -> Outcome<Resolved> {
    let config = match &a.config {
        Some(p) => Config::from_file(p)?,
        None => Config::default(),
    };
    let variant = match (a.variant, config.get("variant")) {
        (Some(v), _) => v,
        (None, Some(s)) => Variant::parse(s).ok_or_else(|| Failure::config(format!("unknown variant `{s}`")))?,
        (None, None) if require_variant => return Err(Failure::config("--variant is required")),
        (None, None) => Variant::TwoMode,
    };
    let pick = |flag: Option<f64>, key: &str| -> Outcome<Option<f64>> {
        Ok(match flag {
            Some(x) => Some(x),
            None => config.f64(key)?,
        })
    };
    let coupling_flag = match variant {
        Variant::TwoMode => pick(a.g_psi, "Gpsi")?,
        Variant::TwoColour => pick(a.g_theta, "Gtheta")?,
        Variant::ThetaPi | Variant::A1A2 => pick(a.g_t, "Gt")?,
    };
    let u_flag = pick(a.u, "U")?;
    let n_bar = pick(a.nbar, "nbar")?.unwrap_or(0.0);
    let drive = config.drive()?;
    let (mut spec, working_point) = match (coupling_flag, drive) {
        (None, Some(d)) => {
            let wp = solve_steady_state(&d)?;
            let mut s = PointSpec::from_working_point(variant, &wp, d.gamma)?;
            s.gamma_m = Some(d.gamma_m);
            (s, Some(wp))
        }
        (coupling, _) => {
            let coupling = coupling.ok_or_else(|| {
                Failure::config(format!(
                    "--{} is required (or drive keys in --config)",
                    variant.coupling_name()
                ))
            })?;
            let gamma = config.f64("gamma")?.unwrap_or(1.0);
            let mut s = PointSpec::new(variant, n_bar, coupling, u_flag.unwrap_or(0.0));
            s.gamma = gamma;
            (s, None)
        }
    };
    spec.n_bar = n_bar;
    if working_point.is_some() && u_flag.is_some() {
        return Err(Failure::config("U comes from the working point; drop --U or give the coupling"));
    }
    if variant != Variant::TwoMode && working_point.is_none() && u_flag.is_none() {
        return Err(Failure::config(format!("--U is required for variant {variant}")));
    }
    let msq = match (&a.msq, config.get("msq")) {
        (Some(s), _) => Some(s.clone()),
        (None, Some(s)) => Some(s.to_string()),
        (None, None) => None,
    };
    if let Some(s) = msq {
        spec.m_sq = parse_msq(&s, n_bar)?;
    }
    if let Some(gm) = a.gamma_m {
        spec.gamma_m = Some(gm);
    }
    Ok(Resolved {
        spec,
        working_point,
        config,
    })
}

fn provenance(command: &str, detail: &str, config: &Config) -> Vec<String> {
    let mut lines = vec![format!("{} {command}", version_line())];
    if !detail.is_empty() {
        lines.push(detail.to_string());
    }
    let echo = config.echo();
    if !echo.is_empty() {
        lines.push(format!("config: {echo}"));
    }
    lines
}

fn cmd_point(point: &PointArgs, out: &Option<PathBuf>) -> Outcome<()> {
    let r = resolve_point(point, false)?;
    let mut report = point_report(&r.spec)?;
    if let Some(wp) = &r.working_point {
        let mut rows = vec![
            ("wp.q_s".to_string(), wp.q_s),
            ("wp.phi".into(), wp.phi),
            ("wp.Omega_tilde".into(), wp.omega_tilde),
            ("wp.G_psi".into(), wp.g_psi),
            ("wp.G_phi".into(), wp.g_phi),
            ("wp.G_q".into(), wp.g_q),
            ("wp.varphi".into(), wp.varphi),
            ("wp.U".into(), wp.u),
            ("wp.G_theta".into(), wp.g_theta),
            ("wp.G_pi".into(), wp.g_pi),
            ("wp.relative_phase".into(), wp.relative_phase),
            ("wp.residual".into(), wp.residual),
        ];
        if let Some(gt) = wp.g_t {
            rows.push(("wp.G_t".into(), gt));
        }
        let mut head: Vec<_> = rows
            .into_iter()
            .map(|(k, v)| (k, polmech::report::Value::Num(v)))
            .collect();
        head.push((
            "wp.real_regime".into(),
            polmech::report::Value::Text(wp.real_regime.to_string()),
        ));
        head.append(&mut report.rows);
        report.rows = head;
    }
    let mut w = output(out)?;
    for line in provenance("point", &r.spec.describe(), &r.config) {
        writeln!(w, "# {line}")?;
    }
    report.write_csv(&mut w)?;
    w.flush()?;
    if !report.stable {
        return Err(Failure {
            code: EXIT_UNSTABLE,
            message: format!("unstable: {}", r.spec.describe()),
        });
    }
    Ok(())
}

fn parse_axis(s: &str, grid: usize) -> Outcome<Axis> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Failure::config(format!("axis `{s}`: expected param:lo:hi"));
    let [name, lo, hi] = parts.as_slice() else { return Err(bad()) };
    let param = Param::parse(name).ok_or_else(bad)?;
    let lo: f64 = lo.parse().map_err(|_| bad())?;
    let hi: f64 = hi.parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(bad());
    }
    Ok(Axis {
        param,
        values: closed(lo, hi, grid),
    })
}

fn cmd_sweep(a: &SweepArgs) -> Outcome<()> {
    if a.grid < 2 {
        return Err(Failure::config("--grid must be at least 2"));
    }
    let (spec, config) = match a.figure {
        Some(fig) => {
            if !a.point.is_empty() || a.x.is_some() || a.y.is_some() {
                return Err(Failure::config("--figure sweeps take only --grid and --out"));
            }
            (SweepSpec::figure(fig, a.grid), Config::default())
        }
        None => {
            let (Some(x), Some(y)) = (&a.x, &a.y) else {
                return Err(Failure::config("custom sweeps need --x and --y (or use --figure)"));
            };
            let x = parse_axis(x, a.grid)?;
            let y = parse_axis(y, a.grid)?;
            if x.param == y.param {
                return Err(Failure::config("--x and --y must sweep different parameters"));
            }
            let mut point = a.point.clone();
            // Swept parameters need no fixed value.
            let dummy = Some(0.0);
            for p in [x.param, y.param] {
                match p {
                    Param::Coupling => {
                        point.g_psi = point.g_psi.or(dummy);
                        point.g_theta = point.g_theta.or(dummy);
                        point.g_t = point.g_t.or(dummy);
                    }
                    Param::U => point.u = point.u.or(dummy),
                    Param::Nbar => point.nbar = point.nbar.or(dummy),
                }
            }
            let r = resolve_point(&point, true)?;
            if r.working_point.is_some() {
                return Err(Failure::config("custom sweeps take couplings directly, not drive keys"));
            }
            let quantity = Quantity::parse(&a.quantity)
                .ok_or_else(|| Failure::config(format!("--quantity must be E_N or chi, got `{}`", a.quantity)))?;
            let spec = SweepSpec {
                label: "custom".into(),
                base: r.spec,
                x,
                y,
                quantity,
                pair: r.spec.variant.headline_pair(),
                max_squeezed: a.point.msq.as_deref() == Some("max"),
            };
            (spec, r.config)
        }
    };
    let result = run_sweep(&spec)?;
    let detail = format!(
        "sweep {} grid={}x{} base: {} pair={:?}",
        spec.label,
        spec.x.values.len(),
        spec.y.values.len(),
        spec.base.describe(),
        spec.pair
    );
    let mut lines = provenance("sweep", &detail, &config);
    lines.push("rows: outer axis first column, inner axis second".into());
    let mut w = output(&a.out)?;
    result.write_csv(&mut w, &lines)?;
    w.flush()?;
    Ok(())
}

fn cmd_validate(grid: usize, sim: &SimArgs, out: &Option<PathBuf>) -> Outcome<()> {
    let cfg = AcceptanceConfig { grid, sim: sim.config() };
    if grid < 4 {
        return Err(Failure::config("--grid must be at least 4"));
    }
    let outcomes = run_all(&cfg);
    let mut w = output(out)?;
    writeln!(w, "# {} validate grid={grid} seed={}", version_line(), sim.seed)?;
    {
        let mut c = csv::Writer::from_writer(&mut w);
        c.write_record(["criterion", "check", "status", "detail"])?;
        for o in &outcomes {
            for ch in &o.checks {
                let status = if ch.passed { "PASS" } else { "FAIL" };
                c.write_record([o.id.to_string().as_str(), ch.name.as_str(), status, ch.detail.as_str()])?;
            }
            if let Some(limit) = o.time_limit {
                let status = if o.within_time() { "PASS" } else { "FAIL" };
                let detail = format!("{:.3} s (limit {} s)", o.elapsed.as_secs_f64(), limit.as_secs_f64());
                c.write_record([o.id.to_string().as_str(), "runtime", status, detail.as_str()])?;
            }
        }
        c.flush()?;
    }
    w.flush()?;
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.id).collect();
    for o in &outcomes {
        eprintln!("criterion {:>2}: {}", o.id, if o.passed() { "PASS" } else { "FAIL" });
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_VALIDATION,
            message: format!("failed criteria: {failed:?}"),
        })
    }
}

fn cmd_lattice(config: &Option<PathBuf>, k_max: usize, out: &Option<PathBuf>) -> Outcome<()> {
    let cfg = match config {
        Some(p) => Config::from_file(p)?,
        None => Config::default(),
    };
    let params = cfg.lattice()?;
    let table = lattice_table(&params, k_max)?;
    let mut w = output(out)?;
    table.write_csv(&mut w, &provenance("lattice", "", &cfg))?;
    w.flush()?;
    Ok(())
}

fn cmd_simulate(point: &PointArgs, sim: &SimArgs, out: &Option<PathBuf>) -> Outcome<()> {
    let r = resolve_point(point, false)?;
    let model = r.spec.model()?;
    let cfg = sim.config();
    let result = simulate_parallel(&model, &cfg)?;
    let v = solve_lyapunov(&model)?;
    let checks = compare(&result, v.matrix());
    let detail = format!(
        "{} dt={} burn_in={} window={} trajectories={} seed={}",
        r.spec.describe(),
        cfg.dt,
        cfg.burn_in,
        cfg.sample_window,
        cfg.n_trajectories,
        cfg.seed
    );
    let mut w = output(out)?;
    write_csv(&mut w, &checks, &provenance("simulate", &detail, &r.config))?;
    w.flush()?;
    let worst = checks.iter().map(|c| c.z()).fold(0.0, f64::max);
    eprintln!("max |z| = {}", num(worst));
    Ok(())
}

fn run(cli: Cli) -> Outcome<()> {
    match &cli.command {
        Command::Point { point, out } => cmd_point(point, out),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Validate { grid, sim, out } => cmd_validate(*grid, sim, out),
        Command::Lattice { config, k_max, out } => cmd_lattice(config, *k_max, out),
        Command::Simulate { point, sim, out } => cmd_simulate(point, sim, out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("polmech: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
