//! Acceptance suite: closed-form agreement, figure regions, basis
//! consistency, stochastic cross-checks, lattice numbers and physicality.
//!
//! Each criterion returns named checks; the suite passes only if every
//! check passes within its time budget.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fmt;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use polmech_core::coherence::chi_from_degrees;
use polmech_core::gaussian::{
    a1a2_rotation, build_three_mode, build_two_colour, build_two_mode, quad_to_complex_moments, solve_lyapunov,
    sum_difference_variances, BathSpec, CovarianceMatrix, ThreeModeVariant,
};
use polmech_core::lattice::exciton_cavity_coupling;
use polmech_core::oracles::{
    three_mode_a1_a2, three_mode_theta_pi, two_colour, two_mode_squeezed, two_mode_thermal, OracleInput,
};
use polmech_core::{degrees, MomentSet, Result, SimConfig};

use crate::config::default_lattice;
use crate::model::{PointSpec, Variant};
use crate::sim::{compare, log_negativity_with_error, simulate_parallel};
use crate::sweep::{run_sweep, Figure, PointEval, Quantity, SweepResult, SweepSpec};

pub const ORACLE_TOL: f64 = 1e-9;
pub const BASIS_TOL: f64 = 1e-12;
pub const PHYSICALITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Running worst-case minima of the physicality measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physicality {
    pub count: usize,
    pub min_eigenvalue: f64,
    pub min_symplectic: f64,
}

impl Default for Physicality {
    fn default() -> Self {
        Self {
            count: 0,
            min_eigenvalue: f64::INFINITY,
            min_symplectic: f64::INFINITY,
        }
    }
}

impl Physicality {
    pub fn record(&mut self, v: &CovarianceMatrix) {
        self.push(v.min_physical_eigenvalue(), v.symplectic_eigenvalues()[0]);
    }

    fn push(&mut self, eig: f64, symp: f64) {
        self.count += 1;
        self.min_eigenvalue = self.min_eigenvalue.min(eig);
        self.min_symplectic = self.min_symplectic.min(symp);
    }

    fn record_sweep(&mut self, r: &SweepResult) {
        for p in &r.points {
            if let (Some(e), Some(s)) = (p.min_physical_eig, p.min_symplectic_eig) {
                self.push(e, s);
            }
        }
    }

    pub fn merge(&mut self, other: &Physicality) {
        self.count += other.count;
        self.min_eigenvalue = self.min_eigenvalue.min(other.min_eigenvalue);
        self.min_symplectic = self.min_symplectic.min(other.min_symplectic);
    }

    pub fn is_physical(&self) -> bool {
        self.min_eigenvalue >= -PHYSICALITY_TOL && self.min_symplectic >= 0.5 - PHYSICALITY_TOL
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
    pub time_limit: Option<Duration>,
    pub physicality: Physicality,
}

impl Outcome {
    pub fn within_time(&self) -> bool {
        self.time_limit.is_none_or(|t| self.elapsed <= t)
    }

    pub fn passed(&self) -> bool {
        self.within_time() && self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2}: {status}  {} [{:.2} s", self.id, self.title, self.elapsed.as_secs_f64())?;
        match self.time_limit {
            Some(t) => write!(f, ", limit {} s]", t.as_secs_f64())?,
            None => write!(f, "]")?,
        }
        for c in &self.checks {
            let s = if c.passed { "ok  " } else { "FAIL" };
            write!(f, "\n    {s} {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcceptanceConfig {
    /// Points per axis of the figure sweeps.
    pub grid: usize,
    pub sim: SimConfig,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        Self {
            grid: 50,
            sim: SimConfig::default(),
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-6)
}

fn crel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-6)
}

/// Worst error of one quantity over a grid.
struct Worst {
    name: String,
    tol: f64,
    worst: f64,
    at: String,
}

impl Worst {
    fn new(name: impl Into<String>, tol: f64) -> Self {
        Self {
            name: name.into(),
            tol,
            worst: 0.0,
            at: String::new(),
        }
    }

    fn see(&mut self, err: f64, at: impl FnOnce() -> String) {
        if !(err <= self.worst) {
            self.worst = err;
            self.at = at();
        }
    }

    fn check(self) -> Check {
        let passed = self.worst <= self.tol;
        let detail = if self.at.is_empty() {
            format!("max error {:.2e} (tol {:.0e})", self.worst, self.tol)
        } else {
            format!("max error {:.2e} at {} (tol {:.0e})", self.worst, self.at, self.tol)
        };
        Check::new(self.name, passed, detail)
    }
}

fn pair(v: &CovarianceMatrix, i: usize, j: usize) -> Result<MomentSet> {
    quad_to_complex_moments(v, (i, j))
}

fn timed(
    id: u8,
    title: &'static str,
    limit: Option<f64>,
    body: impl FnOnce(&mut Physicality) -> Result<Vec<Check>>,
) -> Outcome {
    let start = Instant::now();
    let mut phys = Physicality::default();
    let checks = body(&mut phys).unwrap_or_else(|e| vec![Check::new("evaluation", false, e.to_string())]);
    Outcome {
        id,
        title,
        checks,
        elapsed: start.elapsed(),
        time_limit: limit.map(Duration::from_secs_f64),
        physicality: phys,
    }
}

const C1_NBAR: [f64; 5] = [0.0, 0.3, 0.7, 0.9, 1.2];
const C1_G: [f64; 5] = [0.2, 0.6, 1.0, 1.4, 1.8];

pub fn criterion_1() -> Outcome {
    timed(1, "oracle equivalence, two-mode thermal", Some(1.0), |phys| {
        let mut moments = Worst::new("moments", ORACLE_TOL);
        let mut zeros = Worst::new("vanishing moments (absolute)", 1e-12);
        let mut variances = Worst::new("quadrature variances", ORACLE_TOL);
        let mut eta = Worst::new("|eta_(Psi,b)|^2", ORACLE_TOL);
        for n in C1_NBAR {
            for g in C1_G {
                let at = || format!("nbar={n} Gpsi={g}");
                let o = two_mode_thermal(&OracleInput::new(1.0, n, g))?;
                let v = solve_lyapunov(&build_two_mode(g, 1.0, BathSpec::thermal(n)?)?)?;
                phys.record(&v);
                let ms = pair(&v, 0, 1)?;
                moments.see(rel(ms.n_a, o.n_b), at);
                moments.see(rel(ms.n_b, o.n_psi), at);
                moments.see(crel(ms.ab, o.psi_b), at);
                zeros.see(ms.aa.norm().max(ms.bb.norm()).max(ms.adag_b.norm()), at);
                let s = sum_difference_variances(&v, 1, -FRAC_PI_2)?;
                variances.see(rel(s.sum, o.var_upsilon_x), at);
                variances.see(rel(s.difference, o.var_lambda_x), at);
                variances.see(rel(s.polariton_x, o.var_psi_x), at);
                variances.see(rel(s.q, o.var_q), at);
                let d = degrees(&ms)?;
                eta.see(rel(d.eta_ab * d.eta_ab, o.eta_psi_b_sq), at);
            }
        }
        Ok(vec![moments.check(), zeros.check(), variances.check(), eta.check()])
    })
}

/// Mismatches between E_N > 0 and a predicted region, skipping points the
/// predicate marks as near the boundary.
fn region_check(
    name: &str,
    r: &SweepResult,
    predict: impl Fn(f64, f64) -> Option<bool>,
    on_grid: impl Fn(f64) -> bool,
) -> Check {
    let (mut tested, mut wrong) = (0usize, Vec::new());
    for (i, &x) in r.spec.x.values.iter().enumerate() {
        for (j, &y) in r.spec.y.values.iter().enumerate() {
            let Some(inside) = predict(x, y) else { continue };
            tested += 1;
            let got = match r.at(i, j).cell.value() {
                Some(e) => on_grid(e),
                None => !inside,
            };
            if got != inside {
                wrong.push((x, y, inside));
            }
        }
    }
    let mut detail = format!("{} of {tested} tested points disagree", wrong.len());
    if let Some(&(x, y, inside)) = wrong.first() {
        detail.push_str(&format!(
            "; e.g. nbar={x:.4} {}={y:.4} expected {}",
            r.spec.header()[1],
            if inside { "E_N > 0" } else { "E_N = 0" }
        ));
    }
    Check::new(name, wrong.is_empty() && tested > 0, detail)
}

fn cell_size(v: &[f64]) -> f64 {
    v[1] - v[0]
}

pub fn criterion_2(cfg: &AcceptanceConfig) -> Outcome {
    timed(2, "entanglement region of the two-mode thermal sweep", Some(5.0), |phys| {
        let r = run_sweep(&SweepSpec::figure(Figure::Fig2, cfg.grid))?;
        phys.record_sweep(&r);
        let (dn, dg) = (cell_size(&r.spec.x.values), cell_size(&r.spec.y.values));
        let margin = dg.max(2.0 * dn);
        let claimed = region_check(
            "E_N > 0 exactly for 2 nbar < G_psi < 2",
            &r,
            |n, g| {
                if (g - 2.0 * n).abs() < margin || 2.0 - g < dg {
                    None
                } else {
                    Some(2.0 * n < g && g < 2.0)
                }
            },
            |e| e > 0.0,
        );
        let observed = region_check(
            "pipeline region (informational): E_N > 0 for nbar < 1",
            &r,
            |n, _| if (n - 1.0).abs() < dn { None } else { Some(n < 1.0) },
            |e| e > 0.0,
        );
        Ok(vec![
            claimed,
            Check {
                passed: true,
                ..observed
            },
        ])
    })
}

pub fn criterion_3(cfg: &AcceptanceConfig) -> Outcome {
    timed(3, "Cauchy-Schwarz violation coincides with entanglement", None, |phys| {
        let en = run_sweep(&SweepSpec::figure(Figure::Fig2, cfg.grid))?;
        let chi = run_sweep(&SweepSpec {
            quantity: Quantity::Chi,
            ..SweepSpec::figure(Figure::Fig2, cfg.grid)
        })?;
        phys.record_sweep(&en);
        let mut wrong = Vec::new();
        for (k, (a, b)) in en.points.iter().zip(&chi.points).enumerate() {
            let entangled = a.cell.value().map(|e| e > 0.0);
            let violated = b.cell.value().map(|c| c < 1.0);
            if entangled.is_none() || entangled != violated {
                wrong.push(k);
            }
        }
        let ny = cfg.grid;
        let mut detail = format!("{} of {} points disagree", wrong.len(), en.points.len());
        if let Some(&k) = wrong.first() {
            detail.push_str(&format!(
                "; first at nbar={:.4} Gpsi={:.4}",
                en.spec.x.values[k / ny],
                en.spec.y.values[k % ny]
            ));
        }
        Ok(vec![Check::new("chi < 1 <=> E_N > 0", wrong.is_empty(), detail)])
    })
}

pub fn criterion_4(cfg: &AcceptanceConfig) -> Outcome {
    timed(4, "squeezed-bath closed forms and the chi region", None, |phys| {
        let mut gamma1 = Worst::new("|gamma_(Psi,b)|", ORACLE_TOL);
        let mut eta_psi = Worst::new("|eta_(Psi,Psi)| = |m|/(nbar+1)", ORACLE_TOL);
        let mut eta_b = Worst::new("|eta_(b,b)|", ORACLE_TOL);
        let mut chi = Worst::new("chi", ORACLE_TOL);
        for n in [0.1, 0.3, 0.7, 1.0, 2.0] {
            let bath = BathSpec::max_squeezed(n)?;
            for g in C1_G {
                let at = || format!("nbar={n} Gpsi={g}");
                let o = two_mode_squeezed(&OracleInput::new(1.0, n, g).with_m(bath.m_sq))?;
                let v = solve_lyapunov(&build_two_mode(g, 1.0, bath)?)?;
                phys.record(&v);
                let d = degrees(&pair(&v, 0, 1)?)?;
                gamma1.see(rel(d.gamma1, o.gamma1), at);
                eta_psi.see(rel(d.eta_bb, o.eta_psi_psi), at);
                eta_psi.see(rel(d.eta_bb, bath.m_sq.norm() / (n + 1.0)), at);
                eta_b.see(rel(d.eta_aa, o.eta_b_b), at);
                let eta_ab = o.psi_b.norm() / (o.n_psi * o.n_b).sqrt();
                chi.see(rel(d.chi, chi_from_degrees(o.eta_b_b, o.eta_psi_psi, o.gamma1, eta_ab)), at);
            }
        }
        let spec = SweepSpec::figure(Figure::Fig3, cfg.grid);
        let squeezed = run_sweep(&spec)?;
        let thermal = run_sweep(&SweepSpec {
            max_squeezed: false,
            ..spec
        })?;
        phys.record_sweep(&squeezed);
        phys.record_sweep(&thermal);
        let violated = |p: &PointEval| p.cell.value().is_some_and(|c| c < 1.0);
        let (mut n_sq, mut n_th, mut outside) = (0, 0, 0);
        for (s, t) in squeezed.points.iter().zip(&thermal.points) {
            n_sq += violated(s) as usize;
            n_th += violated(t) as usize;
            outside += (violated(s) && !violated(t)) as usize;
        }
        let region = Check::new(
            "squeezed chi < 1 region strictly inside the thermal one",
            outside == 0 && n_sq < n_th,
            format!("{n_sq} squeezed vs {n_th} thermal points with chi < 1, {outside} outside"),
        );
        Ok(vec![gamma1.check(), eta_psi.check(), eta_b.check(), chi.check(), region])
    })
}

pub fn criterion_5(cfg: &AcceptanceConfig) -> Outcome {
    timed(5, "two-colour model", None, |phys| {
        let mut moments = Worst::new("<b+b>, <b Theta>, <Theta+Theta>", ORACLE_TOL);
        for n in [0.0, 0.4, 1.0, 1.3] {
            for (g, u) in [(1.0, 2.0), (1.0, 0.5), (1.0, 5.0), (0.5, 7.0), (2.5, 2.0), (1.8, 0.3)] {
                let at = || format!("nbar={n} Gtheta={g} U={u}");
                let o = two_colour(&OracleInput::new(1.0, n, g).with_u(u))?;
                let v = solve_lyapunov(&build_two_colour(g, u, 1.0, BathSpec::thermal(n)?)?)?;
                phys.record(&v);
                let ms = pair(&v, 0, 1)?;
                moments.see(rel(ms.n_a, o.n_b), at);
                moments.see(crel(ms.ab, o.b_theta), at);
                moments.see(rel(ms.n_b, o.n_theta), at);
            }
        }
        let r = run_sweep(&SweepSpec::figure(Figure::Fig4, cfg.grid))?;
        phys.record_sweep(&r);
        let dn = cell_size(&r.spec.x.values);
        let region = region_check(
            "Gtheta = 1: E_N > 0 for nbar < 1 and every U, E_N = 0 for nbar > 1",
            &r,
            |n, _| if (n - 1.0).abs() < dn { None } else { Some(n < 1.0) },
            |e| e > 0.0,
        );
        let mut reduce = Worst::new("U = 0 equals the two-mode covariance", BASIS_TOL);
        let mut reduce_oracle = Worst::new("U = 0 equals the two-mode closed forms", ORACLE_TOL);
        for n in C1_NBAR {
            for g in C1_G {
                let at = || format!("nbar={n} G={g}");
                let bath = BathSpec::thermal(n)?;
                let a = solve_lyapunov(&build_two_colour(g, 0.0, 1.0, bath)?)?;
                let b = solve_lyapunov(&build_two_mode(g, 1.0, bath)?)?;
                phys.record(&a);
                reduce.see((a.matrix() - b.matrix()).amax(), at);
                let o = two_mode_thermal(&OracleInput::new(1.0, n, g))?;
                let ms = pair(&a, 0, 1)?;
                reduce_oracle.see(rel(ms.n_a, o.n_b), at);
                reduce_oracle.see(rel(ms.n_b, o.n_psi), at);
                reduce_oracle.see(crel(ms.ab, o.psi_b), at);
            }
        }
        Ok(vec![moments.check(), region, reduce.check(), reduce_oracle.check()])
    })
}

const THREE_MODE_POINTS: [(f64, f64); 6] = [(1.0, 3.0), (1.0, 0.75), (0.4, 1.0), (2.0, 8.0), (1.5, 1.2), (0.5, 6.0)];

pub fn criterion_6() -> Outcome {
    timed(6, "three-mode parametric coupling (Theta, Pi)", None, |phys| {
        let mut anomalous = Worst::new("thermal |<Theta Pi>| (absolute)", 1e-12);
        let mut chi_floor = f64::INFINITY;
        let mut chi_at = String::new();
        let mut gamma1 = Worst::new("|gamma_(Theta,Pi)| against the closed form", ORACLE_TOL);
        for n in [0.0, 0.3, 1.0, 2.0] {
            let m_max = (n * (n + 1.0f64)).sqrt();
            for (gt, u) in THREE_MODE_POINTS {
                for m in [0.0, 0.5 * m_max, m_max] {
                    let at = || format!("nbar={n} Gt={gt} U={u} |m|={m:.4}");
                    let m = Complex64::new(m, 0.0);
                    let o = three_mode_theta_pi(&OracleInput::new(1.0, n, gt).with_u(u).with_m(m))?;
                    let bath = BathSpec::squeezed(n, m)?;
                    let v = solve_lyapunov(&build_three_mode(gt, u, 1.0, bath, ThreeModeVariant::ThetaPi)?)?;
                    phys.record(&v);
                    let ms = pair(&v, 1, 2)?;
                    if m.norm() == 0.0 {
                        anomalous.see(ms.ab.norm(), at);
                    }
                    let d = degrees(&ms)?;
                    if d.chi < chi_floor {
                        chi_floor = d.chi;
                        chi_at = at();
                    }
                    gamma1.see(rel(d.gamma1, o.gamma1_theta_pi), at);
                }
            }
        }
        let chi = Check::new(
            "chi_(Theta,Pi) >= 1 - 1e-10",
            chi_floor >= 1.0 - 1e-10,
            format!("min chi {chi_floor:.12} at {chi_at}"),
        );
        let mut spread = Worst::new("variation of |gamma_(Theta,Pi)| over nbar in [0, 2]", ORACLE_TOL);
        for (gt, u) in THREE_MODE_POINTS {
            for squeezed in [false, true] {
                let mut vals = Vec::new();
                for k in 0..=20 {
                    let n = 0.1 * k as f64;
                    let bath = if squeezed { BathSpec::max_squeezed(n)? } else { BathSpec::thermal(n)? };
                    let v = solve_lyapunov(&build_three_mode(gt, u, 1.0, bath, ThreeModeVariant::ThetaPi)?)?;
                    phys.record(&v);
                    vals.push(degrees(&pair(&v, 1, 2)?)?.gamma1);
                }
                let hi = vals.iter().cloned().fold(f64::MIN, f64::max);
                let lo = vals.iter().cloned().fold(f64::MAX, f64::min);
                spread.see(hi - lo, || format!("Gt={gt} U={u} squeezed={squeezed}"));
            }
        }
        Ok(vec![anomalous.check(), chi, gamma1.check(), spread.check()])
    })
}

pub fn criterion_7(cfg: &AcceptanceConfig) -> Outcome {
    timed(7, "mixed-coupling entanglement (A2, b)", None, |phys| {
        let names = ["<b+b>", "<A1 b>", "<A2 b>", "<A1+A1>", "<A1+A2>", "<A2+A2>"];
        let mut worst: Vec<Worst> = names.iter().map(|n| Worst::new(format!("closed form {n}"), ORACLE_TOL)).collect();
        for n in [0.0, 0.2, 0.6, 1.0] {
            for (gt, u) in THREE_MODE_POINTS {
                let at = || format!("nbar={n} Gt={gt} U={u}");
                let o = three_mode_a1_a2(&OracleInput::new(1.0, n, gt).with_u(u))?;
                let bath = BathSpec::thermal(n)?;
                let v = solve_lyapunov(&build_three_mode(gt, u, 1.0, bath, ThreeModeVariant::A1A2)?)?;
                phys.record(&v);
                let (b_a1, b_a2, a1_a2) = (pair(&v, 0, 1)?, pair(&v, 0, 2)?, pair(&v, 1, 2)?);
                worst[0].see(rel(b_a1.n_a, o.n_b), at);
                worst[1].see(crel(b_a1.ab, o.a1_b), at);
                worst[2].see(crel(b_a2.ab, o.a2_b), at);
                worst[3].see(rel(b_a1.n_b, o.n_a1), at);
                worst[4].see(crel(a1_a2.adag_b, o.a1dag_a2), at);
                worst[5].see(rel(b_a2.n_b, o.n_a2), at);
            }
        }
        let mut checks: Vec<Check> = worst.into_iter().map(Worst::check).collect();
        let r = run_sweep(&SweepSpec::figure(Figure::Fig5, cfg.grid))?;
        phys.record_sweep(&r);
        let dn = cell_size(&r.spec.x.values);
        checks.push(region_check(
            "Gt = 1: E_N > 0 for nbar < 0.5 and every U, E_N = 0 for nbar >= 0.5",
            &r,
            |n, _| if (n - 0.5).abs() < dn { None } else { Some(n < 0.5) },
            |e| e > 0.0,
        ));
        let spec = SweepSpec {
            x: crate::sweep::Axis {
                param: crate::sweep::Param::Nbar,
                values: vec![0.2],
            },
            ..SweepSpec::figure(Figure::Fig5, cfg.grid)
        };
        let line = run_sweep(&spec)?;
        phys.record_sweep(&line);
        let mut series = Vec::new();
        for (j, &u) in spec.y.values.iter().enumerate() {
            if u >= 2.0 {
                series.push((u, line.at(0, j).cell.value().unwrap_or(f64::NAN)));
            }
        }
        let drops: Vec<_> = series.windows(2).filter(|w| !(w[1].1 > w[0].1)).collect();
        let (peak_u, peak) = series.iter().cloned().fold((0.0, f64::MIN), |a, b| if b.1 > a.1 { b } else { a });
        let mut detail = format!(
            "{} of {} steps fail to increase; max E_N {peak:.4} at U={peak_u:.3}",
            drops.len(),
            series.len().saturating_sub(1)
        );
        if let (Some(first), Some(last)) = (series.first(), series.last()) {
            detail.push_str(&format!(
                "; E_N({:.3}) = {:.4}, E_N({:.3}) = {:.4}",
                first.0, first.1, last.0, last.1
            ));
        }
        checks.push(Check::new(
            "nbar = 0.2: E_N increases with U for U >= 2 Gt",
            drops.is_empty() && series.len() > 1,
            detail,
        ));
        Ok(checks)
    })
}

pub fn criterion_8() -> Outcome {
    timed(8, "Theta/Pi covariance rotated to A1/A2 equals the A1/A2 model", None, |phys| {
        let r = a1a2_rotation();
        let mut w = Worst::new("max entry difference (absolute)", BASIS_TOL);
        for gt in [0.3, 1.0, 2.5] {
            for u in [gt * FRAC_1_SQRT_2 + 0.05, 2.0, 7.0] {
                for n in [0.0, 0.6, 1.5] {
                    let m_max = (n * (n + 1.0f64)).sqrt();
                    for m in [Complex64::new(0.0, 0.0), Complex64::new(m_max, 0.0), Complex64::from_polar(m_max, 0.7)] {
                        let bath = BathSpec::squeezed(n, m)?;
                        let tp = solve_lyapunov(&build_three_mode(gt, u, 1.0, bath, ThreeModeVariant::ThetaPi)?)?;
                        let a12 = solve_lyapunov(&build_three_mode(gt, u, 1.0, bath, ThreeModeVariant::A1A2)?)?;
                        phys.record(&tp);
                        phys.record(&a12);
                        let rotated = &r * tp.matrix() * r.transpose();
                        w.see((rotated - a12.matrix()).amax(), || format!("Gt={gt} U={u:.3} nbar={n} m={m:.3}"));
                    }
                }
            }
        }
        Ok(vec![w.check()])
    })
}

/// Representative points of the stochastic cross-check, one per model family.
pub fn stochastic_points() -> [PointSpec; 3] {
    [
        PointSpec::new(Variant::TwoMode, 0.0, 1.0, 0.0),
        PointSpec::new(Variant::TwoColour, 0.3, 1.0, 2.0),
        PointSpec::new(Variant::A1A2, 0.2, 1.0, 3.0),
    ]
}

pub fn criterion_9(cfg: &AcceptanceConfig) -> Outcome {
    timed(9, "stochastic ensemble agrees with the Lyapunov covariance", Some(120.0), |phys| {
        let mut checks = Vec::new();
        for spec in stochastic_points() {
            let model = spec.model()?;
            let v = solve_lyapunov(&model)?;
            phys.record(&v);
            let sim = simulate_parallel(&model, &cfg.sim)?;
            let entries = compare(&sim, v.matrix());
            let worst = entries.iter().max_by(|a, b| a.z().total_cmp(&b.z())).copied();
            let worst = worst.expect("nonempty covariance");
            checks.push(Check::new(
                format!("{}: every entry within 3 SE", spec.describe()),
                entries.iter().all(|e| e.z() < 3.0),
                format!(
                    "{} entries, worst z = {:.2} at ({}, {}): {:.6} vs {:.6} +- {:.1e}",
                    entries.len(),
                    worst.z(),
                    worst.i,
                    worst.j,
                    worst.estimate,
                    worst.reference,
                    worst.std_err
                ),
            ));
            if spec.variant == Variant::A1A2 {
                let p = spec.variant.headline_pair();
                let exact = polmech_core::log_negativity(&polmech_core::reduce(&v, p)?)?;
                let (est, se) = log_negativity_with_error(&sim, p)?;
                checks.push(Check::new(
                    "E_N(A2, b) from the ensemble within 3 SE",
                    (est - exact).abs() < 3.0 * se && est > 0.0,
                    format!("{est:.6} +- {se:.1e} vs {exact:.6}"),
                ));
            }
        }
        Ok(checks)
    })
}

pub const F1_TARGET: f64 = 1.6e8;
pub const F3_TARGET: f64 = 5.3e7;

pub fn criterion_10() -> Outcome {
    timed(10, "lattice couplings f1 and f3", None, |_| {
        let p = default_lattice().with_cavity_on_exciton(1)?;
        let mut checks = Vec::new();
        for (k, target) in [(1, F1_TARGET), (3, F3_TARGET)] {
            let f = exciton_cavity_coupling(&p, k)?;
            let err = (f - target).abs() / target;
            checks.push(Check::new(
                format!("f{k} within 5% of {target:.1e}"),
                err < 0.05,
                format!("f{k} = {f:.4e} ({:.2}% off)", 100.0 * err),
            ));
        }
        Ok(checks)
    })
}

/// Physicality over every covariance recorded by the other outcomes.
pub fn criterion_11(others: &[Outcome]) -> Outcome {
    let start = Instant::now();
    let mut total = Physicality::default();
    for o in others {
        total.merge(&o.physicality);
    }
    let check = Check::new(
        "V + i Omega/2 >= -1e-10 and min symplectic eigenvalue >= 1/2 - 1e-10",
        total.count > 0 && total.is_physical(),
        format!(
            "{} covariances from criteria {:?}: min eigenvalue {:.3e}, min symplectic {:.15}",
            total.count,
            others.iter().filter(|o| o.physicality.count > 0).map(|o| o.id).collect::<Vec<_>>(),
            total.min_eigenvalue,
            total.min_symplectic
        ),
    );
    Outcome {
        id: 11,
        title: "physicality of every covariance in the suite",
        checks: vec![check],
        elapsed: start.elapsed(),
        time_limit: None,
        physicality: total,
    }
}

pub fn run_all(cfg: &AcceptanceConfig) -> Vec<Outcome> {
    let mut out = vec![
        criterion_1(),
        criterion_2(cfg),
        criterion_3(cfg),
        criterion_4(cfg),
        criterion_5(cfg),
        criterion_6(),
        criterion_7(cfg),
        criterion_8(),
        criterion_9(cfg),
        criterion_10(),
    ];
    out.push(criterion_11(&out));
    out
}
