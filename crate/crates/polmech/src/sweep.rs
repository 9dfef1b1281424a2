//! Two-parameter grids over the linearized models.

use std::io::{self, Write};

use num_complex::Complex64;
use polmech_core::gaussian::{log_negativity, quad_to_complex_moments, reduce, solve_lyapunov, stability};
use polmech_core::{degrees, Error, Result};
use rayon::prelude::*;

use crate::model::{PointSpec, Variant};
use crate::report::num;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    Nbar,
    Coupling,
    U,
}

impl Param {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "nbar" => Some(Param::Nbar),
            "coupling" | "Gpsi" | "Gtheta" | "Gt" => Some(Param::Coupling),
            "U" => Some(Param::U),
            _ => None,
        }
    }

    fn column(self, variant: Variant) -> &'static str {
        match self {
            Param::Nbar => "nbar",
            Param::Coupling => variant.coupling_name(),
            Param::U => "U",
        }
    }

    fn set(self, spec: &mut PointSpec, x: f64) {
        match self {
            Param::Nbar => spec.n_bar = x,
            Param::Coupling => spec.coupling = x,
            Param::U => spec.u = x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    LogNegativity,
    Chi,
}

impl Quantity {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "E_N" => Some(Quantity::LogNegativity),
            "chi" => Some(Quantity::Chi),
            _ => None,
        }
    }

    pub fn column(self) -> &'static str {
        match self {
            Quantity::LogNegativity => "E_N",
            Quantity::Chi => "chi",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub param: Param,
    pub values: Vec<f64>,
}

/// `n` points from `lo` to `hi` inclusive.
pub fn closed(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// Cell centres of `n` equal cells on (lo, hi).
pub fn centres(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * (k as f64 + 0.5) / n as f64).collect()
}

/// `n` points on (lo, hi], right cell edges.
pub fn half_open(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * (k + 1) as f64 / n as f64).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub label: String,
    pub base: PointSpec,
    /// Outer axis.
    pub x: Axis,
    /// Inner axis.
    pub y: Axis,
    pub quantity: Quantity,
    pub pair: (usize, usize),
    /// Sets |m| = sqrt(n̄(n̄+1)) at every point, with the phase of `base.m_sq`.
    pub max_squeezed: bool,
}

impl SweepSpec {
    pub fn figure(fig: Figure, grid: usize) -> Self {
        let nbar = Axis {
            param: Param::Nbar,
            values: closed(0.0, 1.5, grid),
        };
        let (label, variant, coupling, y, quantity, max_squeezed) = match fig {
            Figure::Fig2 => (
                "fig2",
                Variant::TwoMode,
                1.0,
                Axis {
                    param: Param::Coupling,
                    values: centres(0.0, 2.0, grid),
                },
                Quantity::LogNegativity,
                false,
            ),
            Figure::Fig3 => (
                "fig3",
                Variant::TwoMode,
                1.0,
                Axis {
                    param: Param::Coupling,
                    values: centres(0.0, 2.0, grid),
                },
                Quantity::Chi,
                true,
            ),
            Figure::Fig4 => (
                "fig4",
                Variant::TwoColour,
                1.0,
                Axis {
                    param: Param::U,
                    values: half_open(0.0, 10.0, grid),
                },
                Quantity::LogNegativity,
                false,
            ),
            Figure::Fig5 => (
                "fig5",
                Variant::A1A2,
                1.0,
                Axis {
                    param: Param::U,
                    values: half_open(std::f64::consts::FRAC_1_SQRT_2, 10.0, grid),
                },
                Quantity::LogNegativity,
                false,
            ),
        };
        Self {
            label: label.into(),
            base: PointSpec::new(variant, 0.0, coupling, 0.0),
            x: nbar,
            y,
            quantity,
            pair: variant.headline_pair(),
            max_squeezed,
        }
    }

    pub fn len(&self) -> usize {
        self.x.values.len() * self.y.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Point spec at outer index `i`, inner index `j`.
    pub fn point(&self, i: usize, j: usize) -> PointSpec {
        let mut s = self.base;
        self.x.param.set(&mut s, self.x.values[i]);
        self.y.param.set(&mut s, self.y.values[j]);
        if self.max_squeezed {
            let phase = if self.base.m_sq.norm() > 0.0 { self.base.m_sq.arg() } else { 0.0 };
            s.m_sq = Complex64::from_polar((s.n_bar * (s.n_bar + 1.0)).sqrt(), phase);
        }
        s
    }

    pub fn header(&self) -> [&'static str; 3] {
        let v = self.base.variant;
        [self.x.param.column(v), self.y.param.column(v), self.quantity.column()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Value(f64),
    Unstable,
    /// χ at a point where a degree of coherence has no occupation to normalize by.
    Undefined,
}

impl Cell {
    pub fn value(self) -> Option<f64> {
        match self {
            Cell::Value(x) => Some(x),
            _ => None,
        }
    }

    fn render(self) -> String {
        match self {
            Cell::Value(x) => num(x),
            Cell::Unstable => "unstable".into(),
            Cell::Undefined => "undefined".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointEval {
    pub cell: Cell,
    /// Minimum eigenvalue of V + iΩ/2 over the full covariance, when solved.
    pub min_physical_eig: Option<f64>,
    pub min_symplectic_eig: Option<f64>,
}

pub fn evaluate(spec: &PointSpec, quantity: Quantity, pair: (usize, usize)) -> Result<PointEval> {
    let model = spec.model()?;
    if !stability(&model).stable {
        return Ok(PointEval {
            cell: Cell::Unstable,
            min_physical_eig: None,
            min_symplectic_eig: None,
        });
    }
    let v = solve_lyapunov(&model)?;
    let cell = match quantity {
        Quantity::LogNegativity => Cell::Value(log_negativity(&reduce(&v, pair)?)?),
        Quantity::Chi => match degrees(&quad_to_complex_moments(&v, pair)?) {
            Ok(d) => Cell::Value(d.chi),
            Err(Error::UndefinedDegree { .. }) => Cell::Undefined,
            Err(e) => return Err(e),
        },
    };
    Ok(PointEval {
        cell,
        min_physical_eig: Some(v.min_physical_eigenvalue()),
        min_symplectic_eig: Some(v.symplectic_eigenvalues()[0]),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    /// Row-major: outer axis `x`, inner axis `y`.
    pub points: Vec<PointEval>,
}

impl SweepResult {
    pub fn at(&self, i: usize, j: usize) -> &PointEval {
        &self.points[i * self.spec.y.values.len() + j]
    }

    pub fn write_csv<W: Write>(&self, mut out: W, provenance: &[String]) -> io::Result<()> {
        for line in provenance {
            writeln!(out, "# {line}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.spec.header())?;
        let ny = self.spec.y.values.len();
        for (k, p) in self.points.iter().enumerate() {
            let (i, j) = (k / ny, k % ny);
            w.write_record([
                num(self.spec.x.values[i]),
                num(self.spec.y.values[j]),
                p.cell.render(),
            ])?;
        }
        w.flush()
    }
}

/// Evaluates every grid point in parallel; the result order is fixed.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    let ny = spec.y.values.len();
    let points = (0..spec.len())
        .into_par_iter()
        .map(|k| evaluate(&spec.point(k / ny, k % ny), spec.quantity, spec.pair))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        spec: spec.clone(),
        points,
    })
}
