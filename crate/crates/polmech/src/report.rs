//! Single-point report: stability, entanglement, coherence degrees and moments.

use std::io::{self, Write};

use polmech_core::gaussian::{log_negativity, quad_to_complex_moments, reduce, solve_lyapunov, stability};
use polmech_core::{degrees, Error, Result};

use crate::model::PointSpec;

/// Scientific notation with 13 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.12e}")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Text(String),
}

impl Value {
    fn render(&self) -> String {
        match self {
            Value::Num(x) => num(*x),
            Value::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointReport {
    pub stable: bool,
    pub rows: Vec<(String, Value)>,
}

impl PointReport {
    pub fn get(&self, key: &str) -> Option<&Value> {
        self.rows.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn num(&self, key: &str) -> Option<f64> {
        match self.get(key) {
            Some(Value::Num(x)) => Some(*x),
            _ => None,
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["quantity", "value"])?;
        for (k, v) in &self.rows {
            w.write_record([k.as_str(), v.render().as_str()])?;
        }
        w.flush()
    }
}

/// Builds the report; an unstable model yields `stable == false` and only
/// the spectrum rows.
pub fn point_report(spec: &PointSpec) -> Result<PointReport> {
    let model = spec.model()?;
    let labels = model.mode_labels().to_vec();
    let st = stability(&model);
    let mut rows: Vec<(String, Value)> = Vec::new();
    let mut put = |k: String, v: Value| rows.push((k, v));
    put("stable".into(), Value::Text(st.stable.to_string()));
    put("max_re_eig".into(), Value::Num(st.max_real));
    for (i, e) in st.eigenvalues.iter().enumerate() {
        put(format!("eig{i}.re"), Value::Num(e.re));
        put(format!("eig{i}.im"), Value::Num(e.im));
    }
    if !st.stable {
        return Ok(PointReport { stable: false, rows });
    }
    let v = solve_lyapunov(&model)?;
    put("min_symplectic_eig".into(), Value::Num(v.symplectic_eigenvalues()[0]));
    for (k, c) in labels.iter().enumerate() {
        let ms = quad_to_complex_moments(&v, (k, if k == 0 { 1 } else { 0 }))?;
        put(format!("<{c}+{c}>"), Value::Num(ms.n_a));
        put(format!("<{c}{c}>.re"), Value::Num(ms.aa.re));
        put(format!("<{c}{c}>.im"), Value::Num(ms.aa.im));
    }
    for (i, j) in spec.pairs() {
        let (a, b) = (&labels[i], &labels[j]);
        let tag = format!("({a}:{b})");
        let e_n = log_negativity(&reduce(&v, (i, j))?)?;
        put(format!("E_N{tag}"), Value::Num(e_n));
        let ms = quad_to_complex_moments(&v, (i, j))?;
        put(format!("<{a}+{b}>.re"), Value::Num(ms.adag_b.re));
        put(format!("<{a}+{b}>.im"), Value::Num(ms.adag_b.im));
        put(format!("<{a}{b}>.re"), Value::Num(ms.ab.re));
        put(format!("<{a}{b}>.im"), Value::Num(ms.ab.im));
        match degrees(&ms) {
            Ok(d) => {
                put(format!("gamma1{tag}"), Value::Num(d.gamma1));
                put(format!("eta{tag}_{a}{a}"), Value::Num(d.eta_aa));
                put(format!("eta{tag}_{b}{b}"), Value::Num(d.eta_bb));
                put(format!("eta{tag}_{a}{b}"), Value::Num(d.eta_ab));
                put(format!("g2{tag}_{a}"), Value::Num(d.g2_a));
                put(format!("g2{tag}_{b}"), Value::Num(d.g2_b));
                put(format!("g2{tag}_{a}{b}"), Value::Num(d.g2_ab));
                put(format!("chi{tag}"), Value::Num(d.chi));
                put(format!("cs_violated{tag}"), Value::Text(d.cs_violated.to_string()));
            }
            Err(Error::UndefinedDegree { which }) => {
                put(format!("chi{tag}"), Value::Text(format!("undefined ({which})")));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(PointReport { stable: true, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Variant;

    #[test]
    fn number_format_has_thirteen_digits() {
        assert_eq!(num(1.0 / 3.0), "3.333333333333e-1");
        assert_eq!(num(0.0), "0.000000000000e0");
    }

    #[test]
    fn squeezing_condition_examples() {
        let r = point_report(&PointSpec::new(Variant::TwoMode, 0.5, 1.5, 0.0)).unwrap();
        assert!(r.num("E_N(b:Psi)").unwrap() > 0.0);
        assert!(r.num("chi(b:Psi)").unwrap() < 1.0);
        let r = point_report(&PointSpec::new(Variant::TwoMode, 0.0, 1.0, 0.0)).unwrap();
        assert!(r.num("<b+b>").unwrap() > 0.0);
    }

    #[test]
    fn unstable_point_reports_spectrum_only() {
        let r = point_report(&PointSpec::new(Variant::TwoMode, 0.0, 3.0, 0.0)).unwrap();
        assert!(!r.stable);
        assert!(r.num("max_re_eig").unwrap() > 0.0);
        assert!(r.get("E_N(b:Psi)").is_none());
    }

    #[test]
    fn three_mode_lists_every_pair() {
        let r = point_report(&PointSpec::new(Variant::A1A2, 0.2, 1.0, 3.0)).unwrap();
        for key in ["E_N(b:A1)", "E_N(b:A2)", "E_N(A1:A2)", "<A2+A2>", "<A1+A2>.re"] {
            assert!(r.get(key).is_some(), "{key}");
        }
    }
}
