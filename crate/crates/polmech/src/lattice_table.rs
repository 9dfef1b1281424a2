//! Exciton spectrum and cavity couplings as a table.

use std::io::{self, Write};

use polmech_core::lattice::{dipole_dipole_j, exciton_cavity_coupling, exciton_frequency, LatticeParams};
use polmech_core::Result;

use crate::report::num;

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeRow {
    pub k: usize,
    pub omega_k: f64,
    /// `None` for even k, which decouple from the cavity.
    pub f_k: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeTable {
    pub j_alpha: f64,
    pub omega_c: f64,
    pub rows: Vec<LatticeRow>,
}

pub fn lattice_table(p: &LatticeParams, k_max: usize) -> Result<LatticeTable> {
    let j_alpha = dipole_dipole_j(p)?;
    let rows = (1..=k_max.min(p.n_sites))
        .map(|k| {
            Ok(LatticeRow {
                k,
                omega_k: exciton_frequency(p, k)?,
                f_k: if !k.is_multiple_of(2) {
                    Some(exciton_cavity_coupling(p, k)?)
                } else {
                    None
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LatticeTable {
        j_alpha,
        omega_c: p.omega_c,
        rows,
    })
}

impl LatticeTable {
    pub fn write_csv<W: Write>(&self, mut out: W, provenance: &[String]) -> io::Result<()> {
        for line in provenance {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "# J_alpha = {} rad/s", num(self.j_alpha))?;
        writeln!(out, "# omega_c = {} rad/s", num(self.omega_c))?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "omega_k", "f_k"])?;
        for r in &self.rows {
            let f = r.f_k.map(num).unwrap_or_else(|| "decoupled".into());
            w.write_record([r.k.to_string(), num(r.omega_k), f])?;
        }
        w.flush()
    }
}
