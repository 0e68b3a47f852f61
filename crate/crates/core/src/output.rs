//! Cell-center profiles and the plain-text files they are written to.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::Result;
use crate::mesh::{CchState, Mesh1D, SghState};

pub const PROFILE_HEADER: &str = "x,rho,u,p,eps,e_total";
pub const NODES_HEADER: &str = "x,u";

/// Primitive and energy variables at cell centers.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Profile {
    pub x: Vec<f64>,
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub p: Vec<f64>,
    pub eps: Vec<f64>,
    pub e_total: Vec<f64>,
}

impl Profile {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            x: Vec::with_capacity(n),
            rho: Vec::with_capacity(n),
            u: Vec::with_capacity(n),
            p: Vec::with_capacity(n),
            eps: Vec::with_capacity(n),
            e_total: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, x: f64, rho: f64, u: f64, p: f64, eps: f64) {
        self.x.push(x);
        self.rho.push(rho);
        self.u.push(u);
        self.p.push(p);
        self.eps.push(eps);
        self.e_total.push(eps + 0.5 * u * u);
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Cell velocity is the mean of the two node velocities.
    pub fn from_sgh(mesh: &Mesh1D, state: &SghState) -> Self {
        let mut prof = Self::with_capacity(mesh.n_cells());
        for (j, (x, u)) in mesh.cell_centers().into_iter().zip(state.cell_velocity()).enumerate() {
            prof.push(x, state.rho[j], u, state.p[j], state.eps[j]);
        }
        prof
    }

    pub fn from_cch(mesh: &Mesh1D, state: &CchState) -> Self {
        let x = mesh.cell_centers();
        Self {
            rho: state.rho.clone(),
            u: state.u.clone(),
            p: state.p.clone(),
            eps: state.eps.clone(),
            e_total: state.e_total.clone(),
            x,
        }
    }

    /// Named field, as used on the command line and in convergence tables.
    pub fn field(&self, name: &str) -> Option<&[f64]> {
        match name {
            "x" => Some(&self.x),
            "rho" => Some(&self.rho),
            "u" => Some(&self.u),
            "p" => Some(&self.p),
            "eps" => Some(&self.eps),
            "e_total" => Some(&self.e_total),
            _ => None,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * self.len());
        out.push_str(PROFILE_HEADER);
        out.push('\n');
        for j in 0..self.len() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                self.x[j], self.rho[j], self.u[j], self.p[j], self.eps[j], self.e_total[j]
            );
        }
        out
    }
}

pub fn nodes_csv(x: &[f64], u: &[f64]) -> String {
    let mut out = String::from(NODES_HEADER);
    out.push('\n');
    for (x, u) in x.iter().zip(u) {
        let _ = writeln!(out, "{x},{u}");
    }
    out
}

/// Flat `key=value` text, one pair per line, in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary {
    entries: Vec<(String, String)>,
}

impl Summary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn parse(text: &str) -> Self {
        let entries = text
            .lines()
            .filter_map(|l| l.split_once('='))
            .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
            .collect();
        Self { entries }
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut p = Profile::default();
        p.push(0.25, 1.0, 0.5, 0.4, 1.0);
        let csv = p.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(PROFILE_HEADER));
        assert_eq!(lines.next(), Some("0.25,1,0.5,0.4,1,1.125"));
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn csv_round_trips_floats() {
        let mut p = Profile::default();
        p.push(0.1 + 0.2, 1.0 / 3.0, -2e-300, 6.02e23, 1e-12);
        let csv = p.to_csv();
        let row: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(row[0], 0.1 + 0.2);
        assert_eq!(row[1], 1.0 / 3.0);
        assert_eq!(row[2], -2e-300);
    }

    #[test]
    fn summary_round_trip() {
        let mut s = Summary::new();
        s.set("steps", 12).set("status", "ok");
        let back = Summary::parse(&s.render());
        assert_eq!(back, s);
        assert_eq!(back.get("steps"), Some("12"));
    }
}
