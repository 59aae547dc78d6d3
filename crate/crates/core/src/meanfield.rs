//! Discrete form factor of the power-law coupling, the quadratic mean-field
//! (Bogoliubov) mode energies, and subspace bookkeeping of the collective
//! spectrum.
//!
//! The microscopic coefficients `h_{N,n}` and `Γ_n` of the quadratic theory are
//! not available in closed form here. [`CoefficientModel`] is a user-supplied
//! linear family in `F_α(n)`, `⟨s^z⟩` and `⟨n^z⟩`; its defaults are
//! placeholders with no physical calibration.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::collective::{CollectiveObservable, EigenSystem};
use crate::dynamics::eigen_expectations;
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::timescales::log_log_slope;

/// Gauss–Legendre order per panel.
const ORDER: usize = 24;
/// Geometric grading levels toward `s = 0`.
const LEVELS: usize = 60;

/// `F_α(n) = (1-α) 2^(1-α) ∫₀^½ cos(2πsn) s^(-α) ds`.
///
/// The `s → 0` singularity is removed by subtracting 1 from the cosine; the
/// remainder `(cos - 1) s^(-α) ~ s^(2-α)` is integrated on panels graded
/// geometrically toward the origin and split so that none spans more than a
/// quarter period. The subtracted part is `(½)^(1-α)/(1-α)`.
pub fn form_factor(alpha: f64, n: i64) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Domain(format!("form factor needs 0 <= alpha < 1, got {alpha}")));
    }
    let k = 2.0 * std::f64::consts::PI * n.unsigned_abs() as f64;
    let pre = (1.0 - alpha) * 2f64.powf(1.0 - alpha);
    let exact_part = 0.5f64.powf(1.0 - alpha) / (1.0 - alpha);
    if n == 0 {
        return Ok(pre * exact_part);
    }
    let (x, w) = gauss_legendre(ORDER);
    let f = |s: f64| {
        // cos(ks) - 1 = -2 sin²(ks/2), without cancellation.
        let h = (0.5 * k * s).sin();
        -2.0 * h * h * s.powf(-alpha)
    };
    let quarter = 0.25 / n.unsigned_abs() as f64;
    let mut edges = vec![0.5];
    for _ in 0..LEVELS {
        let last = *edges.last().unwrap();
        edges.push(0.5 * last);
    }
    let mut total = 0.0;
    for pair in edges.windows(2) {
        let (hi, lo) = (pair[0], pair[1]);
        let pieces = ((hi - lo) / quarter).ceil().max(1.0) as usize;
        let step = (hi - lo) / pieces as f64;
        for p in 0..pieces {
            let a = lo + p as f64 * step;
            let half = 0.5 * step;
            let mid = a + half;
            total += half * x.iter().zip(&w).map(|(xi, wi)| wi * f(mid + half * xi)).sum::<f64>();
        }
    }
    // Remaining [0, 2^-LEVELS · ½]: |integrand| <= k² s^(2-α)/2.
    Ok(pre * (total + exact_part))
}

/// Coefficients of one mode of the quadratic Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeCoefficients {
    pub n: i64,
    pub h_n: f64,
    pub gamma: Complex64,
    pub sz: f64,
    pub nz: f64,
}

/// `E_{A/B} = ±sqrt(h_n² + |Γ|²) + J n_spins ⟨s^z⟩²`, returned as `(E_A, E_B)`
/// with `E_A >= E_B`.
pub fn bogoliubov_energies(mc: &ModeCoefficients, exchange: f64, n_spins: usize) -> Result<(f64, f64)> {
    if !(mc.h_n.is_finite() && mc.gamma.re.is_finite() && mc.gamma.im.is_finite() && mc.sz.is_finite()) {
        return Err(Error::param("coefficients", "must be finite"));
    }
    let offset = exchange * n_spins as f64 * mc.sz * mc.sz;
    let r = mc.h_n.hypot(mc.gamma.norm());
    Ok((offset + r, offset - r))
}

/// Linear coefficient family `c0 + c_nz ⟨n^z⟩ + c_sz ⟨s^z⟩ + c_f F_α(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearForm {
    #[serde(default)]
    pub c0: f64,
    #[serde(default)]
    pub c_nz: f64,
    #[serde(default)]
    pub c_sz: f64,
    #[serde(default)]
    pub c_f: f64,
}

impl LinearForm {
    pub fn eval(&self, f: f64, sz: f64, nz: f64) -> f64 {
        self.c0 + self.c_nz * nz + self.c_sz * sz + self.c_f * f
    }
}

/// User-supplied mode coefficients. The default is a placeholder
/// (`h_n = ⟨n^z⟩ + F_α(n)`, `Γ_n = ⟨s^z⟩ + F_α(n)`), not a physical model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientModel {
    pub h: LinearForm,
    pub gamma_re: LinearForm,
    #[serde(default = "zero_form")]
    pub gamma_im: LinearForm,
}

fn zero_form() -> LinearForm {
    LinearForm {
        c0: 0.0,
        c_nz: 0.0,
        c_sz: 0.0,
        c_f: 0.0,
    }
}

impl Default for CoefficientModel {
    fn default() -> Self {
        CoefficientModel {
            h: LinearForm {
                c_nz: 1.0,
                c_f: 1.0,
                ..zero_form()
            },
            gamma_re: LinearForm {
                c_sz: 1.0,
                c_f: 1.0,
                ..zero_form()
            },
            gamma_im: zero_form(),
        }
    }
}

impl CoefficientModel {
    pub fn coefficients(&self, alpha: f64, n: i64, sz: f64, nz: f64) -> Result<ModeCoefficients> {
        let f = form_factor(alpha, n)?;
        Ok(ModeCoefficients {
            n,
            h_n: self.h.eval(f, sz, nz),
            gamma: Complex64::new(self.gamma_re.eval(f, sz, nz), self.gamma_im.eval(f, sz, nz)),
            sz,
            nz,
        })
    }
}

/// Label count and level spacing of one spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubspaceCensus {
    pub n_spins: usize,
    /// Distinct `(m, round(⟨n^z⟩ / tol))` labels.
    pub count: usize,
    /// Mean gap between consecutive sorted eigenvalues.
    pub mean_spacing: f64,
}

/// Clusters eigenstates by sector and rounded `⟨n^z⟩`.
pub fn subspace_census(es: &EigenSystem, tol: f64) -> Result<SubspaceCensus> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::param("tol", "must be positive"));
    }
    let nz = eigen_expectations(es, CollectiveObservable::StaggeredNz);
    let mut labels: Vec<(usize, i64)> = es
        .sectors
        .iter()
        .zip(&nz)
        .flat_map(|(se, v)| v.iter().map(move |x| (se.sector.s, (x / tol).round() as i64)))
        .collect();
    labels.sort_unstable();
    labels.dedup();
    let e = es.sorted_energies();
    let mean_spacing = if e.len() > 1 {
        (e[e.len() - 1] - e[0]) / (e.len() - 1) as f64
    } else {
        0.0
    };
    Ok(SubspaceCensus {
        n_spins: es.params.n_spins,
        count: labels.len(),
        mean_spacing,
    })
}

/// Log–log slopes of spacing and count against system size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusSweep {
    pub rows: Vec<SubspaceCensus>,
    pub spacing_slope: f64,
    pub count_slope: f64,
}

pub fn census_sweep(rows: Vec<SubspaceCensus>) -> CensusSweep {
    let n: Vec<f64> = rows.iter().map(|r| r.n_spins as f64).collect();
    let s: Vec<f64> = rows.iter().map(|r| r.mean_spacing).collect();
    let c: Vec<f64> = rows.iter().map(|r| r.count as f64).collect();
    CensusSweep {
        spacing_slope: log_log_slope(&n, &s),
        count_slope: log_log_slope(&n, &c),
        rows,
    }
}
