//! Eigenstate-resolved diagnostics: expectation-value scans, A–B entanglement,
//! Husimi portraits, scar detection and the diagonal-vs-microcanonical
//! comparison at fixed energy.

use nalgebra::DMatrix;
use num_complex::Complex64;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::collective::{CollectiveObservable, EigenSystem, SectorIndex};
use crate::dynamics::{diagonal_average, microcanonical_average};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::pendulum::solve_gamma;
use crate::states::{tilted_state_with, PureState, XRotation};

/// One eigenstate of the collective Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenstateScanRow {
    /// Total magnetization `m = m_A + m_B`.
    pub m: f64,
    /// Index of the eigenvector inside its sector (ascending energy).
    pub index: usize,
    pub energy: f64,
    pub nz: f64,
    pub sz: f64,
    /// `⟨S²⟩ / n_spins²`.
    pub spin_sq: f64,
    /// A–B entanglement entropy in nats.
    pub entropy: f64,
}

/// `-Σ p ln p`, skipping zeros.
fn shannon(p: impl IntoIterator<Item = f64>) -> f64 {
    p.into_iter().filter(|&x| x > 0.0).map(|x| -x * x.ln()).sum()
}

fn scan_sector(es: &EigenSystem, sector: SectorIndex) -> Vec<EigenstateScanRow> {
    let spin = es.spin;
    let se = es.sector(sector);
    let n2 = (2.0 * spin.twice() as f64).powi(2);
    let nz_op = CollectiveObservable::StaggeredNz.block(sector, spin);
    let s2_op = CollectiveObservable::TotalSpinSq.block(sector, spin);
    let sz = 2.0 * sector.magnetization(spin) / (2.0 * spin.twice() as f64);
    (0..se.dim())
        .map(|a| {
            let v = se.vector(a);
            EigenstateScanRow {
                m: sector.magnetization(spin),
                index: a,
                energy: se.energies()[a],
                nz: nz_op.bilinear(v, v),
                sz,
                spin_sq: s2_op.bilinear(v, v) / n2,
                // Inside a sector the coefficient matrix is anti-diagonal.
                entropy: shannon(v.iter().map(|x| x * x)),
            }
        })
        .collect()
}

/// One row per eigenstate, ordered by sector then energy.
pub fn eigenstate_scan(es: &EigenSystem) -> Vec<EigenstateScanRow> {
    let sectors: Vec<SectorIndex> = SectorIndex::all(es.spin).collect();
    #[cfg(feature = "parallel")]
    let iter = sectors.par_iter();
    #[cfg(not(feature = "parallel"))]
    let iter = sectors.iter();
    let blocks: Vec<Vec<EigenstateScanRow>> = iter.map(|&s| scan_sector(es, s)).collect();
    blocks.into_iter().flatten().collect()
}

/// Von Neumann entropy (nats) of the A-reduced state of a normalized state.
///
/// States confined to one sector have an anti-diagonal coefficient matrix and
/// the Schmidt weights are the squared amplitudes; otherwise an SVD is used.
pub fn entanglement_entropy(state: &PureState) -> f64 {
    let occupied: Vec<&Vec<Complex64>> = state
        .sectors
        .iter()
        .filter(|v| v.iter().any(|c| c.norm_sqr() > 0.0))
        .collect();
    if occupied.len() <= 1 {
        return occupied
            .first()
            .map(|v| shannon(v.iter().map(|c| c.norm_sqr())))
            .unwrap_or(0.0);
    }
    let c: DMatrix<Complex64> = state.coefficient_matrix();
    let sv = c.singular_values();
    let total: f64 = sv.iter().map(|s| s * s).sum();
    shannon(sv.iter().map(|s| s * s / total))
}

/// `Q(θ, γ) = |⟨θ, γ|ψ⟩|²` on a rectangular grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HusimiGrid {
    pub theta: Vec<f64>,
    pub gamma: Vec<f64>,
    /// Row-major: `q[i * gamma.len() + k]` belongs to `(theta[i], gamma[k])`.
    pub q: Vec<f64>,
}

impl HusimiGrid {
    pub fn at(&self, i: usize, k: usize) -> f64 {
        self.q[i * self.gamma.len() + k]
    }

    /// Fraction of the grid total inside `|θ - θc| <= dθ`, `|γ - γc| <= dγ`.
    pub fn mass_fraction(&self, center: (f64, f64), half: (f64, f64)) -> f64 {
        let total: f64 = self.q.iter().sum();
        if total <= 0.0 {
            return 0.0;
        }
        let mut inside = 0.0;
        for (i, th) in self.theta.iter().enumerate() {
            if (th - center.0).abs() > half.0 {
                continue;
            }
            for (k, g) in self.gamma.iter().enumerate() {
                if (g - center.1).abs() <= half.1 {
                    inside += self.at(i, k);
                }
            }
        }
        inside / total
    }
}

/// Evenly spaced `[0, 2π) × [-π, π)` grid.
pub fn phase_space_grid(n_theta: usize, n_gamma: usize) -> (Vec<f64>, Vec<f64>) {
    use std::f64::consts::PI;
    let th = (0..n_theta).map(|i| 2.0 * PI * i as f64 / n_theta as f64).collect();
    let ga = (0..n_gamma).map(|k| -PI + 2.0 * PI * k as f64 / n_gamma as f64).collect();
    (th, ga)
}

/// Husimi distribution of `state` over tilted states.
pub fn husimi(state: &PureState, theta: &[f64], gamma: &[f64]) -> Result<HusimiGrid> {
    husimi_with(&XRotation::new(state.spin), state, theta, gamma)
}

/// `husimi` reusing a prepared rotation.
pub fn husimi_with(rot: &XRotation, state: &PureState, theta: &[f64], gamma: &[f64]) -> Result<HusimiGrid> {
    use std::f64::consts::PI;
    let bad = |x: &f64| !x.is_finite() || *x < -PI - 1e-12 || *x >= 2.0 * PI + 1e-12;
    if theta.iter().any(bad) || gamma.iter().any(bad) {
        return Err(Error::param("grid", "angles must be finite and inside [-π, 2π)"));
    }
    if rot.spin() != state.spin {
        return Err(Error::param("state", "spin does not match the rotation"));
    }
    let nodes: Vec<(f64, f64)> = theta.iter().flat_map(|&t| gamma.iter().map(move |&g| (t, g))).collect();
    #[cfg(feature = "parallel")]
    let iter = nodes.par_iter();
    #[cfg(not(feature = "parallel"))]
    let iter = nodes.iter();
    let q = iter
        .map(|&(t, g)| tilted_state_with(rot, t, g).overlap_with(state).norm_sqr())
        .collect();
    Ok(HusimiGrid {
        theta: theta.to_vec(),
        gamma: gamma.to_vec(),
        q,
    })
}

/// Eigenvector `index` of `sector` as a [`PureState`].
pub fn eigenstate(es: &EigenSystem, m: f64, index: usize) -> Result<PureState> {
    let sector = SectorIndex::from_magnetization(es.spin, m)?;
    let se = es.sector(sector);
    if index >= se.dim() {
        return Err(Error::param("index", format!("sector m = {m} has only {} states", se.dim())));
    }
    let amps = se.vector(index).iter().map(|&x| Complex64::new(x, 0.0)).collect();
    Ok(PureState::in_sector(es.spin, sector, amps))
}

/// Settings for [`detect_scars`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScarOptions {
    /// Keep rows with `⟨S²⟩/n_spins² < spin_filter`.
    pub spin_filter: f64,
    /// Equal-width energy bins over the scan's energy range.
    pub bins: usize,
    /// Flag rows below this percentile of their bin.
    pub percentile: f64,
    /// ... and below this fraction of the bin median (guards flat bins).
    pub median_fraction: f64,
    /// Bins with fewer rows are ignored.
    pub min_bin_count: usize,
}

impl Default for ScarOptions {
    fn default() -> Self {
        ScarOptions {
            spin_filter: 0.2,
            bins: 100,
            percentile: 10.0,
            median_fraction: 0.5,
            min_bin_count: 3,
        }
    }
}

/// Entropy summary of one energy bin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub median_entropy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScarReport {
    pub bins: Vec<EntropyBin>,
    /// Index into `bins` of the lowest median entropy (populated bins only).
    pub min_bin: Option<usize>,
    /// Bin containing the separatrix energy.
    pub separatrix_bin: Option<usize>,
    /// Flagged rows (indices into the scan), lowest entropy first.
    pub flagged: Vec<usize>,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Flags anomalously low-entropy eigenstates among the low-`S²` rows.
pub fn detect_scars(scan: &[EigenstateScanRow], e_s: f64, opts: &ScarOptions) -> Result<ScarReport> {
    if opts.bins == 0 {
        return Err(Error::param("bins", "must be positive"));
    }
    if !(0.0..=100.0).contains(&opts.percentile) {
        return Err(Error::param("percentile", "must lie in [0, 100]"));
    }
    let (lo, hi) = scan
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| (a.min(r.energy), b.max(r.energy)));
    if !(hi > lo) {
        return Ok(ScarReport {
            bins: Vec::new(),
            min_bin: None,
            separatrix_bin: None,
            flagged: Vec::new(),
        });
    }
    let width = (hi - lo) / opts.bins as f64;
    let bin_of = |e: f64| (((e - lo) / width) as usize).min(opts.bins - 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); opts.bins];
    for (i, r) in scan.iter().enumerate() {
        if r.spin_sq < opts.spin_filter {
            members[bin_of(r.energy)].push(i);
        }
    }
    let mut bins = Vec::with_capacity(opts.bins);
    let mut flagged = Vec::new();
    for (b, idx) in members.iter().enumerate() {
        let mut s: Vec<f64> = idx.iter().map(|&i| scan[i].entropy).collect();
        s.sort_by(f64::total_cmp);
        let median = quantile(&s, 0.5);
        bins.push(EntropyBin {
            lo: lo + b as f64 * width,
            hi: lo + (b + 1) as f64 * width,
            count: idx.len(),
            median_entropy: median,
        });
        if idx.len() < opts.min_bin_count {
            continue;
        }
        let cut = quantile(&s, opts.percentile / 100.0);
        for &i in idx {
            let e = scan[i].entropy;
            if e <= cut && e < opts.median_fraction * median {
                flagged.push(i);
            }
        }
    }
    flagged.sort_by(|&a, &b| scan[a].entropy.total_cmp(&scan[b].entropy));
    let min_bin = bins
        .iter()
        .enumerate()
        .filter(|(_, b)| b.count >= opts.min_bin_count)
        .min_by(|a, b| a.1.median_entropy.total_cmp(&b.1.median_entropy))
        .map(|(i, _)| i);
    let separatrix_bin = (lo..=hi).contains(&e_s).then(|| bin_of(e_s));
    Ok(ScarReport {
        bins,
        min_bin,
        separatrix_bin,
        flagged,
    })
}

/// Spread (max - min) of `⟨n^z⟩` among rows whose energy is within `half` of `e`.
pub fn nz_spread(scan: &[EigenstateScanRow], e: f64, half: f64) -> Option<f64> {
    let vals: Vec<f64> = scan.iter().filter(|r| (r.energy - e).abs() <= half).map(|r| r.nz).collect();
    if vals.len() < 2 {
        return None;
    }
    let (a, b) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    Some(b - a)
}

/// `Σ_a |⟨a|ψ⟩|² ⟨a|O|a⟩` from a scan and a state's eigenbasis weights.
pub fn overlap_weighted(es: &EigenSystem, scan: &[EigenstateScanRow], psi: &PureState, field: impl Fn(&EigenstateScanRow) -> f64) -> f64 {
    let mut k = 0;
    let mut acc = 0.0;
    for (se, v) in es.sectors.iter().zip(&psi.sectors) {
        for c in se.project(v) {
            acc += c.norm_sqr() * field(&scan[k]);
            k += 1;
        }
    }
    acc
}

/// Diagonal vs microcanonical `n^z` for a tilted state at fixed energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRow {
    pub theta0: f64,
    pub gamma0: f64,
    pub energy: f64,
    pub diagonal: f64,
    pub microcanonical: f64,
    pub window_count: usize,
}

/// For each `θ₀` finds the tilt `γ₀` reaching energy `e0` and compares the
/// diagonal-ensemble `n^z` with the microcanonical one. Angles without a
/// real solution are skipped.
pub fn ensemble_comparison(es: &EigenSystem, params: &ModelParams, e0: f64, thetas: &[f64], window: f64) -> Result<Vec<EnsembleRow>> {
    let mc = microcanonical_average(es, e0, window, CollectiveObservable::StaggeredNz)?;
    let rot = XRotation::new(es.spin);
    let mut rows = Vec::new();
    for &theta0 in thetas {
        let Some(gamma0) = solve_gamma(params, theta0, e0) else {
            continue;
        };
        let st = tilted_state_with(&rot, theta0, gamma0);
        let energy = st.energy(params);
        let diag = diagonal_average(es, &st, CollectiveObservable::StaggeredNz)?;
        rows.push(EnsembleRow {
            theta0,
            gamma0,
            energy,
            diagonal: diag.value,
            microcanonical: mc.value,
            window_count: mc.count,
        });
    }
    Ok(rows)
}
