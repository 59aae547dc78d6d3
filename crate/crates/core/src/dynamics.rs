//! Exact time evolution in the eigenbasis.
//!
//! Every `S^z`-conserving observable evolves as a finite sum of Bohr lines,
//! `⟨O⟩(t) = O_diag + Σ_{a<b} 2 Re(A_ab e^{iω_ab t})` with `ω_ab = E_b - E_a`
//! inside each sector. The line set is built once per (state, observable) and
//! evaluated on any time grid without time-stepping error.

use nalgebra::DMatrix;
use num_complex::Complex64;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::collective::{CollectiveObservable, EigenSystem, SectorEigen};
use crate::error::{Error, Result};
use crate::params::Spin;
use crate::states::{PureState, StateRef};

/// Relative gap below which two Bohr frequencies count as equal.
const DEGENERACY_TOL: f64 = 1e-10;

/// Spacing of the time axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Linear,
    Logarithmic,
    Explicit,
}

/// Time axis description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum TimeGrid {
    /// `points` equally spaced times in `[t_min, t_max]`.
    Linear { t_min: f64, t_max: f64, points: usize },
    /// `points` log-spaced times in `[t_min, t_max]`, preceded by `t = 0`.
    Logarithmic { t_min: f64, t_max: f64, points: usize },
    Explicit { times: Vec<f64> },
}

impl TimeGrid {
    pub fn linear(t_max: f64, points: usize) -> Self {
        TimeGrid::Linear {
            t_min: 0.0,
            t_max,
            points,
        }
    }

    pub fn kind(&self) -> GridKind {
        match self {
            TimeGrid::Linear { .. } => GridKind::Linear,
            TimeGrid::Logarithmic { .. } => GridKind::Logarithmic,
            TimeGrid::Explicit { .. } => GridKind::Explicit,
        }
    }

    pub fn times(&self) -> Result<Vec<f64>> {
        let times: Vec<f64> = match self {
            &TimeGrid::Linear { t_min, t_max, points } => {
                if points < 2 || t_max <= t_min {
                    return Err(Error::param("times", "linear grid needs points >= 2 and t_max > t_min"));
                }
                let dt = (t_max - t_min) / (points - 1) as f64;
                (0..points).map(|k| t_min + k as f64 * dt).collect()
            }
            &TimeGrid::Logarithmic { t_min, t_max, points } => {
                if points < 2 || t_min <= 0.0 || t_max <= t_min {
                    return Err(Error::param("times", "log grid needs points >= 2 and 0 < t_min < t_max"));
                }
                let (a, b) = (t_min.ln(), t_max.ln());
                std::iter::once(0.0)
                    .chain((0..points).map(|k| (a + (b - a) * k as f64 / (points - 1) as f64).exp()))
                    .collect()
            }
            TimeGrid::Explicit { times } => times.clone(),
        };
        if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param("times", "must be finite and strictly increasing"));
        }
        if times.is_empty() {
            return Err(Error::param("times", "empty time grid"));
        }
        Ok(times)
    }
}

/// An observable trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub observable: String,
    pub grid: GridKind,
    /// Unit of the time axis (inverse of the energy unit of `J`, `h`).
    pub time_unit: String,
    pub provenance: String,
}

impl TimeSeries {
    /// Uniform spacing if the grid is linear to relative precision `1e-9`.
    pub fn uniform_step(&self) -> Option<f64> {
        uniform_step(&self.times)
    }

    /// Mean of the values with `t >= t_from`.
    pub fn late_mean(&self, t_from: f64) -> f64 {
        let tail: Vec<f64> = self
            .times
            .iter()
            .zip(&self.values)
            .filter(|(t, _)| **t >= t_from)
            .map(|(_, v)| *v)
            .collect();
        tail.iter().sum::<f64>() / tail.len().max(1) as f64
    }
}

pub(crate) fn uniform_step(times: &[f64]) -> Option<f64> {
    if times.len() < 2 {
        return None;
    }
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    let ok = times
        .iter()
        .enumerate()
        .all(|(k, &t)| (t - (times[0] + k as f64 * dt)).abs() <= 1e-9 * dt.abs().max(times[0].abs()));
    ok.then_some(dt)
}

/// One Bohr line: contributes `A e^{iωt}` to the signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BohrLine {
    pub omega: f64,
    pub amplitude: Complex64,
}

/// All positive-frequency lines of one observable in one state.
///
/// The full spectrum is Hermitian: each stored line `(ω, A)` comes with
/// `(-ω, A*)`, and the zero-frequency line carries the diagonal average.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineSet {
    pub observable: CollectiveObservable,
    /// `Σ_a ρ_aa O_aa`.
    pub diagonal: f64,
    /// Contribution of exactly degenerate pairs (constant in time).
    pub degenerate_constant: f64,
    /// Number of degenerate within-sector pairs with non-zero weight.
    pub degenerate_pairs: usize,
    /// Positive-frequency lines, sorted by sector then eigenvalue rank.
    pub lines: Vec<BohrLine>,
    /// Bound on `|⟨O⟩(t) - evaluated(t)|` from pruned lines.
    pub discarded_bound: f64,
}

impl LineSet {
    /// `⟨O⟩(t)`.
    pub fn value_at(&self, t: f64) -> f64 {
        self.offset()
            + self
                .lines
                .iter()
                .map(|l| 2.0 * (l.amplitude * Complex64::from_polar(1.0, l.omega * t)).re)
                .sum::<f64>()
    }

    fn offset(&self) -> f64 {
        self.diagonal + self.degenerate_constant
    }

    /// Evaluates the signal on `times`. Uniform grids use a phase recurrence
    /// resynchronized every 512 steps.
    pub fn evaluate(&self, times: &[f64]) -> Vec<f64> {
        const CHUNK: usize = 512;
        let dt = uniform_step(times);
        let chunks: Vec<&[f64]> = times.chunks(CHUNK).collect();
        let eval_chunk = |chunk: &&[f64]| -> Vec<f64> {
            let mut acc = vec![self.offset(); chunk.len()];
            match dt {
                Some(dt) => {
                    for l in &self.lines {
                        let step = Complex64::from_polar(1.0, l.omega * dt);
                        let mut z = l.amplitude * Complex64::from_polar(1.0, l.omega * chunk[0]);
                        for a in acc.iter_mut() {
                            *a += 2.0 * z.re;
                            z *= step;
                        }
                    }
                }
                None => {
                    for l in &self.lines {
                        for (a, &t) in acc.iter_mut().zip(chunk.iter()) {
                            *a += 2.0 * (l.amplitude * Complex64::from_polar(1.0, l.omega * t)).re;
                        }
                    }
                }
            }
            acc
        };
        #[cfg(feature = "parallel")]
        let parts: Vec<Vec<f64>> = chunks.par_iter().map(eval_chunk).collect();
        #[cfg(not(feature = "parallel"))]
        let parts: Vec<Vec<f64>> = chunks.iter().map(eval_chunk).collect();
        parts.concat()
    }

    /// Lines with coinciding frequencies (e.g. from the degenerate sectors
    /// `m` and `-m`) merged into one, sorted by frequency.
    pub fn merged(&self) -> Vec<BohrLine> {
        let mut sorted = self.lines.clone();
        sorted.sort_by(|a, b| a.omega.total_cmp(&b.omega));
        let scale = sorted.last().map_or(1.0, |l| l.omega.abs().max(1.0));
        let mut out: Vec<BohrLine> = Vec::with_capacity(sorted.len());
        for l in sorted {
            match out.last_mut() {
                Some(prev) if (l.omega - prev.omega).abs() <= DEGENERACY_TOL * scale => prev.amplitude += l.amplitude,
                _ => out.push(l),
            }
        }
        out
    }

    /// Infinite-time average of `(⟨O⟩(t) - O_diag)²`, i.e. `Σ_ω 2|A_ω|²`
    /// over distinct frequencies.
    pub fn parseval_weight(&self) -> f64 {
        self.degenerate_constant.powi(2) + self.merged().iter().map(|l| 2.0 * l.amplitude.norm_sqr()).sum::<f64>()
    }

    /// The line with the largest `|A|`.
    pub fn dominant(&self) -> Option<BohrLine> {
        self.lines
            .iter()
            .copied()
            .max_by(|a, b| a.amplitude.norm().total_cmp(&b.amplitude.norm()))
    }
}

/// Options for building line sets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineOptions {
    /// Lines with `|A| <` this are dropped (their sum is reported).
    pub line_cutoff: f64,
}

impl Default for LineOptions {
    fn default() -> Self {
        LineOptions { line_cutoff: 1e-13 }
    }
}

/// Members in factored form; mixed members with identical `⟨S^z⟩`-blind
/// content (same polar angle) are merged, which is exact for every
/// `S^z`-conserving observable.
enum Members<'a> {
    Pure(&'a PureState),
    Weighted(Vec<(f64, &'a crate::states::ProductState)>),
}

fn members<'a>(state: &StateRef<'a>) -> Members<'a> {
    match *state {
        StateRef::Pure(p) => Members::Pure(p),
        StateRef::Product(p) => Members::Weighted(vec![(1.0, p)]),
        StateRef::Mixed(e) => {
            let mut order: Vec<usize> = (0..e.members.len()).collect();
            order.sort_by(|&a, &b| e.members[a].direction[2].total_cmp(&e.members[b].direction[2]).then(a.cmp(&b)));
            let mut out: Vec<(f64, &crate::states::ProductState)> = Vec::new();
            let mut last_z = f64::NAN;
            for i in order {
                let m = &e.members[i];
                if (m.direction[2] - last_z).abs() <= 1e-14 {
                    out.last_mut().expect("previous member").0 += m.weight;
                } else {
                    out.push((m.weight, &m.state));
                    last_z = m.direction[2];
                }
            }
            Members::Weighted(out)
        }
    }
}

/// Density matrix of one sector in its eigenbasis, as `(Re ρ, Im ρ)`, or
/// `None` if the sector carries negligible weight.
fn sector_density(se: &SectorEigen, members: &Members) -> Option<(DMatrix<f64>, DMatrix<f64>)> {
    let d = se.dim();
    let sector = se.sector;
    let vt = DMatrix::from_row_slice(d, d, &se.eigen.vectors);
    let mut cols: Vec<(f64, Vec<Complex64>)> = Vec::new();
    let mut total = 0.0;
    match members {
        Members::Pure(p) => {
            let psi = &p.sectors[sector.s];
            let w: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
            total += w;
            cols.push((1.0, psi.clone()));
        }
        Members::Weighted(list) => {
            let mut buf = Vec::new();
            for &(weight, st) in list {
                st.sector_amplitudes(sector, &mut buf);
                let w: f64 = buf.iter().map(|c| c.norm_sqr()).sum();
                if w > 1e-34 {
                    total += weight * w;
                    cols.push((weight, buf.clone()));
                }
            }
        }
    }
    if total < 1e-30 {
        return None;
    }
    let k = cols.len();
    let re = DMatrix::from_fn(d, k, |i, c| cols[c].1[i].re);
    let im = DMatrix::from_fn(d, k, |i, c| cols[c].1[i].im);
    let cr = &vt * re;
    let ci = &vt * im;
    let mut crw = cr.clone();
    let mut ciw = ci.clone();
    for (c, (w, _)) in cols.iter().enumerate() {
        crw.column_mut(c).scale_mut(*w);
        ciw.column_mut(c).scale_mut(*w);
    }
    let rho_re = &crw * cr.transpose() + &ciw * ci.transpose();
    let rho_im = &ciw * cr.transpose() - &crw * ci.transpose();
    Some((rho_re, rho_im))
}

/// `Vᵀ O V` for a sector.
fn observable_in_eigenbasis(se: &SectorEigen, spin: Spin, obs: CollectiveObservable) -> DMatrix<f64> {
    let d = se.dim();
    let op = obs.block(se.sector, spin);
    let vt = DMatrix::from_row_slice(d, d, &se.eigen.vectors);
    let mut ov = DMatrix::zeros(d, d);
    for a in 0..d {
        let col = op.apply(se.vector(a));
        for (i, x) in col.into_iter().enumerate() {
            ov[(i, a)] = x;
        }
    }
    vt * ov
}

struct SectorLines {
    diagonal: f64,
    degenerate_constant: f64,
    degenerate_pairs: usize,
    lines: Vec<BohrLine>,
    discarded: f64,
}

fn sector_lines(
    se: &SectorEigen,
    spin: Spin,
    members: &Members,
    obs: CollectiveObservable,
    opts: &LineOptions,
    scale: f64,
) -> SectorLines {
    let mut out = SectorLines {
        diagonal: 0.0,
        degenerate_constant: 0.0,
        degenerate_pairs: 0,
        lines: Vec::new(),
        discarded: 0.0,
    };
    let Some((rr, ri)) = sector_density(se, members) else {
        return out;
    };
    let o = observable_in_eigenbasis(se, spin, obs);
    let e = se.energies();
    let d = se.dim();
    for a in 0..d {
        out.diagonal += rr[(a, a)] * o[(a, a)];
        for b in a + 1..d {
            let amp = Complex64::new(rr[(a, b)], ri[(a, b)]) * o[(a, b)];
            let mag = amp.norm();
            if mag == 0.0 {
                continue;
            }
            let omega = e[b] - e[a];
            if omega <= DEGENERACY_TOL * scale {
                out.degenerate_constant += 2.0 * amp.re;
                out.degenerate_pairs += 1;
            } else if mag < opts.line_cutoff {
                out.discarded += 2.0 * mag;
            } else {
                out.lines.push(BohrLine { omega, amplitude: amp });
            }
        }
    }
    out
}

fn check_state(es: &EigenSystem, state: &StateRef) -> Result<()> {
    if state.spin() != es.spin {
        return Err(Error::Usage(format!(
            "state lives on j = {} but the eigensystem has j = {}",
            state.spin().value(),
            es.spin.value()
        )));
    }
    Ok(())
}

/// Builds the Bohr line set of `obs` in `state`.
pub fn line_set<'a>(
    es: &EigenSystem,
    state: impl Into<StateRef<'a>>,
    obs: CollectiveObservable,
    opts: &LineOptions,
) -> Result<LineSet> {
    let state = state.into();
    check_state(es, &state)?;
    let members = members(&state);
    let (lo, hi) = es.energy_range();
    let scale = (hi - lo).abs().max(1e-300);
    #[cfg(feature = "parallel")]
    let parts: Vec<SectorLines> = es
        .sectors
        .par_iter()
        .map(|se| sector_lines(se, es.spin, &members, obs, opts, scale))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<SectorLines> = es
        .sectors
        .iter()
        .map(|se| sector_lines(se, es.spin, &members, obs, opts, scale))
        .collect();
    let mut set = LineSet {
        observable: obs,
        diagonal: 0.0,
        degenerate_constant: 0.0,
        degenerate_pairs: 0,
        lines: Vec::new(),
        discarded_bound: 0.0,
    };
    for p in parts {
        set.diagonal += p.diagonal;
        set.degenerate_constant += p.degenerate_constant;
        set.degenerate_pairs += p.degenerate_pairs;
        set.discarded_bound += p.discarded;
        set.lines.extend(p.lines);
    }
    Ok(set)
}

/// `⟨O⟩(t)` on the given times.
pub fn evolve_observable<'a>(
    es: &EigenSystem,
    state: impl Into<StateRef<'a>>,
    obs: CollectiveObservable,
    grid: &TimeGrid,
) -> Result<TimeSeries> {
    let state = state.into();
    let times = grid.times()?;
    let set = line_set(es, state, obs, &LineOptions::default())?;
    let values = set.evaluate(&times);
    Ok(TimeSeries {
        times,
        values,
        observable: obs.name().to_string(),
        grid: grid.kind(),
        time_unit: "1/energy".to_string(),
        provenance: format!(
            "J={} h={} n_spins={} members={}",
            es.params.exchange,
            es.params.field,
            es.params.n_spins,
            state.member_count()
        ),
    })
}

/// Evolves a pure state by `t`: `e^{-iHt} |ψ⟩`.
pub fn evolve_state(es: &EigenSystem, psi: &PureState, t: f64) -> Result<PureState> {
    check_state(es, &StateRef::Pure(psi))?;
    let mut out = psi.clone();
    for (se, v) in es.sectors.iter().zip(out.sectors.iter_mut()) {
        let c = se.project(v);
        let d = se.dim();
        let mut next = vec![Complex64::new(0.0, 0.0); d];
        for (a, ca) in c.iter().enumerate() {
            let phase = *ca * Complex64::from_polar(1.0, -se.energies()[a] * t);
            for (n, &x) in next.iter_mut().zip(se.vector(a)) {
                *n += phase * x;
            }
        }
        *v = next;
    }
    Ok(out)
}

/// Stick spectrum of an observable with a Gaussian-broadened profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierSpectrum {
    pub observable: CollectiveObservable,
    /// Weight of the `ω = 0` line (the diagonal-ensemble average).
    pub zero_weight: f64,
    /// Positive-frequency lines; `(-ω, A*)` partners are implied.
    pub lines: Vec<BohrLine>,
    pub discarded_bound: f64,
}

impl FourierSpectrum {
    /// Lines at both signs of frequency.
    pub fn hermitian_lines(&self) -> Vec<BohrLine> {
        let mut all: Vec<BohrLine> = self
            .lines
            .iter()
            .map(|l| BohrLine {
                omega: -l.omega,
                amplitude: l.amplitude.conj(),
            })
            .chain(self.lines.iter().copied())
            .collect();
        all.sort_by(|a, b| a.omega.total_cmp(&b.omega));
        all
    }

    /// `|∫ ⟨O⟩(t) e^{-t²/2τ²} e^{-iνt} dt|` at each `ν`: every line broadened
    /// into a Gaussian of width `1/τ`.
    pub fn profile(&self, nu: &[f64], tau: f64) -> Vec<f64> {
        let norm = (2.0 * std::f64::consts::PI).sqrt() * tau;
        let g = |x: f64| (-0.5 * tau * tau * x * x).exp();
        nu.iter()
            .map(|&v| {
                let mut acc = Complex64::new(self.zero_weight * g(v), 0.0);
                for l in &self.lines {
                    acc += l.amplitude * g(v - l.omega) + l.amplitude.conj() * g(v + l.omega);
                }
                norm * acc.norm()
            })
            .collect()
    }

    /// Histogram of `Σ|A|` over `bins` equal bins of `[0, omega_max]`.
    pub fn binned(&self, bins: usize, omega_max: f64) -> Vec<(f64, f64)> {
        let width = omega_max / bins as f64;
        let mut h = vec![0.0; bins];
        for l in &self.lines {
            let k = (l.omega / width) as usize;
            if k < bins {
                h[k] += l.amplitude.norm();
            }
        }
        h.into_iter().enumerate().map(|(k, w)| ((k as f64 + 0.5) * width, w)).collect()
    }
}

/// Bohr-frequency spectrum of `obs` in `state`.
pub fn bohr_spectrum<'a>(es: &EigenSystem, state: impl Into<StateRef<'a>>, obs: CollectiveObservable) -> Result<FourierSpectrum> {
    let set = line_set(es, state, obs, &LineOptions::default())?;
    Ok(FourierSpectrum {
        observable: obs,
        zero_weight: set.diagonal + set.degenerate_constant,
        lines: set.lines,
        discarded_bound: set.discarded_bound,
    })
}

/// Diagonal-ensemble average with the degeneracy bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagonalAverage {
    pub value: f64,
    /// Degenerate within-sector pairs; when non-zero the time average also
    /// contains their constant contribution.
    pub degenerate_pairs: usize,
}

/// `Σ_a ρ_aa O_aa`.
pub fn diagonal_average<'a>(es: &EigenSystem, state: impl Into<StateRef<'a>>, obs: CollectiveObservable) -> Result<DiagonalAverage> {
    let set = line_set(es, state, obs, &LineOptions::default())?;
    Ok(DiagonalAverage {
        value: set.diagonal,
        degenerate_pairs: set.degenerate_pairs,
    })
}

/// Eigenstate expectation values `⟨a|O|a⟩`, sector by sector.
pub fn eigen_expectations(es: &EigenSystem, obs: CollectiveObservable) -> Vec<Vec<f64>> {
    es.sectors
        .iter()
        .map(|se| {
            let op = obs.block(se.sector, es.spin);
            (0..se.dim()).map(|a| op.bilinear(se.vector(a), se.vector(a))).collect()
        })
        .collect()
}

/// Default microcanonical half-width: 0.5% of the spectral range.
pub fn default_window(es: &EigenSystem) -> f64 {
    let (lo, hi) = es.energy_range();
    0.005 * (hi - lo)
}

/// Minimum number of eigenstates in a microcanonical window.
pub const MIN_WINDOW_STATES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MicrocanonicalAverage {
    pub value: f64,
    pub count: usize,
}

/// Unweighted mean of `O_aa` over eigenstates with `|E_a - e0| <= window`.
pub fn microcanonical_average(es: &EigenSystem, e0: f64, window: f64, obs: CollectiveObservable) -> Result<MicrocanonicalAverage> {
    if !(window > 0.0 && window.is_finite()) {
        return Err(Error::param("window", "must be positive"));
    }
    let diag = eigen_expectations(es, obs);
    let mut sum = 0.0;
    let mut count = 0;
    for (se, o) in es.sectors.iter().zip(&diag) {
        for (e, v) in se.energies().iter().zip(o) {
            if (e - e0).abs() <= window {
                sum += v;
                count += 1;
            }
        }
    }
    if count < MIN_WINDOW_STATES {
        return Err(Error::ThinWindow {
            lo: e0 - window,
            hi: e0 + window,
            count,
            required: MIN_WINDOW_STATES,
        });
    }
    Ok(MicrocanonicalAverage {
        value: sum / count as f64,
        count,
    })
}

/// Total-variation distance between the instantaneous distribution of
/// `m_A - m_B` and its diagonal-ensemble (infinite-time) counterpart.
///
/// The sector populations are conserved, so this measures dephasing inside the
/// sectors; it decreases on average as the state equilibrates.
pub fn staggered_distribution_distance(es: &EigenSystem, psi: &PureState, times: &[f64]) -> Result<Vec<f64>> {
    check_state(es, &StateRef::Pure(psi))?;
    let spin = es.spin;
    let width = 2 * spin.twice() + 1;
    let coeffs: Vec<Vec<Complex64>> = es.sectors.iter().zip(&psi.sectors).map(|(se, v)| se.project(v)).collect();
    let mut stationary = vec![0.0; width];
    for (se, c) in es.sectors.iter().zip(&coeffs) {
        for (a, ca) in c.iter().enumerate() {
            for (i, x) in se.vector(a).iter().enumerate() {
                let (ka, kb) = se.sector.basis(spin, i);
                stationary[ka + spin.twice() - kb] += ca.norm_sqr() * x * x;
            }
        }
    }
    let at = |t: f64| -> f64 {
        let mut p = vec![0.0; width];
        for (se, c) in es.sectors.iter().zip(&coeffs) {
            let d = se.dim();
            let mut amp = vec![Complex64::new(0.0, 0.0); d];
            for (a, ca) in c.iter().enumerate() {
                if ca.norm_sqr() < 1e-30 {
                    continue;
                }
                let z = *ca * Complex64::from_polar(1.0, -se.energies()[a] * t);
                for (y, x) in amp.iter_mut().zip(se.vector(a)) {
                    *y += z * x;
                }
            }
            for (i, y) in amp.iter().enumerate() {
                let (ka, kb) = se.sector.basis(spin, i);
                p[ka + spin.twice() - kb] += y.norm_sqr();
            }
        }
        0.5 * p.iter().zip(&stationary).map(|(a, b)| (a - b).abs()).sum::<f64>()
    };
    Ok(times.iter().map(|&t| at(t)).collect())
}

/// Cumulative running mean `(1/k) Σ_{i<k} x_i`.
pub fn running_mean(values: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    values
        .iter()
        .enumerate()
        .map(|(k, v)| {
            acc += v;
            acc / (k + 1) as f64
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collective::solve;
    use crate::params::ModelParams;
    use crate::states::{mixed_neel, rotated_neel, tilted_state, Quadrature};

    fn setup(j: f64, h: f64, n: usize) -> (ModelParams, EigenSystem) {
        let p = ModelParams::new(j, h, n).unwrap();
        let es = solve(&p).unwrap();
        (p, es)
    }

    #[test]
    fn initial_value_matches_moments() {
        let (p, es) = setup(2.0, 1.0, 24);
        let st = rotated_neel(&p, 2.2, 0.3);
        let ts = evolve_observable(&es, &st, CollectiveObservable::StaggeredNz, &TimeGrid::linear(5.0, 11)).unwrap();
        assert!((ts.values[0] - st.moments().mean_nz).abs() < 1e-10);
        let ts = evolve_observable(&es, &st, CollectiveObservable::TotalSz, &TimeGrid::linear(5.0, 11)).unwrap();
        assert!(ts.values.iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn field_only_dynamics_is_static() {
        let (p, es) = setup(0.0, 1.3, 16);
        let st = rotated_neel(&p, 0.7, 0.0);
        let ts = evolve_observable(&es, &st, CollectiveObservable::StaggeredNz, &TimeGrid::linear(20.0, 50)).unwrap();
        for v in &ts.values {
            assert!((v - 0.7f64.cos()).abs() < 1e-12);
        }
        let d = diagonal_average(&es, &st, CollectiveObservable::StaggeredNz).unwrap();
        assert!((d.value - 0.7f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn eigenstate_is_stationary() {
        let (_, es) = setup(2.0, 1.0, 20);
        let se = &es.sectors[10];
        let psi = PureState::in_sector(
            es.spin,
            se.sector,
            se.vector(3).iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        );
        let spec = bohr_spectrum(&es, &psi, CollectiveObservable::StaggeredNz).unwrap();
        assert!(spec.lines.iter().all(|l| l.amplitude.norm() < 1e-13));
        let expect = CollectiveObservable::StaggeredNz.block(se.sector, es.spin).bilinear(se.vector(3), se.vector(3));
        assert!((spec.zero_weight - expect).abs() < 1e-13);
    }

    #[test]
    fn uniform_and_direct_evaluation_agree() {
        let (p, es) = setup(5.0, 1.0, 40);
        let st = rotated_neel(&p, 2.4, 0.0);
        let set = line_set(&es, &st, CollectiveObservable::StaggeredNz, &LineOptions::default()).unwrap();
        let times = TimeGrid::linear(300.0, 3001).times().unwrap();
        let fast = set.evaluate(&times);
        for (k, &t) in times.iter().enumerate().step_by(97) {
            assert!((fast[k] - set.value_at(t)).abs() < 1e-10);
        }
    }

    #[test]
    fn time_reversal_round_trip() {
        let (p, es) = setup(3.0, 1.0, 20);
        let psi = tilted_state(&p, 1.0, 0.4).to_pure();
        let forward = evolve_state(&es, &psi, 7.3).unwrap();
        let back = evolve_state(&es, &forward, -7.3).unwrap();
        assert!((back.overlap(&psi).norm() - 1.0).abs() < 1e-10);
        assert!((back.moments().mean_nz - psi.moments().mean_nz).abs() < 1e-10);
    }

    #[test]
    fn mixed_members_merge_exactly() {
        let (p, es) = setup(2.0, 1.0, 16);
        let e = mixed_neel(&p, (2.0, 0.0), 0.2, Quadrature::default()).unwrap();
        let merged = line_set(&es, &e, CollectiveObservable::StaggeredNz, &LineOptions::default()).unwrap();
        // Direct convex combination over the unmerged members.
        let times = [0.0, 1.7, 4.2];
        let mut direct = [0.0; 3];
        for m in e.members.iter().step_by(1) {
            let s = line_set(&es, &m.state, CollectiveObservable::StaggeredNz, &LineOptions::default()).unwrap();
            for (d, &t) in direct.iter_mut().zip(&times) {
                *d += m.weight * s.value_at(t);
            }
        }
        for (d, &t) in direct.iter().zip(&times) {
            assert!((d - merged.value_at(t)).abs() < 1e-10);
        }
    }

    #[test]
    fn microcanonical_full_window_is_trace_average() {
        let (_, es) = setup(2.0, 1.0, 20);
        let (lo, hi) = es.energy_range();
        let m = microcanonical_average(&es, 0.5 * (lo + hi), hi - lo, CollectiveObservable::StaggeredNz).unwrap();
        assert_eq!(m.count, es.total_dim());
        assert!(m.value.abs() < 1e-12);
        let thin = microcanonical_average(&es, lo - 100.0, 1e-3, CollectiveObservable::StaggeredNz);
        assert!(matches!(thin, Err(Error::ThinWindow { count: 0, .. })));
    }

    #[test]
    fn dephasing_distance_starts_high_and_drops() {
        let (p, es) = setup(5.0, 1.0, 40);
        let psi = rotated_neel(&p, 2.4, 0.0).to_pure();
        let d = staggered_distribution_distance(&es, &psi, &[0.0, 50.0, 100.0, 150.0]).unwrap();
        assert!(d[0] > 0.2);
        assert!(d[1..].iter().sum::<f64>() / 3.0 < d[0]);
    }
}
