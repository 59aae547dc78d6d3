//! Extraction of the three dynamical timescales from an `⟨n^z⟩(t)` trajectory.
//!
//! The model is
//! `N(t) = N_stat + (N_0 - N_stat) cos(ω_p t) · Σ_k exp(-(t - k T_rev)² / T_dec²) · (1 + (t/T_eq)²)^(-1/4)`.
//! Parameters are seeded stage by stage (spectral peak, envelope autocorrelation,
//! first-lobe width, revival heights) and then refined with Levenberg–Marquardt
//! on the Hilbert envelope: `T_dec` on the first lobe, `T_eq` on the revival
//! heights.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::collective::{solve, CollectiveObservable};
use crate::dynamics::{line_set, uniform_step, GridKind, LineOptions, TimeGrid, TimeSeries};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::states::{mixed_neel, Quadrature};

/// Fitted parameters and diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimescaleFit {
    pub omega_p: f64,
    pub t_dec: f64,
    pub t_rev: f64,
    pub t_eq: f64,
    pub n_stat: f64,
    pub n_0: f64,
    /// Stage-wise seeds before the joint refinement.
    pub seed_t_dec: f64,
    pub seed_t_rev: f64,
    pub seed_t_eq: f64,
    /// Revival peaks found inside the series.
    pub revivals: usize,
    /// Coefficient of determination of the envelope fit.
    pub envelope_r2: f64,
    /// RMS deviation of the full model from the data.
    pub residual_rms: f64,
    pub iterations: usize,
    /// Non-fatal issues (e.g. fewer than three revivals).
    pub flags: Vec<String>,
}

impl TimescaleFit {
    /// Envelope `|N - N_stat|` predicted by the fitted parameters.
    pub fn envelope(&self, t: f64) -> f64 {
        envelope_model(&[self.n_0 - self.n_stat, self.t_dec, self.t_rev, self.t_eq], t).abs()
    }

    /// Full model value.
    pub fn value(&self, t: f64) -> f64 {
        self.n_stat + (self.n_0 - self.n_stat) * (self.omega_p * t).cos() * comb(t, self.t_dec, self.t_rev) * decay(t, self.t_eq)
    }
}

fn comb(t: f64, t_dec: f64, t_rev: f64) -> f64 {
    let k_max = (t / t_rev).ceil() as i64 + 1;
    (0..=k_max.max(0))
        .map(|k| {
            let x = (t - k as f64 * t_rev) / t_dec;
            (-x * x).exp()
        })
        .sum()
}

fn decay(t: f64, t_eq: f64) -> f64 {
    if t_eq.is_infinite() {
        return 1.0;
    }
    (1.0 + (t / t_eq).powi(2)).powf(-0.25)
}

/// `p = (A, T_dec, T_rev, T_eq)`.
fn envelope_model(p: &[f64], t: f64) -> f64 {
    p[0] * comb(t, p[1], p[2]) * decay(t, p[3])
}

/// Options controlling the fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitOptions {
    /// Revivals needed for a complete fit.
    pub min_revivals: usize,
    /// Fraction of the series (at the far end) excluded from the envelope fit.
    pub edge_fraction: f64,
    pub max_iterations: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            min_revivals: 3,
            edge_fraction: 0.05,
            max_iterations: 200,
        }
    }
}

/// `fit_timescales` with default options.
pub fn fit_timescales(ts: &TimeSeries) -> Result<TimescaleFit> {
    fit_timescales_with(ts, &FitOptions::default())
}

pub fn fit_timescales_with(ts: &TimeSeries, opts: &FitOptions) -> Result<TimescaleFit> {
    let dt = uniform_step(&ts.times).ok_or_else(|| Error::Usage("timescale fit needs a linear time grid".into()))?;
    if ts.times[0].abs() > 1e-12 * dt {
        return Err(Error::Usage("timescale fit needs a grid starting at t = 0".into()));
    }
    let n = ts.values.len();
    if n < 64 {
        return Err(Error::Usage(format!("timescale fit needs at least 64 samples, got {n}")));
    }
    let mut flags = Vec::new();
    let n_stat = ts.values.iter().sum::<f64>() / n as f64;
    let n_0 = ts.values[0];
    let x: Vec<f64> = ts.values.iter().map(|v| v - n_stat).collect();
    let amp0 = n_0 - n_stat;

    let omega_p = dominant_frequency(&x, dt);
    let env = hilbert_envelope(&x);
    let usable = ((1.0 - opts.edge_fraction) * n as f64) as usize;
    let t_end = usable as f64 * dt;

    // First lobe: ln(env/A0) = -t²/T_dec² while env > 0.2 A0.
    let a0 = env[0];
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (k, &e) in env.iter().enumerate() {
        if e < 0.2 * a0 {
            break;
        }
        let t2 = (k as f64 * dt).powi(2);
        sxy += t2 * (e / a0).ln();
        sxx += t2 * t2;
    }
    if sxx == 0.0 || sxy >= 0.0 {
        return Err(Error::FitFailed {
            reason: "no decaying first lobe in the envelope".into(),
            residual: f64::NAN,
        });
    }
    let seed_t_dec = (-sxx / sxy).sqrt();

    let seed_t_rev = revival_period(&env[..usable], dt, seed_t_dec).ok_or_else(|| Error::FitFailed {
        reason: "no revival found in the envelope autocorrelation".into(),
        residual: f64::NAN,
    })?;

    // Revival peaks near k·T_rev.
    let mut peaks: Vec<(f64, f64)> = Vec::new();
    let mut k = 1;
    while (k as f64 + 0.25) * seed_t_rev < t_end {
        let lo = (((k as f64 - 0.25) * seed_t_rev) / dt) as usize;
        let hi = ((((k as f64 + 0.25) * seed_t_rev) / dt) as usize).min(usable - 1);
        if let Some(p) = refined_peak(&env, lo, hi, dt) {
            peaks.push(p);
        }
        k += 1;
    }
    if peaks.len() < opts.min_revivals {
        flags.push(format!("only {} revivals inside the series (need {})", peaks.len(), opts.min_revivals));
    }
    let t_rev = if peaks.is_empty() {
        seed_t_rev
    } else {
        let (num, den) = peaks
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(a, b), (i, p)| (a + (i + 1) as f64 * p.0, b + ((i + 1) * (i + 1)) as f64));
        num / den
    };

    // (A0/H_k)^4 - 1 = (t_k/T_eq)².
    let (mut sy, mut st4) = (0.0, 0.0);
    for &(t, h) in &peaks {
        let y = (a0 / h).powi(4) - 1.0;
        sy += y * t * t;
        st4 += t.powi(4);
    }
    let seed_t_eq = if st4 > 0.0 && sy > 0.0 {
        (st4 / sy).sqrt()
    } else {
        flags.push("revival heights do not decay; T_eq unresolved".into());
        f64::INFINITY
    };

    // Refinement. The comb width is fixed in the model while measured revivals
    // broaden with k, so each timescale is refined on the feature that defines
    // it: T_dec on the first lobe (with an incoherent floor), T_eq on the
    // revival heights. T_rev is the regression through the peak positions.
    let floor = quiet_level(&env[..usable], dt, seed_t_dec, t_rev).max(1e-6 * a0);
    let lobe_end = ((0.5 * t_rev / dt) as usize).min(usable);
    let lobe: Vec<(f64, f64)> = (0..lobe_end).map(|k| (k as f64 * dt, env[k])).collect();
    let lobe_residual = |q: &[f64]| -> Vec<f64> {
        let (a, td, b) = (q[0].exp(), q[1].exp(), q[2].exp());
        lobe.iter().map(|&(t, e)| (a * (-(t / td).powi(2)).exp()).hypot(b) - e).collect()
    };
    let (q, mut iterations) = levenberg_marquardt(&lobe_residual, vec![a0.ln(), seed_t_dec.ln(), floor.ln()], opts.max_iterations)?;
    let (amp, t_dec) = (q[0].exp(), q[1].exp());

    let t_eq = if seed_t_eq.is_finite() {
        let height_residual = |q: &[f64]| -> Vec<f64> {
            let te = q[0].exp();
            peaks.iter().map(|&(t, h)| amp * decay(t, te) - h).collect()
        };
        let (q, it) = levenberg_marquardt(&height_residual, vec![seed_t_eq.ln()], opts.max_iterations)?;
        iterations += it;
        q[0].exp()
    } else {
        f64::INFINITY
    };

    let p = [amp, t_dec, t_rev, t_eq];
    let times: Vec<f64> = (0..usable).map(|k| k as f64 * dt).collect();
    let target = &env[..usable];
    let mean_env = target.iter().sum::<f64>() / target.len() as f64;
    let ss_res: f64 = times.iter().zip(target).map(|(&t, &e)| (envelope_model(&p, t) - e).powi(2)).sum();
    let ss_tot: f64 = target.iter().map(|e| (e - mean_env).powi(2)).sum();

    let mut fit = TimescaleFit {
        omega_p,
        t_dec: p[1],
        t_rev: p[2],
        t_eq: p[3],
        n_stat,
        n_0,
        seed_t_dec,
        seed_t_rev,
        seed_t_eq,
        revivals: peaks.len(),
        envelope_r2: 1.0 - ss_res / ss_tot.max(1e-300),
        residual_rms: 0.0,
        iterations,
        flags,
    };
    fit.n_0 = n_stat + amp0.signum() * p[0];
    fit.residual_rms = (ts
        .times
        .iter()
        .zip(&ts.values)
        .map(|(&t, &v)| (fit.value(t) - v).powi(2))
        .sum::<f64>()
        / n as f64)
        .sqrt();
    if !(fit.t_dec > 0.0 && fit.t_rev > 0.0 && fit.t_eq > 0.0) {
        return Err(Error::FitFailed {
            reason: "fitted timescales are not positive".into(),
            residual: ss_res.sqrt(),
        });
    }
    Ok(fit)
}

/// Median envelope over the middle half of each gap between revivals.
fn quiet_level(env: &[f64], dt: f64, t_dec: f64, t_rev: f64) -> f64 {
    let mut vals: Vec<f64> = env
        .iter()
        .enumerate()
        .filter(|(k, _)| {
            let t = *k as f64 * dt;
            let phase = (t / t_rev).fract();
            t > 2.0 * t_dec && (0.25..0.75).contains(&phase)
        })
        .map(|(_, &e)| e)
        .collect();
    if vals.is_empty() {
        return 0.0;
    }
    vals.sort_by(|a, b| a.total_cmp(b));
    vals[vals.len() / 2]
}

/// Peak of the Hann-windowed, zero-padded periodogram (DC excluded), refined
/// by parabolic interpolation of the log-magnitude.
pub fn dominant_frequency(x: &[f64], dt: f64) -> f64 {
    let n = x.len();
    let m = (4 * n).next_power_of_two();
    let mut buf: Vec<Complex64> = x
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let w = 0.5 - 0.5 * (2.0 * std::f64::consts::PI * k as f64 / (n - 1) as f64).cos();
            Complex64::new(v * w, 0.0)
        })
        .collect();
    buf.resize(m, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let mag: Vec<f64> = buf[..m / 2].iter().map(|z| z.norm()).collect();
    let k = (2..m / 2 - 1).max_by(|&a, &b| mag[a].total_cmp(&mag[b])).unwrap_or(1);
    let (a, b, c) = (mag[k - 1].ln(), mag[k].ln(), mag[k + 1].ln());
    let denom = a - 2.0 * b + c;
    let shift = if denom.abs() > 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
    2.0 * std::f64::consts::PI * (k as f64 + shift) / (m as f64 * dt)
}

/// Envelope `|x + i H[x]|`, computed on the even extension `x(-t) = x(t)` so
/// the start of the series carries no edge artefact.
pub fn hilbert_envelope(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut ext: Vec<Complex64> = x[1..].iter().rev().chain(x.iter()).map(|&v| Complex64::new(v, 0.0)).collect();
    let len = ext.len();
    let m = (2 * len).next_power_of_two();
    ext.resize(m, Complex64::new(0.0, 0.0));
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut ext);
    for (k, z) in ext.iter_mut().enumerate() {
        if k == 0 || k == m / 2 {
            continue;
        }
        if k < m / 2 {
            *z *= 2.0;
        } else {
            *z = Complex64::new(0.0, 0.0);
        }
    }
    planner.plan_fft_inverse(m).process(&mut ext);
    let scale = 1.0 / m as f64;
    ext[n - 1..n - 1 + n].iter().map(|z| z.norm() * scale).collect()
}

/// First prominent peak of the envelope autocorrelation beyond `2 T_dec`.
fn revival_period(env: &[f64], dt: f64, t_dec: f64) -> Option<f64> {
    let n = env.len();
    let mean = env.iter().sum::<f64>() / n as f64;
    let m = (2 * n).next_power_of_two();
    let mut buf: Vec<Complex64> = env.iter().map(|&e| Complex64::new(e - mean, 0.0)).collect();
    buf.resize(m, Complex64::new(0.0, 0.0));
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    for z in buf.iter_mut() {
        *z = Complex64::new(z.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    // Unbiased normalization by the overlap length.
    let ac: Vec<f64> = (0..n).map(|k| buf[k].re / (n - k) as f64).collect();
    let start = ((2.0 * t_dec / dt).ceil() as usize).max(1);
    let stop = n / 2;
    if start + 2 >= stop {
        return None;
    }
    let best = (start..stop).map(|k| ac[k]).fold(f64::NEG_INFINITY, f64::max);
    if best <= 0.0 {
        return None;
    }
    (start + 1..stop - 1)
        .find(|&k| ac[k] >= ac[k - 1] && ac[k] >= ac[k + 1] && ac[k] > 0.5 * best)
        .map(|k| {
            let (a, b, c) = (ac[k - 1], ac[k], ac[k + 1]);
            let denom = a - 2.0 * b + c;
            let shift = if denom.abs() > 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
            (k as f64 + shift) * dt
        })
}

/// Maximum of `env[lo..=hi]` as `(time, height)` with parabolic refinement,
/// rejected when it sits on the window edge.
fn refined_peak(env: &[f64], lo: usize, hi: usize, dt: f64) -> Option<(f64, f64)> {
    if hi <= lo + 2 {
        return None;
    }
    let k = (lo..=hi).max_by(|&a, &b| env[a].total_cmp(&env[b]))?;
    if k == lo || k == hi {
        return None;
    }
    let (a, b, c) = (env[k - 1], env[k], env[k + 1]);
    let denom = a - 2.0 * b + c;
    let shift = if denom.abs() > 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
    Some(((k as f64 + shift) * dt, b - 0.25 * (a - c) * shift))
}

/// Minimizes `Σ r(q)²` with a numerical Jacobian.
pub fn levenberg_marquardt(residual: &dyn Fn(&[f64]) -> Vec<f64>, mut q: Vec<f64>, max_iter: usize) -> Result<(Vec<f64>, usize)> {
    let np = q.len();
    let mut r = residual(&q);
    let mut cost: f64 = r.iter().map(|x| x * x).sum();
    let mut lambda = 1e-3;
    for iter in 0..max_iter {
        let m = r.len();
        let mut jac = DMatrix::zeros(m, np);
        for c in 0..np {
            let h = 1e-6 * q[c].abs().max(1.0);
            let mut qp = q.clone();
            qp[c] += h;
            let mut qm = q.clone();
            qm[c] -= h;
            let (rp, rm) = (residual(&qp), residual(&qm));
            for i in 0..m {
                jac[(i, c)] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let g = &jt * DVector::from_vec(r.clone());
        let mut improved = false;
        for _ in 0..20 {
            let mut a = jtj.clone();
            for d in 0..np {
                a[(d, d)] += lambda * jtj[(d, d)].max(1e-12);
            }
            let Some(step) = a.lu().solve(&(-&g)) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = q.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let rt = residual(&trial);
            let ct: f64 = rt.iter().map(|x| x * x).sum();
            if ct.is_finite() && ct < cost {
                let rel = (cost - ct) / cost.max(1e-300);
                q = trial;
                r = rt;
                cost = ct;
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                if rel < 1e-12 {
                    return Ok((q, iter + 1));
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            return Ok((q, iter + 1));
        }
    }
    if cost.is_finite() {
        Ok((q, max_iter))
    } else {
        Err(Error::FitFailed {
            reason: "Levenberg–Marquardt diverged".into(),
            residual: cost.sqrt(),
        })
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// One point of a timescale sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub n_spins: usize,
    pub sigma: f64,
    /// Standard deviation of `n^z` in the initial ensemble.
    pub sigma_nz: f64,
    /// Variance of `s^z` in the initial ensemble.
    pub sigma_sz_sq: f64,
    pub fit: TimescaleFit,
}

/// Rough horizon covering `revivals` revivals (empirical, tuned at `h = 1`).
pub fn revival_horizon(params: &ModelParams, revivals: f64) -> f64 {
    8.0 * revivals * params.n_spins as f64 / params.exchange.max(1.0)
}

/// Evolves a mixed Néel ensemble centred at `center` and fits its `n^z`
/// trace on a linear grid of step `dt` up to `t_max`.
pub fn sweep_point(params: &ModelParams, center: (f64, f64), sigma: f64, t_max: f64, dt: f64, opts: &FitOptions) -> Result<SweepPoint> {
    if !(dt > 0.0 && t_max > dt) {
        return Err(Error::param("dt", "need 0 < dt < t_max"));
    }
    let es = solve(params)?;
    let ens = mixed_neel(params, center, sigma, Quadrature::default())?;
    let m = ens.moments();
    let set = line_set(&es, &ens, CollectiveObservable::StaggeredNz, &LineOptions::default())?;
    let times = TimeGrid::linear(t_max, (t_max / dt) as usize + 1).times()?;
    let values = set.evaluate(&times);
    let ts = TimeSeries {
        times,
        values,
        observable: "n^z".into(),
        grid: GridKind::Linear,
        time_unit: "1/energy".into(),
        provenance: format!("sweep n_spins={} sigma={sigma}", params.n_spins),
    };
    Ok(SweepPoint {
        n_spins: params.n_spins,
        sigma,
        sigma_nz: m.var_nz.sqrt(),
        sigma_sz_sq: m.var_sz,
        fit: fit_timescales_with(&ts, opts)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::GridKind;

    fn synthetic(omega: f64, t_dec: f64, t_rev: f64, t_eq: f64, t_max: f64, dt: f64) -> TimeSeries {
        let n = (t_max / dt) as usize + 1;
        let times: Vec<f64> = (0..n).map(|k| k as f64 * dt).collect();
        let (n_stat, n_0) = (-0.55, -0.7);
        let values = times
            .iter()
            .map(|&t| n_stat + (n_0 - n_stat) * (omega * t).cos() * comb(t, t_dec, t_rev) * decay(t, t_eq))
            .collect();
        TimeSeries {
            times,
            values,
            observable: "n^z".into(),
            grid: GridKind::Linear,
            time_unit: "1/energy".into(),
            provenance: "synthetic".into(),
        }
    }

    #[test]
    fn recovers_synthetic_parameters() {
        let ts = synthetic(2.0, 6.0, 55.0, 120.0, 420.0, 0.02);
        let fit = fit_timescales(&ts).unwrap();
        assert!((fit.omega_p - 2.0).abs() / 2.0 < 0.02, "{fit:?}");
        assert!((fit.t_dec - 6.0).abs() / 6.0 < 0.02, "{fit:?}");
        assert!((fit.t_rev - 55.0).abs() / 55.0 < 0.02, "{fit:?}");
        assert!((fit.t_eq - 120.0).abs() / 120.0 < 0.02, "{fit:?}");
        assert!(fit.flags.is_empty());
        assert!(fit.t_dec < fit.t_rev && fit.t_rev < fit.t_eq);
    }

    #[test]
    fn flags_short_series() {
        let ts = synthetic(2.0, 6.0, 55.0, 120.0, 130.0, 0.02);
        let fit = fit_timescales(&ts).unwrap();
        assert!(!fit.flags.is_empty());
    }

    #[test]
    fn envelope_of_pure_cosine_is_flat() {
        let x: Vec<f64> = (0..4000).map(|k| (0.05 * k as f64).cos()).collect();
        let env = hilbert_envelope(&x);
        for e in &env[..3600] {
            assert!((e - 1.0).abs() < 0.02);
        }
    }

    #[test]
    fn slope_of_power_law() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-1.3)).collect();
        assert!((log_log_slope(&x, &y) + 1.3).abs() < 1e-12);
    }
}
