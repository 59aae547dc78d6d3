//! Mean-field pendulum and the classical energy surface of tilted states.
//!
//! The pendulum angle `ϑ` is measured from the stable orientation, which for
//! `h > 0` is the anti-Néel state (`n^z = -1`). A rotated Néel state with polar
//! angle `θ` starts at `ϑ = π - θ`, and the mean-field staggered magnetization
//! is `n^z = -cos ϑ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Phase-space point of the pendulum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PendulumState {
    pub theta: f64,
    pub theta_dot: f64,
}

impl PendulumState {
    /// `½ϑ̇² - ω_p² cos ϑ`.
    pub fn energy(&self, omega_p: f64) -> f64 {
        0.5 * self.theta_dot * self.theta_dot - omega_p * omega_p * self.theta.cos()
    }
}

/// Trajectory on the requested times plus the worst energy drift.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PendulumTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<PendulumState>,
    /// `max |E(t) - E(0)| / ω_p²` over the internal steps.
    pub energy_drift: f64,
}

impl PendulumTrajectory {
    /// Mean-field `n^z = -cos ϑ`.
    pub fn staggered_magnetization(&self) -> Vec<f64> {
        self.states.iter().map(|s| -s.theta.cos()).collect()
    }
}

/// Internal step in units of `1/ω_p`.
const STEP: f64 = 2e-3;

fn rk4(s: PendulumState, w2: f64, dt: f64) -> PendulumState {
    let f = |x: PendulumState| (x.theta_dot, -w2 * x.theta.sin());
    let k1 = f(s);
    let s2 = PendulumState {
        theta: s.theta + 0.5 * dt * k1.0,
        theta_dot: s.theta_dot + 0.5 * dt * k1.1,
    };
    let k2 = f(s2);
    let s3 = PendulumState {
        theta: s.theta + 0.5 * dt * k2.0,
        theta_dot: s.theta_dot + 0.5 * dt * k2.1,
    };
    let k3 = f(s3);
    let s4 = PendulumState {
        theta: s.theta + dt * k3.0,
        theta_dot: s.theta_dot + dt * k3.1,
    };
    let k4 = f(s4);
    PendulumState {
        theta: s.theta + dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        theta_dot: s.theta_dot + dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    }
}

/// Integrates `ϑ̈ + ω_p² sin ϑ = 0` with fixed-step RK4 (step at most
/// `2·10⁻³/ω_p`, shrunk so that every requested time is hit exactly).
pub fn pendulum_evolve(theta0: f64, theta_dot0: f64, omega_p: f64, times: &[f64]) -> Result<PendulumTrajectory> {
    if !(theta0.is_finite() && theta_dot0.is_finite() && omega_p.is_finite() && omega_p > 0.0) {
        return Err(Error::param("pendulum", "inputs must be finite with omega_p > 0"));
    }
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::param("times", "must be finite, non-negative and non-decreasing"));
    }
    let w2 = omega_p * omega_p;
    let h_max = STEP / omega_p;
    let mut s = PendulumState {
        theta: theta0,
        theta_dot: theta_dot0,
    };
    let e0 = s.energy(omega_p);
    let mut drift: f64 = 0.0;
    let mut t = 0.0;
    let mut states = Vec::with_capacity(times.len());
    for &target in times {
        let span = target - t;
        if span > 0.0 {
            let steps = (span / h_max).ceil().max(1.0) as usize;
            let dt = span / steps as f64;
            for _ in 0..steps {
                s = rk4(s, w2, dt);
                drift = drift.max((s.energy(omega_p) - e0).abs() / w2);
            }
            t = target;
        }
        states.push(s);
    }
    Ok(PendulumTrajectory {
        times: times.to_vec(),
        states,
        energy_drift: drift,
    })
}

/// Classical sublattice spins `(S_A, S_B)`, each of length `j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinPair {
    pub a: [f64; 3],
    pub b: [f64; 3],
}

impl SpinPair {
    /// Néel vector along `r` (`S_A = j r`, `S_B = -j r`).
    pub fn neel(j: f64, r: [f64; 3]) -> Self {
        SpinPair {
            a: [j * r[0], j * r[1], j * r[2]],
            b: [-j * r[0], -j * r[1], -j * r[2]],
        }
    }

    /// `n^z = (S_A^z - S_B^z) / 2j`.
    pub fn staggered_z(&self) -> f64 {
        let j = norm(self.a);
        (self.a[2] - self.b[2]) / (2.0 * j)
    }
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn cross(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

fn spin_rhs(p: &SpinPair, g: f64, h: f64) -> SpinPair {
    let s = [p.a[0] + p.b[0], p.a[1] + p.b[1], p.a[2] + p.b[2]];
    let fa = [2.0 * g * s[0], 2.0 * g * s[1], 2.0 * g * s[2] + h];
    let fb = [2.0 * g * s[0], 2.0 * g * s[1], 2.0 * g * s[2] - h];
    SpinPair {
        a: cross(p.a, fa),
        b: cross(p.b, fb),
    }
}

/// Mean-field (product-state) dynamics of the two sublattice spins,
/// `dS_X/dt = S_X × ∂H/∂S_X` with `H = (J/n)|S_A + S_B|² + h (S_A^z - S_B^z)`.
///
/// Unlike the pendulum it keeps the canting of the sublattices; its
/// small-oscillation frequency about the anti-Néel state is `sqrt(h (J + h))`.
pub fn mean_field_spins(params: &ModelParams, start: SpinPair, times: &[f64]) -> Result<Vec<SpinPair>> {
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::param("times", "must be finite, non-negative and non-decreasing"));
    }
    let g = params.s2_coupling();
    let h = params.field;
    let j = norm(start.a);
    let rate = (4.0 * g * j + h).max(h).max(1e-12);
    let h_max = STEP / rate;
    let axpy = |x: &SpinPair, k: &SpinPair, c: f64| SpinPair {
        a: [x.a[0] + c * k.a[0], x.a[1] + c * k.a[1], x.a[2] + c * k.a[2]],
        b: [x.b[0] + c * k.b[0], x.b[1] + c * k.b[1], x.b[2] + c * k.b[2]],
    };
    let mut s = start;
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        let span = target - t;
        if span > 0.0 {
            let steps = (span / h_max).ceil().max(1.0) as usize;
            let dt = span / steps as f64;
            for _ in 0..steps {
                let k1 = spin_rhs(&s, g, h);
                let k2 = spin_rhs(&axpy(&s, &k1, 0.5 * dt), g, h);
                let k3 = spin_rhs(&axpy(&s, &k2, 0.5 * dt), g, h);
                let k4 = spin_rhs(&axpy(&s, &k3, dt), g, h);
                for c in 0..3 {
                    s.a[c] += dt / 6.0 * (k1.a[c] + 2.0 * k2.a[c] + 2.0 * k3.a[c] + k4.a[c]);
                    s.b[c] += dt / 6.0 * (k1.b[c] + 2.0 * k2.b[c] + 2.0 * k3.b[c] + k4.b[c]);
                }
            }
            t = target;
        }
        out.push(s);
    }
    Ok(out)
}

/// `⟨θ, γ|H|θ, γ⟩` for the tilted product state, in closed form:
/// `(J/n)(2j(j+1) - 2j² cos 2γ) - 2hj cos θ cos γ`.
pub fn classical_energy(params: &ModelParams, theta: f64, gamma: f64) -> f64 {
    let j = params.spin().value();
    params.s2_coupling() * (2.0 * j * (j + 1.0) - 2.0 * j * j * (2.0 * gamma).cos()) - 2.0 * params.field * j * theta.cos() * gamma.cos()
}

/// Energy of the unstable fixed point `θ = π, γ = 0`: `J/2 + h n_spins/2`.
pub fn separatrix_energy(params: &ModelParams) -> f64 {
    classical_energy(params, std::f64::consts::PI, 0.0)
}

/// Tilt `γ ∈ [0, π/2]` giving `classical_energy(θ, γ) = energy`, if one exists.
///
/// With `c = cos γ` the energy is a quadratic `E = a - b c² - d c`; of its
/// roots the one in `[0, 1]` closest to `1` (smallest tilt) is returned.
pub fn solve_gamma(params: &ModelParams, theta: f64, energy: f64) -> Option<f64> {
    let j = params.spin().value();
    let g = params.s2_coupling();
    let a = g * (2.0 * j * (j + 1.0) + 2.0 * j * j);
    let b = 4.0 * g * j * j;
    let d = 2.0 * params.field * j * theta.cos();
    // b c² + d c + (energy - a) = 0
    let c0 = energy - a;
    let roots: Vec<f64> = if b.abs() < 1e-300 {
        if d.abs() < 1e-300 {
            vec![]
        } else {
            vec![-c0 / d]
        }
    } else {
        let disc = d * d - 4.0 * b * c0;
        if disc < 0.0 {
            vec![]
        } else {
            let r = disc.sqrt();
            vec![(-d + r) / (2.0 * b), (-d - r) / (2.0 * b)]
        }
    };
    roots
        .into_iter()
        .filter(|c| (-1e-12..=1.0 + 1e-12).contains(c))
        .map(|c| c.clamp(0.0, 1.0))
        .max_by(f64::total_cmp)
        .map(f64::acos)
}

/// Complete elliptic integral of the first kind `K(k)` via the AGM.
pub fn elliptic_k(k: f64) -> f64 {
    let mut a = 1.0;
    let mut b = (1.0 - k * k).sqrt();
    for _ in 0..64 {
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        if (a - b).abs() < 1e-16 * a {
            break;
        }
    }
    std::f64::consts::PI / (2.0 * a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::tilted_state;
    use std::f64::consts::PI;

    fn crossings(tr: &PendulumTrajectory) -> Vec<f64> {
        let mut out = Vec::new();
        for k in 1..tr.states.len() {
            let (a, b) = (tr.states[k - 1].theta, tr.states[k].theta);
            if a < 0.0 && b >= 0.0 {
                let f = -a / (b - a);
                out.push(tr.times[k - 1] + f * (tr.times[k] - tr.times[k - 1]));
            }
        }
        out
    }

    #[test]
    fn small_angle_period() {
        let w = 1.7;
        let times: Vec<f64> = (0..20001).map(|k| k as f64 * 1e-3).collect();
        let tr = pendulum_evolve(1e-3, 0.0, w, &times).unwrap();
        let c = crossings(&tr);
        let period = (c[c.len() - 1] - c[0]) / (c.len() - 1) as f64;
        assert!((period - 2.0 * PI / w).abs() / (2.0 * PI / w) < 1e-4);
        assert!(tr.energy_drift < 1e-8);
    }

    #[test]
    fn finite_amplitude_period_matches_elliptic_integral() {
        let w = 1.0;
        let amp = 2.5;
        let times: Vec<f64> = (0..60001).map(|k| k as f64 * 1e-3).collect();
        let tr = pendulum_evolve(amp, 0.0, w, &times).unwrap();
        let c = crossings(&tr);
        let period = (c[c.len() - 1] - c[0]) / (c.len() - 1) as f64;
        let exact = 4.0 * elliptic_k((amp / 2.0).sin()) / w;
        assert!((period - exact).abs() / exact < 1e-6);
    }

    #[test]
    fn above_separatrix_rotates() {
        let times: Vec<f64> = (0..2000).map(|k| k as f64 * 5e-3).collect();
        let tr = pendulum_evolve(0.0, 2.1, 1.0, &times).unwrap();
        assert!(tr.states.windows(2).all(|w| w[1].theta > w[0].theta));
    }

    #[test]
    fn classical_energy_examples() {
        let p = ModelParams::new(5.0, 1.0, 8).unwrap();
        let stable = classical_energy(&p, 0.0, 0.0);
        assert!((stable - (2.5 - 4.0)).abs() < 1e-12);
        assert!((separatrix_energy(&p) - (2.5 + 4.0)).abs() < 1e-12);
        for &(t, g) in &[(0.3, 0.2), (2.0, -1.1), (PI / 4.0, PI / 8.0)] {
            assert!((classical_energy(&p, t, g) - classical_energy(&p, t, -g)).abs() < 1e-12);
            let exact = tilted_state(&p, t, g).energy(&p);
            assert!((classical_energy(&p, t, g) - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn mean_field_spins_small_oscillation_frequency() {
        let p = ModelParams::new(5.0, 1.0, 400).unwrap();
        let j = p.spin().value();
        let eps: f64 = 1e-3;
        // Néel vector slightly off the stable (anti-Néel) direction.
        let start = SpinPair::neel(j, [0.0, eps.sin(), -eps.cos()]);
        let times: Vec<f64> = (0..20001).map(|k| k as f64 * 1e-3).collect();
        let traj = mean_field_spins(&p, start, &times).unwrap();
        let y: Vec<f64> = traj.iter().map(|s| s.a[1] - s.b[1]).collect();
        let mut zeros = Vec::new();
        for k in 1..y.len() {
            if y[k - 1] > 0.0 && y[k] <= 0.0 {
                zeros.push(times[k - 1] + y[k - 1] / (y[k - 1] - y[k]) * 1e-3);
            }
        }
        let period = (zeros[zeros.len() - 1] - zeros[0]) / (zeros.len() - 1) as f64;
        let expect = 2.0 * PI / (p.field * (p.exchange + p.field)).sqrt();
        assert!((period - expect).abs() / expect < 1e-4);
        let last = traj.last().unwrap();
        assert!((norm(last.a) - j).abs() < 1e-8 * j);
    }

    #[test]
    fn solve_gamma_inverts_energy() {
        let p = ModelParams::new(5.0, 1.0, 50).unwrap();
        let target = 0.5 * (classical_energy(&p, 0.0, 0.0) + separatrix_energy(&p));
        for theta in [0.0, 0.6, 1.2] {
            let g = solve_gamma(&p, theta, target).unwrap();
            assert!((classical_energy(&p, theta, g) - target).abs() < 1e-9);
        }
        assert!(solve_gamma(&p, 0.0, classical_energy(&p, 0.0, 0.0) - 1.0).is_none());
    }
}
