//! Plain-Rust side of the bindings, testable off the browser.

use lr_staggered::analysis::{eigenstate, eigenstate_scan, husimi, phase_space_grid};
use lr_staggered::collective::{solve, CollectiveObservable};
use lr_staggered::dynamics::{evolve_observable, TimeGrid};
use lr_staggered::params::ModelParams;
use lr_staggered::pendulum::{pendulum_evolve, separatrix_energy};
use lr_staggered::states::{mixed_neel, rotated_neel, Quadrature};
use lr_staggered::Result;

/// Largest size the page accepts; the spectrum has `(n/2 + 1)²` states.
pub const MAX_SPINS: usize = 400;

/// `m, index, energy, nz, spin_sq, entropy` per scan row.
pub const SCAN_FIELDS: usize = 6;

/// Coarser than the library default; enough for plotting.
const DEMO_QUADRATURE: Quadrature = Quadrature::GaussLegendre {
    polar_nodes: 24,
    azimuthal_nodes: 24,
    cutoff_sigmas: 6.0,
};

fn params(exchange: f64, field: f64, n_spins: usize) -> Result<ModelParams> {
    if n_spins > MAX_SPINS {
        return Err(lr_staggered::Error::InvalidParameter {
            field: "n_spins".into(),
            reason: format!("demo is limited to {MAX_SPINS}"),
        });
    }
    ModelParams::new(exchange, field, n_spins)
}

pub fn evolve_nz(exchange: f64, field: f64, n_spins: usize, theta: f64, sigma: f64, t_max: f64, points: usize) -> Result<Vec<f64>> {
    let p = params(exchange, field, n_spins)?;
    let es = solve(&p)?;
    let grid = TimeGrid::linear(t_max, points);
    let obs = CollectiveObservable::StaggeredNz;
    let ts = if sigma > 0.0 {
        let mx = mixed_neel(&p, (theta, 0.0), sigma, DEMO_QUADRATURE)?;
        evolve_observable(&es, &mx, obs, &grid)?
    } else {
        evolve_observable(&es, &rotated_neel(&p, theta, 0.0), obs, &grid)?
    };
    Ok(ts.values)
}

pub fn pendulum_nz(exchange: f64, field: f64, n_spins: usize, theta: f64, t_max: f64, points: usize) -> Result<Vec<f64>> {
    let p = params(exchange, field, n_spins)?;
    let times = TimeGrid::linear(t_max, points).times()?;
    // pendulum angle is measured from the stable (anti-Néel) orientation
    Ok(pendulum_evolve(std::f64::consts::PI - theta, 0.0, p.pendulum_frequency(), &times)?.staggered_magnetization())
}

pub fn scan(exchange: f64, field: f64, n_spins: usize) -> Result<Vec<f64>> {
    let es = solve(&params(exchange, field, n_spins)?)?;
    Ok(eigenstate_scan(&es)
        .iter()
        .flat_map(|r| [r.m, r.index as f64, r.energy, r.nz, r.spin_sq, r.entropy])
        .collect())
}

pub fn separatrix(exchange: f64, field: f64, n_spins: usize) -> Result<f64> {
    Ok(separatrix_energy(&params(exchange, field, n_spins)?))
}

pub fn husimi_eigenstate(exchange: f64, field: f64, n_spins: usize, m: f64, index: usize, n_theta: usize, n_gamma: usize) -> Result<Vec<f64>> {
    let es = solve(&params(exchange, field, n_spins)?)?;
    let psi = eigenstate(&es, m, index)?;
    let (th, ga) = phase_space_grid(n_theta, n_gamma);
    Ok(husimi(&psi, &th, &ga)?.q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_layout() {
        let rows = scan(2.0, 1.0, 20).unwrap();
        assert_eq!(rows.len(), 11 * 11 * SCAN_FIELDS);
    }

    #[test]
    fn size_limit() {
        assert!(scan(1.0, 1.0, MAX_SPINS + 2).is_err());
    }
}
