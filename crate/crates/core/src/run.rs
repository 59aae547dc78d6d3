//! Run driver behind the command-line tool: one subcommand, one config, a
//! directory of artifacts.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::analysis::{detect_scars, eigenstate, eigenstate_scan, ensemble_comparison, husimi, phase_space_grid};
use crate::collective::{solve, EigenSystem};
use crate::config::{RunConfig, StateSpec, SweepKind};
use crate::dynamics::{bohr_spectrum, diagonal_average, evolve_observable};
use crate::error::{Error, Result};
use crate::meanfield::{bogoliubov_energies, census_sweep, form_factor, subspace_census};
use crate::output::{ArtifactWriter, Cell, Metadata, Table};
use crate::params::ModelParams;
use crate::pendulum::separatrix_energy;
use crate::smalln::{compare_with_collective, finite_alpha_scan, verify_collective_reduction, BruteOptions, LatticeSpec};
use crate::states::{mixed_neel, moments, rotated_neel, tilted_state, MixedEnsemble, MomentReport, ProductState, Quadrature, StateRef};
use crate::timescales::{log_log_slope, revival_horizon, sweep_point, SweepPoint};

/// Subcommands of the driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Evolve,
    Fourier,
    Ensembles,
    Husimi,
    Entropy,
    Meanfield,
    Brute,
    Timescales,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Spectrum,
        Command::Evolve,
        Command::Fourier,
        Command::Ensembles,
        Command::Husimi,
        Command::Entropy,
        Command::Meanfield,
        Command::Brute,
        Command::Timescales,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Evolve => "evolve",
            Command::Fourier => "fourier",
            Command::Ensembles => "ensembles",
            Command::Husimi => "husimi",
            Command::Entropy => "entropy",
            Command::Meanfield => "meanfield",
            Command::Brute => "brute",
            Command::Timescales => "timescales",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown subcommand `{s}`")))
    }
}

/// Initial state built from a [`StateSpec`].
#[derive(Debug, Clone)]
pub enum InitialState {
    Product(ProductState),
    Mixed(MixedEnsemble),
}

impl InitialState {
    pub fn build(params: &ModelParams, spec: &StateSpec, seed: Option<u64>) -> Result<Self> {
        Ok(match *spec {
            StateSpec::Neel => InitialState::Product(rotated_neel(params, 0.0, 0.0)),
            StateSpec::Rotated { theta, phi } => InitialState::Product(rotated_neel(params, theta, phi)),
            StateSpec::Tilted { theta, gamma } => InitialState::Product(tilted_state(params, theta, gamma)),
            StateSpec::Mixed {
                theta,
                phi,
                sigma,
                quadrature,
            } => {
                let q = match (quadrature, seed) {
                    (Quadrature::MonteCarlo { samples, .. }, Some(seed)) => Quadrature::MonteCarlo { samples, seed },
                    (q, _) => q,
                };
                let ens = mixed_neel(params, (theta, phi), sigma, q)?;
                if ens.tail_weight > 1e-8 {
                    log::warn!(
                        "ensemble weight beyond the quadrature cutoff is {:.2e}; raise cutoff_sigmas or the node counts",
                        ens.tail_weight
                    );
                }
                InitialState::Mixed(ens)
            }
        })
    }

    pub fn as_ref(&self) -> StateRef<'_> {
        match self {
            InitialState::Product(p) => StateRef::Product(p),
            InitialState::Mixed(m) => StateRef::Mixed(m),
        }
    }
}

/// Runs `cmd` and writes its artifacts (plus `resolved_config.json`) to `out`.
pub fn run(cmd: Command, cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    let mut w = ArtifactWriter::new(out, Metadata::new(cmd.name(), &cfg.digest()))?;
    w.text("resolved_config.json", &cfg.resolved_json())?;
    log::info!("{cmd}: writing to {}", out.display());
    match cmd {
        Command::Spectrum => spectrum(cfg, &mut w)?,
        Command::Evolve => evolve(cfg, &mut w)?,
        Command::Fourier => fourier(cfg, &mut w)?,
        Command::Ensembles => ensembles(cfg, &mut w)?,
        Command::Husimi => husimi_cmd(cfg, &mut w)?,
        Command::Entropy => entropy(cfg, &mut w)?,
        Command::Meanfield => meanfield(cfg, &mut w)?,
        Command::Brute => brute(cfg, &mut w)?,
        Command::Timescales => timescales(cfg, &mut w)?,
    }
    Ok(w.into_written())
}

fn solved(cfg: &RunConfig) -> Result<EigenSystem> {
    let es = solve(&cfg.model)?;
    log::info!("solved n_spins = {} ({} states)", cfg.model.n_spins, es.total_dim());
    Ok(es)
}

fn spectrum(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<()> {
    let es = solved(cfg)?;
    let mut t = Table::new(&["m", "index", "energy", "nz", "sz", "spin_sq_over_n2", "entropy"]);
    for r in eigenstate_scan(&es) {
        t.push(vec![r.m.into(), r.index.into(), r.energy.into(), r.nz.into(), r.sz.into(), r.spin_sq.into(), r.entropy.into()]);
    }
    w.table("spectrum.csv", &t)
}

#[derive(Serialize)]
struct EvolveSummary {
    initial: MomentReport,
    energy: f64,
    diagonal_average: f64,
    degenerate_pairs: usize,
}

fn evolve(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<()> {
    let es = solved(cfg)?;
    let st = InitialState::build(&cfg.model, &cfg.state, cfg.seed)?;
    let ts = evolve_observable(&es, st.as_ref(), cfg.observable, &cfg.times)?;
    let diag = diagonal_average(&es, st.as_ref(), cfg.observable)?;
    let mut t = Table::new(&["t", "value"]).note(format!("observable: {}", ts.observable));
    for (x, y) in ts.times.iter().zip(&ts.values) {
        t.push(vec![(*x).into(), (*y).into()]);
    }
    w.table("evolve.csv", &t)?;
    let energy = match &st {
        InitialState::Product(p) => p.energy(&cfg.model),
        InitialState::Mixed(m) => m.energy(&cfg.model),
    };
    w.json(
        "evolve_summary.json",
        &EvolveSummary {
            initial: moments(st.as_ref()),
            energy,
            diagonal_average: diag.value,
            degenerate_pairs: diag.degenerate_pairs,
        },
    )
}

fn fourier(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<()> {
    let es = solved(cfg)?;
    let st = InitialState::build(&cfg.model, &cfg.state, cfg.seed)?;
    let spec = bohr_spectrum(&es, st.as_ref(), cfg.observable)?;
    let mut lines = spec.lines.clone();
    lines.sort_by(|a, b| a.omega.total_cmp(&b.omega));
    let mut t = Table::new(&["omega", "re", "im", "abs"])
        .note(format!("observable: {}", spec.observable.name()))
        .note(format!("zero_frequency_weight: {}", crate::output::format_float(spec.zero_weight)))
        .note("each line contributes A e^{i omega t} + c.c.");
    for l in &lines {
        t.push(vec![l.omega.into(), l.amplitude.re.into(), l.amplitude.im.into(), l.amplitude.norm().into()]);
    }
    w.table("fourier_lines.csv", &t)?;
    let omega_max = cfg
        .fourier
        .omega_max
        .unwrap_or_else(|| lines.last().map_or(1.0, |l| l.omega * (1.0 + 1e-9)));
    let mut b = Table::new(&["omega", "weight"]);
    for (x, y) in spec.binned(cfg.fourier.bins, omega_max) {
        b.push(vec![x.into(), y.into()]);
    }
    w.table("fourier_binned.csv", &b)
}

fn ensembles(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<()> {
    let es = solved(cfg)?;
    let e0 = cfg.ensembles.energy.unwrap_or_else(|| separatrix_energy(&cfg.model));
    let (lo, hi) = es.energy_range();
    let window = cfg.ensembles.window_fraction * (hi - lo);
    let rows = ensemble_comparison(&es, &cfg.model, e0, &cfg.ensembles.thetas, window)?;
    let mut t = Table::new(&["theta0", "gamma0", "energy", "diagonal", "microcanonical", "window_count"])
        .note(format!("target_energy: {}", crate::output::format_float(e0)))
        .note(format!("window_half_width: {}", crate::output::format_float(window)));
    for r in rows {
        t.push(vec![r.theta0.into(), r.gamma0.into(), r.energy.into(), r.diagonal.into(), r.microcanonical.into(), r.window_count.into()]);
    }
    w.table("ensembles.csv", &t)
}

fn husimi_cmd(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<()> {
    let psi = match cfg.husimi.eigenstate {
        Some(r) => eigenstate(&solved(cfg)?, r.m, r.index)?,
        None => match InitialState::build(&cfg.model, &cfg.state, cfg.seed)? {
            InitialState::Product(p) => p.to_pure(),
            InitialState::Mixed(_) => return Err(Error::Usage("husimi needs a pure state or husimi.eigenstate".into())),
        },
    };
    let (th, ga) = phase_space_grid(cfg.husimi.n_theta, cfg.husimi.n_gamma);
    let g = husimi(&psi, &th, &ga)?;
    let mut t = Table::new(&["theta", "gamma", "q"]);
    for (i, x) in g.theta.iter().enumerate() {
        for (k, y) in g.gamma.iter().enumerate() {
            t.push(vec![(*x).into(), (*y).into(), g.at(i, k).into()]);
        }
    }
    w.table("husimi.csv", &t)
}

#[derive(Serialize)]
struct EntropySummary {
    separatrix_energy: f64,
    report: crate::analysis::ScarReport,
}

fn entropy(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<()> {
    let es = solved(cfg)?;
    let scan = eigenstate_scan(&es);
    let e_s = separatrix_energy(&cfg.model);
    let report = detect_scars(&scan, e_s, &cfg.entropy)?;
    let mut bins = Table::new(&["lo", "hi", "count", "median_entropy"]);
    for b in &report.bins {
        bins.push(vec![b.lo.into(), b.hi.into(), b.count.into(), b.median_entropy.into()]);
    }
    w.table("entropy_bins.csv", &bins)?;
    let mut flagged = vec![0i64; scan.len()];
    for &i in &report.flagged {
        flagged[i] = 1;
    }
    let mut states = Table::new(&["m", "index", "energy", "entropy", "spin_sq_over_n2", "flagged"]);
    for (r, f) in scan.iter().zip(flagged) {
        if r.spin_sq < cfg.entropy.spin_filter {
            states.push(vec![r.m.into(), r.index.into(), r.energy.into(), r.entropy.into(), r.spin_sq.into(), f.into()]);
        }
    }
    w.table("entropy_states.csv", &states)?;
    w.json(
        "entropy_summary.json",
        &EntropySummary {
            separatrix_energy: e_s,
            report,
        },
    )
}

#[derive(Serialize)]
struct MeanfieldSummary {
    alpha: f64,
    mean_sz: f64,
    mean_nz: f64,
    spacing_slope: f64,
    count_slope: f64,
}

fn meanfield(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<()> {
    let task = &cfg.meanfield;
    if task.n_max < 0 {
        return Err(Error::Config {
            path: "meanfield.n_max".into(),
            reason: "must be non-negative".into(),
        });
    }
    let m = moments(InitialState::build(&cfg.model, &cfg.state, cfg.seed)?.as_ref());
    let mut ff = Table::new(&["n", "form_factor"]);
    let mut bg = Table::new(&["n", "h_n", "gamma_re", "gamma_im", "E_A", "E_B"])
        .note("coefficients come from the configured linear model, not from a microscopic derivation");
    for n in 0..=task.n_max {
        ff.push(vec![n.into(), form_factor(task.alpha, n)?.into()]);
        let mc = task.coefficients.coefficients(task.alpha, n, m.mean_sz, m.mean_nz)?;
        let (ea, eb) = bogoliubov_energies(&mc, cfg.model.exchange, cfg.model.n_spins)?;
        bg.push(vec![n.into(), mc.h_n.into(), mc.gamma.re.into(), mc.gamma.im.into(), ea.into(), eb.into()]);
    }
    w.table("form_factor.csv", &ff)?;
    w.table("bogoliubov.csv", &bg)?;
    let mut rows = Vec::new();
    for &n in &task.census_sizes {
        let p = ModelParams::new(cfg.model.exchange, cfg.model.field, n).map_err(|e| Error::Config {
            path: "meanfield.census_sizes".into(),
            reason: e.to_string(),
        })?;
        rows.push(subspace_census(&solve(&p)?, task.census_tol)?);
    }
    let sweep = census_sweep(rows);
    let mut c = Table::new(&["n_spins", "count", "mean_spacing"]);
    for r in &sweep.rows {
        c.push(vec![r.n_spins.into(), r.count.into(), r.mean_spacing.into()]);
    }
    w.table("census.csv", &c)?;
    w.json(
        "meanfield_summary.json",
        &MeanfieldSummary {
            alpha: task.alpha,
            mean_sz: m.mean_sz,
            mean_nz: m.mean_nz,
            spacing_slope: sweep.spacing_slope,
            count_slope: sweep.count_slope,
        },
    )
}

#[derive(Serialize)]
struct BruteSummary {
    sites: usize,
    alpha: f64,
    include_onsite: bool,
    kac_factor: f64,
    reduction: Option<crate::smalln::ReductionReport>,
    oracle: Option<crate::smalln::OracleComparison>,
}

fn brute(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<()> {
    let task = &cfg.brute;
    let lattice = LatticeSpec::new(task.sites)?;
    let p = ModelParams::new(cfg.model.exchange, cfg.model.field, lattice.n_spins())?.with_alpha(cfg.model.alpha)?;
    let opts = BruteOptions {
        include_onsite: task.include_onsite,
        max_sites: task.max_sites,
    };
    let (reduction, oracle) = if p.alpha == 0.0 {
        (Some(verify_collective_reduction(&p, &lattice)?), Some(compare_with_collective(&p)?))
    } else {
        (None, None)
    };
    let series = finite_alpha_scan(&p, &lattice, &task.times.times()?, &opts)?;
    let mut t = Table::new(&["t", "spin_a_sq", "spin_b_sq", "nz"]);
    for k in 0..series.times.len() {
        t.push(vec![series.times[k].into(), series.spin_a_sq[k].into(), series.spin_b_sq[k].into(), series.nz[k].into()]);
    }
    w.table("brute_series.csv", &t)?;
    w.json(
        "brute_summary.json",
        &BruteSummary {
            sites: task.sites,
            alpha: p.alpha,
            include_onsite: task.include_onsite,
            kac_factor: crate::smalln::kac_factor(p.alpha, &lattice),
            reduction,
            oracle,
        },
    )
}

#[derive(Serialize)]
struct TimescaleSummary {
    sweep: SweepKind,
    points: Vec<SweepPoint>,
    failures: Vec<String>,
    /// `d ln T_dec / d ln σ_nz`
    t_dec_vs_sigma_nz: Option<f64>,
    /// `d ln T_rev / d ln n_spins`
    t_rev_vs_n: Option<f64>,
    /// `d ln T_eq / d ln σ_sz²`
    t_eq_vs_sigma_sz_sq: Option<f64>,
}

fn slope_if_varied(x: &[f64], y: &[f64]) -> Option<f64> {
    let varied = x.iter().any(|v| (v - x[0]).abs() > 1e-12 * x[0].abs());
    (x.len() >= 2 && varied && y.iter().all(|v| v.is_finite() && *v > 0.0)).then(|| log_log_slope(x, y))
}

fn timescales(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<()> {
    let task = &cfg.timescales;
    let mut points = Vec::new();
    let mut failures = Vec::new();
    for &v in &task.values {
        let (p, sigma) = match task.sweep {
            SweepKind::Sigma => (cfg.model, v),
            SweepKind::Size => {
                let n = v.round() as usize;
                let p = ModelParams::new(cfg.model.exchange, cfg.model.field, n).map_err(|e| Error::Config {
                    path: "timescales.values".into(),
                    reason: e.to_string(),
                })?;
                (p, task.sigma)
            }
        };
        let t_max = revival_horizon(&p, task.revivals);
        log::info!("timescales: n_spins = {} sigma = {sigma} t_max = {t_max}", p.n_spins);
        match sweep_point(&p, (task.theta, 0.0), sigma, t_max, task.dt, &task.fit) {
            Ok(pt) => points.push(pt),
            Err(e @ (Error::FitFailed { .. } | Error::Usage(_))) => failures.push(format!("n_spins={} sigma={sigma}: {e}", p.n_spins)),
            Err(e) => return Err(e),
        }
    }
    let mut t = Table::new(&["n_spins", "sigma", "sigma_nz", "sigma_sz_sq", "omega_p", "t_dec", "t_rev", "t_eq", "revivals", "envelope_r2"]);
    for pt in &points {
        let f = &pt.fit;
        t.push(vec![
            pt.n_spins.into(),
            pt.sigma.into(),
            pt.sigma_nz.into(),
            pt.sigma_sz_sq.into(),
            f.omega_p.into(),
            f.t_dec.into(),
            f.t_rev.into(),
            f.t_eq.into(),
            f.revivals.into(),
            Cell::Float(f.envelope_r2),
        ]);
    }
    w.table("timescales.csv", &t)?;
    let col = |g: fn(&SweepPoint) -> f64| points.iter().map(g).collect::<Vec<f64>>();
    let summary = TimescaleSummary {
        sweep: task.sweep,
        t_dec_vs_sigma_nz: slope_if_varied(&col(|p| p.sigma_nz), &col(|p| p.fit.t_dec)),
        t_rev_vs_n: slope_if_varied(&col(|p| p.n_spins as f64), &col(|p| p.fit.t_rev)),
        t_eq_vs_sigma_sz_sq: slope_if_varied(&col(|p| p.sigma_sz_sq), &col(|p| p.fit.t_eq)),
        failures,
        points,
    };
    w.json("timescales_summary.json", &summary)
}
