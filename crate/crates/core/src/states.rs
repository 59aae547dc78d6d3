//! Néel-type initial states in the collective basis.
//!
//! Product states `|a⟩_A ⊗ |b⟩_B` are kept in factored form ([`ProductState`]);
//! mixed Néel ensembles are convex collections of them and are never expanded
//! into a density matrix.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::collective::{ladder, CollectiveObservable, SectorIndex};
use crate::error::{Error, Result};
use crate::params::{ModelParams, Spin};
use crate::quadrature::{erf, erfi, gauss_legendre_on};
use crate::tridiag::eigh_tridiagonal;

/// Rotation axis of a single sublattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Z,
}

/// Cached eigen-decomposition of `S^x` for one spin, giving `exp(i θ S^x)`
/// without binomial coefficients.
#[derive(Debug, Clone)]
pub struct XRotation {
    spin: Spin,
    /// Eigenvalues of `S^x`, snapped to the exact ladder `-j, …, j`.
    values: Vec<f64>,
    /// Row-major eigenvectors, `vectors[a * d + k]`.
    vectors: Vec<f64>,
}

impl XRotation {
    pub fn new(spin: Spin) -> Self {
        let d = spin.dim();
        let off: Vec<f64> = (0..d - 1).map(|k| 0.5 * ladder(spin, k)).collect();
        let eig = eigh_tridiagonal(&vec![0.0; d], &off).expect("S^x eigen-decomposition");
        let values = (0..d).map(|a| spin.m(a)).collect();
        XRotation {
            spin,
            values,
            vectors: eig.vectors,
        }
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    /// `exp(i angle S^x) |psi⟩`.
    pub fn apply(&self, angle: f64, psi: &[Complex64]) -> Vec<Complex64> {
        let d = self.spin.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); d];
        for a in 0..d {
            let v = &self.vectors[a * d..(a + 1) * d];
            let overlap: Complex64 = v.iter().zip(psi).map(|(&x, &p)| p * x).sum();
            let c = overlap * Complex64::from_polar(1.0, angle * self.values[a]);
            for (o, &x) in out.iter_mut().zip(v) {
                *o += c * x;
            }
        }
        out
    }

    /// `exp(i angle S^x) |j, m_k⟩` for a basis state.
    pub fn apply_basis(&self, angle: f64, k: usize) -> Vec<Complex64> {
        let d = self.spin.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); d];
        for a in 0..d {
            let v = &self.vectors[a * d..(a + 1) * d];
            let c = Complex64::from_polar(v[k], angle * self.values[a]);
            for (o, &x) in out.iter_mut().zip(v) {
                *o += c * x;
            }
        }
        out
    }

    pub fn matrix(&self, angle: f64) -> DMatrix<Complex64> {
        let d = self.spin.dim();
        let mut m = DMatrix::zeros(d, d);
        for k in 0..d {
            let col = self.apply_basis(angle, k);
            for (i, c) in col.into_iter().enumerate() {
                m[(i, k)] = c;
            }
        }
        m
    }
}

/// `exp(i angle S^axis)` on the spin-`j` irrep.
pub fn sublattice_rotation(spin: Spin, angle: f64, axis: Axis) -> DMatrix<Complex64> {
    match axis {
        Axis::Z => {
            let d = spin.dim();
            DMatrix::from_fn(d, d, |i, k| {
                if i == k {
                    Complex64::from_polar(1.0, angle * spin.m(k))
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        }
        Axis::X => XRotation::new(spin).matrix(angle),
    }
}

fn apply_z(spin: Spin, angle: f64, psi: &mut [Complex64]) {
    for (k, c) in psi.iter_mut().enumerate() {
        *c *= Complex64::from_polar(1.0, angle * spin.m(k));
    }
}

/// Single-sublattice expectation values `(⟨S^x⟩, ⟨S^y⟩, ⟨S^z⟩, ⟨(S^z)²⟩)`.
pub fn sublattice_moments(spin: Spin, psi: &[Complex64]) -> ([f64; 3], f64) {
    let mut plus = Complex64::new(0.0, 0.0);
    let mut z = 0.0;
    let mut zz = 0.0;
    for k in 0..spin.dim() {
        let p = psi[k].norm_sqr();
        let m = spin.m(k);
        z += p * m;
        zz += p * m * m;
        if k + 1 < spin.dim() {
            plus += psi[k + 1].conj() * psi[k] * ladder(spin, k);
        }
    }
    ([plus.re, plus.im, z], zz)
}

/// General state on the `S_A = S_B = j` manifold, stored sector by sector in
/// the block basis of [`SectorIndex`].
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    pub spin: Spin,
    pub sectors: Vec<Vec<Complex64>>,
}

impl PureState {
    pub fn zeros(spin: Spin) -> Self {
        PureState {
            spin,
            sectors: SectorIndex::all(spin)
                .map(|s| vec![Complex64::new(0.0, 0.0); s.dim(spin)])
                .collect(),
        }
    }

    /// Basis element `|m_A, m_B⟩` given by basis indices.
    pub fn basis(spin: Spin, ka: usize, kb: usize) -> Self {
        let mut st = Self::zeros(spin);
        *st.amplitude_mut(ka, kb) = Complex64::new(1.0, 0.0);
        st
    }

    /// State supported on a single sector.
    pub fn in_sector(spin: Spin, sector: SectorIndex, amplitudes: Vec<Complex64>) -> Self {
        assert_eq!(amplitudes.len(), sector.dim(spin));
        let mut st = Self::zeros(spin);
        st.sectors[sector.s] = amplitudes;
        st
    }

    pub fn amplitude(&self, ka: usize, kb: usize) -> Complex64 {
        let sector = SectorIndex { s: ka + kb };
        self.sectors[sector.s][ka - sector.ka_min(self.spin)]
    }

    pub fn amplitude_mut(&mut self, ka: usize, kb: usize) -> &mut Complex64 {
        let sector = SectorIndex { s: ka + kb };
        let i = ka - sector.ka_min(self.spin);
        &mut self.sectors[sector.s][i]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.sectors.iter().flatten().map(|c| c.norm_sqr()).sum()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm_sqr().sqrt();
        for c in self.sectors.iter_mut().flatten() {
            *c /= n;
        }
        self
    }

    /// Coefficient matrix `C[k_A][k_B]`.
    pub fn coefficient_matrix(&self) -> DMatrix<Complex64> {
        let d = self.spin.dim();
        DMatrix::from_fn(d, d, |ka, kb| self.amplitude(ka, kb))
    }

    /// `⟨other|self⟩`.
    pub fn overlap(&self, other: &PureState) -> Complex64 {
        self.sectors
            .iter()
            .flatten()
            .zip(other.sectors.iter().flatten())
            .map(|(a, b)| b.conj() * a)
            .sum()
    }

    pub fn expectation(&self, obs: CollectiveObservable) -> f64 {
        SectorIndex::all(self.spin)
            .zip(&self.sectors)
            .map(|(sector, psi)| {
                let op = obs.block(sector, self.spin);
                let o = op.apply(psi);
                psi.iter().zip(&o).map(|(p, q)| (p.conj() * q).re).sum::<f64>()
            })
            .sum()
    }

    pub fn moments(&self) -> MomentReport {
        let spin = self.spin;
        let n = 2.0 * spin.twice() as f64;
        let (mut nz, mut nz2, mut sz, mut sz2) = (0.0, 0.0, 0.0, 0.0);
        for (s, psi) in self.sectors.iter().enumerate() {
            let sector = SectorIndex { s };
            for (i, c) in psi.iter().enumerate() {
                let p = c.norm_sqr();
                let (ka, kb) = sector.basis(spin, i);
                let x = 2.0 * (spin.m(ka) - spin.m(kb)) / n;
                let y = 2.0 * (spin.m(ka) + spin.m(kb)) / n;
                nz += p * x;
                nz2 += p * x * x;
                sz += p * y;
                sz2 += p * y * y;
            }
        }
        MomentReport::from_raw(nz, nz2, sz, sz2)
    }
}

/// `|a⟩_A ⊗ |b⟩_B` with both factors on the spin-`j` irrep.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    pub spin: Spin,
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

impl ProductState {
    /// Amplitudes of this state inside one sector, in block-basis order.
    pub fn sector_amplitudes(&self, sector: SectorIndex, out: &mut Vec<Complex64>) {
        out.clear();
        for i in 0..sector.dim(self.spin) {
            let (ka, kb) = sector.basis(self.spin, i);
            out.push(self.a[ka] * self.b[kb]);
        }
    }

    pub fn to_pure(&self) -> PureState {
        let mut st = PureState::zeros(self.spin);
        for (s, v) in st.sectors.iter_mut().enumerate() {
            self.sector_amplitudes(SectorIndex { s }, v);
        }
        st
    }

    pub fn moments(&self) -> MomentReport {
        let spin = self.spin;
        let n = 2.0 * spin.twice() as f64;
        let (va, za2) = sublattice_moments(spin, &self.a);
        let (vb, zb2) = sublattice_moments(spin, &self.b);
        let (za, zb) = (va[2], vb[2]);
        let c = 2.0 / n;
        MomentReport::from_raw(
            c * (za - zb),
            c * c * (za2 - 2.0 * za * zb + zb2),
            c * (za + zb),
            c * c * (za2 + 2.0 * za * zb + zb2),
        )
    }

    /// `⟨S²⟩`, using `⟨S_A·S_B⟩ = ⟨S_A⟩·⟨S_B⟩` for product states.
    pub fn total_spin_sq(&self) -> f64 {
        let (va, _) = sublattice_moments(self.spin, &self.a);
        let (vb, _) = sublattice_moments(self.spin, &self.b);
        let dot: f64 = va.iter().zip(&vb).map(|(x, y)| x * y).sum();
        2.0 * self.spin.casimir() + 2.0 * dot
    }

    /// `⟨H⟩` for the collective Hamiltonian.
    pub fn energy(&self, params: &ModelParams) -> f64 {
        let (va, _) = sublattice_moments(self.spin, &self.a);
        let (vb, _) = sublattice_moments(self.spin, &self.b);
        params.s2_coupling() * self.total_spin_sq() + params.field * (va[2] - vb[2])
    }

    /// `⟨self|psi⟩` for a general state.
    pub fn overlap_with(&self, psi: &PureState) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (s, v) in psi.sectors.iter().enumerate() {
            let sector = SectorIndex { s };
            for (i, c) in v.iter().enumerate() {
                let (ka, kb) = sector.basis(self.spin, i);
                acc += (self.a[ka] * self.b[kb]).conj() * c;
            }
        }
        acc
    }
}

/// `|θ, φ⟩ = exp(iφS^z) exp(iθS^x) |↑⟩_A ⊗ |↓⟩_B`.
///
/// The Néel vector of this state points along `(sin θ sin φ, sin θ cos φ, cos θ)`.
pub fn rotated_neel(params: &ModelParams, theta: f64, phi: f64) -> ProductState {
    rotated_neel_with(&XRotation::new(params.spin()), theta, phi)
}

pub fn rotated_neel_with(rot: &XRotation, theta: f64, phi: f64) -> ProductState {
    let spin = rot.spin();
    let mut a = rot.apply_basis(theta, spin.twice());
    let mut b = rot.apply_basis(theta, 0);
    apply_z(spin, phi, &mut a);
    apply_z(spin, phi, &mut b);
    ProductState { spin, a, b }
}

/// Rotated Néel state whose Néel vector points along the unit vector `r`.
pub fn neel_along(rot: &XRotation, r: [f64; 3]) -> ProductState {
    let theta = r[2].clamp(-1.0, 1.0).acos();
    let phi = r[0].atan2(r[1]);
    rotated_neel_with(rot, theta, phi)
}

/// `|θ₀, γ₀⟩ = exp(iθ₀S^x) (exp(iγ₀S^x)|↓⟩_A ⊗ exp(-iγ₀S^x)|↑⟩_B)`.
///
/// `γ₀ = 0` is the anti-Néel reference rotated by `θ₀`; `θ₀ = π` is the Néel
/// state up to a phase.
pub fn tilted_state(params: &ModelParams, theta0: f64, gamma0: f64) -> ProductState {
    tilted_state_with(&XRotation::new(params.spin()), theta0, gamma0)
}

pub fn tilted_state_with(rot: &XRotation, theta0: f64, gamma0: f64) -> ProductState {
    let spin = rot.spin();
    ProductState {
        spin,
        a: rot.apply_basis(theta0 + gamma0, 0),
        b: rot.apply_basis(theta0 - gamma0, spin.twice()),
    }
}

/// Expectation values of the staggered and uniform magnetizations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub mean_nz: f64,
    pub mean_sz: f64,
    pub var_nz: f64,
    pub var_sz: f64,
}

impl MomentReport {
    fn from_raw(nz: f64, nz2: f64, sz: f64, sz2: f64) -> Self {
        MomentReport {
            mean_nz: nz,
            mean_sz: sz,
            var_nz: (nz2 - nz * nz).max(0.0),
            var_sz: (sz2 - sz * sz).max(0.0),
        }
    }

    /// `⟨(n^z)²⟩`.
    pub fn second_nz(&self) -> f64 {
        self.var_nz + self.mean_nz * self.mean_nz
    }

    pub fn second_sz(&self) -> f64 {
        self.var_sz + self.mean_sz * self.mean_sz
    }

    /// Convex combination with the spread of the member means.
    pub fn mixture<'a>(items: impl IntoIterator<Item = (f64, &'a MomentReport)>) -> Self {
        let (mut nz, mut nz2, mut sz, mut sz2) = (0.0, 0.0, 0.0, 0.0);
        for (w, m) in items {
            nz += w * m.mean_nz;
            nz2 += w * m.second_nz();
            sz += w * m.mean_sz;
            sz2 += w * m.second_sz();
        }
        MomentReport::from_raw(nz, nz2, sz, sz2)
    }
}

/// Discretization of the sphere integral defining a mixed Néel state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case", deny_unknown_fields)]
pub enum Quadrature {
    /// Gauss–Legendre in `1 - cos θ'` (measured from the centre direction),
    /// truncated at `cutoff_sigmas · σ`, times a uniform rule in `φ'`.
    GaussLegendre {
        polar_nodes: usize,
        azimuthal_nodes: usize,
        cutoff_sigmas: f64,
    },
    /// Equal-weight samples drawn from the Gaussian weight.
    MonteCarlo { samples: usize, seed: u64 },
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature::GaussLegendre {
            polar_nodes: 64,
            azimuthal_nodes: 64,
            cutoff_sigmas: 6.0,
        }
    }
}

impl Quadrature {
    /// Same rule with both node counts doubled.
    pub fn refined(self) -> Self {
        match self {
            Quadrature::GaussLegendre {
                polar_nodes,
                azimuthal_nodes,
                cutoff_sigmas,
            } => Quadrature::GaussLegendre {
                polar_nodes: 2 * polar_nodes,
                azimuthal_nodes: 2 * azimuthal_nodes,
                cutoff_sigmas,
            },
            Quadrature::MonteCarlo { samples, seed } => Quadrature::MonteCarlo {
                samples: 2 * samples,
                seed,
            },
        }
    }
}

/// One member of a mixed ensemble.
#[derive(Debug, Clone)]
pub struct EnsembleMember {
    pub weight: f64,
    /// Unit Néel vector of the member.
    pub direction: [f64; 3],
    pub state: ProductState,
}

/// Statistical mixture of rotated Néel states.
#[derive(Debug, Clone)]
pub struct MixedEnsemble {
    pub spin: Spin,
    /// Centre direction `(θ₀, φ₀)` in standard spherical coordinates.
    pub center: (f64, f64),
    pub sigma: f64,
    pub quadrature: Quadrature,
    pub members: Vec<EnsembleMember>,
    /// Estimated Gaussian weight discarded by the polar cutoff.
    pub tail_weight: f64,
}

impl MixedEnsemble {
    pub fn total_weight(&self) -> f64 {
        self.members.iter().map(|m| m.weight).sum()
    }

    pub fn moments(&self) -> MomentReport {
        let each: Vec<(f64, MomentReport)> = self
            .members
            .iter()
            .map(|m| (m.weight, m.state.moments()))
            .collect();
        MomentReport::mixture(each.iter().map(|(w, m)| (*w, m)))
    }

    pub fn energy(&self, params: &ModelParams) -> f64 {
        self.members.iter().map(|m| m.weight * m.state.energy(params)).sum()
    }
}

/// Unit vector for spherical angles.
pub fn unit_vector(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// Maps a direction given relative to the pole onto the frame whose pole is
/// `r(θ₀, φ₀)`.
fn from_pole_frame(center: (f64, f64), r: [f64; 3]) -> [f64; 3] {
    let (t0, p0) = center;
    let (ct, st) = (t0.cos(), t0.sin());
    // R_y(θ₀)
    let x1 = ct * r[0] + st * r[2];
    let y1 = r[1];
    let z1 = -st * r[0] + ct * r[2];
    // R_z(φ₀)
    let (cp, sp) = (p0.cos(), p0.sin());
    [cp * x1 - sp * y1, sp * x1 + cp * y1, z1]
}

/// Mixed Néel state with Gaussian weight `exp(-(1 - r·r₀)² / 2σ²)`.
pub fn mixed_neel(params: &ModelParams, center: (f64, f64), sigma: f64, quadrature: Quadrature) -> Result<MixedEnsemble> {
    params.validate()?;
    mixed_neel_with(&XRotation::new(params.spin()), center, sigma, quadrature)
}

pub fn mixed_neel_with(rot: &XRotation, center: (f64, f64), sigma: f64, quadrature: Quadrature) -> Result<MixedEnsemble> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::param("sigma", "must be positive and finite"));
    }
    let gauss = |u: f64| (-(u * u) / (2.0 * sigma * sigma)).exp();
    let mut nodes: Vec<(f64, f64, f64)> = Vec::new(); // (u, φ', weight)
    let mut tail_weight = 0.0;
    match quadrature {
        Quadrature::GaussLegendre {
            polar_nodes,
            azimuthal_nodes,
            cutoff_sigmas,
        } => {
            if polar_nodes == 0 || azimuthal_nodes == 0 || cutoff_sigmas <= 0.0 {
                return Err(Error::param("quadrature", "node counts and cutoff must be positive"));
            }
            let umax = (cutoff_sigmas * sigma).min(2.0);
            let full = erf(2f64.sqrt() / sigma);
            tail_weight = ((full - erf(umax / (2f64.sqrt() * sigma))) / full).max(0.0);
            if tail_weight > 1e-8 {
                log::warn!(
                    "mixed Néel quadrature drops {tail_weight:.2e} of the weight; raise cutoff_sigmas above {cutoff_sigmas}"
                );
            }
            let (us, ws) = gauss_legendre_on(polar_nodes, 0.0, umax);
            for (&u, &w) in us.iter().zip(&ws) {
                for l in 0..azimuthal_nodes {
                    let phi = 2.0 * PI * l as f64 / azimuthal_nodes as f64;
                    nodes.push((u, phi, w * gauss(u)));
                }
            }
        }
        Quadrature::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::param("quadrature.samples", "must be positive"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let normal = rand_distr::Normal::new(0.0, sigma).expect("valid sigma");
            while nodes.len() < samples {
                let u = if sigma < 1.0 {
                    let x: f64 = rand_distr::Distribution::sample(&normal, &mut rng);
                    x.abs()
                } else {
                    let u: f64 = rng.gen_range(0.0..2.0);
                    if rng.gen::<f64>() >= gauss(u) {
                        continue;
                    }
                    u
                };
                if u > 2.0 {
                    continue;
                }
                let phi = rng.gen_range(0.0..2.0 * PI);
                nodes.push((u, phi, 1.0));
            }
        }
    }
    let total: f64 = nodes.iter().map(|n| n.2).sum();
    let members = nodes
        .into_iter()
        .filter(|n| n.2 > 0.0)
        .map(|(u, phi, w)| {
            let cos_t = 1.0 - u;
            let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
            let local = [sin_t * phi.cos(), sin_t * phi.sin(), cos_t];
            let direction = from_pole_frame(center, local);
            EnsembleMember {
                weight: w / total,
                direction,
                state: neel_along(rot, direction),
            }
        })
        .collect();
    Ok(MixedEnsemble {
        spin: rot.spin(),
        center,
        sigma,
        quadrature,
        members,
        tail_weight,
    })
}

/// Any state the dynamics and analysis routines accept.
#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a PureState),
    Product(&'a ProductState),
    Mixed(&'a MixedEnsemble),
}

impl<'a> From<&'a PureState> for StateRef<'a> {
    fn from(s: &'a PureState) -> Self {
        StateRef::Pure(s)
    }
}

impl<'a> From<&'a ProductState> for StateRef<'a> {
    fn from(s: &'a ProductState) -> Self {
        StateRef::Product(s)
    }
}

impl<'a> From<&'a MixedEnsemble> for StateRef<'a> {
    fn from(s: &'a MixedEnsemble) -> Self {
        StateRef::Mixed(s)
    }
}

impl StateRef<'_> {
    pub fn spin(&self) -> Spin {
        match self {
            StateRef::Pure(s) => s.spin,
            StateRef::Product(s) => s.spin,
            StateRef::Mixed(s) => s.spin,
        }
    }

    pub fn moments(&self) -> MomentReport {
        match self {
            StateRef::Pure(s) => s.moments(),
            StateRef::Product(s) => s.moments(),
            StateRef::Mixed(s) => s.moments(),
        }
    }

    pub fn member_count(&self) -> usize {
        match self {
            StateRef::Mixed(s) => s.members.len(),
            _ => 1,
        }
    }

    /// Calls `f(weight, amplitudes)` for every member's component in `sector`.
    pub fn for_each_member_in(&self, sector: SectorIndex, mut f: impl FnMut(f64, &[Complex64])) {
        let mut buf = Vec::new();
        match self {
            StateRef::Pure(s) => f(1.0, &s.sectors[sector.s]),
            StateRef::Product(s) => {
                s.sector_amplitudes(sector, &mut buf);
                f(1.0, &buf);
            }
            StateRef::Mixed(e) => {
                for m in &e.members {
                    m.state.sector_amplitudes(sector, &mut buf);
                    f(m.weight, &buf);
                }
            }
        }
    }
}

/// `moments()` for any supported state.
pub fn moments<'a>(state: impl Into<StateRef<'a>>) -> MomentReport {
    state.into().moments()
}

/// Factor mapping the Pauli-sum staggered magnetization `N^z_P = Σ_j (σ^z_{A,j} - σ^z_{B,j})`
/// over `N_P = n_spins / 2` pairs onto `n^z`: `n^z = N^z_P / (2 N_P) = N^z_P / n_spins`.
pub fn pauli_to_nz(n_spins: usize) -> f64 {
    1.0 / n_spins as f64
}

/// `⟨cos θ'⟩` of the Gaussian cap weight, with `θ'` measured from its centre.
pub fn cap_mean_cos(sigma: f64) -> f64 {
    let x = 2f64.sqrt() / sigma;
    1.0 - sigma * (2.0 / PI).sqrt() * (-(x * x)).exp_m1().abs() / erf(x)
}

/// Closed-form `⟨N^z⟩_ρ` of a mixed Néel state in the Pauli-sum normalization
/// (`N^z ∈ [-2N_P, 2N_P]`, `N_P = n_spins / 2`):
/// `2 N_P cos θ₀ (1 - σ sqrt(2/π) (1 - e^{-2/σ²}) / erf(sqrt(2)/σ))`.
pub fn pauli_mean_nz(theta0: f64, sigma: f64, n_spins: usize) -> f64 {
    let pairs = n_spins as f64 / 2.0;
    2.0 * pairs * theta0.cos() * cap_mean_cos(sigma)
}

/// The same expression without the leading `σ` inside the bracket. This
/// variant misses the `σ → 0` limit; kept for the test that shows it.
pub fn pauli_mean_nz_missing_sigma(theta0: f64, sigma: f64, n_spins: usize) -> f64 {
    let pairs = n_spins as f64 / 2.0;
    let x = 2f64.sqrt() / sigma;
    2.0 * pairs * theta0.cos() * (1.0 - (2.0 / PI).sqrt() * (-(x * x)).exp_m1().abs() / erf(x))
}

/// `σ → 0` and `σ → ∞` limits of `⟨(N^z)²⟩_ρ` in the Pauli-sum normalization.
pub fn pauli_second_moment_limits(theta0: f64, n_spins: usize) -> (f64, f64) {
    let n = n_spins as f64 / 2.0;
    let small = 4.0 * n * n * theta0.cos().powi(2) + 2.0 * n * theta0.sin().powi(2);
    let large = 4.0 / 3.0 * n * (n + 1.0);
    (small, large)
}

/// Large-`N` variance of `N^z / N_P` at `θ₀ = π/2`, computed from the cap
/// moments `⟨u⟩`, `⟨u²⟩` with `u = 1 - cos θ'`.
pub fn large_n_nz_variance(sigma: f64) -> f64 {
    let x = 2f64.sqrt() / sigma;
    let norm = sigma * (PI / 2.0).sqrt() * erf(x);
    let tail = (-(x * x)).exp();
    let mean_u = sigma * sigma * (1.0 - tail) / norm;
    let mean_u2 = sigma * sigma - 2.0 * sigma * sigma * tail / norm;
    2.0 * (2.0 * mean_u - mean_u2)
}

/// Alternative large-`N` variance closed form, with either `Erfi` or `erf` in
/// the denominator. Kept for comparison with [`large_n_nz_variance`].
pub fn large_n_nz_variance_alternative(sigma: f64, use_erfi: bool) -> f64 {
    let x = 2f64.sqrt() / sigma;
    let denom = if use_erfi { erfi(x) } else { erf(x) };
    4.0 * sigma * (PI * sigma - 2.0 * (2.0 * PI).sqrt() / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize) -> ModelParams {
        ModelParams::new(2.0, 1.0, n).unwrap()
    }

    fn max_unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
        let d = u.nrows();
        let g = u.adjoint() * u;
        (g - DMatrix::<Complex64>::identity(d, d)).iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    #[test]
    fn rotation_examples() {
        let spin = Spin::from_twice(7);
        let id = sublattice_rotation(spin, 0.0, Axis::X);
        assert!(max_unitarity_defect(&id) < 1e-12);
        for i in 0..spin.dim() {
            for k in 0..spin.dim() {
                let expect = if i == k { 1.0 } else { 0.0 };
                assert!((id[(i, k)] - expect).norm() < 1e-12);
            }
        }
        let z = sublattice_rotation(spin, 0.3, Axis::Z);
        assert!((z[(2, 2)] - Complex64::from_polar(1.0, 0.3 * spin.m(2))).norm() < 1e-15);

        // exp(iπ σ^x / 2) = i σ^x, so |↑⟩ -> i|↓⟩.
        let half = Spin::from_twice(1);
        let u = sublattice_rotation(half, PI, Axis::X);
        assert!((u[(0, 1)] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        assert!(u[(1, 1)].norm() < 1e-12);
    }

    #[test]
    fn large_spin_rotation_is_unitary() {
        let spin = Spin::from_twice(250);
        let u = sublattice_rotation(spin, 1.234, Axis::X);
        assert!(max_unitarity_defect(&u) < 1e-11);
    }

    #[test]
    fn rotated_neel_examples() {
        let p = params(20);
        let spin = p.spin();
        let neel = rotated_neel(&p, 0.0, 0.0).to_pure();
        assert!((neel.amplitude(spin.twice(), 0).norm() - 1.0).abs() < 1e-12);
        assert!((neel.moments().mean_nz - 1.0).abs() < 1e-12);
        let flipped = rotated_neel(&p, PI, 0.0).to_pure();
        assert!((flipped.amplitude(0, spin.twice()).norm() - 1.0).abs() < 1e-12);
        assert!((flipped.moments().mean_nz + 1.0).abs() < 1e-12);
        let m = rotated_neel(&p, PI / 3.0, 0.4).moments();
        assert!((m.mean_nz - 0.5).abs() < 1e-12);
        assert!(m.mean_sz.abs() < 1e-12);
    }

    #[test]
    fn rotated_neel_points_along_its_direction() {
        let p = params(16);
        let rot = XRotation::new(p.spin());
        let r = unit_vector(1.1, 2.3);
        let st = neel_along(&rot, r);
        let (va, _) = sublattice_moments(p.spin(), &st.a);
        let (vb, _) = sublattice_moments(p.spin(), &st.b);
        let j = p.spin().value();
        for k in 0..3 {
            assert!((va[k] - j * r[k]).abs() < 1e-10);
            assert!((vb[k] + j * r[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn tilted_state_examples() {
        let p = params(12);
        let spin = p.spin();
        let t = tilted_state(&p, 0.0, 0.0).to_pure();
        assert!((t.amplitude(0, spin.twice()).norm() - 1.0).abs() < 1e-12);
        let t = tilted_state(&p, 0.0, PI).to_pure();
        assert!((t.amplitude(spin.twice(), 0).norm() - 1.0).abs() < 1e-12);
        // γ₀ = 0 reproduces a rotated anti-Néel reference up to a global phase.
        let a = tilted_state(&p, 0.8, 0.0).to_pure();
        let b = rotated_neel(&p, PI - 0.8, PI).to_pure();
        assert!((a.overlap(&b).norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pure_state_moments_at_equator() {
        let p = params(40);
        let m = rotated_neel(&p, PI / 2.0, 0.0).moments();
        assert!((m.var_nz - 1.0 / 40.0).abs() < 1e-12);
        let m0 = rotated_neel(&p, 0.0, 0.0).moments();
        assert!(m0.var_sz.abs() < 1e-14);
        // Factored moments agree with the expanded state.
        let st = rotated_neel(&p, 0.7, 1.9);
        let (a, b) = (st.moments(), st.to_pure().moments());
        assert!((a.var_nz - b.var_nz).abs() < 1e-12 && (a.var_sz - b.var_sz).abs() < 1e-12);
    }

    #[test]
    fn ensemble_weights_normalized_and_limits() {
        let p = params(40);
        let e = mixed_neel(&p, (0.9, 0.0), 0.1, Quadrature::default()).unwrap();
        assert!((e.total_weight() - 1.0).abs() < 1e-12);
        let tiny = mixed_neel(&p, (0.9, 0.0), 1e-6, Quadrature::default()).unwrap();
        assert!((tiny.moments().mean_nz - 0.9f64.cos()).abs() < 1e-4);
        let huge = mixed_neel(&p, (0.9, 0.0), 1e3, Quadrature::default()).unwrap();
        let m = huge.moments();
        assert!(m.mean_nz.abs() < 1e-3);
        let expect = (20.0 + 1.0) / (3.0 * 20.0);
        assert!((m.second_nz() - expect).abs() < 1e-3);
    }

    #[test]
    fn monte_carlo_ensemble_is_seeded() {
        let p = params(8);
        let q = Quadrature::MonteCarlo { samples: 200, seed: 7 };
        let a = mixed_neel(&p, (0.5, 0.0), 0.2, q).unwrap();
        let b = mixed_neel(&p, (0.5, 0.0), 0.2, q).unwrap();
        assert_eq!(a.members.len(), 200);
        assert_eq!(a.moments(), b.moments());
        // Sampling error only.
        assert!((a.moments().mean_nz - 0.5f64.cos() * cap_mean_cos(0.2)).abs() < 0.05);
    }

    #[test]
    fn closed_form_limits() {
        let n = 50;
        let t = 0.6f64;
        // The approach to the pure-state value is linear in σ.
        let pure = n as f64 * t.cos();
        assert!((pauli_mean_nz(t, 1e-8, n) - pure).abs() < 1e-7 * pure.abs());
        assert!(pauli_mean_nz(t, 1e6, n).abs() < 1e-5 * 25.0);
        let variant = pauli_mean_nz_missing_sigma(t, 1e-8, n);
        assert!((variant - n as f64 * t.cos()).abs() > 1.0);
    }
}
