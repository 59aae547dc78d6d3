//! Block-tridiagonal form of the collective Hamiltonian `H = (J/n) S² + h N^z`.
//!
//! On the manifold `S_A = S_B = j` the product basis `|m_A, m_B⟩` splits into
//! sectors of fixed `m = m_A + m_B`. Inside a sector, ordered by ascending
//! `m_A`, `S²` only connects neighbours `(m_A, m_B) ↔ (m_A + 1, m_B - 1)`, so
//! every block is a real symmetric tridiagonal matrix.

use std::fmt;
use std::str::FromStr;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{ModelParams, Spin};
use crate::tridiag::{eigh_tridiagonal, TridiagEigen};

/// `sqrt(j(j+1) - m(m+1))`, the amplitude of `S⁺|j, m⟩`.
pub fn ladder_amplitude(j: f64, m: f64) -> Result<f64> {
    let spin = Spin::from_f64(j)?;
    let k = m + j;
    if m.abs() > j + 1e-12 || (k - k.round()).abs() > 1e-9 {
        return Err(Error::Domain(format!("m = {m} is not a magnetization of spin {j}")));
    }
    Ok(ladder(spin, k.round() as usize))
}

/// Raising amplitude from basis index `k` (`m = k - j`).
pub(crate) fn ladder(spin: Spin, k: usize) -> f64 {
    let m = spin.m(k);
    (spin.casimir() - m * (m + 1.0)).max(0.0).sqrt()
}

/// Total-magnetization sector. Stored as `s = m + 2j`, i.e. `k_A + k_B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SectorIndex {
    pub s: usize,
}

impl SectorIndex {
    /// Magnetization `m = m_A + m_B` of the sector.
    pub fn magnetization(self, spin: Spin) -> f64 {
        self.s as f64 - spin.twice() as f64
    }

    /// Sector containing total magnetization `m`.
    pub fn from_magnetization(spin: Spin, m: f64) -> Result<Self> {
        let s = m + spin.twice() as f64;
        if s < -1e-9 || s > 2.0 * spin.twice() as f64 + 1e-9 || (s - s.round()).abs() > 1e-9 {
            return Err(Error::Domain(format!("no sector with m = {m} for j = {}", spin.value())));
        }
        Ok(SectorIndex { s: s.round() as usize })
    }

    /// First `k_A` of the block basis.
    pub fn ka_min(self, spin: Spin) -> usize {
        self.s.saturating_sub(spin.twice())
    }

    pub fn dim(self, spin: Spin) -> usize {
        let hi = self.s.min(spin.twice());
        hi + 1 - self.ka_min(spin)
    }

    /// `(k_A, k_B)` of the `i`-th block basis element.
    pub fn basis(self, spin: Spin, i: usize) -> (usize, usize) {
        let ka = self.ka_min(spin) + i;
        (ka, self.s - ka)
    }

    /// Every sector of the manifold, in ascending `m`.
    pub fn all(spin: Spin) -> impl Iterator<Item = SectorIndex> {
        (0..=2 * spin.twice()).map(|s| SectorIndex { s })
    }
}

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn is_diagonal(&self) -> bool {
        self.off.iter().all(|&x| x == 0.0)
    }

    /// `y = M x` for a real or complex vector.
    pub fn apply<T>(&self, x: &[T]) -> Vec<T>
    where
        T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
    {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut y = x[i] * self.diag[i];
                if i > 0 {
                    y = y + x[i - 1] * self.off[i - 1];
                }
                if i + 1 < n {
                    y = y + x[i + 1] * self.off[i];
                }
                y
            })
            .collect()
    }

    /// `xᵀ M y` for real vectors.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            acc += x[i] * self.diag[i] * y[i];
            if i + 1 < n {
                acc += self.off[i] * (x[i] * y[i + 1] + x[i + 1] * y[i]);
            }
        }
        acc
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let n = self.dim();
        nalgebra::DMatrix::from_fn(n, n, |i, k| {
            if i == k {
                self.diag[i]
            } else if i + 1 == k {
                self.off[i]
            } else if k + 1 == i {
                self.off[k]
            } else {
                0.0
            }
        })
    }
}

/// Sector-resolved collective Hamiltonian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockHamiltonian {
    pub params: ModelParams,
    pub spin: Spin,
    /// One block per sector, ascending `m`.
    pub blocks: Vec<SymTridiag>,
}

impl BlockHamiltonian {
    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(SymTridiag::dim).sum()
    }

    pub fn block(&self, sector: SectorIndex) -> &SymTridiag {
        &self.blocks[sector.s]
    }
}

/// Builds every sector block of `(J/n) S² + h N^z` on the maximal manifold.
pub fn build_blocks(params: &ModelParams) -> Result<BlockHamiltonian> {
    params.validate()?;
    if params.alpha != 0.0 {
        log::warn!(
            "collective Hamiltonian is the alpha = 0 limit; alpha = {} is ignored here",
            params.alpha
        );
    }
    let spin = params.spin();
    let coupling = params.s2_coupling();
    let blocks = SectorIndex::all(spin)
        .map(|sector| {
            let s2 = CollectiveObservable::TotalSpinSq.block(sector, spin);
            let diag = (0..sector.dim(spin))
                .map(|i| {
                    let (ka, kb) = sector.basis(spin, i);
                    coupling * s2.diag[i] + params.field * (spin.m(ka) - spin.m(kb))
                })
                .collect();
            let off = s2.off.iter().map(|x| coupling * x).collect();
            SymTridiag { diag, off }
        })
        .collect();
    Ok(BlockHamiltonian {
        params: *params,
        spin,
        blocks,
    })
}

/// Eigen-decomposition of one sector block.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorEigen {
    pub sector: SectorIndex,
    pub eigen: TridiagEigen,
}

impl SectorEigen {
    pub fn dim(&self) -> usize {
        self.eigen.dim()
    }

    pub fn energies(&self) -> &[f64] {
        &self.eigen.values
    }

    pub fn vector(&self, a: usize) -> &[f64] {
        self.eigen.vector(a)
    }

    /// Coefficients `⟨a|ψ⟩` of a block-basis vector in this sector's eigenbasis.
    pub fn project(&self, psi: &[num_complex::Complex64]) -> Vec<num_complex::Complex64> {
        let n = self.dim();
        (0..n)
            .map(|a| {
                let v = self.vector(a);
                v.iter().zip(psi).map(|(&x, &p)| p * x).sum()
            })
            .collect()
    }
}

/// Spectral decomposition of all sectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub params: ModelParams,
    pub spin: Spin,
    pub sectors: Vec<SectorEigen>,
}

impl EigenSystem {
    pub fn total_dim(&self) -> usize {
        self.sectors.iter().map(SectorEigen::dim).sum()
    }

    pub fn sector(&self, sector: SectorIndex) -> &SectorEigen {
        &self.sectors[sector.s]
    }

    /// All eigenvalues, sorted ascending.
    pub fn sorted_energies(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self
            .sectors
            .iter()
            .flat_map(|s| s.energies().iter().copied())
            .collect();
        all.sort_by(f64::total_cmp);
        all
    }

    /// `(min, max)` eigenvalue.
    pub fn energy_range(&self) -> (f64, f64) {
        self.sectors
            .iter()
            .flat_map(|s| s.energies().iter().copied())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| (lo.min(e), hi.max(e)))
    }
}

fn diagonalize_block(spin: Spin, sector: SectorIndex, block: &SymTridiag) -> Result<SectorEigen> {
    let eigen = eigh_tridiagonal(&block.diag, &block.off).ok_or(Error::NoConvergence {
        sector: sector.magnetization(spin),
        iterations: 60,
    })?;
    Ok(SectorEigen { sector, eigen })
}

/// Diagonalizes every block. Sectors are independent; results are assembled
/// in ascending sector order whatever the scheduling.
pub fn diagonalize(bh: &BlockHamiltonian) -> Result<EigenSystem> {
    let spin = bh.spin;
    let indexed: Vec<(SectorIndex, &SymTridiag)> = SectorIndex::all(spin).zip(&bh.blocks).collect();
    #[cfg(feature = "parallel")]
    let iter = indexed.par_iter();
    #[cfg(not(feature = "parallel"))]
    let iter = indexed.iter();
    let sectors = iter
        .map(|&(sector, block)| diagonalize_block(spin, sector, block))
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenSystem {
        params: bh.params,
        spin,
        sectors,
    })
}

/// Diagonalizes a single sector; used to check order independence.
pub fn diagonalize_sector(bh: &BlockHamiltonian, sector: SectorIndex) -> Result<SectorEigen> {
    diagonalize_block(bh.spin, sector, bh.block(sector))
}

/// Convenience: build and diagonalize.
pub fn solve(params: &ModelParams) -> Result<EigenSystem> {
    diagonalize(&build_blocks(params)?)
}

/// Collective observables that commute with `S^z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CollectiveObservable {
    /// `n^z = 2 (S_A^z - S_B^z) / n_spins`
    #[serde(rename = "n^z")]
    StaggeredNz,
    /// `s^z = 2 S^z / n_spins`
    #[serde(rename = "s^z")]
    TotalSz,
    /// `S²`
    #[serde(rename = "S^2")]
    TotalSpinSq,
    /// `N^z = S_A^z - S_B^z`
    #[serde(rename = "N^z")]
    StaggeredSpin,
    /// `S^z = S_A^z + S_B^z`
    #[serde(rename = "S^z")]
    TotalSpin,
}

impl CollectiveObservable {
    pub const ALL: [CollectiveObservable; 5] = [
        CollectiveObservable::StaggeredNz,
        CollectiveObservable::TotalSz,
        CollectiveObservable::TotalSpinSq,
        CollectiveObservable::StaggeredSpin,
        CollectiveObservable::TotalSpin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CollectiveObservable::StaggeredNz => "n^z",
            CollectiveObservable::TotalSz => "s^z",
            CollectiveObservable::TotalSpinSq => "S^2",
            CollectiveObservable::StaggeredSpin => "N^z",
            CollectiveObservable::TotalSpin => "S^z",
        }
    }

    /// Matrix of the observable in a sector's block basis.
    pub fn block(self, sector: SectorIndex, spin: Spin) -> SymTridiag {
        let dim = sector.dim(spin);
        let n_spins = 2.0 * spin.twice() as f64;
        let diag_only = |f: &dyn Fn(f64, f64) -> f64| SymTridiag {
            diag: (0..dim)
                .map(|i| {
                    let (ka, kb) = sector.basis(spin, i);
                    f(spin.m(ka), spin.m(kb))
                })
                .collect(),
            off: vec![0.0; dim.saturating_sub(1)],
        };
        match self {
            CollectiveObservable::StaggeredNz => diag_only(&|ma, mb| 2.0 * (ma - mb) / n_spins),
            CollectiveObservable::TotalSz => diag_only(&|ma, mb| 2.0 * (ma + mb) / n_spins),
            CollectiveObservable::StaggeredSpin => diag_only(&|ma, mb| ma - mb),
            CollectiveObservable::TotalSpin => diag_only(&|ma, mb| ma + mb),
            CollectiveObservable::TotalSpinSq => {
                let c = spin.casimir();
                let diag = (0..dim)
                    .map(|i| {
                        let (ka, kb) = sector.basis(spin, i);
                        2.0 * c + 2.0 * spin.m(ka) * spin.m(kb)
                    })
                    .collect();
                let off = (0..dim.saturating_sub(1))
                    .map(|i| {
                        let (ka, kb) = sector.basis(spin, i);
                        // S_A⁺ S_B⁻ : (m_A, m_B) -> (m_A + 1, m_B - 1)
                        ladder(spin, ka) * ladder(spin, spin.twice() - kb)
                    })
                    .collect();
                SymTridiag { diag, off }
            }
        }
    }

    /// Bound on the operator norm, used to sanity-check expectation values.
    pub fn norm_bound(self, spin: Spin) -> f64 {
        let j = spin.value();
        match self {
            CollectiveObservable::StaggeredNz | CollectiveObservable::TotalSz => 1.0,
            CollectiveObservable::StaggeredSpin | CollectiveObservable::TotalSpin => 2.0 * j,
            CollectiveObservable::TotalSpinSq => 2.0 * j * (2.0 * j + 1.0),
        }
    }
}

impl fmt::Display for CollectiveObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CollectiveObservable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "n^z" | "nz" => CollectiveObservable::StaggeredNz,
            "s^z" | "sz" => CollectiveObservable::TotalSz,
            "S^2" | "S2" | "S²" => CollectiveObservable::TotalSpinSq,
            "N^z" | "Nz" => CollectiveObservable::StaggeredSpin,
            "S^z" | "Sz" => CollectiveObservable::TotalSpin,
            other => {
                return Err(Error::Usage(format!(
                    "unknown or non-S^z-conserving observable `{other}` (expected n^z, s^z, S^2, N^z or S^z)"
                )))
            }
        })
    }
}

/// `collective_observable_matrix` by name.
pub fn collective_observable_matrix(name: &str, sector: SectorIndex, spin: Spin) -> Result<SymTridiag> {
    Ok(name.parse::<CollectiveObservable>()?.block(sector, spin))
}
