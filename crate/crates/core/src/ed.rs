//! Exact diagonalization of short periodic chains
//!
//! ```text
//! H = -(1/2) Σ_n (σˣ_n σˣ_{n+1} + σʸ_n σʸ_{n+1} + Δ σᶻ_n σᶻ_{n+1})
//! ```
//!
//! Basis states are bit strings with bit `n` set for an up spin at site `n`.
//! `H` is block-diagonalized by magnetization and lattice momentum: `T`
//! moves site `n` to `n + 1` and the momentum states
//! `|r, k⟩ = R^{-1/2} Σ_{j<R} e^{-ikj} T^j |r⟩` (period `R` of the
//! representative `r`) satisfy `T |r, k⟩ = e^{ik} |r, k⟩`. Each block is
//! diagonalized densely.
//!
//! The transverse spectrum `σ⁻_k = N^{-1/2} Σ_n e^{ikn} σ⁻_n` is resolved into
//! Lehmann lines `(E_f - E_0, |⟨f|σ⁻_k|0⟩|²)`. At `Δ = -1` the Hamiltonian is
//! a sublattice rotation away from the usual antiferromagnet, which moves
//! momenta by `π`; [`band_support_report`] picks the assignment that puts the
//! weight inside the two-spinon band and records the choice.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dcf::linspace;
use crate::error::{Error, Result};
use crate::kinematics::band_boundaries;

pub const MAX_SITES: usize = 14;
/// Lorentzian half-width used when none is given.
pub const DEFAULT_ETA: f64 = 0.05 * PI;
/// Lines closer than this in energy are merged.
pub const DEGENERACY_WINDOW: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub n_sites: usize,
    pub delta: f64,
    pub periodic: bool,
}

impl ChainSpec {
    /// Periodic chain; `n_sites` even in `2..=14`. Two sites carry a single
    /// bond.
    pub fn new(n_sites: usize, delta: f64) -> Result<Self> {
        let spec = Self {
            n_sites,
            delta,
            periodic: true,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Isotropic point `Δ = -1`.
    pub fn xxx(n_sites: usize) -> Result<Self> {
        Self::new(n_sites, -1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 || self.n_sites > MAX_SITES || self.n_sites % 2 != 0 {
            return Err(Error::Size(self.n_sites));
        }
        if !self.delta.is_finite() {
            return Err(Error::InvalidConfig(format!("Δ must be finite, got {}", self.delta)));
        }
        if !self.periodic {
            return Err(Error::InvalidConfig("only periodic chains are supported".into()));
        }
        Ok(())
    }

    /// `2π k_index / N`.
    pub fn momentum(&self, k_index: usize) -> f64 {
        TAU * k_index as f64 / self.n_sites as f64
    }

    fn bonds(&self) -> Vec<(usize, usize)> {
        let n = self.n_sites;
        if n == 2 {
            vec![(0, 1)]
        } else {
            (0..n).map(|i| (i, (i + 1) % n)).collect()
        }
    }

    fn mask(&self) -> u32 {
        (1u32 << self.n_sites) - 1
    }

    fn translate(&self, s: u32) -> u32 {
        let n = self.n_sites as u32;
        ((s << 1) | (s >> (n - 1))) & self.mask()
    }
}

/// States of fixed magnetization grouped into translation orbits.
#[derive(Debug, Clone)]
struct Sector {
    reps: Vec<u32>,
    periods: Vec<usize>,
    /// state -> (orbit index, l) with `state = T^l rep`.
    lookup: Vec<Option<(u32, u8)>>,
}

impl Sector {
    fn new(spec: &ChainSpec, n_up: usize) -> Self {
        let n = spec.n_sites;
        let mut lookup = vec![None; 1 << n];
        let mut reps = Vec::new();
        let mut periods = Vec::new();
        for s in 0..(1u32 << n) {
            if s.count_ones() as usize != n_up || lookup[s as usize].is_some() {
                continue;
            }
            // s is the smallest member of its orbit: it is the representative
            let idx = reps.len() as u32;
            let mut t = s;
            let mut period = n;
            for j in 0..n {
                if j > 0 && t == s {
                    period = j;
                    break;
                }
                // t = T^j rep
                lookup[t as usize] = Some((idx, j as u8));
                t = spec.translate(t);
            }
            reps.push(s);
            periods.push(period);
        }
        Self { reps, periods, lookup }
    }
}

fn diagonal_energy(spec: &ChainSpec, s: u32) -> f64 {
    spec.bonds()
        .iter()
        .map(|&(i, j)| {
            let same = ((s >> i) & 1) == ((s >> j) & 1);
            -0.5 * spec.delta * if same { 1.0 } else { -1.0 }
        })
        .sum()
}

/// The Hamiltonian of a chain; blocks are built on demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hamiltonian {
    pub spec: ChainSpec,
}

/// One diagonalized `(n_up, k)` block, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct BlockEigen {
    pub n_up: usize,
    pub k_index: usize,
    reps: Vec<u32>,
    periods: Vec<usize>,
    pub energies: Vec<f64>,
    /// Columns are eigenvectors in the momentum basis.
    pub vectors: DMatrix<Complex64>,
}

pub fn build_hamiltonian(spec: &ChainSpec) -> Result<Hamiltonian> {
    spec.validate()?;
    Ok(Hamiltonian { spec: *spec })
}

impl Hamiltonian {
    /// `H |ψ⟩` on the full `2^N` real-space vector.
    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let spec = &self.spec;
        let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
        for (s, &amp) in psi.iter().enumerate() {
            if amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            let s = s as u32;
            out[s as usize] += amp * diagonal_energy(spec, s);
            for &(i, j) in &spec.bonds() {
                if ((s >> i) & 1) != ((s >> j) & 1) {
                    let t = s ^ (1 << i) ^ (1 << j);
                    out[t as usize] -= amp;
                }
            }
        }
        out
    }

    /// Full `2^N × 2^N` real matrix, for symmetry checks on small chains.
    pub fn dense(&self) -> Result<DMatrix<f64>> {
        if self.spec.n_sites > 10 {
            return Err(Error::Size(self.spec.n_sites));
        }
        let dim = 1usize << self.spec.n_sites;
        let mut h = DMatrix::zeros(dim, dim);
        for s in 0..dim {
            let mut e = vec![Complex64::new(0.0, 0.0); dim];
            e[s] = Complex64::new(1.0, 0.0);
            for (t, v) in self.apply(&e).into_iter().enumerate() {
                h[(t, s)] = v.re;
            }
        }
        Ok(h)
    }

    fn block_matrix(&self, sector: &Sector, k_index: usize) -> (Vec<usize>, DMatrix<Complex64>) {
        let spec = &self.spec;
        let n = spec.n_sites;
        let k = spec.momentum(k_index);
        let members: Vec<usize> = (0..sector.reps.len())
            .filter(|&i| (k_index * sector.periods[i]) % n == 0)
            .collect();
        let mut position = vec![usize::MAX; sector.reps.len()];
        for (b, &i) in members.iter().enumerate() {
            position[i] = b;
        }
        let dim = members.len();
        let mut h = DMatrix::zeros(dim, dim);
        for (col, &i) in members.iter().enumerate() {
            let r = sector.reps[i];
            h[(col, col)] += Complex64::new(diagonal_energy(spec, r), 0.0);
            for &(a, b) in &spec.bonds() {
                if ((r >> a) & 1) == ((r >> b) & 1) {
                    continue;
                }
                let s = r ^ (1 << a) ^ (1 << b);
                let (orbit, l) = sector.lookup[s as usize].expect("flip preserves magnetization");
                let row = position[orbit as usize];
                if row == usize::MAX {
                    continue;
                }
                let ratio = (sector.periods[i] as f64 / sector.periods[orbit as usize] as f64).sqrt();
                h[(row, col)] += -Complex64::from_polar(ratio, k * l as f64);
            }
        }
        (members, h)
    }

    fn diagonalize_block(&self, sector: &Sector, n_up: usize, k_index: usize) -> Result<BlockEigen> {
        let (members, h) = self.block_matrix(sector, k_index);
        let dim = members.len();
        let reps = members.iter().map(|&i| sector.reps[i]).collect();
        let periods = members.iter().map(|&i| sector.periods[i]).collect();
        if dim == 0 {
            return Ok(BlockEigen {
                n_up,
                k_index,
                reps,
                periods,
                energies: vec![],
                vectors: DMatrix::zeros(0, 0),
            });
        }
        let eig = SymmetricEigen::try_new(h, f64::EPSILON, 100_000)
            .ok_or_else(|| Error::Diagonalization(format!("block n_up = {n_up}, k = {k_index} did not converge")))?;
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
        let energies = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(dim, dim, |r, c| eig.eigenvectors[(r, order[c])]);
        Ok(BlockEigen {
            n_up,
            k_index,
            reps,
            periods,
            energies,
            vectors,
        })
    }

    /// Diagonalize the `(n_up, k_index)` block.
    pub fn block(&self, n_up: usize, k_index: usize) -> Result<BlockEigen> {
        if n_up > self.spec.n_sites || k_index >= self.spec.n_sites {
            return Err(Error::InvalidConfig(format!("no block n_up = {n_up}, k = {k_index}")));
        }
        let sector = Sector::new(&self.spec, n_up);
        self.diagonalize_block(&sector, n_up, k_index)
    }

    /// Every momentum block of one magnetization sector, in `k_index` order.
    pub fn sector_blocks(&self, n_up: usize) -> Result<Vec<BlockEigen>> {
        let sector = Sector::new(&self.spec, n_up);
        (0..self.spec.n_sites)
            .into_par_iter()
            .map(|k| self.diagonalize_block(&sector, n_up, k))
            .collect()
    }
}

impl BlockEigen {
    /// Eigenvector `col` expanded into the `2^N` real-space basis.
    pub fn real_space(&self, spec: &ChainSpec, col: usize) -> Vec<Complex64> {
        let mut psi = vec![Complex64::new(0.0, 0.0); 1 << spec.n_sites];
        let k = spec.momentum(self.k_index);
        for (b, (&r, &period)) in self.reps.iter().zip(&self.periods).enumerate() {
            let c = self.vectors[(b, col)] / (period as f64).sqrt();
            let mut s = r;
            for j in 0..period {
                psi[s as usize] += c * Complex64::from_polar(1.0, -k * j as f64);
                s = spec.translate(s);
            }
        }
        psi
    }

    /// Momentum-basis components `⟨r, k|φ⟩` of a real-space vector.
    fn project(&self, spec: &ChainSpec, phi: &[Complex64]) -> Vec<Complex64> {
        let k = spec.momentum(self.k_index);
        self.reps
            .iter()
            .zip(&self.periods)
            .map(|(&r, &period)| {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut s = r;
                for j in 0..period {
                    acc += Complex64::from_polar(1.0, k * j as f64) * phi[s as usize];
                    s = spec.translate(s);
                }
                acc / (period as f64).sqrt()
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub k_index: usize,
    /// Normalized real-space amplitudes; the first amplitude above 1e-12 in
    /// modulus is real and positive.
    pub state: Vec<Complex64>,
}

/// Lowest eigenpair of the `Sᶻ = 0` sector.
pub fn ground_state(spec: &ChainSpec) -> Result<GroundState> {
    let h = build_hamiltonian(spec)?;
    let blocks = h.sector_blocks(spec.n_sites / 2)?;
    let best = blocks
        .iter()
        .filter(|b| !b.energies.is_empty())
        .min_by(|a, b| a.energies[0].total_cmp(&b.energies[0]).then(a.k_index.cmp(&b.k_index)))
        .ok_or_else(|| Error::Diagonalization("empty Sz = 0 sector".into()))?;
    let mut state = best.real_space(spec, 0);
    let norm = state.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let phase = state
        .iter()
        .find(|z| z.norm() > 1e-12)
        .map(|z| z.conj() / z.norm())
        .unwrap_or(Complex64::new(1.0, 0.0));
    for z in &mut state {
        *z *= phase / norm;
    }
    Ok(GroundState {
        energy: best.energies[0],
        k_index: best.k_index,
        state,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLine {
    pub omega: f64,
    pub weight: f64,
    pub k_index: usize,
}

#[derive(Debug, Clone)]
pub struct LehmannDcf {
    pub spec: ChainSpec,
    pub k_index: usize,
    pub ground_energy: f64,
    /// Ascending in `omega`, degenerate lines merged.
    pub lines: Vec<SpectralLine>,
    /// Lowest eigenvalue of the target block minus `E_0`.
    pub lowest_excitation: f64,
    /// `⟨0|σ⁺_{-k} σ⁻_k|0⟩` from the real-space two-point function.
    pub static_weight: f64,
    pub eta: f64,
    /// `(ω, Σ_f w_f L_η(ω - ω_f))` on [`default_omega_grid`].
    pub curve: Vec<(f64, f64)>,
}

impl LehmannDcf {
    pub fn total_weight(&self) -> f64 {
        self.lines.iter().map(|l| l.weight).sum()
    }
}

/// `0 ≤ ω ≤ 3π`, 301 points.
pub fn default_omega_grid() -> Vec<f64> {
    linspace(0.0, 3.0 * PI, 301)
}

/// Sum of unit-area Lorentzians of half-width `eta`.
pub fn broaden(lines: &[SpectralLine], eta: f64, omegas: &[f64]) -> Vec<(f64, f64)> {
    omegas
        .iter()
        .map(|&w| {
            let s = lines
                .iter()
                .map(|l| l.weight * eta / (PI * ((w - l.omega).powi(2) + eta * eta)))
                .sum();
            (w, s)
        })
        .collect()
}

fn sigma_minus_k(spec: &ChainSpec, psi: &[Complex64], k_index: usize) -> Vec<Complex64> {
    let n = spec.n_sites;
    let k = spec.momentum(k_index);
    let norm = 1.0 / (n as f64).sqrt();
    let phases: Vec<Complex64> = (0..n).map(|site| Complex64::from_polar(norm, k * site as f64)).collect();
    let mut phi = vec![Complex64::new(0.0, 0.0); psi.len()];
    for (s, &amp) in psi.iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        for (site, ph) in phases.iter().enumerate() {
            if (s >> site) & 1 == 1 {
                phi[s ^ (1 << site)] += ph * amp;
            }
        }
    }
    phi
}

/// `(1/N) Σ_{n,m} e^{ik(n-m)} ⟨σ⁺_m σ⁻_n⟩`.
fn static_transverse(spec: &ChainSpec, psi: &[Complex64], k_index: usize) -> f64 {
    let n = spec.n_sites;
    let k = spec.momentum(k_index);
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..n {
        for b in 0..n {
            let mut corr = Complex64::new(0.0, 0.0);
            for (s, &amp) in psi.iter().enumerate() {
                if amp.norm_sqr() == 0.0 || (s >> a) & 1 == 0 {
                    continue;
                }
                // σ⁻_a lowers a, σ⁺_b raises b
                let t = s ^ (1 << a);
                if (t >> b) & 1 == 1 {
                    continue;
                }
                corr += psi[t ^ (1 << b)].conj() * amp;
            }
            acc += Complex64::from_polar(1.0, k * (a as f64 - b as f64)) * corr;
        }
    }
    acc.re / n as f64
}

fn merge_degenerate(mut lines: Vec<SpectralLine>) -> Vec<SpectralLine> {
    lines.sort_by(|a, b| a.omega.total_cmp(&b.omega));
    let mut out: Vec<SpectralLine> = Vec::with_capacity(lines.len());
    let mut anchor = f64::NEG_INFINITY;
    for l in lines {
        match out.last_mut() {
            Some(last) if l.omega - anchor <= DEGENERACY_WINDOW => last.weight += l.weight,
            _ => {
                anchor = l.omega;
                out.push(l);
            }
        }
    }
    out
}

fn lehmann_from_ground(spec: &ChainSpec, h: &Hamiltonian, gs: &GroundState, k_index: usize, eta: f64) -> Result<LehmannDcf> {
    let n = spec.n_sites;
    let phi = sigma_minus_k(spec, &gs.state, k_index);
    let target_k = (gs.k_index + n - k_index) % n;
    let block = h.block(n / 2 - 1, target_k)?;
    let c = block.project(spec, &phi);
    let lines: Vec<SpectralLine> = block
        .energies
        .iter()
        .enumerate()
        .map(|(f, &e)| {
            let amp: Complex64 = block.vectors.column(f).iter().zip(&c).map(|(u, x)| u.conj() * x).sum();
            SpectralLine {
                omega: e - gs.energy,
                weight: amp.norm_sqr(),
                k_index,
            }
        })
        .collect();
    let lines = merge_degenerate(lines);
    let curve = broaden(&lines, eta, &default_omega_grid());
    Ok(LehmannDcf {
        spec: *spec,
        k_index,
        ground_energy: gs.energy,
        lowest_excitation: block.energies.first().map_or(f64::NAN, |e| e - gs.energy),
        lines,
        static_weight: static_transverse(spec, &gs.state, k_index),
        eta,
        curve,
    })
}

/// Lehmann lines of `σ⁻_k` at `k = 2π k_index / N` (momentum of the chain
/// as defined by `T`; see [`MomentumConvention`]).
pub fn lehmann_dcf(spec: &ChainSpec, k_index: usize, eta: f64) -> Result<LehmannDcf> {
    let h = build_hamiltonian(spec)?;
    if k_index >= spec.n_sites {
        return Err(Error::InvalidConfig(format!("k_index {k_index} outside 0..{}", spec.n_sites)));
    }
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::InvalidConfig(format!("broadening must be positive, got {eta}")));
    }
    let gs = ground_state(spec)?;
    lehmann_from_ground(spec, &h, &gs, k_index, eta)
}

/// How chain momenta map onto the band variable `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentumConvention {
    /// `k = 2π k_index / N`.
    Direct,
    /// `k = 2π k_index / N + π (mod 2π)`.
    PiShifted,
}

impl MomentumConvention {
    pub fn band_momentum(self, spec: &ChainSpec, k_index: usize) -> f64 {
        let n = spec.n_sites;
        match self {
            Self::Direct => spec.momentum(k_index),
            Self::PiShifted => spec.momentum((k_index + n / 2) % n),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Direct => "direct",
            Self::PiShifted => "pi-shifted",
        }
    }
}

/// Finite-size tolerance on either side of the band, `4π/N`.
pub fn window_tolerance(spec: &ChainSpec) -> f64 {
    4.0 * PI / spec.n_sites as f64
}

/// Weight of `lines` inside `[w_l(k) - tol, w_u(k) + tol]`; zero when the
/// band is closed (`k = 0`).
pub fn in_band_weight(lines: &[SpectralLine], k: f64, tol: f64) -> f64 {
    let band = band_boundaries(k).expect("band momentum lies in the zone");
    if band.width() <= 0.0 {
        return 0.0;
    }
    lines
        .iter()
        .filter(|l| l.omega >= band.lower - tol && l.omega <= band.upper + tol)
        .map(|l| l.weight)
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandSupportRow {
    pub k_index: usize,
    /// Band momentum under the selected convention.
    pub k: f64,
    pub total_weight: f64,
    pub in_band_weight: f64,
    pub lowest_excitation: f64,
    pub lowest_line: f64,
    pub static_weight: f64,
}

impl BandSupportRow {
    pub fn in_band_fraction(&self) -> f64 {
        if self.total_weight > 0.0 {
            self.in_band_weight / self.total_weight
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone)]
pub struct BandSupportReport {
    pub spec: ChainSpec,
    pub ground_energy: f64,
    pub ground_k_index: usize,
    pub convention: MomentumConvention,
    /// Summed in-band weight under each convention, used for the selection.
    pub direct_in_band: f64,
    pub shifted_in_band: f64,
    pub window_tolerance: f64,
    pub rows: Vec<BandSupportRow>,
    pub spectra: Vec<LehmannDcf>,
}

impl BandSupportReport {
    pub fn total_weight(&self) -> f64 {
        self.rows.iter().map(|r| r.total_weight).sum()
    }

    pub fn in_band_fraction(&self) -> f64 {
        self.rows.iter().map(|r| r.in_band_weight).sum::<f64>() / self.total_weight()
    }

    /// Row whose band momentum is `k` (to rounding), if the chain has one.
    pub fn row_at(&self, k: f64) -> Option<&BandSupportRow> {
        self.rows.iter().find(|r| (r.k - k).abs() < 1e-9)
    }
}

/// Per-k in-band versus out-of-band transverse weight, with the momentum
/// convention chosen as the one that puts more weight in the band.
pub fn band_support_report(spec: &ChainSpec, eta: f64) -> Result<BandSupportReport> {
    let h = build_hamiltonian(spec)?;
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::InvalidConfig(format!("broadening must be positive, got {eta}")));
    }
    let gs = ground_state(spec)?;
    let spectra: Vec<LehmannDcf> = (0..spec.n_sites)
        .into_par_iter()
        .map(|k| lehmann_from_ground(spec, &h, &gs, k, eta))
        .collect::<Result<_>>()?;
    let tol = window_tolerance(spec);
    let summed = |conv: MomentumConvention| -> f64 {
        spectra
            .iter()
            .map(|s| in_band_weight(&s.lines, conv.band_momentum(spec, s.k_index), tol))
            .sum()
    };
    let direct_in_band = summed(MomentumConvention::Direct);
    let shifted_in_band = summed(MomentumConvention::PiShifted);
    let convention = if shifted_in_band > direct_in_band {
        MomentumConvention::PiShifted
    } else {
        MomentumConvention::Direct
    };
    let rows = spectra
        .iter()
        .map(|s| {
            let k = convention.band_momentum(spec, s.k_index);
            BandSupportRow {
                k_index: s.k_index,
                k,
                total_weight: s.total_weight(),
                in_band_weight: in_band_weight(&s.lines, k, tol),
                lowest_excitation: s.lowest_excitation,
                lowest_line: s.lines.iter().find(|l| l.weight > 1e-12).map_or(f64::NAN, |l| l.omega),
                static_weight: s.static_weight,
            }
        })
        .collect();
    Ok(BandSupportReport {
        spec: *spec,
        ground_energy: gs.energy,
        ground_k_index: gs.k_index,
        convention,
        direct_in_band,
        shifted_in_band,
        window_tolerance: tol,
        rows,
        spectra,
    })
}
