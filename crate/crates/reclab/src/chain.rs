//! The harmonic-chain case study: N equal masses joined by springs with
//! fixed ends, diagonalized into normal modes.
//!
//! Frequencies are `omega_i = 2 omega sin(i pi / (2(N+1)))` and the mode
//! matrix is `U_ij = sqrt(2/(N+1)) sin(ij pi/(N+1))`. Evolution at times of
//! order 10^32 is done in normal coordinates with the phase taken mod 2 pi
//! exactly: for `t = 2 pi q / omega_N + dt` the phase of mode `i` is
//! `2 pi frac(q alpha_i) + omega_i dt`, with `q` kept as a `BigInt` end to
//! end. Multiplying floating-point values of that size would leave the
//! snapshot meaningless.

use crate::error::{Error, Result};
use crate::precision::{atan2, sin_cos, two_pi, HPReal};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// Default working precision (significant digits) for model data.
pub const DEFAULT_CHAIN_DIGITS: u32 = 60;

/// An `N`-site harmonic chain with unit mass, stiffness, and base frequency.
#[derive(Debug, Clone)]
pub struct ChainModel {
    n: usize,
    digits: u32,
    frequencies: Vec<HPReal>,
    mode_matrix: Vec<Vec<HPReal>>,
}

/// Displacements and momenta of the point masses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainState {
    pub x: Vec<HPReal>,
    pub p: Vec<HPReal>,
}

/// Amplitude/phase form of the normal modes at `t = 0`:
/// `(P_i, X_i) = A_i (cos phi_i, sin phi_i)`.
/// The momentum carries the cosine in this convention (an X-leading
/// convention is more common elsewhere). Evolution itself advances the
/// mechanical pair `(P_i, omega_i X_i)`, which conserves energy.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalModeState {
    pub amplitudes: Vec<HPReal>,
    pub phases: Vec<HPReal>,
}

impl ChainModel {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_digits(n, DEFAULT_CHAIN_DIGITS)
    }

    pub fn with_digits(n: usize, digits: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput("chain needs at least 2 sites".into()));
        }
        let frequencies = frequencies(n, digits)?;
        let mode_matrix = mode_matrix(n, digits)?;
        Ok(ChainModel {
            n,
            digits,
            frequencies,
            mode_matrix,
        })
    }

    pub fn sites(&self) -> usize {
        self.n
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn frequencies(&self) -> &[HPReal] {
        &self.frequencies
    }

    pub fn mode_matrix(&self) -> &[Vec<HPReal>] {
        &self.mode_matrix
    }

    /// Frequency ratios `alpha_i = omega_i / omega_N`, `i = 1..N-1`,
    /// generated at the requested precision (independent of the model's
    /// own working precision).
    pub fn frequency_ratios(&self, digits: u32) -> Result<Vec<HPReal>> {
        frequency_ratios(self.n, digits)
    }

    /// State with only the `k`-th mass displaced: `x_k = p_k = 1`
    /// (1-based site index).
    pub fn localized_initial_state(&self, k: usize) -> Result<ChainState> {
        if k == 0 || k > self.n {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.n,
            });
        }
        let mut x = vec![HPReal::zero(); self.n];
        let mut p = vec![HPReal::zero(); self.n];
        x[k - 1] = HPReal::one();
        p[k - 1] = HPReal::one();
        Ok(ChainState { x, p })
    }

    /// Total energy `p^T p / 2 + x^T M x / 2` with the tridiagonal
    /// `M = tridiag(-1, 2, -1)`.
    pub fn energy(&self, state: &ChainState) -> Result<HPReal> {
        self.check_state(state)?;
        let n = self.n;
        let mut kinetic = HPReal::zero();
        for p in &state.p {
            kinetic = kinetic.add(&p.mul(p));
        }
        let mut potential = HPReal::zero();
        for i in 0..n {
            let mut mx = state.x[i].mul(&HPReal::from_i64(2));
            if i > 0 {
                mx = mx.sub(&state.x[i - 1]);
            }
            if i + 1 < n {
                mx = mx.sub(&state.x[i + 1]);
            }
            potential = potential.add(&state.x[i].mul(&mx));
        }
        kinetic
            .add(&potential)
            .div(&HPReal::from_i64(2), self.digits)
    }

    fn check_state(&self, state: &ChainState) -> Result<()> {
        if state.x.len() != self.n || state.p.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: state.x.len().max(state.p.len()),
            });
        }
        Ok(())
    }

    /// `(X, P) = (U^T x, U^T p)` folded into amplitudes and phases at t=0.
    pub fn to_normal(&self, state: &ChainState) -> Result<NormalModeState> {
        self.check_state(state)?;
        let cap_x = self.mat_t_vec(&state.x);
        let cap_p = self.mat_t_vec(&state.p);
        let mut amplitudes = Vec::with_capacity(self.n);
        let mut phases = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let a2 = cap_x[i].mul(&cap_x[i]).add(&cap_p[i].mul(&cap_p[i]));
            let a = a2.sqrt(self.digits)?;
            // P = A cos(phi), X = A sin(phi) at t = 0
            let phi = if a.is_zero_value() {
                HPReal::zero()
            } else {
                atan2(&cap_x[i], &cap_p[i], self.digits)?
            };
            amplitudes.push(a);
            phases.push(phi);
        }
        Ok(NormalModeState { amplitudes, phases })
    }

    /// Inverse of [`ChainModel::to_normal`].
    pub fn from_normal(&self, modes: &NormalModeState) -> Result<ChainState> {
        if modes.amplitudes.len() != self.n || modes.phases.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: modes.amplitudes.len().max(modes.phases.len()),
            });
        }
        let mut cap_x = Vec::with_capacity(self.n);
        let mut cap_p = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let (s, c) = sin_cos(&modes.phases[i], self.digits)?;
            cap_x.push(modes.amplitudes[i].mul(&s));
            cap_p.push(modes.amplitudes[i].mul(&c));
        }
        Ok(ChainState {
            x: self.mat_vec(&cap_x),
            p: self.mat_vec(&cap_p),
        })
    }

    /// Evolve by an explicit time `t`. The phases `omega_i t` are reduced
    /// mod 2 pi at full precision, so `t` must carry enough digits to
    /// resolve its own integer part (`InsufficientPrecision` otherwise).
    pub fn evolve(&self, state: &ChainState, t: &HPReal) -> Result<ChainState> {
        self.check_state(state)?;
        let rotations: Result<Vec<(HPReal, HPReal)>> = self
            .frequencies
            .iter()
            .map(|w| sin_cos(&w.mul(t), self.digits))
            .collect();
        self.rotate(state, &rotations?)
    }

    /// Evolve to `t = T_pr + offset` where `T_pr = 2 pi q / omega_N`, with
    /// the phase of mode `i` computed as `2 pi frac(q alpha_i) + omega_i
    /// offset` using exact integer `q`.
    pub fn evolve_recurrence(
        &self,
        state: &ChainState,
        q: &BigInt,
        offset: &HPReal,
    ) -> Result<ChainState> {
        self.check_state(state)?;
        let digits = self.digits;
        let q_digits = crate::precision::digits10(q) as u32;
        let ratio_digits = digits + q_digits + 15;
        let alphas_full = full_frequency_ratios(self.n, ratio_digits)?;
        let tau = two_pi(digits + 10);
        let mut rotations = Vec::with_capacity(self.n);
        for (i, alpha) in alphas_full.iter().enumerate() {
            // omega_i (T_pr + offset) mod 2 pi = 2 pi frac(q alpha_i) + omega_i offset
            let frac = alpha.mul_bigint(q).frac_signed()?;
            let phase = tau.mul(&frac).add(&self.frequencies[i].mul(offset));
            rotations.push(sin_cos(&phase, digits)?);
        }
        self.rotate(state, &rotations)
    }

    /// Apply per-mode phase advances to a state. The mechanical flow
    /// rotates the pair `(P_i, omega_i X_i)` rigidly: with `c = cos`,
    /// `s = sin` of the advance angle,
    /// `P -> P c - omega X s` and `X -> X c + (P/omega) s`.
    /// This conserves `P^2 + omega^2 X^2` per mode, hence the energy.
    fn rotate(&self, state: &ChainState, rotations: &[(HPReal, HPReal)]) -> Result<ChainState> {
        let cap_x0 = self.mat_t_vec(&state.x);
        let cap_p0 = self.mat_t_vec(&state.p);
        let mut cap_x = Vec::with_capacity(self.n);
        let mut cap_p = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let (s, c) = &rotations[i];
            let w = &self.frequencies[i];
            cap_p.push(cap_p0[i].mul(c).sub(&cap_x0[i].mul(w).mul(s)));
            cap_x.push(cap_x0[i].mul(c).add(&cap_p0[i].div(w, self.digits)?.mul(s)));
        }
        Ok(ChainState {
            x: self.mat_vec(&cap_x),
            p: self.mat_vec(&cap_p),
        })
    }

    /// Recurrence time `T_pr = 2 pi q / omega_N` at the given precision.
    pub fn recurrence_time(&self, q: &BigInt, digits: u32) -> Result<HPReal> {
        use num_traits::Signed;
        if !q.is_positive() {
            return Err(Error::InvalidInput("q must be >= 1".into()));
        }
        let q_digits = crate::precision::digits10(q) as u32;
        let work = digits + q_digits + 10;
        let omega_n =
            crate::precision::sin_pi_rational(self.n as u64, 2 * (self.n as u64 + 1), work)?
                .mul(&HPReal::from_i64(2));
        two_pi(work).mul_bigint(q).div(&omega_n, digits + q_digits)
    }

    /// `U^T v`
    fn mat_t_vec(&self, v: &[HPReal]) -> Vec<HPReal> {
        let n = self.n;
        (0..n)
            .map(|j| {
                let mut acc = HPReal::zero();
                for i in 0..n {
                    acc = acc.add(&self.mode_matrix[i][j].mul(&v[i]));
                }
                acc
            })
            .collect()
    }

    /// `U v`
    fn mat_vec(&self, v: &[HPReal]) -> Vec<HPReal> {
        let n = self.n;
        (0..n)
            .map(|i| {
                let mut acc = HPReal::zero();
                for j in 0..n {
                    acc = acc.add(&self.mode_matrix[i][j].mul(&v[j]));
                }
                acc
            })
            .collect()
    }
}

/// Max-norm distance between two states over all 2N coordinates.
pub fn deviation(a: &ChainState, b: &ChainState) -> Result<HPReal> {
    if a.x.len() != b.x.len() || a.p.len() != b.p.len() {
        return Err(Error::DimensionMismatch {
            left: a.x.len(),
            right: b.x.len(),
        });
    }
    let mut worst = HPReal::zero();
    for (u, v) in a.x.iter().zip(&b.x).chain(a.p.iter().zip(&b.p)) {
        let d = u.sub(v).abs();
        if d.value_cmp(&worst) == std::cmp::Ordering::Greater {
            worst = d;
        }
    }
    Ok(worst)
}

/// `omega_i = 2 sin(i pi / (2(N+1)))` for `i = 1..N`.
pub fn frequencies(n: usize, digits: u32) -> Result<Vec<HPReal>> {
    (1..=n)
        .map(|i| {
            Ok(
                crate::precision::sin_pi_rational(i as u64, 2 * (n as u64 + 1), digits)?
                    .mul(&HPReal::from_i64(2)),
            )
        })
        .collect()
}

/// `alpha_i = omega_i / omega_N` for `i = 1..N-1`.
pub fn frequency_ratios(n: usize, digits: u32) -> Result<Vec<HPReal>> {
    let all = full_frequency_ratios(n, digits)?;
    Ok(all[..n - 1].to_vec())
}

/// Ratios including the trailing exact `alpha_N = 1`.
fn full_frequency_ratios(n: usize, digits: u32) -> Result<Vec<HPReal>> {
    let work = digits + 10;
    let omega_n = crate::precision::sin_pi_rational(n as u64, 2 * (n as u64 + 1), work)?;
    let mut out = Vec::with_capacity(n);
    for i in 1..n {
        let w = crate::precision::sin_pi_rational(i as u64, 2 * (n as u64 + 1), work)?;
        out.push(w.div(&omega_n, digits)?);
    }
    out.push(HPReal::one());
    Ok(out)
}

/// `U_ij = sqrt(2/(N+1)) sin(ij pi/(N+1))`, orthogonal and symmetric.
pub fn mode_matrix(n: usize, digits: u32) -> Result<Vec<Vec<HPReal>>> {
    let work = digits + 10;
    let norm = HPReal::from_i64(2)
        .div(&HPReal::from_i64(n as i64 + 1), work)?
        .sqrt(work)?;
    let mut rows = Vec::with_capacity(n);
    for i in 1..=n {
        let mut row = Vec::with_capacity(n);
        for j in 1..=n {
            let s = crate::precision::sin_pi_rational((i * j) as u64, n as u64 + 1, work)?;
            row.push(norm.mul(&s));
        }
        rows.push(row);
    }
    Ok(rows)
}
