//! Simultaneous Diophantine approximation: given reals `alpha_1..alpha_n`,
//! find one integer `q` making every `q*alpha_i` nearly integral.
//!
//! The solver builds the `(n+1) x (n+1)` row basis
//!
//! ```text
//!     ( 1  round(Q a_1)  ...  round(Q a_n) )
//!     ( 0       Q                          )
//!     (             ...                    )
//!     ( 0                       Q          )
//! ```
//!
//! reduces it with exact LLL, and reads `q` off the first component of the
//! first usable reduced vector. The achieved error is always recomputed from
//! the alphas at full precision — the lattice coordinates hold rounded
//! entries and are never trusted for the final answer. A brute-force
//! enumerator provides the desk-scale oracle, and the same lattice machinery
//! (transposed) detects integer relations among frequency lists.

use crate::error::{Error, Result};
use crate::lattice::{lll_reduce_rows, Delta, LatticeBasis};
use crate::precision::{bigint_string, bigint_vec_string, pow10, HPReal};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Largest `q_max` accepted by the enumeration routines.
pub const ENUMERATION_LIMIT: u64 = 1_000_000_000;

/// Default detection threshold for integer relations.
pub fn default_relation_threshold() -> HPReal {
    "1e-30".parse().expect("literal")
}

/// Default coefficient bound for integer relations.
pub fn default_coeff_bound() -> BigInt {
    BigInt::from(1_000_000u64)
}

/// One simultaneous-approximation instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApproximationProblem {
    pub alphas: Vec<HPReal>,
    /// The magnitude parameter `Q`; larger values buy smaller errors.
    #[serde(with = "bigint_string")]
    pub scale: BigInt,
}

impl ApproximationProblem {
    pub fn new(alphas: Vec<HPReal>, scale: BigInt) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::InvalidInput("need at least one alpha".into()));
        }
        if scale < BigInt::from(2) {
            return Err(Error::InvalidInput("scale parameter Q must be >= 2".into()));
        }
        Ok(ApproximationProblem { alphas, scale })
    }

    pub fn dimension(&self) -> usize {
        self.alphas.len()
    }
}

/// Outcome of one solve: the integer `q`, the nearest integers `p_i`, the
/// achieved error, and the theoretical bounds it must respect.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApproximationResult {
    #[serde(with = "bigint_string")]
    pub q: BigInt,
    #[serde(with = "bigint_vec_string")]
    pub p: Vec<BigInt>,
    /// `max_i |q alpha_i - p_i|`, recomputed from the alphas.
    pub error: HPReal,
    /// `2^{n/4} Q^{n/(n+1)}`.
    pub q_bound: HPReal,
    /// `(sqrt(5)/2) 2^{n/4} Q^{-1/(n+1)}`.
    pub error_bound: HPReal,
    #[serde(with = "bigint_vec_string")]
    pub reduced_first_vector: Vec<BigInt>,
}

/// Build the approximation lattice basis for a problem.
/// Fails with `AmbiguousRounding` when some `round(Q alpha_i)` is not
/// decidable at the alphas' precision.
pub fn build_matrix(problem: &ApproximationProblem) -> Result<LatticeBasis> {
    let n = problem.dimension();
    let mut rows = Vec::with_capacity(n + 1);
    let mut first = Vec::with_capacity(n + 1);
    first.push(BigInt::one());
    for a in &problem.alphas {
        first.push(a.mul_bigint(&problem.scale).round_nearest()?);
    }
    rows.push(first);
    for i in 0..n {
        let mut row = vec![BigInt::zero(); n + 1];
        row[i + 1] = problem.scale.clone();
        rows.push(row);
    }
    LatticeBasis::new(rows)
}

/// `base^(num/den)` to `digits` significant digits, via exact integer roots.
fn pow_frac(base: &BigInt, num: u64, den: u64, digits: u32) -> HPReal {
    let z = num_traits::pow(base.clone(), num as usize);
    let s = digits as u64 + 4;
    let scaled = &z * pow10(den * s);
    let root = scaled.nth_root(den as u32);
    HPReal::from_parts(root, -(s as i64)).with_err_exp(-(s as i64))
}

/// Largest error `max_i <q alpha_i>` over the alphas, by direct evaluation.
pub fn max_frac_dist(alphas: &[HPReal], q: &BigInt) -> Result<HPReal> {
    let mut worst = HPReal::zero();
    for a in alphas {
        let d = a.mul_bigint(q).frac_dist()?;
        if d.value_cmp(&worst) == std::cmp::Ordering::Greater {
            worst = d;
        }
    }
    Ok(worst)
}

/// Solve with the default Lovász parameter (3/4).
pub fn solve(problem: &ApproximationProblem) -> Result<ApproximationResult> {
    solve_with(problem, Delta::default())
}

/// Solve with an explicit Lovász parameter.
pub fn solve_with(problem: &ApproximationProblem, delta: Delta) -> Result<ApproximationResult> {
    let n = problem.dimension();
    let basis = build_matrix(problem)?;
    let reduction = basis.lll_reduce(delta)?;

    // first reduced row with a nonzero leading component; later rows are
    // scanned because row order is reduction-variant-dependent
    let mut chosen: Option<Vec<BigInt>> = None;
    for row in reduction.reduced.rows() {
        if !row[0].is_zero() {
            let row = if row[0].is_negative() {
                row.iter().map(|x| -x).collect()
            } else {
                row.clone()
            };
            chosen = Some(row);
            break;
        }
    }
    let row = chosen.ok_or(Error::NoUsableVector)?;
    let q = row[0].clone();

    let mut p = Vec::with_capacity(n);
    let mut error = HPReal::zero();
    for a in &problem.alphas {
        let prod = a.mul_bigint(&q);
        let nearest = prod.round_nearest()?;
        let dist = prod.sub(&HPReal::from_bigint(nearest.clone())).abs();
        if dist.value_cmp(&error) == std::cmp::Ordering::Greater {
            error = dist.clone();
        }
        p.push(nearest);
    }

    let bound_digits = 40;
    let q_bound = pow_frac(&BigInt::from(2), n as u64, 4, bound_digits).mul(&pow_frac(
        &problem.scale,
        n as u64,
        n as u64 + 1,
        bound_digits,
    ));
    let sqrt5_half = HPReal::from_i64(5)
        .sqrt(bound_digits + 8)?
        .div(&HPReal::from_i64(2), bound_digits + 8)?;
    let error_bound = sqrt5_half
        .mul(&pow_frac(&BigInt::from(2), n as u64, 4, bound_digits))
        .div(
            &pow_frac(&problem.scale, 1, n as u64 + 1, bound_digits + 8),
            bound_digits,
        )?;

    Ok(ApproximationResult {
        q,
        p,
        error,
        q_bound,
        error_bound,
        reduced_first_vector: row,
    })
}

/// Smallest integer `Q >= (sqrt(5)/2)^{n+1} 2^{n(n+1)/4} C^{n+1}`,
/// guaranteeing a solve error `<= 1/C`.
pub fn choose_q_parameter(n: u32, c: &HPReal) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension n must be >= 1".into()));
    }
    if c.value_cmp(&HPReal::one()) != std::cmp::Ordering::Greater {
        return Err(Error::InvalidInput("C must exceed 1".into()));
    }
    let mag = c.mag_exp().unwrap_or(0).max(0) as u32;
    let digits = (mag + 2) * (n + 1) + 40;
    let sqrt5_half = HPReal::from_i64(5)
        .sqrt(digits)?
        .div(&HPReal::from_i64(2), digits)?;
    let value = sqrt5_half
        .powi(n + 1)
        .mul(&pow_frac(
            &BigInt::from(2),
            n as u64 * (n as u64 + 1),
            4,
            digits,
        ))
        .mul(&c.powi(n + 1));
    Ok(value.ceil_upper())
}

/// A verified brute-force hit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BruteForceHit {
    pub q: u64,
    pub error: HPReal,
}

/// Fixed-point fractional parts scaled by 2^64; wrapping addition walks
/// `q * alpha mod 1` exactly in this ring, with total drift below
/// `q_max` ulps from the initial rounding.
struct FixedWalk {
    steps: Vec<u64>,
    acc: Vec<u64>,
}

impl FixedWalk {
    fn new(alphas: &[HPReal]) -> Result<FixedWalk> {
        let mut steps = Vec::with_capacity(alphas.len());
        for a in alphas {
            if let Some(e) = a.err_exp() {
                if e > -25 {
                    return Err(Error::insufficient(format!(
                        "alpha {} too coarse for enumeration (error 10^{})",
                        a, e
                    )));
                }
            }
            steps.push(frac_fixed64(a));
        }
        Ok(FixedWalk {
            acc: vec![0; steps.len()],
            steps,
        })
    }

    /// Advance to the next q; returns the scaled distance to the nearest
    /// integer, maximized over the alphas.
    fn step(&mut self) -> u64 {
        let mut worst = 0u64;
        for (acc, s) in self.acc.iter_mut().zip(&self.steps) {
            *acc = acc.wrapping_add(*s);
            let d = (*acc).min(acc.wrapping_neg());
            worst = worst.max(d);
        }
        worst
    }
}

/// `floor(frac(value) * 2^64)` from the exact stored decimal.
fn frac_fixed64(a: &HPReal) -> u64 {
    let exp = a.exponent();
    if exp >= 0 {
        return 0; // integer-valued
    }
    let den = pow10((-exp) as u64);
    let (_, frac) = a.mantissa().div_mod_floor(&den);
    let scaled: BigInt = (frac << 64u32) / den;
    scaled.to_u64().expect("frac in [0,1)")
}

/// `floor(eps * 2^64)`, saturating at 2^63 (eps >= 1/2 accepts everything).
fn eps_fixed64(eps: &HPReal) -> u64 {
    let exp = eps.exponent();
    if exp >= 0 {
        return 1u64 << 63;
    }
    let den = pow10((-exp) as u64);
    let scaled: BigInt = (eps.mantissa().clone() << 64u32) / den;
    scaled.to_u64().unwrap_or(1u64 << 63).min(1u64 << 63)
}

fn check_enumeration_inputs(epsilon: &HPReal, q_max: u64) -> Result<()> {
    if q_max == 0 || q_max > ENUMERATION_LIMIT {
        return Err(Error::InvalidInput(format!(
            "q_max {} outside enumeration range 1..={}",
            q_max, ENUMERATION_LIMIT
        )));
    }
    if !epsilon.is_negative_value() && !epsilon.is_zero_value() {
        Ok(())
    } else {
        Err(Error::InvalidInput("epsilon must be positive".into()))
    }
}

/// Exact acceptance check for one q: `max_i <q alpha_i> <= eps`.
fn accepts(alphas: &[HPReal], q: u64, epsilon: &HPReal) -> Result<Option<HPReal>> {
    let qb = BigInt::from(q);
    let e = max_frac_dist(alphas, &qb)?;
    if e.value_cmp(epsilon) != std::cmp::Ordering::Greater {
        Ok(Some(e))
    } else {
        Ok(None)
    }
}

/// Smallest `q <= q_max` with `max_i <q alpha_i> <= epsilon`, by exhaustive
/// scan with a fixed-point prefilter and exact confirmation of candidates.
pub fn brute_force_best(alphas: &[HPReal], epsilon: &HPReal, q_max: u64) -> Result<BruteForceHit> {
    check_enumeration_inputs(epsilon, q_max)?;
    let mut walk = FixedWalk::new(alphas)?;
    let eps_fixed = eps_fixed64(epsilon);
    for q in 1..=q_max {
        let d = walk.step();
        if d <= eps_fixed.saturating_add(q_max) {
            if let Some(error) = accepts(alphas, q, epsilon)? {
                return Ok(BruteForceHit { q, error });
            }
        }
    }
    Err(Error::NotFound {
        q_max: q_max.to_string(),
    })
}

/// All `q <= q_max` satisfying the tolerance, in increasing order.
pub fn enumerate_valid_q(alphas: &[HPReal], epsilon: &HPReal, q_max: u64) -> Result<Vec<u64>> {
    check_enumeration_inputs(epsilon, q_max)?;
    let mut walk = FixedWalk::new(alphas)?;
    let eps_fixed = eps_fixed64(epsilon);
    let mut out = Vec::new();
    for q in 1..=q_max {
        let d = walk.step();
        if d <= eps_fixed.saturating_add(q_max) && accepts(alphas, q, epsilon)?.is_some() {
            out.push(q);
        }
    }
    Ok(out)
}

/// An integer relation `sum_i c_i v_i ~ 0`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationResult {
    #[serde(with = "bigint_vec_string")]
    pub coeffs: Vec<BigInt>,
    /// `|sum_i c_i v_i|` recomputed at full precision.
    pub residual: HPReal,
}

fn relation_candidates(
    values: &[HPReal],
    threshold: &HPReal,
    coeff_bound: &BigInt,
) -> Result<Vec<(Vec<BigInt>, HPReal)>> {
    let m = values.len();
    if m < 2 {
        return Err(Error::InvalidInput(
            "relation detection needs at least two values".into(),
        ));
    }
    if threshold.is_zero_value() || threshold.is_negative_value() {
        return Err(Error::InvalidInput("threshold must be positive".into()));
    }
    // scale tied to the threshold: with S ~ 1/threshold, spurious rows from
    // independent values land at residual ~ S^{1/m - 1} >> threshold and get
    // rejected by the exact recomputation below
    let t = (-threshold.mag_exp().unwrap_or(-30)).max(1) as u64;
    let scale = pow10(t);
    let mut rows = Vec::with_capacity(m);
    for (i, v) in values.iter().enumerate() {
        let mut row = vec![BigInt::zero(); m + 1];
        row[i] = BigInt::one();
        row[m] = v.mul_bigint(&scale).round_nearest()?;
        rows.push(row);
    }
    let (reduced, _) = lll_reduce_rows(rows, Delta::default())?;
    let mut found = Vec::new();
    for row in &reduced {
        let coeffs = &row[..m];
        if coeffs.iter().all(|c| c.is_zero()) {
            continue;
        }
        if coeffs.iter().any(|c| c.abs() > *coeff_bound) {
            continue;
        }
        let mut residual = HPReal::zero();
        for (c, v) in coeffs.iter().zip(values) {
            residual = residual.add(&v.mul_bigint(c));
        }
        let residual = residual.abs();
        if residual.value_cmp(threshold) != std::cmp::Ordering::Greater {
            let mut c = coeffs.to_vec();
            if let Some(first) = c.iter().find(|x| !x.is_zero()) {
                if first.is_negative() {
                    c = c.iter().map(|x| -x).collect();
                }
            }
            found.push((c, residual));
        }
    }
    Ok(found)
}

/// Search for small integer coefficients with `|sum c_i values_i|` below the
/// threshold. Returns `None` when every candidate short vector exceeds the
/// coefficient bound or misses the threshold.
pub fn find_integer_relation(
    values: &[HPReal],
    threshold: &HPReal,
    coeff_bound: &BigInt,
) -> Result<Option<RelationResult>> {
    let mut found = relation_candidates(values, threshold, coeff_bound)?;
    if found.is_empty() {
        return Ok(None);
    }
    found.sort_by(|a, b| {
        let na: BigInt = a.0.iter().map(|x| x * x).sum();
        let nb: BigInt = b.0.iter().map(|x| x * x).sum();
        na.cmp(&nb)
    });
    let (coeffs, residual) = found.swap_remove(0);
    Ok(Some(RelationResult { coeffs, residual }))
}

/// Number of independent integer relations among the values (rank of all
/// qualifying coefficient vectors over the rationals).
pub fn relation_rank(values: &[HPReal], threshold: &HPReal, coeff_bound: &BigInt) -> Result<usize> {
    let found = relation_candidates(values, threshold, coeff_bound)?;
    if found.is_empty() {
        return Ok(0);
    }
    let m = values.len();
    let mut mat: Vec<Vec<BigRational>> = found
        .iter()
        .map(|(c, _)| c.iter().map(|x| BigRational::from(x.clone())).collect())
        .collect();
    // rational row echelon rank
    let mut rank = 0usize;
    for col in 0..m {
        let Some(pivot) = (rank..mat.len()).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(rank, pivot);
        let inv = mat[rank][col].recip();
        for t in col..m {
            let v = &mat[rank][t] * &inv;
            mat[rank][t] = v;
        }
        for r in 0..mat.len() {
            if r != rank && !mat[r][col].is_zero() {
                let f = mat[r][col].clone();
                for t in col..m {
                    let v = &mat[r][t] - &f * &mat[rank][t];
                    mat[r][t] = v;
                }
            }
        }
        rank += 1;
    }
    Ok(rank)
}

/// Dirichlet existence bound `1/eps^n` rounded up, for desk-scale tests.
pub fn dirichlet_bound(epsilon: &HPReal, n: u32) -> Result<u64> {
    let inv = HPReal::one().div(epsilon, 20)?;
    let b = inv.powi(n).ceil_upper();
    b.to_u64()
        .ok_or_else(|| Error::InvalidInput("Dirichlet bound exceeds enumeration range".into()))
}
