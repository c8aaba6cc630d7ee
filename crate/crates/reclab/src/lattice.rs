//! Exact-integer lattices and LLL reduction.
//!
//! Reduction runs the all-integer variant of LLL (Gram coefficients kept as
//! the integers `lambda_ij = d_j * mu_ij` alongside the subdeterminants
//! `d_k`), so every swap decision is an exact integer comparison. No
//! floating point ever enters the decision path; with entries of 10^35 and
//! beyond a single misrounded swap would void the first-vector guarantee.

use crate::error::{Error, Result};
use crate::precision::HPReal;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Lovász parameter as an exact fraction, `1/4 < num/den < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Delta {
    num: u64,
    den: u64,
}

impl Delta {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        // 1/4 < num/den < 1
        if den == 0 || 4 * num <= den || num >= den {
            return Err(Error::InvalidDelta { num, den });
        }
        Ok(Delta { num, den })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn as_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
}

impl Default for Delta {
    /// `3/4`, the parameter behind the `2^{(n-1)/4} d(L)^{1/n}` first-vector
    /// guarantee.
    fn default() -> Self {
        Delta { num: 3, den: 4 }
    }
}

/// A lattice basis: `n` linearly independent integer row vectors of
/// dimension `d >= n`. Square and full-rank in all the primary flows;
/// the extra columns are used by the integer-relation lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBasis {
    #[serde(with = "rows_as_strings")]
    rows: Vec<Vec<BigInt>>,
}

impl LatticeBasis {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidInput("empty basis".into()));
        }
        let dim = rows[0].len();
        if dim == 0 {
            return Err(Error::InvalidInput("zero-dimensional rows".into()));
        }
        for r in &rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: r.len(),
                });
            }
        }
        if rows.len() > dim {
            return Err(Error::InvalidInput(format!(
                "{} rows cannot be independent in dimension {}",
                rows.len(),
                dim
            )));
        }
        Ok(LatticeBasis { rows })
    }

    /// Rational rows are admitted by pre-scaling with the least common
    /// denominator; returns the basis and the scale factor applied.
    pub fn from_rational_rows(rows: Vec<Vec<BigRational>>) -> Result<(Self, BigInt)> {
        let mut scale = BigInt::one();
        for r in &rows {
            for x in r {
                scale = scale.lcm(x.denom());
            }
        }
        let int_rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| (x * BigRational::from(scale.clone())).to_integer())
                    .collect()
            })
            .collect();
        Ok((LatticeBasis::new(int_rows)?, scale))
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.rows[0].len()
    }

    pub fn is_square(&self) -> bool {
        self.rank() == self.ambient_dim()
    }

    /// `|det|` of a square basis, by fraction-free elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NonSquareBasis {
                rows: self.rank(),
                cols: self.ambient_dim(),
            });
        }
        let det = bareiss_det(self.rows.clone());
        if det.is_zero() {
            Err(Error::SingularBasis)
        } else {
            Ok(det.abs())
        }
    }

    /// Gram determinant `det(B B^T)`; equals `d(L)^2` for any rank.
    pub fn gram_determinant(&self) -> Result<BigInt> {
        let n = self.rank();
        let gram: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| dot(&self.rows[i], &self.rows[j])).collect())
            .collect();
        let det = bareiss_det(gram);
        if det.is_zero() {
            Err(Error::SingularBasis)
        } else {
            Ok(det)
        }
    }

    /// Hadamard defect `d(L) / prod |u_i|` in `(0, 1]`; equals 1 exactly
    /// for mutually orthogonal rows.
    pub fn hadamard_defect(&self, digits: u32) -> Result<HPReal> {
        let gram_det = self.gram_determinant()?;
        let work = digits + 10;
        let vol = HPReal::from_bigint(gram_det).sqrt(work)?;
        let mut denom = HPReal::one();
        for r in &self.rows {
            denom = denom.mul(&HPReal::from_bigint(dot(r, r)).sqrt(work)?);
        }
        vol.div(&denom, digits)
    }

    /// LLL reduction with the given Lovász parameter.
    pub fn lll_reduce(&self, delta: Delta) -> Result<ReductionOutput> {
        lll_reduce_rows(self.rows.clone(), delta).map(|(rows, transform)| ReductionOutput {
            reduced: LatticeBasis { rows },
            transform,
        })
    }

    /// Independent reducedness checker: recomputes the Gram–Schmidt data
    /// from scratch in exact rational arithmetic and tests size reduction
    /// and the Lovász condition. Deliberately shares no code with
    /// `lll_reduce`.
    pub fn is_reduced(&self, delta: Delta) -> bool {
        let n = self.rank();
        let d = self.ambient_dim();
        let to_q = |v: &BigInt| BigRational::from(v.clone());
        let mut b_star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        let mut norms = Vec::with_capacity(n);
        for i in 0..n {
            let mut v: Vec<BigRational> = self.rows[i].iter().map(to_q).collect();
            for j in 0..i {
                // mu_ij = <b_i, b*_j> / |b*_j|^2
                let num: BigRational = (0..d).map(|t| to_q(&self.rows[i][t]) * &b_star[j][t]).sum();
                mu[i][j] = num / &norms[j];
                for t in 0..d {
                    let sub = &mu[i][j] * &b_star[j][t];
                    v[t] -= sub;
                }
            }
            let norm: BigRational = v.iter().map(|x| x * x).sum();
            if norm.is_zero() {
                return false;
            }
            norms.push(norm);
            b_star.push(v);
        }
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        for i in 0..n {
            for j in 0..i {
                if mu[i][j].abs() > half {
                    return false;
                }
            }
        }
        let delta_q = delta.as_rational();
        for k in 1..n {
            let lhs = (&delta_q - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
            if norms[k] < lhs {
                return false;
            }
        }
        true
    }
}

/// Result of an LLL reduction: the reduced basis and the unimodular row
/// transform with `reduced = transform * input` exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionOutput {
    pub reduced: LatticeBasis,
    #[serde(with = "rows_as_strings")]
    pub transform: Vec<Vec<BigInt>>,
}

impl ReductionOutput {
    /// `|det(transform)|`, which must be 1.
    pub fn transform_det_abs(&self) -> BigInt {
        bareiss_det(self.transform.clone()).abs()
    }
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm_sq(a: &[BigInt]) -> BigInt {
    dot(a, a)
}

/// Signed determinant by Bareiss fraction-free elimination (exact).
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            // pivot search
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    // nearest integer to a/b for b > 0, ties toward +infinity
    let (q, r) = a.div_mod_floor(b);
    if BigInt::from(2) * r >= *b {
        q + 1
    } else {
        q
    }
}

fn exact_div(a: BigInt, b: &BigInt) -> BigInt {
    debug_assert!(!(b.is_zero()));
    debug_assert!((&a % b).is_zero(), "inexact division in integral LLL");
    a / b
}

/// All-integer LLL on row vectors. Returns the reduced rows and the
/// unimodular transform applied to them.
/// Integer row matrix: the reduced rows paired with the transform rows.
pub(crate) type RowsAndTransform = (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>);

pub(crate) fn lll_reduce_rows(rows: Vec<Vec<BigInt>>, delta: Delta) -> Result<RowsAndTransform> {
    let n = rows.len();
    let mut b = rows;
    let mut h: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    // dvec[k] = Gram determinant of the first k rows (dvec[0] = 1);
    // lam[i][j] = dvec[j+1] * mu_ij for j < i
    let mut dvec: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    dvec[0] = BigInt::one();
    dvec[1] = norm_sq(&b[0]);
    if dvec[1].is_zero() {
        return Err(Error::SingularBasis);
    }
    let mut lam: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    let p = BigInt::from(delta.num);
    let q = BigInt::from(delta.den);

    let mut k = 1usize;
    let mut kmax = 0usize;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = exact_div(&dvec[i + 1] * &u - &lam[k][i] * &lam[j][i], &dvec[i]);
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::SingularBasis);
                    }
                    dvec[k + 1] = u;
                }
            }
        }
        loop {
            // RED(k, k-1)
            red(&mut b, &mut h, &mut lam, &dvec, k, k - 1);
            // Lovász test: swap iff q*(d[k+1]*d[k-1] + lam^2) < p*d[k]^2
            let lhs = &q * (&dvec[k + 1] * &dvec[k - 1] + &lam[k][k - 1] * &lam[k][k - 1]);
            let rhs = &p * (&dvec[k] * &dvec[k]);
            if lhs < rhs {
                swap_step(&mut b, &mut h, &mut lam, &mut dvec, k, kmax);
                k = k.max(2) - 1;
            } else {
                for l in (0..k.saturating_sub(1)).rev() {
                    red(&mut b, &mut h, &mut lam, &dvec, k, l);
                }
                k += 1;
                break;
            }
        }
    }
    Ok((b, h))
}

fn red(
    b: &mut [Vec<BigInt>],
    h: &mut [Vec<BigInt>],
    lam: &mut [Vec<BigInt>],
    dvec: &[BigInt],
    k: usize,
    l: usize,
) {
    let two_lam = BigInt::from(2) * lam[k][l].abs();
    if two_lam <= dvec[l + 1] {
        return;
    }
    let r = round_div(&lam[k][l], &dvec[l + 1]);
    for t in 0..b[k].len() {
        let sub = &r * &b[l][t];
        b[k][t] -= sub;
    }
    for t in 0..h[k].len() {
        let sub = &r * &h[l][t];
        h[k][t] -= sub;
    }
    let sub = &r * &dvec[l + 1];
    lam[k][l] -= sub;
    for i in 0..l {
        let sub = &r * &lam[l][i];
        lam[k][i] -= sub;
    }
}

fn swap_step(
    b: &mut [Vec<BigInt>],
    h: &mut [Vec<BigInt>],
    lam: &mut [Vec<BigInt>],
    dvec: &mut [BigInt],
    k: usize,
    kmax: usize,
) {
    b.swap(k, k - 1);
    h.swap(k, k - 1);
    for j in 0..k.saturating_sub(1) {
        let tmp = lam[k][j].clone();
        lam[k][j] = lam[k - 1][j].clone();
        lam[k - 1][j] = tmp;
    }
    let lam_kk = lam[k][k - 1].clone();
    let bnew = exact_div(&dvec[k - 1] * &dvec[k + 1] + &lam_kk * &lam_kk, &dvec[k]);
    for i in k + 1..=kmax {
        let t = lam[i][k].clone();
        lam[i][k] = exact_div(&dvec[k + 1] * &lam[i][k - 1] - &lam_kk * &t, &dvec[k]);
        lam[i][k - 1] = exact_div(&bnew * &t + &lam_kk * &lam[i][k], &dvec[k + 1]);
    }
    dvec[k] = bnew;
}

mod rows_as_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let as_strings: Vec<Vec<String>> = rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        as_strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let as_strings: Vec<Vec<String>> = Vec::deserialize(d)?;
        as_strings
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|s| s.parse().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Exact check of the first-vector quality bound for `delta = 3/4`:
/// `|b_1| <= 2^{(n-1)/4} d(L)^{1/n}`, tested as
/// `(|b_1|^2)^n <= 2^{n(n-1)/2} d(L)^2` in integers.
pub fn first_vector_within_bound(first_row: &[BigInt], rank: usize, gram_det: &BigInt) -> bool {
    let nsq = norm_sq(first_row);
    let lhs = num_traits::pow(nsq, rank);
    let rhs = (BigInt::one() << (rank * (rank - 1) / 2)) * gram_det;
    lhs <= rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(rows: &[&[i64]]) -> LatticeBasis {
        LatticeBasis::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(
            basis(&[&[2, 0], &[1, 1]]).determinant().unwrap(),
            BigInt::from(2)
        );
        assert_eq!(
            basis(&[&[7, 6], &[9, 9]]).determinant().unwrap(),
            BigInt::from(9)
        );
        let id = basis(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(id.determinant().unwrap(), BigInt::from(1));
        assert_eq!(
            basis(&[&[1, 2], &[2, 4]]).determinant(),
            Err(Error::SingularBasis)
        );
    }

    #[test]
    fn reduce_identity_is_identity() {
        let id = basis(&[&[1, 0], &[0, 1]]);
        let out = id.lll_reduce(Delta::default()).unwrap();
        assert_eq!(out.reduced, id);
        assert_eq!(out.transform_det_abs(), BigInt::one());
    }

    /// Exhaustive short-vector search in a 2D lattice (oracle).
    fn shortest_norm_sq_2d(rows: &[Vec<BigInt>], span: i64) -> BigInt {
        let mut best: Option<BigInt> = None;
        for a in -span..=span {
            for b in -span..=span {
                if a == 0 && b == 0 {
                    continue;
                }
                let v: Vec<BigInt> = (0..rows[0].len())
                    .map(|t| BigInt::from(a) * &rows[0][t] + BigInt::from(b) * &rows[1][t])
                    .collect();
                let n = norm_sq(&v);
                if best.as_ref().is_none_or(|b| n < *b) {
                    best = Some(n);
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn reduce_finds_short_vector_in_figure_basis() {
        // the scaled example basis (7/3,2),(3,3): shortest vector is (3,0)
        let b = basis(&[&[7, 6], &[9, 9]]);
        let out = b.lll_reduce(Delta::default()).unwrap();
        let first = &out.reduced.rows()[0];
        let oracle = shortest_norm_sq_2d(b.rows(), 30);
        assert_eq!(oracle, BigInt::from(9));
        // first vector within the delta=3/4 bound: norm^2 <= sqrt(2)*9 => <= 12
        assert!(norm_sq(first) <= BigInt::from(12));
        // and this particular lattice's LLL answer is in fact the shortest
        assert_eq!(norm_sq(first), oracle);
        assert!(out.reduced.is_reduced(Delta::default()));
    }

    #[test]
    fn reduce_skewed_unimodular_lattice() {
        let b = basis(&[&[1, 0], &[1_000_000, 1]]);
        let out = b.lll_reduce(Delta::default()).unwrap();
        // Z^2: both reduced rows must be unit vectors
        assert_eq!(norm_sq(&out.reduced.rows()[0]), BigInt::one());
        assert_eq!(norm_sq(&out.reduced.rows()[1]), BigInt::one());
        assert_eq!(out.reduced.determinant().unwrap(), BigInt::one());
    }

    #[test]
    fn transform_maps_input_to_output() {
        let b = basis(&[&[7, 6], &[9, 9]]);
        let out = b.lll_reduce(Delta::default()).unwrap();
        for (i, row) in out.reduced.rows().iter().enumerate() {
            for t in 0..2 {
                let combo: BigInt = (0..2).map(|j| &out.transform[i][j] * &b.rows()[j][t]).sum();
                assert_eq!(combo, row[t]);
            }
        }
        assert_eq!(out.transform_det_abs(), BigInt::one());
    }

    #[test]
    fn hadamard_defect_examples() {
        let id = basis(&[&[1, 0], &[0, 1]]);
        let d = id.hadamard_defect(30).unwrap();
        assert!(d.sub(&HPReal::one()).abs().abs_le_pow10(-28));
        let skew = basis(&[&[1, 1], &[0, 1]]);
        let d = skew.hadamard_defect(30).unwrap();
        let expected: HPReal = "0.70710678118654752440084436210".parse().unwrap();
        assert!(d.sub(&expected).abs().abs_le_pow10(-27), "{}", d);
    }

    #[test]
    fn rational_rows_are_prescaled() {
        let rows = vec![
            vec![
                BigRational::new(BigInt::from(7), BigInt::from(3)),
                BigRational::from(BigInt::from(2)),
            ],
            vec![
                BigRational::from(BigInt::from(3)),
                BigRational::from(BigInt::from(3)),
            ],
        ];
        let (b, scale) = LatticeBasis::from_rational_rows(rows).unwrap();
        assert_eq!(scale, BigInt::from(3));
        assert_eq!(b, basis(&[&[7, 6], &[9, 9]]));
        // unscaled determinant: 9 / 3^2 = 1
        assert_eq!(b.determinant().unwrap(), BigInt::from(9));
    }

    #[test]
    fn serde_round_trip() {
        let b = basis(&[&[7, 6], &[9, 9]]);
        let json = serde_json::to_string(&b).unwrap();
        assert!(json.contains("\"7\""));
        let back: LatticeBasis = serde_json::from_str(&json).unwrap();
        assert_eq!(b, back);
    }

    #[test]
    fn delta_validation() {
        assert!(Delta::new(1, 4).is_err());
        assert!(Delta::new(4, 4).is_err());
        assert!(Delta::new(99, 100).is_ok());
    }

    #[test]
    fn idempotence() {
        let b = basis(&[&[7, 6], &[9, 9]]);
        let once = b.lll_reduce(Delta::default()).unwrap();
        let twice = once.reduced.lll_reduce(Delta::default()).unwrap();
        assert_eq!(once.reduced, twice.reduced);
    }
}
