//! Exact dense spin-operator arithmetic.
//!
//! Every operator built from Heisenberg pair couplings has dyadic entries
//! (integers over a power of two), so dense matrices are stored as `i128`
//! integers with a common denominator exponent. Sums and products stay
//! integer; rationals only appear when a matrix is divided by a scalar, as in
//! the Casimir spectral projectors. At the capped sizes (`m <= 10`, dimension
//! 1024) the integer magnitudes stay far below the `i128` range, and all
//! arithmetic is checked.

use crate::combinatorics::{enumerate_matchings, Matching};
use crate::numbers::{binomial, pow2, q, q_from_int, Q};
use crate::{sector_spins, Error, Result, Spin};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Largest ground-set size the dense oracle accepts.
pub const DENSE_CAP_M: usize = 10;

fn checked_add(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("dense integer overflow in add")
}

fn checked_mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("dense integer overflow in mul")
}

/// Dense square matrix with entries `ints[i*dim+j] / 2^pow2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledMat {
    dim: usize,
    pow2: u32,
    ints: Vec<i128>,
}

impl ScaledMat {
    pub fn zeros(dim: usize, pow2: u32) -> Self {
        ScaledMat {
            dim,
            pow2,
            ints: vec![0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = ScaledMat::zeros(dim, 0);
        for i in 0..dim {
            m.ints[i * dim + i] = 1;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pow2(&self) -> u32 {
        self.pow2
    }

    pub fn int_at(&self, i: usize, j: usize) -> i128 {
        self.ints[i * self.dim + j]
    }

    pub fn entry(&self, i: usize, j: usize) -> Q {
        q(0) + Q::new(BigInt::from(self.int_at(i, j)), BigInt::one())
            / pow2(i64::from(self.pow2))
    }

    /// Re-expresses the matrix over a larger denominator exponent without
    /// changing its value.
    pub fn rescaled(&self, pow2: u32) -> Self {
        assert!(pow2 >= self.pow2, "cannot lower the denominator exponent");
        let shift = pow2 - self.pow2;
        ScaledMat {
            dim: self.dim,
            pow2,
            ints: self
                .ints
                .iter()
                .map(|&v| {
                    v.checked_shl(shift).expect("dense integer overflow in rescale")
                })
                .collect(),
        }
    }

    /// Divides the value by `2^k` by raising the denominator exponent.
    pub fn halved(&self, k: u32) -> Self {
        ScaledMat {
            dim: self.dim,
            pow2: self.pow2 + k,
            ints: self.ints.clone(),
        }
    }

    pub fn add(&self, o: &ScaledMat) -> ScaledMat {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        let p = self.pow2.max(o.pow2);
        let a = self.rescaled(p);
        let b = o.rescaled(p);
        ScaledMat {
            dim: self.dim,
            pow2: p,
            ints: a
                .ints
                .iter()
                .zip(&b.ints)
                .map(|(&x, &y)| checked_add(x, y))
                .collect(),
        }
    }

    pub fn scaled_int(&self, k: i128) -> ScaledMat {
        ScaledMat {
            dim: self.dim,
            pow2: self.pow2,
            ints: self.ints.iter().map(|&v| checked_mul(v, k)).collect(),
        }
    }

    pub fn neg(&self) -> ScaledMat {
        self.scaled_int(-1)
    }

    /// Adds `t/2^p` to the diagonal.
    pub fn shifted_diag(&self, t: i128, p: u32) -> ScaledMat {
        let pw = self.pow2.max(p);
        let mut out = self.rescaled(pw);
        let tt = t
            .checked_shl(pw - p)
            .expect("dense integer overflow in diagonal shift");
        for i in 0..self.dim {
            out.ints[i * self.dim + i] = checked_add(out.ints[i * self.dim + i], tt);
        }
        out
    }

    pub fn matmul(&self, o: &ScaledMat) -> ScaledMat {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        let dim = self.dim;
        let mut ints = vec![0i128; dim * dim];
        for i in 0..dim {
            let row = &self.ints[i * dim..(i + 1) * dim];
            let out_row = &mut ints[i * dim..(i + 1) * dim];
            for (k, &aik) in row.iter().enumerate() {
                if aik == 0 {
                    continue;
                }
                let orow = &o.ints[k * dim..(k + 1) * dim];
                for (j, &bkj) in orow.iter().enumerate() {
                    if bkj != 0 {
                        out_row[j] = checked_add(out_row[j], checked_mul(aik, bkj));
                    }
                }
            }
        }
        ScaledMat {
            dim,
            pow2: self.pow2 + o.pow2,
            ints,
        }
    }

    pub fn trace(&self) -> Q {
        let mut t = BigInt::zero();
        for i in 0..self.dim {
            t += self.int_at(i, i);
        }
        q_from_int(t) / pow2(i64::from(self.pow2))
    }

    /// `tr(self * o)` without forming the product.
    pub fn trace_product(&self, o: &ScaledMat) -> Q {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        let mut t = BigInt::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let prod = BigInt::from(self.int_at(i, j)) * o.int_at(j, i);
                t += prod;
            }
        }
        q_from_int(t) / pow2(i64::from(self.pow2) + i64::from(o.pow2))
    }

    pub fn eq_exact(&self, o: &ScaledMat) -> bool {
        if self.dim != o.dim {
            return false;
        }
        let p = self.pow2.max(o.pow2);
        self.rescaled(p).ints == o.rescaled(p).ints
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.int_at(i, j) == self.int_at(j, i)))
    }

    pub fn apply_to_int_vector(&self, v: &[i128]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (j, &vj) in v.iter().enumerate() {
                    if vj != 0 {
                        acc += BigInt::from(self.int_at(i, j)) * vj;
                    }
                }
                acc
            })
            .collect()
    }
}

/// A dense matrix `scalar * mat`, for operators whose common denominator is
/// not a power of two (spectral projectors).
#[derive(Debug, Clone)]
pub struct ScaledQMat {
    pub mat: ScaledMat,
    pub scalar: Q,
}

impl ScaledQMat {
    pub fn entry(&self, i: usize, j: usize) -> Q {
        self.mat.entry(i, j) * &self.scalar
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn trace(&self) -> Q {
        self.mat.trace() * &self.scalar
    }

    /// Entrywise equality `self == o`, comparing cross products so no
    /// per-entry rational is constructed.
    pub fn eq_exact(&self, o: &ScaledQMat) -> bool {
        if self.dim() != o.dim() {
            return false;
        }
        // self.scalar/2^pa * a_ij == o.scalar/2^pb * b_ij
        let lhs_scale = self.scalar.clone() / pow2(i64::from(self.mat.pow2));
        let rhs_scale = o.scalar.clone() / pow2(i64::from(o.mat.pow2));
        let ln = lhs_scale.numer() * rhs_scale.denom();
        let rn = rhs_scale.numer() * lhs_scale.denom();
        self.mat
            .ints
            .iter()
            .zip(&o.mat.ints)
            .all(|(&a, &b)| BigInt::from(a) * &ln == BigInt::from(b) * &rn)
    }
}

fn check_cap(m: usize) -> Result<()> {
    if m > DENSE_CAP_M {
        return Err(Error::Resource(format!(
            "dense oracle capped at m = {DENSE_CAP_M}, got {m}"
        )));
    }
    Ok(())
}

/// Site `t` (0-based) occupies bit `m-1-t`, so site 1 of the 1-based ground
/// set is the most significant bit; bit value 0 is spin-up.
fn site_bit(m: usize, t0: usize) -> usize {
    m - 1 - t0
}

/// Applies the Heisenberg coupling on 1-based sites `(i, j)` to the basis
/// state `b`, yielding `(state, weight)` pairs with weights in quarters:
/// the coupling is `(2 P_ij - 1)/4` with `P_ij` the swap.
fn heis_branches(m: usize, i: usize, j: usize, b: usize) -> Vec<(usize, i128)> {
    let bi = site_bit(m, i - 1);
    let bj = site_bit(m, j - 1);
    let vi = (b >> bi) & 1;
    let vj = (b >> bj) & 1;
    if vi == vj {
        vec![(b, 1)]
    } else {
        let swapped = b ^ (1 << bi) ^ (1 << bj);
        vec![(b, -1), (swapped, 2)]
    }
}

/// Dense Heisenberg coupling `S_i . S_j` over `m` sites, 1-based `i < j`.
pub fn heisenberg_op(m: usize, i: usize, j: usize) -> Result<ScaledMat> {
    check_cap(m)?;
    if !(1 <= i && i < j && j <= m) {
        return Err(Error::Domain(format!(
            "need 1 <= i < j <= m, got ({i},{j}) over m = {m}"
        )));
    }
    let dim = 1usize << m;
    let mut out = ScaledMat::zeros(dim, 2);
    for b in 0..dim {
        for (target, w) in heis_branches(m, i, j, b) {
            out.ints[target * dim + b] += w;
        }
    }
    Ok(out)
}

/// Dense product of Heisenberg couplings over the pairs of a matching.
pub fn s_p_dense(p: &Matching) -> Result<ScaledMat> {
    let m = p.ground_set_size();
    check_cap(m)?;
    let dim = 1usize << m;
    let r = p.len();
    let mut out = ScaledMat::zeros(dim, 2 * r as u32);
    let mut branches: Vec<(usize, i128)> = Vec::new();
    let mut next: Vec<(usize, i128)> = Vec::new();
    for col in 0..dim {
        branches.clear();
        branches.push((col, 1));
        for &(i, j) in p.pairs() {
            next.clear();
            for &(b, w) in &branches {
                for (target, w2) in heis_branches(m, i, j, b) {
                    next.push((target, checked_mul(w, w2)));
                }
            }
            std::mem::swap(&mut branches, &mut next);
        }
        for &(row, w) in &branches {
            out.ints[row * dim + col] = checked_add(out.ints[row * dim + col], w);
        }
    }
    Ok(out)
}

/// Dense matching operator `M_r` over `m` sites: the sum of `S_p` over all
/// `r`-matchings.
pub fn matching_operator_dense(m: usize, r: usize) -> Result<ScaledMat> {
    check_cap(m)?;
    if r > m / 2 {
        return Err(Error::Domain(format!("no M_{r} over m = {m}")));
    }
    let dim = 1usize << m;
    let mut out = ScaledMat::zeros(dim, 2 * r as u32);
    for p in enumerate_matchings(m, r)? {
        let sp = s_p_dense(&p)?;
        out = out.add(&sp);
    }
    Ok(out)
}

/// Dense Casimir operator `C = 3m/4 + 2 M_1`.
pub fn casimir_dense(m: usize) -> Result<ScaledMat> {
    let m1 = matching_operator_dense(m, 1)?;
    Ok(m1.scaled_int(2).shifted_diag(3 * m as i128, 2))
}

/// Number of spin-`j` irreducible blocks among `m` spin-1/2 sites:
/// `C(m, (m-2j)/2) - C(m, (m-2j)/2 - 1)`.
pub fn sector_multiplicity(m: usize, j: Spin) -> BigInt {
    let t = i64::from(j.twice());
    let mi = m as i64;
    let k = (mi - t) / 2;
    binomial(mi, k) - binomial(mi, k - 1)
}

/// Dimension of the total-spin-`j` eigenspace, i.e. the trace of its
/// spectral projector: multiplicity times `2j + 1`.
pub fn sector_dimension(m: usize, j: Spin) -> BigInt {
    sector_multiplicity(m, j) * BigInt::from(j.twice() + 1)
}

/// Dense spectral projectors of the Casimir operator, one per spin sector,
/// built as exact polynomials in `M_1` (no numerical diagonalization).
pub fn casimir_projectors_dense(m: usize) -> Result<BTreeMap<Spin, ScaledQMat>> {
    check_cap(m)?;
    if m < 2 {
        return Err(Error::Domain(format!("need m >= 2, got {m}")));
    }
    let m1 = matching_operator_dense(m, 1)?;
    let spins = sector_spins(m);
    // lambda_j in eighths: 8 lambda_j = t(t+2) - 3m with t = 2j
    let eighth = |j: Spin| -> i128 {
        let t = i128::from(j.twice());
        t * (t + 2) - 3 * m as i128
    };
    let mut out = BTreeMap::new();
    for &j in &spins {
        let mut num: Option<ScaledMat> = None;
        let mut den = Q::one();
        for &k in &spins {
            if k == j {
                continue;
            }
            let factor = m1.shifted_diag(-eighth(k), 3);
            num = Some(match num {
                None => factor,
                Some(acc) => acc.matmul(&factor),
            });
            den *= q_from_int(BigInt::from(eighth(j) - eighth(k))) / q(8);
        }
        let num = num.unwrap_or_else(|| ScaledMat::identity(1 << m));
        out.insert(
            j,
            ScaledQMat {
                mat: num,
                scalar: Q::one() / den,
            },
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff;
    use crate::combinatorics::enumerate_matchings;
    use crate::numbers::{int, q_ratio};

    #[test]
    fn heisenberg_square_identity() {
        // S^2 = 3/16 - S/2
        for (m, i, j) in [(2, 1, 2), (3, 1, 3), (4, 2, 4)] {
            let s = heisenberg_op(m, i, j).unwrap();
            let lhs = s.matmul(&s);
            let rhs = s.neg().halved(1).shifted_diag(3, 4);
            assert!(lhs.eq_exact(&rhs), "m={m} ({i},{j})");
        }
    }

    #[test]
    fn heisenberg_eigenvalues_via_minimal_polynomial() {
        // (S - 1/4)(S + 3/4) = 0 and tr S = 0 pin the spectrum
        let s = heisenberg_op(2, 1, 2).unwrap();
        let a = s.shifted_diag(-1, 2);
        let b = s.shifted_diag(3, 2);
        let prod = a.matmul(&b);
        assert!(prod.eq_exact(&ScaledMat::zeros(4, 0)));
        assert_eq!(s.trace(), q(0));
    }

    #[test]
    fn heisenberg_rejects_bad_indices() {
        assert!(heisenberg_op(3, 2, 2).is_err());
        assert!(heisenberg_op(3, 0, 2).is_err());
        assert!(heisenberg_op(3, 1, 4).is_err());
        assert!(heisenberg_op(11, 1, 2).is_err());
    }

    #[test]
    fn cycle_contraction_trace() {
        // tr over the 3-cycle (1,2)(2,3)(3,1) equals 3/2^3
        let m = 3;
        let p = heisenberg_op(m, 1, 2)
            .unwrap()
            .matmul(&heisenberg_op(m, 2, 3).unwrap())
            .matmul(&heisenberg_op(m, 1, 3).unwrap());
        assert_eq!(p.trace(), q_ratio(3, 8));
    }

    #[test]
    fn s_p_on_all_up_state() {
        // <up...up| S_p |up...up> = 4^{-r}
        for m in 2..=6usize {
            for r in 0..=m / 2 {
                for p in enumerate_matchings(m, r).unwrap() {
                    let sp = s_p_dense(&p).unwrap();
                    assert_eq!(sp.entry(0, 0), pow2(-2 * r as i64), "{p}");
                }
            }
        }
    }

    #[test]
    fn matching_operator_r0_is_identity() {
        let m0 = matching_operator_dense(5, 0).unwrap();
        assert!(m0.eq_exact(&ScaledMat::identity(32)));
    }

    #[test]
    fn matching_operator_trace_norm_m2() {
        let m1 = matching_operator_dense(2, 1).unwrap();
        assert_eq!(m1.trace_product(&m1), q_ratio(3, 4));
    }

    #[test]
    fn matching_operators_commute_with_casimir() {
        for m in 2..=6usize {
            let c = casimir_dense(m).unwrap();
            for r in 0..=m / 2 {
                let mr = matching_operator_dense(m, r).unwrap();
                assert!(c.matmul(&mr).eq_exact(&mr.matmul(&c)), "m={m} r={r}");
            }
        }
    }

    #[test]
    fn matching_operators_are_symmetric() {
        for m in 2..=6usize {
            for r in 0..=m / 2 {
                assert!(matching_operator_dense(m, r).unwrap().is_symmetric());
            }
        }
    }

    #[test]
    fn casimir_spectrum_via_projectors() {
        for m in 2..=6usize {
            let c = casimir_dense(m).unwrap();
            let projs = casimir_projectors_dense(m).unwrap();
            for (&j, p) in &projs {
                // C * P_j = j(j+1) * P_j, as dyadic integer matrices
                let lhs = c.matmul(&p.mat);
                let jj = i128::from(j.twice()) * (i128::from(j.twice()) + 2);
                let rhs = p.mat.scaled_int(jj).halved(2);
                assert!(lhs.eq_exact(&rhs), "m={m} j={j}");
                // block trace equals the sector dimension
                assert_eq!(
                    p.trace(),
                    q_from_int(sector_dimension(m, j)),
                    "m={m} j={j}"
                );
            }
            // projectors sum to the identity, entrywise rational
            let dim = 1usize << m;
            for i in 0..dim {
                for k in 0..dim {
                    let sum: Q = projs.values().map(|p| p.entry(i, k)).sum();
                    let expect = if i == k { Q::one() } else { Q::zero() };
                    assert_eq!(sum, expect, "m={m} ({i},{k})");
                }
            }
        }
    }

    #[test]
    fn projector_traces_match_dimension() {
        // m=2: triplet 3, singlet 1; m=4 traces sum to 16
        let p2 = casimir_projectors_dense(2).unwrap();
        assert_eq!(p2[&Spin::from_twice(2)].trace(), q(3));
        assert_eq!(p2[&Spin::from_twice(0)].trace(), q(1));
        let p4 = casimir_projectors_dense(4).unwrap();
        let total: Q = p4.values().map(|p| p.trace()).sum();
        assert_eq!(total, q(16));
        assert_eq!(p4[&Spin::from_twice(0)].trace(), q(2));
        assert_eq!(p4[&Spin::from_twice(2)].trace(), q(9));
        assert_eq!(p4[&Spin::from_twice(4)].trace(), q(5));
    }

    #[test]
    fn psym_equals_top_projector_reconstruction() {
        for m in 2..=6usize {
            let projs = casimir_projectors_dense(m).unwrap();
            let top = *sector_spins(m).last().unwrap();
            let coeffs = coeff::psym_coeffs(m).unwrap();
            let dim = 1usize << m;
            let mats: Vec<ScaledMat> = (0..=m / 2)
                .map(|r| matching_operator_dense(m, r).unwrap())
                .collect();
            for i in 0..dim {
                for k in 0..dim {
                    let lhs: Q = coeffs
                        .coeffs()
                        .iter()
                        .zip(&mats)
                        .map(|(c, mr)| c * mr.entry(i, k))
                        .sum();
                    assert_eq!(lhs, projs[&top].entry(i, k), "m={m} ({i},{k})");
                }
            }
        }
    }

    #[test]
    fn norms_match_formula_small() {
        for m in 2..=6usize {
            for r in 0..=m / 2 {
                let mr = matching_operator_dense(m, r).unwrap();
                assert_eq!(
                    mr.trace_product(&mr),
                    coeff::matching_norm_sq(m, r).unwrap(),
                    "m={m} r={r}"
                );
            }
        }
    }

    #[test]
    fn multiplicities_sum_to_dimension() {
        for m in 1..=12usize {
            let total: BigInt = sector_spins(m)
                .into_iter()
                .map(|j| sector_dimension(m, j))
                .sum();
            assert_eq!(total, int(1) << m, "m={m}");
        }
    }
}
