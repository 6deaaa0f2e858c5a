//! Exact decorated-transfer-operator quantities for arbitrary vertex degree.
//!
//! For a vertex of degree `d` whose incident edges carry `n` decoration
//! sites, the left transfer operator maps single-site matrices to `d-1`-leg
//! matrices, and its image on the normalized basis is a commutant element
//! with coefficients `alpha_n^{2r}/(2r+1)!!`, `alpha_n^2 = 4/9^n`. The
//! minimal eigenvalue of `Q_L`, the squared Schatten-∞ norm, and the
//! closed-form bounds used by the certificate are all evaluated here, exactly
//! where the expression is rational and in outward-rounded intervals where a
//! square root or logarithm enters.

use crate::coeff::{self, CoeffVector};
use crate::interval::{sqrt3, Interval};
use crate::numbers::{
    binomial, double_factorial, pow2, pow3, q, q_from_int, q_pow, Q,
};
use crate::{Error, Result, Spin};
use num_traits::Zero;

/// Contraction rate of the decorated chain: `a(n) = 3^{-n}`.
pub fn a_rate(n: u32) -> Q {
    pow3(-i64::from(n))
}

/// `alpha_n^2 = 4/9^n`.
pub fn alpha_sq(n: u32) -> Q {
    q(4) * pow3(-2 * i64::from(n))
}

fn check_degree(d: u32) -> Result<()> {
    if d < 1 {
        return Err(Error::Domain(format!("vertex degree must be >= 1, got {d}")));
    }
    Ok(())
}

/// `(d+1)/2^{d-1}`, the overall scale of the left transfer operator.
pub fn transfer_scale(d: u32) -> Q {
    q(i64::from(d) + 1) / pow2(i64::from(d) - 1)
}

/// Coefficients of the `Q_L` direction: entry `r` is
/// `alpha_n^{2r}/(2r+1)!!` over ground-set size `m = d-1`.
pub fn v_rho_coeffs(d: u32, n: u32) -> Result<CoeffVector> {
    check_degree(d)?;
    let m = (d - 1) as usize;
    let asq = alpha_sq(n);
    let coeffs = (0..=(m / 2) as i64)
        .map(|r| q_pow(&asq, r) / q_from_int(double_factorial(2 * r + 1)))
        .collect();
    CoeffVector::new(m, coeffs)
}

/// Exact minimal eigenvalue of `Q_L` and the sector attaining it, found by
/// scanning every spin sector rather than assuming the minimal-spin
/// conjecture.
pub fn ql_exact(d: u32, n: u32) -> Result<(Q, Spin)> {
    let v = v_rho_coeffs(d, n)?;
    let scale = transfer_scale(d);
    let spectrum = coeff::sector_values(&v)?;
    let (argmin, min) = spectrum.min_entry();
    Ok((scale * min, argmin))
}

/// Certified closed-form lower bound
/// `(d+1)/(3*2^{d-1}) * (4 - (1 + 3^{-n+1/2})^{d-1})`; may be negative, in
/// which case it is vacuous but still a valid bound.
pub fn ql_lower_bound(d: u32, n: u32, prec: u32) -> Result<Interval> {
    if d < 3 {
        return Err(Error::Domain(format!(
            "closed-form lower bound needs degree >= 3, got {d}"
        )));
    }
    let one = Interval::from_i64(1, prec);
    let x = sqrt3(prec).mul_q(&pow3(-i64::from(n)));
    let inner = one.add(&x).powi(d - 1);
    let four = Interval::from_i64(4, prec);
    let scale = q(i64::from(d) + 1) / (q(3) * pow2(i64::from(d) - 1));
    Ok(four.sub(&inner).mul_q(&scale))
}

/// Which image norm attains the Schatten-∞ norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormBranch {
    /// The `Q_L` direction (image of the identity).
    Rho,
    /// The spin-operator direction (image of a Pauli matrix).
    SpinOp,
}

impl std::fmt::Display for NormBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormBranch::Rho => write!(f, "rho"),
            NormBranch::SpinOp => write!(f, "spin"),
        }
    }
}

/// Squared Hilbert-Schmidt norm of the identity image direction:
/// `(2^{d-1}/d) * sum_r 3^{-4rn} C(d, 2r+1)`.
pub fn v_rho_norm_sq(d: u32, n: u32) -> Result<Q> {
    check_degree(d)?;
    let (di, ni) = (i64::from(d), i64::from(n));
    let mut sum = Q::zero();
    let mut r = 0i64;
    while 2 * r <= di - 1 {
        sum += pow3(-4 * r * ni) * q_from_int(binomial(di, 2 * r + 1));
        r += 1;
    }
    Ok(pow2(di - 1) / q(di) * sum)
}

/// Squared Hilbert-Schmidt norm of the spin-operator image direction:
/// `2^{d-1}/(3^{2n+1} d (d+1)) * sum_r 3^{-4rn} (2r+2) C(d+1, 2r+3)`.
pub fn v_su_norm_sq(d: u32, n: u32) -> Result<Q> {
    check_degree(d)?;
    let (di, ni) = (i64::from(d), i64::from(n));
    let mut sum = Q::zero();
    let mut r = 0i64;
    while 2 * r <= di - 2 {
        sum += pow3(-4 * r * ni)
            * q(2 * r + 2)
            * q_from_int(binomial(di + 1, 2 * r + 3));
        r += 1;
    }
    Ok(pow2(di - 1) * pow3(-(2 * ni + 1)) / q(di * (di + 1)) * sum)
}

/// Exact squared Schatten-∞ norm:
/// `(d+1)^2/2^{2d-1} * max(|V_rho|^2, |V_su|^2)`; both branches are always
/// evaluated and the true maximum returned.
pub fn el_inf_norm_sq(d: u32, n: u32) -> Result<(Q, NormBranch)> {
    let vr = v_rho_norm_sq(d, n)?;
    let vs = v_su_norm_sq(d, n)?;
    let scale = q(i64::from(d) + 1).pow(2) / pow2(2 * i64::from(d) - 1);
    if vs > vr {
        Ok((scale * vs, NormBranch::SpinOp))
    } else {
        Ok((scale * vr, NormBranch::Rho))
    }
}

/// Smallest decoration `n` certified to satisfy
/// `n >= ln(d-1)/ln 3 - ln(ln 3)/ln 3 + 1/2`, which guarantees `Q_L` is
/// invertible.
pub fn invertibility_threshold(d: u32, prec: u32) -> Result<u32> {
    if d < 3 {
        return Err(Error::Domain(format!(
            "invertibility threshold needs degree >= 3, got {d}"
        )));
    }
    let ln3 = crate::interval::ln3(prec);
    let t = Interval::from_i64(i64::from(d) - 1, prec)
        .ln()?
        .div(&ln3)?
        .sub(&ln3.ln()?.div(&ln3)?)
        .add(&Interval::from_q(&crate::numbers::q_ratio(1, 2), prec));
    for n in 0..=64u32 {
        if *t.hi() <= i64::from(n) {
            return Ok(n);
        }
    }
    Err(Error::Numerical(
        "invertibility threshold did not resolve below n = 64".into(),
    ))
}

/// Closed-form upper bound on the squared Schatten-∞ norm,
/// `(d+1)^2/(3*2^d) * (2 + (1 + 3^{-2n})^{d-1})`, valid above the
/// invertibility threshold. The expression is rational, so it is returned
/// exactly.
pub fn el_inf_upper_bound_sq(d: u32, n: u32, prec: u32) -> Result<Q> {
    let n_min = invertibility_threshold(d, prec)?;
    if n < n_min {
        return Err(Error::Domain(format!(
            "norm bound for degree {d} needs n >= {n_min}, got {n}"
        )));
    }
    let di = i64::from(d);
    let inner = q(1) + pow3(-2 * i64::from(n));
    let poly = q(2) + q_pow(&inner, di - 1);
    Ok(q(di + 1).pow(2) / (q(3) * pow2(di)) * poly)
}

/// Outcome of comparing the exact minimal eigenvalue of `Q_L` against the
/// minimal-spin closed form `(d+1)/2^{d-1} (1 - 3^{-2n})^{floor((d-1)/2)}`.
#[derive(Debug, Clone)]
pub struct ConjectureOutcome {
    pub d: u32,
    pub n: u32,
    pub holds: bool,
    pub exact_min: Q,
    pub predicted: Q,
    pub argmin: Spin,
}

/// Compares, never assumes: the closed form for the minimal eigenvalue is
/// reported as it evaluates.
pub fn conjecture_check(d: u32, n: u32) -> Result<ConjectureOutcome> {
    let (exact_min, argmin) = ql_exact(d, n)?;
    let s = (i64::from(d) - 1) / 2;
    let base = q(1) - pow3(-2 * i64::from(n));
    let predicted = transfer_scale(d) * q_pow(&base, s);
    Ok(ConjectureOutcome {
        d,
        n,
        holds: exact_min == predicted,
        exact_min,
        predicted,
        argmin,
    })
}

/// Exact operator norm of the left transfer map, which for a completely
/// positive map is the operator norm of its image of the identity:
/// `(d+1)/2^{d-1} * max_j |sector value of the Q_L direction|`.
pub fn el_op_norm(d: u32, n: u32) -> Result<Q> {
    let v = v_rho_coeffs(d, n)?;
    let spectrum = coeff::sector_values(&v)?;
    Ok(transfer_scale(d) * spectrum.max_abs())
}

/// Exact operator norm of the right transfer map: `(d+1)/2`.
pub fn er_op_norm(d: u32) -> Q {
    q(i64::from(d) + 1) / q(2)
}

/// Every per-`(d,n)` transfer quantity the certificate consumes.
#[derive(Debug, Clone)]
pub struct TransferQuantities {
    pub d: u32,
    pub n: u32,
    pub a_n: Q,
    pub alpha_sq: Q,
    pub ql_exact: Q,
    pub ql_argmin: Spin,
    /// Closed-form lower bound; absent for `d < 3` where none is stated.
    pub ql_bound: Option<Interval>,
    pub el_inf_sq: Q,
    pub el_branch: NormBranch,
    /// Closed-form upper bound on the squared norm; absent below the
    /// invertibility threshold.
    pub el_inf_bound_sq: Option<Q>,
    pub v_rho_norm_sq: Q,
    pub v_su_norm_sq: Q,
}

impl TransferQuantities {
    pub fn compute(d: u32, n: u32, prec: u32) -> Result<Self> {
        let (ql, argmin) = ql_exact(d, n)?;
        let (el_sq, branch) = el_inf_norm_sq(d, n)?;
        let ql_bound = if d >= 3 {
            Some(ql_lower_bound(d, n, prec)?)
        } else {
            None
        };
        let el_inf_bound_sq = if d >= 3 {
            match el_inf_upper_bound_sq(d, n, prec) {
                Ok(b) => Some(b),
                Err(Error::Domain(_)) => None,
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        Ok(TransferQuantities {
            d,
            n,
            a_n: a_rate(n),
            alpha_sq: alpha_sq(n),
            ql_exact: ql,
            ql_argmin: argmin,
            ql_bound,
            el_inf_sq: el_sq,
            el_branch: branch,
            el_inf_bound_sq,
            v_rho_norm_sq: v_rho_norm_sq(d, n)?,
            v_su_norm_sq: v_su_norm_sq(d, n)?,
        })
    }
}

/// The exact Table-of-small-degrees values for `1 <= d <= 4`, as
/// `(q_L, |E_L|_inf^2)`; used to cross-check the general machinery.
pub fn small_degree_closed_forms(d: u32, n: u32) -> Option<(Q, Q)> {
    let t = pow3(-2 * i64::from(n));
    match d {
        1 => Some((q(2), q(2))),
        2 => Some((crate::numbers::q_ratio(3, 2), crate::numbers::q_ratio(9, 4))),
        3 => Some((
            q(1) - t.clone(),
            q(2) * (q(1) + pow3(-4 * i64::from(n) - 1)),
        )),
        4 => Some((
            crate::numbers::q_ratio(5, 8) * (q(1) - t),
            crate::numbers::q_ratio(25, 16) * (q(1) + pow3(-4 * i64::from(n))),
        )),
        _ => None,
    }
}
