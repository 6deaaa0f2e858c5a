//! Dense transfer maps of the valence-bond ground-state representation.
//!
//! The single-site map acts on 2x2 matrices as
//! `E(B) = (2/3) tr(B) 1 - B/3`; the undecorated vertex map is the Kraus sum
//! over the vertex tensors `W_k = K V_k`, and decoration composes the
//! single-site map factorwise on every leg. All conventions (spin-up first,
//! leftmost site most significant, singlet on the right side of a vertex)
//! are fixed here and validated against closed forms in the test suite.

use super::cmat::{embed_on_sites, pauli_basis, q_to_c, spin_half_ops, CMat, C64};
use super::exact::matching_operator_dense;
use crate::numbers::{binomial, double_factorial, pow3, q_pow, q_ratio, q_to_f64, Q};
use crate::{Error, Result};
use num_traits::ToPrimitive;

/// Caps for the dense decorated maps: output dimension `2^{d-1}` and each
/// decoration round touches every leg.
pub const DENSE_CAP_D: u32 = 7;
pub const DENSE_CAP_N: u32 = 4;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn check_caps(d: u32, n: u32) -> Result<()> {
    if !(1..=DENSE_CAP_D).contains(&d) {
        return Err(Error::Resource(format!(
            "dense transfer maps capped at d <= {DENSE_CAP_D}, got {d}"
        )));
    }
    if n > DENSE_CAP_N {
        return Err(Error::Resource(format!(
            "dense transfer maps capped at n <= {DENSE_CAP_N}, got {n}"
        )));
    }
    Ok(())
}

/// Single-site transfer map `E(B) = (2/3) tr(B) 1 - B/3`.
pub fn apply_single_site(b: &CMat) -> CMat {
    let tr = b.trace();
    let mut out = b.scale(c(-1.0 / 3.0));
    for i in 0..2 {
        out[(i, i)] += tr * c(2.0 / 3.0);
    }
    out
}

/// Applies the single-site map on leg `t` (0-based) of an `m`-leg matrix.
pub fn apply_e_on_leg(x: &CMat, t: usize, m: usize) -> CMat {
    let dim = 1usize << m;
    assert_eq!(x.rows(), dim);
    let bit = m - 1 - t;
    let mut out = x.scale(c(-1.0 / 3.0));
    // add (2/3) * (partial trace over leg t) ⊗ identity_t: contributes to
    // every entry diagonal in leg t, for any pair of remaining indices
    for i in 0..dim {
        for j in 0..dim {
            if ((i >> bit) & 1) != ((j >> bit) & 1) {
                continue;
            }
            let i0 = i & !(1 << bit);
            let j0 = j & !(1 << bit);
            let tr = x[(i0, j0)] + x[(i0 | (1 << bit), j0 | (1 << bit))];
            out[(i, j)] += tr * c(2.0 / 3.0);
        }
    }
    out
}

/// One full decoration round: the single-site map on every leg.
pub fn apply_e_all_legs(x: &CMat, m: usize) -> CMat {
    let mut out = x.clone();
    for t in 0..m {
        out = apply_e_on_leg(&out, t, m);
    }
    out
}

/// Normalized symmetric vectors `phi_k` of `d` spin-1/2 sites with `k` up
/// spins (up is bit value 0), returned as columns `k = 0..=d`.
pub fn symmetric_vectors(d: usize) -> Vec<Vec<C64>> {
    let dim = 1usize << d;
    (0..=d)
        .map(|k| {
            let norm = q_to_f64(&crate::numbers::q_from_int(binomial(d as i64, k as i64)))
                .sqrt()
                .recip();
            (0..dim)
                .map(|b| {
                    let ups = d - (b as u32).count_ones() as usize;
                    if ups == k {
                        c(norm)
                    } else {
                        C64::ZERO
                    }
                })
                .collect()
        })
        .collect()
}

/// The singlet tensor `K = |up><down| - |down><up|`.
pub fn singlet_tensor() -> CMat {
    let mut k = CMat::zeros(2, 2);
    k[(0, 1)] = c(1.0);
    k[(1, 0)] = c(-1.0);
    k
}

/// Vertex tensors `V_k : (C^2)^{d-1} -> C^2` built from the symmetric-vector
/// recursion, as 2 x 2^{d-1} matrices.
pub fn v_tensors(d: u32) -> Vec<CMat> {
    let d = d as usize;
    let phis = symmetric_vectors(d - 1);
    let dim = 1usize << (d - 1);
    (0..=d)
        .map(|k| {
            let mut v = CMat::zeros(2, dim);
            let df = d as f64;
            if k <= d - 1 {
                let w = ((df - k as f64) / df).sqrt();
                for b in 0..dim {
                    v[(1, b)] += c(w) * phis[k][b];
                }
            }
            if k >= 1 {
                let w = (k as f64 / df).sqrt();
                for b in 0..dim {
                    v[(0, b)] += c(w) * phis[k - 1][b];
                }
            }
            v
        })
        .collect()
}

/// `W_k = K V_k`.
pub fn w_tensors(d: u32) -> Vec<CMat> {
    let k = singlet_tensor();
    v_tensors(d).into_iter().map(|v| k.mul(&v)).collect()
}

/// Right-vertex tensors `K^{(d-1)} V_k^dagger` as `2^{d-1} x 2` matrices.
pub fn tilde_w_tensors(d: u32) -> Vec<CMat> {
    let m = (d - 1) as usize;
    let k1 = singlet_tensor();
    let mut kk = CMat::identity(1);
    for _ in 0..m {
        kk = kk.kron(&k1);
    }
    v_tensors(d)
        .into_iter()
        .map(|v| kk.mul(&v.adjoint()))
        .collect()
}

/// Undecorated left vertex map: `B -> sum_k W_k^dagger B W_k`.
pub fn el0_apply(d: u32, b: &CMat) -> CMat {
    let dim = 1usize << (d - 1) as usize;
    let mut out = CMat::zeros(dim, dim);
    for w in w_tensors(d) {
        out = out.add(&w.adjoint().mul(b).mul(&w));
    }
    out
}

/// Undecorated right vertex map: `C -> sum_k Wt_k^dagger C Wt_k`.
pub fn er0_apply(d: u32, cmat: &CMat) -> CMat {
    let mut out = CMat::zeros(2, 2);
    for wt in tilde_w_tensors(d) {
        out = out.add(&wt.adjoint().mul(cmat).mul(&wt));
    }
    out
}

/// Decorated left map image `E_L^{(d,n)}(B)`.
pub fn el_apply(d: u32, n: u32, b: &CMat) -> Result<CMat> {
    check_caps(d, n)?;
    let m = (d - 1) as usize;
    let mut x = el0_apply(d, b);
    for _ in 0..n {
        x = apply_e_all_legs(&x, m);
    }
    Ok(x)
}

/// Decorated right map image `E_R^{(d,n)}(C)`: decoration acts first.
pub fn er_apply(d: u32, n: u32, cmat: &CMat) -> Result<CMat> {
    check_caps(d, n)?;
    let m = (d - 1) as usize;
    let mut x = cmat.clone();
    for _ in 0..n {
        x = apply_e_all_legs(&x, m);
    }
    Ok(er0_apply(d, &x))
}

/// Images of the Pauli basis `{1, sX, sY, sZ}` under `E_L^{(d,n)}`.
pub fn el_images(d: u32, n: u32) -> Result<[CMat; 4]> {
    let [id, sx, sy, sz] = pauli_basis();
    Ok([
        el_apply(d, n, &id)?,
        el_apply(d, n, &sx)?,
        el_apply(d, n, &sy)?,
        el_apply(d, n, &sz)?,
    ])
}

/// Choi matrix of the undecorated left map on `2^{d-1} x 2` indices.
pub fn choi_el0(d: u32) -> CMat {
    let dim = 1usize << (d - 1) as usize;
    let mut tau = CMat::zeros(2 * dim, 2 * dim);
    for i in 0..2 {
        for j in 0..2 {
            let mut eij = CMat::zeros(2, 2);
            eij[(i, j)] = c(1.0);
            let img = el0_apply(d, &eij);
            tau = tau.add(&img.kron(&eij));
        }
    }
    tau
}

/// Projector onto the symmetric subspace of `d` spin-1/2 sites, built from
/// the symmetric vectors directly (independent of the matching-operator
/// route).
pub fn psym_from_vectors(d: usize) -> CMat {
    let dim = 1usize << d;
    let mut p = CMat::zeros(dim, dim);
    for phi in symmetric_vectors(d) {
        for i in 0..dim {
            if phi[i] == C64::ZERO {
                continue;
            }
            for j in 0..dim {
                p[(i, j)] += phi[i] * phi[j].conj();
            }
        }
    }
    p
}

/// Dense reconstruction of the identity-direction image
/// `sum_r alpha^{2r}/(2r+1)!! M_r` over `m` legs, with `alpha = 2(-1/3)^n`.
pub fn v_rho_cmat(m: usize, n: u32) -> Result<CMat> {
    let alpha = 2.0 * (-1.0f64 / 3.0).powi(n as i32);
    let dim = 1usize << m;
    let mut out = CMat::zeros(dim, dim);
    for r in 0..=m / 2 {
        let coeff = alpha.powi(2 * r as i32)
            / q_to_f64(&crate::numbers::q_from_int(double_factorial(2 * r as i64 + 1)));
        let mr = CMat::from_scaled(&matching_operator_dense(m, r)?);
        out = out.add(&mr.scale(c(coeff)));
    }
    Ok(out)
}

/// Dense reconstruction of the spin-direction image
/// `-sum_r sum_j alpha^{2r+1}/(2r+3)!! S^U_j (M_r on the other legs)`.
pub fn v_su_cmat(m: usize, u: usize, n: u32) -> Result<CMat> {
    let alpha = 2.0 * (-1.0f64 / 3.0).powi(n as i32);
    let dim = 1usize << m;
    let su = &spin_half_ops()[u];
    let mut out = CMat::zeros(dim, dim);
    let mut r = 0usize;
    while m >= 1 && 2 * r + 1 <= m {
        let coeff = -alpha.powi(2 * r as i32 + 1)
            / q_to_f64(&crate::numbers::q_from_int(double_factorial(2 * r as i64 + 3)));
        let mr_dense = CMat::from_scaled(&matching_operator_dense(m - 1, r)?);
        for j in 0..m {
            let rest: Vec<usize> = (0..m).filter(|&t| t != j).collect();
            let term = embed_on_sites(su, &[j], m).mul(&embed_on_sites(&mr_dense, &rest, m));
            out = out.add(&term.scale(c(coeff)));
        }
        r += 1;
    }
    Ok(out)
}

/// Exact rational scale `(d+1)/2^{d-1}` as an `f64`.
pub fn transfer_scale_f64(d: u32) -> f64 {
    q_to_f64(&crate::transfer::transfer_scale(d))
}

/// Largest singular value (and the full set) of a map given by its images of
/// the HS-orthonormalized Pauli basis.
pub fn singular_values_from_images(images: &[CMat; 4]) -> Vec<f64> {
    // inputs A/sqrt(2) are orthonormal, so the Gram matrix of the normalized
    // images has the squared singular values as eigenvalues
    let mut gram = nalgebra::DMatrix::<f64>::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            gram[(i, j)] = (images[i].hs_inner(&images[j]) / c(2.0)).re;
        }
    }
    let eig = nalgebra::SymmetricEigen::new(gram);
    let mut svals: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .collect();
    svals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    svals
}

/// Singular values of `E^n - |1><rho|` (the deviation of the decorated chain
/// map from its fixed point), via its 4x4 matrix on the orthonormal basis.
pub fn chain_deviation_svals(n: u32) -> Vec<f64> {
    let basis = pauli_basis();
    let rho_overlap = |b: &CMat| b.trace() / c(2.0);
    let images: Vec<CMat> = basis
        .iter()
        .map(|b| {
            let mut x = b.clone();
            for _ in 0..n {
                x = apply_single_site(&x);
            }
            // subtract |1><rho| b = tr(rho b) * 1
            let mut fixed = CMat::identity(2).scale(rho_overlap(b));
            fixed = x.sub(&fixed);
            fixed
        })
        .collect();
    let images: [CMat; 4] = [
        images[0].clone(),
        images[1].clone(),
        images[2].clone(),
        images[3].clone(),
    ];
    singular_values_from_images(&images)
}

/// Ratio `|T(A)|_op / |A|_op` of the chain deviation map on a sample matrix.
pub fn chain_deviation_op_ratio(n: u32, a: &CMat) -> f64 {
    let mut x = a.clone();
    for _ in 0..n {
        x = apply_single_site(&x);
    }
    let fixed = CMat::identity(2).scale(a.trace() / c(2.0));
    x.sub(&fixed).op_norm_2x2() / a.op_norm_2x2()
}

/// `(q_L, |E_L|_inf)` of the dense decorated map: minimal eigenvalue of the
/// identity image and the largest singular value.
pub fn dense_ql_and_norm(d: u32, n: u32) -> Result<(f64, f64)> {
    let images = el_images(d, n)?;
    let dim = images[0].rows();
    let mut h = nalgebra::DMatrix::<f64>::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            h[(i, j)] = images[0][(i, j)].re;
        }
    }
    let eig = nalgebra::SymmetricEigen::new(h);
    let ql = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let svals = singular_values_from_images(&images);
    Ok((ql, svals[0]))
}

/// Converts an exact coefficient vector into the dense commutant element it
/// represents, over `m` legs.
pub fn coeff_vector_to_cmat(v: &crate::coeff::CoeffVector) -> Result<CMat> {
    let m = v.ground_set_size();
    let dim = 1usize << m;
    let mut out = CMat::zeros(dim, dim);
    for (r, coeff) in v.coeffs().iter().enumerate() {
        let mr = CMat::from_scaled(&matching_operator_dense(m, r)?);
        out = out.add(&mr.scale(q_to_c(coeff)));
    }
    Ok(out)
}

/// `3^{-n}` as `f64`, for tolerance-based comparisons.
pub fn rate_f64(n: u32) -> f64 {
    pow3(-i64::from(n)).to_f64().unwrap()
}

/// `alpha_n^2/4 = 9^{-n}` as exact rational; kept here so dense tests share
/// one definition of the decay parameter.
pub fn alpha_sq_quarter(n: u32) -> Q {
    q_pow(&q_ratio(1, 9), i64::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-10;

    #[test]
    fn single_site_fixed_point_and_decay() {
        let [id, _, _, sz] = pauli_basis();
        assert!(apply_single_site(&id).max_abs_diff(&id) < 1e-15);
        let img = apply_single_site(&sz);
        assert!(img.max_abs_diff(&sz.scale(c(-1.0 / 3.0))) < 1e-15);
    }

    #[test]
    fn w_tensor_completeness() {
        // sum_k W_k W_k^dagger = (d+1)/2 * identity
        for d in 1..=8u32 {
            let mut acc = CMat::zeros(2, 2);
            for w in w_tensors(d) {
                acc = acc.add(&w.mul(&w.adjoint()));
            }
            let expect = CMat::identity(2).scale(c((d as f64 + 1.0) / 2.0));
            assert!(acc.max_abs_diff(&expect) < TOL, "d={d}");
        }
    }

    #[test]
    fn symmetric_vectors_are_normalized() {
        for d in 1..=8usize {
            for phi in symmetric_vectors(d) {
                let norm: f64 = phi.iter().map(|z| z.norm_sqr()).sum();
                assert!((norm - 1.0).abs() < 1e-13, "d={d}");
            }
        }
    }

    #[test]
    fn el_d2_is_scaled_single_site() {
        for b in pauli_basis() {
            let lhs = el0_apply(2, &b);
            let rhs = apply_single_site(&b).scale(c(1.5));
            assert!(lhs.max_abs_diff(&rhs) < 1e-14);
        }
    }

    #[test]
    fn el_images_match_exact_reconstruction() {
        for d in 2..=5u32 {
            for n in 0..=1u32 {
                let m = (d - 1) as usize;
                let scale = c(transfer_scale_f64(d));
                let images = el_images(d, n).unwrap();
                let pred0 = v_rho_cmat(m, n).unwrap().scale(scale);
                assert!(images[0].max_abs_diff(&pred0) < TOL, "d={d} n={n} rho");
                for u in 0..3 {
                    let pred = v_su_cmat(m, u, n).unwrap().scale(scale);
                    assert!(
                        images[u + 1].max_abs_diff(&pred) < TOL,
                        "d={d} n={n} u={u}"
                    );
                }
            }
        }
    }

    #[test]
    fn er_is_hs_adjoint_of_el() {
        for d in 2..=4u32 {
            for n in 0..=1u32 {
                let dim = 1usize << (d - 1) as usize;
                // <E_L(B), C> = <B, E_R(C)> over basis matrices
                for bi in 0..4 {
                    let b = &pauli_basis()[bi];
                    for p in 0..dim.min(4) {
                        let mut cmat = CMat::zeros(dim, dim);
                        cmat[(p, (p + 1) % dim)] = c(1.0);
                        let lhs = el_apply(d, n, b).unwrap().hs_inner(&cmat);
                        let rhs = b.hs_inner(&er_apply(d, n, &cmat).unwrap());
                        assert!((lhs - rhs).norm() < TOL, "d={d} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn choi_matches_twisted_symmetric_projector() {
        for d in 2..=5u32 {
            let tau = choi_el0(d);
            let dim = 1usize << (d - 1) as usize;
            let k = singlet_tensor();
            let ik = CMat::identity(dim).kron(&k);
            let rhs = ik.mul(&psym_from_vectors(d as usize)).mul(&ik.adjoint());
            assert!(tau.max_abs_diff(&rhs) < TOL, "d={d}");
        }
    }

    #[test]
    fn chain_deviation_rate() {
        for n in 0..=6u32 {
            let svals = chain_deviation_svals(n);
            assert!((svals[0] - rate_f64(n)).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn dense_ql_matches_exact_small() {
        for (d, n) in [(3u32, 1u32), (4, 1), (2, 2)] {
            let (ql, elinf) = dense_ql_and_norm(d, n).unwrap();
            let (ql_exact, _) = crate::transfer::ql_exact(d, n).unwrap();
            let (el_sq, _) = crate::transfer::el_inf_norm_sq(d, n).unwrap();
            assert!((ql - q_to_f64(&ql_exact)).abs() < TOL, "d={d} n={n}");
            assert!(
                (elinf - q_to_f64(&el_sq).sqrt()).abs() < TOL,
                "d={d} n={n}"
            );
        }
    }

    #[test]
    fn caps_enforced() {
        assert!(el_images(8, 0).is_err());
        assert!(el_images(3, 5).is_err());
        assert!(el_images(0, 0).is_err());
    }
}
