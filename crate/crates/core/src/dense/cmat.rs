//! Dense complex matrices for the valence-bond transfer maps.
//!
//! The exact dyadic path covers everything rational; the tensors of the
//! ground-state representation carry square roots of binomials, so this side
//! of the oracle works in `f64` and is compared at explicit tolerances.

use super::exact::ScaledMat;
use crate::numbers::q_to_f64;
use num_complex::Complex64;

pub type C64 = Complex64;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Row-major rectangular complex matrix.
#[derive(Debug, Clone)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![C64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_scaled(s: &ScaledMat) -> Self {
        let dim = s.dim();
        let scale = 0.5f64.powi(s.pow2() as i32);
        CMat::from_fn(dim, dim, |i, j| c(s.int_at(i, j) as f64 * scale))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, o: &CMat) -> CMat {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = CMat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::ZERO {
                    continue;
                }
                for j in 0..o.cols {
                    out[(i, j)] += a * o[(k, j)];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn add(&self, o: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&o.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, o: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&o.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: C64) -> CMat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn kron(&self, o: &CMat) -> CMat {
        let mut out = CMat::zeros(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == C64::ZERO {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        out[(i * o.rows + k, j * o.cols + l)] = a * o[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Hilbert-Schmidt inner product `tr(self^dagger o)`.
    pub fn hs_inner(&self, o: &CMat) -> C64 {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        self.data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn hs_norm(&self) -> f64 {
        self.hs_inner(self).re.sqrt()
    }

    pub fn max_abs_diff(&self, o: &CMat) -> f64 {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        self.data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Largest singular value of a 2x2 matrix, in closed form.
    pub fn op_norm_2x2(&self) -> f64 {
        assert_eq!((self.rows, self.cols), (2, 2));
        let g = self.adjoint().mul(self);
        let tr = g.trace().re;
        let det = (g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)]).re;
        let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
        (tr / 2.0 + disc).max(0.0).sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// The Pauli basis `{1, sigma^X, sigma^Y, sigma^Z}` (spin-up is index 0).
pub fn pauli_basis() -> [CMat; 4] {
    let id = CMat::identity(2);
    let mut sx = CMat::zeros(2, 2);
    sx[(0, 1)] = c(1.0);
    sx[(1, 0)] = c(1.0);
    let mut sy = CMat::zeros(2, 2);
    sy[(0, 1)] = C64::new(0.0, -1.0);
    sy[(1, 0)] = C64::new(0.0, 1.0);
    let mut sz = CMat::zeros(2, 2);
    sz[(0, 0)] = c(1.0);
    sz[(1, 1)] = c(-1.0);
    [id, sx, sy, sz]
}

/// Spin-1/2 operators `S^U = sigma^U / 2` for `U = X, Y, Z`.
pub fn spin_half_ops() -> [CMat; 3] {
    let [_, sx, sy, sz] = pauli_basis();
    [sx.scale(c(0.5)), sy.scale(c(0.5)), sz.scale(c(0.5))]
}

/// Embeds an operator acting on the listed sites (given order, most
/// significant first) into the `m`-site space; sites are 0-based.
pub fn embed_on_sites(op: &CMat, sites: &[usize], m: usize) -> CMat {
    let dim = 1usize << m;
    let k = sites.len();
    assert_eq!(op.rows(), 1 << k);
    let rest_mask: usize = (0..m)
        .filter(|t| !sites.contains(t))
        .map(|t| 1usize << (m - 1 - t))
        .sum();
    let sub_index = |b: usize| -> usize {
        sites
            .iter()
            .enumerate()
            .map(|(pos, &t)| ((b >> (m - 1 - t)) & 1) << (k - 1 - pos))
            .sum()
    };
    CMat::from_fn(dim, dim, |i, j| {
        if (i & rest_mask) != (j & rest_mask) {
            C64::ZERO
        } else {
            op[(sub_index(i), sub_index(j))]
        }
    })
}

pub fn q_to_c(x: &crate::numbers::Q) -> C64 {
    c(q_to_f64(x))
}
