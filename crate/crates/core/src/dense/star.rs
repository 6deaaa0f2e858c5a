//! Finite star Hamiltonians and their low-lying spectrum.
//!
//! The subvolume around a degree-`d` vertex carries a spin-`d/2` center and
//! `d` legs of `n` spin-1 sites; every edge contributes the projector onto
//! the maximal total spin of its pair. The Hamiltonian is never
//! materialized: terms are applied block-wise in a matrix-free matvec, and
//! the spectrum comes from a dense symmetric eigensolver for small
//! dimensions or Lanczos with full reorthogonalization above that.
//!
//! Ground energy 0 is frustration-freeness; the kernel is detected
//! numerically (threshold [`KERNEL_THRESHOLD`]) rather than assumed.

use crate::{Error, Result};
use nalgebra::DMatrix;

/// Dimension cap for star Hamiltonians.
pub const STAR_DIM_CAP: usize = 50_000;
/// Below this dimension a dense symmetric eigensolver is used.
const DENSE_EIG_CAP: usize = 1_500;
/// Eigenvalues below this threshold count as kernel.
pub const KERNEL_THRESHOLD: f64 = 1e-9;
/// Residual tolerance for Lanczos Ritz pairs.
pub const LANCZOS_TOL: f64 = 1e-8;

/// Spin matrices `(S^z, S^+)` for a site of spin `twice/2`.
fn ladder_ops(twice: u32) -> (DMatrix<f64>, DMatrix<f64>) {
    let dim = twice as usize + 1;
    let s = twice as f64 / 2.0;
    let mut sz = DMatrix::zeros(dim, dim);
    let mut sp = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        let m = s - k as f64;
        sz[(k, k)] = m;
        if k > 0 {
            // S^+ |s, m> = sqrt(s(s+1) - m(m+1)) |s, m+1>
            sp[(k - 1, k)] = (s * (s + 1.0) - m * (m + 1.0)).sqrt();
        }
    }
    (sz, sp)
}

/// Heisenberg coupling `S_a . S_b` on a pair of arbitrary spins, which is
/// real: `Sz Sz + (S+ S- + S- S+)/2`.
fn pair_coupling(twice_a: u32, twice_b: u32) -> DMatrix<f64> {
    let (za, pa) = ladder_ops(twice_a);
    let (zb, pb) = ladder_ops(twice_b);
    let ma = pa.transpose();
    let mb = pb.transpose();
    za.kronecker(&zb) + (pa.kronecker(&mb) + ma.kronecker(&pb)) * 0.5
}

/// Orthogonal projector onto the maximal-total-spin subspace of a pair,
/// built as the top spectral block of the pair Casimir by exact Lagrange
/// interpolation over the known eigenvalues `j(j+1)`.
pub fn edge_projector(twice_a: u32, twice_b: u32) -> DMatrix<f64> {
    let dim = (twice_a as usize + 1) * (twice_b as usize + 1);
    let sa = twice_a as f64 / 2.0;
    let sb = twice_b as f64 / 2.0;
    let coupling = pair_coupling(twice_a, twice_b);
    let casimir =
        coupling * 2.0 + DMatrix::identity(dim, dim) * (sa * (sa + 1.0) + sb * (sb + 1.0));
    let j_max = sa + sb;
    let j_min = (sa - sb).abs();
    let mut proj = DMatrix::identity(dim, dim);
    let top = j_max * (j_max + 1.0);
    let mut j = j_min;
    while j < j_max - 0.25 {
        let ev = j * (j + 1.0);
        proj = proj * (&casimir - DMatrix::identity(dim, dim) * ev) / (top - ev);
        j += 1.0;
    }
    proj
}

/// A two-site interaction term in a mixed-radix product space.
struct Term {
    stride_a: usize,
    stride_b: usize,
    dim_a: usize,
    dim_b: usize,
    /// Sparse columns of the block operator: `cols[col] = [(row, value)]`.
    cols: Vec<Vec<(usize, f64)>>,
}

/// A sum of two-site terms acting on a product of finite-dimensional sites.
pub struct SparseHamiltonian {
    dim: usize,
    terms: Vec<Term>,
}

impl SparseHamiltonian {
    /// Builds from per-site doubled spins and edges; every edge projects
    /// onto the maximal total spin of its endpoints.
    pub fn new(twice_spins: &[u32], edges: &[(usize, usize)]) -> Result<Self> {
        let dims: Vec<usize> = twice_spins.iter().map(|&t| t as usize + 1).collect();
        let mut dim = 1usize;
        for &d in &dims {
            dim = dim
                .checked_mul(d)
                .filter(|&x| x <= STAR_DIM_CAP)
                .ok_or_else(|| {
                    Error::Resource(format!(
                        "Hamiltonian dimension exceeds the cap of {STAR_DIM_CAP}"
                    ))
                })?;
        }
        let mut strides = vec![1usize; dims.len()];
        for t in (0..dims.len().saturating_sub(1)).rev() {
            strides[t] = strides[t + 1] * dims[t + 1];
        }
        let mut terms = Vec::new();
        for &(a, b) in edges {
            if a == b || a >= dims.len() || b >= dims.len() {
                return Err(Error::Domain(format!("bad edge ({a},{b})")));
            }
            let block = edge_projector(twice_spins[a], twice_spins[b]);
            let (da, db) = (dims[a], dims[b]);
            let mut cols = vec![Vec::new(); da * db];
            for col in 0..da * db {
                for row in 0..da * db {
                    let v = block[(row, col)];
                    if v.abs() > 1e-14 {
                        cols[col].push((row, v));
                    }
                }
            }
            terms.push(Term {
                stride_a: strides[a],
                stride_b: strides[b],
                dim_a: da,
                dim_b: db,
                cols,
            });
        }
        Ok(SparseHamiltonian { dim, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matvec(&self, v: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for term in &self.terms {
            let (sa, sb) = (term.stride_a, term.stride_b);
            let (da, db) = (term.dim_a, term.dim_b);
            for (x, &vx) in v.iter().enumerate() {
                if vx == 0.0 {
                    continue;
                }
                let ia = (x / sa) % da;
                let ib = (x / sb) % db;
                let base = x - ia * sa - ib * sb;
                for &(row, w) in &term.cols[ia * db + ib] {
                    let (ra, rb) = (row / db, row % db);
                    out[base + ra * sa + rb * sb] += w * vx;
                }
            }
        }
    }

    fn to_dense(&self) -> DMatrix<f64> {
        let mut h = DMatrix::zeros(self.dim, self.dim);
        let mut v = vec![0.0; self.dim];
        let mut col = vec![0.0; self.dim];
        for j in 0..self.dim {
            v[j] = 1.0;
            self.matvec(&v, &mut col);
            v[j] = 0.0;
            for i in 0..self.dim {
                h[(i, j)] = col[i];
            }
        }
        h
    }
}

/// Low-lying spectrum of a frustration-free Hamiltonian.
#[derive(Debug, Clone)]
pub struct StarSpectrum {
    pub dim: usize,
    /// Smallest eigenvalue; zero for a frustration-free model.
    pub ground_energy: f64,
    /// Smallest eigenvalue above the kernel threshold.
    pub gap: f64,
    /// Largest eigenvalue.
    pub norm: f64,
    /// Kernel dimension, available only on the dense path.
    pub kernel_dim: Option<usize>,
}

/// Spectrum of the star subvolume: center of degree `d`, `d` legs of `n`
/// spin-1 sites.
pub fn star_hamiltonian(d: u32, n: u32) -> Result<StarSpectrum> {
    if d < 1 {
        return Err(Error::Domain("star needs degree >= 1".into()));
    }
    let legs = (d * n) as usize;
    let mut spins = vec![d];
    spins.extend(std::iter::repeat(2).take(legs));
    let mut edges = Vec::new();
    for leg in 0..d as usize {
        let first = 1 + leg * n as usize;
        if n > 0 {
            edges.push((0, first));
            for k in 0..(n as usize - 1) {
                edges.push((first + k, first + k + 1));
            }
        }
    }
    if n == 0 {
        return Err(Error::Domain(
            "undecorated star has no edges inside its subvolume".into(),
        ));
    }
    let h = SparseHamiltonian::new(&spins, &edges)?;
    spectrum(&h)
}

/// Spectrum of an arbitrary maximal-spin-projector Hamiltonian.
pub fn spectrum(h: &SparseHamiltonian) -> Result<StarSpectrum> {
    if h.dim <= DENSE_EIG_CAP {
        let dense = h.to_dense();
        let eig = dense.symmetric_eigen();
        let mut evs: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
        evs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let kernel_dim = evs.iter().take_while(|&&e| e.abs() < KERNEL_THRESHOLD).count();
        let gap = evs
            .iter()
            .find(|&&e| e >= KERNEL_THRESHOLD)
            .copied()
            .ok_or_else(|| Error::Numerical("no eigenvalue above the kernel".into()))?;
        Ok(StarSpectrum {
            dim: h.dim,
            ground_energy: evs[0],
            gap,
            norm: *evs.last().unwrap(),
            kernel_dim: Some(kernel_dim),
        })
    } else {
        lanczos_spectrum(h)
    }
}

/// Lanczos with full reorthogonalization; converges the extreme Ritz values
/// and the lowest value above the kernel.
fn lanczos_spectrum(h: &SparseHamiltonian) -> Result<StarSpectrum> {
    let dim = h.dim;
    let max_iter = 400.min(dim);
    // deterministic start vector
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut rand = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let mut v: Vec<f64> = (0..dim).map(|_| rand()).collect();
    normalize(&mut v);
    let mut basis: Vec<Vec<f64>> = vec![v.clone()];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; dim];
    for k in 0..max_iter {
        h.matvec(&basis[k], &mut w);
        let alpha = dot(&w, &basis[k]);
        alphas.push(alpha);
        // full reorthogonalization (twice) subsumes the three-term recurrence
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                axpy(&mut w, -c, b);
            }
        }
        let beta = norm(&w);
        let exhausted = k + 1 == max_iter || beta < 1e-13;
        if exhausted || (k + 1) % 25 == 0 {
            if let Some(result) = ritz_outcome(h.dim, &alphas, &betas, beta)? {
                return Ok(result);
            }
            if exhausted {
                break;
            }
        }
        betas.push(beta);
        let next: Vec<f64> = w.iter().map(|x| x / beta).collect();
        basis.push(next);
    }
    Err(Error::Numerical(format!(
        "Lanczos did not converge within {max_iter} iterations (dim {dim})"
    )))
}

/// Evaluates the current tridiagonal's Ritz values; returns a spectrum once
/// the extremes and the first value above the kernel are converged.
fn ritz_outcome(
    dim: usize,
    alphas: &[f64],
    betas: &[f64],
    last_beta: f64,
) -> Result<Option<StarSpectrum>> {
    let k = alphas.len();
    if k < 3 {
        return Ok(None);
    }
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = t.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..k)
        .map(|i| {
            let residual = (last_beta * eig.eigenvectors[(k - 1, i)]).abs();
            (eig.eigenvalues[i], residual)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let ground = pairs[0];
    let first_excited = pairs.iter().find(|(e, _)| *e >= KERNEL_THRESHOLD);
    let top = pairs[pairs.len() - 1];
    if let Some(&gap_pair) = first_excited {
        let converged = ground.1 < LANCZOS_TOL && gap_pair.1 < LANCZOS_TOL && top.1 < LANCZOS_TOL;
        if converged {
            return Ok(Some(StarSpectrum {
                dim,
                ground_energy: ground.0,
                gap: gap_pair.0,
                norm: top.0,
                kernel_dim: None,
            }));
        }
    }
    Ok(None)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &mut [f64]) {
    let n = norm(a);
    for x in a.iter_mut() {
        *x /= n;
    }
}

fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    if alpha == 0.0 {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Ground-space dimension of the star via the dense path, when feasible.
pub fn star_kernel_dim(d: u32, n: u32) -> Result<usize> {
    let s = star_hamiltonian(d, n)?;
    s.kernel_dim.ok_or_else(|| {
        Error::Resource("kernel dimension needs the dense eigensolver".into())
    })
}
