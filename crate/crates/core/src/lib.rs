//! Certified spectral-gap engine for AKLT models on decorated graphs.
//!
//! The decorated model replaces every edge of a simple graph `G` with a chain
//! of `n` spin-1 sites; each original vertex of degree `d` carries a spin-d/2
//! particle and every edge interaction projects onto the maximal total spin of
//! the pair. Whether the family of finite-volume Hamiltonians is uniformly
//! gapped reduces to transfer-operator quantities of the quasi one-dimensional
//! subgraphs around a single edge, and those quantities are computable in
//! closed form through the commutant algebra of the Casimir operator.
//!
//! The crate is organized around that reduction:
//!
//! * [`combinatorics`] — matchings of an index set, their partition counts and
//!   even-cycle permutation statistics; the ground truth for coefficients.
//! * [`coeff`] — the commutant of the Casimir operator on `m` spin-1/2 sites
//!   in the matching-operator basis: tridiagonal multiplication matrix, sector
//!   spectra and projector coefficients, all in exact rational arithmetic.
//! * [`dense`] — brute-force dense operators (spin matrices, matching
//!   operators, transfer maps, star Hamiltonians) used as an independent
//!   oracle for every closed form.
//! * [`transfer`] — exact decorated-transfer-operator quantities for arbitrary
//!   vertex degree: minimal eigenvalue of `Q_L`, squared Schatten-∞ norm, and
//!   their certified closed-form bounds.
//! * [`interval`] — outward-rounded interval arithmetic over MPFR floats for
//!   the irrational bound expressions.
//! * [`certify`] — assembly of the gap certificate: per-edge bounds, the
//!   decoration threshold `n(d)`, and the comparison against the older
//!   operator-norm bounds.
//! * [`report`] — stable structured-text and CSV serialization.
//! * [`verify`] — the named oracle/property suite run by the CLI.

pub mod certify;
pub mod coeff;
pub mod combinatorics;
pub mod dense;
pub mod interval;
pub mod numbers;
pub mod report;
pub mod transfer;
pub mod verify;

use thiserror::Error;

/// Errors shared by all modules of the engine.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Input admissible in principle but beyond a resource cap.
    #[error("resource error: {0}")]
    Resource(String),
    /// A numerical routine failed to converge or lost accuracy.
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use numbers::Q;

/// Total spin label stored as the doubled value `2j`, so half-integer spins
/// stay exact and orderable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Spin {
    twice: u32,
}

impl Spin {
    pub fn from_twice(twice: u32) -> Self {
        Spin { twice }
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    /// `j(j+1)` as an exact rational.
    pub fn casimir_value(self) -> Q {
        let t = i64::from(self.twice);
        numbers::q_ratio(t * (t + 2), 4)
    }

    /// `j` as a rational.
    pub fn value(self) -> Q {
        numbers::q_ratio(i64::from(self.twice), 2)
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }
}

impl std::fmt::Display for Spin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// The spin sectors `J_m` of `m` coupled spin-1/2 sites: `j = j_0 + k` for
/// `0 <= k <= floor(m/2)`, with `j_0 = 0` for even `m` and `1/2` otherwise.
pub fn sector_spins(m: usize) -> Vec<Spin> {
    let parity = (m % 2) as u32;
    (0..=(m / 2) as u32)
        .map(|k| Spin::from_twice(parity + 2 * k))
        .collect()
}
