//! Homological constructions over one Ore step `E = A[x; σ, δ]` and the
//! bimodule resolution of a whole tower, with the Ext computation on top.

pub mod bar;
pub mod cochain;
pub mod ext;
pub mod resolution;
pub mod ses;
pub mod tensor;

use thiserror::Error;

use crate::ncpoly::Monomial;
use crate::ore::{OreTower, TowerError};

pub use ext::{ext_top, ExtResult};
pub use resolution::{build_resolution, verify_resolution, FreeBimoduleComplex};
pub use tensor::{Pair, Tensor};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum HomologyError {
    #[error("value needed at total degree {needed} but the cochain is known only up to {cap}")]
    CapExceeded { needed: u32, cap: u32 },
    #[error("expected arity {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("no lifting exists: {0}")]
    LiftingFailed(String),
    #[error("top cohomology is not free of rank one: {0}")]
    NotRankOne(String),
    #[error("lower cohomology does not vanish: {0}")]
    VanishingFails(String),
    #[error("degree cap {cap} is below the required degree {needed}")]
    CapTooSmall { cap: u32, needed: u32 },
    #[error("the Ext engine needs a graded tower")]
    Ungraded,
    #[error("the tower must have at least one level")]
    EmptyTower,
    #[error(transparent)]
    Tower(#[from] TowerError),
}

/// Deliberate corruptions used to confirm that each verifier can fail.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Perturbation {
    /// Flip the sign of the second term of ρ.
    pub rho_sign: bool,
    /// Drop the correction sum from f₃.
    pub f3_sum: bool,
    /// Flip the sign of the δσ⁻¹ sum in the bar lifting.
    pub psi_delta_sign: bool,
}

/// Monomials on the generators below `level` of weighted degree at most `cap`.
pub(crate) fn base_monomials(t: &OreTower, level: usize, cap: u32) -> Vec<Monomial> {
    t.basis(level, cap, true).as_ref().clone()
}

/// All `n`-tuples of base monomials with total weighted degree at most `cap`.
pub(crate) fn base_tuples(t: &OreTower, level: usize, n: usize, cap: u32) -> Vec<Vec<Monomial>> {
    let monos = base_monomials(t, level, cap);
    let mut out: Vec<(Vec<Monomial>, u32)> = vec![(Vec::new(), 0)];
    for _ in 0..n {
        let mut next = Vec::new();
        for (tuple, d) in &out {
            for m in &monos {
                let e = d + t.degree_of(m);
                if e <= cap {
                    let mut t2 = tuple.clone();
                    t2.push(m.clone());
                    next.push((t2, e));
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|(t, _)| t).collect()
}

/// Index of the top level, i.e. the Ore variable `x` of the last step.
pub(crate) fn top(t: &OreTower) -> Result<usize, HomologyError> {
    t.num_gens().checked_sub(1).ok_or(HomologyError::EmptyTower)
}
