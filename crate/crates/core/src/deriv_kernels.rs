//! Polynomial kernels of order `(L, j)` on `[-1, 1]` for estimating `j`-th
//! derivatives.
//!
//! A kernel `K_j` of order `(L, j)` has moments `∫ t^l K_j(t) dt = 0` for
//! `l < L, l ≠ j` and `(-1)^j j!` for `l = j`. The minimal-degree solution is
//! unique; expanding it in Legendre polynomials `P_k` gives the closed form
//!
//! ```text
//! K_j(t) = (-1)^j j! Σ_{k=j}^{L-1} (2k+1)/2 · [t^j]P_k · P_k(t)
//! ```
//!
//! because `⟨K_j, P_k⟩` only sees the `t^j` moment.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::exppoly::factorial;
use crate::poly::Poly;

/// Relative slack on the kernel support edge.
pub const SUPPORT_SLACK: f64 = 1e-9;

/// Absolute tolerance on every moment condition.
pub const MOMENT_TOL: f64 = 1e-10;

/// Moment tolerance for the direct monomial solve.
const MONOMIAL_MOMENT_TOL: f64 = 1e-8;

/// Reciprocal condition estimate below which the monomial moment solve is
/// rejected.
const MIN_RCOND: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MomentError {
    #[error("derivative order {j} must be below kernel order {order}")]
    BadOrder { order: usize, j: usize },
    #[error("moment system for order ({order}, {j}) is singular or ill-conditioned")]
    SingularMomentSystem { order: usize, j: usize },
    #[error("moment {l} is {found}, expected {expected}")]
    MomentViolation { l: usize, found: f64, expected: f64 },
}

/// Polynomial kernel of order `(L, j)` supported on `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivKernel {
    j: usize,
    order: usize,
    coeffs: Poly,
    l2norm_sq: f64,
}

/// `∫_{-1}^{1} t^p dt`.
fn monomial_integral(p: usize) -> f64 {
    if p % 2 == 1 {
        0.0
    } else {
        2.0 / (p as f64 + 1.0)
    }
}

/// Monomial coefficients of the Legendre polynomials `P_0..P_{count-1}`.
pub fn legendre_polynomials(count: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(count);
    for k in 0..count {
        let next = match k {
            0 => vec![1.0],
            1 => vec![0.0, 1.0],
            _ => {
                // k P_k = (2k-1) t P_{k-1} - (k-1) P_{k-2}
                let kf = k as f64;
                let mut c = vec![0.0; k + 1];
                for (i, &a) in out[k - 1].iter().enumerate() {
                    c[i + 1] += (2.0 * kf - 1.0) * a / kf;
                }
                for (i, &a) in out[k - 2].iter().enumerate() {
                    c[i] -= (kf - 1.0) * a / kf;
                }
                c
            }
        };
        out.push(next);
    }
    out
}

/// Target moment `(-1)^j j!` at `l = j`, zero otherwise.
pub fn target_moment(j: usize, l: usize) -> f64 {
    if l == j {
        let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * factorial(j)
    } else {
        0.0
    }
}

impl DerivKernel {
    /// `build_kernel(L, j)`: minimal-degree kernel via the Legendre basis.
    pub fn build(order: usize, j: usize) -> Result<Self, MomentError> {
        if j >= order {
            return Err(MomentError::BadOrder { order, j });
        }
        let legendre = legendre_polynomials(order);
        let scale = target_moment(j, j);
        let mut coeffs = vec![0.0; order];
        for (k, pk) in legendre.iter().enumerate().skip(j) {
            let weight = scale * (2.0 * k as f64 + 1.0) / 2.0 * pk[j];
            if weight == 0.0 {
                continue;
            }
            for (i, &c) in pk.iter().enumerate() {
                coeffs[i] += weight * c;
            }
        }
        Self::assemble(order, j, Poly::new(coeffs), MOMENT_TOL)
    }

    /// Solves the `L × L` monomial moment system directly. Used as an
    /// independent check on [`DerivKernel::build`].
    pub fn build_monomial(order: usize, j: usize) -> Result<Self, MomentError> {
        if j >= order {
            return Err(MomentError::BadOrder { order, j });
        }
        let gram = DMatrix::from_fn(order, order, |l, k| monomial_integral(l + k));
        let rhs = DVector::from_fn(order, |l, _| target_moment(j, l));
        let svd = gram.clone().svd(false, false);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        if !(smin > MIN_RCOND * smax) {
            return Err(MomentError::SingularMomentSystem { order, j });
        }
        let sol = gram
            .lu()
            .solve(&rhs)
            .ok_or(MomentError::SingularMomentSystem { order, j })?;
        // The Hilbert-like Gram matrix loses a few digits at L = 8.
        Self::assemble(
            order,
            j,
            Poly::new(sol.iter().copied().collect()),
            MONOMIAL_MOMENT_TOL,
        )
    }

    /// Wraps explicit coefficients after checking all `L` moment conditions.
    pub fn from_coeffs(order: usize, j: usize, coeffs: Vec<f64>) -> Result<Self, MomentError> {
        if j >= order {
            return Err(MomentError::BadOrder { order, j });
        }
        Self::assemble(order, j, Poly::new(coeffs), MOMENT_TOL)
    }

    fn assemble(order: usize, j: usize, coeffs: Poly, tol: f64) -> Result<Self, MomentError> {
        let mut kernel = DerivKernel {
            j,
            order,
            coeffs,
            l2norm_sq: 0.0,
        };
        kernel.l2norm_sq = kernel_l2_norm_sq(&kernel);
        for l in 0..order {
            let found = kernel_moment(&kernel, l);
            let expected = target_moment(j, l);
            if (found - expected).abs() > tol {
                return Err(MomentError::MomentViolation { l, found, expected });
            }
        }
        Ok(kernel)
    }

    pub fn j(&self) -> usize {
        self.j
    }

    /// Kernel order `L`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &Poly {
        &self.coeffs
    }

    /// Cached `‖K_j‖² = ∫ K_j²`.
    pub fn l2norm_sq(&self) -> f64 {
        self.l2norm_sq
    }

    /// `K_j(t)`, exactly zero outside `[-1, 1]`.
    ///
    /// The support is closed up to [`SUPPORT_SLACK`], so that a design point
    /// sitting exactly one bandwidth away is counted no matter how the
    /// offset was rounded.
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        if t.abs() > 1.0 + SUPPORT_SLACK {
            0.0
        } else {
            self.coeffs.eval(t.clamp(-1.0, 1.0))
        }
    }
}

/// `∫_{-1}^{1} t^l K(t) dt` in closed form.
pub fn kernel_moment(kernel: &DerivKernel, l: usize) -> f64 {
    kernel
        .coeffs
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, &c)| c * monomial_integral(k + l))
        .sum()
}

/// `∫_{-1}^{1} K(t)² dt` in closed form.
pub fn kernel_l2_norm_sq(kernel: &DerivKernel) -> f64 {
    let c = kernel.coeffs.coeffs();
    let mut total = 0.0;
    for (a, &ca) in c.iter().enumerate() {
        for (b, &cb) in c.iter().enumerate() {
            total += ca * cb * monomial_integral(a + b);
        }
    }
    total
}

/// Kernels `K_0..K_r`, all of order `L`.
pub fn kernel_family(order: usize, r: usize) -> Result<Vec<DerivKernel>, MomentError> {
    (0..=r).map(|j| DerivKernel::build(order, j)).collect()
}

/// One row of the moment conformance table.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentCheck {
    pub order: usize,
    pub j: usize,
    pub l: usize,
    pub moment: f64,
    pub target: f64,
    pub abs_error: f64,
}

/// Moment conformance of every kernel with `L ≤ max_order`, `j < L`.
pub fn conformance_table(max_order: usize) -> Result<Vec<MomentCheck>, MomentError> {
    let mut rows = Vec::new();
    for order in 1..=max_order {
        for j in 0..order {
            let k = DerivKernel::build(order, j)?;
            for l in 0..order {
                let moment = kernel_moment(&k, l);
                let target = target_moment(j, l);
                rows.push(MomentCheck {
                    order,
                    j,
                    l,
                    moment,
                    target,
                    abs_error: (moment - target).abs(),
                });
            }
        }
    }
    Ok(rows)
}
