//! Convolution kernels with rational Laplace transforms and the explicit
//! Volterra inversion built from them.
//!
//! For `g̃(s) = P(s)/Q(s)` with `r = deg Q - deg P`, the first non-vanishing
//! derivative of `g` at zero is `g^{(r-1)}(0) = B_r = lead(P)/lead(Q)`. The
//! equation `q = g ∗ f` is then inverted by
//!
//! ```text
//! f(t) = B_r⁻¹ ( q^{(r)}(t) - Σ_{j<r} a_{0,r-j-1} q^{(j)}(t) - ∫₀ᵗ q^{(r)}(t-x) φ₁(x) dx )
//! ```
//!
//! where `a_{0,·}` and `φ₁` come from the partial-fraction expansion of
//! `φ̃(s) = (s^r g̃(s) - B_r) / (s^r g̃(s))` at `s = 0` and at the zeros of
//! `P`.

use num_complex::Complex64;
use thiserror::Error;

use crate::design::ExperimentDesign;
use crate::exppoly::{
    min_relative_separation, partial_fractions, ExpPolySum, PoleTerm, MIN_POLE_SEPARATION,
};
use crate::poly::{roots, Poly, Root, RootError};
use crate::quadrature::causal_trapezoid_convolution;

/// Roots must satisfy `Re < -LEFT_HALF_PLANE_TOL`.
pub const LEFT_HALF_PLANE_TOL: f64 = 1e-9;

/// Default sub-grid refinement for quadrature.
pub const DEFAULT_REFINE: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("degenerate kernel: deg Q = {denom:?} must exceed deg P = {numer:?}")]
    DegenerateKernel {
        numer: Option<usize>,
        denom: Option<usize>,
    },
    #[error("transform has a zero with non-negative real part at {0}")]
    NonnegativeRealPartZero(Complex64),
    #[error("transform has a pole with non-negative real part at {0}")]
    UnstableKernel(Complex64),
    #[error("poles too close for stable residue extraction (relative separation {0:e})")]
    IllConditionedRoots(f64),
    #[error("time-domain derivative g^({order})(0) = {found} disagrees with {expected}")]
    TimeDomainMismatch {
        order: usize,
        expected: f64,
        found: f64,
    },
    #[error(transparent)]
    Roots(#[from] RootError),
}

/// `r` and `B_r` of a validated kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelSummary {
    pub r: usize,
    pub b_r: f64,
}

/// A proper rational function `numer(s) / denom(s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    pub numer: Poly,
    pub denom: Poly,
}

impl RationalFunction {
    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.numer.eval_complex(s) / self.denom.eval_complex(s)
    }
}

/// Convolution kernel `g` given by its Laplace transform `P(s)/Q(s)`.
#[derive(Clone, Debug)]
pub struct RationalLaplaceKernel {
    numer: Poly,
    denom: Poly,
    r: usize,
    b_r: f64,
    zeros: Vec<Root>,
    poles: Vec<Root>,
    time: ExpPolySum,
}

impl RationalLaplaceKernel {
    /// Builds and validates a kernel from ascending coefficient lists.
    pub fn new(numer: Vec<f64>, denom: Vec<f64>) -> Result<Self, KernelError> {
        let numer = Poly::new(numer);
        let denom = Poly::new(denom);
        let (dp, dq) = (numer.degree(), denom.degree());
        let r = match (dp, dq) {
            (Some(p), Some(q)) if q > p => q - p,
            _ => {
                return Err(KernelError::DegenerateKernel {
                    numer: dp,
                    denom: dq,
                })
            }
        };
        let b_r = numer.leading() / denom.leading();

        let poles = roots(&denom)?;
        if let Some(bad) = poles.iter().find(|z| z.value.re >= -LEFT_HALF_PLANE_TOL) {
            return Err(KernelError::UnstableKernel(bad.value));
        }
        let zeros = roots(&numer)?;
        if let Some(bad) = zeros.iter().find(|z| z.value.re >= -LEFT_HALF_PLANE_TOL) {
            return Err(KernelError::NonnegativeRealPartZero(bad.value));
        }
        let sep = min_relative_separation(&poles);
        if sep < MIN_POLE_SEPARATION {
            return Err(KernelError::IllConditionedRoots(sep));
        }

        let time = ExpPolySum::new(partial_fractions(&numer, denom.leading(), &poles));
        let kernel = RationalLaplaceKernel {
            numer,
            denom,
            r,
            b_r,
            zeros,
            poles,
            time,
        };
        kernel.check_time_domain()?;
        Ok(kernel)
    }

    /// Compares `g^{(j)}(0)` from the time-domain expansion with the
    /// structural values `0` (j < r-1) and `B_r` (j = r-1).
    fn check_time_domain(&self) -> Result<(), KernelError> {
        for order in 0..self.r {
            let found = self.time.derivative_at_zero(order);
            let expected = if order + 1 == self.r { self.b_r } else { 0.0 };
            let scale: f64 = self
                .time
                .terms()
                .iter()
                .flat_map(|t| {
                    let p = t.pole.norm().max(1.0);
                    t.coeffs
                        .iter()
                        .map(move |c| c.norm() * p.powi(order as i32))
                })
                .sum::<f64>()
                .max(self.b_r.abs());
            if (found - expected).abs() > 1e-8 * scale {
                return Err(KernelError::TimeDomainMismatch {
                    order,
                    expected,
                    found,
                });
            }
        }
        Ok(())
    }

    pub fn numer(&self) -> &Poly {
        &self.numer
    }

    pub fn denom(&self) -> &Poly {
        &self.denom
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn b_r(&self) -> f64 {
        self.b_r
    }

    pub fn summary(&self) -> KernelSummary {
        KernelSummary {
            r: self.r,
            b_r: self.b_r,
        }
    }

    /// Distinct zeros of `g̃` (roots of `P`) with multiplicities.
    pub fn zeros(&self) -> &[Root] {
        &self.zeros
    }

    /// Distinct poles of `g̃` (roots of `Q`) with multiplicities.
    pub fn poles(&self) -> &[Root] {
        &self.poles
    }

    /// `g̃(s)`.
    pub fn transform(&self, s: Complex64) -> Complex64 {
        self.numer.eval_complex(s) / self.denom.eval_complex(s)
    }

    /// `g(t)` by inverse transform of the partial-fraction expansion.
    pub fn eval(&self, t: f64) -> f64 {
        self.time.eval(t)
    }

    pub fn time_domain(&self) -> &ExpPolySum {
        &self.time
    }

    /// `g^{(k)}` as an exponential polynomial.
    pub fn derivative(&self, k: usize) -> ExpPolySum {
        (0..k).fold(self.time.clone(), |acc, _| acc.derivative())
    }

    /// `φ̃(s) = 1 - B_r Q(s) / (s^r P(s))`.
    ///
    /// The degree-`deg Q` numerator coefficient cancels exactly by the
    /// definition of `B_r` and is dropped, so the result is proper. When `P`
    /// and `Q` are coprime no further cancellation is possible.
    pub fn phi_tilde(&self) -> RationalFunction {
        let denom = self.numer.shift_up(self.r);
        let mut top = denom.sub(&self.denom.scale(self.b_r)).coeffs().to_vec();
        top.truncate(self.denom.coeffs().len() - 1);
        RationalFunction {
            numer: Poly::new(top),
            denom,
        }
    }

    /// Partial-fraction coefficients of `φ̃`: `a_{0,·}` at the order-`r`
    /// pole at zero and `a_{l,·}` at each zero `S_l` of `g̃`.
    pub fn inversion_coefficients(&self) -> Result<InversionCoefficients, KernelError> {
        let phi = self.phi_tilde();
        let mut poles = vec![Root {
            value: Complex64::new(0.0, 0.0),
            multiplicity: self.r,
        }];
        poles.extend(self.zeros.iter().copied());
        let sep = min_relative_separation(&poles);
        if sep < MIN_POLE_SEPARATION {
            return Err(KernelError::IllConditionedRoots(sep));
        }
        let mut terms = partial_fractions(&phi.numer, phi.denom.leading(), &poles);
        let zero_term = terms.remove(0);
        Ok(InversionCoefficients {
            r: self.r,
            b_r: self.b_r,
            a0: zero_term.coeffs.iter().map(|c| c.re).collect(),
            phi1: ExpPolySum::new(terms),
        })
    }
}

/// `validate_kernel`: `r` and `B_r`, or the assumption that fails.
pub fn validate_kernel(numer: &[f64], denom: &[f64]) -> Result<KernelSummary, KernelError> {
    RationalLaplaceKernel::new(numer.to_vec(), denom.to_vec()).map(|g| g.summary())
}

/// Ingredients of the explicit inversion formula.
#[derive(Clone, Debug)]
pub struct InversionCoefficients {
    r: usize,
    b_r: f64,
    a0: Vec<f64>,
    phi1: ExpPolySum,
}

impl InversionCoefficients {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn b_r(&self) -> f64 {
        self.b_r
    }

    /// `a_{0,0}, …, a_{0,r-1}`.
    pub fn a0(&self) -> &[f64] {
        &self.a0
    }

    /// `(S_l, α_l, a_{l,·})` for each distinct zero of `g̃`.
    pub fn exp_terms(&self) -> &[PoleTerm] {
        self.phi1.terms()
    }

    pub fn phi1(&self) -> &ExpPolySum {
        &self.phi1
    }

    /// `φ₁(x)`; zero when `g̃` has no zeros.
    pub fn phi1_eval(&self, x: f64) -> f64 {
        self.phi1.eval(x)
    }

    /// `Σ_j a_{0,j}/s^{j+1} + Σ_l Σ_j a_{l,j}/(s-S_l)^{j+1}`, which must
    /// reproduce `φ̃(s)`.
    pub fn expansion(&self, s: Complex64) -> Complex64 {
        let inv = s.inv();
        let mut pow = inv;
        let mut total = Complex64::new(0.0, 0.0);
        for &a in &self.a0 {
            total += pow * a;
            pow *= inv;
        }
        total + self.phi1.laplace(s)
    }

    /// Combines per-point derivative values and the precomputed convolution
    /// term into `f(t)`.
    pub fn combine(&self, derivs: &[f64], convolution: f64) -> f64 {
        let r = self.r;
        let mut acc = derivs[r];
        for (j, &d) in derivs.iter().enumerate().take(r) {
            acc -= self.a0[r - j - 1] * d;
        }
        (acc - convolution) / self.b_r
    }
}

/// Samples `φ₁` at `k·h`, `k = 0..len`.
pub fn sample_phi1(coeffs: &InversionCoefficients, h: f64, len: usize) -> Vec<f64> {
    (0..len).map(|k| coeffs.phi1_eval(k as f64 * h)).collect()
}

/// `q(t_k) = ∫₀^{t_k} g(t_k - x) f(x) dx` on the evaluation grid `t_0..t_n`
/// by the composite trapezoid rule on a sub-grid refined `refine` times.
pub fn forward_convolve<F>(
    g: &RationalLaplaceKernel,
    f: F,
    design: &ExperimentDesign,
    refine: usize,
) -> Vec<f64>
where
    F: Fn(f64) -> f64,
{
    let refine = refine.max(1);
    let fine = design.n() * refine;
    let h = design.spacing() / refine as f64;
    let gs: Vec<f64> = (0..=fine).map(|k| g.eval(k as f64 * h)).collect();
    let fs: Vec<f64> = (0..=fine).map(|k| f(k as f64 * h)).collect();
    let q = causal_trapezoid_convolution(&gs, &fs, h);
    (0..=design.n()).map(|k| q[k * refine]).collect()
}

/// [`forward_convolve`] for `f` already sampled on the evaluation grid.
pub fn forward_convolve_sampled(
    g: &RationalLaplaceKernel,
    f_vals: &[f64],
    design: &ExperimentDesign,
) -> Vec<f64> {
    let h = design.spacing();
    let gs: Vec<f64> = (0..f_vals.len()).map(|k| g.eval(k as f64 * h)).collect();
    causal_trapezoid_convolution(&gs, f_vals, h)
}

/// Evaluates the inversion formula on the evaluation grid from exact
/// derivative callables `q_derivs(j, t)`, `j = 0..=r`.
pub fn reconstruct_exact<F>(
    coeffs: &InversionCoefficients,
    q_derivs: F,
    design: &ExperimentDesign,
    refine: usize,
) -> Vec<f64>
where
    F: Fn(usize, f64) -> f64,
{
    let r = coeffs.r();
    let refine = refine.max(1);
    let conv = if coeffs.exp_terms().is_empty() {
        vec![0.0; design.n() + 1]
    } else {
        let fine = design.n() * refine;
        let h = design.spacing() / refine as f64;
        let qr: Vec<f64> = (0..=fine).map(|k| q_derivs(r, k as f64 * h)).collect();
        let phi = sample_phi1(coeffs, h, fine + 1);
        let c = causal_trapezoid_convolution(&qr, &phi, h);
        (0..=design.n()).map(|k| c[k * refine]).collect()
    };
    let mut derivs = vec![0.0; r + 1];
    (0..=design.n())
        .map(|k| {
            let t = design.time(k);
            for (j, d) in derivs.iter_mut().enumerate() {
                *d = q_derivs(j, t);
            }
            coeffs.combine(&derivs, conv[k])
        })
        .collect()
}
