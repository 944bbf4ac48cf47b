//! Exponential-polynomial sums `Σ_l Σ_j c_{l,j} t^j e^{p_l t} / j!` and the
//! partial-fraction expansion that produces them from a proper rational
//! Laplace transform.

use num_complex::Complex64;

use crate::poly::{taylor_shift, Poly, Root};

/// Relative pole separation below which residue extraction is refused.
pub const MIN_POLE_SEPARATION: f64 = 1e-6;

/// One pole of a proper rational function and its partial-fraction
/// coefficients: `coeffs[j]` multiplies `1 / (s - pole)^(j + 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleTerm {
    pub pole: Complex64,
    pub multiplicity: usize,
    pub coeffs: Vec<Complex64>,
}

/// Time-domain exponential polynomial, the inverse Laplace transform of
/// `Σ_j coeffs[j] / (s - pole)^(j+1)` summed over its terms.
///
/// Terms with complex poles are expected in conjugate pairs; evaluation
/// returns the real part of the complex sum.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExpPolySum {
    terms: Vec<PoleTerm>,
}

impl ExpPolySum {
    pub fn new(terms: Vec<PoleTerm>) -> Self {
        ExpPolySum { terms }
    }

    pub fn terms(&self) -> &[PoleTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval_complex(&self, t: f64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for term in &self.terms {
            let e = (term.pole * t).exp();
            // Horner in t with 1/j! folded in.
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, c) in term.coeffs.iter().enumerate().rev() {
                acc = acc * t / (j as f64 + 1.0) + c;
            }
            total += acc * e;
        }
        total
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_complex(t).re
    }

    /// Time derivative, again an exponential polynomial over the same poles.
    pub fn derivative(&self) -> ExpPolySum {
        let terms = self
            .terms
            .iter()
            .map(|term| {
                let n = term.coeffs.len();
                let coeffs = (0..n)
                    .map(|j| {
                        let next = if j + 1 < n {
                            term.coeffs[j + 1]
                        } else {
                            Complex64::new(0.0, 0.0)
                        };
                        term.pole * term.coeffs[j] + next
                    })
                    .collect();
                PoleTerm {
                    pole: term.pole,
                    multiplicity: term.multiplicity,
                    coeffs,
                }
            })
            .collect();
        ExpPolySum { terms }
    }

    /// `d^k/dt^k` at `t = 0`, evaluated in closed form.
    pub fn derivative_at_zero(&self, k: usize) -> f64 {
        let mut total = Complex64::new(0.0, 0.0);
        for term in &self.terms {
            for (j, c) in term.coeffs.iter().enumerate() {
                if j > k {
                    break;
                }
                total += c * binomial(k, j) * term.pole.powu((k - j) as u32);
            }
        }
        total.re
    }

    /// Laplace transform `Σ c_j / (s - p)^(j+1)` at a complex point.
    pub fn laplace(&self, s: Complex64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for term in &self.terms {
            let inv = (s - term.pole).inv();
            let mut pow = inv;
            for c in &term.coeffs {
                total += c * pow;
                pow *= inv;
            }
        }
        total
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Smallest relative distance between two distinct poles.
pub fn min_relative_separation(poles: &[Root]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in poles.iter().enumerate() {
        for b in &poles[i + 1..] {
            let scale = 1.0f64.max(a.value.norm()).max(b.value.norm());
            best = best.min((a.value - b.value).norm() / scale);
        }
    }
    best
}

/// Partial-fraction expansion of `numer(s) / (lead · Π (s - p_k)^{α_k})`.
///
/// For each pole `p` of multiplicity `α`, `h(s) = (s - p)^α · R(s)` is
/// expanded as a power series in `u = s - p` by series long division of the
/// Taylor-shifted numerator by the Taylor-shifted remaining denominator
/// factors; the coefficient of `1 / (s - p)^(j+1)` is the order `α - 1 - j`
/// Taylor coefficient of `h`.
///
/// Coefficients of lower-half-plane poles are set to the exact conjugates of
/// their upper-half partners so that real-time evaluations stay real.
pub fn partial_fractions(numer: &Poly, lead: f64, poles: &[Root]) -> Vec<PoleTerm> {
    let numer_c: Vec<Complex64> = numer
        .coeffs()
        .iter()
        .map(|&c| Complex64::new(c, 0.0))
        .collect();

    let mut terms: Vec<PoleTerm> = Vec::with_capacity(poles.len());
    for (idx, root) in poles.iter().enumerate() {
        let p = root.value;
        let alpha = root.multiplicity;

        if p.im < 0.0 {
            if let Some(partner) = terms
                .iter()
                .find(|t| t.pole == p.conj() && t.multiplicity == alpha)
            {
                terms.push(PoleTerm {
                    pole: p,
                    multiplicity: alpha,
                    coeffs: partner.coeffs.iter().map(|c| c.conj()).collect(),
                });
                continue;
            }
        }

        let mut num_series = if numer_c.is_empty() {
            vec![Complex64::new(0.0, 0.0)]
        } else {
            taylor_shift(&numer_c, p)
        };
        num_series.resize(alpha.max(num_series.len()), Complex64::new(0.0, 0.0));
        num_series.truncate(alpha);

        let mut den_series = vec![Complex64::new(0.0, 0.0); alpha];
        den_series[0] = Complex64::new(lead, 0.0);
        for (other_idx, other) in poles.iter().enumerate() {
            if other_idx == idx {
                continue;
            }
            let shift = p - other.value;
            for _ in 0..other.multiplicity {
                // Multiply by (shift + u), truncated.
                for k in (0..alpha).rev() {
                    let lower = if k > 0 {
                        den_series[k - 1]
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    den_series[k] = den_series[k] * shift + lower;
                }
            }
        }

        let mut h = vec![Complex64::new(0.0, 0.0); alpha];
        for k in 0..alpha {
            let mut acc = num_series[k];
            for i in 0..k {
                acc -= h[i] * den_series[k - i];
            }
            h[k] = acc / den_series[0];
        }

        let mut coeffs: Vec<Complex64> = (0..alpha).map(|j| h[alpha - 1 - j]).collect();
        if p.im == 0.0 {
            for c in coeffs.iter_mut() {
                c.im = 0.0;
            }
        }
        terms.push(PoleTerm {
            pole: p,
            multiplicity: alpha,
            coeffs,
        });
    }

    // Lower-half poles that preceded their partners in the input.
    for i in 0..terms.len() {
        if terms[i].pole.im < 0.0 {
            if let Some(k) = terms.iter().position(|t| {
                t.pole == terms[i].pole.conj() && t.multiplicity == terms[i].multiplicity
            }) {
                let conj: Vec<Complex64> = terms[k].coeffs.iter().map(|c| c.conj()).collect();
                terms[i].coeffs = conj;
            }
        }
    }
    terms
}
