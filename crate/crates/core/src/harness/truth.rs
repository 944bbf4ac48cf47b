//! Test functions with closed-form convolutions.
//!
//! Every catalog truth is a piecewise exponential polynomial, so `g ∗ f` and
//! its derivatives have closed forms for any kernel with rational transform.
//! Those closed forms serve as the exact `q^{(j)}` in risk decompositions
//! and round-trip checks.

use num_complex::Complex64;

use crate::exppoly::{binomial, ExpPolySum};
use crate::laplace_kernel::RationalLaplaceKernel;
use crate::poly::Poly;

/// `coef · x^power · e^{rate x}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpMonomial {
    pub coef: f64,
    pub power: usize,
    pub rate: f64,
}

/// A function equal to a sum of [`ExpMonomial`]s on `[start, end)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub start: f64,
    pub end: f64,
    pub terms: Vec<ExpMonomial>,
}

/// Sum of pieces; zero outside all of them.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PiecewiseExpPoly {
    pieces: Vec<Piece>,
}

impl PiecewiseExpPoly {
    pub fn new(pieces: Vec<Piece>) -> Self {
        PiecewiseExpPoly { pieces }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.pieces
            .iter()
            .filter(|p| x >= p.start && x < p.end)
            .flat_map(|p| p.terms.iter())
            .map(|m| m.coef * x.powi(m.power as i32) * (m.rate * x).exp())
            .sum()
    }

    /// `∫₀ᵗ k(t - x) f(x) dx` in closed form.
    pub fn convolve_with(&self, kernel: &ExpPolySum, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let mut total = Complex64::new(0.0, 0.0);
        for piece in &self.pieces {
            let lo = piece.start.max(0.0);
            let hi = piece.end.min(t);
            if hi <= lo {
                continue;
            }
            for term in kernel.terms() {
                let p = term.pole;
                let ept = (p * t).exp();
                for (a, c) in term.coeffs.iter().enumerate() {
                    let fa = crate::exppoly::factorial(a);
                    for m in &piece.terms {
                        let beta = Complex64::new(m.rate, 0.0) - p;
                        let mut inner = Complex64::new(0.0, 0.0);
                        for i in 0..=a {
                            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                            let w = binomial(a, i) * t.powi((a - i) as i32) * sign;
                            inner += exp_power_integral(i + m.power, beta, lo, hi) * w;
                        }
                        total += c * ept * inner * (m.coef / fa);
                    }
                }
            }
        }
        total.re
    }
}

/// `∫_lo^hi x^m e^{βx} dx`.
pub fn exp_power_integral(m: usize, beta: Complex64, lo: f64, hi: f64) -> Complex64 {
    let reach = lo.abs().max(hi.abs());
    if beta.norm() * reach < 2.0 {
        // Power series in β avoids cancellation for small |βx|.
        let mut total = Complex64::new(0.0, 0.0);
        let mut bk = Complex64::new(1.0, 0.0);
        let mut kfact = 1.0;
        for k in 0..200 {
            if k > 0 {
                bk *= beta;
                kfact *= k as f64;
            }
            let e = (m + k + 1) as i32;
            let term = bk / kfact * ((hi.powi(e) - lo.powi(e)) / e as f64);
            total += term;
            if k > 4 && term.norm() <= 1e-18 * total.norm().max(1e-300) {
                break;
            }
        }
        return total;
    }
    let antiderivative = |x: f64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut falling = 1.0;
        let mut bpow = beta;
        for i in 0..=m {
            if i > 0 {
                falling *= (m - i + 1) as f64;
                bpow *= beta;
            }
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            acc += x.powi((m - i) as i32) * sign * falling / bpow;
        }
        acc * (beta * x).exp()
    };
    antiderivative(hi) - antiderivative(lo)
}

/// A named test function with nominal Sobolev index `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruthSpec {
    pub name: String,
    pub m: f64,
    pub f: PiecewiseExpPoly,
}

impl TruthSpec {
    /// `f(t) = t² e^{-t}`; infinitely smooth, so the attainable index is
    /// capped by the kernel order at `m = L - r`.
    pub fn smooth(kernel_order: usize, r: usize) -> Self {
        TruthSpec {
            name: "smooth".into(),
            m: kernel_order.saturating_sub(r).max(1) as f64,
            f: PiecewiseExpPoly::new(vec![Piece {
                start: 0.0,
                end: f64::INFINITY,
                terms: vec![ExpMonomial {
                    coef: 1.0,
                    power: 2,
                    rate: -1.0,
                }],
            }]),
        }
    }

    /// `f(t) = C ((t-a)(b-t))^m` on `[a, b]`, zero elsewhere, scaled to unit
    /// maximum. It has `m - 1` continuous derivatives and a jump in the
    /// `m`-th at the knots `a` and `b`.
    pub fn kink(m: usize, a: f64, b: f64) -> Self {
        assert!(
            m >= 1 && 0.0 < a && a < b,
            "kink truth needs m >= 1 and 0 < a < b"
        );
        let base = Poly::new(vec![-a * b, a + b, -1.0]);
        let poly = (1..m).fold(base.clone(), |acc, _| acc.mul(&base));
        let scale = ((b - a) / 2.0).powi(-2 * m as i32);
        let terms = poly
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(k, &c)| ExpMonomial {
                coef: c * scale,
                power: k,
                rate: 0.0,
            })
            .collect();
        TruthSpec {
            name: format!("kink{m}"),
            m: m as f64,
            f: PiecewiseExpPoly::new(vec![Piece {
                start: a,
                end: b,
                terms,
            }]),
        }
    }

    pub fn zero() -> Self {
        TruthSpec {
            name: "zero".into(),
            m: f64::INFINITY,
            f: PiecewiseExpPoly::default(),
        }
    }

    pub fn constant(c: f64) -> Self {
        TruthSpec {
            name: "constant".into(),
            m: f64::INFINITY,
            f: PiecewiseExpPoly::new(vec![Piece {
                start: 0.0,
                end: f64::INFINITY,
                terms: vec![ExpMonomial {
                    coef: c,
                    power: 0,
                    rate: 0.0,
                }],
            }]),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.f.eval(t)
    }
}

/// Exact `q^{(j)} = (g ∗ f)^{(j)}` for `j = 0..=r`.
///
/// Because `g^{(i)}(0) = 0` for `i < r - 1` and `g^{(r-1)}(0) = B_r`,
/// `q^{(j)} = g^{(j)} ∗ f` for `j < r` and `q^{(r)} = B_r f + g^{(r)} ∗ f`.
#[derive(Clone, Debug)]
pub struct ExactConvolution {
    derivs: Vec<ExpPolySum>,
    b_r: f64,
    f: PiecewiseExpPoly,
}

impl ExactConvolution {
    pub fn new(g: &RationalLaplaceKernel, truth: &TruthSpec) -> Self {
        let mut derivs = vec![g.time_domain().clone()];
        for _ in 0..g.r() {
            let next = derivs.last().unwrap().derivative();
            derivs.push(next);
        }
        ExactConvolution {
            derivs,
            b_r: g.b_r(),
            f: truth.f.clone(),
        }
    }

    pub fn r(&self) -> usize {
        self.derivs.len() - 1
    }

    /// `q^{(j)}(t)`, `j ≤ r`.
    pub fn q(&self, j: usize, t: f64) -> f64 {
        let conv = self.f.convolve_with(&self.derivs[j], t);
        if j == self.r() {
            self.b_r * self.f.eval(t) + conv
        } else {
            conv
        }
    }

    pub fn sample(&self, j: usize, grid: &[f64]) -> Vec<f64> {
        grid.iter().map(|&t| self.q(j, t)).collect()
    }
}
