//! Real polynomials, companion-matrix root finding and root clustering.
//!
//! Coefficients are stored in ascending degree order throughout the crate,
//! matching the configuration format (`g.denom = [1, 2, 1]` is `1 + 2s + s^2`).

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Relative distance below which two computed roots are treated as one root.
pub const ROOT_MERGE_TOL: f64 = 1e-7;

/// Imaginary parts below this (relative) are snapped to zero.
const REAL_SNAP_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("companion eigenvalue iteration did not converge (degree {0})")]
    NoConvergence(usize),
}

/// Real polynomial with ascending-degree coefficients and no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    /// `s^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (k, &b) in other.coeffs.iter().enumerate() {
                out[i + k] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, factor: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..len)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(0.0)
                        - other.coeffs.get(k).copied().unwrap_or(0.0)
                })
                .collect(),
        )
    }

    /// Multiplies by `s^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![0.0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    /// Sum of absolute coefficient values, a cheap scale for relative tests.
    pub fn abs_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }
}

/// A root together with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Taylor coefficients of `coeffs` (ascending, complex) about `z`, i.e.
/// the coefficients of `p(z + u)` in powers of `u`.
pub fn taylor_shift(coeffs: &[Complex64], z: Complex64) -> Vec<Complex64> {
    let mut work = coeffs.to_vec();
    let n = work.len();
    // Repeated synthetic division by (s - z).
    for i in 0..n {
        for k in (i..n - 1).rev() {
            let carry = work[k + 1] * z;
            work[k] += carry;
        }
    }
    work
}

/// Finds all roots of `p` with multiplicities.
///
/// Exact zero roots (vanishing low-order coefficients) are split off first.
/// The remaining roots are eigenvalues of the companion matrix, merged into
/// multiple roots by [`cluster_roots`] and then Newton-polished.
pub fn roots(p: &Poly) -> Result<Vec<Root>, RootError> {
    let degree = p.degree().ok_or(RootError::ZeroPolynomial)?;
    let coeffs = p.coeffs();
    let zero_mult = coeffs.iter().take_while(|&&c| c == 0.0).count();
    let reduced: Vec<f64> = coeffs[zero_mult..].to_vec();
    let m = degree - zero_mult;

    let mut out = Vec::new();
    if zero_mult > 0 {
        out.push(Root {
            value: Complex64::new(0.0, 0.0),
            multiplicity: zero_mult,
        });
    }
    if m == 0 {
        return Ok(out);
    }

    let lead = reduced[m];
    let raw: Vec<Complex64> = if m == 1 {
        vec![Complex64::new(-reduced[0] / lead, 0.0)]
    } else {
        let mut companion = DMatrix::<f64>::zeros(m, m);
        for i in 1..m {
            companion[(i, i - 1)] = 1.0;
        }
        for i in 0..m {
            companion[(i, m - 1)] = -reduced[i] / lead;
        }
        let schur = companion
            .try_schur(f64::EPSILON, 10_000)
            .ok_or(RootError::NoConvergence(m))?;
        schur.complex_eigenvalues().iter().copied().collect()
    };

    // Cluster the raw eigenvalues: their mean over a multiple root is far
    // more accurate than any individual member. A k-fold root is a simple
    // root of p^(k-1), which is what the Newton polish then targets.
    let poly = Poly::new(reduced);
    for root in cluster_roots(&raw) {
        let mut target = poly.clone();
        for _ in 1..root.multiplicity {
            target = target.derivative();
        }
        let dtarget = target.derivative();
        let mut z = root.value;
        for _ in 0..2 {
            let pz = target.eval_complex(z);
            let dz = dtarget.eval_complex(z);
            if dz.norm() == 0.0 {
                break;
            }
            let candidate = z - pz / dz;
            if target.eval_complex(candidate).norm() < pz.norm() {
                z = candidate;
            } else {
                break;
            }
        }
        if root.value.im == 0.0 {
            z.im = 0.0;
        }
        out.push(Root {
            value: z,
            multiplicity: root.multiplicity,
        });
    }
    Ok(out)
}

/// Merges numerically coincident roots.
///
/// A cluster of `k` simple eigenvalues that came from one `k`-fold root is
/// spread over roughly `eps^(1/k)` (relative), so the merge radius grows
/// with the size of the merged cluster, never dropping below
/// [`ROOT_MERGE_TOL`]. The merged value is the cluster mean, which is far
/// more accurate than its members. Conjugate symmetry is then restored.
pub fn cluster_roots(values: &[Complex64]) -> Vec<Root> {
    let radius = |k: usize| ROOT_MERGE_TOL.max(10.0 * f64::EPSILON.powf(1.0 / k as f64));
    let mut assigned = vec![false; values.len()];
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for i in 0..values.len() {
        if assigned[i] {
            continue;
        }
        let mut near: Vec<usize> = (0..values.len()).filter(|&k| !assigned[k]).collect();
        near.sort_by(|&a, &b| {
            (values[a] - values[i])
                .norm()
                .total_cmp(&(values[b] - values[i]).norm())
        });
        // Try the largest plausible cluster around `i` first.
        let mut chosen = vec![i];
        for k in (2..=near.len()).rev() {
            let group = &near[..k];
            let centroid = group.iter().map(|&g| values[g]).sum::<Complex64>() / k as f64;
            let scale = 1.0f64.max(centroid.norm());
            let spread = group
                .iter()
                .map(|&g| (values[g] - centroid).norm() / scale)
                .fold(0.0, f64::max);
            if spread <= radius(k) {
                chosen = group.to_vec();
                break;
            }
        }
        let centroid = chosen.iter().map(|&g| values[g]).sum::<Complex64>() / chosen.len() as f64;
        for &g in &chosen {
            assigned[g] = true;
        }
        clusters.push((centroid, chosen.len()));
    }

    for c in clusters.iter_mut() {
        let scale = 1.0f64.max(c.0.norm());
        if c.0.im.abs() <= REAL_SNAP_TOL * scale {
            c.0.im = 0.0;
        }
    }
    // Pair each upper-half root with its nearest lower-half partner and make
    // the pair exactly conjugate.
    let mut used = vec![false; clusters.len()];
    let mut out = Vec::with_capacity(clusters.len());
    for i in 0..clusters.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let (z, m) = clusters[i];
        if z.im == 0.0 {
            out.push(Root {
                value: z,
                multiplicity: m,
            });
            continue;
        }
        let partner = (0..clusters.len())
            .filter(|&k| !used[k] && clusters[k].1 == m && clusters[k].0.im * z.im < 0.0)
            .min_by(|&a, &b| {
                let da = (clusters[a].0 - z.conj()).norm();
                let db = (clusters[b].0 - z.conj()).norm();
                da.total_cmp(&db)
            });
        match partner {
            Some(k) => {
                used[k] = true;
                let w = clusters[k].0;
                let upper = if z.im > 0.0 { z } else { w };
                let lower = if z.im > 0.0 { w } else { z };
                let avg = (upper + lower.conj()) * 0.5;
                out.push(Root {
                    value: avg,
                    multiplicity: m,
                });
                out.push(Root {
                    value: avg.conj(),
                    multiplicity: m,
                });
            }
            None => out.push(Root {
                value: z,
                multiplicity: m,
            }),
        }
    }
    out
}
