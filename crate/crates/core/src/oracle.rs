//! Independent checks on the expansion: a floating-point Newton solver for
//! the root itself, and, for k = 2, the closed radical form of the branch
//! expanded exactly.
//!
//! The solver works on the concrete polynomial
//!
//!   P(z) = z^k - s_1 z^{k-1} + ... + (-1)^k s_k - (-1)^k
//!
//! whose root at s = 0 is exactly -1, which is also the Newton starting
//! point. Neither the solver nor the radical expansion shares any code with
//! the recurrence machinery, so agreement between the two sides is a real
//! cross-check rather than a tautology.

use crate::multiindex::{MultiIndex, QRKey};
use crate::polyring::{factorial, rat, Poly, Rational};
use crate::taylor::{build_table, CoeffTable};
use num_complex::Complex64;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("sigma has {got} entries, expected {expected}")]
    SigmaLength { expected: usize, got: usize },
    #[error("derivative vanished near z = {at} (|P'| = {magnitude:.3e})")]
    DerivativeVanished { at: Complex64, magnitude: f64 },
    #[error("no convergence after {iterations} iterations (last |P| = {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
}

/// The universal polynomial at a concrete parameter point.
#[derive(Clone, Debug)]
pub struct ShiftedPolynomial {
    k: usize,
    sigma: Vec<Complex64>,
}

pub const NEWTON_TOL: f64 = 1e-14;
pub const NEWTON_MAX_ITER: usize = 100;
const DERIVATIVE_FLOOR: f64 = 1e-12;

impl ShiftedPolynomial {
    pub fn new(k: usize, sigma: Vec<Complex64>) -> Result<Self, OracleError> {
        if sigma.len() != k {
            return Err(OracleError::SigmaLength {
                expected: k,
                got: sigma.len(),
            });
        }
        Ok(ShiftedPolynomial { k, sigma })
    }

    /// Coefficients in descending degree: 1, -s_1, s_2, ...,
    /// (-1)^k s_k - (-1)^k.
    pub fn coefficients(&self) -> Vec<Complex64> {
        let mut coeffs = Vec::with_capacity(self.k + 1);
        coeffs.push(Complex64::ONE);
        for (h, s) in self.sigma.iter().enumerate() {
            let sign = if h % 2 == 0 { -1.0 } else { 1.0 };
            coeffs.push(sign * s);
        }
        let tail = if self.k % 2 == 0 { -1.0 } else { 1.0 };
        coeffs[self.k] += Complex64::new(tail, 0.0);
        coeffs
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coefficients()
            .iter()
            .fold(Complex64::ZERO, |acc, c| acc * z + c)
    }

    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        let coeffs = self.coefficients();
        let n = self.k;
        coeffs[..n]
            .iter()
            .enumerate()
            .fold(Complex64::ZERO, |acc, (i, c)| {
                acc * z + (n - i) as f64 * c
            })
    }

    /// Newton iteration from -1, the exact root at s = 0.
    pub fn newton_root(&self) -> Result<Complex64, OracleError> {
        self.newton_root_from(Complex64::new(-1.0, 0.0), NEWTON_TOL, NEWTON_MAX_ITER)
    }

    pub fn newton_root_from(
        &self,
        start: Complex64,
        tol: f64,
        max_iter: usize,
    ) -> Result<Complex64, OracleError> {
        let mut z = start;
        let mut residual = f64::INFINITY;
        for _ in 0..max_iter {
            let p = self.eval(z);
            residual = p.norm();
            if residual == 0.0 {
                return Ok(z);
            }
            let dp = self.eval_derivative(z);
            if dp.norm() < DERIVATIVE_FLOOR {
                return Err(OracleError::DerivativeVanished {
                    at: z,
                    magnitude: dp.norm(),
                });
            }
            let step = p / dp;
            z -= step;
            if step.norm() <= tol * z.norm().max(1.0) {
                return Ok(z);
            }
        }
        Err(OracleError::NoConvergence {
            iterations: max_iter,
            residual,
        })
    }
}

/// Exact binomial coefficient binom(1/2, n).
fn binom_half(n: u32) -> Rational {
    let mut acc = Rational::one();
    for j in 0..n {
        acc = acc * (rat(1, 2) - rat(j as i64, 1)) / rat(j as i64 + 1, 1);
    }
    acc
}

/// The k = 2 branch in closed form is -sqrt(1 + u) + s_1 / 2 with
/// u = (s_1^2 - 4 s_2) / 4. Expanding the square root binomially and
/// reading off monomial coefficients gives every C_{q,r} without touching
/// a single recurrence: the class of (q, r) is the singleton
/// s_1^{2q-r} s_2^{r-q}, so C_{q,r} = (2q-r)! (r-q)! [s_1^{2q-r} s_2^{r-q}] F.
pub fn radical_table_k2(q_max: u32) -> CoeffTable {
    let mut u = Poly::zero(2);
    u.add_term(MultiIndex(vec![2, 0]), rat(1, 4));
    u.add_term(MultiIndex(vec![0, 1]), rat(-1, 1));
    let mut f = Poly::zero(2);
    let mut upow = Poly::one(2);
    for n in 0..=q_max {
        if n > 0 {
            upow = (&upow * &u).truncate_total_degree(q_max);
        }
        f = &f + &upow.scale(&binom_half(n));
    }
    let f = f.scale(&rat(-1, 1));
    let mut entries = Vec::new();
    for q in 0..=q_max {
        for r in q..=(2 * q) {
            let a = 2 * q - r;
            let b = r - q;
            let coeff = f.coeff(&MultiIndex(vec![a, b]));
            let weight = Rational::from_integer(factorial(a) * factorial(b));
            entries.push((QRKey::new(q, r), coeff * weight));
        }
    }
    CoeffTable::from_entries(2, q_max, entries)
}

/// Distance between the truncated series root and the Newton root at a
/// concrete parameter point.
pub fn compare_series(table: &CoeffTable, sigma: &[Complex64]) -> Result<f64, OracleError> {
    let sp = ShiftedPolynomial::new(table.k(), sigma.to_vec())?;
    let root = sp.newton_root()?;
    let approx = table.root_series().evaluate_c64(sigma);
    Ok((approx - root).norm())
}

/// Convenience wrapper that builds the table on the fly.
pub fn series_error(k: usize, q_max: u32, sigma: &[Complex64]) -> Result<f64, OracleError> {
    compare_series(&build_table(k, q_max), sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn coefficient_layout() {
        let sp = ShiftedPolynomial::new(2, vec![c(3.0), c(5.0)]).unwrap();
        // z^2 - 3z + (5 - 1)
        assert_eq!(sp.coefficients(), vec![c(1.0), c(-3.0), c(4.0)]);
        let sp = ShiftedPolynomial::new(3, vec![c(2.0), c(3.0), c(4.0)]).unwrap();
        // z^3 - 2z^2 + 3z - 4 + 1
        assert_eq!(sp.coefficients(), vec![c(1.0), c(-2.0), c(3.0), c(-3.0)]);
        assert!(matches!(
            ShiftedPolynomial::new(3, vec![c(1.0)]),
            Err(OracleError::SigmaLength { expected: 3, got: 1 })
        ));
    }

    #[test]
    fn newton_finds_the_base_root() {
        for k in 2..=6 {
            let sp = ShiftedPolynomial::new(k, vec![Complex64::ZERO; k]).unwrap();
            let root = sp.newton_root().unwrap();
            assert!((root - c(-1.0)).norm() < 1e-15, "k={k}: {root}");
        }
    }

    #[test]
    fn newton_agrees_with_the_quadratic_formula() {
        let (s1, s2) = (0.01, 0.02);
        let sp = ShiftedPolynomial::new(2, vec![c(s1), c(s2)]).unwrap();
        let root = sp.newton_root().unwrap();
        let exact = (s1 - (s1 * s1 - 4.0 * s2 + 4.0).sqrt()) / 2.0;
        assert!((root - c(exact)).norm() <= 1e-12, "{root} vs {exact}");
    }

    #[test]
    fn newton_roots_have_tiny_residuals() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0005);
        for _ in 0..100 {
            let k = rng.random_range(2..=5usize);
            let sigma: Vec<Complex64> = (0..k)
                .map(|_| {
                    Complex64::new(
                        rng.random_range(-100..=100) as f64 / 2000.0,
                        rng.random_range(-100..=100) as f64 / 2000.0,
                    )
                })
                .collect();
            let sp = ShiftedPolynomial::new(k, sigma).unwrap();
            let root = sp.newton_root().unwrap();
            assert!(sp.eval(root).norm() <= 1e-13, "k={k}");
            assert!((root - c(-1.0)).norm() < 0.5, "stayed on the branch");
        }
    }

    #[test]
    fn derivative_guard_trips_at_a_critical_start() {
        // s = (-2, 0): P = z^2 + 2z - 1 has P'(-1) = 0
        let sp = ShiftedPolynomial::new(2, vec![c(-2.0), c(0.0)]).unwrap();
        assert!(matches!(
            sp.newton_root(),
            Err(OracleError::DerivativeVanished { .. })
        ));
    }

    #[test]
    fn radical_expansion_matches_the_recurrence_table() {
        assert_eq!(radical_table_k2(10), build_table(2, 10));
    }

    #[test]
    fn radical_spot_values() {
        let t = radical_table_k2(4);
        assert_eq!(t.coefficient(0, 0), Some(&rat(-1, 1)));
        assert_eq!(t.coefficient(2, 2), Some(&rat(-1, 4)));
        assert_eq!(t.coefficient(2, 4), Some(&rat(1, 4)));
        assert_eq!(t.coefficient(4, 8), Some(&rat(15, 16)));
    }

    #[test]
    fn series_error_decays_at_the_truncation_rate() {
        for k in 2..=4usize {
            let q_max = 6u32;
            let table = build_table(k, q_max);
            let sigma: Vec<Complex64> = (0..k).map(|_| c(0.05)).collect();
            let half: Vec<Complex64> = sigma.iter().map(|s| s * 0.5).collect();
            let e1 = compare_series(&table, &sigma).unwrap();
            let e2 = compare_series(&table, &half).unwrap();
            assert!(e1 <= 1e-6, "k={k}: error {e1} too large at |sigma| = 0.05");
            if e1 > 1e-12 {
                let bound = 2f64.powi(-(q_max as i32 + 1)) / 0.9;
                assert!(
                    e2 / e1 <= bound,
                    "k={k}: ratio {} exceeds {bound}",
                    e2 / e1
                );
            }
        }
    }
}
