//! Exact determinants and resultants over the polynomial ring, plus the two
//! structured determinant lemmas that tie the derivative pencil to the
//! discriminant hypersurface.
//!
//! Determinants use Bareiss fraction-free elimination (the interior
//! divisions are exact by Sylvester's identity, so `exact_div` never fails),
//! with a plain cofactor expansion for sizes up to 4 and as an independent
//! cross-check. The resultant is the determinant of the Sylvester matrix of
//! two coefficient lists, and the discriminant of the generic monic
//! polynomial
//!
//!   P(z) = z^k - s_1 z^{k-1} + s_2 z^{k-2} - ... + (-1)^k s_k
//!
//! is Delta = (-1)^{k(k-1)/2} Res(P, P') as a polynomial in s_1..s_k. Both
//! structured determinants below are supported on multiples of Delta, which
//! is what makes the holonomic system regular away from the discriminant.

use crate::polyring::{int, Poly, Rational};
use num_traits::One;

/// Dense square matrix of polynomials, all sharing one ambient variable
/// count.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    nvars: usize,
    rows: Vec<Vec<Poly>>,
}

impl PolyMatrix {
    pub fn new(nvars: usize, rows: Vec<Vec<Poly>>) -> Self {
        let n = rows.len();
        for row in &rows {
            assert_eq!(row.len(), n, "matrix must be square");
            for e in row {
                assert_eq!(e.nvars(), nvars, "entry variable count mismatch");
            }
        }
        PolyMatrix { nvars, rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.rows[i][j]
    }

    /// Cofactor expansion along the first row. Exponential, fine for the
    /// small structured matrices and as an oracle for Bareiss.
    pub fn determinant_cofactor(&self) -> Poly {
        let n = self.size();
        if n == 0 {
            return Poly::one(self.nvars);
        }
        if n == 1 {
            return self.rows[0][0].clone();
        }
        let mut acc = Poly::zero(self.nvars);
        for j in 0..n {
            if self.rows[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<Poly>> = self.rows[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, e)| e.clone())
                        .collect()
                })
                .collect();
            let sub = PolyMatrix::new(self.nvars, minor).determinant_cofactor();
            let term = &self.rows[0][j] * &sub;
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    /// Bareiss fraction-free elimination; every interior division is exact.
    pub fn determinant(&self) -> Poly {
        let n = self.size();
        if n <= 4 {
            return self.determinant_cofactor();
        }
        let mut m = self.rows.clone();
        let mut sign = Rational::one();
        let mut prev = Poly::one(self.nvars);
        for p in 0..n - 1 {
            if m[p][p].is_zero() {
                let Some(swap) = (p + 1..n).find(|&r| !m[r][p].is_zero()) else {
                    return Poly::zero(self.nvars);
                };
                m.swap(p, swap);
                sign = -sign;
            }
            for i in p + 1..n {
                for j in p + 1..n {
                    let num = &(&m[p][p] * &m[i][j]) - &(&m[i][p] * &m[p][j]);
                    m[i][j] = num
                        .exact_div(&prev)
                        .expect("Bareiss interior division is exact");
                }
                m[i][p] = Poly::zero(self.nvars);
            }
            prev = m[p][p].clone();
        }
        m[n - 1][n - 1].scale(&sign)
    }
}

/// Resultant of two univariate polynomials given by coefficient lists in
/// ascending degree order, entries living in the s-ring. Degrees are taken
/// from the list lengths, so callers must trim leading zeros themselves.
/// The Sylvester matrix stacks deg(g) shifted copies of f's coefficients
/// over deg(f) shifted copies of g's.
pub fn resultant(f: &[Poly], g: &[Poly]) -> Poly {
    assert!(f.len() >= 2 && g.len() >= 2, "resultant needs positive degrees");
    let nvars = f[0].nvars();
    let n = f.len() - 1;
    let m = g.len() - 1;
    let size = n + m;
    let zero = Poly::zero(nvars);
    let mut rows = Vec::with_capacity(size);
    for shift in 0..m {
        let mut row = vec![zero.clone(); size];
        for (i, c) in f.iter().rev().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..n {
        let mut row = vec![zero.clone(); size];
        for (i, c) in g.iter().rev().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    PolyMatrix::new(nvars, rows).determinant()
}

/// Coefficients of the generic monic polynomial, ascending in z, in the
/// k-variable s-ring: z^k - s_1 z^{k-1} + ... + (-1)^k s_k.
pub fn generic_coeffs(k: usize) -> Vec<Poly> {
    let mut coeffs = vec![Poly::zero(k); k + 1];
    coeffs[k] = Poly::one(k);
    for h in 1..=k {
        let sign = if h % 2 == 1 { -1 } else { 1 };
        coeffs[k - h] = Poly::var(k, h).scale(&int(sign));
    }
    coeffs
}

fn derivative_coeffs(f: &[Poly]) -> Vec<Poly> {
    f.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(&int(i as i64)))
        .collect()
}

/// Discriminant of the generic monic polynomial,
/// Delta = (-1)^{k(k-1)/2} Res(P, P'), as a k-variable polynomial.
pub fn discriminant(k: usize) -> Poly {
    let p = generic_coeffs(k);
    let dp = derivative_coeffs(&p);
    let res = resultant(&p, &dp);
    let sign = if (k * (k - 1) / 2) % 2 == 0 { 1 } else { -1 };
    res.scale(&int(sign))
}

/// The (2k-1)-square derivative-pencil system in the unknowns y_2..y_{2k}:
/// rows L_1..L_k then Lam_2..Lam_k, where (with s_0 = 1)
///   L_j    :  sum_{p=1}^{k} p s_p y_{j+p}
///   Lam_j  :  sum_{p=0}^{k} s_p y_{j+p}
pub fn lemma_determinant_matrix(k: usize) -> PolyMatrix {
    assert!(k >= 2);
    let size = 2 * k - 1;
    let zero = Poly::zero(k);
    let mut rows = Vec::with_capacity(size);
    for j in 1..=k {
        let mut row = vec![zero.clone(); size];
        for p in 1..=k {
            // y_{j+p} sits at column j + p - 2
            row[j + p - 2] = Poly::var(k, p).scale(&int(p as i64));
        }
        rows.push(row);
    }
    for j in 2..=k {
        let mut row = vec![zero.clone(); size];
        row[j - 2] = Poly::one(k);
        for p in 1..=k {
            row[j + p - 2] = Poly::var(k, p);
        }
        rows.push(row);
    }
    PolyMatrix::new(k, rows)
}

/// The missing-pair system, again (2k-1)-square in y_2..y_{2k}: rows
/// A_2..A_k then B_1..B_k, where (with s_0 = 1)
///   A_j  :  sum_{p=1}^{k} p s_p y_{j+p}
///   B_h  :  sum_{p=0}^{k-1} (k-p) s_p y_{h+p+1}
pub fn lemma_manquant_matrix(k: usize) -> PolyMatrix {
    assert!(k >= 2);
    let size = 2 * k - 1;
    let zero = Poly::zero(k);
    let mut rows = Vec::with_capacity(size);
    for j in 2..=k {
        let mut row = vec![zero.clone(); size];
        for p in 1..=k {
            row[j + p - 2] = Poly::var(k, p).scale(&int(p as i64));
        }
        rows.push(row);
    }
    for h in 1..=k {
        let mut row = vec![zero.clone(); size];
        row[h - 1] = Poly::constant(k, int(k as i64));
        for p in 1..k {
            row[h + p - 1] = Poly::var(k, p).scale(&int((k - p) as i64));
        }
        rows.push(row);
    }
    PolyMatrix::new(k, rows)
}

/// Outcome of comparing a structured determinant against its predicted
/// multiple of the discriminant.
#[derive(Clone, Debug)]
pub struct LemmaCheck {
    pub k: usize,
    pub matches: bool,
    /// The sign eps with det = eps * predicted modulus, meaningful only
    /// when `matches` is set.
    pub eps: i64,
    pub det_text: String,
}

/// det(pencil) ?= eps * s_k * Delta for some sign eps.
pub fn lemma_determinant_check(k: usize) -> LemmaCheck {
    let det = lemma_determinant_matrix(k).determinant();
    let predicted = &Poly::var(k, k) * &discriminant(k);
    check_against(k, det, predicted)
}

/// det(manquant) ?= eps * (-k)^{k-1} * Delta for some sign eps.
pub fn lemma_manquant_check(k: usize) -> LemmaCheck {
    let det = lemma_manquant_matrix(k).determinant();
    let mut modulus = int(1);
    for _ in 0..k - 1 {
        modulus = modulus * int(-(k as i64));
    }
    let predicted = discriminant(k).scale(&modulus);
    check_against(k, det, predicted)
}

fn check_against(k: usize, det: Poly, predicted: Poly) -> LemmaCheck {
    let det_text = det.to_text();
    for eps in [1i64, -1] {
        if det == predicted.scale(&int(eps)) {
            return LemmaCheck {
                k,
                matches: true,
                eps,
                det_text,
            };
        }
    }
    LemmaCheck {
        k,
        matches: false,
        eps: 0,
        det_text,
    }
}
