//! Sparse multivariate polynomials over exact rationals.
//!
//! `Poly` is the coefficient ring for every symbolic computation here:
//! variables are s_1..s_k by default, and the same representation carries the
//! extended rings used elsewhere (symbol variables e_1..e_k adjoined, or a
//! resultant variable z) by simply widening the variable count; display takes
//! the variable names as a parameter so the extensions stay readable.
//!
//! Arithmetic is exact: coefficients are `BigRational`, zero coefficients are
//! never stored, and equality is structural. The canonical text form orders
//! terms by total degree, then decreasing lexicographic exponent, rendering
//! each term as `coeff * s1^a1 s2^a2 ...`.

use crate::multiindex::{enumerate_class, MultiIndex, QRKey};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n as u64).map(BigInt::from).product()
}

/// Graded lexicographic order: total degree first, then the lexicographic
/// order on exponent vectors. This is the term order used for display and
/// for leading terms in exact division.
pub fn grlex(a: &MultiIndex, b: &MultiIndex) -> std::cmp::Ordering {
    a.length().cmp(&b.length()).then_with(|| a.cmp(b))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(MultiIndex::zero(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rational::one())
    }

    /// The variable s_i, 1-based.
    pub fn var(nvars: usize, i: usize) -> Self {
        Poly::monomial(MultiIndex::unit(nvars, i), Rational::one())
    }

    pub fn monomial(alpha: MultiIndex, c: Rational) -> Self {
        let mut p = Poly::zero(alpha.arity());
        p.add_term(alpha, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|a| a.is_zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Rational {
        self.terms.get(alpha).cloned().unwrap_or_else(Rational::zero)
    }

    /// Max total degree of a term; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|a| a.length()).max().unwrap_or(0)
    }

    /// Accumulate c * x^alpha, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, alpha: MultiIndex, c: Rational) {
        assert_eq!(alpha.arity(), self.nvars, "term arity mismatch");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(alpha);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        let mut out = Poly::zero(self.nvars);
        for (a, v) in &self.terms {
            out.terms.insert(a.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Formal derivative with respect to s_i (1-based).
    pub fn partial_derivative(&self, i: usize) -> Poly {
        assert!(
            (1..=self.nvars).contains(&i),
            "derivative index {i} out of range 1..={}",
            self.nvars
        );
        let mut out = Poly::zero(self.nvars);
        for (a, c) in &self.terms {
            let e = a.0[i - 1];
            if e == 0 {
                continue;
            }
            let mut b = a.clone();
            b.0[i - 1] -= 1;
            out.add_term(b, c * int(e as i64));
        }
        out
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "evaluation point length mismatch");
        let mut acc = Rational::zero();
        for (a, c) in &self.terms {
            let mut m = c.clone();
            for (x, &e) in point.iter().zip(&a.0) {
                for _ in 0..e {
                    m *= x;
                }
            }
            acc += m;
        }
        acc
    }

    pub fn evaluate_c64(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.nvars, "evaluation point length mismatch");
        let mut acc = Complex64::ZERO;
        for (a, c) in &self.terms {
            let mut m = Complex64::new(rational_to_f64(c), 0.0);
            for (x, &e) in point.iter().zip(&a.0) {
                m *= x.powu(e);
            }
            acc += m;
        }
        acc
    }

    /// The sum of the terms of exact total degree d.
    pub fn degree_component(&self, d: u32) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (a, c) in &self.terms {
            if a.length() == d {
                out.terms.insert(a.clone(), c.clone());
            }
        }
        out
    }

    /// Drop all terms of total degree above `maxd`.
    pub fn truncate_total_degree(&self, maxd: u32) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (a, c) in &self.terms {
            if a.length() <= maxd {
                out.terms.insert(a.clone(), c.clone());
            }
        }
        out
    }

    /// Reinterpret in a wider ring: same exponents, `extra` fresh variables
    /// appended with exponent zero.
    pub fn extend_vars(&self, extra: usize) -> Poly {
        let mut out = Poly::zero(self.nvars + extra);
        for (a, c) in &self.terms {
            let mut v = a.0.clone();
            v.extend(std::iter::repeat(0).take(extra));
            out.terms.insert(MultiIndex(v), c.clone());
        }
        out
    }

    fn leading(&self) -> Option<(&MultiIndex, &Rational)> {
        self.terms.iter().max_by(|(a, _), (b, _)| grlex(a, b))
    }

    /// Exact division: `Some(q)` with `q * d == self` when the quotient
    /// exists in the ring, `None` otherwise. Used by the fraction-free
    /// determinant, where divisibility is guaranteed.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        assert_eq!(self.nvars, d.nvars, "variable count mismatch");
        assert!(!d.is_zero(), "division by the zero polynomial");
        let (dlt, dlc) = d.leading().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((rlt, rlc)) = rem.leading() {
            let qexp = rlt.checked_sub(dlt)?;
            let qc = rlc / dlc;
            let t = Poly::monomial(qexp, qc);
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Canonical text form with explicit variable names.
    pub fn to_text_with(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.nvars, "name list length mismatch");
        if self.is_zero() {
            return "0".to_string();
        }
        let mut keys: Vec<&MultiIndex> = self.terms.keys().collect();
        keys.sort_by(|a, b| a.length().cmp(&b.length()).then_with(|| b.cmp(a)));
        let rendered: Vec<String> = keys
            .into_iter()
            .map(|a| {
                let c = &self.terms[a];
                if a.is_zero() {
                    format!("{c}")
                } else {
                    let vars: Vec<String> = a
                        .0
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| format!("{}^{}", names[i], e))
                        .collect();
                    format!("{c} * {}", vars.join(" "))
                }
            })
            .collect();
        rendered.join(" + ")
    }

    /// Text form with the default sigma names s1..sk.
    pub fn to_text(&self) -> String {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("s{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        self.to_text_with(&refs)
    }
}

pub fn rational_to_f64(c: &Rational) -> f64 {
    // to_f64 only fails on overflow, far beyond anything these tables hold
    c.to_f64().expect("rational out of f64 range")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (a, c) in &rhs.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (a, c) in &rhs.terms {
            out.add_term(a.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.add(b), ca * cb);
            }
        }
        out
    }
}

/// m_{q,r} = sum over the (q, r) class of s^alpha / alpha!; the zero
/// polynomial when the class is empty.
pub fn mqr_polynomial(k: usize, key: QRKey) -> Poly {
    let mut p = Poly::zero(k);
    for alpha in enumerate_class(k, key) {
        let fact: BigInt = alpha.0.iter().map(|&e| factorial(e)).product();
        let c = Rational::new(BigInt::one(), fact);
        p.add_term(alpha, c);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sp(nvars: usize, terms: &[(&[u32], i64, i64)]) -> Poly {
        let mut p = Poly::zero(nvars);
        for (e, n, d) in terms {
            p.add_term(MultiIndex(e.to_vec()), rat(*n, *d));
        }
        p
    }

    #[test]
    fn ring_basics() {
        let s1 = Poly::var(2, 1);
        let s2 = Poly::var(2, 2);
        assert!((&s1 + &(-&s1)).is_zero());
        assert_eq!(&s1 * &s2, sp(2, &[(&[1, 1], 1, 1)]));
        assert_eq!(s1.pow(2).scale(&rat(1, 2)), sp(2, &[(&[2, 0], 1, 2)]));
    }

    #[test]
    fn derivative_golden() {
        let s1 = Poly::var(2, 1);
        assert_eq!(s1.pow(2).partial_derivative(1), sp(2, &[(&[1, 0], 2, 1)]));
        assert!(s1.partial_derivative(2).is_zero());
        let p = sp(2, &[(&[1, 2], 1, 1)]); // s1 s2^2
        assert_eq!(p.partial_derivative(2), sp(2, &[(&[1, 1], 2, 1)]));
    }

    #[test]
    fn evaluate_golden() {
        // s1^2 - 4 s2 at (2, 1) -> 0
        let p = sp(2, &[(&[2, 0], 1, 1), (&[0, 1], -4, 1)]);
        assert!(p.evaluate(&[int(2), int(1)]).is_zero());
        // m_{1,2} = s2 at (5, 7) -> 7
        assert_eq!(
            mqr_polynomial(2, QRKey::new(1, 2)).evaluate(&[int(5), int(7)]),
            int(7)
        );
        let p = sp(2, &[(&[1, 1], 1, 1)]);
        assert_eq!(p.evaluate(&[rat(1, 2), rat(1, 3)]), rat(1, 6));
    }

    #[test]
    fn mqr_golden() {
        for k in 2..=5usize {
            for h in 1..=k {
                assert_eq!(
                    mqr_polynomial(k, QRKey::new(1, h as u32)),
                    Poly::var(k, h),
                    "m_1h should be s_h"
                );
            }
        }
        assert_eq!(mqr_polynomial(3, QRKey::new(0, 0)), Poly::one(3));
        assert_eq!(mqr_polynomial(2, QRKey::new(2, 2)), sp(2, &[(&[2, 0], 1, 2)]));
        // m_{2,4} for k=3: s1 s3 + s2^2/2
        assert_eq!(
            mqr_polynomial(3, QRKey::new(2, 4)),
            sp(3, &[(&[1, 0, 1], 1, 1), (&[0, 2, 0], 1, 2)])
        );
        assert!(mqr_polynomial(2, QRKey::new(2, 5)).is_zero());
    }

    #[test]
    fn text_form() {
        let p = sp(2, &[(&[0, 0], -1, 1), (&[0, 1], 1, 2), (&[2, 0], -1, 8), (&[0, 2], 1, 8)]);
        assert_eq!(p.to_text(), "-1 + 1/2 * s2^1 + -1/8 * s1^2 + 1/8 * s2^2");
        assert_eq!(Poly::zero(3).to_text(), "0");
        let q = sp(2, &[(&[1, 2], 3, 1)]);
        assert_eq!(q.to_text(), "3 * s1^1 s2^2");
    }

    #[test]
    fn exact_division_roundtrip() {
        let a = sp(2, &[(&[2, 0], 1, 1), (&[0, 1], -4, 1)]);
        let b = sp(2, &[(&[1, 1], 3, 2), (&[0, 0], 1, 1)]);
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&a), Some(b.clone()));
        assert_eq!(prod.exact_div(&b), Some(a.clone()));
        // not divisible: s1 / s2
        assert_eq!(Poly::var(2, 1).exact_div(&Poly::var(2, 2)), None);
    }

    fn arb_poly(nvars: usize) -> impl Strategy<Value = Poly> {
        proptest::collection::vec(
            (
                proptest::collection::vec(0u32..4, nvars),
                -6i64..=6,
                1i64..=4,
            ),
            0..6,
        )
        .prop_map(move |ts| {
            let mut p = Poly::zero(nvars);
            for (e, n, d) in ts {
                p.add_term(MultiIndex(e), rat(n, d));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn ring_axioms((a, b, c) in (arb_poly(3), arb_poly(3), arb_poly(3))) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn partials_commute(a in arb_poly(3), i in 1usize..=3, j in 1usize..=3) {
            prop_assert_eq!(
                a.partial_derivative(i).partial_derivative(j),
                a.partial_derivative(j).partial_derivative(i)
            );
        }

        #[test]
        fn evaluation_is_multiplicative(
            a in arb_poly(2), b in arb_poly(2),
            x in -5i64..=5, y in -5i64..=5
        ) {
            let pt = [int(x), int(y)];
            prop_assert_eq!(
                (&a * &b).evaluate(&pt),
                a.evaluate(&pt) * b.evaluate(&pt)
            );
        }

        #[test]
        fn derivative_satisfies_leibniz(a in arb_poly(2), b in arb_poly(2)) {
            let lhs = (&a * &b).partial_derivative(1);
            let rhs = &(&a.partial_derivative(1) * &b) + &(&a * &b.partial_derivative(1));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn exact_div_undoes_mul(a in arb_poly(2), b in arb_poly(2)) {
            prop_assume!(!b.is_zero());
            let prod = &a * &b;
            prop_assert_eq!(prod.exact_div(&b), Some(a));
        }
    }
}
