//! Exact computation of the Taylor expansion, near the root -1, of the
//! universal monic equation of degree k
//!
//!   z^k + sum_{h=1..k} (-1)^h s_h z^{k-h} - (-1)^k = 0
//!
//! together with mechanical verification of the operator identities,
//! annihilation relations, determinant identities and monomial normal forms
//! that underpin the construction.
//!
//! Layout:
//! - [`multiindex`]: exponent-vector combinatorics (length, weight,
//!   equivalence classes, minimal forms, the cone S(k))
//! - [`polyring`]: sparse multivariate polynomials over exact rationals
//! - [`weyl`]: differential operators with polynomial coefficients, the named
//!   generators, Newton/DN families and the Newton-basis semidecision
//! - [`detres`]: fraction-free determinants, resultants, the discriminant and
//!   the two determinant lemmas
//! - [`taylor`]: the coefficient table C_{q,r} and series assembly
//! - [`oracle`]: independent ground truth (Newton iteration, k=2 radical
//!   series)
//! - [`verify`]: named check suites shared by the CLI and the test harness

pub mod multiindex;
pub mod polyring;
pub mod weyl;
pub mod detres;
pub mod taylor;
pub mod oracle;
pub mod verify;
