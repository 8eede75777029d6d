//! Differential operators with polynomial coefficients: the Weyl algebra
//! C[s]<d> with the relation d_i s_j = s_j d_i + delta_ij.
//!
//! Operators are kept in canonical form, every polynomial coefficient to the
//! left of every derivative, so an operator identity holds exactly when the
//! difference normalizes to the empty term map. `compose` renormalizes
//! eagerly through the Leibniz rule.
//!
//! Besides the generic algebra this module owns the named generators
//!
//!   A_{p,q} = d_p d_q - d_{p+1} d_{q-1}
//!   E       = sum s_h d_h
//!   T^m     = d_1 d_{m-1} + d_m E
//!   U_0     = sum h s_h d_h            (Euler field)
//!   U_{-1}  = sum (k-h) s_h d_{h+1}    (s_0 = 1)
//!   U_1     = sum (s_1 s_h - (h+1) s_{h+1}) d_h   (s_{k+1} = 0)
//!   U_0^    = U_0 - k d_k              (the translate to the base point)
//!
//! the Newton power sums N_m and the division family DN_m, and the
//! Newton-basis semidecision: every operator in the annihilator ideal kills
//! every N_m, so checking m <= M gives a cheap necessary condition for
//! membership (and by the characteristic-zero criterion it is conclusive in
//! the limit).

use crate::multiindex::MultiIndex;
use crate::polyring::{int, Poly, Rational};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffOp {
    k: usize,
    terms: BTreeMap<MultiIndex, Poly>,
}

impl DiffOp {
    pub fn zero(k: usize) -> Self {
        DiffOp {
            k,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(k: usize, c: Rational) -> Self {
        DiffOp::from_poly(Poly::constant(k, c))
    }

    /// The order-zero operator "multiply by p".
    pub fn from_poly(p: Poly) -> Self {
        let mut op = DiffOp::zero(p.nvars());
        op.add_term(MultiIndex::zero(p.nvars()), p);
        op
    }

    /// The derivative d_h, 1-based.
    pub fn partial(k: usize, h: usize) -> Self {
        let mut op = DiffOp::zero(k);
        op.add_term(MultiIndex::unit(k, h), Poly::one(k));
        op
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Max derivative length among the terms; 0 for the zero operator.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|b| b.length()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Poly)> {
        self.terms.iter()
    }

    /// Accumulate c(s) * d^beta, dropping cancelled terms.
    pub fn add_term(&mut self, beta: MultiIndex, c: Poly) {
        assert_eq!(beta.arity(), self.k, "derivative exponent arity mismatch");
        assert_eq!(c.nvars(), self.k, "coefficient variable count mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(beta) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = &*o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &DiffOp) -> DiffOp {
        assert_eq!(self.k, rhs.k, "ambient k mismatch");
        let mut out = self.clone();
        for (b, c) in &rhs.terms {
            out.add_term(b.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &DiffOp) -> DiffOp {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> DiffOp {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> DiffOp {
        let mut out = DiffOp::zero(self.k);
        for (b, p) in &self.terms {
            out.add_term(b.clone(), p.scale(c));
        }
        out
    }

    /// Left-multiply by a polynomial (polynomials commute past nothing here:
    /// they just join the coefficients).
    pub fn poly_mul(&self, p: &Poly) -> DiffOp {
        assert_eq!(p.nvars(), self.k, "coefficient variable count mismatch");
        let mut out = DiffOp::zero(self.k);
        for (b, c) in &self.terms {
            out.add_term(b.clone(), p * c);
        }
        out
    }

    /// Apply to a polynomial: sum of c(s) * d^beta(p).
    pub fn apply(&self, p: &Poly) -> Poly {
        assert_eq!(p.nvars(), self.k, "ambient k mismatch");
        let mut acc = Poly::zero(self.k);
        for (beta, c) in &self.terms {
            let mut dp = p.clone();
            'outer: for (i, &e) in beta.0.iter().enumerate() {
                for _ in 0..e {
                    dp = dp.partial_derivative(i + 1);
                    if dp.is_zero() {
                        break 'outer;
                    }
                }
            }
            if !dp.is_zero() {
                acc = &acc + &(c * &dp);
            }
        }
        acc
    }

    /// Noncommutative product, renormalized to canonical form:
    /// d^beta (b(s) d^gamma) = sum over delta <= beta of
    /// binom(beta, delta) d^delta(b) d^{beta - delta + gamma}.
    pub fn compose(&self, rhs: &DiffOp) -> DiffOp {
        assert_eq!(self.k, rhs.k, "ambient k mismatch");
        let mut out = DiffOp::zero(self.k);
        for (beta, a) in &self.terms {
            for (gamma, b) in &rhs.terms {
                for delta in sub_indices(beta) {
                    let mut db = b.clone();
                    for (i, &e) in delta.0.iter().enumerate() {
                        for _ in 0..e {
                            db = db.partial_derivative(i + 1);
                        }
                    }
                    if db.is_zero() {
                        continue;
                    }
                    let c = binom_product(beta, &delta);
                    let coeff = (a * &db).scale(&int(c as i64));
                    let exp = beta
                        .checked_sub(&delta)
                        .expect("delta <= beta by construction")
                        .add(gamma);
                    out.add_term(exp, coeff);
                }
            }
        }
        out
    }

    /// Principal symbol: top-order derivative exponents d^beta become e^beta
    /// in a 2k-variable ring (s_1..s_k, e_1..e_k); lower-order terms drop.
    pub fn symbol(&self) -> Poly {
        assert!(!self.is_zero(), "the zero operator has no symbol");
        let ord = self.order();
        let k = self.k;
        let mut out = Poly::zero(2 * k);
        for (beta, c) in &self.terms {
            if beta.length() != ord {
                continue;
            }
            let mut eta = vec![0u32; 2 * k];
            eta[k..].copy_from_slice(&beta.0);
            let m = Poly::monomial(MultiIndex(eta), Rational::one());
            out = &out + &(&c.extend_vars(k) * &m);
        }
        out
    }

    /// Diagnostic text form: `(coeff) * d1^a1 d2^a2` terms joined by ` + `,
    /// ordered like the polynomial text form.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut keys: Vec<&MultiIndex> = self.terms.keys().collect();
        keys.sort_by(|a, b| a.length().cmp(&b.length()).then_with(|| b.cmp(a)));
        let rendered: Vec<String> = keys
            .into_iter()
            .map(|b| {
                let c = self.terms[b].to_text();
                if b.is_zero() {
                    format!("({c})")
                } else {
                    let ds: Vec<String> = b
                        .0
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| format!("d{}^{}", i + 1, e))
                        .collect();
                    format!("({c}) * {}", ds.join(" "))
                }
            })
            .collect();
        rendered.join(" + ")
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// All delta with delta <= beta entrywise.
fn sub_indices(beta: &MultiIndex) -> Vec<MultiIndex> {
    let mut out = vec![MultiIndex(Vec::with_capacity(beta.arity()))];
    for &e in &beta.0 {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for prefix in &out {
            for d in 0..=e {
                let mut v = prefix.0.clone();
                v.push(d);
                next.push(MultiIndex(v));
            }
        }
        out = next;
    }
    out
}

fn binom_product(beta: &MultiIndex, delta: &MultiIndex) -> u64 {
    fn binom(n: u32, k: u32) -> u64 {
        let mut acc = 1u64;
        for i in 0..k as u64 {
            acc = acc * (n as u64 - i) / (i + 1);
        }
        acc
    }
    beta.0
        .iter()
        .zip(&delta.0)
        .map(|(&b, &d)| binom(b, d))
        .product()
}

// Named generators. Index conventions are 1-based throughout, matching the
// subscripts in the displayed formulas.

/// A_{p,q} = d_p d_q - d_{p+1} d_{q-1}, for p in [1, k-1], q in [2, k].
pub fn gen_a(k: usize, p: usize, q: usize) -> DiffOp {
    assert!((1..k).contains(&p), "gen_a: p={p} out of [1,{}]", k - 1);
    assert!((2..=k).contains(&q), "gen_a: q={q} out of [2,{k}]");
    let d = |h: usize| DiffOp::partial(k, h);
    d(p).compose(&d(q)).sub(&d(p + 1).compose(&d(q - 1)))
}

/// E = sum over h of s_h d_h.
pub fn gen_e(k: usize) -> DiffOp {
    let mut op = DiffOp::zero(k);
    for h in 1..=k {
        op.add_term(MultiIndex::unit(k, h), Poly::var(k, h));
    }
    op
}

/// T^m = d_1 d_{m-1} + d_m E, canonicalized (so d_m E = E d_m + d_m).
pub fn gen_t(k: usize, m: usize) -> DiffOp {
    assert!((2..=k).contains(&m), "gen_t: m={m} out of [2,{k}]");
    let d = |h: usize| DiffOp::partial(k, h);
    d(1).compose(&d(m - 1)).add(&d(m).compose(&gen_e(k)))
}

/// U_0 - lambda, with U_0 = sum h s_h d_h.
pub fn gen_u0(k: usize, lambda: Rational) -> DiffOp {
    let mut op = DiffOp::constant(k, -lambda);
    for h in 1..=k {
        op.add_term(MultiIndex::unit(k, h), Poly::var(k, h).scale(&int(h as i64)));
    }
    op
}

/// U_{-1} = sum_{h=0}^{k-1} (k-h) s_h d_{h+1} with s_0 = 1.
pub fn gen_um1(k: usize) -> DiffOp {
    let mut op = DiffOp::zero(k);
    op.add_term(MultiIndex::unit(k, 1), Poly::constant(k, int(k as i64)));
    for h in 1..k {
        op.add_term(
            MultiIndex::unit(k, h + 1),
            Poly::var(k, h).scale(&int((k - h) as i64)),
        );
    }
    op
}

/// U_1 = sum_h (s_1 s_h - (h+1) s_{h+1}) d_h with s_{k+1} = 0.
pub fn gen_u1(k: usize) -> DiffOp {
    let mut op = DiffOp::zero(k);
    for h in 1..=k {
        let mut c = &Poly::var(k, 1) * &Poly::var(k, h);
        if h < k {
            c = &c - &Poly::var(k, h + 1).scale(&int(h as i64 + 1));
        }
        op.add_term(MultiIndex::unit(k, h), c);
    }
    op
}

/// U_0^ - lambda = sum h s_h d_h - k d_k - lambda: the Euler field recentred
/// at the expansion base point (0,...,0,-1).
pub fn gen_u0_shifted(k: usize, lambda: Rational) -> DiffOp {
    let mut op = gen_u0(k, lambda);
    op.add_term(MultiIndex::unit(k, k), Poly::constant(k, int(-(k as i64))));
    op
}

/// U_p for p in {-1, 0, 1}.
pub fn gen_up(k: usize, p: i32) -> DiffOp {
    match p {
        -1 => gen_um1(k),
        0 => gen_u0(k, Rational::zero()),
        1 => gen_u1(k),
        _ => panic!("U_{p} is not constructed in these coordinates"),
    }
}

fn newton_cache() -> &'static Mutex<HashMap<(usize, u32), Poly>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Poly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn dn_cache() -> &'static Mutex<HashMap<(usize, i64), Poly>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, i64), Poly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Newton power sum N_m in the elementary symmetric variables, N_0 = k,
/// via the classical identities
/// N_m = sum_{h=1}^{min(m-1,k)} (-1)^{h-1} s_h N_{m-h} + [m <= k] (-1)^{m-1} m s_m.
pub fn newton_polynomial(k: usize, m: u32) -> Poly {
    let mut cache = newton_cache().lock().unwrap();
    if let Some(p) = cache.get(&(k, m)) {
        return p.clone();
    }
    for j in 0..=m {
        if cache.contains_key(&(k, j)) {
            continue;
        }
        let p = if j == 0 {
            Poly::constant(k, int(k as i64))
        } else {
            let mut acc = Poly::zero(k);
            for h in 1..=(j - 1).min(k as u32) {
                let sign = if h % 2 == 1 { 1 } else { -1 };
                let prev = cache.get(&(k, j - h)).expect("built in order").clone();
                acc = &acc + &(&Poly::var(k, h as usize) * &prev).scale(&int(sign));
            }
            if j <= k as u32 {
                let sign = if j % 2 == 1 { 1 } else { -1 };
                acc = &acc + &Poly::var(k, j as usize).scale(&int(sign * j as i64));
            }
            acc
        };
        cache.insert((k, j), p);
    }
    cache[&(k, m)].clone()
}

/// The division family DN_m: zero for m in [-k+1, -1], DN_0 = 1, and for
/// m >= 1 determined by sum_{h=0}^k (-1)^h s_h DN_{m-h} = 0 (s_0 = 1).
pub fn dn_polynomial(k: usize, m: i64) -> Poly {
    assert!(
        m >= -(k as i64) + 1,
        "DN_{m} is undefined for k={k} (needs m >= {})",
        -(k as i64) + 1
    );
    if m < 0 {
        return Poly::zero(k);
    }
    let mut cache = dn_cache().lock().unwrap();
    if let Some(p) = cache.get(&(k, m)) {
        return p.clone();
    }
    for j in 0..=m {
        if cache.contains_key(&(k, j)) {
            continue;
        }
        let p = if j == 0 {
            Poly::one(k)
        } else {
            let mut acc = Poly::zero(k);
            for h in 1..=k as i64 {
                if j - h < 0 {
                    break;
                }
                let prev = if j - h == 0 {
                    Poly::one(k)
                } else {
                    cache.get(&(k, j - h)).expect("built in order").clone()
                };
                let sign = if h % 2 == 1 { 1 } else { -1 };
                acc = &acc + &(&Poly::var(k, h as usize) * &prev).scale(&int(sign));
            }
            acc
        };
        cache.insert((k, j), p);
    }
    cache[&(k, m)].clone()
}

/// Semidecision for membership in the annihilator ideal: does d kill N_m for
/// every 0 <= m <= M? The conventional default depth is 2*order(d) + 2k.
pub fn annihilates_newton(d: &DiffOp, m_max: u32) -> bool {
    (0..=m_max).all(|m| d.apply(&newton_polynomial(d.k(), m)).is_zero())
}

pub fn default_newton_depth(d: &DiffOp) -> u32 {
    2 * d.order() + 2 * d.k() as u32
}

/// The named identities. `Eh`, `E1` and `Commutator` build LHS - RHS, which
/// must normalize to the literal zero operator; `Fh` and `F1` build the
/// left-hand operator itself, whose ideal membership is then checked through
/// `annihilates_newton`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Identity {
    Eh { h: usize },
    E1,
    Fh { h: usize },
    F1,
    Commutator { p: i32, q: i32 },
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identity::Eh { h } => write!(f, "E_{h}"),
            Identity::E1 => write!(f, "E_1"),
            Identity::Fh { h } => write!(f, "F_{h}"),
            Identity::F1 => write!(f, "F_1"),
            Identity::Commutator { p, q } => write!(f, "commutator({p},{q})"),
        }
    }
}

pub fn identity_residual(k: usize, id: Identity) -> DiffOp {
    let d = |h: usize| DiffOp::partial(k, h);
    let one = Rational::one;
    match id {
        // d_h (U_0 - 1) + d_{h-1} U_{-1} = k T^h + sum_{q=1}^{k-1} (k-q) s_q A_{h-1, q+1}
        Identity::Eh { h } => {
            assert!((2..=k).contains(&h), "E_h needs h in [2,{k}], got {h}");
            let lhs = d(h)
                .compose(&gen_u0(k, one()))
                .add(&d(h - 1).compose(&gen_um1(k)));
            let mut rhs = gen_t(k, h).scale(&int(k as i64));
            for q in 1..k {
                let c = Poly::var(k, q).scale(&int((k - q) as i64));
                rhs = rhs.add(&gen_a(k, h - 1, q + 1).poly_mul(&c));
            }
            lhs.sub(&rhs)
        }
        // -d_1 (U_0 - 1) + E U_{-1} = sum_{q=1}^{k-1} (k-q) s_q T^{q+1}
        Identity::E1 => {
            let lhs = gen_e(k)
                .compose(&gen_um1(k))
                .sub(&d(1).compose(&gen_u0(k, one())));
            let mut rhs = DiffOp::zero(k);
            for q in 1..k {
                let c = Poly::var(k, q).scale(&int((k - q) as i64));
                rhs = rhs.add(&gen_t(k, q + 1).poly_mul(&c));
            }
            lhs.sub(&rhs)
        }
        // d_h U_1 + d_{h-1} (U_0 + 1), claimed to lie in the ideal
        Identity::Fh { h } => {
            assert!((2..=k).contains(&h), "F_h needs h in [2,{k}], got {h}");
            d(h)
                .compose(&gen_u1(k))
                .add(&d(h - 1).compose(&gen_u0(k, -one())))
        }
        // d_1 U_1 - E (U_0 + 1), claimed to lie in the ideal
        Identity::F1 => d(1)
            .compose(&gen_u1(k))
            .sub(&gen_e(k).compose(&gen_u0(k, -one()))),
        // U_p U_q - U_q U_p - (q - p) U_{p+q}
        Identity::Commutator { p, q } => {
            assert!(
                (-1..=1).contains(&p) && (-1..=1).contains(&q),
                "commutators are only built for p,q in {{-1,0,1}}"
            );
            let up = gen_up(k, p);
            let uq = gen_up(k, q);
            let mut res = up.compose(&uq).sub(&uq.compose(&up));
            if p != q {
                res = res.sub(&gen_up(k, p + q).scale(&int((q - p) as i64)));
            }
            res
        }
    }
}
