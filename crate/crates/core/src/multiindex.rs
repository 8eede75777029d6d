//! Multi-index combinatorics on the exponent lattice N^k.
//!
//! A multi-index alpha = (a_1,...,a_k) carries two gradings: its length
//! |alpha| = sum a_h and its weight w(alpha) = sum h*a_h. Two indices are
//! equivalent (written alpha # beta) when both gradings agree; the classes
//! are indexed by pairs (q, r) with r in [q, k*q]. Each class owns a unique
//! minimal representative of shape x_1^p x_k^s or x_1^p x_j x_k^s with
//! j in [2, k-1], reachable from any member by the rewrite
//!
//!   x_r x_j -> x_1 x_{r+j-1}  (r+j-1 <= k),   x_r x_j -> x_k x_{r+j-k}  (else).
//!
//! The module also parametrizes the determinantal cone S(k) cut out by the
//! 2x2 minors eta_p eta_q - eta_{p+1} eta_{q-1} and evaluates those minors at
//! points, both exactly and in floating point.

use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Mul, Neg, Sub};

/// Exponent vector in N^k. The derived `Ord` is lexicographic, which the
/// polynomial and operator layers reuse as their term key order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(k: usize) -> Self {
        MultiIndex(vec![0; k])
    }

    /// Unit index e_h for the 1-based position h.
    pub fn unit(k: usize, h: usize) -> Self {
        assert!(
            (1..=k).contains(&h),
            "unit index position {h} out of range 1..={k}"
        );
        let mut v = vec![0; k];
        v[h - 1] = 1;
        MultiIndex(v)
    }

    /// Ambient dimension k (number of slots, not the length grading).
    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// |alpha| = sum of the entries.
    pub fn length(&self) -> u32 {
        self.0.iter().sum()
    }

    /// w(alpha) = sum of h * a_h over 1-based positions h.
    pub fn weight(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &a)| (i as u32 + 1) * a)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// Entrywise sum.
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.arity(), other.arity(), "multi-index arity mismatch");
        MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }

    /// Entrywise difference, `None` when any entry would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        assert_eq!(self.arity(), other.arity(), "multi-index arity mismatch");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<u32>>>()
            .map(MultiIndex)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Class label (q, r) = (length, weight). Indexes a nonempty class exactly
/// when q = r = 0 or q >= 1 and r in [q, k*q].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct QRKey {
    pub q: u32,
    pub r: u32,
}

impl QRKey {
    pub fn new(q: u32, r: u32) -> Self {
        QRKey { q, r }
    }

    /// Whether the (q, r) class is nonempty in ambient dimension k.
    pub fn in_range(&self, k: usize) -> bool {
        let k = k as u32;
        self.r >= self.q && self.r <= k * self.q
    }
}

impl fmt::Display for QRKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.q, self.r)
    }
}

/// Whether alpha # beta, i.e. both the length and the weight agree.
pub fn equivalent(alpha: &MultiIndex, beta: &MultiIndex) -> bool {
    assert_eq!(alpha.arity(), beta.arity(), "multi-index arity mismatch");
    alpha.length() == beta.length() && alpha.weight() == beta.weight()
}

/// All alpha in N^k with |alpha| = q and w(alpha) = r, in decreasing
/// lexicographic order of the exponent vector (so x_1 x_3 precedes x_2^2).
/// Empty exactly when the key is out of range.
pub fn enumerate_class(k: usize, key: QRKey) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    if key.q == 0 {
        if key.r == 0 {
            out.push(MultiIndex::zero(k));
        }
        return out;
    }
    if !key.in_range(k) {
        return out;
    }
    let mut prefix = Vec::with_capacity(k);
    fill(k, 1, key.q, key.r, &mut prefix, &mut out);
    return out;

    // Choose a_h downward so the overall output comes out in decreasing lex
    // order; prune with the bound h*rem_q <= rem_r <= k*rem_q on what the
    // remaining positions can absorb.
    fn fill(
        k: usize,
        h: usize,
        rem_q: u32,
        rem_r: u32,
        prefix: &mut Vec<u32>,
        out: &mut Vec<MultiIndex>,
    ) {
        let hw = h as u32;
        if h == k {
            if rem_r == hw * rem_q {
                let mut v = prefix.clone();
                v.push(rem_q);
                out.push(MultiIndex(v));
            }
            return;
        }
        for a in (0..=rem_q.min(rem_r / hw)).rev() {
            let q2 = rem_q - a;
            let r2 = rem_r - hw * a;
            if (hw + 1) * q2 <= r2 && r2 <= (k as u32) * q2 {
                prefix.push(a);
                fill(k, h + 1, q2, r2, prefix, out);
                prefix.pop();
            }
        }
    }
}

/// The unique minimal representative of the (q, r) class, solved in closed
/// form from the two admissible shapes; `None` when the class is empty.
///
/// With d = r - q: if (k-1) | d the shape is x_1^{q - d/(k-1)} x_k^{d/(k-1)},
/// otherwise the middle variable is x_j with j - 1 = d mod (k-1) and the
/// remaining d - (j-1) units of excess weight go to x_k.
pub fn minimal_form(k: usize, key: QRKey) -> Option<MultiIndex> {
    if key.q == 0 {
        return (key.r == 0).then(|| MultiIndex::zero(k));
    }
    if !key.in_range(k) {
        return None;
    }
    if k == 1 {
        // Only x_1^q exists and r = q is forced.
        return Some(MultiIndex(vec![key.q]));
    }
    let d = key.r - key.q;
    let step = (k - 1) as u32;
    let mut v = vec![0u32; k];
    if d % step == 0 {
        let s = d / step;
        v[0] = key.q - s;
        v[k - 1] += s;
    } else {
        let j = (d % step) as usize + 1;
        let s = (d - (j as u32 - 1)) / step;
        v[0] = key.q - 1 - s;
        v[j - 1] += 1;
        v[k - 1] += s;
    }
    Some(MultiIndex(v))
}

/// Reduce alpha to its minimal representative by repeatedly rewriting a pair
/// of middle factors (positions 2..k-1), as in the inductive reduction
/// argument. Terminates because each step lowers the middle-exponent sum.
pub fn reduce_to_minimal(alpha: &MultiIndex) -> MultiIndex {
    let k = alpha.arity();
    let mut v = alpha.0.clone();
    loop {
        let mut middles = (2..k).filter(|&h| v[h - 1] > 0);
        let Some(r) = middles.next() else { break };
        let j = if v[r - 1] >= 2 {
            r
        } else if let Some(j) = middles.next() {
            j
        } else {
            break;
        };
        v[r - 1] -= 1;
        v[j - 1] -= 1;
        if r + j - 1 <= k {
            v[0] += 1;
            v[r + j - 2] += 1;
        } else {
            v[k - 1] += 1;
            v[r + j - k - 1] += 1;
        }
    }
    MultiIndex(v)
}

/// A point eta in the ambient space of the cone S(k), over any scalar that
/// supports exact or floating ring arithmetic.
#[derive(Clone, PartialEq, Debug)]
pub struct SurfacePoint<T> {
    pub eta: Vec<T>,
}

/// The two parametrizations of S(k).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Chart {
    /// eta_h = zeta0 * (-zeta1)^{h-1}
    Chart1,
    /// eta_h = (-zeta0)^{k-h} * zeta1
    ChartK,
}

/// Scalar operations needed by the surface parametrization and minors.
pub trait SurfaceScalar:
    Clone + Zero + One + Neg<Output = Self> + Mul<Output = Self> + Sub<Output = Self>
{
}

impl<T> SurfaceScalar for T where
    T: Clone + Zero + One + Neg<Output = T> + Mul<Output = T> + Sub<Output = T>
{
}

fn pow<T: SurfaceScalar>(base: &T, n: usize) -> T {
    let mut acc = T::one();
    for _ in 0..n {
        acc = acc * base.clone();
    }
    acc
}

/// The point of S(k) with the given chart parameters.
pub fn sk_point<T: SurfaceScalar>(k: usize, zeta0: &T, zeta1: &T, chart: Chart) -> SurfacePoint<T> {
    assert!(k >= 1, "sk_point needs k >= 1");
    let eta = (1..=k)
        .map(|h| match chart {
            Chart1 => zeta0.clone() * pow(&zeta1.clone().neg(), h - 1),
            ChartK => pow(&zeta0.clone().neg(), k - h) * zeta1.clone(),
        })
        .collect();
    SurfacePoint { eta }
}
use Chart::{Chart1, ChartK};

/// All minor values eta_p eta_q - eta_{p+1} eta_{q-1} for p in [1, k-1],
/// q in [2, k], in row-major (p, q) order. Every value vanishes exactly on
/// points produced by `sk_point`.
pub fn sk_minors<T: SurfaceScalar>(point: &SurfacePoint<T>) -> Vec<T> {
    let k = point.eta.len();
    let e = &point.eta;
    let mut out = Vec::with_capacity(k.saturating_sub(1).pow(2));
    for p in 1..k {
        for q in 2..=k {
            out.push(e[p - 1].clone() * e[q - 1].clone() - e[p].clone() * e[q - 2].clone());
        }
    }
    out
}

/// Floating membership test: all minors below 1e-10 scaled by max |eta_h|^2
/// (the minors are quadratic in eta, so the tolerance tracks the data size).
pub fn on_surface_f64(point: &SurfacePoint<num_complex::Complex64>) -> bool {
    let scale = point
        .eta
        .iter()
        .map(|e| e.norm_sqr())
        .fold(1.0f64, f64::max);
    sk_minors(point).iter().all(|m| m.norm() <= 1e-10 * scale)
}
