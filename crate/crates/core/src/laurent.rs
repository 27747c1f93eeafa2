//! Truncated Laurent series over F_q with exact window bookkeeping.
//!
//! A `LaurentSeries` is a sparse map from integer exponents of t to nonzero
//! F_q coefficients, together with a half-open window `[lo, hi)`. The series
//! is guaranteed to vanish below `lo`, its coefficients are known exactly on
//! `[lo, hi)`, and nothing is known at `hi` and above unless `exact` is set,
//! in which case the stored terms are the whole series (a Laurent
//! polynomial). Arithmetic narrows windows by the standard truncation rules
//! and never invents knowledge; exact operands propagate exactness.
//!
//! No floating point enters anywhere: coefficients are finite-field elements
//! and exponents are integers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{validation, Result};
use crate::fq::{self, FqElem};

/// Default window used when inputs do not carry one.
pub const DEFAULT_WINDOW: (i64, i64) = (-64, 64);

/// Window bounds are clamped here so bookkeeping arithmetic cannot overflow;
/// `WINDOW_CAP` acts as infinity for exact series. Terms whose exponents
/// would reach the cap under arithmetic are treated as unknown and dropped,
/// demoting the result to a windowed series.
pub(crate) const WINDOW_CAP: i64 = i64::MAX / 4;

fn sat(x: i128) -> i64 {
    x.clamp(-(WINDOW_CAP as i128), WINDOW_CAP as i128) as i64
}

/// t-adic valuation of a truncated series. `Infinite` means "zero within the
/// window": no nonzero coefficient is known (and for exact series, none
/// exists).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    p: u64,
    e: u32,
    terms: BTreeMap<i64, FqElem>,
    lo: i64,
    hi: i64,
    exact: bool,
}

impl LaurentSeries {
    /// Builds a series from explicit terms, validating coefficients and the
    /// window. Duplicate exponents and exponents outside the window are
    /// rejected.
    pub fn new(
        p: u64,
        e: u32,
        terms: Vec<(i64, FqElem)>,
        window: (i64, i64),
        exact: bool,
    ) -> Result<Self> {
        fq::validate_field(p, e)?;
        let (lo, hi) = window;
        if lo >= hi {
            return validation(format!("empty window [{lo}, {hi})"));
        }
        let mut map = BTreeMap::new();
        for (k, c) in terms {
            if c.p() != p || c.e() != e {
                return validation("coefficient field does not match series field");
            }
            if c.is_zero() {
                continue;
            }
            if k < lo || k >= hi {
                return validation(format!("exponent {k} outside window [{lo}, {hi})"));
            }
            if map.insert(k, c).is_some() {
                return validation(format!("duplicate exponent {k}"));
            }
        }
        Ok(LaurentSeries::from_map(p, e, map, lo, hi, exact))
    }

    /// An exact Laurent polynomial; the window is the default widened to
    /// cover the support and 0.
    pub fn polynomial(p: u64, e: u32, terms: Vec<(i64, FqElem)>) -> Result<Self> {
        let lo = terms
            .iter()
            .map(|(k, _)| *k)
            .min()
            .unwrap_or(0)
            .min(DEFAULT_WINDOW.0);
        let hi = terms
            .iter()
            .map(|(k, _)| *k + 1)
            .max()
            .unwrap_or(0)
            .max(DEFAULT_WINDOW.1);
        LaurentSeries::new(p, e, terms, (lo, hi), true)
    }

    pub fn zero(p: u64, e: u32) -> Self {
        LaurentSeries {
            p,
            e,
            terms: BTreeMap::new(),
            lo: DEFAULT_WINDOW.0,
            hi: DEFAULT_WINDOW.1,
            exact: true,
        }
    }

    pub fn monomial(p: u64, e: u32, exponent: i64, coeff: FqElem) -> Result<Self> {
        LaurentSeries::polynomial(p, e, vec![(exponent, coeff)])
    }

    pub fn constant(c: FqElem) -> Self {
        let (p, e) = (c.p(), c.e());
        LaurentSeries::polynomial(p, e, vec![(0, c)]).expect("constant is always valid")
    }

    pub(crate) fn from_map(
        p: u64,
        e: u32,
        mut terms: BTreeMap<i64, FqElem>,
        mut lo: i64,
        mut hi: i64,
        exact: bool,
    ) -> Self {
        terms.retain(|_, c| !c.is_zero());
        if exact {
            // The window of an exact series carries no knowledge, so pin it
            // to a canonical shape: equal exact series then compare equal.
            lo = terms
                .keys()
                .next()
                .copied()
                .unwrap_or(0)
                .min(DEFAULT_WINDOW.0);
            hi = terms
                .keys()
                .next_back()
                .map(|k| k + 1)
                .unwrap_or(0)
                .max(DEFAULT_WINDOW.1);
        } else {
            terms.retain(|k, _| *k < hi);
            if let Some(&min) = terms.keys().next() {
                lo = lo.min(min);
            }
            lo = lo.min(hi - 1);
        }
        debug_assert!(terms.keys().all(|k| *k >= lo && *k < hi));
        LaurentSeries { p, e, terms, lo, hi, exact }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn terms(&self) -> &BTreeMap<i64, FqElem> {
        &self.terms
    }

    /// Upper end of the knowledge interval; `WINDOW_CAP` for exact series.
    pub(crate) fn hi_eff(&self) -> i64 {
        if self.exact {
            WINDOW_CAP
        } else {
            self.hi
        }
    }

    /// Lower bound for the valuation: the first stored exponent, or the end
    /// of knowledge when no nonzero coefficient is visible.
    fn valuation_bound(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or_else(|| self.hi_eff())
    }

    /// True when no nonzero coefficient is known. For exact series this
    /// means the series is literally zero.
    pub fn is_zero_within_window(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn valuation(&self) -> Valuation {
        match self.terms.keys().next() {
            Some(&k) => Valuation::Finite(k),
            None => Valuation::Infinite,
        }
    }

    /// Coefficient at exponent `k`: `Some(zero)` where the series is known
    /// to vanish, `None` where the window ends knowledge.
    pub fn coeff(&self, k: i64) -> Option<FqElem> {
        if let Some(c) = self.terms.get(&k) {
            return Some(c.clone());
        }
        if k < self.hi_eff() {
            Some(FqElem::zero(self.p, self.e))
        } else {
            None
        }
    }

    fn assert_compatible(&self, other: &LaurentSeries) {
        assert!(
            self.p == other.p && self.e == other.e,
            "mixed coefficient fields"
        );
    }

    pub fn add(&self, other: &LaurentSeries) -> LaurentSeries {
        self.assert_compatible(other);
        let lo = self.lo.min(other.lo);
        let hi = self.hi_eff().min(other.hi_eff());
        let exact = self.exact && other.exact;
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let entry = terms
                .entry(*k)
                .or_insert_with(|| FqElem::zero(self.p, self.e));
            *entry = entry.add(c);
        }
        LaurentSeries::from_map(self.p, self.e, terms, lo, hi, exact)
    }

    pub fn neg(&self) -> LaurentSeries {
        let terms = self.terms.iter().map(|(k, c)| (*k, c.neg())).collect();
        LaurentSeries::from_map(self.p, self.e, terms, self.lo, self.hi, self.exact)
    }

    pub fn sub(&self, other: &LaurentSeries) -> LaurentSeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FqElem) -> LaurentSeries {
        if c.is_zero() {
            return LaurentSeries::from_map(
                self.p,
                self.e,
                BTreeMap::new(),
                self.lo,
                self.hi,
                self.exact,
            );
        }
        let terms = self.terms.iter().map(|(k, a)| (*k, a.mul(c))).collect();
        LaurentSeries::from_map(self.p, self.e, terms, self.lo, self.hi, self.exact)
    }

    /// Multiplication with the standard truncation rule: the product is
    /// known strictly below min(v(x) + hi(y), v(y) + hi(x)).
    pub fn mul(&self, other: &LaurentSeries) -> LaurentSeries {
        self.assert_compatible(other);
        let exact = self.exact && other.exact;
        let v1 = self.valuation_bound() as i128;
        let v2 = other.valuation_bound() as i128;
        let hi = sat((v1 + other.hi_eff() as i128).min(v2 + self.hi_eff() as i128));
        let lo = sat(self.lo as i128 + other.lo as i128);
        let mut terms: BTreeMap<i64, FqElem> = BTreeMap::new();
        let mut saturated = false;
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let k128 = *k1 as i128 + *k2 as i128;
                if k128.unsigned_abs() >= WINDOW_CAP as u128 {
                    saturated = true;
                    continue;
                }
                let k = k128 as i64;
                if !exact && k >= hi {
                    continue;
                }
                let entry = terms
                    .entry(k)
                    .or_insert_with(|| FqElem::zero(self.p, self.e));
                *entry = entry.add(&c1.mul(c2));
            }
        }
        let exact = exact && !saturated;
        LaurentSeries::from_map(self.p, self.e, terms, lo, hi.min(WINDOW_CAP), exact)
    }

    /// x -> x^p. Exponents scale by p and coefficients pass through the
    /// field Frobenius; the sound window is [p*lo, p*hi).
    pub fn frobenius(&self) -> LaurentSeries {
        let p = self.p as i128;
        let lo = sat(self.lo as i128 * p);
        let hi = sat(self.hi_eff() as i128 * p);
        let mut saturated = false;
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            let kp = *k as i128 * p;
            if kp.unsigned_abs() >= WINDOW_CAP as u128 {
                saturated = true;
                continue;
            }
            terms.insert(kp as i64, c.frobenius());
        }
        let exact = self.exact && !saturated;
        LaurentSeries::from_map(self.p, self.e, terms, lo, hi.min(WINDOW_CAP), exact)
    }

    /// x^p - x, the additive Artin-Schreier operator. The window narrows to
    /// the largest interval on which both x^p and x are known.
    pub fn frobenius_minus_one(&self) -> LaurentSeries {
        self.frobenius().sub(self)
    }

    pub fn pow(&self, k: u32) -> LaurentSeries {
        let mut acc = LaurentSeries::constant(FqElem::one(self.p, self.e));
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Forgets knowledge at `new_hi` and above. Exactness is dropped unless
    /// the cut is above every stored term of an exact series.
    pub fn truncated(&self, new_hi: i64) -> LaurentSeries {
        if self.exact && new_hi > self.terms.keys().next_back().copied().unwrap_or(i64::MIN) {
            return self.clone();
        }
        let hi = new_hi.min(self.hi_eff());
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| **k < hi)
            .map(|(k, c)| (*k, c.clone()))
            .collect();
        LaurentSeries::from_map(self.p, self.e, terms, self.lo.min(hi - 1), hi, false)
    }

    /// Like [`truncated`](Self::truncated) but always demotes to a windowed
    /// series, even when no stored term is dropped. Used for witnesses of
    /// geometric-series eliminations, which are only certified below a
    /// horizon regardless of how many terms happen to be stored.
    pub(crate) fn capped(&self, new_hi: i64) -> LaurentSeries {
        let hi = new_hi.min(self.hi_eff());
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| **k < hi)
            .map(|(k, c)| (*k, c.clone()))
            .collect();
        LaurentSeries::from_map(self.p, self.e, terms, self.lo.min(hi - 1), hi, false)
    }

    /// The terms with exponents in `[from, to)` as an exact polynomial.
    pub fn slice(&self, from: i64, to: i64) -> LaurentSeries {
        let terms: BTreeMap<i64, FqElem> = self
            .terms
            .range(from..to)
            .map(|(k, c)| (*k, c.clone()))
            .collect();
        LaurentSeries::from_map(
            self.p,
            self.e,
            terms,
            DEFAULT_WINDOW.0,
            DEFAULT_WINDOW.1,
            true,
        )
    }

    /// Structural equality of the known terms, ignoring windows.
    pub fn terms_eq(&self, other: &LaurentSeries) -> bool {
        self.p == other.p && self.e == other.e && self.terms == other.terms
    }
}
