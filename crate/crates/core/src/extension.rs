//! Arithmetic in a degree-p Artin-Schreier extension of the Laurent series
//! field, plus the reduction that computes relative and composite breaks for
//! two-level towers.
//!
//! The extension is `E = F((t))[z] / (z^p - z - a)` where `a` is a reduced
//! parameter with positive break `m` coprime to `p`. Elements are stored as
//! coefficient vectors `c_0 + c_1 z + ... + c_{p-1} z^{p-1}` with each `c_i`
//! a Laurent series over the same base field. Because `gcd(m, p) = 1`, the
//! valuation of a nonzero element is read off term by term:
//! `v_E(c t^s z^i) = p s - i m`, and the minimum is attained exactly once.

use std::collections::BTreeMap;

use crate::artin_schreier::{as_reduce, AsNormalForm};
use crate::error::{precision, validation, Result};
use crate::fq::FqElem;
use crate::herbrand::{break_compose, BreakValue, PhiPsi};
use crate::laurent::LaurentSeries;

/// Degree-p extension `F((t))[z] / (z^p - z - a)` for a reduced parameter
/// `a` whose break is a positive integer prime to `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArtinSchreierExtension {
    p: u64,
    e: u32,
    a: LaurentSeries,
    m: i64,
}

/// Element of an [`ArtinSchreierExtension`], as coefficients of
/// `1, z, ..., z^{p-1}`.
#[derive(Debug, Clone)]
pub struct ExtElem {
    ext: ArtinSchreierExtension,
    coeffs: Vec<LaurentSeries>,
}

/// Result of reducing an extension element as an Artin-Schreier parameter
/// over `E`: the canonical remainder, the break of the relative cover, and
/// the accumulated change-of-variable witness.
#[derive(Debug, Clone)]
pub struct ExtReduction {
    /// Canonical remainder: negative-valuation terms in slots `1..p` plus a
    /// canonical constant.
    pub reduced: ExtElem,
    /// Break of the relative cover cut out by `w^p - w = b` over `E`.
    pub relative_break: BreakValue,
    /// Element `y` with `b - reduced = y^p - y` up to the working horizon.
    pub witness: ExtElem,
}

impl ArtinSchreierExtension {
    /// Builds the extension for a reduced parameter with positive break.
    ///
    /// The parameter must already be in reduced form; reducing it here
    /// silently would change which element `z` denotes and corrupt any
    /// coefficient vectors written against the original presentation.
    pub fn new(a: LaurentSeries) -> Result<Self> {
        let nf = as_reduce(&a)?;
        if !nf.reduced.terms_eq(&a) {
            return validation(
                "extension parameter must be reduced; reduce it first and rewrite \
                 coefficients through the witness",
            );
        }
        let m = match nf.break_value {
            BreakValue::Finite(ref q) => crate::rat::to_i64(q)?,
            BreakValue::NegInfinity => {
                return validation("extension parameter is split; the cover is disconnected")
            }
        };
        if m <= 0 {
            return validation("extension parameter is unramified; positive break required");
        }
        Ok(ArtinSchreierExtension { p: a.p(), e: a.e(), a, m })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// Break of the bottom cover, i.e. `-v_t(a)`.
    pub fn break_m(&self) -> i64 {
        self.m
    }

    /// The defining reduced parameter `a`.
    pub fn parameter(&self) -> &LaurentSeries {
        &self.a
    }

    /// Wraps a coefficient vector, validating length and field parameters.
    pub fn element(&self, coeffs: Vec<LaurentSeries>) -> Result<ExtElem> {
        if coeffs.len() != self.p as usize {
            return validation(format!(
                "extension element needs exactly {} coefficients, got {}",
                self.p,
                coeffs.len()
            ));
        }
        for c in &coeffs {
            if c.p() != self.p || c.e() != self.e {
                return validation("coefficient field does not match the extension");
            }
        }
        Ok(ExtElem { ext: self.clone(), coeffs })
    }

    pub fn zero(&self) -> ExtElem {
        let coeffs = (0..self.p).map(|_| LaurentSeries::zero(self.p, self.e)).collect();
        ExtElem { ext: self.clone(), coeffs }
    }

    /// Embeds a base series as the slot-0 coefficient.
    pub fn from_base(&self, s: LaurentSeries) -> Result<ExtElem> {
        if s.p() != self.p || s.e() != self.e {
            return validation("series field does not match the extension");
        }
        let mut x = self.zero();
        x.coeffs[0] = s;
        Ok(x)
    }

    /// The generator `z` itself.
    pub fn generator(&self) -> ExtElem {
        let mut x = self.zero();
        x.coeffs[1] = LaurentSeries::constant(FqElem::one(self.p, self.e));
        x
    }

    /// Single term `c t^s z^r`.
    pub fn monomial(&self, r: usize, s: i64, c: FqElem) -> Result<ExtElem> {
        if r >= self.p as usize {
            return validation("z-degree of a monomial must be below p");
        }
        let mut x = self.zero();
        x.coeffs[r] = LaurentSeries::monomial(self.p, self.e, s, c)?;
        Ok(x)
    }

    /// `(z + a)^i`, the image of `z^{pi}` under the defining relation.
    fn z_p_power(&self, i: usize) -> ExtElem {
        let mut base = self.generator();
        base.coeffs[0] = self.a.clone();
        let mut acc = self.from_base(LaurentSeries::constant(FqElem::one(self.p, self.e)))
            .expect("field params match");
        for _ in 0..i {
            acc = acc.mul(&base);
        }
        acc
    }

    fn assert_same(&self, other: &ArtinSchreierExtension) {
        assert!(
            self.p == other.p && self.e == other.e && self.m == other.m
                && self.a.terms_eq(&other.a),
            "extension elements belong to different extensions"
        );
    }
}

impl ExtElem {
    pub fn extension(&self) -> &ArtinSchreierExtension {
        &self.ext
    }

    pub fn coeffs(&self) -> &[LaurentSeries] {
        &self.coeffs
    }

    pub fn add(&self, other: &ExtElem) -> ExtElem {
        self.ext.assert_same(&other.ext);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x.add(y))
            .collect();
        ExtElem { ext: self.ext.clone(), coeffs }
    }

    pub fn neg(&self) -> ExtElem {
        let coeffs = self.coeffs.iter().map(|c| c.neg()).collect();
        ExtElem { ext: self.ext.clone(), coeffs }
    }

    pub fn sub(&self, other: &ExtElem) -> ExtElem {
        self.add(&other.neg())
    }

    /// Product, folding `z^{p+k}` down through `z^p = z + a`.
    pub fn mul(&self, other: &ExtElem) -> ExtElem {
        self.ext.assert_same(&other.ext);
        let p = self.ext.p as usize;
        let zero = LaurentSeries::zero(self.ext.p, self.ext.e);
        let mut prod: Vec<LaurentSeries> = vec![zero.clone(); 2 * p - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero_within_window() && x.is_exact() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                prod[i + j] = prod[i + j].add(&x.mul(y));
            }
        }
        for j in (p..2 * p - 1).rev() {
            let top = std::mem::replace(&mut prod[j], zero.clone());
            prod[j - p + 1] = prod[j - p + 1].add(&top);
            prod[j - p] = prod[j - p].add(&top.mul(&self.ext.a));
        }
        prod.truncate(p);
        ExtElem { ext: self.ext.clone(), coeffs: prod }
    }

    /// The p-power Frobenius: `(sum c_i z^i)^p = sum c_i^p (z + a)^i`.
    pub fn frobenius(&self) -> ExtElem {
        let mut acc = self.ext.zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero_within_window() && c.is_exact() {
                continue;
            }
            let lifted = self
                .ext
                .from_base(c.frobenius())
                .expect("coefficient field matches");
            acc = acc.add(&lifted.mul(&self.ext.z_p_power(i)));
        }
        acc
    }

    pub fn frobenius_minus_one(&self) -> ExtElem {
        self.frobenius().sub(self)
    }

    /// True when every stored coefficient is zero inside its window.
    pub fn is_zero_within_window(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_within_window())
    }

    /// True when all coefficients carry full (exact) knowledge.
    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact())
    }

    /// Compares stored coefficient terms slot by slot.
    pub fn terms_eq(&self, other: &ExtElem) -> bool {
        self.coeffs.len() == other.coeffs.len()
            && self.coeffs.iter().zip(&other.coeffs).all(|(x, y)| x.terms_eq(y))
    }

    /// Valuation horizon: contributions at or above this value may be hidden
    /// beyond a coefficient window, so only smaller valuations are certain.
    pub fn horizon(&self) -> i64 {
        let p = self.ext.p as i128;
        let m = self.ext.m as i128;
        let mut h = i128::from(i64::MAX);
        for (i, c) in self.coeffs.iter().enumerate() {
            h = h.min(p * i128::from(c.hi_eff()) - (i as i128) * m);
        }
        h.clamp(i128::from(i64::MIN), i128::from(i64::MAX)) as i64
    }

    /// Valuation of the element under `v_E(t) = p`, `v_E(z) = -m`.
    ///
    /// Errors with a validation report on the zero element and with a
    /// precision report when every visible term sits at or beyond the
    /// window horizon.
    pub fn valuation(&self) -> Result<i64> {
        let p = self.ext.p as i128;
        let m = self.ext.m as i128;
        let mut best: Option<i128> = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if let Some(v) = c.valuation().finite() {
                let cand = p * i128::from(v) - (i as i128) * m;
                best = Some(best.map_or(cand, |b| b.min(cand)));
            }
        }
        match best {
            Some(v) if v < i128::from(self.horizon()) => Ok(v as i64),
            Some(_) => precision("leading term is not certain within the coefficient windows"),
            None if self.is_exact() => validation("zero element has no valuation"),
            None => precision("no visible terms; element may vanish or hide beyond the window"),
        }
    }
}

/// Reduces `b` as an Artin-Schreier parameter over the extension carrying it.
///
/// Three passes mirror the base-field reduction: slot-0 polar terms are
/// absorbed into p-th powers of mixed monomials, the constant is moved to
/// its canonical Frobenius-coset representative, and everything of positive
/// valuation is unwound through a geometric series. What remains determines
/// the break of the relative cover.
pub fn ext_as_reduce(b: &ExtElem) -> Result<ExtReduction> {
    let ext = b.extension().clone();
    let p = ext.p();
    let m = ext.break_m();
    let horizon = b.horizon();
    if horizon < 1 {
        return precision(format!(
            "coefficient windows leave a valuation horizon of {horizon}; need at least 1 \
             to certify a reduction"
        ));
    }

    let alpha = ext
        .parameter()
        .coeff(-m)
        .expect("reduced parameter exposes its leading term");
    let alpha_inv = alpha.inverse()?;
    let m_inv = mod_inverse_i64(m.rem_euclid(p as i64), p as i64);

    let mut reduced = b.clone();
    let mut witness = ext.zero();

    // Slot-0 polar terms: eliminate the deepest first. Replacing c t^s by
    // the p-th power of gamma z^{r'} t^{s'} raises the minimal slot-0
    // exponent strictly, so this terminates.
    loop {
        let target = reduced.coeffs[0]
            .terms()
            .iter()
            .map(|(k, c)| (*k, c.clone()))
            .find(|(k, _)| *k < 0);
        let Some((s, c)) = target else { break };
        let r = ((-s % p as i64) * m_inv).rem_euclid(p as i64) as usize;
        let shifted = s as i128 + m as i128 * r as i128;
        debug_assert_eq!(shifted.rem_euclid(p as i128), 0);
        let s_new = (shifted / p as i128) as i64;
        let gamma = c.mul(&alpha_inv.pow(r as u64)).pth_root();
        let x = ext.monomial(r, s_new, gamma)?;
        reduced = reduced.sub(&x.frobenius_minus_one());
        witness = witness.add(&x);
        debug_assert!(
            reduced.coeffs[0]
                .terms()
                .keys()
                .all(|k| *k >= 0 || *k > s),
            "slot-0 elimination must strictly raise the deepest polar exponent"
        );
    }

    // Constant term: shift to the canonical coset representative of F - 1.
    let c0 = reduced.coeffs[0]
        .coeff(0)
        .expect("horizon >= 1 keeps the constant inside the window");
    let canon = crate::fq::canonical_coset_representative(&c0);
    if canon != c0 {
        let delta = c0.sub(&canon);
        let y0 = crate::fq::solve_artin_schreier(&delta)
            .expect("difference within a coset is solvable");
        let w = ext.from_base(LaurentSeries::constant(y0))?;
        reduced = reduced.sub(&w.frobenius_minus_one());
        witness = witness.add(&w);
    }

    // Positive part: strip every term of positive valuation and unwind it
    // as b + b^p + b^{p^2} + ... up to the horizon.
    let mut plus = ext.zero();
    for (i, c) in reduced.coeffs.iter().enumerate() {
        let keep: BTreeMap<i64, FqElem> = c
            .terms()
            .iter()
            .filter(|(k, _)| p as i128 * (**k as i128) - (i as i128) * m as i128 > 0)
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        if !keep.is_empty() {
            let terms: Vec<(i64, FqElem)> = keep.into_iter().collect();
            let mut part = ext.zero();
            part.coeffs[i] = LaurentSeries::polynomial(ext.p(), ext.e(), terms)?;
            plus = plus.add(&part);
        }
    }
    if !plus.is_zero_within_window() {
        // The geometric witness is only certified below the horizon; cap the
        // frobenius cascade there (and at the window sentinel, so exponents
        // stay in range for any p).
        let cutoff = horizon.min(crate::laurent::WINDOW_CAP);
        let mut geom = plus.clone();
        let mut power = plus.clone();
        loop {
            power = power.frobenius();
            match power.valuation() {
                Ok(v) if v < cutoff => geom = geom.add(&power),
                _ => break,
            }
        }
        let mut capped = ext.zero();
        for (i, c) in geom.coeffs.iter().enumerate() {
            // Largest exponent cap with p*cap - i*m <= cutoff, so the
            // witness never claims knowledge at or beyond the horizon.
            let cap = (cutoff + i as i64 * m).div_euclid(p as i64);
            capped.coeffs[i] = c.capped(cap);
        }
        witness = witness.add(&capped.neg());
        reduced = reduced.sub(&plus);
    }

    let relative_break = if reduced.is_zero_within_window() {
        BreakValue::NegInfinity
    } else {
        let v = reduced.valuation()?;
        if v < 0 {
            debug_assert!(v % p as i64 != 0, "reduced valuation must be prime to p");
            BreakValue::from_integer(-v)?
        } else {
            debug_assert_eq!(v, 0);
            BreakValue::from_integer(0)?
        }
    };

    Ok(ExtReduction { reduced, relative_break, witness })
}

/// Break of the composite of a two-level tower: `z^p - z = a` downstairs and
/// `w^p - w = b` upstairs, with `b` given by coefficients against the
/// generator of the presentation `a` as handed in.
///
/// The base parameter is reduced internally and the coefficients are
/// rewritten through the witness, so `a` need not arrive in reduced form;
/// it must however be connected and ramified (positive break).
pub fn tower2_break(a: &LaurentSeries, coeffs: &[LaurentSeries]) -> Result<BreakValue> {
    let nf: AsNormalForm = as_reduce(a)?;
    let m = match nf.break_value {
        BreakValue::Finite(ref q) => crate::rat::to_i64(q)?,
        BreakValue::NegInfinity => {
            return validation("tower base is split; composite break is undefined")
        }
    };
    if m <= 0 {
        return validation("tower base is unramified; positive break required");
    }
    let ext = ArtinSchreierExtension::new(nf.reduced.clone())?;
    let b_orig = ext.element(coeffs.to_vec())?;

    // z_given = z_reduced + witness, so substitute through Horner.
    let shift = ext.from_base(nf.witness.clone())?;
    let base = ext.generator().add(&shift);
    let mut b = ext.zero();
    for c in coeffs.iter().rev() {
        b = b.mul(&base).add(&ext.from_base(c.clone())?);
    }
    debug_assert!(nf.witness.is_zero_within_window() || !b_orig.terms_eq(&b) || coeffs.len() <= 1);

    let red = ext_as_reduce(&b)?;
    let phi = PhiPsi::single_break(m, a.p())?;
    Ok(break_compose(
        &BreakValue::from_integer(m)?,
        &red.relative_break,
        &phi,
    ))
}

/// Inverse of `x` modulo prime `q`, for exponent bookkeeping.
fn mod_inverse_i64(x: i64, q: i64) -> i64 {
    let mut r = 1i64;
    let mut base = x.rem_euclid(q);
    let mut exp = q - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            r = r * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    r
}
