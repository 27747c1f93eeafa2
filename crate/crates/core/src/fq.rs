//! Arithmetic in the finite field F_q, q = p^e, in a fixed polynomial basis.
//!
//! Elements are coordinate vectors over F_p relative to the basis
//! 1, w, ..., w^(e-1), where w is a root of the canonical modulus: the first
//! irreducible monic polynomial of degree e over F_p in counting order of its
//! non-leading coefficients. For (p, e) = (2, 2) this picks x^2 + x + 1, so w
//! satisfies w^2 = w + 1. The modulus is deterministic, so two elements with
//! equal (p, e) always live in the same presentation of the field.
//!
//! The field is perfect: Frobenius x -> x^p is bijective and p-th roots are
//! total. The additive map F - 1 (x -> x^p - x) has kernel F_p and a cokernel
//! of order p; its canonical coset representatives (least in lexicographic
//! coordinate order) are what the series and toric layers use as reduced
//! constant terms.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{validation, Error, Result};

/// Element of F_q in the canonical polynomial basis.
///
/// `coords[i]` is the coefficient of w^i, each in `0..p`. Lexicographic
/// comparisons read `coords[0]` first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqElem {
    p: u64,
    e: u32,
    coords: Vec<u64>,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Checks that (p, e) describes a supported field: p prime, e >= 1, and
/// q = p^e small enough for exhaustive routines to stay exact.
pub fn validate_field(p: u64, e: u32) -> Result<()> {
    if !is_prime(p) {
        return validation(format!("p = {p} is not prime"));
    }
    if e == 0 {
        return validation("field degree e must be at least 1");
    }
    let mut q: u128 = 1;
    for _ in 0..e {
        q *= p as u128;
        if q > (1 << 32) {
            return validation(format!("field F_{p}^{e} too large (q > 2^32)"));
        }
    }
    Ok(())
}

/// q = p^e as u64. Callers must have validated the field first.
pub fn field_order(p: u64, e: u32) -> u64 {
    (0..e).fold(1u64, |acc, _| acc * p)
}

// ---- dense polynomial arithmetic over F_p (little-endian coefficients) ----

fn poly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r[r.len() - 1];
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (k, &mk) in m.iter().enumerate().take(dm) {
                let idx = shift + k;
                r[idx] = (r[idx] + (p - lead % p) * mk) % p;
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

fn poly_is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    if deg == 1 {
        return true;
    }
    // Trial division by every monic polynomial of degree 1..=deg/2.
    for d in 1..=deg / 2 {
        let count = (0..d).fold(1u64, |acc, _| acc * p);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut k = idx;
            for _ in 0..d {
                g.push(k % p);
                k /= p;
            }
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The canonical modulus for F_{p^e}: x^e plus the first non-leading
/// coefficient vector (in counting order, constant term least significant)
/// that makes the polynomial irreducible.
fn field_modulus(p: u64, e: u32) -> Arc<Vec<u64>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Arc<Vec<u64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(m) = cache.lock().unwrap().get(&(p, e)) {
        return Arc::clone(m);
    }
    let e_us = e as usize;
    let count = (0..e).fold(1u64, |acc, _| acc * p);
    let mut found = None;
    for idx in 0..count {
        let mut f = Vec::with_capacity(e_us + 1);
        let mut k = idx;
        for _ in 0..e {
            f.push(k % p);
            k /= p;
        }
        f.push(1);
        if poly_is_irreducible(&f, p) {
            found = Some(f);
            break;
        }
    }
    let modulus = Arc::new(found.expect("an irreducible polynomial of every degree exists"));
    cache
        .lock()
        .unwrap()
        .insert((p, e), Arc::clone(&modulus));
    modulus
}

impl FqElem {
    /// Validates field parameters and coordinates.
    pub fn new(p: u64, e: u32, coords: Vec<u64>) -> Result<Self> {
        validate_field(p, e)?;
        if coords.len() != e as usize {
            return validation(format!(
                "expected {e} coordinates for F_{p}^{e}, got {}",
                coords.len()
            ));
        }
        if let Some(c) = coords.iter().find(|&&c| c >= p) {
            return validation(format!("coordinate {c} out of range for p = {p}"));
        }
        Ok(FqElem { p, e, coords })
    }

    /// Internal constructor; callers guarantee valid parameters.
    pub(crate) fn from_coords(p: u64, e: u32, coords: Vec<u64>) -> Self {
        debug_assert_eq!(coords.len(), e as usize);
        FqElem { p, e, coords }
    }

    pub fn zero(p: u64, e: u32) -> Self {
        FqElem::from_coords(p, e, vec![0; e as usize])
    }

    pub fn one(p: u64, e: u32) -> Self {
        let mut coords = vec![0; e as usize];
        coords[0] = 1;
        FqElem { p, e, coords }
    }

    /// Embeds a residue from the prime field.
    pub fn from_prime(p: u64, e: u32, c: u64) -> Self {
        let mut coords = vec![0; e as usize];
        coords[0] = c % p;
        FqElem { p, e, coords }
    }

    /// Element at position `idx` in lexicographic coordinate order,
    /// `0 <= idx < q`. `coords[0]` is the most significant digit, so index
    /// order and lex order agree.
    pub fn from_index(p: u64, e: u32, idx: u64) -> Self {
        let mut coords = vec![0; e as usize];
        let mut k = idx;
        for i in (0..e as usize).rev() {
            coords[i] = k % p;
            k /= p;
        }
        debug_assert_eq!(k, 0, "index out of range");
        FqElem { p, e, coords }
    }

    pub fn index(&self) -> u64 {
        self.coords.iter().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0] == 1 && self.coords[1..].iter().all(|&c| c == 0)
    }

    fn assert_same_field(&self, other: &FqElem) {
        assert!(
            self.p == other.p && self.e == other.e,
            "mixed fields: F_{}^{} vs F_{}^{}",
            self.p,
            self.e,
            other.p,
            other.e
        );
    }

    pub fn add(&self, other: &FqElem) -> FqElem {
        self.assert_same_field(other);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a + b) % self.p)
            .collect();
        FqElem { p: self.p, e: self.e, coords }
    }

    pub fn neg(&self) -> FqElem {
        let coords = self.coords.iter().map(|&a| (self.p - a) % self.p).collect();
        FqElem { p: self.p, e: self.e, coords }
    }

    pub fn sub(&self, other: &FqElem) -> FqElem {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FqElem) -> FqElem {
        self.assert_same_field(other);
        let modulus = field_modulus(self.p, self.e);
        let prod = poly_mul(&self.coords, &other.coords, self.p);
        let mut rem = poly_rem(&prod, &modulus, self.p);
        rem.resize(self.e as usize, 0);
        FqElem { p: self.p, e: self.e, coords: rem }
    }

    pub fn pow(&self, mut k: u64) -> FqElem {
        let mut base = self.clone();
        let mut acc = FqElem::one(self.p, self.e);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; the zero element has none.
    pub fn inverse(&self) -> Result<FqElem> {
        if self.is_zero() {
            return Err(Error::Validation("inverse of zero".into()));
        }
        let q = field_order(self.p, self.e);
        Ok(self.pow(q - 2))
    }

    /// Frobenius x -> x^p.
    pub fn frobenius(&self) -> FqElem {
        self.pow(self.p)
    }

    /// The unique p-th root (Frobenius applied e-1 times).
    pub fn pth_root(&self) -> FqElem {
        let mut x = self.clone();
        for _ in 0..self.e.saturating_sub(1) {
            x = x.frobenius();
        }
        x
    }

    /// Trace to the prime field, returned as a residue in `0..p`.
    pub fn trace(&self) -> u64 {
        let mut acc = FqElem::zero(self.p, self.e);
        let mut x = self.clone();
        for _ in 0..self.e {
            acc = acc.add(&x);
            x = x.frobenius();
        }
        debug_assert!(acc.coords[1..].iter().all(|&c| c == 0));
        acc.coords[0]
    }
}

/// Solves y^p - y = b in F_q. A solution exists iff the trace of `b`
/// vanishes; among the p solutions (a coset of F_p) the one least in
/// lexicographic coordinate order is returned.
pub fn solve_artin_schreier(b: &FqElem) -> Option<FqElem> {
    if b.trace() != 0 {
        return None;
    }
    let (p, e) = (b.p, b.e);
    // F - 1 is F_p-linear; solve the e x e system over F_p.
    let mut cols = Vec::with_capacity(e as usize);
    for i in 0..e as usize {
        let mut basis = vec![0; e as usize];
        basis[i] = 1;
        let v = FqElem::from_coords(p, e, basis);
        cols.push(v.frobenius().sub(&v).coords);
    }
    let y0 = solve_linear_fp(&cols, &b.coords, p)?;
    let y0 = FqElem::from_coords(p, e, y0);
    (0..p)
        .map(|c| y0.add(&FqElem::from_prime(p, e, c)))
        .min()
}

/// Solves `sum_j x_j * cols[j] = rhs` over F_p by Gaussian elimination.
fn solve_linear_fp(cols: &[Vec<u64>], rhs: &[u64], p: u64) -> Option<Vec<u64>> {
    let rows = rhs.len();
    let n = cols.len();
    let mut a: Vec<Vec<u64>> = (0..rows)
        .map(|r| {
            let mut row: Vec<u64> = cols.iter().map(|c| c[r]).collect();
            row.push(rhs[r]);
            row
        })
        .collect();
    let mut pivot_col_of_row = vec![usize::MAX; rows];
    let mut rank = 0;
    for col in 0..n {
        let Some(pr) = (rank..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, pr);
        let inv = mod_inverse(a[rank][col], p);
        for x in a[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows {
            if r != rank && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..=n {
                    let sub = f * a[rank][c] % p;
                    a[r][c] = (a[r][c] + p * p - sub) % p;
                }
            }
        }
        pivot_col_of_row[rank] = col;
        rank += 1;
    }
    // Inconsistent if a zero row has nonzero rhs.
    for r in rank..rows {
        if a[r][n] != 0 {
            return None;
        }
    }
    let mut x = vec![0; n];
    for r in 0..rank {
        x[pivot_col_of_row[r]] = a[r][n];
    }
    Some(x)
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p is prime and a != 0 mod p.
    let mut result = 1u64;
    let mut base = a % p;
    let mut k = p - 2;
    while k > 0 {
        if k & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        k >>= 1;
    }
    result
}

/// Basis of the image of F - 1 on F_q, in reduced echelon form with pivots
/// ordered by first coordinate.
fn image_of_frobenius_minus_one(p: u64, e: u32) -> Vec<Vec<u64>> {
    let mut basis: Vec<Vec<u64>> = Vec::new();
    for i in 0..e as usize {
        let mut v = vec![0; e as usize];
        v[i] = 1;
        let v = FqElem::from_coords(p, e, v);
        let mut w = v.frobenius().sub(&v).coords;
        // Reduce against the existing echelon rows, then insert.
        for b in &basis {
            let lead = b.iter().position(|&c| c != 0).unwrap();
            if w[lead] != 0 {
                let f = w[lead] * mod_inverse(b[lead], p) % p;
                for (wc, bc) in w.iter_mut().zip(b) {
                    *wc = (*wc + p * p - f * bc % p) % p;
                }
            }
        }
        if w.iter().any(|&c| c != 0) {
            basis.push(w);
            basis.sort_by_key(|b| b.iter().position(|&c| c != 0).unwrap());
            // Back-substitute to keep the form fully reduced.
            for i in 0..basis.len() {
                for j in 0..basis.len() {
                    if i == j {
                        continue;
                    }
                    let lead = basis[j].iter().position(|&c| c != 0).unwrap();
                    if basis[i][lead] != 0 {
                        let f = basis[i][lead] * mod_inverse(basis[j][lead], p) % p;
                        let other = basis[j].clone();
                        for (ic, oc) in basis[i].iter_mut().zip(&other) {
                            *ic = (*ic + p * p - f * oc % p) % p;
                        }
                    }
                }
            }
        }
    }
    basis
}

/// Least element (lexicographic coordinate order) of the coset
/// c + im(F - 1). The zero class is represented by zero, so a cover is split
/// exactly when its reduced constant is zero.
pub fn canonical_coset_representative(c: &FqElem) -> FqElem {
    let basis = image_of_frobenius_minus_one(c.p, c.e);
    let mut z = c.clone();
    for b in &basis {
        let lead = b.iter().position(|&x| x != 0).unwrap();
        if z.coords[lead] != 0 {
            let f = z.coords[lead] * mod_inverse(b[lead], c.p) % c.p;
            for (zc, bc) in z.coords.iter_mut().zip(b) {
                *zc = (*zc + c.p * c.p - f * bc % c.p) % c.p;
            }
        }
    }
    z
}

/// The p canonical representatives of coker(F - 1, F_q), sorted
/// lexicographically. The first entry is always zero.
pub fn coker_representatives(p: u64, e: u32) -> Result<Vec<FqElem>> {
    validate_field(p, e)?;
    // ker(F - 1) = F_p, so the image has F_p-dimension e - 1.
    debug_assert_eq!(image_of_frobenius_minus_one(p, e).len() as u32, e - 1);
    let mut reps: Vec<FqElem> = Vec::new();
    // Walk elements in lex order; the canonical rep of a fresh class is the
    // first element of that class we meet.
    let q = field_order(p, e);
    for idx in 0..q {
        let x = FqElem::from_index(p, e, idx);
        let r = canonical_coset_representative(&x);
        if r == x && !reps.contains(&x) {
            reps.push(x);
            if reps.len() == p as usize {
                break;
            }
        }
    }
    Ok(reps)
}

/// All q elements in lexicographic order.
pub fn all_elements(p: u64, e: u32) -> Result<Vec<FqElem>> {
    validate_field(p, e)?;
    let q = field_order(p, e);
    Ok((0..q).map(|i| FqElem::from_index(p, e, i)).collect())
}
