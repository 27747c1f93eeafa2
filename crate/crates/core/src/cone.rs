//! Rational convex cones in R^n given by halfspaces with strictness flags,
//! optionally carrying generating rays. Membership, duality, the
//! very-convex test, lattice indices of hyperplane-times-ray sublattices,
//! and the m_lambda normalizer all use exact rational arithmetic.

use num::{BigInt, One, Signed, Zero};

use crate::error::{validation, Result};
use crate::rat::{prime_to_p_part, rat, rational_gcd, Rat};

/// A rational linear functional on R^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFunctional {
    coords: Vec<Rat>,
}

impl LinearFunctional {
    pub fn new(coords: Vec<Rat>) -> Self {
        LinearFunctional { coords }
    }

    pub fn from_integers(coords: &[i64]) -> Self {
        LinearFunctional { coords: coords.iter().map(|&c| rat(c)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, v: &[Rat]) -> Rat {
        debug_assert_eq!(self.coords.len(), v.len());
        self.coords
            .iter()
            .zip(v)
            .map(|(a, b)| a * b)
            .fold(Rat::zero(), |acc, x| acc + x)
    }

    pub fn eval_lattice(&self, v: &[i64]) -> Rat {
        debug_assert_eq!(self.coords.len(), v.len());
        self.coords
            .iter()
            .zip(v)
            .map(|(a, &b)| a * rat(b))
            .fold(Rat::zero(), |acc, x| acc + x)
    }

    /// Scales so the coordinates become coprime integers; errors on zero.
    pub fn primitive_integer(&self) -> Result<Vec<i64>> {
        primitive_generator(&self.coords)
    }
}

/// Halfspace {v : normal(v) >= 0}, or {v : normal(v) > 0} when strict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: LinearFunctional,
    pub strict: bool,
}

/// Convex rational cone: intersection of halfspaces, always containing 0.
/// `rays` holds generators when the cone is polyhedral-by-generators;
/// operations that need them say so.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    n: usize,
    halfspaces: Vec<Halfspace>,
    rays: Option<Vec<Vec<Rat>>>,
}

impl Cone {
    pub fn new(
        n: usize,
        halfspaces: Vec<Halfspace>,
        rays: Option<Vec<Vec<Rat>>>,
    ) -> Result<Self> {
        if n == 0 {
            return validation("ambient dimension must be positive");
        }
        for h in &halfspaces {
            if h.normal.dim() != n {
                return validation("halfspace normal has wrong dimension");
            }
        }
        if let Some(rays) = &rays {
            for r in rays {
                if r.len() != n {
                    return validation("ray has wrong dimension");
                }
                if r.iter().all(|c| c.is_zero()) {
                    return validation("zero vector cannot generate a ray");
                }
            }
        }
        let cone = Cone { n, halfspaces, rays };
        if let Some(rays) = &cone.rays {
            for r in rays {
                if !cone.contains(r)? {
                    return validation("listed ray violates a halfspace");
                }
            }
        }
        Ok(cone)
    }

    /// All of R^n, with the 2n signed unit rays attached.
    pub fn full(n: usize) -> Cone {
        let mut rays = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut plus = vec![Rat::zero(); n];
            plus[i] = Rat::one();
            let mut minus = vec![Rat::zero(); n];
            minus[i] = -Rat::one();
            rays.push(plus);
            rays.push(minus);
        }
        Cone { n, halfspaces: Vec::new(), rays: Some(rays) }
    }

    /// The nonnegative orthant with its unit rays.
    pub fn orthant(n: usize) -> Cone {
        let halfspaces = (0..n)
            .map(|i| {
                let mut coords = vec![Rat::zero(); n];
                coords[i] = Rat::one();
                Halfspace { normal: LinearFunctional::new(coords), strict: false }
            })
            .collect();
        let rays = (0..n)
            .map(|i| {
                let mut r = vec![Rat::zero(); n];
                r[i] = Rat::one();
                r
            })
            .collect();
        Cone { n, halfspaces, rays: Some(rays) }
    }

    /// The origin only. Encoded by opposing coordinate halfspaces; carries
    /// an empty ray list.
    pub fn origin(n: usize) -> Cone {
        let mut halfspaces = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut plus = vec![Rat::zero(); n];
            plus[i] = Rat::one();
            let mut minus = vec![Rat::zero(); n];
            minus[i] = -Rat::one();
            halfspaces.push(Halfspace { normal: LinearFunctional::new(plus), strict: false });
            halfspaces.push(Halfspace { normal: LinearFunctional::new(minus), strict: false });
        }
        Cone { n, halfspaces, rays: Some(Vec::new()) }
    }

    /// The ray of nonnegative multiples of `v`: the hyperplanes through
    /// `v`'s orthogonal complement plus the direction constraint.
    pub fn ray(v: Vec<Rat>) -> Result<Cone> {
        let n = v.len();
        if n == 0 {
            return validation("ambient dimension must be positive");
        }
        if v.iter().all(|c| c.is_zero()) {
            return validation("zero vector cannot generate a ray");
        }
        let i0 = v.iter().position(|c| !c.is_zero()).expect("nonzero checked");
        let mut halfspaces = Vec::new();
        for j in 0..n {
            if j == i0 {
                continue;
            }
            // w = v[i0] e_j - v[j] e_{i0} vanishes exactly on span(v).
            let mut w = vec![Rat::zero(); n];
            w[j] = v[i0].clone();
            w[i0] = -v[j].clone();
            let neg: Vec<Rat> = w.iter().map(|c| -c.clone()).collect();
            halfspaces.push(Halfspace { normal: LinearFunctional::new(w), strict: false });
            halfspaces.push(Halfspace { normal: LinearFunctional::new(neg), strict: false });
        }
        halfspaces.push(Halfspace {
            normal: LinearFunctional::new(v.clone()),
            strict: false,
        });
        Cone { n, halfspaces, rays: Some(vec![v]) }.validate_rays()
    }

    /// Ray through an integer lattice point.
    pub fn ray_lattice(v: &[i64]) -> Result<Cone> {
        Cone::ray(v.iter().map(|&c| rat(c)).collect())
    }

    fn validate_rays(self) -> Result<Cone> {
        if let Some(rays) = &self.rays {
            for r in rays {
                if !self.contains(r)? {
                    return validation("listed ray violates a halfspace");
                }
            }
        }
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn rays(&self) -> Option<&[Vec<Rat>]> {
        self.rays.as_deref()
    }

    /// Membership: 0 always belongs; otherwise every halfspace must pass
    /// with its strictness.
    pub fn contains(&self, v: &[Rat]) -> Result<bool> {
        if v.len() != self.n {
            return validation(format!(
                "vector dimension {} does not match cone dimension {}",
                v.len(),
                self.n
            ));
        }
        if v.iter().all(|c| c.is_zero()) {
            return Ok(true);
        }
        for h in &self.halfspaces {
            let val = h.normal.eval(v);
            let pass = if h.strict { val > Rat::zero() } else { val >= Rat::zero() };
            if !pass {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains_lattice(&self, v: &[i64]) -> Result<bool> {
        let vr: Vec<Rat> = v.iter().map(|&c| rat(c)).collect();
        self.contains(&vr)
    }

    /// Dual cone {lambda : lambda(r) >= 0 for all generators r}, as closed
    /// halfspaces indexed by the rays. Requires rays.
    pub fn dual(&self) -> Result<Cone> {
        let rays = self
            .rays
            .as_ref()
            .ok_or_else(|| err_missing_rays())?;
        let halfspaces = rays
            .iter()
            .map(|r| Halfspace {
                normal: LinearFunctional::new(r.clone()),
                strict: false,
            })
            .collect();
        Ok(Cone { n: self.n, halfspaces, rays: None })
    }

    /// True when the dual has nonempty interior, i.e. some functional is
    /// uniformly positive on the generators: exact Fourier-Motzkin
    /// feasibility of {lambda(r_i) >= 1}. Requires rays.
    pub fn is_very_convex(&self) -> Result<bool> {
        let rays = self
            .rays
            .as_ref()
            .ok_or_else(|| err_missing_rays())?;
        let ineqs: Vec<(Vec<Rat>, Rat)> = rays
            .iter()
            .map(|r| (r.clone(), Rat::one()))
            .collect();
        Ok(feasible(ineqs, self.n))
    }

    /// True when every ray of `other` belongs to this cone; the subset
    /// surrogate used for diagram validation. Requires rays on `other`.
    pub fn contains_rays_of(&self, other: &Cone) -> Result<bool> {
        if other.n != self.n {
            return validation("cone dimension mismatch");
        }
        let rays = other
            .rays
            .as_ref()
            .ok_or_else(|| err_missing_rays())?;
        for r in rays {
            if !self.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A linear cone is a single ray (by generators).
    pub fn is_linear(&self) -> bool {
        matches!(self.rays.as_deref(), Some([_]))
    }

    /// Primitive integer generator of a linear cone.
    pub fn primitive_ray(&self) -> Result<Vec<i64>> {
        match self.rays.as_deref() {
            Some([v]) => primitive_generator(v),
            _ => validation("cone is not a single ray"),
        }
    }
}

fn err_missing_rays() -> crate::error::Error {
    crate::error::Error::Validation("operation requires generating rays".into())
}

/// Feasibility of the system {a_i . x >= b_i} over Q^n by Fourier-Motzkin
/// elimination. Exact; intended for the handful of constraints cones carry.
fn feasible(mut ineqs: Vec<(Vec<Rat>, Rat)>, n: usize) -> bool {
    for var in (0..n).rev() {
        let mut zero_rows: Vec<(Vec<Rat>, Rat)> = Vec::new();
        let mut pos_rows: Vec<(Vec<Rat>, Rat)> = Vec::new();
        let mut neg_rows: Vec<(Vec<Rat>, Rat)> = Vec::new();
        for (a, b) in ineqs {
            match a[var].cmp(&Rat::zero()) {
                std::cmp::Ordering::Equal => zero_rows.push((a, b)),
                std::cmp::Ordering::Greater => pos_rows.push((a, b)),
                std::cmp::Ordering::Less => neg_rows.push((a, b)),
            }
        }
        let mut next = zero_rows;
        for (ap, bp) in &pos_rows {
            for (an, bn) in &neg_rows {
                // Positive combination cancelling x_var keeps the >= sense.
                let cp = -an[var].clone();
                let cn = ap[var].clone();
                let row: Vec<Rat> = ap
                    .iter()
                    .zip(an)
                    .map(|(x, y)| &cp * x + &cn * y)
                    .collect();
                debug_assert!(row[var].is_zero());
                next.push((row, &cp * bp + &cn * bn));
            }
        }
        ineqs = next;
    }
    ineqs.iter().all(|(_, b)| *b <= Rat::zero())
}

/// Primitive integer vector on the ray through a rational vector: clear
/// denominators, divide by the gcd, keep the direction.
pub fn primitive_generator(v: &[Rat]) -> Result<Vec<i64>> {
    if v.iter().all(|c| c.is_zero()) {
        return validation("zero vector has no primitive generator");
    }
    let mut lcm = BigInt::one();
    for c in v {
        lcm = num::integer::lcm(lcm, c.denom().clone());
    }
    let ints: Vec<BigInt> = v.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = num::integer::gcd(g, x.abs());
    }
    ints.iter()
        .map(|x| {
            num::ToPrimitive::to_i64(&(x / &g))
                .ok_or_else(|| crate::error::Error::Validation("generator out of i64 range".into()))
        })
        .collect()
}

/// Extended gcd: returns (g, x, y) with a x + b y = g >= 0.
fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = egcd(b, a.rem_euclid(b));
        (g, y.clone(), x - (a.div_euclid(b)) * y)
    }
}

/// Basis of the kernel of a primitive integer functional on Z^n, found by
/// unimodular column operations on the identity matrix.
fn kernel_basis(mu: &[i64]) -> Vec<Vec<i128>> {
    let n = mu.len();
    let mut cols: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            let mut c = vec![0i128; n];
            c[i] = 1;
            c
        })
        .collect();
    let mut vals: Vec<i128> = mu.iter().map(|&x| x as i128).collect();
    for i in 1..n {
        if vals[i] == 0 {
            continue;
        }
        if vals[0] == 0 {
            cols.swap(0, i);
            vals.swap(0, i);
            continue;
        }
        let (g, x, y) = egcd(vals[0], vals[i]);
        let c0 = cols[0].clone();
        let ci = cols[i].clone();
        let new0: Vec<i128> = c0
            .iter()
            .zip(&ci)
            .map(|(a, b)| x * a + y * b)
            .collect();
        let newi: Vec<i128> = c0
            .iter()
            .zip(&ci)
            .map(|(a, b)| (vals[i] / g) * a - (vals[0] / g) * b)
            .collect();
        cols[0] = new0;
        cols[i] = newi;
        vals[0] = g;
        vals[i] = 0;
    }
    cols.into_iter().skip(1).collect()
}

/// Determinant by exact rational Gaussian elimination.
fn det_rational(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero());
        let Some(pr) = pivot else { return Rat::zero() };
        if pr != col {
            m.swap(pr, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det *= pv.clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pv;
            for c in col..n {
                let sub = &factor * &m[col][c];
                m[r][c] = &m[r][c] - &sub;
            }
        }
    }
    det
}

/// Index of (Z^n cap H_lambda) x (Z^n cap T) inside Z^n, together with its
/// prime-to-p part. `T` must be a ray on which `lambda` is positive.
pub fn lattice_index(lambda: &LinearFunctional, t: &Cone, p: u64) -> Result<(u64, u64)> {
    if lambda.is_zero() {
        return validation("zero functional has no lattice index");
    }
    if lambda.dim() != t.dim() {
        return validation("functional dimension does not match cone");
    }
    let v0 = t.primitive_ray()?;
    let val = lambda.eval_lattice(&v0);
    if val <= Rat::zero() {
        return validation("functional must be positive on the ray");
    }
    let mu = lambda.primitive_integer()?;
    let kernel = kernel_basis(&mu);
    let n = mu.len();
    let mut mat: Vec<Vec<Rat>> = vec![vec![Rat::zero(); n]; n];
    for (j, col) in kernel.iter().enumerate() {
        for i in 0..n {
            mat[i][j] = Rat::from(BigInt::from(col[i]));
        }
    }
    for i in 0..n {
        mat[i][n - 1] = rat(v0[i]);
    }
    let det = det_rational(mat);
    let d_big = det.to_integer().abs();
    let d = num::ToPrimitive::to_u64(&d_big)
        .ok_or_else(|| crate::error::Error::Validation("lattice index out of range".into()))?;
    if d == 0 {
        return validation("degenerate lattice: functional vanishes on the ray direction");
    }
    Ok((d, prime_to_p_part(d, p)))
}

/// The positive rational with m_lambda * lambda(Z^n) = Z.
pub fn m_lambda(lambda: &LinearFunctional) -> Result<Rat> {
    if lambda.is_zero() {
        return validation("zero functional has no normalizer");
    }
    let g = rational_gcd(lambda.coords());
    Ok(Rat::one() / g)
}
