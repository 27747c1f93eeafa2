//! Exhaustive, deterministic enumeration of reduced degree-p cover classes
//! on a bounded chart, a direct verifier for the two-ray torsor
//! decomposition, and a brute-force isomorphism test that searches for an
//! explicit Artin-Schreier witness inside the box.

use std::collections::BTreeMap;

use crate::cone::Cone;
use crate::error::{validation, Result};
use crate::fq::{self, FqElem};
use crate::toric::{coker_basis_bounded, lattice_points_in_box, restrict_as, CokerBasis, ToricDatum};

/// Base-q odometer over a fixed number of digits; the last digit moves
/// fastest, so successive states are in lexicographic order.
struct Odometer {
    digits: Vec<u64>,
    base: u64,
    fresh: bool,
    done: bool,
}

impl Odometer {
    fn new(len: usize, base: u64) -> Self {
        Odometer { digits: vec![0; len], base, fresh: true, done: false }
    }

    fn next_state(&mut self) -> Option<&[u64]> {
        if self.done {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            return Some(&self.digits);
        }
        for i in (0..self.digits.len()).rev() {
            if self.digits[i] + 1 < self.base {
                self.digits[i] += 1;
                for d in self.digits.iter_mut().skip(i + 1) {
                    *d = 0;
                }
                return Some(&self.digits);
            }
        }
        self.done = true;
        None
    }
}

/// The census of reduced classes on a bounded chart: one datum per class,
/// produced in a deterministic lexicographic order (constant class first,
/// then coefficient tuples over the basis points).
pub struct ClassCensus {
    basis: CokerBasis,
    p: u64,
    e: u32,
    count: u128,
}

impl ClassCensus {
    pub fn basis(&self) -> &CokerBasis {
        &self.basis
    }

    /// Number of classes: p * q^N for N basis points over F_q.
    pub fn count(&self) -> u128 {
        self.count
    }

    pub fn iter(&self) -> ClassIter<'_> {
        ClassIter {
            census: self,
            const_idx: 0,
            odometer: Odometer::new(self.basis.points.len(), fq::field_order(self.p, self.e)),
        }
    }
}

pub struct ClassIter<'a> {
    census: &'a ClassCensus,
    const_idx: usize,
    odometer: Odometer,
}

impl Iterator for ClassIter<'_> {
    type Item = ToricDatum;

    fn next(&mut self) -> Option<ToricDatum> {
        let census = self.census;
        if self.const_idx >= census.basis.constant_reps.len() {
            return None;
        }
        let state = match self.odometer.next_state() {
            Some(s) => s.to_vec(),
            None => {
                self.const_idx += 1;
                if self.const_idx >= census.basis.constant_reps.len() {
                    return None;
                }
                self.odometer =
                    Odometer::new(census.basis.points.len(), fq::field_order(census.p, census.e));
                self.odometer.next_state()?.to_vec()
            }
        };
        let mut terms: BTreeMap<Vec<i64>, FqElem> = BTreeMap::new();
        let constant = &census.basis.constant_reps[self.const_idx];
        if !constant.is_zero() {
            terms.insert(vec![0; census.basis.cone.dim()], constant.clone());
        }
        for (point, &digit) in census.basis.points.iter().zip(&state) {
            let c = FqElem::from_index(census.p, census.e, digit);
            if !c.is_zero() {
                terms.insert(point.clone(), c);
            }
        }
        Some(ToricDatum::from_parts_unchecked(
            census.p,
            census.e,
            census.basis.cone.clone(),
            terms,
            census.basis.box_bound,
        ))
    }
}

/// Builds the census of reduced classes for the chart inside the box.
/// The count is exact; iteration visits each class exactly once.
pub fn enumerate_as_classes(cone: &Cone, box_bound: i64, p: u64, e: u32) -> Result<ClassCensus> {
    let basis = coker_basis_bounded(cone, box_bound, p, e)?;
    let q = fq::field_order(p, e) as u128;
    let n = u32::try_from(basis.points.len())
        .map_err(|_| crate::error::Error::Validation("census basis is too large".into()))?;
    let assignments = q
        .checked_pow(n)
        .ok_or_else(|| crate::error::Error::Validation("census count overflows".into()))?;
    let count = (p as u128)
        .checked_mul(assignments)
        .ok_or_else(|| crate::error::Error::Validation("census count overflows".into()))?;
    Ok(ClassCensus { basis, p, e, count })
}

/// Checks that a reduced datum decomposes as the sum of its restrictions
/// to the given rays: every nonzero support point must lie on one of the
/// rays, and the ray pieces must reassemble the datum exactly. The
/// constant class belongs to the base and is ignored. Repeated rays are
/// deduplicated by their primitive generator.
pub fn verify_splits2_torsor(x: &ToricDatum, rays: &[Cone]) -> Result<bool> {
    if !x.is_reduced() {
        return validation("datum must be reduced; apply the cokernel normal form first");
    }
    // Each listed ray is identified with the ray through its generator,
    // so the halfspace presentation cannot widen what "on the ray" means;
    // repeats collapse.
    let mut unique: Vec<Cone> = Vec::new();
    let mut seen: Vec<Vec<i64>> = Vec::new();
    for t in rays {
        if !t.is_linear() {
            return validation("torsor components must be single rays");
        }
        if t.dim() != x.cone().dim() {
            return validation("ray dimension does not match the chart");
        }
        let gen = t.primitive_ray()?;
        if !seen.contains(&gen) {
            unique.push(Cone::ray_lattice(&gen)?);
            seen.push(gen);
        }
    }

    let zero_pt = vec![0i64; x.cone().dim()];
    for v in x.terms().keys() {
        if *v == zero_pt {
            continue;
        }
        let mut covered = false;
        for t in &unique {
            if t.contains_lattice(v)? {
                covered = true;
                break;
            }
        }
        if !covered {
            return Ok(false);
        }
    }

    // Strip the constant, then compare against the sum of restrictions.
    let nonconstant_terms: Vec<(Vec<i64>, FqElem)> = x
        .terms()
        .iter()
        .filter(|(v, _)| **v != zero_pt)
        .map(|(v, c)| (v.clone(), c.clone()))
        .collect();
    let x_nc = ToricDatum::new(
        x.p(),
        x.e(),
        x.cone().clone(),
        nonconstant_terms,
        x.box_bound(),
    )?;
    let mut sum = ToricDatum::zero(x.p(), x.e(), x.cone().clone(), x.box_bound())?;
    for t in &unique {
        let mut piece = restrict_as(&x_nc, t)?;
        piece = restrict_as(&piece, x.cone())?;
        sum = sum.add(&piece);
    }
    Ok(sum.terms_eq(&x_nc))
}

/// Searches for an explicit witness y supported in the chart's box with
/// a1 - a2 = y^p - y. Exhaustive over all q^(lattice points) candidates;
/// refuses when that search space exceeds 2^20.
pub fn brute_force_isomorphic(a1: &ToricDatum, a2: &ToricDatum, box_bound: i64) -> Result<bool> {
    if a1.p() != a2.p() || a1.e() != a2.e() {
        return validation("data live over different fields");
    }
    if a1.cone().dim() != a2.cone().dim() {
        return validation("data live on charts of different dimension");
    }
    let points = lattice_points_in_box(a1.cone(), box_bound)?;
    let q = fq::field_order(a1.p(), a1.e());
    let bits = (q as f64).log2() * points.len() as f64;
    if bits > 20.0 {
        return validation(format!(
            "brute force space of {} points over F_{} exceeds the 2^20 guard",
            points.len(),
            q
        ));
    }
    let diff = a1.sub(a2);
    let mut odo = Odometer::new(points.len(), q);
    while let Some(state) = odo.next_state() {
        let mut terms: BTreeMap<Vec<i64>, FqElem> = BTreeMap::new();
        for (point, &digit) in points.iter().zip(state) {
            let c = FqElem::from_index(a1.p(), a1.e(), digit);
            if !c.is_zero() {
                terms.insert(point.clone(), c);
            }
        }
        let y = ToricDatum::from_parts_unchecked(
            a1.p(),
            a1.e(),
            a1.cone().clone(),
            terms,
            box_bound,
        );
        if y.frobenius_minus_one().terms_eq(&diff) {
            return Ok(true);
        }
    }
    Ok(false)
}
