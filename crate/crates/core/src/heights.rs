//! Heights of degree-p covers of toric charts: the directional height along
//! a linear functional, the polytope height over a set of vertex
//! functionals, the conductor-style constant on linear charts obtained by
//! specializing to one variable, and the consistency check that heights of
//! ray-supported data split over the rays.
//!
//! All values are exact rationals; support maxima are taken over the stored
//! sparse support, which is complete inside the datum's box.

use crate::artin_schreier::as_break;
use crate::cone::{lattice_index, m_lambda, Cone, LinearFunctional};
use crate::error::{validation, Result};
use crate::fq::FqElem;
use crate::herbrand::BreakValue;
use crate::laurent::LaurentSeries;
use crate::rat::{rat, Rat};
use crate::toric::{restrict_as, ToricDatum};

fn require_reduced(x: &ToricDatum) -> Result<()> {
    if !x.is_reduced() {
        return validation("datum must be reduced; apply the cokernel normal form first");
    }
    Ok(())
}

/// The functional must be strictly positive on every nonzero support point
/// and on every stored ray of the cone; this is the bounded surrogate for
/// lying in the interior of the dual cone.
fn require_interior(x: &ToricDatum, lambda: &LinearFunctional) -> Result<()> {
    if lambda.dim() != x.cone().dim() {
        return validation("functional dimension does not match the chart");
    }
    if lambda.is_zero() {
        return validation("functional must be nonzero");
    }
    for v in x.terms().keys() {
        if v.iter().any(|&c| c != 0) && lambda.eval_lattice(v) <= rat(0) {
            return validation(format!("functional is not positive on support point {v:?}"));
        }
    }
    if let Some(rays) = x.cone().rays() {
        for r in rays {
            if lambda.eval(r) <= rat(0) {
                return validation("functional is not positive on a ray of the cone");
            }
        }
    }
    Ok(())
}

/// Specializes a datum on a linear chart to one variable: the point
/// k * v0 on the primitive ray v0 becomes the monomial t^{-k}.
fn specialize_to_ray(x: &ToricDatum) -> Result<LaurentSeries> {
    let v0 = x.cone().primitive_ray()?;
    let pivot = v0
        .iter()
        .position(|&c| c != 0)
        .expect("primitive ray is nonzero");
    let mut terms: Vec<(i64, FqElem)> = Vec::new();
    for (v, c) in x.terms() {
        let k = v[pivot] / v0[pivot];
        let matches = v.iter().zip(&v0).all(|(&vi, &ri)| vi == k * ri);
        if !matches || k < 0 {
            return validation(format!("support point {v:?} does not lie on the chart's ray"));
        }
        terms.push((-k, c.clone()));
    }
    LaurentSeries::polynomial(x.p(), x.e(), terms)
}

/// The break of a datum living on a linear chart, computed through the
/// one-variable specialization. Works on non-reduced data too, since the
/// series reduction runs underneath.
pub fn ray_break(x: &ToricDatum) -> Result<BreakValue> {
    if !x.cone().is_linear() {
        return validation("chart must be a single ray");
    }
    as_break(&specialize_to_ray(x)?)
}

/// The break constant of a reduced datum on a linear chart, normalized by
/// the lattice data of the functional: (d' / m_lambda) times the break of
/// the one-variable specialization, where d' is the prime-to-p part of the
/// index of (ker lambda cap Z^n) + Z v0 in Z^n. The zero datum gives 0.
pub fn c_lambda_linear(x: &ToricDatum, lambda: &LinearFunctional) -> Result<Rat> {
    require_reduced(x)?;
    if !x.cone().is_linear() {
        return validation("chart must be a single ray");
    }
    require_interior(x, lambda)?;
    let (_, d_prime) = lattice_index(lambda, x.cone(), x.p())?;
    let m_l = m_lambda(lambda)?;
    match ray_break(x)? {
        BreakValue::NegInfinity => Ok(rat(0)),
        BreakValue::Finite(b) => Ok(rat(d_prime as i64) / m_l * b),
    }
}

/// Directional height: the maximum of lambda over the support of a reduced
/// datum; 0 for a constant or zero datum.
pub fn h_lambda_as(x: &ToricDatum, lambda: &LinearFunctional) -> Result<Rat> {
    require_reduced(x)?;
    require_interior(x, lambda)?;
    Ok(x.terms()
        .keys()
        .map(|v| lambda.eval_lattice(v))
        .max()
        .unwrap_or_else(|| rat(0))
        .max(rat(0)))
}

/// Polytope height: the maximum of h_lambda over the vertex functionals of
/// a polytope inside the dual cone.
pub fn h_u_as(x: &ToricDatum, vertices: &[LinearFunctional]) -> Result<Rat> {
    require_reduced(x)?;
    if vertices.is_empty() {
        return validation("polytope needs at least one vertex functional");
    }
    let mut best = rat(0);
    for lambda in vertices {
        if lambda.dim() != x.cone().dim() {
            return validation("vertex functional dimension does not match the chart");
        }
        if lambda.is_zero() {
            return validation("vertex functional must be nonzero");
        }
        for v in x.terms().keys() {
            if lambda.eval_lattice(v) < rat(0) {
                return validation(
                    "vertex functional is negative on the support; it lies outside the dual cone",
                );
            }
        }
        if let Some(rays) = x.cone().rays() {
            for r in rays {
                if lambda.eval(r) < rat(0) {
                    return validation(
                        "vertex functional is negative on a ray; it lies outside the dual cone",
                    );
                }
            }
        }
        for v in x.terms().keys() {
            best = best.max(lambda.eval_lattice(v));
        }
    }
    Ok(best)
}

/// Report of the split-height comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitsReport {
    pub holds: bool,
    pub lhs: Rat,
    pub rhs: Rat,
}

/// Checks that the directional height of a ray-supported datum equals the
/// maximum of the heights of its restrictions to the given rays. Every
/// nonzero support point must lie on one of the rays.
pub fn height_splits_check(
    x: &ToricDatum,
    lambda: &LinearFunctional,
    rays: &[Cone],
) -> Result<SplitsReport> {
    require_reduced(x)?;
    require_interior(x, lambda)?;
    // Each listed ray is identified with the ray through its generator, so
    // membership and restriction agree regardless of how the cone was
    // presented.
    let mut normalized = Vec::with_capacity(rays.len());
    for t in rays {
        if !t.is_linear() {
            return validation("split components must be single rays");
        }
        if t.dim() != x.cone().dim() {
            return validation("split ray dimension does not match the chart");
        }
        normalized.push(Cone::ray_lattice(&t.primitive_ray()?)?);
    }
    for v in x.terms().keys() {
        if v.iter().all(|&c| c == 0) {
            continue;
        }
        let mut covered = false;
        for t in &normalized {
            if t.contains_lattice(v)? {
                covered = true;
                break;
            }
        }
        if !covered {
            return validation(format!("support point {v:?} is not covered by the given rays"));
        }
    }
    let lhs = h_lambda_as(x, lambda)?;
    let mut rhs = rat(0);
    for t in &normalized {
        let piece = restrict_as(x, t)?;
        rhs = rhs.max(h_lambda_as(&piece, lambda)?);
    }
    let holds = lhs == rhs;
    Ok(SplitsReport { holds, lhs, rhs })
}

/// Convenience: d' / m_lambda, the normalization factor in the break
/// constant of a linear chart.
pub fn break_normalization(lambda: &LinearFunctional, t: &Cone, p: u64) -> Result<Rat> {
    let (_, d_prime) = lattice_index(lambda, t, p)?;
    let m_l = m_lambda(lambda)?;
    Ok(rat(d_prime as i64) / m_l)
}
