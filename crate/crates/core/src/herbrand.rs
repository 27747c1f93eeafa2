//! Piecewise-linear transition functions for ramification breaks.
//!
//! A `PhiPsi` is the increasing, concave, piecewise-linear function attached
//! to a totally ramified tower: slope 1 up to the first breakpoint, and
//! division of the slope by a power of p at each breakpoint. All breakpoints
//! and values are exact rationals; evaluation, inversion, and composition
//! never round.
//!
//! Highest breaks are tracked as a `BreakValue`: either a rational >= 0 or
//! the minus-infinity sentinel for split (completely decomposed) covers.

use std::cmp::Ordering;

use num::{One, Signed, Zero};

use crate::error::{validation, Result};
use crate::rat::{format_rat, rat, Rat};

/// Highest ramification break of a cover: -infinity for split covers,
/// otherwise a rational >= 0 (0 exactly for unramified nontrivial covers).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BreakValue {
    NegInfinity,
    Finite(Rat),
}

impl BreakValue {
    pub fn finite(r: Rat) -> Result<Self> {
        if r.is_negative() {
            return validation(format!("break value {} is negative", format_rat(&r)));
        }
        Ok(BreakValue::Finite(r))
    }

    pub fn from_integer(m: i64) -> Result<Self> {
        Self::finite(rat(m))
    }

    pub fn is_split(&self) -> bool {
        matches!(self, BreakValue::NegInfinity)
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        match self {
            BreakValue::Finite(r) => Some(r),
            BreakValue::NegInfinity => None,
        }
    }

    pub fn to_string_repr(&self) -> String {
        match self {
            BreakValue::NegInfinity => "-inf".to_string(),
            BreakValue::Finite(r) => format_rat(r),
        }
    }
}

impl PartialOrd for BreakValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BreakValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (BreakValue::NegInfinity, BreakValue::NegInfinity) => Ordering::Equal,
            (BreakValue::NegInfinity, _) => Ordering::Less,
            (_, BreakValue::NegInfinity) => Ordering::Greater,
            (BreakValue::Finite(a), BreakValue::Finite(b)) => a.cmp(b),
        }
    }
}

/// Increasing piecewise-linear function phi with its exact inverse psi.
///
/// Invariants: breakpoints strictly increase and exceed -1; the slope left
/// of everything is 1 and drops by a positive power of p across each
/// breakpoint (a power higher than 1 occurs when breaks of consecutive
/// levels collide under composition); phi(0) = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiPsi {
    p: u64,
    breakpoints: Vec<Rat>,
    /// `slopes[i]` rules the segment below `breakpoints[i]`;
    /// `slopes[len]` rules the ray above the last breakpoint.
    slopes: Vec<Rat>,
}

impl PhiPsi {
    pub fn identity(p: u64) -> Result<Self> {
        if p < 2 {
            return validation("p must be at least 2");
        }
        Ok(PhiPsi { p, breakpoints: Vec::new(), slopes: vec![Rat::one()] })
    }

    /// Transition function of a single degree-p step with highest break m:
    /// the identity up to m, slope 1/p beyond.
    pub fn single_break(m: i64, p: u64) -> Result<Self> {
        if p < 2 {
            return validation("p must be at least 2");
        }
        if m <= 0 {
            return validation(format!("single break must be positive, got {m}"));
        }
        Ok(PhiPsi {
            p,
            breakpoints: vec![rat(m)],
            slopes: vec![Rat::one(), Rat::one() / rat(p as i64)],
        })
    }

    pub fn from_parts(p: u64, breakpoints: Vec<Rat>, slopes: Vec<Rat>) -> Result<Self> {
        if p < 2 {
            return validation("p must be at least 2");
        }
        if slopes.len() != breakpoints.len() + 1 {
            return validation("need exactly one more slope than breakpoints");
        }
        if slopes.first() != Some(&Rat::one()) {
            return validation("leading slope must be 1");
        }
        for w in breakpoints.windows(2) {
            if w[0] >= w[1] {
                return validation("breakpoints must strictly increase");
            }
        }
        if let Some(b0) = breakpoints.first() {
            if *b0 < -rat(1) {
                return validation("breakpoints must not lie below -1");
            }
        }
        let pb = num::BigInt::from(p);
        for w in slopes.windows(2) {
            // Each drop must be division by p^k for some k >= 1.
            let ratio = w[0].clone() / w[1].clone();
            if ratio <= Rat::one() || !ratio.denom().is_one() {
                return validation("slopes must decrease by powers of p");
            }
            let mut n = ratio.numer().clone();
            while (n.clone() % pb.clone()).is_zero() {
                n /= pb.clone();
            }
            if !n.is_one() {
                return validation("slope ratio must be a power of p");
            }
        }
        Ok(PhiPsi { p, breakpoints, slopes })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn breakpoints(&self) -> &[Rat] {
        &self.breakpoints
    }

    pub fn slopes(&self) -> &[Rat] {
        &self.slopes
    }

    /// Serialized form: each breakpoint repeated once per factor of p the
    /// slope loses there. Single-step functions have singleton lists.
    pub fn breakpoints_with_multiplicity(&self) -> Vec<Rat> {
        let mut out = Vec::new();
        let p_rat = rat(self.p as i64);
        for (i, b) in self.breakpoints.iter().enumerate() {
            let mut ratio = self.slopes[i].clone() / self.slopes[i + 1].clone();
            while ratio > Rat::one() {
                out.push(b.clone());
                ratio /= p_rat.clone();
            }
        }
        out
    }

    /// Rebuilds from the multiplicity encoding used in JSON.
    pub fn from_breakpoints_with_multiplicity(p: u64, points: Vec<Rat>) -> Result<Self> {
        if p < 2 {
            return validation("p must be at least 2");
        }
        let p_rat = rat(p as i64);
        let mut breakpoints: Vec<Rat> = Vec::new();
        let mut slopes = vec![Rat::one()];
        for pt in points {
            match breakpoints.last() {
                Some(last) if *last == pt => {
                    let s = slopes.last().unwrap() / p_rat.clone();
                    *slopes.last_mut().unwrap() = s;
                }
                Some(last) if *last > pt => {
                    return validation("breakpoints must be non-decreasing");
                }
                _ => {
                    if pt < -rat(1) {
                        return validation("breakpoints must not lie below -1");
                    }
                    breakpoints.push(pt);
                    let s = slopes.last().unwrap() / p_rat.clone();
                    slopes.push(s);
                }
            }
        }
        Ok(PhiPsi { p, breakpoints, slopes })
    }

    /// Value of phi at the i-th breakpoint (accumulated exactly from 0).
    fn value_at_breakpoint(&self, i: usize) -> Rat {
        let mut val = Rat::zero();
        let mut prev = Rat::zero();
        for j in 0..=i {
            let x = self.breakpoints[j].clone();
            val += self.slopes[j].clone() * (x.clone() - prev);
            prev = x;
        }
        // The anchor is phi(0) = 0; breakpoints are positive in practice,
        // but if the first segment starts below zero the accumulation above
        // already measured from 0 because prev started at 0.
        val
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        // Find the segment containing x.
        let mut val = Rat::zero();
        let mut prev = Rat::zero();
        for (i, b) in self.breakpoints.iter().enumerate() {
            if *x <= *b {
                return val + self.slopes[i].clone() * (x.clone() - prev);
            }
            val += self.slopes[i].clone() * (b.clone() - prev);
            prev = b.clone();
        }
        val + self.slopes.last().unwrap().clone() * (x.clone() - prev)
    }

    /// Exact inverse. The domain floor is -1 (phi is extended with slope 1
    /// below its first breakpoint), so arguments below phi(-1) = -1 error.
    pub fn eval_inverse(&self, y: &Rat) -> Result<Rat> {
        if *y < -rat(1) {
            return validation(format!(
                "psi argument {} below the domain floor -1",
                format_rat(y)
            ));
        }
        let mut prev_x = Rat::zero();
        let mut prev_y = Rat::zero();
        for (i, b) in self.breakpoints.iter().enumerate() {
            let vb = self.value_at_breakpoint(i);
            if *y <= vb {
                return Ok(prev_x + (y.clone() - prev_y) / self.slopes[i].clone());
            }
            prev_x = b.clone();
            prev_y = vb;
        }
        Ok(prev_x + (y.clone() - prev_y) / self.slopes.last().unwrap().clone())
    }

    /// Composite transition function outer(inner(x)), the function of a
    /// two-stage tower whose lower stage has function `inner`.
    pub fn compose(outer: &PhiPsi, inner: &PhiPsi) -> Result<PhiPsi> {
        if outer.p != inner.p {
            return validation("cannot compose transition functions with different p");
        }
        let mut points: Vec<Rat> = inner.breakpoints.clone();
        for b in &outer.breakpoints {
            points.push(inner.eval_inverse(b)?);
        }
        points.sort();
        points.dedup();
        // Slope on each segment is the product of the factor slopes; probe
        // each segment at a point strictly inside it.
        let mut slopes = Vec::with_capacity(points.len() + 1);
        for i in 0..=points.len() {
            let probe = segment_probe(&points, i);
            let s_inner = inner.slope_at(&probe);
            let s_outer = outer.slope_at(&inner.eval(&probe));
            slopes.push(s_inner * s_outer);
        }
        // Merge segments whose slopes agree (cannot happen for genuine
        // breakpoints, but keeps the representation canonical).
        let mut bp_out = Vec::new();
        let mut sl_out = vec![slopes[0].clone()];
        for (i, b) in points.iter().enumerate() {
            if slopes[i + 1] != *sl_out.last().unwrap() {
                bp_out.push(b.clone());
                sl_out.push(slopes[i + 1].clone());
            }
        }
        Ok(PhiPsi { p: outer.p, breakpoints: bp_out, slopes: sl_out })
    }

    /// Slope of the segment containing x (segments are half-open to the
    /// right, so at a breakpoint this is the left slope).
    fn slope_at(&self, x: &Rat) -> Rat {
        for (i, b) in self.breakpoints.iter().enumerate() {
            if *x <= *b {
                return self.slopes[i].clone();
            }
        }
        self.slopes.last().unwrap().clone()
    }
}

fn segment_probe(points: &[Rat], i: usize) -> Rat {
    if points.is_empty() {
        return Rat::zero();
    }
    if i == 0 {
        return points[0].clone() - rat(1);
    }
    if i == points.len() {
        return points[i - 1].clone() + rat(1);
    }
    (points[i - 1].clone() + points[i].clone()) / rat(2)
}

/// Highest break of a two-stage tower: the base contributes its own break,
/// the relative break arrives through the base transition function.
pub fn break_compose(
    base: &BreakValue,
    relative: &BreakValue,
    phi_base: &PhiPsi,
) -> BreakValue {
    match relative {
        BreakValue::NegInfinity => base.clone(),
        BreakValue::Finite(r) => {
            let lifted = BreakValue::Finite(phi_base.eval(r));
            if *base >= lifted {
                base.clone()
            } else {
                lifted
            }
        }
    }
}

/// Upper bound d * l for the highest break of a tower of d degree-p stages
/// whose stage parameters have polar depth at most l.
pub fn tower_break_bound(stages: u32, depth: &Rat) -> Result<Rat> {
    if depth.is_negative() {
        return validation("polar depth bound must be nonnegative");
    }
    Ok(rat(stages as i64) * depth.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ratio;

    #[test]
    fn single_break_evaluates_piecewise() {
        let f = PhiPsi::single_break(1, 2).unwrap();
        assert_eq!(f.eval(&rat(3)), rat(2)); // 1 + (3-1)/2
        assert_eq!(f.eval(&rat(1)), rat(1));
        assert_eq!(f.eval(&rat(0)), rat(0));
        assert_eq!(f.eval(&rat(-1)), rat(-1));
        let g = PhiPsi::single_break(3, 3).unwrap();
        assert_eq!(g.eval(&rat(9)), rat(5)); // 3 + 6/3
    }

    #[test]
    fn inverse_round_trips() {
        let f = PhiPsi::single_break(1, 2).unwrap();
        assert_eq!(f.eval_inverse(&rat(2)).unwrap(), rat(3));
        for x in [-1, 0, 1, 2, 5, 37] {
            let x = rat(x);
            assert_eq!(f.eval_inverse(&f.eval(&x)).unwrap(), x);
        }
        assert!(f.eval_inverse(&rat(-2)).is_err());
    }

    #[test]
    fn composition_matches_hand_evaluation() {
        let outer = PhiPsi::single_break(1, 2).unwrap();
        let inner = PhiPsi::single_break(3, 2).unwrap();
        let c = PhiPsi::compose(&outer, &inner).unwrap();
        assert_eq!(c.eval(&rat(3)), rat(2));
        assert_eq!(c.eval(&rat(7)), rat(3));
        // Pointwise agreement with the factor functions on a grid.
        for n in -4..40 {
            let x = ratio(n, 4);
            assert_eq!(c.eval(&x), outer.eval(&inner.eval(&x)));
        }
    }

    #[test]
    fn composition_with_identity_is_identity() {
        let id = PhiPsi::identity(2).unwrap();
        let f = PhiPsi::single_break(5, 2).unwrap();
        assert_eq!(PhiPsi::compose(&id, &f).unwrap(), f);
        assert_eq!(PhiPsi::compose(&f, &id).unwrap(), f);
    }

    #[test]
    fn coincident_breakpoints_stack_slope_drops() {
        // Two stages breaking at the same place: slope falls by p^2 at one
        // breakpoint.
        let f = PhiPsi::single_break(1, 2).unwrap();
        let c = PhiPsi::compose(&f, &f).unwrap();
        assert_eq!(c.breakpoints(), &[rat(1)]);
        assert_eq!(c.slopes(), &[rat(1), ratio(1, 4)]);
        assert_eq!(c.breakpoints_with_multiplicity(), vec![rat(1), rat(1)]);
        let rebuilt =
            PhiPsi::from_breakpoints_with_multiplicity(2, vec![rat(1), rat(1)]).unwrap();
        assert_eq!(rebuilt, c);
    }

    #[test]
    fn break_compose_takes_the_max_through_phi() {
        let phi = PhiPsi::single_break(1, 2).unwrap();
        let b = break_compose(
            &BreakValue::from_integer(1).unwrap(),
            &BreakValue::from_integer(3).unwrap(),
            &phi,
        );
        assert_eq!(b, BreakValue::from_integer(2).unwrap());
        // A split relative stage contributes nothing.
        let b = break_compose(
            &BreakValue::from_integer(1).unwrap(),
            &BreakValue::NegInfinity,
            &phi,
        );
        assert_eq!(b, BreakValue::from_integer(1).unwrap());
    }

    #[test]
    fn break_values_order_with_sentinel_at_bottom() {
        let inf = BreakValue::NegInfinity;
        let zero = BreakValue::from_integer(0).unwrap();
        let three = BreakValue::from_integer(3).unwrap();
        assert!(inf < zero && zero < three);
        assert!(BreakValue::from_integer(-1).is_err());
        assert_eq!(inf.to_string_repr(), "-inf");
        assert_eq!(three.to_string_repr(), "3");
    }

    #[test]
    fn tower_bound_is_d_times_depth() {
        assert_eq!(tower_break_bound(2, &rat(5)).unwrap(), rat(10));
        assert!(tower_break_bound(2, &rat(-1)).is_err());
    }

    #[test]
    fn from_parts_validates_shape() {
        assert!(PhiPsi::from_parts(2, vec![rat(1)], vec![rat(1), ratio(1, 2)]).is_ok());
        assert!(PhiPsi::from_parts(2, vec![rat(1)], vec![rat(1), ratio(1, 3)]).is_err());
        assert!(PhiPsi::from_parts(2, vec![rat(2), rat(1)], vec![rat(1), ratio(1, 2), ratio(1, 4)])
            .is_err());
        assert!(PhiPsi::from_parts(2, vec![rat(1)], vec![ratio(1, 2), ratio(1, 4)]).is_err());
    }
}
