//! Property suites for the reduction, ramification, extension, cone, toric,
//! height, and census layers.
//!
//! Each block below pins one structural law down with randomized inputs. The
//! strategies stay deliberately small (fields up to F_9, supports inside
//! [-6, 4), lattice boxes up to 8) so that every property also admits an
//! exhaustive or brute-force cross-check where one exists.

use proptest::prelude::*;

use wildbreak::artin_schreier::{as_break, as_reduce, torsor_isomorphic, AsNormalForm};
use wildbreak::cone::{lattice_index, m_lambda, Cone, Halfspace, LinearFunctional};
use wildbreak::extension::{ext_as_reduce, tower2_break, ArtinSchreierExtension, ExtElem};
use wildbreak::fq::{self, FqElem};
use wildbreak::heights::{c_lambda_linear, h_lambda_as, h_u_as, height_splits_check, ray_break};
use wildbreak::herbrand::{break_compose, tower_break_bound, BreakValue, PhiPsi};
use wildbreak::laurent::LaurentSeries;
use wildbreak::rat::{is_integer, rat, ratio, to_i64, Rat};
use wildbreak::toric::{
    check_p_limit_bounded, coker_normal_form, lattice_points_in_box, restrict_as, v_lambda,
    Diagram, ToricDatum,
};
use wildbreak::census::{brute_force_isomorphic, enumerate_as_classes, verify_splits2_torsor};

// ---------------------------------------------------------------------------
// Shared strategies
// ---------------------------------------------------------------------------

/// Small (p, e) pairs keeping q = p^e at most 9.
fn small_field() -> impl Strategy<Value = (u64, u32)> {
    prop_oneof![
        Just((2u64, 1u32)),
        Just((2, 2)),
        Just((3, 1)),
        Just((3, 2)),
    ]
}

/// Exact Laurent polynomial with support in [-6, 4).
fn series(p: u64, e: u32) -> impl Strategy<Value = LaurentSeries> {
    let q = fq::field_order(p, e);
    proptest::collection::vec((-6i64..4, 0..q), 0..6).prop_map(move |raw| {
        let dedup: std::collections::BTreeMap<i64, u64> = raw.into_iter().collect();
        let terms = dedup
            .into_iter()
            .map(|(k, idx)| (k, FqElem::from_index(p, e, idx)))
            .collect();
        LaurentSeries::polynomial(p, e, terms).expect("valid polynomial")
    })
}

fn field_and_series() -> impl Strategy<Value = (u64, u32, LaurentSeries)> {
    small_field().prop_flat_map(|(p, e)| (Just(p), Just(e), series(p, e)))
}

/// Sparse toric datum on a named cone fixture.
#[derive(Clone, Copy, Debug)]
enum ConeKind {
    Orthant2,
    RayAxis,
    RayDiagonal,
    RaySteep,
    Line1,
}

fn cone_fixture(kind: ConeKind) -> Cone {
    match kind {
        ConeKind::Orthant2 => Cone::orthant(2),
        ConeKind::RayAxis => Cone::ray_lattice(&[1, 0]).unwrap(),
        ConeKind::RayDiagonal => Cone::ray_lattice(&[1, 1]).unwrap(),
        ConeKind::RaySteep => Cone::ray_lattice(&[1, 2]).unwrap(),
        ConeKind::Line1 => Cone::full(1),
    }
}

fn cone_kind() -> impl Strategy<Value = ConeKind> {
    prop_oneof![
        Just(ConeKind::Orthant2),
        Just(ConeKind::RayAxis),
        Just(ConeKind::RayDiagonal),
        Just(ConeKind::RaySteep),
        Just(ConeKind::Line1),
    ]
}

fn toric_datum(
    kind: ConeKind,
    box_bound: i64,
    p: u64,
    e: u32,
) -> impl Strategy<Value = ToricDatum> {
    let cone = cone_fixture(kind);
    let points = lattice_points_in_box(&cone, box_bound).expect("box scan");
    let q = fq::field_order(p, e);
    let n_points = points.len();
    proptest::collection::vec((0..n_points, 0..q), 0..5).prop_map(move |raw| {
        let dedup: std::collections::BTreeMap<usize, u64> = raw.into_iter().collect();
        let terms = dedup
            .into_iter()
            .map(|(i, idx)| (points[i].clone(), FqElem::from_index(p, e, idx)))
            .collect();
        ToricDatum::new(p, e, cone.clone(), terms, box_bound).expect("valid datum")
    })
}

fn fe2(p: u64, e: u32, c: u64) -> FqElem {
    FqElem::from_prime(p, e, c)
}

// ---------------------------------------------------------------------------
// Series reduction
// ---------------------------------------------------------------------------

fn witness_residual(a: &LaurentSeries, nf: &AsNormalForm) -> LaurentSeries {
    a.sub(&nf.reduced).sub(&nf.witness.frobenius_minus_one())
}

proptest! {
    // Reducing a reduced series changes nothing.
    #[test]
    fn reduce_is_idempotent((_, _, a) in field_and_series()) {
        let nf = as_reduce(&a).unwrap();
        let again = as_reduce(&nf.reduced).unwrap();
        prop_assert!(again.reduced.terms_eq(&nf.reduced));
        prop_assert!(again.witness.is_zero_within_window());
        prop_assert_eq!(again.break_value, nf.break_value);
    }

    // a - reduced - (w^p - w) vanishes on the shared window.
    #[test]
    fn reduce_witness_identity((_, _, a) in field_and_series()) {
        let nf = as_reduce(&a).unwrap();
        prop_assert!(witness_residual(&a, &nf).is_zero_within_window());
    }

    // Reduced support is {n < 0 : p does not divide n}, plus possibly 0.
    #[test]
    fn reduced_support_shape((p, _, a) in field_and_series()) {
        let nf = as_reduce(&a).unwrap();
        for (&k, c) in nf.reduced.terms() {
            prop_assert!(!c.is_zero());
            prop_assert!(k <= 0, "positive exponent {} survived", k);
            if k < 0 {
                prop_assert!(k.unsigned_abs() % p != 0, "p-divisible pole {} survived", k);
            }
        }
    }

    // The break of a reduced nonsplit cover is prime to p.
    #[test]
    fn break_is_prime_to_p((p, _, a) in field_and_series()) {
        if let BreakValue::Finite(b) = as_break(&a).unwrap() {
            prop_assert!(is_integer(&b));
            let m = to_i64(&b).unwrap();
            prop_assert!(m >= 0);
            if m > 0 {
                prop_assert!(m % p as i64 != 0);
            }
        }
    }

    // Two series are torsor-isomorphic exactly when their reductions agree,
    // and shifting by any w^p - w lands in the same class.
    #[test]
    fn torsor_classes_are_frobenius_cosets(
        (p, e, a) in field_and_series(),
        w in small_field().prop_flat_map(|(p, e)| series(p, e)),
    ) {
        prop_assume!(w.p() == p && w.e() == e);
        let shifted = a.add(&w.frobenius_minus_one());
        let (iso, _) = torsor_isomorphic(&a, &shifted).unwrap();
        prop_assert!(iso);
        let nf_a = as_reduce(&a).unwrap();
        let nf_s = as_reduce(&shifted).unwrap();
        prop_assert!(nf_a.reduced.terms_eq(&nf_s.reduced));
    }
}

/// Exhaustive cross-check over F_2 polynomials supported on [-4, 3):
/// reduction equality agrees with an explicit search for a connecting witness
/// drawn from the same support box.
#[test]
fn reduction_classes_match_exhaustive_witness_search() {
    let exponents: Vec<i64> = (-4..3).collect();
    let n = exponents.len();
    let all: Vec<LaurentSeries> = (0u32..1 << n)
        .map(|mask| {
            let terms = exponents
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &k)| (k, fe2(2, 1, 1)))
                .collect();
            LaurentSeries::polynomial(2, 1, terms).unwrap()
        })
        .collect();
    let reduced: Vec<LaurentSeries> = all
        .iter()
        .map(|a| as_reduce(a).unwrap().reduced)
        .collect();

    // Witness moves never change the class.
    for (i, a) in all.iter().enumerate() {
        for w in all.iter().step_by(13) {
            let shifted = a.add(&w.frobenius_minus_one());
            let nf = as_reduce(&shifted).unwrap();
            assert!(
                nf.reduced.terms_eq(&reduced[i]),
                "shift by a coboundary changed the class of element {i}"
            );
        }
    }

    // Distinct reductions admit no connecting witness within the box: the
    // difference of two reduced forms never matches any w^p - w exactly.
    let mut checked = 0usize;
    for (i, a) in all.iter().enumerate().step_by(7) {
        for (j, b) in all.iter().enumerate().step_by(11) {
            if reduced[i].terms_eq(&reduced[j]) {
                continue;
            }
            let diff = a.sub(b);
            for w in &all {
                assert!(
                    !diff.terms_eq(&w.frobenius_minus_one()),
                    "witness search connected elements {i} and {j} with distinct reductions"
                );
            }
            checked += 1;
        }
    }
    assert!(checked > 50, "sampling covered too few distinct pairs");
}

// ---------------------------------------------------------------------------
// Herbrand functions
// ---------------------------------------------------------------------------

fn sample_grid() -> Vec<Rat> {
    let mut grid: Vec<Rat> = (0..=20).map(|k| ratio(k, 2)).collect();
    grid.push(ratio(1, 3));
    grid.push(ratio(7, 3));
    grid
}

proptest! {
    // phi slopes drop by exactly a factor of p at each breakpoint.
    #[test]
    fn phi_slopes_decay_by_p(
        p in prop_oneof![Just(2u64), Just(3), Just(5)],
        ms in proptest::collection::vec(1i64..12, 1..4),
    ) {
        let mut phi = PhiPsi::identity(p).unwrap();
        for m in &ms {
            if *m as u64 % p == 0 {
                continue;
            }
            let inner = PhiPsi::single_break(*m, p).unwrap();
            phi = PhiPsi::compose(&phi, &inner).unwrap();
        }
        // Consecutive slopes drop by p per breakpoint crossed; coincident
        // breakpoints stack, so the ratio is p^multiplicity.
        let slopes = phi.slopes();
        for pair in slopes.windows(2) {
            prop_assert!(pair[1] < pair[0], "slopes must strictly decrease");
            let ratio = pair[0].clone() / pair[1].clone();
            prop_assert!(is_integer(&ratio));
            let mut r = to_i64(&ratio).unwrap();
            while r % p as i64 == 0 {
                r /= p as i64;
            }
            prop_assert_eq!(r, 1, "slope ratio is not a power of p");
        }
        // eval and eval_inverse are mutually inverse on a sample grid.
        for x in sample_grid() {
            let y = phi.eval(&x);
            prop_assert_eq!(phi.eval_inverse(&y).unwrap(), x);
        }
    }

    // Composition of transition functions is associative pointwise.
    #[test]
    fn phi_composition_associates(
        m1 in 1i64..10, m2 in 1i64..10, m3 in 1i64..10,
    ) {
        let p = 2u64;
        let odd = |m: i64| if m % 2 == 0 { m + 1 } else { m };
        let f = PhiPsi::single_break(odd(m1), p).unwrap();
        let g = PhiPsi::single_break(odd(m2), p).unwrap();
        let h = PhiPsi::single_break(odd(m3), p).unwrap();
        let left = PhiPsi::compose(&PhiPsi::compose(&f, &g).unwrap(), &h).unwrap();
        let right = PhiPsi::compose(&f, &PhiPsi::compose(&g, &h).unwrap()).unwrap();
        for x in sample_grid() {
            prop_assert_eq!(left.eval(&x), right.eval(&x));
        }
    }

    // Pushing a relative break through a single-break tower evaluates phi,
    // and the two-stage result respects the 2l depth bound.
    #[test]
    fn break_compose_matches_phi_and_bound(
        m in 1i64..10,
        r_num in 1i64..12,
    ) {
        let p = 2u64;
        let m = if m % 2 == 0 { m + 1 } else { m };
        let phi = PhiPsi::single_break(m, p).unwrap();
        let rel = BreakValue::finite(rat(r_num)).unwrap();
        let base = BreakValue::from_integer(m).unwrap();
        let total = break_compose(&base, &rel, &phi);
        // The composite's highest break is the larger of the base break and
        // the relative break pushed through the base transition function.
        let lifted = BreakValue::finite(phi.eval(&rat(r_num))).unwrap();
        prop_assert_eq!(total.clone(), base.max(lifted));
        let ell = rat(m.max(r_num));
        let bound = tower_break_bound(2, &ell).unwrap();
        if let BreakValue::Finite(b) = total {
            prop_assert!(b <= bound, "depth-2 break exceeded the 2l bound");
        }
    }

    // Round-tripping through the multiplicity listing reproduces phi.
    #[test]
    fn phi_breakpoint_multiplicity_roundtrip(
        ms in proptest::collection::vec(1i64..8, 1..4),
    ) {
        let p = 3u64;
        let mut phi = PhiPsi::identity(p).unwrap();
        for m in &ms {
            if *m as u64 % p == 0 {
                continue;
            }
            phi = PhiPsi::compose(&phi, &PhiPsi::single_break(*m, p).unwrap()).unwrap();
        }
        let pts = phi.breakpoints_with_multiplicity();
        let back = PhiPsi::from_breakpoints_with_multiplicity(p, pts).unwrap();
        for x in sample_grid() {
            prop_assert_eq!(back.eval(&x), phi.eval(&x));
        }
    }
}

// ---------------------------------------------------------------------------
// Degree-p extensions
// ---------------------------------------------------------------------------

fn small_extension(p: u64, m: i64) -> ArtinSchreierExtension {
    let a = LaurentSeries::polynomial(p, 1, vec![(-m, fe2(p, 1, 1))]).unwrap();
    ArtinSchreierExtension::new(a).unwrap()
}

/// Random element with at most three monomials c t^s z^r, r < p.
fn ext_element(p: u64, m: i64) -> impl Strategy<Value = ExtElem> {
    proptest::collection::vec((0..p as usize, -4i64..4, 1..p), 0..4).prop_map(move |raw| {
        let ext = small_extension(p, m);
        let mut acc = ext.zero();
        for (r, s, c) in raw {
            let mono = ext.monomial(r, s, fe2(p, 1, c)).unwrap();
            acc = acc.add(&mono);
        }
        acc
    })
}

proptest! {
    // Valuation is additive on products of exact nonzero elements.
    #[test]
    fn ext_valuation_additive(
        p in prop_oneof![Just(2u64), Just(3)],
        m in prop_oneof![Just(1i64), Just(5)],
        r1 in 0usize..2, s1 in -3i64..3,
        r2 in 0usize..2, s2 in -3i64..3,
    ) {
        let ext = small_extension(p, m);
        let x = ext.monomial(r1, s1, fe2(p, 1, 1)).unwrap();
        let y = ext.monomial(r2, s2, fe2(p, 1, 1)).unwrap();
        let vx = x.valuation().unwrap();
        let vy = y.valuation().unwrap();
        let prod = x.mul(&y);
        prop_assert_eq!(prod.valuation().unwrap(), vx + vy);
    }

    // b - reduced - (y^p - y) vanishes within the working horizon.
    #[test]
    fn ext_reduce_witness_identity(
        m in prop_oneof![Just(1i64), Just(3)],
        b in ext_element(2, 1),
    ) {
        // Rebuild b over the chosen extension so m varies too.
        let ext = small_extension(2, m);
        let b = ext.element(b.coeffs().to_vec()).unwrap();
        let red = ext_as_reduce(&b).unwrap();
        let residual = b
            .sub(&red.reduced)
            .sub(&red.witness.frobenius_minus_one());
        prop_assert!(residual.is_zero_within_window());
        // Reducing the reduced part is a fixed point.
        let again = ext_as_reduce(&red.reduced).unwrap();
        prop_assert!(again.reduced.terms_eq(&red.reduced));
        prop_assert_eq!(again.relative_break, red.relative_break);
    }

    // Depth-2 towers with polar depth <= l never break above 2l.
    #[test]
    fn tower2_break_obeys_depth_bound(
        m in prop_oneof![Just(1i64), Just(3), Just(5)],
        c0 in 0i64..4, c1 in -5i64..1,
    ) {
        let p = 2u64;
        let a = LaurentSeries::polynomial(p, 1, vec![(-m, fe2(p, 1, 1))]).unwrap();
        let coeffs = vec![
            LaurentSeries::polynomial(p, 1, vec![(-c0, fe2(p, 1, 1))]).unwrap(),
            LaurentSeries::polynomial(p, 1, vec![(c1, fe2(p, 1, 1))]).unwrap(),
        ];
        let ell = m.max(c0).max(-c1).max(1);
        let total = tower2_break(&a, &coeffs).unwrap();
        let bound = tower_break_bound(2, &rat(ell)).unwrap();
        if let BreakValue::Finite(b) = total {
            prop_assert!(b <= bound, "tower break {} exceeds 2*{}", b, ell);
        }
    }
}

/// The tower break only depends on the cover presented, not on the chosen
/// Artin-Schreier presentation of the first stage: replacing a by
/// a + (x^p - x) and rewriting b in the shifted generator preserves it.
#[test]
fn tower2_break_is_presentation_invariant() {
    let p = 2u64;
    let one = fe2(p, 1, 1);
    let shifts = [
        LaurentSeries::polynomial(p, 1, vec![(1, one.clone())]).unwrap(),
        LaurentSeries::polynomial(p, 1, vec![(0, one.clone()), (2, one.clone())]).unwrap(),
        LaurentSeries::polynomial(p, 1, vec![(-2, one.clone())]).unwrap(),
    ];
    let cases = [
        (1i64, vec![(0, 0i64), (1, -1i64)]),
        (3, vec![(1, -2), (1, -1)]),
        (1, vec![(0, -1), (1, 1)]),
    ];
    for (m, profile) in &cases {
        let a = LaurentSeries::polynomial(p, 1, vec![(-m, one.clone())]).unwrap();
        let coeffs: Vec<LaurentSeries> = profile
            .iter()
            .map(|&(_, s)| LaurentSeries::polynomial(p, 1, vec![(s, one.clone())]).unwrap())
            .collect();
        let baseline = tower2_break(&a, &coeffs).unwrap();
        for x in &shifts {
            let a_shift = a.add(&x.frobenius_minus_one());
            // b(z) = c0 + c1 z with z = z' - x becomes (c0 + c1 x) + c1 z'.
            // Expand by plain polynomial substitution; degree stays < p.
            let neg_x = x.neg();
            let mut rewritten = vec![LaurentSeries::zero(p, 1); coeffs.len()];
            for (i, c) in coeffs.iter().enumerate().rev() {
                // Multiply the running polynomial by (z' - x), then add c z'^0.
                let prev = rewritten.clone();
                for slot in rewritten.iter_mut() {
                    *slot = LaurentSeries::zero(p, 1);
                }
                for (j, term) in prev.iter().enumerate() {
                    rewritten[j] = rewritten[j].add(&term.mul(&neg_x));
                    if j + 1 < rewritten.len() {
                        rewritten[j + 1] = rewritten[j + 1].add(term);
                    }
                }
                rewritten[0] = rewritten[0].add(c);
                let _ = i;
            }
            let shifted = tower2_break(&a_shift, &rewritten).unwrap();
            assert_eq!(
                shifted, baseline,
                "presentation shift changed the tower break for m={m}"
            );
        }
    }
}

// ---------------------------------------------------------------------------
// Cones and functionals
// ---------------------------------------------------------------------------

proptest! {
    // Membership in a generated cone forces nonnegativity against every ray
    // of the dual fixture, and the double dual keeps the original rays.
    #[test]
    fn duality_on_fixtures(v0 in -6i64..7, v1 in -6i64..7) {
        // (cone, rays of its dual) fixtures in dimension 2.
        let fixtures: Vec<(Cone, Vec<Vec<i64>>)> = vec![
            (Cone::orthant(2), vec![vec![1, 0], vec![0, 1]]),
            (
                Cone::ray_lattice(&[1, 0]).unwrap(),
                vec![vec![1, 0], vec![0, 1], vec![0, -1]],
            ),
            (
                Cone::ray_lattice(&[1, 2]).unwrap(),
                vec![vec![2, -1], vec![-2, 1], vec![1, 0], vec![0, 1]],
            ),
        ];
        let v = [v0, v1];
        for (cone, dual_rays) in &fixtures {
            if cone.contains_lattice(&v).unwrap() {
                for lam in dual_rays {
                    let f = LinearFunctional::from_integers(lam);
                    prop_assert!(f.eval_lattice(&v) >= rat(0));
                }
            }
            // Every dual ray lies in the computed dual cone, and the cone of
            // dual rays pulls back to contain the original generators.
            let dual = cone.dual().unwrap();
            for lam in dual_rays {
                prop_assert!(dual.contains_lattice(lam).unwrap());
            }
            let halfspaces = dual_rays
                .iter()
                .map(|r| Halfspace {
                    normal: LinearFunctional::from_integers(r),
                    strict: false,
                })
                .collect();
            let double_dual = Cone::new(2, halfspaces, None).unwrap();
            prop_assert!(double_dual.contains_rays_of(cone).unwrap());
        }
    }

    // m_{c lambda} = m_lambda / c for positive rational c.
    #[test]
    fn m_lambda_scales_inversely(
        a in -5i64..6, b in -5i64..6,
        c_num in 1i64..7, c_den in 1i64..7,
    ) {
        prop_assume!(a != 0 || b != 0);
        let lam = LinearFunctional::from_integers(&[a, b]);
        let c = ratio(c_num, c_den);
        let scaled = LinearFunctional::new(
            lam.coords().iter().map(|x| x.clone() * c.clone()).collect(),
        );
        prop_assert_eq!(m_lambda(&scaled).unwrap() * c, m_lambda(&lam).unwrap());
    }

    // lattice_index is invariant under unimodular change of coordinates.
    #[test]
    fn lattice_index_unimodular_invariance(
        ray0 in -4i64..5, ray1 in -4i64..5,
        l0 in -4i64..5, l1 in -4i64..5,
        ops in proptest::collection::vec((0usize..2, -2i64..3), 0..5),
    ) {
        prop_assume!(ray0 != 0 || ray1 != 0);
        prop_assume!(l0 * ray0 + l1 * ray1 > 0); // lambda positive on the ray
        let lam = LinearFunctional::from_integers(&[l0, l1]);
        let t = Cone::ray_lattice(&[ray0, ray1]).unwrap();
        let (d, d_prime) = lattice_index(&lam, &t, 2).unwrap();

        // Build U and its inverse as products of elementary shear matrices.
        let mut u = [[1i64, 0], [0, 1]];
        let mut u_inv = [[1i64, 0], [0, 1]];
        for (which, k) in ops {
            // Row op on U: row_a += k * row_b; inverse accumulates on the right.
            let (ra, rb) = if which == 0 { (0, 1) } else { (1, 0) };
            for col in 0..2 {
                u[ra][col] += k * u[rb][col];
            }
            for row in 0..2 {
                u_inv[row][rb] -= k * u_inv[row][ra];
            }
        }
        let mapped_ray = [
            u[0][0] * ray0 + u[0][1] * ray1,
            u[1][0] * ray0 + u[1][1] * ray1,
        ];
        // lambda' = lambda . U^{-1}, so lambda'(U v) = lambda(v).
        let mapped_lam = LinearFunctional::from_integers(&[
            l0 * u_inv[0][0] + l1 * u_inv[1][0],
            l0 * u_inv[0][1] + l1 * u_inv[1][1],
        ]);
        let t2 = Cone::ray_lattice(&mapped_ray).unwrap();
        prop_assert_eq!(lattice_index(&mapped_lam, &t2, 2).unwrap(), (d, d_prime));
    }
}

// ---------------------------------------------------------------------------
// Toric reduction
// ---------------------------------------------------------------------------

proptest! {
    // Normal form is idempotent and the witness identity holds exactly.
    #[test]
    fn toric_nf_idempotent_with_exact_witness(
        (kind, x) in cone_kind().prop_flat_map(|k| {
            (Just(k), small_field().prop_flat_map(move |(p, e)| toric_datum(k, 4, p, e)))
        }),
    ) {
        let _ = kind;
        let (reduced, witness) = coker_normal_form(&x);
        prop_assert!(reduced.is_reduced());
        let rebuilt = reduced.add(&witness.frobenius_minus_one());
        prop_assert!(rebuilt.terms_eq(&x), "x != reduced + (w^F - w)");
        let (again, w2) = coker_normal_form(&reduced);
        prop_assert!(again.terms_eq(&reduced));
        prop_assert!(w2.terms().is_empty());
    }

    // Restriction to a ray face commutes with normal form on the reduced part.
    #[test]
    fn restrict_commutes_with_nf_on_rays(
        x in small_field().prop_flat_map(|(p, e)| toric_datum(ConeKind::Orthant2, 4, p, e)),
        which in 0usize..3,
    ) {
        let tau = match which {
            0 => Cone::ray_lattice(&[1, 0]).unwrap(),
            1 => Cone::ray_lattice(&[0, 1]).unwrap(),
            _ => Cone::ray_lattice(&[1, 1]).unwrap(),
        };
        let lhs = coker_normal_form(&restrict_as(&x, &tau).unwrap()).0;
        let rhs = restrict_as(&coker_normal_form(&x).0, &tau).unwrap();
        prop_assert!(lhs.terms_eq(&rhs));
    }

    // v_lambda never increases under normal form shifts of the same class,
    // and equals +infinity exactly on data with empty support.
    #[test]
    fn v_lambda_detects_support(
        x in small_field().prop_flat_map(|(p, e)| toric_datum(ConeKind::Orthant2, 3, p, e)),
        l0 in 1i64..4, l1 in 1i64..4,
    ) {
        let lam = LinearFunctional::from_integers(&[l0, l1]);
        match v_lambda(&x, &lam) {
            None => prop_assert!(x.terms().is_empty()),
            Some(v) => {
                prop_assert!(!x.terms().is_empty());
                // The minimum is attained at a support point.
                let attained = x
                    .terms()
                    .keys()
                    .any(|pt| lam.eval_lattice(pt) == v);
                prop_assert!(attained);
            }
        }
    }

    // A p-limit verdict at box B stays true at every smaller box.
    #[test]
    fn p_limit_verdict_is_monotone(b in 1i64..16) {
        let left = Cone::ray_lattice(&[-1]).unwrap();
        let right = Cone::ray_lattice(&[1]).unwrap();
        let target = Cone::full(1);
        let diagram = Diagram {
            cones: vec![target.clone(), left, right],
            arrows: vec![(0, 1), (0, 2)],
        };
        let report = check_p_limit_bounded(&diagram, &target, 16, 2).unwrap();
        prop_assert!(report.holds);
        let smaller = check_p_limit_bounded(&diagram, &target, b, 2).unwrap();
        prop_assert!(smaller.holds, "verdict flipped at box {}", b);
    }
}

// One-dimensional ray data mirror series reduction under k -> t^{-k}.
proptest! {
    #[test]
    fn ray_nf_matches_series_reduction(
        (p, e) in small_field(),
        raw in proptest::collection::vec((0i64..6, 0u64..9), 0..5),
    ) {
        let q = fq::field_order(p, e);
        let cone = Cone::ray_lattice(&[1]).unwrap();
        let mut terms: Vec<(Vec<i64>, FqElem)> = Vec::new();
        for (k, idx) in raw {
            terms.push((vec![k], FqElem::from_index(p, e, idx % q)));
        }
        let x = match ToricDatum::new(p, e, cone, terms.clone(), 6) {
            Ok(x) => x,
            Err(_) => return Ok(()), // duplicate points sampled
        };
        let series = LaurentSeries::polynomial(
            p,
            e,
            x.terms().iter().map(|(v, c)| (-v[0], c.clone())).collect(),
        )
        .unwrap();
        let (reduced, _) = coker_normal_form(&x);
        let nf = as_reduce(&series).unwrap();
        let expected: Vec<(i64, FqElem)> = reduced
            .terms()
            .iter()
            .map(|(v, c)| (-v[0], c.clone()))
            .collect();
        let expected = LaurentSeries::polynomial(p, e, expected).unwrap();
        prop_assert!(nf.reduced.terms_eq(&expected));
    }
}

// ---------------------------------------------------------------------------
// Heights
// ---------------------------------------------------------------------------

fn reduced_orthant_datum(p: u64, e: u32) -> impl Strategy<Value = ToricDatum> {
    toric_datum(ConeKind::Orthant2, 4, p, e).prop_map(|x| coker_normal_form(&x).0)
}

proptest! {
    // h_lambda is monotone in lambda, nonnegative, and attained on support.
    #[test]
    fn h_lambda_monotone_and_attained(
        x in small_field().prop_flat_map(|(p, e)| reduced_orthant_datum(p, e)),
        a0 in 1i64..4, a1 in 1i64..4, extra in 0i64..3,
    ) {
        let lam = LinearFunctional::from_integers(&[a0, a1]);
        let bigger = LinearFunctional::from_integers(&[a0 + extra, a1 + extra]);
        let h1 = h_lambda_as(&x, &lam).unwrap();
        let h2 = h_lambda_as(&x, &bigger).unwrap();
        prop_assert!(h1 >= rat(0));
        prop_assert!(h2 >= h1, "h is not monotone in the functional");
        if !x.terms().is_empty() {
            let attained = x.terms().keys().any(|v| lam.eval_lattice(v) == h1);
            prop_assert!(attained || h1 == rat(0));
        }
    }

    // Restriction never raises the height.
    #[test]
    fn restriction_never_raises_height(
        x in small_field().prop_flat_map(|(p, e)| reduced_orthant_datum(p, e)),
        which in 0usize..3,
    ) {
        let tau = match which {
            0 => Cone::ray_lattice(&[1, 0]).unwrap(),
            1 => Cone::ray_lattice(&[0, 1]).unwrap(),
            _ => Cone::ray_lattice(&[1, 1]).unwrap(),
        };
        let lam = LinearFunctional::from_integers(&[1, 1]);
        let restricted = restrict_as(&x, &tau).unwrap();
        prop_assert!(
            h_lambda_as(&restricted, &lam).unwrap() <= h_lambda_as(&x, &lam).unwrap()
        );
    }

    // Strong height laws: subadditivity under max, the support bound, and
    // the converse support localization.
    #[test]
    fn strong_height_axioms(
        x in small_field().prop_flat_map(|(p, e)| reduced_orthant_datum(p, e)),
        y in small_field().prop_flat_map(|(p, e)| reduced_orthant_datum(p, e)),
    ) {
        prop_assume!(x.p() == y.p() && x.e() == y.e());
        let lam = LinearFunctional::from_integers(&[1, 2]);
        let hx = h_lambda_as(&x, &lam).unwrap();
        let hy = h_lambda_as(&y, &lam).unwrap();
        let sum = coker_normal_form(&x.add(&y)).0;
        let hs = h_lambda_as(&sum, &lam).unwrap();
        prop_assert!(hs <= hx.clone().max(hy.clone()), "h(x+y) > max(h(x), h(y))");

        // Support in {lambda <= h} and conversely h <= max over support.
        for v in x.terms().keys() {
            prop_assert!(lam.eval_lattice(v) <= hx);
        }
        let support_max = x
            .terms()
            .keys()
            .map(|v| lam.eval_lattice(v))
            .max()
            .unwrap_or_else(|| rat(0));
        prop_assert!(hx <= support_max.max(rat(0)));
    }

    // On a linear chart the break, the normalized invariant, and the height
    // tell one consistent story: h = b * lambda(v0) and c = d'/m * b.
    #[test]
    fn linear_chart_consistency(
        (p, e) in prop_oneof![Just((2u64, 1u32)), Just((3, 1))],
        ray_choice in 0usize..3,
        raw in proptest::collection::vec((1i64..5, 0u64..9), 0..4),
    ) {
        let v0: Vec<i64> = match ray_choice {
            0 => vec![1, 0],
            1 => vec![1, 1],
            _ => vec![1, 2],
        };
        let cone = Cone::ray_lattice(&v0).unwrap();
        let q = fq::field_order(p, e);
        let mut seen = std::collections::BTreeSet::new();
        let mut terms: Vec<(Vec<i64>, FqElem)> = Vec::new();
        for (k, idx) in raw {
            if seen.insert(k) {
                let pt: Vec<i64> = v0.iter().map(|c| c * k).collect();
                terms.push((pt, FqElem::from_index(p, e, idx % q)));
            }
        }
        let x = match ToricDatum::new(p, e, cone, terms, 20) {
            Ok(x) => coker_normal_form(&x).0,
            Err(_) => return Ok(()),
        };
        let lam = LinearFunctional::from_integers(&[2, 1]);
        let b = ray_break(&x).unwrap();
        let h = h_lambda_as(&x, &lam).unwrap();
        let c = c_lambda_linear(&x, &lam).unwrap();
        let (d, d_prime) = lattice_index(&lam, x.cone(), p).unwrap();
        let m = m_lambda(&lam).unwrap();
        match b {
            BreakValue::NegInfinity => {
                prop_assert_eq!(h, rat(0));
                prop_assert_eq!(c, rat(0));
            }
            BreakValue::Finite(b) => {
                prop_assert_eq!(c.clone(), rat(d_prime as i64) / m * b.clone());
                if d % p != 0 {
                    prop_assert_eq!(h, b * lam.eval_lattice(&v0));
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Census
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // Brute-force isomorphism agrees with normal-form equality on small data.
    // The witness search space is q^(lattice points), so the box shrinks as
    // the field grows to keep each case under a millisecond budget.
    #[test]
    fn brute_force_matches_nf_equality(
        (p, e, b) in prop_oneof![Just((2u64, 1u32, 2i64)), Just((2, 2, 1))],
        raw1 in proptest::collection::vec((0usize..9, 0u64..4), 0..4),
        raw2 in proptest::collection::vec((0usize..9, 0u64..4), 0..4),
    ) {
        let cone = Cone::orthant(2);
        let points = lattice_points_in_box(&cone, b).unwrap();
        let q = fq::field_order(p, e);
        let build = |raw: &[(usize, u64)]| {
            let mut terms: Vec<(Vec<i64>, FqElem)> = Vec::new();
            let mut seen = std::collections::BTreeSet::new();
            for &(i, idx) in raw {
                let i = i % points.len();
                if seen.insert(i) {
                    terms.push((points[i].clone(), FqElem::from_index(p, e, idx % q)));
                }
            }
            ToricDatum::new(p, e, cone.clone(), terms, b).unwrap()
        };
        let x1 = build(&raw1);
        let x2 = build(&raw2);
        let nf_equal = coker_normal_form(&x1).0.terms_eq(&coker_normal_form(&x2).0);
        let brute = brute_force_isomorphic(&x1, &x2, b).unwrap();
        prop_assert_eq!(brute, nf_equal);
    }
}

/// Census size law and full reconstruction on a one-dimensional ray.
#[test]
fn census_counts_and_reconstructs_classes() {
    for (p, e, b) in [(2u64, 1u32, 3i64), (2, 2, 2), (3, 1, 2)] {
        let cone = Cone::ray_lattice(&[1]).unwrap();
        let census = enumerate_as_classes(&cone, b, p, e).unwrap();
        let q = fq::field_order(p, e) as u128;
        let n = census.basis().points.len() as u32;
        assert_eq!(census.count(), p as u128 * q.pow(n));

        let classes: Vec<ToricDatum> = census.iter().collect();
        assert_eq!(classes.len() as u128, census.count());
        // Every class is reduced and classes are pairwise distinct.
        for x in &classes {
            assert!(x.is_reduced());
        }
        for i in 0..classes.len() {
            for j in (i + 1)..classes.len() {
                assert!(
                    !classes[i].terms_eq(&classes[j]),
                    "census emitted a duplicate class at ({i}, {j})"
                );
            }
        }
        // Reduction maps every bounded datum onto one of the listed classes.
        let points = lattice_points_in_box(&cone, b).unwrap();
        let q64 = fq::field_order(p, e);
        let mut assignments = 0usize;
        for mask in 0..(q64.pow(points.len() as u32)) {
            let mut rem = mask;
            let mut terms = Vec::new();
            for pt in &points {
                let digit = rem % q64;
                rem /= q64;
                terms.push((pt.clone(), FqElem::from_index(p, e, digit)));
            }
            let x = ToricDatum::new(p, e, cone.clone(), terms, b).unwrap();
            let red = coker_normal_form(&x).0;
            let hits = classes.iter().filter(|c| c.terms_eq(&red)).count();
            assert_eq!(hits, 1, "reduction of datum {mask} missed the census");
            assignments += 1;
        }
        assert!(assignments > 0);
    }
}

// Splits decompositions validated by the torsor checker on random reduced data.
proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn splits2_torsor_accepts_axis_decompositions(
        x in toric_datum(ConeKind::Orthant2, 3, 2, 1).prop_map(|x| coker_normal_form(&x).0),
    ) {
        let rays = vec![
            Cone::ray_lattice(&[1, 0]).unwrap(),
            Cone::ray_lattice(&[0, 1]).unwrap(),
            Cone::ray_lattice(&[1, 1]).unwrap(),
            Cone::ray_lattice(&[1, 2]).unwrap(),
            Cone::ray_lattice(&[2, 1]).unwrap(),
        ];
        let covered = x.terms().keys().all(|v| {
            v.iter().all(|&c| c == 0)
                || rays.iter().any(|r| r.contains_lattice(v).unwrap())
        });
        let verdict = verify_splits2_torsor(&x, &rays).unwrap();
        prop_assert_eq!(verdict, covered);
        // Heights agree with the decomposition whenever it covers the support.
        if covered {
            let lam = LinearFunctional::from_integers(&[1, 1]);
            let report = height_splits_check(&x, &lam, &rays).unwrap();
            prop_assert!(report.holds);
            prop_assert_eq!(report.lhs, h_lambda_as(&x, &lam).unwrap());
        }
    }
}

/// h_U over vertex functionals dominates each h_lambda it includes.
#[test]
fn h_u_is_max_over_vertices() {
    let cone = Cone::orthant(2);
    let one = fe2(2, 1, 1);
    let x = ToricDatum::new(
        2,
        1,
        cone,
        vec![(vec![2, 1], one.clone()), (vec![1, 3], one)],
        3,
    )
    .unwrap();
    let x = coker_normal_form(&x).0;
    let verts = vec![
        LinearFunctional::from_integers(&[1, 1]),
        LinearFunctional::from_integers(&[2, 1]),
        LinearFunctional::from_integers(&[1, 2]),
    ];
    let hu = h_u_as(&x, &verts).unwrap();
    let mut best = rat(0);
    for v in &verts {
        let h = h_lambda_as(&x, v).unwrap();
        assert!(h <= hu);
        best = best.max(h);
    }
    assert_eq!(hu, best);
}
