//! Sparse elements of the monoid algebra F_q[sigma cap Z^n] and the
//! Frobenius-minus-one bookkeeping on them: normal forms modulo p-th-power
//! halving, restriction to subcones, lambda-valuations, bounded cokernel
//! bases, and the bounded diagram checks for p-limits and for the torsor
//! properties of inclusion and completion maps.
//!
//! The box bound B means coordinatewise |v_i| <= B; every datum is complete
//! inside its box, so all checks here are exact statements about the bounded
//! slice of the algebra.

use std::collections::{BTreeMap, BTreeSet};

use crate::cone::{Cone, LinearFunctional};
use crate::error::{validation, Result};
use crate::fq::{self, FqElem};
use crate::rat::{rat, Rat};

/// Element of F_q[sigma cap Z^n] with support inside a box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricDatum {
    p: u64,
    e: u32,
    cone: Cone,
    terms: BTreeMap<Vec<i64>, FqElem>,
    box_bound: i64,
}

impl ToricDatum {
    pub fn new(
        p: u64,
        e: u32,
        cone: Cone,
        terms: Vec<(Vec<i64>, FqElem)>,
        box_bound: i64,
    ) -> Result<Self> {
        fq::validate_field(p, e)?;
        if box_bound < 0 {
            return validation("box bound must be nonnegative");
        }
        let mut map = BTreeMap::new();
        for (v, c) in terms {
            if v.len() != cone.dim() {
                return validation("support point dimension does not match cone");
            }
            if c.p() != p || c.e() != e {
                return validation("coefficient field does not match datum field");
            }
            if c.is_zero() {
                continue;
            }
            if v.iter().any(|x| x.abs() > box_bound) {
                return validation(format!("support point {v:?} outside box {box_bound}"));
            }
            if !cone.contains_lattice(&v)? {
                return validation(format!("support point {v:?} outside the cone"));
            }
            if map.insert(v, c).is_some() {
                return validation("duplicate support point");
            }
        }
        Ok(ToricDatum { p, e, cone, terms: map, box_bound })
    }

    pub fn zero(p: u64, e: u32, cone: Cone, box_bound: i64) -> Result<Self> {
        ToricDatum::new(p, e, cone, Vec::new(), box_bound)
    }

    /// Assembles a datum from terms already known to satisfy the
    /// invariants (support in the cone and box, nonzero coefficients in
    /// the right field). Used by enumerators that draw support points
    /// straight from a coker basis.
    pub(crate) fn from_parts_unchecked(
        p: u64,
        e: u32,
        cone: Cone,
        terms: BTreeMap<Vec<i64>, FqElem>,
        box_bound: i64,
    ) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        ToricDatum { p, e, cone, terms, box_bound }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn box_bound(&self) -> i64 {
        self.box_bound
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, FqElem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the constant monomial [0].
    pub fn constant_coeff(&self) -> FqElem {
        let zero_pt = vec![0i64; self.cone.dim()];
        self.terms
            .get(&zero_pt)
            .cloned()
            .unwrap_or_else(|| FqElem::zero(self.p, self.e))
    }

    fn assert_same_chart(&self, other: &ToricDatum) {
        assert!(
            self.p == other.p && self.e == other.e && self.cone.dim() == other.cone.dim(),
            "toric data live on different charts"
        );
    }

    pub fn add(&self, other: &ToricDatum) -> ToricDatum {
        self.assert_same_chart(other);
        let mut terms = self.terms.clone();
        for (v, c) in &other.terms {
            let entry = terms
                .entry(v.clone())
                .or_insert_with(|| FqElem::zero(self.p, self.e));
            *entry = entry.add(c);
        }
        terms.retain(|_, c| !c.is_zero());
        ToricDatum {
            p: self.p,
            e: self.e,
            cone: self.cone.clone(),
            terms,
            box_bound: self.box_bound.max(other.box_bound),
        }
    }

    pub fn neg(&self) -> ToricDatum {
        let terms = self.terms.iter().map(|(v, c)| (v.clone(), c.neg())).collect();
        ToricDatum { terms, ..self.clone() }
    }

    pub fn sub(&self, other: &ToricDatum) -> ToricDatum {
        self.add(&other.neg())
    }

    /// Frobenius: multiplies exponent vectors by p and raises coefficients
    /// to the p-th power. The box grows accordingly.
    pub fn frobenius(&self) -> ToricDatum {
        let p = self.p as i64;
        let terms = self
            .terms
            .iter()
            .map(|(v, c)| {
                let vp: Vec<i64> = v.iter().map(|x| x.saturating_mul(p)).collect();
                (vp, c.frobenius())
            })
            .collect();
        ToricDatum {
            p: self.p,
            e: self.e,
            cone: self.cone.clone(),
            terms,
            box_bound: self.box_bound.saturating_mul(p),
        }
    }

    pub fn frobenius_minus_one(&self) -> ToricDatum {
        self.frobenius().sub(self)
    }

    /// Structural equality of supports and coefficients, ignoring the cone
    /// presentation and box bookkeeping.
    pub fn terms_eq(&self, other: &ToricDatum) -> bool {
        self.p == other.p && self.e == other.e && self.terms == other.terms
    }

    /// True when no nonzero support point is p-divisible and the constant
    /// is its canonical coset representative.
    pub fn is_reduced(&self) -> bool {
        let p = self.p as i64;
        for v in self.terms.keys() {
            if v.iter().any(|&x| x != 0) && v.iter().all(|&x| x % p == 0) {
                return false;
            }
        }
        let c0 = self.constant_coeff();
        fq::canonical_coset_representative(&c0) == c0
    }
}

/// Reduction of a datum modulo the image of F - 1: p-divisible support
/// points are halved (with coefficient p-th roots) until none remain, and
/// the constant moves to its canonical coset representative. Returns the
/// reduced datum and an exact witness w with x - reduced = w^p - w.
pub fn coker_normal_form(x: &ToricDatum) -> (ToricDatum, ToricDatum) {
    let p = x.p as i64;
    let mut reduced = x.clone();
    let mut witness = ToricDatum {
        p: x.p,
        e: x.e,
        cone: x.cone.clone(),
        terms: BTreeMap::new(),
        box_bound: x.box_bound,
    };
    loop {
        let target = reduced
            .terms
            .iter()
            .find(|(v, _)| v.iter().any(|&c| c != 0) && v.iter().all(|&c| c % p == 0))
            .map(|(v, c)| (v.clone(), c.clone()));
        let Some((v, c)) = target else { break };
        let half: Vec<i64> = v.iter().map(|&c| c / p).collect();
        let root = c.pth_root();
        let w = ToricDatum {
            p: x.p,
            e: x.e,
            cone: x.cone.clone(),
            terms: BTreeMap::from([(half, root)]),
            box_bound: x.box_bound,
        };
        reduced = reduced.sub(&w.frobenius_minus_one());
        witness = witness.add(&w);
    }
    let c0 = reduced.constant_coeff();
    let canon = fq::canonical_coset_representative(&c0);
    if canon != c0 {
        let y0 = fq::solve_artin_schreier(&c0.sub(&canon))
            .expect("difference within a coset is solvable");
        let w = ToricDatum {
            p: x.p,
            e: x.e,
            cone: x.cone.clone(),
            terms: BTreeMap::from([(vec![0i64; x.cone.dim()], y0)]),
            box_bound: x.box_bound,
        };
        reduced = reduced.sub(&w.frobenius_minus_one());
        witness = witness.add(&w);
    }
    // Halving only moves support inward, so the arithmetic's box growth
    // (from the intermediate Frobenius terms) is undone here.
    reduced.box_bound = x.box_bound;
    witness.box_bound = x.box_bound;
    debug_assert!(reduced.is_reduced());
    debug_assert!(reduced.terms.keys().all(|v| v.iter().all(|c| c.abs() <= x.box_bound)));
    (reduced, witness)
}

/// Keeps exactly the terms supported on the subcone tau; realizes the
/// restriction of torsor data to a chart inside the cover.
pub fn restrict_as(x: &ToricDatum, tau: &Cone) -> Result<ToricDatum> {
    if tau.dim() != x.cone.dim() {
        return validation("restriction cone has mismatched dimension");
    }
    let mut terms = BTreeMap::new();
    for (v, c) in &x.terms {
        if tau.contains_lattice(v)? {
            terms.insert(v.clone(), c.clone());
        }
    }
    Ok(ToricDatum {
        p: x.p,
        e: x.e,
        cone: tau.clone(),
        terms,
        box_bound: x.box_bound,
    })
}

/// Minimum of lambda over the support; None is the +infinity sentinel for
/// the zero datum.
pub fn v_lambda(x: &ToricDatum, lambda: &LinearFunctional) -> Option<Rat> {
    x.terms
        .keys()
        .map(|v| lambda.eval_lattice(v))
        .min()
}

/// Free part of the bounded cokernel of F - 1 on F_q[sigma cap Z^n]:
/// the non-p-divisible nonzero lattice points, plus the constant classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CokerBasis {
    pub cone: Cone,
    pub box_bound: i64,
    /// Nonzero support points of reduced data, in lexicographic order.
    pub points: Vec<Vec<i64>>,
    /// Canonical representatives of coker(F - 1, F_q), zero first.
    pub constant_reps: Vec<FqElem>,
}

/// Enumerates the lattice points of the cone inside the box.
pub fn lattice_points_in_box(cone: &Cone, box_bound: i64) -> Result<Vec<Vec<i64>>> {
    if box_bound < 0 {
        return validation("box bound must be nonnegative");
    }
    let n = cone.dim();
    let mut out = Vec::new();
    let mut current = vec![-box_bound; n];
    'outer: loop {
        if cone.contains_lattice(&current)? {
            out.push(current.clone());
        }
        for i in (0..n).rev() {
            if current[i] < box_bound {
                current[i] += 1;
                for x in current.iter_mut().skip(i + 1) {
                    *x = -box_bound;
                }
                continue 'outer;
            }
        }
        break;
    }
    out.sort();
    Ok(out)
}

/// The bounded coker basis for a cone: every nonzero, non-p-divisible
/// lattice point in the box, plus the p constant classes.
pub fn coker_basis_bounded(cone: &Cone, box_bound: i64, p: u64, e: u32) -> Result<CokerBasis> {
    fq::validate_field(p, e)?;
    let points = lattice_points_in_box(cone, box_bound)?
        .into_iter()
        .filter(|v| {
            let nonzero = v.iter().any(|&c| c != 0);
            let divisible = v.iter().all(|&c| c % p as i64 == 0);
            nonzero && !divisible
        })
        .collect();
    Ok(CokerBasis {
        cone: cone.clone(),
        box_bound,
        points,
        constant_reps: fq::coker_representatives(p, e)?,
    })
}

/// Diagram of cones with arrows; the arrow (i, j) is the scheme map from
/// chart i to chart j and requires cone_j to be a subcone of cone_i (the
/// ring of the smaller cone includes into the ring of the larger).
#[derive(Debug, Clone)]
pub struct Diagram {
    pub cones: Vec<Cone>,
    pub arrows: Vec<(usize, usize)>,
}

/// Outcome of the bounded p-limit comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLimitReport {
    pub holds: bool,
    /// Target basis points not represented by any diagram class.
    pub missing: Vec<Vec<i64>>,
    /// Points represented by several diagram classes that the arrows fail
    /// to identify.
    pub duplicated: Vec<Vec<i64>>,
    /// Points carried by diagram charts but absent from the target basis.
    pub extra: Vec<Vec<i64>>,
    /// True when the constant classes of the charts do not all merge.
    pub split_constants: bool,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Bounded check that the target chart is the p-limit of the diagram: the
/// colimit of the bounded coker bases along the arrows must match the
/// target's bounded coker basis, with all constant slots merging into one.
pub fn check_p_limit_bounded(
    diagram: &Diagram,
    target: &Cone,
    box_bound: i64,
    p: u64,
) -> Result<PLimitReport> {
    if diagram.cones.is_empty() {
        return validation("diagram needs at least one cone");
    }
    for cone in &diagram.cones {
        if cone.dim() != target.dim() {
            return validation("diagram cone dimension does not match target");
        }
    }
    for &(i, j) in &diagram.arrows {
        if i >= diagram.cones.len() || j >= diagram.cones.len() {
            return validation("arrow endpoint out of range");
        }
    }

    // e only affects the constant slot, which is compared as a single slot.
    let bases: Vec<CokerBasis> = diagram
        .cones
        .iter()
        .map(|c| coker_basis_bounded(c, box_bound, p, 1))
        .collect::<Result<_>>()?;
    let target_basis = coker_basis_bounded(target, box_bound, p, 1)?;

    // Diagram cones must sit inside the target; checked on bounded points.
    for (idx, basis) in bases.iter().enumerate() {
        for v in &basis.points {
            if !target.contains_lattice(v)? {
                return validation(format!(
                    "diagram cone {idx} has point {v:?} outside the target cone"
                ));
            }
        }
    }

    // Node layout: for chart i, points then one constant slot.
    let mut offsets = Vec::with_capacity(bases.len());
    let mut total = 0usize;
    for basis in &bases {
        offsets.push(total);
        total += basis.points.len() + 1;
    }
    let constant_node = |i: usize| offsets[i] + bases[i].points.len();
    let mut uf = UnionFind::new(total);

    for &(i, j) in &diagram.arrows {
        // Scheme arrow i -> j: the smaller cone_j includes into cone_i.
        for (jj, v) in bases[j].points.iter().enumerate() {
            let Some(ii) = bases[i].points.iter().position(|w| w == v) else {
                return validation(format!(
                    "arrow ({i}, {j}) is not an inclusion: point {v:?} of cone {j} \
                     is missing from cone {i}"
                ));
            };
            uf.union(offsets[j] + jj, offsets[i] + ii);
        }
        uf.union(constant_node(i), constant_node(j));
    }

    // Constant classes must all merge into one.
    let mut constant_roots = BTreeSet::new();
    for i in 0..bases.len() {
        constant_roots.insert(uf.find(constant_node(i)));
    }
    let split_constants = constant_roots.len() != 1;

    // Collect the point classes: one representative point per colimit class.
    let mut class_points: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    for (i, basis) in bases.iter().enumerate() {
        for (k, v) in basis.points.iter().enumerate() {
            let root = uf.find(offsets[i] + k);
            class_points.entry(root).or_insert_with(|| v.clone());
        }
    }
    let mut seen: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for v in class_points.values() {
        *seen.entry(v.clone()).or_insert(0) += 1;
    }

    let target_points: BTreeSet<Vec<i64>> = target_basis.points.iter().cloned().collect();
    let missing: Vec<Vec<i64>> = target_basis
        .points
        .iter()
        .filter(|v| !seen.contains_key(*v))
        .cloned()
        .collect();
    let duplicated: Vec<Vec<i64>> = seen
        .iter()
        .filter(|(_, &count)| count > 1)
        .map(|(v, _)| v.clone())
        .collect();
    let extra: Vec<Vec<i64>> = seen
        .keys()
        .filter(|v| !target_points.contains(*v))
        .cloned()
        .collect();

    let holds =
        !split_constants && missing.is_empty() && duplicated.is_empty() && extra.is_empty();
    Ok(PLimitReport { holds, missing, duplicated, extra, split_constants })
}

/// The ring maps whose torsor-level behavior can be decided on bounded
/// coker bases.
#[derive(Debug, Clone)]
pub enum RingMap {
    /// Inclusion along a subcone: F_q[tau cap Z^n] -> F_q[sigma cap Z^n].
    Inclusion { source: Cone, target: Cone },
    /// Completion of the chart in the lambda direction: basis points with
    /// lambda(v) < 0 acquire convergent Artin-Schreier witnesses and die in
    /// the cokernel.
    Completion { cone: Cone, lambda: LinearFunctional },
}

impl RingMap {
    /// The classical one-variable comparison map: polynomials in the polar
    /// variable against the full Laurent series field. Under the ray sign
    /// convention (point k on the positive axis is the monomial t^{-k}),
    /// both sides share the positive-axis basis.
    pub fn katz() -> RingMap {
        let cone = Cone::ray_lattice(&[1]).expect("unit ray is valid");
        RingMap::Completion { cone, lambda: LinearFunctional::from_integers(&[1]) }
    }
}

/// Torsor-level behavior of a ring map on bounded coker bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapProperties {
    pub p_injective: bool,
    pub p_surjective: bool,
    pub p_faithful: bool,
    /// Target classes with no preimage (witnesses p_surjective = false).
    pub uncovered: Vec<Vec<i64>>,
    /// Source classes killed by the map (witnesses p_injective = false).
    pub collapsed: Vec<Vec<i64>>,
}

/// Decides p-injectivity / p-surjectivity / p-faithfulness of a supported
/// map class on the bounded coker bases.
pub fn check_map_p_properties(map: &RingMap, box_bound: i64, p: u64) -> Result<MapProperties> {
    match map {
        RingMap::Inclusion { source, target } => {
            if source.dim() != target.dim() {
                return validation("inclusion endpoints have mismatched dimension");
            }
            let src = coker_basis_bounded(source, box_bound, p, 1)?;
            let tgt = coker_basis_bounded(target, box_bound, p, 1)?;
            for v in &src.points {
                if !target.contains_lattice(v)? {
                    return validation(format!(
                        "not an inclusion: source point {v:?} lies outside the target cone"
                    ));
                }
            }
            // ker of an inclusion is zero, so the snake-lemma obstruction
            // to p-injectivity vanishes identically.
            let src_set: BTreeSet<&Vec<i64>> = src.points.iter().collect();
            let uncovered: Vec<Vec<i64>> = tgt
                .points
                .iter()
                .filter(|v| !src_set.contains(*v))
                .cloned()
                .collect();
            let p_surjective = uncovered.is_empty();
            Ok(MapProperties {
                p_injective: true,
                p_surjective,
                p_faithful: p_surjective,
                uncovered,
                collapsed: Vec::new(),
            })
        }
        RingMap::Completion { cone, lambda } => {
            if lambda.dim() != cone.dim() {
                return validation("completion functional has mismatched dimension");
            }
            let basis = coker_basis_bounded(cone, box_bound, p, 1)?;
            let collapsed: Vec<Vec<i64>> = basis
                .points
                .iter()
                .filter(|v| lambda.eval_lattice(v) < rat(0))
                .cloned()
                .collect();
            // The completion's basis is the source basis minus the killed
            // points, so the induced map is onto by construction.
            let p_injective = collapsed.is_empty();
            Ok(MapProperties {
                p_injective,
                p_surjective: true,
                p_faithful: p_injective,
                uncovered: Vec::new(),
                collapsed,
            })
        }
    }
}
