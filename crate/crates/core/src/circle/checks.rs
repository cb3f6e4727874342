//! Consistency checks of the trace against its structural properties:
//! splitting, change of lift, and the local axioms.

use num_bigint::BigInt;

use super::{fixed_points, geometric_rt_with, int, q, ArcRegion, PlCircleMap, Q};
use crate::error::{Error, Result};
use crate::group::SemidirectElement;
use crate::reidemeister::{mu_sum, ClassSum, MarkedPair, Relation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitReport {
    /// RT of the n-valued map.
    pub combined: ClassSum,
    /// RT of each branch as a single-valued map.
    pub pieces: Vec<ClassSum>,
    /// `Σ_k ι_k` of the pieces.
    pub embedded: ClassSum,
    pub holds: bool,
}

/// For a split map `{f_1, …, f_n}`, checks `RT(f) = Σ_k ι_k RT(f_k)` where
/// `ι_k[(α)] = [(α, k)]`.
pub fn split_rt_check(branches: &[PlCircleMap], region: &ArcRegion) -> Result<SplitReport> {
    let map = PlCircleMap::from_single_valued(branches)?;
    if !map.theta().perm().is_identity() {
        return Err(Error::InvalidMap("branches are not individually closed loops".into()));
    }
    let rel = Relation::new(map.induced_hom());
    let combined = geometric_rt_with(&map, &rel, region)?;
    let mut pieces = Vec::with_capacity(branches.len());
    let mut embedded = ClassSum::zero();
    for (i, b) in branches.iter().enumerate() {
        let single = Relation::new(b.induced_hom());
        let rt = geometric_rt_with(b, &single, region)?;
        for (class, c) in rt.terms() {
            let mut lifted = rel.canonicalize(&MarkedPair::new(class.rep.alpha.clone(), i + 1))?;
            lifted.exact &= class.exact;
            embedded.add_class(&lifted, c.clone());
        }
        pieces.push(rt);
    }
    Ok(SplitReport {
        holds: combined == embedded,
        combined,
        pieces,
        embedded,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftReport {
    /// `RT(f, f̃)`
    pub original: ClassSum,
    /// `RT(f, Φf̃)`, classes for `Φ f̃_# Φ⁻¹`.
    pub relifted: ClassSum,
    /// `μ_Φ RT(f, Φf̃)`
    pub transported: ClassSum,
    /// Whether `(Φf̃)_#` came out as the conjugate homomorphism.
    pub hom_matches: bool,
    pub holds: bool,
}

pub fn change_of_lift_check(map: &PlCircleMap, phi: &SemidirectElement, region: &ArcRegion) -> Result<LiftReport> {
    let rel = Relation::new(map.induced_hom());
    let other = map.relift(phi)?;
    let other_rel = Relation::new(other.induced_hom());
    let hom_matches = other.induced_hom() == map.induced_hom().conjugate(phi)?;
    let original = geometric_rt_with(map, &rel, region)?;
    let relifted = geometric_rt_with(&other, &other_rel, region)?;
    let transported = mu_sum(&rel, phi, &relifted)?;
    Ok(LiftReport {
        holds: hom_matches && transported == original,
        original,
        relifted,
        transported,
        hom_matches,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalReport {
    pub fixed_points: usize,
    /// Each isolated point's trace is `index · [class]`.
    pub isolated: bool,
    /// Point traces sum to the whole-circle trace.
    pub reconstruction: bool,
    /// Shrinking an isolating arc keeps the trace.
    pub excision: bool,
    /// Traces add over disjoint unions of arcs.
    pub additivity: bool,
    /// An arc free of fixed points has trace zero.
    pub empty_region: bool,
}

impl LocalReport {
    pub fn holds(&self) -> bool {
        self.isolated && self.reconstruction && self.excision && self.additivity && self.empty_region
    }
}

/// Checks the local axioms on arcs built around the fixed points: arcs of
/// radius a third of the smallest gap, and the larger arcs between midpoints
/// of consecutive points.
pub fn local_axioms_check(map: &PlCircleMap) -> Result<LocalReport> {
    let rel = Relation::new(map.induced_hom());
    let rt = |r: &ArcRegion| geometric_rt_with(map, &rel, r);
    let whole = rt(&ArcRegion::Whole)?;
    let pts = fixed_points(map, &ArcRegion::Whole)?;
    let p = pts.len();
    let ts: Vec<Q> = pts.iter().map(|x| x.t.clone()).collect();

    if p == 0 {
        let arc = ArcRegion::arc(q(1, 4), q(3, 4))?;
        let empty = rt(&arc)?.is_zero();
        return Ok(LocalReport {
            fixed_points: 0,
            isolated: true,
            reconstruction: whole.is_zero(),
            excision: true,
            additivity: true,
            empty_region: empty,
        });
    }

    // cyclic gaps; ts is sorted and a point has at most one fixed branch
    let gap = |i: usize| {
        if i + 1 < p {
            &ts[i + 1] - &ts[i]
        } else {
            &ts[0] + int(1) - &ts[p - 1]
        }
    };
    let min_gap = (0..p).map(gap).min().expect("nonempty");
    let radius = min_gap / int(3);
    let mids: Vec<Q> = (0..p).map(|i| &ts[i] + gap(i) / int(2)).collect();

    let mut isolated = true;
    let mut excision = true;
    let mut total = ClassSum::zero();
    let mut halves = [ClassSum::zero(), ClassSum::zero()];
    let mut half_arcs: [Vec<(Q, Q)>; 2] = [Vec::new(), Vec::new()];
    for (i, x) in pts.iter().enumerate() {
        let small = ArcRegion::arc(&x.t - &radius, &x.t + &radius)?;
        let local = rt(&small)?;
        let mut expected = ClassSum::zero();
        expected.add_class(&rel.canonicalize(&x.pair())?, BigInt::from(x.index));
        isolated &= local == expected;
        let (lo, hi) = (mids[(i + p - 1) % p].clone(), mids[i].clone());
        let hi = if hi <= lo { hi + int(1) } else { hi };
        if p > 1 {
            let large = ArcRegion::arc(lo.clone(), hi.clone())?;
            excision &= rt(&large)? == local;
            halves[i % 2] = halves[i % 2].add(&local);
            half_arcs[i % 2].push((lo, hi));
        }
        total = total.add(&local);
    }
    let reconstruction = total == whole;

    let additivity = if p > 1 {
        let u1 = ArcRegion::arcs(half_arcs[0].clone())?;
        let u2 = ArcRegion::arcs(half_arcs[1].clone())?;
        let both = u1.union(&u2)?;
        let (r1, r2, r12) = (rt(&u1)?, rt(&u2)?, rt(&both)?);
        r1 == halves[0] && r2 == halves[1] && r12 == r1.add(&r2) && r12 == whole
    } else {
        true
    };

    // the gap between the first isolating arc and the next point
    let empty_start = &ts[0] + &radius;
    let empty_end = &ts[0] + gap(0) - &radius;
    let empty_region = rt(&ArcRegion::arc(empty_start, empty_end)?)?.is_zero();

    Ok(LocalReport {
        fixed_points: p,
        isolated,
        reconstruction,
        excision,
        additivity,
        empty_region,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::LinearCircleMap;
    use crate::group::FreeGroup;

    #[test]
    fn doubling_split() {
        let a = PlCircleMap::new(vec![vec![(q(0, 1), q(0, 1)), (q(1, 1), q(2, 1))]]).unwrap();
        let b = PlCircleMap::new(vec![vec![(q(0, 1), q(1, 2)), (q(1, 1), q(5, 2))]]).unwrap();
        let r = split_rt_check(&[a, b], &ArcRegion::Whole).unwrap();
        assert!(r.holds);
        let g = FreeGroup::CYCLIC;
        assert_eq!(r.combined.render(&g), "-1*[(1,1)] + -1*[(a,2)]");
        // (a,2) and (1,2) are one class here
        let rel = Relation::new(PlCircleMap::from_single_valued(&[
            PlCircleMap::new(vec![vec![(q(0, 1), q(0, 1)), (q(1, 1), q(2, 1))]]).unwrap(),
            PlCircleMap::new(vec![vec![(q(0, 1), q(1, 2)), (q(1, 1), q(5, 2))]]).unwrap(),
        ])
        .unwrap()
        .induced_hom());
        let p = MarkedPair::parse(&g, "(a,2)").unwrap();
        let q2 = MarkedPair::parse(&g, "(1,2)").unwrap();
        assert!(rel.equivalent(&p, &q2).unwrap().is_equivalent());
    }

    #[test]
    fn split_rejects_colliding_branches() {
        let a = PlCircleMap::new(vec![vec![(q(0, 1), q(0, 1)), (q(1, 1), q(2, 1))]]).unwrap();
        assert!(matches!(
            split_rt_check(&[a.clone(), a], &ArcRegion::Whole),
            Err(Error::ValuesCollide { .. })
        ));
    }

    #[test]
    fn swapping_branches_of_two_five() {
        let m = LinearCircleMap::new(2, 5).unwrap().to_pl();
        let phi = SemidirectElement::parse(&FreeGroup::CYCLIC, "(1,1;(1 2))").unwrap();
        let r = change_of_lift_check(&m, &phi, &ArcRegion::Whole).unwrap();
        assert!(r.holds, "{r:?}");
        assert_eq!(r.relifted.len(), 3);
        assert_eq!(r.relifted.coefficient_sum(), BigInt::from(-3));
    }

    #[test]
    fn local_axioms_on_small_maps() {
        for (n, d) in [(2, 5), (1, -1), (3, 0), (1, 3)] {
            let m = LinearCircleMap::new(n, d).unwrap().to_pl();
            let r = local_axioms_check(&m).unwrap();
            assert!(r.holds(), "n={n} d={d}: {r:?}");
            assert_eq!(r.fixed_points as i64, (n as i64 - d).abs());
        }
        let r = local_axioms_check(&LinearCircleMap::new(2, 2).unwrap().to_pl().nudged(&q(1, 4))).unwrap();
        assert!(r.holds() && r.fixed_points == 0);
    }
}
