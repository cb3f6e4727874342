//! The m-fold cover `ℝ/mℤ → ℝ/ℤ` and the averaging identity
//! `m·RT(f, f̃, U) = Σ_c μ_{β_c^n} ι_{β_c^n} RT(β̄_c^n f̄, β_c^n f̃, Ū)` over
//! coset representatives `β_c = a^c`, `0 ≤ c < m`.

use num_bigint::BigInt;

use super::fixed::{candidates_in, select};
use super::{geometric_rt, geometric_rt_with, int, q, ArcRegion, PlCircleMap, Q};
use crate::error::{Error, Result};
use crate::group::{GroupElement, SemidirectElement};
use crate::reidemeister::{mu_map, mu_sum, ClassSum, CyclicSubgroup, MarkedPair, Relation};

/// A lift `f̄` of `f` to the m-fold cover, rescaled to the unit circle, whose
/// lift to `ℝ` is `f̃` itself.
#[derive(Clone, Debug)]
pub struct CoverLift {
    pub subgroup: CyclicSubgroup,
    pub map: PlCircleMap,
}

/// Branch data of `f̃` on `[0, m]`, both axes divided by `m`.
fn unrolled(map: &PlCircleMap, m: u64) -> Vec<Vec<(Q, Q)>> {
    let mi = m as i64;
    let mut ts: Vec<Q> = map.branches().iter().flatten().map(|(t, _)| t.clone()).collect();
    ts.sort();
    ts.dedup();
    let mut grid: Vec<Q> = (0..mi).flat_map(|j| ts.iter().map(move |t| t + int(j))).collect();
    grid.sort();
    grid.dedup();
    let sc = q(1, mi);
    (1..=map.n())
        .map(|k| grid.iter().map(|t| (t * &sc, map.eval_real(k, t) * &sc)).collect())
        .collect()
}

/// Requires `φ_k(a^m) ∈ mℤ` for every branch.
pub fn lift_to_cover(map: &PlCircleMap, m: u64) -> Result<CoverLift> {
    let subgroup = CyclicSubgroup::new(m)?;
    let restricted = subgroup.restrict(&map.induced_hom())?;
    let lifted = PlCircleMap::new(unrolled(map, m))?;
    debug_assert_eq!(lifted.induced_hom(), restricted);
    Ok(CoverLift { subgroup, map: lifted })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AveragingReport {
    pub m: u64,
    /// `RT(f, f̃, U)`
    pub downstairs: ClassSum,
    /// Per coset `c`, the upstairs trace pushed down by `μ ι`.
    pub cosets: Vec<ClassSum>,
    pub pushed: ClassSum,
    pub lefschetz_down: BigInt,
    pub lefschetz_cosets: Vec<BigInt>,
    /// Whether the cover map exists, so the subgroup route was checked too.
    pub lifted: bool,
    pub holds: bool,
}

/// Checks the averaging identity for the `m`-fold cover over `region`.
///
/// Upstairs fixed points are found on `[0, m)` from the unrolled lift, which
/// works whether or not `f` lifts. Each point of coset `c` with
/// `f̃_k(t) + c − t = mg` is the pair `(a^{mg}, k)` for `β_c^n f̃`, and `μ`
/// sends it to `(a^{mg−c}, k)`. When `f` lifts, the same sum is also
/// computed from the cover map's own trace through `ι` and `μ`.
pub fn average_rt(map: &PlCircleMap, m: u64, region: &ArcRegion) -> Result<AveragingReport> {
    let subgroup = CyclicSubgroup::new(m)?;
    let h = map.induced_hom();
    let rel = Relation::new(h.clone());
    let downstairs = geometric_rt_with(map, &rel, region)?;
    let up_region = region.lift_to_cover(m);
    let base = unrolled(map, m);
    let lift = lift_to_cover(map, m).ok();
    let left = |k: usize| map.last_piece(map.theta().perm().apply(k)).slope();
    let mi = m as i64;

    let mut cosets = Vec::with_capacity(m as usize);
    for c in 0..mi {
        let shift = q(c, mi);
        let branches: Vec<Vec<(Q, Q)>> = base
            .iter()
            .map(|b| b.iter().map(|(t, y)| (t.clone(), y + &shift)).collect())
            .collect();
        let beta = SemidirectElement::diagonal(h.n(), &GroupElement::cyclic(c));
        let up_rel = Relation::new(h.conjugate(&beta)?);
        let mut sum = ClassSum::zero();
        for p in select(candidates_in(&branches, &left), &up_region)? {
            let upstairs = up_rel.canonicalize(&MarkedPair::new(GroupElement::cyclic(p.deck * mi), p.k))?;
            let down = rel.canonicalize(&mu_map(&beta, &upstairs.rep)?)?;
            sum.add_class(&down, BigInt::from(p.index));
        }
        if let Some(l) = &lift {
            let up_map = l.map.nudged(&shift);
            let sub_hom = subgroup.restrict(up_rel.hom())?;
            if up_map.induced_hom() != sub_hom {
                return Err(Error::InvalidMap("cover map does not induce the restricted homomorphism".into()));
            }
            let up = geometric_rt(&up_map, &up_region)?;
            let via_subgroup = mu_sum(&rel, &beta, &subgroup.iota_sum(&sub_hom, &up_rel, &up)?)?;
            if via_subgroup != sum {
                return Err(Error::InvalidMap(format!("coset {c}: subgroup route disagrees with the unrolled lift")));
            }
        }
        cosets.push(sum);
    }
    let pushed = cosets.iter().fold(ClassSum::zero(), |acc, s| acc.add(s));
    let lefschetz_cosets: Vec<BigInt> = cosets.iter().map(|s| s.coefficient_sum()).collect();
    let lefschetz_down = downstairs.coefficient_sum();
    let m_big = BigInt::from(m);
    let holds = downstairs.scale(&m_big) == pushed && &lefschetz_down * &m_big == lefschetz_cosets.iter().sum::<BigInt>();
    Ok(AveragingReport {
        m,
        downstairs,
        cosets,
        pushed,
        lefschetz_down,
        lefschetz_cosets,
        lifted: lift.is_some(),
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::LinearCircleMap;

    #[test]
    fn liftability() {
        let m = LinearCircleMap::new(2, 4).unwrap().to_pl();
        let l = lift_to_cover(&m, 2).unwrap();
        assert_eq!(l.map.render_theta(), "(a^2,a^2;id)");
        let m = LinearCircleMap::new(2, 5).unwrap().to_pl();
        assert!(matches!(lift_to_cover(&m, 2), Err(Error::SubgroupNotRegistered { .. })));
        assert!(lift_to_cover(&m, 1).is_ok());
    }

    #[test]
    fn two_five_over_the_double_cover() {
        let m = LinearCircleMap::new(2, 5).unwrap().to_pl();
        let r = average_rt(&m, 2, &ArcRegion::Whole).unwrap();
        assert!(r.holds && !r.lifted);
        assert_eq!(r.lefschetz_cosets.iter().sum::<BigInt>(), BigInt::from(-6));
    }

    #[test]
    fn liftable_maps_over_arcs() {
        let arcs = ArcRegion::arcs(vec![(q(1, 13), q(5, 13)), (q(7, 13), q(12, 13))]).unwrap();
        for (n, d, m) in [(2, 4, 2), (1, 2, 3), (1, -3, 3), (3, 6, 3)] {
            let map = LinearCircleMap::new(n, d).unwrap().to_pl();
            for region in [ArcRegion::Whole, arcs.clone()] {
                let r = average_rt(&map, m, &region).unwrap();
                assert!(r.lifted && r.holds, "n={n} d={d} m={m}");
            }
        }
    }
}
