use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use super::{ArcRegion, Piece, PlCircleMap, Q};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::reidemeister::{ClassSum, MarkedPair, Relation};

/// A transversal fixed point: `f̃_k(t) = t + deck` with `t ∈ [0,1)`.
/// It lies in `p Fix(a^{-deck} f̃_k)` and carries the pair `(a^deck, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointRecord {
    pub t: Q,
    pub k: usize,
    pub deck: i64,
    /// `+1` where the branch crosses the diagonal with slope below 1, `−1` above.
    pub index: i32,
}

impl FixedPointRecord {
    pub fn pair(&self) -> MarkedPair {
        MarkedPair::new(GroupElement::cyclic(self.deck), self.k)
    }
}

pub(crate) enum Candidate {
    Point(FixedPointRecord),
    /// A degenerate stretch `[t0, t1]` on branch `k`.
    Bad { k: usize, t0: Q, t1: Q, reason: &'static str },
}

fn candidates(map: &PlCircleMap) -> Vec<Candidate> {
    // slope just left of t = 0 comes from the branch that wraps into k
    candidates_in(map.branches(), &|k| map.last_piece(map.theta().perm().apply(k)).slope())
}

/// Solves `y − t ∈ ℤ` piece by piece over `[0,1)` for raw branch data.
pub(crate) fn candidates_in(branches: &[Vec<(Q, Q)>], left_of_zero: &dyn Fn(usize) -> Q) -> Vec<Candidate> {
    let mut out = Vec::new();
    for (k, b) in branches.iter().enumerate() {
        let k = k + 1;
        let mut left_slope = left_of_zero(k);
        for w in b.windows(2) {
            let p = Piece {
                t0: w[0].0.clone(),
                y0: w[0].1.clone(),
                t1: w[1].0.clone(),
                y1: w[1].1.clone(),
            };
            let slope = p.slope();
            let g0 = &p.y0 - &p.t0;
            let g1 = &p.y1 - &p.t1;
            if slope.is_one() {
                if g0.is_integer() {
                    out.push(Candidate::Bad {
                        k,
                        t0: p.t0.clone(),
                        t1: p.t1.clone(),
                        reason: "branch runs along the diagonal",
                    });
                }
                left_slope = slope;
                continue;
            }
            // t ∈ [t0, t1) corresponds to g ∈ [g0, g1) or (g1, g0]
            let ints: Vec<BigInt> = if g0 < g1 {
                let lo = g0.ceil().to_integer();
                let hi = g1.ceil().to_integer();
                num_iter(lo, hi)
            } else {
                let lo = g1.floor().to_integer() + 1;
                let hi = g0.floor().to_integer() + 1;
                num_iter(lo, hi)
            };
            for i in ints {
                let iq = Q::from_integer(i.clone());
                let t = &p.t0 + (&iq - &g0) / (&g1 - &g0) * (&p.t1 - &p.t0);
                if t == p.t0 && left_slope != slope {
                    out.push(Candidate::Bad {
                        k,
                        t0: t.clone(),
                        t1: t,
                        reason: "fixed point at a breakpoint",
                    });
                    continue;
                }
                out.push(Candidate::Point(FixedPointRecord {
                    t,
                    k,
                    deck: i.to_i64().expect("moderate degree"),
                    index: if slope > Q::one() { -1 } else { 1 },
                }));
            }
            left_slope = slope;
        }
    }
    out
}

fn num_iter(lo: BigInt, hi: BigInt) -> Vec<BigInt> {
    let mut v = Vec::new();
    let mut i = lo;
    while i < hi {
        v.push(i.clone());
        i += 1;
    }
    v
}

/// Fixed points in `region`, sorted by position. Errors on degenerate
/// geometry meeting the closure of the region, and on fixed points lying on
/// its boundary.
pub fn fixed_points(map: &PlCircleMap, region: &ArcRegion) -> Result<Vec<FixedPointRecord>> {
    select(candidates(map), region)
}

pub(crate) fn select(cands: Vec<Candidate>, region: &ArcRegion) -> Result<Vec<FixedPointRecord>> {
    let mut out = Vec::new();
    for c in cands {
        match c {
            Candidate::Point(p) => match region.locate(&p.t) {
                Some(true) => out.push(p),
                Some(false) => {}
                None => return Err(Error::FixedPointOnBoundary { t: p.t }),
            },
            Candidate::Bad { k, t0, t1, reason } => {
                if region.meets_closure(&t0, &t1) {
                    return Err(Error::Degenerate { k, t: t0, reason });
                }
            }
        }
    }
    out.sort_by(|a, b| a.t.cmp(&b.t).then(a.k.cmp(&b.k)));
    Ok(out)
}

/// `Σ index(x) · [(a^deck, k)]` over the fixed points in `region`.
pub fn geometric_rt(map: &PlCircleMap, region: &ArcRegion) -> Result<ClassSum> {
    geometric_rt_with(map, &Relation::new(map.induced_hom()), region)
}

pub fn geometric_rt_with(map: &PlCircleMap, relation: &Relation, region: &ArcRegion) -> Result<ClassSum> {
    if relation.hom() != &map.induced_hom() {
        return Err(Error::InvalidMap("relation is for a different homomorphism".into()));
    }
    let mut sum = ClassSum::zero();
    for p in fixed_points(map, region)? {
        sum.add_class(&relation.canonicalize(&p.pair())?, BigInt::from(p.index));
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::{q, LinearCircleMap};
    use crate::group::FreeGroup;

    fn render(s: &ClassSum) -> String {
        s.render(&FreeGroup::CYCLIC)
    }

    #[test]
    fn two_five_fixed_points() {
        let m = LinearCircleMap::new(2, 5).unwrap().to_pl();
        let f = fixed_points(&m, &ArcRegion::Whole).unwrap();
        let got: Vec<_> = f.iter().map(|p| (p.t.clone(), p.k, p.deck, p.index)).collect();
        assert_eq!(
            got,
            vec![(q(0, 1), 1, 0, -1), (q(1, 3), 2, 1, -1), (q(2, 3), 1, 1, -1)]
        );
        assert_eq!(
            render(&geometric_rt(&m, &ArcRegion::Whole).unwrap()),
            "-1*[(1,1)] + -1*[(a,1)] + -1*[(a,2)]"
        );
    }

    #[test]
    fn perturbed_map_touch_is_degenerate() {
        let m = crate::circle::PlCircleMap::perturbed_degree_five();
        let e = fixed_points(&m, &ArcRegion::Whole).unwrap_err();
        assert!(matches!(e, Error::Degenerate { k: 2, .. }), "{e}");
        // away from the touch the three crossings are fine
        let away = ArcRegion::arc(q(3, 5), q(6, 5)).unwrap();
        assert_eq!(fixed_points(&m, &away).unwrap().len(), 2);
    }

    #[test]
    fn nudging_the_perturbed_map() {
        let m = crate::circle::PlCircleMap::perturbed_degree_five();
        let up = m.nudged(&q(1, 100));
        let f = fixed_points(&up, &ArcRegion::Whole).unwrap();
        let locs: Vec<_> = f.iter().map(|p| (p.t.clone(), p.k, p.deck)).collect();
        assert!(locs.contains(&(q(1, 1) - q(2, 300), 2, 2)));
        assert_eq!(f.len(), 3);
        let expected = "-1*[(1,1)] + -1*[(a,1)] + -1*[(a,2)]";
        assert_eq!(render(&geometric_rt(&up, &ArcRegion::Whole).unwrap()), expected);
        // pushing down splits the touch into a cancelling pair
        let down = m.nudged(&q(-1, 100));
        let f = fixed_points(&down, &ArcRegion::Whole).unwrap();
        assert_eq!(f.len(), 5);
        assert_eq!(f.iter().map(|p| p.index).sum::<i32>(), -3);
        assert_eq!(render(&geometric_rt(&down, &ArcRegion::Whole).unwrap()), expected);
    }

    #[test]
    fn identity_needs_a_nudge() {
        let m = LinearCircleMap::new(1, 1).unwrap().to_pl();
        assert!(fixed_points(&m, &ArcRegion::Whole).is_err());
        assert!(geometric_rt(&m.nudged(&q(1, 2)), &ArcRegion::Whole).unwrap().is_zero());
    }

    #[test]
    fn boundary_fixed_point_is_rejected() {
        let m = LinearCircleMap::new(2, 5).unwrap().to_pl();
        let r = ArcRegion::arc(q(1, 3), q(1, 2)).unwrap();
        assert_eq!(fixed_points(&m, &r), Err(Error::FixedPointOnBoundary { t: q(1, 3) }));
    }

    #[test]
    fn degree_below_n_gives_positive_indices() {
        let m = LinearCircleMap::new(3, -2).unwrap().to_pl();
        let f = fixed_points(&m, &ArcRegion::Whole).unwrap();
        assert_eq!(f.len(), 5);
        assert!(f.iter().all(|p| p.index == 1));
    }
}
