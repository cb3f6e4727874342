//! Piecewise-linear n-valued maps of the circle `ℝ/ℤ`, with `π = ⟨a⟩`
//! acting on `ℝ` by `a·x = x + 1`.

mod checks;
mod closed;
mod cover;
mod fixed;
mod map;
mod simplicial;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::chain::rt_via_traces;
use crate::error::{Error, Result};
use crate::reidemeister::ClassSum;

pub use checks::{
    change_of_lift_check, local_axioms_check, split_rt_check, LiftReport, LocalReport, SplitReport,
};
pub use closed::closed_form_rt;
pub use cover::{average_rt, lift_to_cover, AveragingReport, CoverLift};
pub use fixed::{fixed_points, geometric_rt, geometric_rt_with, FixedPointRecord};
pub use map::{LinearCircleMap, Piece, PlCircleMap};
pub use simplicial::{chain_data_of, chain_data_with_vertices};

pub type Q = BigRational;

/// How to compute a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Equivariant chain data of a simplicial representative.
    Trace,
    /// Fixed points, indices and marked pairs.
    Geometric,
    /// The closed form; linear maps only.
    Closed,
}

impl LinearCircleMap {
    /// RT of the linear map by the given method. The geometric route pushes
    /// `d = n` off the diagonal by `1/(2n)`; the trace route uses the
    /// staircase representative at scale 1.
    pub fn rt(&self, method: Method) -> Result<ClassSum> {
        match method {
            Method::Closed => closed_form_rt(self.n, self.d),
            Method::Geometric => {
                let pl = self.to_pl();
                let pl = if self.d == self.n as i64 {
                    pl.nudged(&q(1, 2 * self.n as i64))
                } else {
                    pl
                };
                geometric_rt(&pl, &ArcRegion::Whole)
            }
            Method::Trace => Ok(rt_via_traces(&chain_data_of(&self.simplicial_representative(1)?)?)?.rt),
        }
    }
}

impl PlCircleMap {
    pub fn rt(&self, method: Method) -> Result<ClassSum> {
        match method {
            Method::Trace => Ok(rt_via_traces(&chain_data_of(self)?)?.rt),
            Method::Geometric => geometric_rt(self, &ArcRegion::Whole),
            Method::Closed => Err(Error::InvalidMap("the closed form covers linear maps only".into())),
        }
    }
}

pub fn q(p: i64, d: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(d))
}

pub(crate) fn int(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

pub(crate) fn frac(x: &Q) -> Q {
    x - x.floor()
}

/// An open subset of the circle: the whole circle or a union of disjoint
/// open arcs `(s, s+len)`, read mod 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArcRegion {
    Whole,
    Arcs(Vec<(Q, Q)>),
}

impl ArcRegion {
    /// Arcs given by start and end, each running counterclockwise from start
    /// to end. `end` may exceed 1 for arcs that wrap.
    pub fn arcs(arcs: Vec<(Q, Q)>) -> Result<Self> {
        let mut out = Vec::with_capacity(arcs.len());
        for (s, e) in arcs {
            let len = &e - &s;
            if len <= Q::zero() || len >= Q::one() {
                return Err(Error::InvalidRegion(format!("arc ({s}, {e}) must have length in (0, 1)")));
            }
            let s = frac(&s);
            let e = &s + len;
            out.push((s, e));
        }
        let r = ArcRegion::Arcs(out);
        if let ArcRegion::Arcs(v) = &r {
            for (i, a) in v.iter().enumerate() {
                for b in &v[i + 1..] {
                    if overlaps(a, b) {
                        return Err(Error::InvalidRegion(format!(
                            "arcs ({}, {}) and ({}, {}) overlap",
                            a.0, a.1, b.0, b.1
                        )));
                    }
                }
            }
        }
        Ok(r)
    }

    pub fn arc(start: Q, end: Q) -> Result<Self> {
        ArcRegion::arcs(vec![(start, end)])
    }

    pub fn union(&self, other: &ArcRegion) -> Result<ArcRegion> {
        match (self, other) {
            (ArcRegion::Arcs(a), ArcRegion::Arcs(b)) => ArcRegion::arcs(a.iter().chain(b).cloned().collect()),
            _ => Err(Error::InvalidRegion("the whole circle meets every region".into())),
        }
    }

    /// `Some(true)` inside, `Some(false)` outside the closure, `None` on the boundary.
    pub fn locate(&self, t: &Q) -> Option<bool> {
        match self {
            ArcRegion::Whole => Some(true),
            ArcRegion::Arcs(v) => {
                for (s, e) in v {
                    let u = frac(&(t - s));
                    let len = e - s;
                    if u.is_zero() || u == len {
                        return None;
                    }
                    if u < len {
                        return Some(true);
                    }
                }
                Some(false)
            }
        }
    }

    /// Whether the closed interval `[t0, t1] ⊂ [0,1]` meets the closure.
    pub fn meets_closure(&self, t0: &Q, t1: &Q) -> bool {
        match self {
            ArcRegion::Whole => true,
            ArcRegion::Arcs(v) => v.iter().any(|(s, e)| {
                [-1i64, 0, 1]
                    .iter()
                    .any(|&sh| &(s + int(sh)) <= t1 && t0 <= &(e + int(sh)))
            }),
        }
    }

    /// The preimage under `ℝ/mℤ → ℝ/ℤ`, rescaled to the unit circle.
    pub fn lift_to_cover(&self, m: u64) -> ArcRegion {
        match self {
            ArcRegion::Whole => ArcRegion::Whole,
            ArcRegion::Arcs(v) => {
                let m = m as i64;
                let sc = q(1, m);
                ArcRegion::Arcs(
                    (0..m)
                        .flat_map(|j| {
                            let sc = sc.clone();
                            v.iter()
                                .map(move |(s, e)| ((s + int(j)) * &sc, (e + int(j)) * &sc))
                        })
                        .collect(),
                )
            }
        }
    }
}

fn overlaps(a: &(Q, Q), b: &(Q, Q)) -> bool {
    [-1i64, 0, 1].iter().any(|&sh| {
        let (s, e) = (&b.0 + int(sh), &b.1 + int(sh));
        a.0 < e && s < a.1
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn methods_agree_on_two_five() {
        let l = LinearCircleMap::new(2, 5).unwrap();
        let c = l.rt(Method::Closed).unwrap();
        assert_eq!(l.rt(Method::Trace).unwrap(), c);
        assert_eq!(l.rt(Method::Geometric).unwrap(), c);
        assert!(LinearCircleMap::new(3, 3).unwrap().rt(Method::Geometric).unwrap().is_zero());
        assert!(l.to_pl().rt(Method::Closed).is_err());
    }

    #[test]
    fn arcs_locate_and_wrap() {
        let r = ArcRegion::arc(q(9, 10), q(11, 10)).unwrap();
        assert_eq!(r.locate(&q(0, 1)), Some(true));
        assert_eq!(r.locate(&q(19, 20)), Some(true));
        assert_eq!(r.locate(&q(1, 10)), None);
        assert_eq!(r.locate(&q(1, 2)), Some(false));
        assert!(r.meets_closure(&q(0, 1), &q(1, 20)));
        assert!(!r.meets_closure(&q(1, 5), &q(4, 5)));
    }

    #[test]
    fn overlapping_arcs_are_rejected() {
        assert!(ArcRegion::arcs(vec![(q(0, 1), q(1, 2)), (q(1, 4), q(3, 4))]).is_err());
        assert!(ArcRegion::arcs(vec![(q(0, 1), q(1, 2)), (q(1, 2), q(1, 1))]).is_ok());
        assert!(ArcRegion::arcs(vec![(q(9, 10), q(6, 5)), (q(1, 10), q(1, 2))]).is_err());
        assert!(ArcRegion::arc(q(0, 1), q(1, 1)).is_err());
    }

    #[test]
    fn cover_preimage() {
        let r = ArcRegion::arc(q(1, 13), q(5, 13)).unwrap().lift_to_cover(2);
        assert_eq!(r.locate(&q(3, 26)), Some(true));
        assert_eq!(r.locate(&q(16, 26)), Some(true));
        assert_eq!(r.locate(&q(12, 26)), Some(false));
    }
}
