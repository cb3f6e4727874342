//! Exact orbit arithmetic when `π = ⟨a⟩` is infinite cyclic.
//!
//! Writing `c_j` for the exponent of `φ_j(a)` and `τ = σ_a⁻¹`, the move
//! `(β,j) ↦ (φ_j(a)⁻¹βa, σ_a⁻¹(j))` is `T(e,j) = (e + 1 − c_j, τ(j))` and
//! every orbit is a `T`-orbit. Going once around a `τ`-cycle shifts the
//! exponent by `s = Σ (1 − c_j)`; the orbit is finite exactly when `s = 0`.
//!
//! Representatives are chosen through the height `h(e,j) = (j−1) − e·n`,
//! which changes by `−s·n` per cycle. For a linear map of degree `d` each
//! step changes it by `d − n`, and a fixed point of `f̃_j − a^e` in `[0,1)`
//! sits at `t = −h/(d−n)`; the member with the largest `h ≤ 0` (or the
//! smallest `h ≥ 0` when heights decrease) is therefore the one carrying the
//! fixed point, which makes the chosen names agree with the geometry.

use num_integer::Integer;

use super::MarkedPair;
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::induced::InducedHom;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct CyclicOrbits {
    n: usize,
    /// `1 − c_j`
    step: Vec<i64>,
    /// `τ(j)`
    tau: Vec<usize>,
}

impl CyclicOrbits {
    pub(crate) fn new(hom: &InducedHom) -> Option<Self> {
        if hom.rank() != 1 {
            return None;
        }
        let theta = hom.generator_image(0).ok()?;
        let step = theta
            .translations()
            .iter()
            .map(|t| t.cyclic_exponent().map(|c| 1 - c))
            .collect::<Option<Vec<_>>>()?;
        let inv = theta.perm().inverse();
        Some(CyclicOrbits {
            n: hom.n(),
            step,
            tau: (1..=hom.n()).map(|j| inv.apply(j)).collect(),
        })
    }

    fn exponent(p: &MarkedPair) -> Result<i64> {
        p.alpha.cyclic_exponent().ok_or(Error::RankMismatch {
            expected: 1,
            found: p.alpha.min_rank(),
        })
    }

    /// The orbit positions `T^i(q)` for one trip around the `τ`-cycle of `q`,
    /// and the exponent shift `s` of a full trip.
    fn trip(&self, e: i64, j: usize) -> (Vec<(i64, usize)>, i64) {
        let mut out = vec![(e, j)];
        let (mut e, mut j) = (e, j);
        loop {
            e += self.step[j - 1];
            j = self.tau[j - 1];
            if j == out[0].1 {
                let s = e - out[0].0;
                return (out, s);
            }
            out.push((e, j));
        }
    }

    fn height(&self, e: i64, j: usize) -> i128 {
        (j as i128 - 1) - e as i128 * self.n as i128
    }

    /// The canonical member `c` of the orbit of `q` and `t` with `c = T^t(q)`.
    pub(crate) fn canonical(&self, q: &MarkedPair) -> Result<(MarkedPair, i64)> {
        let e = Self::exponent(q)?;
        let (trip, s) = self.trip(e, q.k);
        let len = trip.len() as i64;
        if s == 0 {
            let (i, &(e, j)) = trip
                .iter()
                .enumerate()
                .min_by_key(|(_, &(e, j))| MarkedPair::new(GroupElement::cyclic(e), j))
                .expect("nonempty trip");
            return Ok((MarkedPair::new(GroupElement::cyclic(e), j), i as i64));
        }
        let delta = -(s as i128) * self.n as i128;
        let mut best: Option<(i128, i64, i64, usize)> = None;
        for (i, &(ei, ji)) in trip.iter().enumerate() {
            let h = self.height(ei, ji);
            let m = if delta > 0 {
                Integer::div_floor(&-h, &delta)
            } else {
                Integer::div_floor(&h, &-delta)
            };
            let m = i64::try_from(m).expect("orbit offset fits in i64");
            let hm = h + m as i128 * delta;
            let better = match best {
                None => true,
                Some((bh, ..)) => {
                    if delta > 0 {
                        hm > bh
                    } else {
                        hm < bh
                    }
                }
            };
            if better {
                best = Some((hm, i as i64 + m * len, ei + m * s, ji));
            }
        }
        let (_, t, e, j) = best.expect("nonempty trip");
        Ok((MarkedPair::new(GroupElement::cyclic(e), j), t))
    }

    /// `Some(t)` with `p = T^t(q)`, or `None` when the orbits differ.
    pub(crate) fn relate(&self, p: &MarkedPair, q: &MarkedPair) -> Result<Option<i64>> {
        let (cp, tp) = self.canonical(p)?;
        let (cq, tq) = self.canonical(q)?;
        Ok((cp == cq).then_some(tq - tp))
    }

    /// Exponent shift `s` of one trip around the `τ`-cycle of `j`.
    #[cfg(test)]
    pub(crate) fn cycle_shift(&self, j: usize) -> i64 {
        self.trip(0, j).1
    }
}
