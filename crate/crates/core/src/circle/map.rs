use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{frac, int, q, Q};
use crate::error::{Error, Result};
use crate::group::{FreeGroup, GroupElement, Permutation, SemidirectElement};
use crate::induced::InducedHom;

/// The n-valued map `t ↦ {(d/n)t + j/n : 0 ≤ j < n}` with branch lifts
/// `f̃_k(t) = (d/n)t + (k−1)/n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LinearCircleMap {
    pub n: usize,
    pub d: i64,
}

impl LinearCircleMap {
    pub fn new(n: usize, d: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMap("n must be at least 1".into()));
        }
        Ok(LinearCircleMap { n, d })
    }

    /// `φ_k(a) = a^{⌊(k−1+d)/n⌋}`, `σ_a⁻¹(k) = ((k−1+d) mod n) + 1`.
    pub fn induced_hom(&self) -> InducedHom {
        let n = self.n as i64;
        let ts = (1..=n)
            .map(|k| GroupElement::cyclic(Integer::div_floor(&(k - 1 + self.d), &n)))
            .collect();
        let inv: Vec<usize> = (1..=n)
            .map(|k| ((k - 1 + self.d).rem_euclid(n) + 1) as usize)
            .collect();
        let perm = Permutation::from_images(inv).expect("rotation").inverse();
        InducedHom::cyclic(SemidirectElement::new(ts, perm).expect("n translations"))
    }

    /// The map itself as a one-piece-per-branch PL map.
    pub fn to_pl(&self) -> PlCircleMap {
        let n = self.n as i64;
        let branches = (0..n)
            .map(|j| vec![(Q::zero(), q(j, n)), (Q::one(), q(self.d + j, n))])
            .collect();
        PlCircleMap::new(branches).expect("linear maps are valid")
    }

    /// A homotopic PL map that is simplicial for the grid `{m/N}`, `N = scale·n`:
    /// each grid edge `[j/N, (j+1)/N]` of branch 1 climbs `⌊(j+1)d/n⌋ − ⌊jd/n⌋`
    /// grid steps one at a time (or stays constant), and branch `k` is branch 1
    /// raised by `(k−1)/n`. Branch differences are those of the linear map, so
    /// the straight-line homotopy stays n-valued and the lifts stay compatible.
    pub fn simplicial_representative(&self, scale: usize) -> Result<PlCircleMap> {
        if scale == 0 {
            return Err(Error::InvalidMap("scale must be at least 1".into()));
        }
        let (n, d) = (self.n as i64, self.d);
        let big_n = scale as i64 * n;
        let mut base = vec![(Q::zero(), Q::zero())];
        for j in 0..big_n {
            let lo = Integer::div_floor(&(j * d), &n);
            let hi = Integer::div_floor(&((j + 1) * d), &n);
            let steps = hi - lo;
            let t0 = q(j, big_n);
            if steps == 0 {
                base.push((q(j + 1, big_n), q(lo, big_n)));
                continue;
            }
            let dir = steps.signum();
            let count = steps.abs();
            for i in 1..=count {
                let t = &t0 + q(i, big_n * count);
                base.push((t, q(lo + dir * i, big_n)));
            }
        }
        let branches = (0..n)
            .map(|k| {
                let shift = q(k, n);
                base.iter().map(|(t, y)| (t.clone(), y + &shift)).collect()
            })
            .collect();
        PlCircleMap::new(branches)
    }
}

/// A piecewise-linear n-valued circle map given by the lifts `f̃_k` on
/// `[0,1]`, one breakpoint list per branch.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlCircleMap {
    branches: Vec<Vec<(Q, Q)>>,
    theta: SemidirectElement,
}

/// One linear piece `[t0, t1] → [y0, y1]` of a branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub t0: Q,
    pub y0: Q,
    pub t1: Q,
    pub y1: Q,
}

impl Piece {
    pub fn slope(&self) -> Q {
        (&self.y1 - &self.y0) / (&self.t1 - &self.t0)
    }

    pub fn at(&self, t: &Q) -> Q {
        &self.y0 + self.slope() * (t - &self.t0)
    }
}

impl PlCircleMap {
    /// Checks breakpoints, endpoint compatibility and that the values stay
    /// pairwise distinct mod 1. Fixed-point transversality is checked later,
    /// by the fixed-point solver.
    pub fn new(branches: Vec<Vec<(Q, Q)>>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::InvalidMap("no branches".into()));
        }
        for (k, b) in branches.iter().enumerate() {
            let k = k + 1;
            if b.len() < 2 {
                return Err(Error::InvalidMap(format!("branch {k} needs at least two breakpoints")));
            }
            if !b[0].0.is_zero() || !b[b.len() - 1].0.is_one() {
                return Err(Error::InvalidMap(format!("branch {k} must start at t = 0 and end at t = 1")));
            }
            if let Some(w) = b.windows(2).find(|w| w[0].0 >= w[1].0) {
                return Err(Error::InvalidMap(format!(
                    "branch {k}: breakpoints not increasing at t = {}",
                    w[1].0
                )));
            }
        }
        check_distinct(&branches)?;
        let theta = endpoint_translation(&branches)?;
        Ok(PlCircleMap { branches, theta })
    }

    pub fn n(&self) -> usize {
        self.branches.len()
    }

    pub fn branches(&self) -> &[Vec<(Q, Q)>] {
        &self.branches
    }

    /// `Θ = f̃_#(a)`, read off from `f̃_k(1) = φ_k(a) + f̃_{σ_a⁻¹(k)}(0)`.
    pub fn theta(&self) -> &SemidirectElement {
        &self.theta
    }

    pub fn induced_hom(&self) -> InducedHom {
        InducedHom::cyclic(self.theta.clone())
    }

    pub fn pieces(&self, k: usize) -> impl Iterator<Item = Piece> + '_ {
        self.branches[k - 1].windows(2).map(|w| Piece {
            t0: w[0].0.clone(),
            y0: w[0].1.clone(),
            t1: w[1].0.clone(),
            y1: w[1].1.clone(),
        })
    }

    pub fn last_piece(&self, k: usize) -> Piece {
        self.pieces(k).last().expect("at least one piece")
    }

    /// `f̃_k(t)` for `t ∈ [0,1]`.
    pub fn eval(&self, k: usize, t: &Q) -> Q {
        let b = &self.branches[k - 1];
        let i = b.partition_point(|(s, _)| s <= t).clamp(1, b.len() - 1);
        let p = Piece {
            t0: b[i - 1].0.clone(),
            y0: b[i - 1].1.clone(),
            t1: b[i].0.clone(),
            y1: b[i].1.clone(),
        };
        p.at(t)
    }

    /// `f̃_k(x)` for any real `x`, via `f̃_k(m+u) = φ_k(a^m) + f̃_{σ_{a^m}⁻¹(k)}(u)`.
    pub fn eval_real(&self, k: usize, x: &Q) -> Q {
        let m = x.floor();
        let u = x - &m;
        let m = m.to_integer().to_i64().expect("moderate argument");
        if m == 0 {
            return self.eval(k, &u);
        }
        let img = self.theta.pow(m);
        let shift = img.translation(k).cyclic_exponent().expect("rank one");
        let j = img.perm().inverse().apply(k);
        int(shift) + self.eval(j, &u)
    }

    /// Adds `eps` to every value: the homotopy `f + ε`.
    pub fn nudged(&self, eps: &Q) -> PlCircleMap {
        let branches = self
            .branches
            .iter()
            .map(|b| b.iter().map(|(t, y)| (t.clone(), y + eps)).collect())
            .collect();
        PlCircleMap {
            branches,
            theta: self.theta.clone(),
        }
    }

    /// The lift `Φf̃` with `(Φf̃)_k = δ_k f̃_{ε⁻¹(k)}` for `Φ = (δ_1,…,δ_n; ε)`.
    pub fn relift(&self, phi: &SemidirectElement) -> Result<PlCircleMap> {
        if phi.n() != self.n() {
            return Err(Error::BranchCount {
                expected: self.n(),
                found: phi.n(),
            });
        }
        let eps_inv = phi.perm().inverse();
        let mut branches = Vec::with_capacity(self.n());
        for k in 1..=self.n() {
            let delta = phi.translation(k).cyclic_exponent().ok_or(Error::RankMismatch {
                expected: 1,
                found: phi.translation(k).min_rank(),
            })?;
            let src = &self.branches[eps_inv.apply(k) - 1];
            branches.push(src.iter().map(|(t, y)| (t.clone(), y + int(delta))).collect());
        }
        PlCircleMap::new(branches)
    }

    /// The n-valued map whose branches are the given single-valued maps.
    pub fn from_single_valued(maps: &[PlCircleMap]) -> Result<PlCircleMap> {
        let mut branches = Vec::with_capacity(maps.len());
        for m in maps {
            if m.n() != 1 {
                return Err(Error::InvalidMap(format!("expected a single-valued map, found n = {}", m.n())));
            }
            branches.push(m.branches[0].clone());
        }
        PlCircleMap::new(branches)
    }

    /// Branch `k` alone, as a single-valued map.
    pub fn branch_map(&self, k: usize) -> Result<PlCircleMap> {
        PlCircleMap::new(vec![self.branches[k - 1].clone()])
    }

    /// The degree-5 two-valued map with a flat step on each branch: values
    /// `0, 1, 1, 3/2, 2, 5/2` at `t = 0, 2/5, 1/2, 3/5, 4/5, 1` and the
    /// second branch half a turn above. It has a fixed point at `0`, `1/3`
    /// and `2/3`, and touches the diagonal at `1/2` along its flat step.
    pub fn perturbed_degree_five() -> PlCircleMap {
        let pts = |v: &[(i64, i64, i64, i64)]| v.iter().map(|&(a, b, c, d)| (q(a, b), q(c, d))).collect();
        PlCircleMap::new(vec![
            pts(&[(0, 1, 0, 1), (2, 5, 1, 1), (1, 2, 1, 1), (3, 5, 3, 2), (4, 5, 2, 1), (1, 1, 5, 2)]),
            pts(&[(0, 1, 1, 2), (1, 5, 1, 1), (2, 5, 3, 2), (1, 2, 3, 2), (3, 5, 2, 1), (1, 1, 3, 1)]),
        ])
        .expect("valid map")
    }

    pub fn to_json(&self) -> String {
        let raw = PlMapJson {
            n: self.n(),
            branches: self
                .branches
                .iter()
                .map(|b| b.iter().map(|(t, y)| [t.to_string(), y.to_string()]).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<PlCircleMap> {
        let raw: PlMapJson = serde_json::from_str(s)?;
        if raw.branches.len() != raw.n {
            return Err(Error::BranchCount {
                expected: raw.n,
                found: raw.branches.len(),
            });
        }
        let parse = |x: &str| -> Result<Q> {
            x.trim()
                .parse::<BigRational>()
                .map_err(|_| Error::parse("rational", x, "expected p/q"))
        };
        let branches = raw
            .branches
            .iter()
            .map(|b| {
                b.iter()
                    .map(|[t, y]| Ok((parse(t)?, parse(y)?)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        PlCircleMap::new(branches)
    }

    pub fn render_theta(&self) -> String {
        self.theta.render(&FreeGroup::CYCLIC)
    }
}

#[derive(Serialize, Deserialize)]
struct PlMapJson {
    n: usize,
    branches: Vec<Vec<[String; 2]>>,
}

fn check_distinct(branches: &[Vec<(Q, Q)>]) -> Result<()> {
    let eval = |k: usize, t: &Q| {
        let b = &branches[k - 1];
        let i = b.partition_point(|(s, _)| s <= t).clamp(1, b.len() - 1);
        let (t0, y0) = &b[i - 1];
        let (t1, y1) = &b[i];
        y0 + (y1 - y0) / (t1 - t0) * (t - t0)
    };
    let n = branches.len();
    let mut ts: Vec<Q> = branches.iter().flatten().map(|(t, _)| t.clone()).collect();
    ts.sort();
    ts.dedup();
    for j in 1..=n {
        for k in j + 1..=n {
            for w in ts.windows(2) {
                let g0 = eval(k, &w[0]) - eval(j, &w[0]);
                let g1 = eval(k, &w[1]) - eval(j, &w[1]);
                let (lo, hi) = if g0 <= g1 { (&g0, &g1) } else { (&g1, &g0) };
                let i = lo.ceil();
                if &i <= hi {
                    let t = if g0 == g1 {
                        w[0].clone()
                    } else {
                        &w[0] + (&i - &g0) / (&g1 - &g0) * (&w[1] - &w[0])
                    };
                    return Err(Error::ValuesCollide { j, k, t });
                }
            }
        }
    }
    Ok(())
}

fn endpoint_translation(branches: &[Vec<(Q, Q)>]) -> Result<SemidirectElement> {
    let n = branches.len();
    let starts: Vec<&Q> = branches.iter().map(|b| &b[0].1).collect();
    let mut inv = Vec::with_capacity(n);
    let mut ts = Vec::with_capacity(n);
    for (k, b) in branches.iter().enumerate() {
        let end = &b[b.len() - 1].1;
        let matches: Vec<usize> = (0..n).filter(|&j| frac(&(end - starts[j])).is_zero()).collect();
        let [j] = matches.as_slice() else {
            return Err(Error::EndpointMismatch { k: k + 1 });
        };
        inv.push(j + 1);
        let e: BigInt = (end - starts[*j]).to_integer();
        ts.push(GroupElement::cyclic(
            e.to_i64().ok_or_else(|| Error::InvalidMap("degree out of range".into()))?,
        ));
    }
    let perm = Permutation::from_images(inv)
        .map_err(|_| Error::InvalidMap("endpoint values do not permute the start values".into()))?
        .inverse();
    SemidirectElement::new(ts, perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::induced::tests::two_five;
    use num_traits::Signed;

    #[test]
    fn linear_theta() {
        assert_eq!(LinearCircleMap::new(2, 5).unwrap().induced_hom(), two_five());
        let id = LinearCircleMap::new(1, 1).unwrap().induced_hom();
        assert_eq!(id.generator_image(0).unwrap().render(&FreeGroup::CYCLIC), "(a;id)");
        for n in 1..=3 {
            for d in -6..=6 {
                let l = LinearCircleMap::new(n, d).unwrap();
                assert_eq!(l.to_pl().induced_hom(), l.induced_hom(), "n={n} d={d}");
            }
        }
        assert!(LinearCircleMap::new(0, 1).is_err());
    }

    #[test]
    fn two_five_endpoints_by_evaluation() {
        // f̃_1(t+1) = f̃_2(t) + 2 and f̃_2(t+1) = f̃_1(t) + 3
        let m = LinearCircleMap::new(2, 5).unwrap().to_pl();
        let t = q(1, 7);
        let t1 = &t + Q::one();
        assert_eq!(m.eval_real(1, &t1), m.eval(2, &t) + int(2));
        assert_eq!(m.eval_real(2, &t1), m.eval(1, &t) + int(3));
        assert_eq!(m.eval_real(1, &(&t - Q::one())), m.eval(2, &t) - int(3));
    }

    #[test]
    fn perturbed_map_has_the_linear_theta() {
        let m = PlCircleMap::perturbed_degree_five();
        assert_eq!(m.render_theta(), "(a^2,a^3;(1 2))");
        assert_eq!(m.eval(1, &q(1, 5)), q(1, 2));
        assert_eq!(m.eval(2, &q(9, 10)), q(5, 2) + q(1, 4));
    }

    #[test]
    fn rejects_bad_maps() {
        let e = PlCircleMap::new(vec![vec![(q(0, 1), q(0, 1)), (q(1, 1), q(1, 2))]]);
        assert_eq!(e, Err(Error::EndpointMismatch { k: 1 }));
        let collide = PlCircleMap::new(vec![
            vec![(q(0, 1), q(0, 1)), (q(1, 1), q(2, 1))],
            vec![(q(0, 1), q(1, 2)), (q(1, 1), q(3, 2))],
        ]);
        assert!(matches!(collide, Err(Error::ValuesCollide { j: 1, k: 2, .. })));
        let unsorted = PlCircleMap::new(vec![vec![(q(0, 1), q(0, 1)), (q(1, 2), q(0, 1)), (q(1, 3), q(0, 1)), (q(1, 1), q(0, 1))]]);
        assert!(unsorted.is_err());
    }

    #[test]
    fn staircase_matches_the_linear_lift_on_the_grid() {
        for n in 1..=3usize {
            for d in -6..=6i64 {
                for scale in 1..=2usize {
                    let l = LinearCircleMap::new(n, d).unwrap();
                    let s = l.simplicial_representative(scale).unwrap();
                    assert_eq!(s.induced_hom(), l.induced_hom());
                    let big_n = (scale * n) as i64;
                    for j in 0..=big_n {
                        let t = q(j, big_n);
                        // off the linear value by less than one grid step
                        let diff = s.eval(1, &t) - q(d, n as i64) * &t;
                        assert!(diff.abs() < q(1, big_n) && !diff.is_positive(), "n={n} d={d} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn relift_and_json() {
        let m = PlCircleMap::perturbed_degree_five();
        let phi = SemidirectElement::parse(&FreeGroup::CYCLIC, "(a,a^-1;(1 2))").unwrap();
        let r = m.relift(&phi).unwrap();
        assert_eq!(r.eval(1, &q(0, 1)), q(3, 2));
        assert_eq!(r.induced_hom(), m.induced_hom().conjugate(&phi).unwrap());
        assert_eq!(PlCircleMap::from_json(&m.to_json()).unwrap(), m);
        let v: serde_json::Value = serde_json::from_str(&m.to_json()).unwrap();
        assert_eq!(v["branches"][0][1], serde_json::json!(["2/5", "1"]));
    }
}
