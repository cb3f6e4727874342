//! Equivariant chain data for PL circle maps that are simplicial after
//! subdividing the domain.
//!
//! The codomain complex `K` has vertex set `V ⊂ [0,1)`; the domain
//! subdivision `K′` has vertex set `D ⊇ V`. Every branch maps each edge of
//! `K′` linearly onto a lifted edge of `K` or onto a lifted vertex. Basis
//! lifts are the vertices `w ∈ [0,1)` and the edges `[w_m, w_{m+1}]`, with
//! the last edge ending at `w_0 + 1`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use super::{frac, int, PlCircleMap, Q};
use crate::chain::ChainData;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupRingElement, ZpiMatrix};

const MAX_VERTICES: usize = 256;
const MAX_DENOMINATOR: u64 = 1_000_000;

pub fn chain_data_of(map: &PlCircleMap) -> Result<ChainData> {
    chain_data_with_vertices(map, &[])
}

/// As [`chain_data_of`] with extra vertices forced into `K`.
pub fn chain_data_with_vertices(map: &PlCircleMap, extra: &[Q]) -> Result<ChainData> {
    for (t, y) in map.branches().iter().flatten() {
        for x in [t, y] {
            if x.denom().to_u64().is_none_or(|d| d > MAX_DENOMINATOR) {
                return Err(Error::NotSimplicial(format!("breakpoint data {x} has too large a denominator")));
            }
        }
    }
    let (v, d) = vertex_sets(map, extra)?;
    let v: Vec<Q> = v.into_iter().collect();
    let d: Vec<Q> = d.into_iter().collect();
    let r = v.len();
    let a = GroupRingElement::from_element(GroupElement::cyclic(1));

    let index_of = |w: &Q| v.binary_search(w).expect("vertex of K");
    // K-edge m as a real interval
    let edge_end = |m: usize| if m + 1 < r { v[m + 1].clone() } else { &v[0] + int(1) };

    let mut vertex_mats = Vec::with_capacity(map.n());
    let mut edge_mats = Vec::with_capacity(map.n());
    for k in 1..=map.n() {
        let mut m0 = ZpiMatrix::zeros(r, r);
        for (j, w) in v.iter().enumerate() {
            let y = map.eval_real(k, w);
            let (e, i) = locate(&y, &index_of);
            m0.get_mut(i, j).add_term(GroupElement::cyclic(e), BigInt::one());
        }
        let mut m1 = ZpiMatrix::zeros(r, r);
        for j in 0..r {
            let (lo, hi) = (v[j].clone(), edge_end(j));
            for (x0, x1) in subdivide(&d, &lo, &hi) {
                let y0 = map.eval_real(k, &x0);
                let y1 = map.eval_real(k, &x1);
                if y0 == y1 {
                    continue;
                }
                let (sign, low, high) = if y1 > y0 { (1, y0, y1) } else { (-1, y1, y0) };
                let (e, i) = locate(&low, &index_of);
                if high - &low != edge_end(i) - &v[i] {
                    return Err(Error::NotSimplicial(format!(
                        "branch {k} maps [{x0}, {x1}] across more than one edge"
                    )));
                }
                m1.get_mut(i, j).add_term(GroupElement::cyclic(e), BigInt::from(sign));
            }
        }
        vertex_mats.push(m0);
        edge_mats.push(m1);
    }

    let mut bd = ZpiMatrix::zeros(r, r);
    for m in 0..r {
        let end = (m + 1) % r;
        let head = if m + 1 < r { GroupRingElement::one() } else { a.clone() };
        *bd.get_mut(end, m) = bd.get(end, m).add(&head);
        *bd.get_mut(m, m) = bd.get(m, m).sub(&GroupRingElement::one());
    }

    let mut c = ChainData::new(map.induced_hom(), vec![vertex_mats, edge_mats], vec![None, Some(bd)])?;
    c.basis = vec![
        v.iter().map(|w| w.to_string()).collect(),
        (0..r).map(|m| format!("[{},{}]", v[m], edge_end(m))).collect(),
    ];
    Ok(c)
}

/// `y = a^e · w_i`.
fn locate(y: &Q, index_of: &impl Fn(&Q) -> usize) -> (i64, usize) {
    let e = y.floor().to_integer().to_i64().expect("moderate value");
    (e, index_of(&frac(y)))
}

/// The edges of `K′` inside the real interval `[lo, hi]`, which may pass 1.
fn subdivide(d: &[Q], lo: &Q, hi: &Q) -> Vec<(Q, Q)> {
    let mut pts = vec![lo.clone()];
    for shift in 0..=1 {
        for x in d {
            let x = x + int(shift);
            if &x > lo && &x < hi {
                pts.push(x);
            }
        }
    }
    pts.push(hi.clone());
    pts.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect()
}

fn vertex_sets(map: &PlCircleMap, extra: &[Q]) -> Result<(BTreeSet<Q>, BTreeSet<Q>)> {
    let mut v: BTreeSet<Q> = map.branches().iter().flatten().map(|(_, y)| frac(y)).collect();
    v.extend(extra.iter().map(frac));
    let breaks: BTreeSet<Q> = map
        .branches()
        .iter()
        .flatten()
        .map(|(t, _)| t.clone())
        .filter(|t| !t.is_one())
        .collect();
    loop {
        let mut d = v.clone();
        d.extend(breaks.iter().cloned());
        for k in 1..=map.n() {
            for p in map.pieces(k) {
                if p.y0 == p.y1 {
                    continue;
                }
                let (lo, hi) = if p.y0 < p.y1 { (&p.y0, &p.y1) } else { (&p.y1, &p.y0) };
                let base = lo.floor().to_integer().to_i64().expect("moderate value");
                let top = hi.ceil().to_integer().to_i64().expect("moderate value");
                for e in base..=top {
                    for w in &v {
                        let y = w + int(e);
                        if &y > lo && &y < hi {
                            d.insert(&p.t0 + (&y - &p.y0) / p.slope().clone());
                        }
                    }
                }
            }
            if d.len() > MAX_VERTICES {
                return Err(Error::NotSimplicial(format!(
                    "subdivision needs more than {MAX_VERTICES} vertices"
                )));
            }
        }
        let before = v.len();
        for x in &d {
            for k in 1..=map.n() {
                v.insert(frac(&map.eval(k, x)));
            }
        }
        if v.len() > MAX_VERTICES {
            return Err(Error::NotSimplicial(format!("more than {MAX_VERTICES} codomain vertices")));
        }
        if v.len() == before {
            return Ok((v, d));
        }
    }
}
