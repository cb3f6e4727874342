//! Breadth-first orbit exploration, used when no exact procedure applies.

use std::collections::HashMap;

use super::MarkedPair;
use crate::error::Result;
use crate::group::{GroupElement, Permutation, SemidirectElement};
use crate::induced::InducedHom;

pub(crate) struct Exploration {
    /// Every orbit member seen, with a word `γ` such that the member is `A_γ(q)`.
    pub(crate) visited: HashMap<MarkedPair, GroupElement>,
    /// True when the whole orbit was seen.
    pub(crate) complete: bool,
}

struct Letter {
    word: GroupElement,
    image: SemidirectElement,
    sigma_inv: Permutation,
}

fn letters(hom: &InducedHom) -> Result<Vec<Letter>> {
    let mut out = Vec::with_capacity(2 * hom.rank());
    for gen in 0..hom.rank() {
        for exp in [1, -1] {
            let word = GroupElement::gen_pow(gen, exp);
            let image = hom.evaluate(&word)?;
            let sigma_inv = image.perm().inverse();
            out.push(Letter { word, image, sigma_inv });
        }
    }
    Ok(out)
}

/// `A_g(β,j) = (φ_j(g)⁻¹ β g, σ_g⁻¹(j))`.
fn step(p: &MarkedPair, l: &Letter) -> MarkedPair {
    MarkedPair::new(
        l.image.translation(p.k).inv().mul(&p.alpha).mul(&l.word),
        l.sigma_inv.apply(p.k),
    )
}

/// Explores the orbit of `q` through words of length at most `bound`,
/// stopping early once `target` is reached.
pub(crate) fn explore(
    hom: &InducedHom,
    q: &MarkedPair,
    bound: usize,
    target: Option<&MarkedPair>,
) -> Result<Exploration> {
    let letters = letters(hom)?;
    let mut visited = HashMap::new();
    visited.insert(q.clone(), GroupElement::identity());
    let mut frontier = vec![q.clone()];
    if target == Some(q) {
        return Ok(Exploration { visited, complete: false });
    }
    for depth in 0..=bound {
        let mut next = Vec::new();
        for p in &frontier {
            let gamma = visited[p].clone();
            for l in &letters {
                let r = step(p, l);
                if visited.contains_key(&r) {
                    continue;
                }
                if depth == bound {
                    // something lies beyond the bound
                    return Ok(Exploration { visited, complete: false });
                }
                visited.insert(r.clone(), gamma.mul(&l.word));
                if target == Some(&r) {
                    return Ok(Exploration { visited, complete: false });
                }
                next.push(r);
            }
        }
        if next.is_empty() {
            return Ok(Exploration { visited, complete: true });
        }
        frontier = next;
    }
    unreachable!("the last layer either returns early or has no successors")
}
