use num_bigint::BigInt;

use super::LinearCircleMap;
use crate::error::Result;
use crate::group::GroupElement;
use crate::reidemeister::{ClassSum, MarkedPair, Relation};

/// RT of the linear map `(n, d)` in closed form. Writing `v = in − k + 1`,
/// the classes are the pairs `(a^i, k)` with `0 ≤ v < d − n` (coefficient
/// −1) when `d > n`, and with `d − n < v ≤ 0` (coefficient +1) when `d < n`.
pub fn closed_form_rt(n: usize, d: i64) -> Result<ClassSum> {
    let map = LinearCircleMap::new(n, d)?;
    let relation = Relation::new(map.induced_hom());
    let ni = n as i64;
    let (range, c) = if d > ni {
        ((0..d - ni).collect::<Vec<_>>(), -1)
    } else {
        ((d - ni + 1..=0).collect(), 1)
    };
    let mut sum = ClassSum::zero();
    for v in range {
        let i = num_integer::Integer::div_ceil(&v, &ni);
        let k = (i * ni - v + 1) as usize;
        sum.add_class(
            &relation.canonicalize(&MarkedPair::new(GroupElement::cyclic(i), k))?,
            BigInt::from(c),
        );
    }
    Ok(sum)
}
