use std::ops::Mul;

use super::{FreeGroup, GroupElement, Permutation};
use crate::error::{Error, Result};

/// An element `(α_1,…,α_n; σ)` of `π^n ⋊ Σ_n`, the deck group of the
/// orbit configuration space.
///
/// Multiplication and inversion follow
///
/// ```text
/// (α;σ)(β;ρ) = (α_1 β_{σ⁻¹(1)}, …, α_n β_{σ⁻¹(n)}; σ∘ρ)
/// (α;σ)⁻¹    = (α_{σ(1)}⁻¹, …, α_{σ(n)}⁻¹; σ⁻¹)
/// ```
///
/// and the action on tuples is `(α;σ)·(x_1,…,x_n) = (α_1 x_{σ⁻¹(1)}, …)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SemidirectElement {
    translations: Vec<GroupElement>,
    perm: Permutation,
}

impl SemidirectElement {
    pub fn new(translations: Vec<GroupElement>, perm: Permutation) -> Result<Self> {
        if translations.len() != perm.n() {
            return Err(Error::BranchCount {
                expected: perm.n(),
                found: translations.len(),
            });
        }
        Ok(SemidirectElement { translations, perm })
    }

    pub fn identity(n: usize) -> Self {
        SemidirectElement {
            translations: vec![GroupElement::identity(); n],
            perm: Permutation::identity(n),
        }
    }

    /// `β^n = (β,…,β; id)`.
    pub fn diagonal(n: usize, beta: &GroupElement) -> Self {
        SemidirectElement {
            translations: vec![beta.clone(); n],
            perm: Permutation::identity(n),
        }
    }

    pub fn n(&self) -> usize {
        self.perm.n()
    }

    pub fn translations(&self) -> &[GroupElement] {
        &self.translations
    }

    /// `α_k`, one-indexed.
    pub fn translation(&self, k: usize) -> &GroupElement {
        &self.translations[k - 1]
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.is_identity() && self.translations.iter().all(GroupElement::is_identity)
    }

    pub fn try_mul(&self, rhs: &SemidirectElement) -> Result<SemidirectElement> {
        if self.n() != rhs.n() {
            return Err(Error::BranchCount {
                expected: self.n(),
                found: rhs.n(),
            });
        }
        let sigma_inv = self.perm.inverse();
        let translations = (1..=self.n())
            .map(|i| self.translation(i).mul(rhs.translation(sigma_inv.apply(i))))
            .collect();
        Ok(SemidirectElement {
            translations,
            perm: self.perm.compose(&rhs.perm),
        })
    }

    pub fn inv(&self) -> SemidirectElement {
        let translations = (1..=self.n())
            .map(|i| self.translation(self.perm.apply(i)).inv())
            .collect();
        SemidirectElement {
            translations,
            perm: self.perm.inverse(),
        }
    }

    pub fn pow(&self, e: i64) -> SemidirectElement {
        let mut base = if e < 0 { self.inv() } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = SemidirectElement::identity(self.n());
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Acts on a tuple of points of the universal cover; points are
    /// represented by deck elements, so `π` acts by left multiplication.
    pub fn act(&self, tuple: &[GroupElement]) -> Result<Vec<GroupElement>> {
        if tuple.len() != self.n() {
            return Err(Error::BranchCount {
                expected: self.n(),
                found: tuple.len(),
            });
        }
        let sigma_inv = self.perm.inverse();
        Ok((1..=self.n())
            .map(|i| self.translation(i).mul(&tuple[sigma_inv.apply(i) - 1]))
            .collect())
    }

    pub fn conjugate_by(&self, phi: &SemidirectElement) -> Result<SemidirectElement> {
        phi.try_mul(self)?.try_mul(&phi.inv())
    }

    /// Text form `(α_1,…,α_n;σ)` with σ in cycle notation, e.g. `(a^2,a^3;(1 2))`.
    pub fn render(&self, group: &FreeGroup) -> String {
        let ts: Vec<String> = self.translations.iter().map(|t| group.render(t)).collect();
        format!("({};{})", ts.join(","), self.perm)
    }

    pub fn parse(group: &FreeGroup, input: &str) -> Result<Self> {
        let s = input.trim();
        let body = s
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| Error::parse("semidirect element", input, "expected (α_1,…,α_n;σ)"))?;
        let (ts, perm) = body
            .split_once(';')
            .ok_or_else(|| Error::parse("semidirect element", input, "missing ';'"))?;
        let translations = ts
            .split(',')
            .map(|t| group.parse(t))
            .collect::<Result<Vec<_>>>()?;
        let perm = Permutation::parse_cycles(translations.len(), perm)?;
        Self::new(translations, perm)
    }
}

impl Mul for &SemidirectElement {
    type Output = SemidirectElement;

    /// Panics when the branch counts differ; use [`SemidirectElement::try_mul`]
    /// for a checked product.
    fn mul(self, rhs: &SemidirectElement) -> SemidirectElement {
        self.try_mul(rhs).expect("semidirect product of different degrees")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(e: i64) -> GroupElement {
        GroupElement::cyclic(e)
    }

    fn swap() -> Permutation {
        Permutation::transposition(2, 1, 2).unwrap()
    }

    #[test]
    fn product_matches_displayed_formula() {
        let x = SemidirectElement::new(vec![a(1), a(2)], swap()).unwrap();
        let y = SemidirectElement::new(vec![a(3), a(4)], Permutation::identity(2)).unwrap();
        let xy = &x * &y;
        assert_eq!(xy, SemidirectElement::new(vec![a(5), a(5)], swap()).unwrap());
        // the product acts as the composite of the two actions
        let pts = vec![a(10), a(20)];
        assert_eq!(xy.act(&pts).unwrap(), x.act(&y.act(&pts).unwrap()).unwrap());
    }

    #[test]
    fn inverse_matches_displayed_formula() {
        let x = SemidirectElement::new(vec![a(1), a(2)], swap()).unwrap();
        let inv = x.inv();
        assert_eq!(inv, SemidirectElement::new(vec![a(-2), a(-1)], swap()).unwrap());
        assert!((&x * &inv).is_identity());
        assert_eq!(inv.inv(), x);
        assert!(SemidirectElement::identity(3).inv().is_identity());
    }

    #[test]
    fn action_substitutes_directly() {
        let x = SemidirectElement::new(vec![a(1), a(0)], swap()).unwrap();
        let out = x.act(&[a(7), a(11)]).unwrap();
        assert_eq!(out, vec![a(12), a(7)]);
        assert!(x.act(&[a(1)]).is_err());
    }

    #[test]
    fn mismatched_degree_is_an_error() {
        let x = SemidirectElement::identity(2);
        let y = SemidirectElement::identity(3);
        assert!(x.try_mul(&y).is_err());
        assert!(SemidirectElement::new(vec![a(1)], swap()).is_err());
    }

    #[test]
    fn power_by_squaring() {
        let x = SemidirectElement::new(vec![a(2), a(3)], swap()).unwrap();
        let mut slow = SemidirectElement::identity(2);
        for _ in 0..7 {
            slow = &slow * &x;
        }
        assert_eq!(x.pow(7), slow);
        assert!((&x.pow(-7) * &slow).is_identity());
        assert_eq!(x.pow(2), SemidirectElement::new(vec![a(5), a(5)], Permutation::identity(2)).unwrap());
    }

    #[test]
    fn text_round_trip() {
        let g = FreeGroup::CYCLIC;
        let x = SemidirectElement::parse(&g, "(1,1;(1 2))").unwrap();
        assert_eq!(x, SemidirectElement::new(vec![a(0), a(0)], swap()).unwrap());
        let y = SemidirectElement::new(vec![a(2), a(-3)], swap()).unwrap();
        assert_eq!(y.render(&g), "(a^2,a^-3;(1 2))");
        assert_eq!(SemidirectElement::parse(&g, &y.render(&g)).unwrap(), y);
        assert!(SemidirectElement::parse(&g, "(a,a;(1 3))").is_err());
        assert!(SemidirectElement::parse(&g, "a;id").is_err());
    }
}
