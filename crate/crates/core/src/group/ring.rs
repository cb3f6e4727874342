use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{FreeGroup, GroupElement};
use crate::error::{Error, Result};

/// A finite formal sum `Σ c_i g_i` in `ℤπ`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    terms: BTreeMap<GroupElement, BigInt>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_element(GroupElement::identity())
    }

    pub fn from_element(g: GroupElement) -> Self {
        Self::monomial(BigInt::one(), g)
    }

    pub fn monomial(c: BigInt, g: GroupElement) -> Self {
        let mut out = Self::zero();
        out.add_term(g, c);
        out
    }

    pub fn add_term(&mut self, g: GroupElement, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, g: &GroupElement) -> BigInt {
        self.terms.get(g).cloned().unwrap_or_default()
    }

    /// The augmentation `Σ c_i`.
    pub fn augmentation(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (g, c) in &rhs.terms {
            out.add_term(g.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        GroupRingElement {
            terms: self.terms.iter().map(|(g, c)| (g.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (g, c) in &self.terms {
            for (h, d) in &rhs.terms {
                out.add_term(g.mul(h), c * d);
            }
        }
        out
    }

    /// `g · self`
    pub fn left_mul_element(&self, g: &GroupElement) -> Self {
        GroupRingElement {
            terms: self.terms.iter().map(|(h, c)| (g.mul(h), c.clone())).collect(),
        }
    }

    /// Text form such as `1 + a + 2*a^2`; a coefficient of one is omitted and
    /// the identity with coefficient `c` renders as `c`.
    pub fn render(&self, group: &FreeGroup) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(g, c)| {
                if g.is_identity() {
                    c.to_string()
                } else if c.is_one() {
                    group.render(g)
                } else {
                    format!("{}*{}", c, group.render(g))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn parse(group: &FreeGroup, input: &str) -> Result<Self> {
        let s = input.trim();
        if s.is_empty() {
            return Err(Error::parse("group ring element", input, "empty"));
        }
        let normalized = s.replace(" - ", " + -");
        let mut out = Self::zero();
        for term in normalized.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::parse("group ring element", input, "empty term"));
            }
            let (c, g) = match term.split_once('*') {
                Some((c, w)) => {
                    let c: BigInt = c
                        .trim()
                        .parse()
                        .map_err(|_| Error::parse("group ring element", input, "bad coefficient"))?;
                    (c, group.parse(w)?)
                }
                None => match term.parse::<BigInt>() {
                    Ok(c) => (c, GroupElement::identity()),
                    Err(_) => match term.strip_prefix('-') {
                        Some(w) => (-BigInt::one(), group.parse(w)?),
                        None => (BigInt::one(), group.parse(term)?),
                    },
                },
            };
            out.add_term(g, c);
        }
        Ok(out)
    }
}

impl From<GroupElement> for GroupRingElement {
    fn from(g: GroupElement) -> Self {
        Self::from_element(g)
    }
}

/// A dense matrix over `ℤπ`. Entry `(i, j)` is the coefficient of basis
/// element `i` in the image of basis element `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZpiMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GroupRingElement>,
}

impl ZpiMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ZpiMatrix {
            rows,
            cols,
            data: vec![GroupRingElement::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<GroupRingElement>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != c) {
            return Err(Error::ChainShape(format!(
                "row {} has {} entries, expected {}",
                i,
                row.len(),
                c
            )));
        }
        Ok(ZpiMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GroupRingElement {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut GroupRingElement {
        &mut self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<GroupRingElement> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<GroupRingElement>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    pub fn trace(&self) -> Result<GroupRingElement> {
        zpi_trace(self)
    }

    /// Ordinary matrix product with entries multiplied in `ℤπ` order,
    /// `(AB)_{ij} = Σ_l A_{il} B_{lj}`.
    pub fn mul(&self, rhs: &ZpiMatrix) -> Result<ZpiMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::ChainShape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = ZpiMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = GroupRingElement::zero();
                for l in 0..self.cols {
                    acc = acc.add(&self.get(i, l).mul(rhs.get(l, j)));
                }
                *out.get_mut(i, j) = acc;
            }
        }
        Ok(out)
    }
}

impl ZpiMatrix {
    /// The matrix of `after ∘ before` for ℤπ-linear maps in the column
    /// convention: entry `(l, j)` is `Σ_i before_{ij} · after_{li}`.
    pub fn compose(after: &ZpiMatrix, before: &ZpiMatrix) -> Result<ZpiMatrix> {
        if after.cols != before.rows {
            return Err(Error::ChainShape(format!(
                "cannot compose {}x{} after {}x{}",
                after.rows, after.cols, before.rows, before.cols
            )));
        }
        let mut out = ZpiMatrix::zeros(after.rows, before.cols);
        for l in 0..after.rows {
            for j in 0..before.cols {
                let mut acc = GroupRingElement::zero();
                for i in 0..after.cols {
                    acc = acc.add(&before.get(i, j).mul(after.get(l, i)));
                }
                *out.get_mut(l, j) = acc;
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GroupRingElement::is_zero)
    }
}

/// Sum of the diagonal entries of a square `ℤπ` matrix.
pub fn zpi_trace(m: &ZpiMatrix) -> Result<GroupRingElement> {
    if m.rows != m.cols {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    Ok((0..m.rows).fold(GroupRingElement::zero(), |acc, i| acc.add(m.get(i, i))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(s: &str) -> GroupRingElement {
        GroupRingElement::parse(&FreeGroup::CYCLIC, s).unwrap()
    }

    fn mat(rows: &[&[&str]]) -> ZpiMatrix {
        ZpiMatrix::from_rows(rows.iter().map(|r| r.iter().map(|s| z(s)).collect()).collect()).unwrap()
    }

    #[test]
    fn traces_of_worked_matrices() {
        assert_eq!(zpi_trace(&mat(&[&["1", "a"], &["0", "0"]])).unwrap(), z("1"));
        assert_eq!(zpi_trace(&mat(&[&["a", "a^2"], &["1", "a + a^2"]])).unwrap(), z("2*a + a^2"));
        assert!(zpi_trace(&ZpiMatrix::zeros(3, 3)).unwrap().is_zero());
        assert_eq!(
            zpi_trace(&ZpiMatrix::zeros(2, 3)),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        );
    }

    #[test]
    fn text_forms() {
        let g = FreeGroup::CYCLIC;
        assert_eq!(z("1 + a + 2*a^2").render(&g), "1 + a + 2*a^2");
        assert_eq!(z("a - a").render(&g), "0");
        assert_eq!(z("-a + 3").render(&g), "3 + -1*a");
        assert_eq!(z("3 + -1*a"), z("3 - a"));
        assert!(GroupRingElement::parse(&g, "2*b").is_err());
        assert!(GroupRingElement::parse(&g, "1 + ").is_err());
    }

    #[test]
    fn noncommutative_product() {
        let g = FreeGroup::new(2);
        let x = GroupRingElement::parse(&g, "a1 + a2").unwrap();
        let y = GroupRingElement::parse(&g, "a1 - a2").unwrap();
        assert_eq!(x.mul(&y).render(&g), "a1^2 + -1*a1 a2 + a2 a1 + -1*a2^2");
    }

    fn element() -> impl Strategy<Value = GroupRingElement> {
        prop::collection::vec((-3i64..=3, -3i64..=3), 0..5).prop_map(|ts| {
            let mut x = GroupRingElement::zero();
            for (e, c) in ts {
                x.add_term(GroupElement::cyclic(e), BigInt::from(c));
            }
            x
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(x in element(), y in element(), w in element()) {
            prop_assert_eq!(x.add(&y), y.add(&x));
            prop_assert_eq!(x.add(&y).add(&w), x.add(&y.add(&w)));
            prop_assert_eq!(x.mul(&y).mul(&w), x.mul(&y.mul(&w)));
            prop_assert_eq!(x.mul(&y.add(&w)), x.mul(&y).add(&x.mul(&w)));
            prop_assert_eq!(x.add(&y).mul(&w), x.mul(&w).add(&y.mul(&w)));
            prop_assert!(x.sub(&x).is_zero());
            prop_assert_eq!(x.mul(&y).augmentation(), x.augmentation() * y.augmentation());
        }

        #[test]
        fn trace_against_permutation_matrix(
            entries in prop::collection::vec(element(), 9),
            perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
        ) {
            let m = ZpiMatrix::from_rows(entries.chunks(3).map(<[_]>::to_vec).collect()).unwrap();
            let mut p = ZpiMatrix::zeros(3, 3);
            for (j, &l) in perm.iter().enumerate() {
                *p.get_mut(l, j) = GroupRingElement::one();
            }
            let direct = (0..3).fold(GroupRingElement::zero(), |acc, i| acc.add(m.get(i, perm[i])));
            prop_assert_eq!(m.mul(&p).unwrap().trace().unwrap(), direct);
        }

        #[test]
        fn text_round_trips(x in element()) {
            let g = FreeGroup::CYCLIC;
            let s = x.render(&g);
            prop_assert_eq!(GroupRingElement::parse(&g, &s).unwrap(), x);
        }
    }
}
