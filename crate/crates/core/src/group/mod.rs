//! Deck-group arithmetic: reduced words in a free group of finite rank,
//! permutations of `{1..n}`, the semidirect product `π^n ⋊ Σ_n` and the
//! integral group ring `ℤπ`.
//!
//! Rank 1 is the infinite cyclic group with generator `a`; every circle
//! computation lives there. Elements do not carry their rank, so text
//! rendering goes through a [`FreeGroup`] context.

mod perm;
mod ring;
mod semidirect;

pub use perm::Permutation;
pub use ring::{zpi_trace, GroupRingElement, ZpiMatrix};
pub use semidirect::SemidirectElement;

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// One syllable `g^e` of a reduced word; `gen` is zero-based, `exp != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub gen: usize,
    pub exp: i64,
}

/// An element of a free group, stored as a freely reduced word.
///
/// Adjacent syllables never share a generator and no exponent is zero, so
/// structural equality is group equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupElement {
    word: Vec<Syllable>,
}

impl GroupElement {
    pub fn identity() -> Self {
        Self::default()
    }

    /// `a_{gen+1}^exp`.
    pub fn gen_pow(gen: usize, exp: i64) -> Self {
        if exp == 0 {
            Self::identity()
        } else {
            GroupElement {
                word: vec![Syllable { gen, exp }],
            }
        }
    }

    /// `a^exp` in the infinite cyclic group.
    pub fn cyclic(exp: i64) -> Self {
        Self::gen_pow(0, exp)
    }

    pub fn from_syllables(syllables: impl IntoIterator<Item = Syllable>) -> Self {
        let mut out = GroupElement::identity();
        for s in syllables {
            out.push(s);
        }
        out
    }

    fn push(&mut self, s: Syllable) {
        if s.exp == 0 {
            return;
        }
        match self.word.last_mut() {
            Some(last) if last.gen == s.gen => {
                last.exp += s.exp;
                if last.exp == 0 {
                    self.word.pop();
                }
            }
            _ => self.word.push(s),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.word
    }

    /// Word length in letters, `Σ |exp|`.
    pub fn len(&self) -> u64 {
        self.word.iter().map(|s| s.exp.unsigned_abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Largest generator index used, plus one.
    pub fn min_rank(&self) -> usize {
        self.word.iter().map(|s| s.gen + 1).max().unwrap_or(0)
    }

    /// The exponent of `a` when the element lies in the first cyclic factor.
    pub fn cyclic_exponent(&self) -> Option<i64> {
        match self.word.as_slice() {
            [] => Some(0),
            [Syllable { gen: 0, exp }] => Some(*exp),
            _ => None,
        }
    }

    pub fn mul(&self, rhs: &GroupElement) -> GroupElement {
        let mut out = self.clone();
        for s in &rhs.word {
            out.push(*s);
        }
        out
    }

    pub fn inv(&self) -> GroupElement {
        GroupElement {
            word: self
                .word
                .iter()
                .rev()
                .map(|s| Syllable {
                    gen: s.gen,
                    exp: -s.exp,
                })
                .collect(),
        }
    }

    pub fn pow(&self, e: i64) -> GroupElement {
        if let [s] = self.word.as_slice() {
            return GroupElement::gen_pow(s.gen, s.exp * e);
        }
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut out = GroupElement::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Letters as `(generator, sign)` with `sign = false` for positive powers.
    fn letters(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.word.iter().flat_map(|s| {
            std::iter::repeat_n((s.gen, s.exp < 0), s.exp.unsigned_abs() as usize)
        })
    }
}

impl Ord for GroupElement {
    /// Shortlex: shorter words first, then letter by letter with
    /// `a1 < a1^-1 < a2 < a2^-1 < ...`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters().cmp(other.letters()))
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A free group of the given rank; used for parsing, printing and
/// enumerating generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FreeGroup {
    pub rank: usize,
}

impl FreeGroup {
    pub const CYCLIC: FreeGroup = FreeGroup { rank: 1 };

    pub fn new(rank: usize) -> Self {
        FreeGroup { rank }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.min_rank() <= self.rank
    }

    pub fn generator_name(&self, gen: usize) -> String {
        if self.rank == 1 {
            "a".to_string()
        } else {
            format!("a{}", gen + 1)
        }
    }

    /// Text form: `1`, `a^3`, `a^-2`, or `a1^2 a2^-1` for rank ≥ 2.
    pub fn render(&self, x: &GroupElement) -> String {
        if x.is_identity() {
            return "1".to_string();
        }
        x.word
            .iter()
            .map(|s| {
                let name = self.generator_name(s.gen);
                if s.exp == 1 {
                    name
                } else {
                    format!("{}^{}", name, s.exp)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn display<'a>(&'a self, x: &'a GroupElement) -> impl fmt::Display + 'a {
        struct D<'a>(&'a FreeGroup, &'a GroupElement);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.render(self.1))
            }
        }
        D(self, x)
    }

    pub fn parse(&self, input: &str) -> Result<GroupElement> {
        let s = input.trim();
        if s == "1" {
            return Ok(GroupElement::identity());
        }
        if s.is_empty() {
            return Err(Error::parse("group element", input, "empty"));
        }
        let mut out = GroupElement::identity();
        for token in s.split_whitespace() {
            let (name, exp) = match token.split_once('^') {
                Some((name, exp)) => {
                    let exp: i64 = exp
                        .parse()
                        .map_err(|_| Error::parse("group element", input, "bad exponent"))?;
                    (name, exp)
                }
                None => (token, 1),
            };
            let gen = self
                .parse_generator(name)
                .ok_or_else(|| Error::parse("group element", input, format!("unknown generator {name:?}")))?;
            out.push(Syllable { gen, exp });
        }
        Ok(out)
    }

    /// `a` in rank 1, `a1..a{rank}` otherwise (`a1` is also accepted in rank 1).
    pub fn parse_generator(&self, name: &str) -> Option<usize> {
        let rest = name.strip_prefix('a')?;
        if rest.is_empty() {
            return (self.rank == 1).then_some(0);
        }
        let idx: usize = rest.parse().ok()?;
        (1..=self.rank).contains(&idx).then(|| idx - 1)
    }
}
