use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `{1..n}`, stored one-indexed: `images[i-1] = σ(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i == 0 || i > n || std::mem::replace(&mut seen[i - 1], true) {
                return Err(Error::InvalidPermutation(images));
            }
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of `{1..n}` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (idx, &i) in cycle.iter().enumerate() {
                if i == 0 || i > n || std::mem::replace(&mut touched[i - 1], true) {
                    return Err(Error::InvalidPermutation(cycle.clone()));
                }
                images[i - 1] = cycle[(idx + 1) % cycle.len()];
            }
        }
        Self::from_images(images)
    }

    /// The transposition `(i j)`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        Self::from_cycles(n, &[vec![i, j]])
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `σ(i)` for one-indexed `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &img) in self.images.iter().enumerate() {
            inv[img - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    /// `self ∘ rhs`: apply `rhs` first.
    pub fn compose(&self, rhs: &Permutation) -> Permutation {
        assert_eq!(self.n(), rhs.n(), "composing permutations of different degree");
        Permutation {
            images: rhs.images.iter().map(|&i| self.apply(i)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| img == i + 1)
    }

    /// Nontrivial cycles, each starting at its least element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in 1..=self.n() {
            if seen[start - 1] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start - 1] = true;
            let mut i = self.apply(start);
            while i != start {
                seen[i - 1] = true;
                cycle.push(i);
                i = self.apply(i);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Parses cycle notation such as `(1 2)(3 4)`; `id`, `()` and the empty
    /// string denote the identity.
    pub fn parse_cycles(n: usize, input: &str) -> Result<Self> {
        let s = input.trim();
        if s.is_empty() || s == "id" || s == "()" {
            return Ok(Self::identity(n));
        }
        let mut cycles = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::parse("permutation", input, "expected '('"))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::parse("permutation", input, "unclosed cycle"))?;
            let cycle = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::parse("permutation", input, "bad cycle entry"))?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = body[close + 1..].trim_start();
        }
        Self::from_cycles(n, &cycles)
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, `id` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("id");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}
