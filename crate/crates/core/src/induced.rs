//! Homomorphisms `π → π^n ⋊ Σ_n` given by their values on generators.

use crate::error::{Error, Result};
use crate::group::{FreeGroup, GroupElement, Permutation, SemidirectElement};

/// The induced homomorphism of a lifted n-valued map, `γ ↦ (φ_1(γ),…,φ_n(γ); σ_γ)`.
///
/// The domain is free, so any choice of generator images defines a
/// homomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InducedHom {
    n: usize,
    group: FreeGroup,
    images: Vec<SemidirectElement>,
}

impl InducedHom {
    /// `images[i]` is the value on generator `a_{i+1}`; the rank is `images.len()`.
    pub fn new(n: usize, images: Vec<SemidirectElement>) -> Result<Self> {
        if n == 0 {
            return Err(Error::BranchCount { expected: 1, found: 0 });
        }
        let group = FreeGroup::new(images.len());
        for img in &images {
            if img.n() != n {
                return Err(Error::BranchCount {
                    expected: n,
                    found: img.n(),
                });
            }
            if let Some(bad) = img.translations().iter().find(|t| !group.contains(t)) {
                return Err(Error::UnknownGenerator(bad.min_rank()));
            }
        }
        Ok(InducedHom { n, group, images })
    }

    /// Rank-one homomorphism determined by `Θ = f̃_#(a)`.
    pub fn cyclic(theta: SemidirectElement) -> Self {
        let n = theta.n();
        Self::new(n, vec![theta]).expect("single generator image of a cyclic group")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> FreeGroup {
        self.group
    }

    pub fn rank(&self) -> usize {
        self.group.rank
    }

    pub fn generator_images(&self) -> &[SemidirectElement] {
        &self.images
    }

    pub fn generator_image(&self, gen: usize) -> Result<&SemidirectElement> {
        self.images.get(gen).ok_or(Error::UnknownGenerator(gen + 1))
    }

    pub fn evaluate(&self, w: &GroupElement) -> Result<SemidirectElement> {
        let mut acc = SemidirectElement::identity(self.n);
        for s in w.syllables() {
            let img = self.generator_image(s.gen)?;
            acc = &acc * &img.pow(s.exp);
        }
        Ok(acc)
    }

    /// `φ_k(w)`, one-indexed `k`.
    pub fn phi(&self, k: usize, w: &GroupElement) -> Result<GroupElement> {
        self.check_branch(k)?;
        Ok(self.evaluate(w)?.translation(k).clone())
    }

    /// `σ_w`.
    pub fn sigma(&self, w: &GroupElement) -> Result<Permutation> {
        Ok(self.evaluate(w)?.perm().clone())
    }

    /// The homomorphism `γ ↦ Φ · f̃_#(γ) · Φ⁻¹` induced by the lift `Φf̃`.
    pub fn conjugate(&self, phi: &SemidirectElement) -> Result<InducedHom> {
        if phi.n() != self.n {
            return Err(Error::BranchCount {
                expected: self.n,
                found: phi.n(),
            });
        }
        if let Some(bad) = phi.translations().iter().find(|t| !self.group.contains(t)) {
            return Err(Error::UnknownGenerator(bad.min_rank()));
        }
        let images = self
            .images
            .iter()
            .map(|g| g.conjugate_by(phi))
            .collect::<Result<Vec<_>>>()?;
        Ok(InducedHom {
            n: self.n,
            group: self.group,
            images,
        })
    }

    pub fn check_branch(&self, k: usize) -> Result<()> {
        if (1..=self.n).contains(&k) {
            Ok(())
        } else {
            Err(Error::BranchOutOfRange { k, n: self.n })
        }
    }
}
