//! JSON forms of homomorphisms, chain data and class sums. Group and ring
//! elements are written in their text grammar.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FreeGroup, GroupRingElement, Permutation, SemidirectElement, ZpiMatrix};
use crate::induced::InducedHom;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemidirectJson {
    pub translations: Vec<String>,
    /// One-indexed images, `perm[i-1] = σ(i)`.
    pub perm: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomJson {
    pub n: usize,
    pub generators: BTreeMap<String, SemidirectJson>,
}

impl SemidirectJson {
    pub fn from_element(x: &SemidirectElement, group: &FreeGroup) -> Self {
        SemidirectJson {
            translations: x.translations().iter().map(|t| group.render(t)).collect(),
            perm: x.perm().images().to_vec(),
        }
    }

    pub fn to_element(&self, group: &FreeGroup) -> Result<SemidirectElement> {
        let ts = self
            .translations
            .iter()
            .map(|t| group.parse(t))
            .collect::<Result<Vec<_>>>()?;
        SemidirectElement::new(ts, Permutation::from_images(self.perm.clone())?)
    }
}

impl HomJson {
    pub fn from_hom(h: &InducedHom) -> Self {
        let g = h.group();
        HomJson {
            n: h.n(),
            generators: h
                .generator_images()
                .iter()
                .enumerate()
                .map(|(i, x)| (g.generator_name(i), SemidirectJson::from_element(x, &g)))
                .collect(),
        }
    }

    pub fn to_hom(&self) -> Result<InducedHom> {
        let g = FreeGroup::new(self.generators.len());
        let mut images = Vec::with_capacity(g.rank);
        for i in 0..g.rank {
            let name = g.generator_name(i);
            let img = self
                .generators
                .get(&name)
                .ok_or_else(|| Error::Json(format!("missing image of generator {name}")))?;
            images.push(img.to_element(&g)?);
        }
        InducedHom::new(self.n, images)
    }
}

pub fn hom_to_json(h: &InducedHom) -> String {
    serde_json::to_string_pretty(&HomJson::from_hom(h)).expect("serializable")
}

pub fn hom_from_json(s: &str) -> Result<InducedHom> {
    serde_json::from_str::<HomJson>(s)?.to_hom()
}

pub(crate) fn matrix_to_json(m: &ZpiMatrix, group: &FreeGroup) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|x| x.render(group)).collect())
        .collect()
}

pub(crate) fn matrix_from_json(rows: &[Vec<String>], group: &FreeGroup) -> Result<ZpiMatrix> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|x| GroupRingElement::parse(group, x)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    ZpiMatrix::from_rows(parsed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::induced::tests::two_five;

    #[test]
    fn hom_round_trip() {
        let s = hom_to_json(&two_five());
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"n": 2, "generators": {"a": {"translations": ["a^2","a^3"], "perm": [2,1]}}})
        );
        assert_eq!(hom_from_json(&s).unwrap(), two_five());
        assert!(hom_from_json(r#"{"n":2,"generators":{"b":{"translations":["1","1"],"perm":[1,2]}}}"#).is_err());
        assert!(hom_from_json(r#"{"n":2,"generators":{"a":{"translations":["1","1"],"perm":[1,1]}}}"#).is_err());
    }
}
