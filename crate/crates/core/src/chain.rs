//! Reidemeister traces from equivariant chain data.
//!
//! For each dimension `q` and branch `k` the data holds the `ℤπ` matrix of
//! the chain map induced by branch `k` after subdivision, in a basis made of
//! one chosen lift per simplex. The trace is
//! `Σ_q Σ_k (−1)^q tr(M_{q,k}) × {k}` pushed into `ℤR(f̃_#)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{zpi_trace, GroupRingElement, ZpiMatrix};
use crate::induced::InducedHom;
use crate::io::{matrix_from_json, matrix_to_json, HomJson};
use crate::reidemeister::{ClassSum, PairSum, Relation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainData {
    pub hom: InducedHom,
    /// `matrices[q][k-1]`
    pub matrices: Vec<Vec<ZpiMatrix>>,
    /// `boundaries[q]` maps `C_q → C_{q−1}`; entry 0 is always `None`.
    pub boundaries: Vec<Option<ZpiMatrix>>,
    /// Optional names of the chosen basis lifts, per dimension.
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RtResult {
    pub rt: ClassSum,
    pub lefschetz: BigInt,
    pub nielsen_lower: usize,
    pub exact: bool,
    /// The trace sum before projection.
    pub raw: PairSum,
}

impl RtResult {
    pub fn from_class_sum(rt: ClassSum) -> Self {
        RtResult {
            lefschetz: rt.coefficient_sum(),
            nielsen_lower: rt.exact_len(),
            exact: rt.is_exact(),
            rt,
            raw: PairSum::zero(),
        }
    }
}

impl ChainData {
    pub fn new(hom: InducedHom, matrices: Vec<Vec<ZpiMatrix>>, boundaries: Vec<Option<ZpiMatrix>>) -> Result<Self> {
        let c = ChainData {
            hom,
            matrices,
            boundaries,
            basis: Vec::new(),
        };
        c.check_shape()?;
        Ok(c)
    }

    pub fn n(&self) -> usize {
        self.hom.n()
    }

    pub fn dim(&self) -> usize {
        self.matrices.len().saturating_sub(1)
    }

    pub fn rank_in(&self, q: usize) -> usize {
        self.matrices[q].first().map_or(0, ZpiMatrix::rows)
    }

    /// Structural problems that make the trace meaningless.
    fn shape_issues(&self) -> Vec<ChainIssue> {
        let mut out = Vec::new();
        if self.matrices.is_empty() {
            out.push(ChainIssue::new("matrices", "no dimensions given"));
        }
        for (q, ms) in self.matrices.iter().enumerate() {
            if ms.len() != self.n() {
                out.push(ChainIssue::new(
                    format!("q{q}"),
                    format!("{} branch matrices, expected n = {}", ms.len(), self.n()),
                ));
            }
            let size = ms.first().map_or(0, ZpiMatrix::rows);
            for (k, m) in ms.iter().enumerate() {
                if m.rows() != m.cols() {
                    out.push(ChainIssue::new(
                        format!("q{q}.k{}", k + 1),
                        format!("not square ({}x{})", m.rows(), m.cols()),
                    ));
                } else if m.rows() != size {
                    out.push(ChainIssue::new(
                        format!("q{q}.k{}", k + 1),
                        format!("size {} differs from size {} of k1", m.rows(), size),
                    ));
                }
                let g = self.hom.group();
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        if let Some((w, _)) = m.get(i, j).terms().find(|(w, _)| !g.contains(w)) {
                            out.push(ChainIssue::new(
                                format!("q{q}.k{}[{i}][{j}]", k + 1),
                                format!("uses generator a{} outside rank {}", w.min_rank(), g.rank),
                            ));
                        }
                    }
                }
            }
        }
        if self.boundaries.len() > self.matrices.len() {
            out.push(ChainIssue::new("boundaries", "more boundaries than dimensions"));
        }
        if let Some(Some(_)) = self.boundaries.first() {
            out.push(ChainIssue::new("boundaries.q0", "dimension 0 has no boundary"));
        }
        for (q, b) in self.boundaries.iter().enumerate().skip(1) {
            let Some(b) = b else { continue };
            if q >= self.matrices.len() {
                continue;
            }
            let (r, c) = (self.rank_in(q - 1), self.rank_in(q));
            if b.rows() != r || b.cols() != c {
                out.push(ChainIssue::new(
                    format!("boundaries.q{q}"),
                    format!("is {}x{}, expected {}x{}", b.rows(), b.cols(), r, c),
                ));
            }
        }
        out
    }

    fn check_shape(&self) -> Result<()> {
        match self.shape_issues().into_iter().next() {
            None => Ok(()),
            Some(issue) => Err(Error::ChainShape(issue.to_string())),
        }
    }

    fn boundary(&self, q: usize) -> Option<&ZpiMatrix> {
        self.boundaries.get(q).and_then(Option::as_ref)
    }

    /// `∂ · M_k^q` against `M^{q−1} · ∂` with the twist
    /// `f̃_k(γ e) = φ_k(γ) f̃_{σ_γ⁻¹(k)}(e)`.
    fn chain_map_issues(&self, q: usize, d: &ZpiMatrix) -> Result<Vec<ChainIssue>> {
        let mut out = Vec::new();
        for k in 1..=self.n() {
            let lhs = ZpiMatrix::compose(d, &self.matrices[q][k - 1])?;
            for j in 0..d.cols() {
                let mut rhs = vec![GroupRingElement::zero(); d.rows()];
                for i in 0..d.rows() {
                    for (gamma, c) in d.get(i, j).terms() {
                        let img = self.hom.evaluate(gamma)?;
                        let kk = img.perm().inverse().apply(k);
                        let twist = GroupRingElement::monomial(c.clone(), img.translation(k).clone());
                        let m = &self.matrices[q - 1][kk - 1];
                        for (l, slot) in rhs.iter_mut().enumerate() {
                            *slot = slot.add(&twist.mul(m.get(l, i)));
                        }
                    }
                }
                for (l, r) in rhs.iter().enumerate() {
                    if lhs.get(l, j) != r {
                        let g = self.hom.group();
                        out.push(ChainIssue::new(
                            format!("q{q}.k{k} column {j}, row {l}"),
                            format!(
                                "chain map condition fails: boundary of image gives {}, image of boundary gives {}",
                                lhs.get(l, j).render(&g),
                                r.render(&g)
                            ),
                        ));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Where a check failed and why.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainIssue {
    pub location: String,
    pub message: String,
}

impl ChainIssue {
    fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        ChainIssue {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ChainIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainReport {
    pub issues: Vec<ChainIssue>,
    /// Number of boundary matrices that were checked.
    pub boundaries_checked: usize,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Shape, `∂∂ = 0` and chain-map checks. Never fails; problems are reported.
pub fn validate_chain(c: &ChainData) -> ChainReport {
    let mut report = ChainReport {
        issues: c.shape_issues(),
        boundaries_checked: 0,
    };
    if !report.issues.is_empty() {
        return report;
    }
    let g = c.hom.group();
    for q in 1..=c.dim() {
        let Some(d) = c.boundary(q) else { continue };
        report.boundaries_checked += 1;
        if let Some(lower) = c.boundary(q - 1) {
            match ZpiMatrix::compose(lower, d) {
                Ok(dd) => {
                    for l in 0..dd.rows() {
                        for j in 0..dd.cols() {
                            if !dd.get(l, j).is_zero() {
                                report.issues.push(ChainIssue::new(
                                    format!("boundaries.q{}∘q{q} [{l}][{j}]", q - 1),
                                    format!("composite boundary is {}, not 0", dd.get(l, j).render(&g)),
                                ));
                            }
                        }
                    }
                }
                Err(e) => report.issues.push(ChainIssue::new(format!("boundaries.q{q}"), e.to_string())),
            }
        }
        match c.chain_map_issues(q, d) {
            Ok(issues) => report.issues.extend(issues),
            Err(e) => report.issues.push(ChainIssue::new(format!("q{q}"), e.to_string())),
        }
    }
    report
}

/// `T(f,f̃) = Σ_q Σ_k (−1)^q tr(M_{q,k}) × {k}`.
pub fn trace_sum(c: &ChainData) -> Result<PairSum> {
    c.check_shape()?;
    let mut t = PairSum::zero();
    for (q, ms) in c.matrices.iter().enumerate() {
        let sign = if q % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        for (k, m) in ms.iter().enumerate() {
            t.add_tagged(&zpi_trace(m)?, k + 1, &sign);
        }
    }
    Ok(t)
}

pub fn rt_via_traces(c: &ChainData) -> Result<RtResult> {
    rt_via_traces_with(c, &Relation::new(c.hom.clone()))
}

/// As [`rt_via_traces`] with a caller-supplied relation (for a custom search bound).
pub fn rt_via_traces_with(c: &ChainData, relation: &Relation) -> Result<RtResult> {
    if relation.hom() != &c.hom {
        return Err(Error::ChainShape("relation is for a different homomorphism".into()));
    }
    let raw = trace_sum(c)?;
    let rt = relation.rho_project(&raw)?;
    Ok(RtResult {
        raw,
        ..RtResult::from_class_sum(rt)
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ChainJson {
    dim: usize,
    n: usize,
    hom: HomJson,
    matrices: BTreeMap<String, BTreeMap<String, Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    boundaries: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    basis: BTreeMap<String, Vec<String>>,
}

fn index_key(prefix: char, key: &str) -> Result<usize> {
    key.strip_prefix(prefix)
        .and_then(|i| i.parse().ok())
        .ok_or_else(|| Error::Json(format!("expected a key like {prefix}0, found {key:?}")))
}

impl ChainData {
    /// Parses the JSON form. The result may still fail [`validate_chain`];
    /// only its grammar and the declared sizes are checked here.
    pub fn from_json(s: &str) -> Result<ChainData> {
        let raw: ChainJson = serde_json::from_str(s)?;
        let hom = raw.hom.to_hom()?;
        if hom.n() != raw.n {
            return Err(Error::BranchCount {
                expected: raw.n,
                found: hom.n(),
            });
        }
        let g = hom.group();
        let mut matrices = vec![Vec::new(); raw.dim + 1];
        for (qk, per_k) in &raw.matrices {
            let q = index_key('q', qk)?;
            if q > raw.dim {
                return Err(Error::Json(format!("dimension {q} exceeds dim {}", raw.dim)));
            }
            let mut ms = vec![None; per_k.len()];
            for (kk, rows) in per_k {
                let k = index_key('k', kk)?;
                if k == 0 || k > ms.len() {
                    return Err(Error::Json(format!("branch key {kk} out of range in {qk}")));
                }
                ms[k - 1] = Some(matrix_from_json(rows, &g)?);
            }
            matrices[q] = ms.into_iter().map(|m| m.expect("all branch keys distinct")).collect();
        }
        let mut boundaries = vec![None; raw.dim + 1];
        for (qk, rows) in &raw.boundaries {
            let q = index_key('q', qk)?;
            if q == 0 || q > raw.dim {
                return Err(Error::Json(format!("boundary key {qk} out of range")));
            }
            boundaries[q] = Some(matrix_from_json(rows, &g)?);
        }
        let mut basis = Vec::new();
        for (qk, labels) in &raw.basis {
            let q = index_key('q', qk)?;
            if basis.len() <= q {
                basis.resize(q + 1, Vec::new());
            }
            basis[q] = labels.clone();
        }
        Ok(ChainData {
            hom,
            matrices,
            boundaries,
            basis,
        })
    }

    pub fn to_json(&self) -> String {
        let g = self.hom.group();
        let raw = ChainJson {
            dim: self.dim(),
            n: self.n(),
            hom: HomJson::from_hom(&self.hom),
            matrices: self
                .matrices
                .iter()
                .enumerate()
                .map(|(q, ms)| {
                    (
                        format!("q{q}"),
                        ms.iter()
                            .enumerate()
                            .map(|(k, m)| (format!("k{}", k + 1), matrix_to_json(m, &g)))
                            .collect(),
                    )
                })
                .collect(),
            boundaries: self
                .boundaries
                .iter()
                .enumerate()
                .filter_map(|(q, b)| b.as_ref().map(|b| (format!("q{q}"), matrix_to_json(b, &g))))
                .collect(),
            basis: self
                .basis
                .iter()
                .enumerate()
                .filter(|(_, l)| !l.is_empty())
                .map(|(q, l)| (format!("q{q}"), l.clone()))
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("serializable")
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::group::{FreeGroup, GroupElement, SemidirectElement};
    use crate::induced::tests::two_five;

    fn m(rows: &[&[&str]]) -> ZpiMatrix {
        let g = FreeGroup::CYCLIC;
        ZpiMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| GroupRingElement::parse(&g, s).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    /// The degree-5, two-valued example with vertices `0, 1/2` and edges
    /// `[0,1/2]`, `[1/2,1]`.
    pub(crate) fn worked_example() -> ChainData {
        ChainData::new(
            two_five(),
            vec![
                vec![m(&[&["1", "a"], &["0", "0"]]), m(&[&["0", "0"], &["1", "a"]])],
                vec![m(&[&["1", "a + a^2"], &["1", "a"]]), m(&[&["a", "a^2"], &["1", "a + a^2"]])],
            ],
            vec![None, Some(m(&[&["-1", "a"], &["1", "-1"]]))],
        )
        .unwrap()
    }

    #[test]
    fn worked_example_trace() {
        let c = worked_example();
        let r = rt_via_traces(&c).unwrap();
        assert_eq!(r.rt.render(&FreeGroup::CYCLIC), "-1*[(1,1)] + -1*[(a,1)] + -1*[(a,2)]");
        assert_eq!(r.lefschetz, BigInt::from(-3));
        assert_eq!(r.nielsen_lower, 3);
        assert!(r.exact);
        assert_eq!(
            r.raw.render(&FreeGroup::CYCLIC),
            "-1*[(a,1)] + -1*[(a,2)] + -1*[(a^2,2)]"
        );
    }

    #[test]
    fn worked_example_validates() {
        let report = validate_chain(&worked_example());
        assert!(report.passed(), "{:?}", report.issues);
        assert_eq!(report.boundaries_checked, 1);
    }

    #[test]
    fn corrupted_boundary_is_located() {
        let mut c = worked_example();
        let mut d = c.boundaries[1].clone().unwrap();
        *d.get_mut(0, 1) = GroupRingElement::parse(&FreeGroup::CYCLIC, "a^2").unwrap();
        c.boundaries[1] = Some(d);
        let report = validate_chain(&c);
        assert!(!report.passed());
        assert!(report.issues.iter().any(|i| i.location.contains("column 1")), "{:?}", report.issues);
    }

    #[test]
    fn inconsistent_branch_counts_fail() {
        let mut c = worked_example();
        c.matrices[1].pop();
        let report = validate_chain(&c);
        assert!(!report.passed());
        assert_eq!(report.issues[0].location, "q1");
        assert!(rt_via_traces(&c).is_err());
    }

    fn identity_hom() -> InducedHom {
        InducedHom::cyclic(SemidirectElement::diagonal(1, &GroupElement::cyclic(1)))
    }

    #[test]
    fn identity_on_a_triangle() {
        let id3 = m(&[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]]);
        // edges [v0,v1], [v1,v2], [v2, a v0]
        let d = m(&[&["-1", "0", "a"], &["1", "-1", "0"], &["0", "1", "-1"]]);
        let c = ChainData::new(identity_hom(), vec![vec![id3.clone()], vec![id3]], vec![None, Some(d)]).unwrap();
        assert!(validate_chain(&c).passed());
        let r = rt_via_traces(&c).unwrap();
        assert!(r.rt.is_zero());
        assert_eq!(r.lefschetz, BigInt::from(0));
    }

    #[test]
    fn constant_map() {
        let hom = InducedHom::cyclic(SemidirectElement::identity(1));
        let c = ChainData::new(hom, vec![vec![m(&[&["1"]])], vec![m(&[&["0"]])]], vec![None, Some(m(&[&["-1 + a"]]))])
            .unwrap();
        assert!(validate_chain(&c).passed(), "{:?}", validate_chain(&c).issues);
        let r = rt_via_traces(&c).unwrap();
        assert_eq!(r.rt.render(&FreeGroup::CYCLIC), "1*[(1,1)]");
        assert_eq!(r.lefschetz, BigInt::from(1));
    }

    #[test]
    fn json_round_trip() {
        let mut c = worked_example();
        c.basis = vec![vec!["0".into(), "1/2".into()], vec!["[0,1/2]".into(), "[1/2,1]".into()]];
        let s = c.to_json();
        assert_eq!(ChainData::from_json(&s).unwrap(), c);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["matrices"]["q1"]["k1"][0][1], "a + a^2");
        assert!(ChainData::from_json(&s.replace("\"a + a^2\"", "\"a + b\"")).is_err());
    }
}
