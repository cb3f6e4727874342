//! The summary printed for a trace: the class sum, its Lefschetz number,
//! the Nielsen lower bound and whether every class was decided exactly.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::FreeGroup;
use crate::reidemeister::ClassSum;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RtReport {
    pub group: FreeGroup,
    pub rt: ClassSum,
    pub lefschetz: BigInt,
    /// Nonzero terms whose class is known exactly.
    pub nielsen_lower: usize,
    pub exact: bool,
}

impl RtReport {
    pub fn new(group: FreeGroup, rt: ClassSum) -> Self {
        RtReport {
            group,
            lefschetz: rt.coefficient_sum(),
            nielsen_lower: rt.exact_len(),
            exact: rt.is_exact(),
            rt,
        }
    }

    /// Two lines: `RT = …  L = …  N = …` and `exact = …`.
    pub fn render(&self) -> String {
        format!(
            "RT = {}  L = {}  N = {}\nexact = {}",
            self.rt.render(&self.group),
            self.lefschetz,
            self.nielsen_lower,
            self.exact
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.group.rank,
            "rt": self.rt.to_json(&self.group),
            "lefschetz": self.lefschetz.to_i64().map_or_else(|| json!(self.lefschetz.to_string()), |v| json!(v)),
            "nielsen_lower": self.nielsen_lower,
            "exact": self.exact,
        })
    }

    pub fn from_json(v: &Value) -> Result<RtReport> {
        let bad = |why: &str| Error::Json(format!("report: {why}"));
        let rank = v.get("rank").and_then(Value::as_u64).ok_or_else(|| bad("rank"))? as usize;
        let group = FreeGroup::new(rank);
        let rt = ClassSum::from_json(&group, v.get("rt").ok_or_else(|| bad("rt"))?)?;
        let lefschetz: BigInt = match v.get("lefschetz") {
            Some(Value::Number(n)) => n.as_i64().map(BigInt::from).ok_or_else(|| bad("lefschetz"))?,
            Some(Value::String(s)) => s.parse().map_err(|_| bad("lefschetz"))?,
            _ => return Err(bad("lefschetz")),
        };
        let nielsen_lower = v.get("nielsen_lower").and_then(Value::as_u64).ok_or_else(|| bad("nielsen_lower"))? as usize;
        let exact = v.get("exact").and_then(Value::as_bool).ok_or_else(|| bad("exact"))?;
        let r = RtReport {
            group,
            rt,
            lefschetz,
            nielsen_lower,
            exact,
        };
        if r != RtReport::new(r.group, r.rt.clone()) {
            return Err(bad("summary fields disagree with the class sum"));
        }
        Ok(r)
    }
}
