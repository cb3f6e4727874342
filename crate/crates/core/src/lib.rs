mod error;
pub mod chain;
pub mod circle;
pub mod group;
pub mod induced;
pub mod io;
pub mod reidemeister;
mod report;

pub use error::{Error, Result};
pub use chain::{rt_via_traces, validate_chain, ChainData, ChainReport, RtResult};
pub use circle::{ArcRegion, LinearCircleMap, Method, PlCircleMap};
pub use induced::InducedHom;
pub use report::RtReport;
pub use reidemeister::{
    mu_class, mu_map, mu_sum, ClassSum, CyclicSubgroup, EquivalenceVerdict, MarkedPair, PairSum, ReidemeisterClass,
    Relation,
};
