//! Exact-arithmetic engine for rank-2 systems of algebraic recurrences
//! encoded by pairs of integer polynomial matrices, with quiver-mutation
//! dynamics over pluggable semifields, reddening/periodicity detection,
//! a finite-type classification, q-series expansions, and quantum
//! dilogarithm identities.

pub mod classifier;
pub mod error;
pub mod mpoly;
pub mod nahm;
pub mod par;
pub mod polymat;
pub mod presets;
pub mod qdilog;
pub mod seed;
pub mod semifield;
pub mod ysystem;
pub mod zpoly;

pub use error::{Error, Result};
pub use par::Strategy;
pub use polymat::{MatrixPair, YDatum};
pub use seed::{BMat, YSeed};
pub use semifield::{PosRat, RatFun, SemifieldElem, Tropical};
pub use ysystem::QuiverData;
