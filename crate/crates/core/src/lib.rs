//! Circuit-cocircuit intersections (CCIs) of small matroids.
//!
//! The crate enumerates CCIs, builds CCI-envelopes, computes
//! hyperplane-partitions and runs a certified reduction that turns a
//! size-`k` CCI into a size-`(k-2)` CCI for `4 <= k <= 7`, together with
//! catalog generators and a batch verification driver.

pub mod batch;
pub mod catalog;
pub mod cci;
pub mod certificate;
pub mod elemset;
pub mod envelope;
pub mod field;
pub mod format;
pub mod matroid;
pub mod partition;
pub mod reduction;

pub use certificate::{Certificate, Rule};
pub use elemset::{ElemSet, CAPACITY};
pub use envelope::{build_envelope, Envelope};
pub use field::{Field, Gf};
pub use matroid::{CorankQuery, Matroid, MatroidError, Minor};
pub use partition::{HPartition, Kind};

pub type Gf2 = Gf<2>;
pub type Gf3 = Gf<3>;
pub type Gf5 = Gf<5>;
pub type Gf7 = Gf<7>;
pub type Rational = num_rational::Rational64;
