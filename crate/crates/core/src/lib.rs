//! Shortened and punctured polar codes of arbitrary length.
//!
//! * [`channel`]: binary-input channels, joint distributions, `Z`, `K`, `H`.
//! * [`dist`]: the `-`/`+` operations, special distributions, merging.
//! * [`relations`]: degradation, input permutation and their witnesses.
//! * [`transform`]: the extended transform and the removal patterns.
//! * [`construction`]: distribution evolution, code construction, oracles.
//! * [`codec`]: SC encoder and decoder.
//! * [`harness`]: experiment drivers used by the command-line tool.

pub mod channel;
pub mod codec;
pub mod construction;
pub mod dist;
pub mod error;
pub mod harness;
pub mod random;
pub mod relations;
pub mod transform;

pub use channel::{BmChannel, ChannelSpec, InputDist, JointDist};
pub use construction::{construct_code, CodeSpec, Profile};
pub use dist::{Op, TaggedDist};
pub use error::{Error, Result};
pub use transform::{Mode, Pattern};
