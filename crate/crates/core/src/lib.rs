pub mod classifier;
pub mod cli;
pub mod error;
pub mod kinematics;
pub mod poly;
pub mod report;
pub mod singularity;
pub mod topology;
pub mod verify;

pub use error::{Error, Result};

// The guide's snippets run as doctests so the book cannot drift from the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/kinematics.md")]
    pub mod kinematics {}
    #[doc = include_str!("../../../book/src/singularities.md")]
    pub mod singularities {}
    #[doc = include_str!("../../../book/src/topology.md")]
    pub mod topology {}
    #[doc = include_str!("../../../book/src/classification.md")]
    pub mod classification {}
    #[doc = include_str!("../../../book/src/reports.md")]
    pub mod reports {}
    #[doc = include_str!("../../../book/src/verification.md")]
    pub mod verification {}
}
