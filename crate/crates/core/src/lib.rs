//! Local versus global maximum-length matchings in the Euclidean plane.

pub mod certificates;
pub mod crossing;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod io;
pub mod matching;
pub mod miner;

pub use error::{Error, Result};
pub use geometry::{Disk, Point, Segment, Tolerance};
pub use io::InstanceFile;
pub use matching::{Matching, Objective, PointSet, RatioReport};
