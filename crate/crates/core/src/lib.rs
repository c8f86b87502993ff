//! Constructive colorings of tree-graded graph spaces.
//!
//! A [`space::Space`] is a connected graph covered by pieces glued along
//! single cut vertices in a tree pattern. Given certified colorings of the
//! pieces at a scale `r`, [`nagata`] assembles a coloring of the whole space
//! whose monochromatic `r`-components stay bounded by a fixed multiple of the
//! piece bound.

pub mod error;
pub mod forge;
pub mod format;
pub mod metric;
pub mod nagata;
pub mod piece_coloring;
pub mod space;

pub type Color = u32;

pub use error::{ColoringError, ForgeError, GraphError, ParseError, SpaceError};
pub use metric::{ChainMode, ChainPredicate, Graph, Path, Vertex};
pub use space::{GradedSpace, PieceId, Space};
