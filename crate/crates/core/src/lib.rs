pub mod artifact;
pub mod category;
pub mod error;
pub mod group;
pub mod limits;
pub mod orbit;
pub mod presheaf;
pub mod certificate;
pub mod elmendorf_cat;
pub mod elmendorf_pos;
pub mod homology;
pub mod simplicial;
pub mod verify;

pub use error::{Error, Result};
