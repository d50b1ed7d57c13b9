//! Spectral triples, Cuntz isometries and wavelets on the path space of a
//! finite Bratteli diagram.

pub mod cli;
pub mod equivalence;
pub mod error;
pub mod exact;
pub mod function;
pub mod path_space;
pub mod representation;
pub mod sierpinski;
pub mod spectral;
pub mod wavelets;
pub mod weights;

pub use error::{Error, Result};
