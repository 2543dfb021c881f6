//! Kauffman bracket, Khovanov homology and Lee homology of link diagrams,
//! computed both from the cube of resolutions and from the expansion of a
//! diagram into R1-trivial pieces indexed by spanning trees.

pub mod bracket;
pub mod corpus;
pub mod diagram;
pub mod error;
pub mod expansion;
pub mod homalg;
pub mod khovanov;
pub mod laurent;
pub mod lee;

pub use error::{ComplexError, DiagramError, Error, ParseError, Result};
