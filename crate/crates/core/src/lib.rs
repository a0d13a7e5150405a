//! Logarithmic differential operators along free divisors, computed exactly
//! over the rationals.

pub mod complexes;
pub mod corpus;
pub mod error;
pub mod groebner;
pub mod logder;
pub mod logforms;
pub mod logops;
pub mod manifest;
pub mod parse;
pub mod poly;
pub mod weyl;

pub use complexes::{FreeComplex, CompositionFailure};
pub use error::{NotDivisible, VarError};
pub use logder::{Derivation, FrameDocument, SaitoFailure, SaitoFrame};
pub use logforms::{LogConnection, LogForm};
pub use logops::{NotLogarithmic, PbwForm, Rewriter, SymbolChain};
pub use manifest::Manifest;
pub use parse::{parse_operator, parse_polynomial, ParseError};
pub use poly::{Coeff, Monomial, Polynomial, RationalFunction, VarTable};
pub use weyl::{DiffOp, WeylError};
