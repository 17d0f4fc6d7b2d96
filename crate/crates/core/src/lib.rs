pub mod code;
pub mod duality;
pub mod error;
pub mod lab;
pub mod linalg;
pub mod quotient;
pub mod ring;
pub mod skew_poly;
pub mod text;

pub use error::{Error, Result};
pub use ring::{Automorphism, AutomorphismPair, Element, Ring, RingSpec};
pub use skew_poly::{mccoy_annihilator, QuasiDegree, SkewPoly, SkewRing};
