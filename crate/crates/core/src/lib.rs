//! Exact symbolic core for E-manifold calculus: singular frames, E-forms,
//! multivectors, residue towers, graded cohomology and numerics.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod blade;
pub mod cohomology;
pub mod ctower;
pub mod eframe;
pub mod eforms;
pub mod error;
pub mod linalg;
pub mod multivec;
pub mod numerics;
pub mod parse;
pub mod poly;
pub mod ring;
pub mod singfunc;

pub use error::{Error, Result};
pub use parse::parse_poly;
pub use poly::{int, rat, Poly, Vars};
pub use singfunc::SingFunc;
