//! Exact-arithmetic engine for finite-dimensional left-symmetric algebras
//! (LSAs): construction from structure constants, axiom validation,
//! characteristic polynomials, Koszul/graph-extension data, nilpotence
//! classification, and symbolic verification of the Monge-Ampère identity
//! satisfied by exponentials of characteristic polynomials.
//!
//! All algebraic computation is over arbitrary-precision rationals; floating
//! point appears only in the orbit-flow sampler.

pub mod builtins;
pub mod cli_io;
pub mod koszul;
pub mod lsa_core;
pub mod ma_verify;
pub(crate) mod par;
pub mod polyring;
pub mod qlinalg;

pub use lsa_core::Algebra;
pub use polyring::MPoly;
pub use qlinalg::{QMatrix, Rat};
