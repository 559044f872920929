//! Boolean Fourier analysis on `{-1,1}^n`, reconstruction of degree-d
//! polynomial threshold functions from their degree-d Chow parameters, and
//! desk-scale simulations of restricted-focus-of-attention and nasty-noise
//! learning.

pub mod cube;
pub mod error;
pub mod lab;
pub mod learn;
pub mod oracles;
pub mod poly;
pub mod reconstruct;
pub mod seed;

pub use error::{Error, Result};
