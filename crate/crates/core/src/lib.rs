//! Discrete special affine Fourier transform toolkit.

pub mod aconv;
pub mod bench;
pub mod dft;
pub mod engine;
pub mod error;
pub mod families;
pub mod grid;
pub mod io;
pub mod multipliers;
pub mod ops;
pub mod params;
pub mod plotdata;
pub mod timefreq;
pub mod verify;

pub use error::{Result, SaftError};
pub use grid::{Grid, Mode, Signal, Spectrum};
pub use params::{SaftParams, SpecialKind, WeightSpec};

/// A maximum deviation together with the magnitude it is measured against.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Deviation {
    pub abs: f64,
    pub scale: f64,
}

impl Deviation {
    pub fn new(abs: f64, scale: f64) -> Self {
        Deviation { abs, scale }
    }

    /// `abs / scale`, or `abs` when the scale is zero.
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.abs / self.scale
        } else {
            self.abs
        }
    }
}
