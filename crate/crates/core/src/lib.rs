//! Left-invariant Riemannian and (alpha, beta)-Finsler geometry on Lie groups
//! described by structure constants.

pub mod classification;
pub mod config;
pub mod error;
pub mod finsler;
pub mod flag_curvature;
pub mod frames;
pub mod lie_algebra;
pub mod linalg;
pub mod riemannian;
pub mod wolf_scan;

pub use classification::{classify, Classification, Verdict, RESIDUAL_TOL};
pub use error::{Error, Result};
pub use finsler::{canonicalize_flag, AlphaBetaMetric, Family, Flag};
pub use flag_curvature::{compare_engines, CurvatureReport, Engine};
pub use lie_algebra::{catalog, CatalogSpec, FamilyTag, LieAlgebra, StructureEntry};
pub use riemannian::Metric;
pub use wolf_scan::{scan, SignSpectrum};

pub use nalgebra::{DMatrix, DVector};
