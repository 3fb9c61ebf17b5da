//! Complex-valued kernel adaptive filtering.
//!
//! The crate provides:
//!
//! * complex and real Gaussian kernels, Gram matrices and RKHS distances
//!   ([`kernel`]),
//! * a finite-difference Wirtinger-calculus toolkit used to check complex
//!   gradients ([`wirtinger`]),
//! * the complex kernel LMS filter with novelty-criterion sparsification and
//!   two linear baselines, normalized complex LMS and its widely-linear form
//!   ([`filters`]),
//! * a nonlinear channel simulator and delay embedding ([`channel`]),
//! * a Monte-Carlo learning-curve harness with CSV/JSON output
//!   ([`experiment`], [`report`]).

pub mod channel;
pub mod error;
pub mod experiment;
pub mod filters;
pub mod kernel;
pub mod report;
pub mod vector;
pub mod wirtinger;

pub use error::{Error, Result};
pub use filters::{
    run_filter, CklmsState, FilterConfig, Nclms, NoveltyConfig, StepRecord, WlNclms,
};
pub use kernel::{Kernel, KernelFamily, KernelSpec, LinearKernel};
pub use num_complex::Complex64;
pub use vector::ComplexVector;
