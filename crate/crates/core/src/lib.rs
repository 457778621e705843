//! Random embeddings for global optimization (REGO).
//!
//! A function `f: R^D -> R` with effective dimension `de` only varies along
//! a `de`-dimensional subspace. REGO draws a Gaussian `D x d` matrix `A` and
//! minimizes `y -> f(A y + p)` over the box `[-δ, δ]^d`. This crate provides
//! the pieces needed to study how often that reduced problem still contains
//! a global minimizer:
//!
//! * [`problems`]: benchmark functions hidden in `R^D` by a random rotation.
//! * [`embedding`]: embeddings, reduced objectives and success checks.
//! * [`theory`]: χ² laws and the closed-form success bound `R*`.
//! * [`feasibility`]: the minimal infinity-norm LP that decides success exactly.
//! * [`solvers`]: DIRECT, multistart Nelder-Mead and random search.
//! * [`harness`]: reproducible experiments with CSV and JSON output.
//!
//! ```
//! use rego::embedding::{geometric_success, EmbeddingSpec};
//! use rego::problems::{find, generate};
//! use rego::rng::RngStream;
//!
//! let base = find("branin").unwrap().scale_to_unit_box();
//! let problem = generate(&base, 100, &mut RngStream::new(1, 0)).unwrap();
//! let spec = EmbeddingSpec::gaussian(100, 3, 8.0, &mut RngStream::new(1, 1)).unwrap();
//! let _inside = geometric_success(&problem, &spec).unwrap();
//! ```

pub mod embedding;
pub mod feasibility;
pub mod harness;
pub mod linalg;
pub mod problems;
pub mod rng;
pub mod solvers;
pub mod stats;
pub mod theory;
