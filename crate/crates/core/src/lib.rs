//! Spectral clustering of time-evolving graphs.
//!
//! A time-evolving graph is turned into a sequence of random-walk transition
//! matrices and reference densities. Correlating vertex functions across
//! adjacent views gives a block-tridiagonal, row-stochastic matrix `C` whose
//! leading non-temporal eigenvectors embed every vertex copy; k-means on that
//! embedding yields labels that are comparable across views.
//!
//! ```
//! use stgl::benchgen::{gen_planted_partition, BenchmarkSpec};
//! use stgl::pipeline::{run_pipeline, PipelineConfig};
//!
//! let spec = BenchmarkSpec::static_blocks(&[10, 10], 3, 0.9, 0.05, 7);
//! let graph = gen_planted_partition(&spec).unwrap();
//! let out = run_pipeline(&graph, Some(&spec.membership), &PipelineConfig::new(2, 0)).unwrap();
//! assert_eq!(out.result.view(0).len(), 20);
//! ```

pub mod ari;
pub mod benchgen;
pub mod clustering;
pub mod eigen;
pub mod error;
pub mod gyre;
pub mod io;
pub mod pipeline;
pub mod rng;
pub mod sparse;
pub mod spectral;
pub mod supra;
pub mod system;
pub mod teg;
pub mod walk;

pub use error::{Error, Result};
pub use sparse::CsrMatrix;
pub use teg::{OperatorConfig, OperatorSequence, TimeEvolvingGraph};
