//! Discrete Schrödinger operators on weighted graphs: forms and the ground
//! state representation, resolvent-built positive super-solutions, explicit
//! Harnack constants, and Shnol-type criteria for spectral membership.
//!
//! A graph is `(V, b, c, m)`: symmetric edge weights `b`, a non-negative
//! potential `c` and a positive measure `m`. The formal operator is
//!
//! ```text
//! (L w)(x) = (1/m(x)) [ sum_y b(x,y) (w(x) - w(y)) + c(x) w(x) ].
//! ```

pub mod error;
pub mod fixtures;
pub mod forms;
pub mod graph;
pub mod harnack;
pub mod linalg;
pub mod rng;
pub mod shnol;
pub mod spectral;

pub use error::{Error, GraphError, Result};
pub use forms::FormContext;
pub use graph::{GraphFunction, VertexSubset, WeightedGraph};
