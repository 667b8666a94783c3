//! Dense n-dimensional tensors with reverse-mode automatic
//! differentiation sized for volumetric networks: 3D convolution and
//! transposed convolution with `same` padding, max pooling, dense
//! layers, and the elementwise/reduction vocabulary between them.
//!
//! Gradients are produced by extending the graph with explicit backward
//! nodes, so gradients are themselves differentiable; this is what the
//! gradient-penalty objective needs (a parameter gradient of an input
//! gradient). Every backward rule emits only operations that have
//! backward rules of their own, except where second-order support is
//! deliberately declined (see [`AdError::Capability`]).
//!
//! Element type is selectable: networks train in `f32`, numerical
//! oracles run in `f64`.

mod adam;
mod checkpoint;
mod element;
mod error;
mod gradcheck;
mod graph;
pub mod kernels;
mod params;
mod tensor;

pub use adam::AdamState;
pub use checkpoint::{read_params_f32, write_params_f32};
pub use element::Element;
pub use error::AdError;
pub use gradcheck::{compare_grads, numeric_gradient, GradCheckReport};
pub use graph::{Graph, NodeId};
pub use params::ParamSet;
pub use tensor::Tensor;
