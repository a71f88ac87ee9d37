//! Equivariant forms on configuration spaces of the disk and Monte Carlo graph weights.

pub mod config;
pub mod forms;
pub mod halfplane;
pub mod mc;
pub mod vanishing;
pub mod weight;

pub use config::{region_volume, sample_config, ConfigPoint};
pub use forms::{graph_form, propagator, zero_mode, GrassCoordForm, Layout, PairForm, Point};
pub use mc::{integrate, integrate_vec, Estimate, McParams, RNG_NAME};
pub use weight::{graph_weight, mc_weight, raw_weight, FormSpec, RawWeight, WeightEstimate};
