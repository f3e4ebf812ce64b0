pub mod bench;
pub mod data;
pub mod density;
pub mod engine;
pub mod error;
pub mod idw;
pub mod init;
pub mod optim;
pub mod predictor;
pub mod scalar;
pub mod space;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// `f64` instantiations of the generic types.
pub mod double {
    pub type FeatureVector = crate::space::FeatureVector<f64>;
    pub type TargetVector = crate::space::TargetVector<f64>;
    pub type QueryResult = crate::space::QueryResult<f64>;
    pub type Bounds = crate::space::Bounds<f64>;
    pub type ScalingTransform = crate::space::ScalingTransform<f64>;
    pub type SamplingMode = crate::space::SamplingMode<f64>;
    pub type ProblemSpec = crate::space::ProblemSpec<f64>;
    pub type LearnerState = crate::space::LearnerState<f64>;
    pub type Idw = crate::idw::Idw<f64>;
    pub type DensityTable = crate::density::DensityTable<f64>;
    pub type Mlp = crate::predictor::Mlp<f64>;
    pub type Network = crate::predictor::Network<f64>;
    pub type AcquisitionConfig = crate::engine::AcquisitionConfig<f64>;
    pub type RunOutcome = crate::engine::RunOutcome<f64>;
    pub type InitResult = crate::init::InitResult<f64>;
    pub type PsoResult = crate::optim::PsoResult<f64>;
}

pub type FeatureVector = double::FeatureVector;
pub type TargetVector = double::TargetVector;
pub type Bounds = double::Bounds;
pub type ProblemSpec = double::ProblemSpec;
pub type Mlp = double::Mlp;
