//! Link-level performance analysis of a dual-hop, multi-RIS-assisted UAV
//! relay: outage probability, average symbol error probability, ergodic
//! capacity, a Monte-Carlo oracle for all three, and the optimal transmit
//! power split between hops.

pub mod channel;
pub mod error;
pub mod experiment;
pub mod mcsim;
pub mod metrics;
pub mod powopt;
pub mod quad;
pub mod series;
pub mod snrstats;
pub mod specfun;

pub use channel::{A2gEnvironment, GammaFit, K0Mode, LossConvention, RisSpec, Scene};
pub use error::{Error, Result};
pub use experiment::{ExperimentConfig, SweepResult};
pub use mcsim::{McConfig, McEstimate, McMetrics};
pub use powopt::{ObjectiveConstants, PowerSplit};
pub use metrics::{MetricPoint, Modulation};
pub use series::{SeriesOutcome, SeriesStatus};
pub use snrstats::{A2gLink, G2aLink, LinkBudget, SnrDistribution};
pub use specfun::SeriesControl;
