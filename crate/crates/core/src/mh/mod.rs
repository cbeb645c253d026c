//! Mihlin–Hörmander machinery: discrete Sobolev norms of sampled functions,
//! dyadic sup norms, the angle cutoff and fan extension, transform audits and
//! the pointwise audits of the `ν` factors.

pub mod audit;
pub mod fan_ext;
pub mod jet;
pub mod nu;
pub mod sampled;
pub mod sloc;

pub use audit::{builtin_corpus, norm_transform_audit, AuditCase, AuditReport, TransformKind};
pub use fan_ext::{build_fan_multiplier, AngleCutoff, FanMultiplier};
pub use nu::{nu_estimate_audit, NuGrid, NuId};
pub use sampled::{mixed_sobolev_norm, sobolev_norm_1d, Grid1D, SampledFunction1D, SampledFunction2D};
pub use sloc::{mh_sloc_norm, mixed_sloc_norm, sloc_norm_fn, Bump, MixedSlocParams, MixedSlocReport, SlocParams, SlocReport};
