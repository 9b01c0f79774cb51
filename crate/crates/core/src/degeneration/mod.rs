//! Degenerations over K(ε): certificates and their verification, the
//! Plücker-wedge view of two-dimensional flattening images, stabilizer curves
//! of `W_k`, and the constructive certificate `T ⊵ W_k`.

pub mod certificate;
pub mod construct;
pub mod grassmann;
pub mod stabilizer;

pub use certificate::{
    apply_certificate, expand, identity_curves, unit_to_w_certificate, unit_to_w_certificate_over, verify_certificate,
    verify_composed, DegenerationCertificate, Expansion, FailedCondition, Rescaling, Verdict,
};
pub use construct::{construct_w_degeneration, construct_w_degeneration_traced, StabilizerCase, StepAudit};
pub use grassmann::{grassmann_degenerates, pluecker_wedge, WedgePoint};
pub use stabilizer::{stab_scaling_curve, stab_scaling_curve_over, stab_shear, ScalingCurve};
