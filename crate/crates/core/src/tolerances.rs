//! Pinned numerical tolerances and schedules.

/// Relative error of the first-form leading coefficient at the largest `n`.
pub const FIRST_FORM_TOLERANCE: f64 = 0.02;
/// Relative error of the leading term of the second form at the largest `n`.
pub const SECOND_FORM_LEADING_TOLERANCE: f64 = 0.02;
/// Relative error of the extrapolated second-form sub-leading coefficient.
pub const SECOND_FORM_TOLERANCE: f64 = 0.05;
/// Relative error of the measured Stirling correction rate.
pub const STIRLING_RATE_TOLERANCE: f64 = 0.05;
/// One-dimensional quadrature against closed forms.
pub const QUADRATURE_1D: f64 = 1e-9;
/// Two-dimensional quadrature against closed forms.
pub const QUADRATURE_2D: f64 = 1e-8;
/// Relative residual of the stratum identity.
pub const STARSTAR_RELATIVE: f64 = 1e-20;

pub const ASYMPTOTIC_SCHEDULE: [u64; 3] = [100, 1_000, 10_000];
pub const STIRLING_SCHEDULE: [u64; 3] = [10, 100, 1_000];

pub const CERTIFIED_PRECISION_BITS: usize = 128;
pub const STARSTAR_PRECISION_BITS: usize = 256;
