//! Threshold quantities: `K(m)`, the criterion ranges and their closed-form
//! bounds, `theta(k)` and its companions, and `Phi_k`.

pub mod entropy;
pub mod intervals;
pub mod kofm;
pub mod phi;
pub mod theta;

pub use entropy::{entropy, entropy_bounds, log_series, one_minus_entropy};
pub use intervals::{maximal_intervals, nk_bound, nk_count, per_interval, per_ranges, BandRanges, IntervalReport};
pub use kofm::{big_u, g_value, integer_gap_scan, km, omega_bounds, u_m, GapHit, KmRecord, OmegaCheck};
pub use phi::{phi, phi_bound, proper_scan, PhiReport, ProperScan, ScanOptions, XSet};
pub use theta::{theta1, theta2, theta_family, vartheta, vartheta_ceil, ThetaOptions, ThetaRecord};
