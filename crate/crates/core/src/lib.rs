//! Certified evaluation of Bessel cross products for the clamped-disk
//! spectrum: ball arithmetic, exact coefficient recursions, refutation
//! certificates, and zero localization.

pub mod algebra;
pub mod ball;
pub mod bessel;
pub mod coeffs;
pub mod elim;
pub mod spectrum;
pub mod verify;
