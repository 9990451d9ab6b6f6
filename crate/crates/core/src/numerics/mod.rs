//! Radial grids, quadrature, Coulomb and Riesz energies and the special
//! constants used by the bounds.

mod coulomb;
mod density;
mod fourier;
mod grid;
mod kernels;
mod optimize;
pub mod quad;
mod riesz;
pub mod special;

pub use coulomb::{coulomb_energy, coulomb_potential, RadialPotential};
pub use density::{gaussian_value, RadialDensity};
pub(crate) use fourier::gaussian_smoothed_with;
pub use fourier::{coulomb_energy_fourier, gaussian_smoothed, radial_fourier, Spectrum};
pub use grid::{GridKind, RadialGrid};
pub use kernels::{
    i_cutoff, nelson_self_energy, nelson_self_energy_with, smeared_kernel, NelsonPrefactor,
};
pub use optimize::golden_section;
pub use riesz::{
    hls_check, hls_checks, riesz_energy, riesz_real_space, riesz_real_space_many, shell_kernel,
    HlsCheck, RieszEvaluator,
};
pub use special::SpecialConstants;
