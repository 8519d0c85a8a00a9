//! Numerical core for studying beam-splitter-generated entanglement from
//! single-mode nonclassical optical states.
//!
//! The library constructs number states, squeezed vacua, squeezed number
//! states (SNS) and photon-added squeezed vacuum states (PASVS) in a
//! truncated Fock basis, propagates them through a 50:50 beam splitter
//! against vacuum and measures the output entanglement, and evaluates
//! three single-mode nonclassicality measures: the nonclassical depth via
//! the η-convoluted R(z,η) distribution, Wigner negativity, and the
//! Hilbert-Schmidt distance to the nearest coherent state. Husimi Q
//! contour grids complete the phase-space picture.
//!
//! Every closed form ships next to an independent numeric route (SVD
//! Schmidt spectra, a displaced-parity Wigner oracle, convolution
//! identities, multi-start optimizers); the selftest machinery in the CLI
//! runs the two against each other.

pub mod beam_splitter;
pub mod error;
pub mod fock;
pub mod hs_distance;
pub mod measure;
pub mod optim;
pub mod phase_space;
pub mod quad;
pub mod special;

pub use error::{Error, Result};
pub use fock::{
    apply_creation, number_state, pasvs, pasvs_norm_constant, sns, squeezed_vacuum, CutoffPolicy,
    Family, FockState, Quadrature, StateSpec, MAX_CUTOFF,
};
pub use measure::{Convergence, MeasureResult, Method};

pub use beam_splitter::{
    ebs, ebs_number_closed, ebs_svs_closed, entanglement_entropy, split_with_vacuum,
    EntanglementResult, TwoModeAmplitudes,
};
pub use hs_distance::{
    hs_distance_number_closed, hs_distance_numeric, hs_distance_pasvs_closed,
    hs_distance_pasvs_printed, hs_distance_sns, hs_distance_sns_printed, hs_distance_svs_closed,
    HsOptions, OptimizerReport,
};
pub use phase_space::{
    gaussian_depth_boundary, negativity_of, nonclassical_depth, q_contour_grid, q_function,
    r_function_pasvs, r_function_sns, sample_grid, wigner_negativity, wigner_numeric,
    wigner_pasvs_closed, wigner_pasvs_printed, wigner_sns_closed, DepthSearch, FieldSample,
    PhaseGrid, RFunction,
};
pub use quad::{integrate_plane, PolarQuad, QuadResult};
