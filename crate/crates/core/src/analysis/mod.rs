//! Transfer amplitudes, parameter maps, closed-form responses, ensemble
//! averages and file export.

mod ensemble;
mod export;
mod response;
mod sweep;

pub use ensemble::{quadrature_nodes, rf_inhomogeneity_average, Distribution};
pub use export::{
    format_g9, map_to_json, read_curve_csv, read_map_csv, write_curve_csv, write_map_csv, Curve,
};
pub use response::{sinc, xi_cslic, xi_cslic_nominal, xi_slic, xi_slic_nominal, ResponseParams};
pub use sweep::{
    excited_magnetization, half_max_width, linspace, sweep_curve, sweep_map, transfer_amplitude, MapMetadata,
    Probe, TransferMap,
};
