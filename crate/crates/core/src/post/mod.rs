//! Pressure recovery, error norms, convergence rates and VTK/CSV export.

mod export;
mod fields;
mod norms;
mod rates;

pub use export::{export_csv, export_multiplier_vtk, export_vtk, format_multiplier_vtk, format_vtk};
pub use fields::{div_rt0, div_sigma, eval_rt0, eval_sigma, pressure_at_centroids, recover_pressure, PressureField};
pub use norms::{error_norms, error_norms_with, lq_norm, ErrorReport, ExactSolution, FIELD_NAMES};
pub use rates::{rate, RateRow, RateTable, CSV_HEADER};
