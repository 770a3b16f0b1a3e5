//! Built-in problems: a manufactured solution for convergence studies and the
//! reverse-osmosis channel.

pub mod channel;
pub mod manufactured;

pub use channel::{
    channel_data, channel_mesh, channel_problem, inlet_profile, polarization, ro_params, Polarization, CHANNEL_HEIGHT,
    CHANNEL_LENGTH, INLET_PEAK,
};
pub use manufactured::{exact_solution, manufactured_data, manufactured_mesh, manufactured_params, manufactured_problem};
