//! Closed-form evaluation of the network performance metrics: outage
//! probability, network throughput, multi-stream transmission capacity, and
//! the ergodic-rate family with its bounds.

mod capacity;
mod outage;
mod rate;

pub use capacity::{
    tc_feasible_bits, tc_gap, transmission_capacity, transmission_capacity_perfect_csi, TcResult,
};
pub use outage::{
    interference_constant, interference_constant_large_k, network_throughput,
    network_throughput_lb, optimal_density, outage_all, outage_probability, success_probability,
    throughput_ratio_gap, OutageResult,
};
pub use rate::{
    ergodic_rate, rate_bernoulli_bounds, rate_bernoulli_ub_closed, rate_holder_ub,
    rate_holder_ub_closed2, rate_holder_ub_no_noise, rate_jensen_ub, HOLDER_EXPONENT_GRID,
};
