//! Semi-tensor-product (STP) logic simulation and SAT sweeping for k-LUT
//! networks.

pub mod cec;
pub mod netlist;
pub mod sat;
pub mod sim;
pub mod sweep;
pub mod stp;
