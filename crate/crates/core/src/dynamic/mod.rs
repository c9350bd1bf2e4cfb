//! Protocols in which parties with bounded registers prepare a shared state
//! by local operations and sequential qubit sending.

mod fuzz;
mod schedule;
mod script;
mod sim;

pub use fuzz::{
    check_last_round_bound, check_last_round_bound_with, fuzz_last_round, random_last_round_script,
    two_party_example, FuzzReport, LastRoundReport, MAX_FUZZ_STEPS,
};
pub use schedule::{derive_graph_script, derive_phires_script, verify_prop3, DerivedScript, Prop3Report};
pub use script::{LocalGate, ProtocolScript, ProtocolStep};
pub use sim::{run_protocol, run_protocol_with, BranchPolicy, ProtocolRun, RegisterMap, TraceEntry};
