//! Batch dismantling with accumulated normalised connectivity (ANC), and an
//! SIR simulator for immunization studies.

mod dismantle;
mod sir;

pub use dismantle::{anc, anc_of, batch_size, dismantle, naive_connectivity, DismantleTrace};
pub use sir::{
    containment_table, immune_count, immunization_set, seed_group, sir_run, sir_simulate, ContainmentRow,
    ContainmentTable, SirConfig, SirOutcome, SirState,
};
