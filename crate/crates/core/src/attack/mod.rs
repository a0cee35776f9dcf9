//! Desk-scale attacks: GF(2) elimination, preimage filtering, full state
//! recovery of LFSR filter generators and the sampling-window recovery of
//! NFSR and hybrid generators.

mod filtered;
mod gf2;
mod gfsga;
mod keystream_file;
mod search;
mod window;

pub use filtered::filtered_preimages;
pub use gf2::{gf2_solve, Echelon, Gf2LinearSystem, Gf2Solution, Insert};
pub use gfsga::{candidate_tree_size, gfsga_recover, AttackOptions, AttackResult};
pub use keystream_file::{
    decode_keystream, encode_keystream, read_keystream, write_keystream, KeystreamFile,
};
pub use window::{nfsr_window_recover, window_analysis, window_groups, WindowRecovery};
