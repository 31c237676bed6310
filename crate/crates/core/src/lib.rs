//! Border basis schemes of order ideals: construction of their defining ideals,
//! gradings and variable classifications, and re-embeddings into smaller ambient spaces
//! by elimination through substitution.

pub mod polyring;
pub mod orderideal;
pub mod bbscheme;
mod linalg;
pub mod reembed;
