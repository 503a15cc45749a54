pub mod admissible;
pub mod apex;
pub mod bipartite;
pub mod catalog;
pub mod cyclic;
pub mod error;
pub mod graph;
pub mod io;
pub mod linker;
pub mod oracle;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Block, BlockShape, Design, DownLink, Edge, Graph, Host, ShapeKind, Vertex};
pub use verify::{verify_design, verify_downlink, VerificationReport, Violation};
pub use catalog::base_design;
pub use linker::SpectrumWitness;
pub use spectrum::{cmd_spectrum, Membership, SpectrumReport};
