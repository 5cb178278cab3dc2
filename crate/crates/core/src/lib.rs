//! Multi-agent Kripke models in which agents can be uncertain about which
//! other agents exist.
//!
//! Besides the usual belief modality `B[i]`, formulas can say that agent `i`
//! is certain (`C[i,j]`) or considers it possible (`P[i,j]`) that agent `j`
//! is present. Four update operators announce an agent going offline or
//! coming online, truthfully or as a lie told by one agent to the rest.

pub mod formula;
pub mod frame;
pub mod ids;
pub mod kripke;
pub mod semantics;
pub mod transform;

pub use formula::{formula_symbols, parse, print, Formula, ParseError, Symbols};
pub use frame::{
    check_properties, classify_model, FrameError, FrameProperty, FramePropertyReport, Mode,
};
pub use ids::{AgentId, IdError, PropId, StateId, Tag};
pub use kripke::{Edge, KripkeModel, ModelBuilder, ModelError, ModelParts};
pub use semantics::{holds_at, holds_for_agent, holds_globally, presence_at, EvalContext};
pub use transform::{
    lie_offline, lie_online, update_offline, update_online, UpdateError, UpdateKind, UpdateResult,
    UpdateSpec,
};
