//! Named constructors for the concrete objects: the family over H, U, E and the
//! quantum sl₂ family.

pub mod corollary;
pub mod forms;
pub mod registry;
pub mod section5;
pub mod semidirect;
pub mod unrolled;
