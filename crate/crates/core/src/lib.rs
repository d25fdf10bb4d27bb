//! Functors from finite combinatorial categories into finitely presented
//! modules, and the invariants measuring how polynomial they are.

pub mod catring;
pub mod cats;
pub mod exactalg;
pub mod funrep;
pub mod invariants;
