//! Entanglement dynamics of a qubit-qutrit state family under depolarizing noise.
//!
//! The crate evolves the family `rho(x)` through local, multilocal, collective and
//! global Kraus channels, measures negativity from the spectrum of the partial
//! transpose, evaluates the published closed-form eigenvalue and negativity
//! expressions, and compares the two.
//!
//! Basis order of the composite 2 x 3 space is `|00>, |01>, |02>, |10>, |11>, |12>`,
//! i.e. `index = 3 * qubit + qutrit`.

pub mod analysis;
pub mod channels;
pub mod cli;
pub mod closedform;
pub mod entanglement;
mod error;
pub mod linalg;
pub mod states;

pub use error::{Error, Result};
