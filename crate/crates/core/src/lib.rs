//! Classical simulation of entanglement routing in continuous-variable
//! Gaussian graph-state networks.
//!
//! Two providers share a cluster state built from equally squeezed vacua and
//! a passive interferometer determined by a graph. Each provider may only
//! apply passive (linear-optical) unitaries to its own modes. The crate
//! provides:
//!
//! * [`netgen`]: deterministic and complex-network topologies and their
//!   bipartition between providers,
//! * [`gaussian`]: covariance matrices, symplectic spectra, Williamson and
//!   Bloch-Messiah decompositions,
//! * [`unitaries`]: Gell-Mann parametrization of provider-local unitaries,
//! * [`optimizer`]: a CMA evolution strategy searching for routing unitaries,
//! * [`criteria`]: spectral no-go criteria, the constructive route and
//!   ensemble statistics,
//! * [`io`]: the file formats used by the command-line tool.
//!
//! Conventions: quadratures are ordered `(Q1..Qn, P1..Pn)` and the vacuum
//! variance is 1.

pub mod criteria;
pub mod error;
pub mod gaussian;
pub mod io;
mod linalg;
pub mod netgen;
pub mod optimizer;
pub mod seed;
pub mod unitaries;

pub use error::{Error, Result};
