//! Exact algebra on the SL(3,C) character variety of the two-generator free
//! group, in its nine trace coordinates.
//!
//! The coordinate ring is `Q[t(1), t(-1), ..., t(-4)][t(5)] / (t5^2 - P t5 + Q)`.
//! [`ring`] builds `P` and `Q` and normal forms, [`poisson`] holds the pants and
//! torus brackets, [`gluing`] the pullback between them, and [`leaves`] the
//! symplectic-leaf geometry. [`oracle`] evaluates everything on sampled
//! matrices as an independent check.

pub mod d4;
pub mod error;
pub mod gluing;
pub mod leaves;
pub mod linalg;
pub mod oracle;
pub mod par;
pub mod poisson;
pub mod poly;
pub mod ring;
pub mod tol;
pub mod var;

pub use d4::{D4Element, Generator, GroupRingElement};
pub use error::{Error, Result};
pub use par::Exec;
pub use poisson::{bracket, BiVector, Surface};
pub use poly::{Monomial, Point9, Poly, Rational};
pub use ring::{reduce, relation, RingElement};
pub use var::{VarIndex, NVARS};
