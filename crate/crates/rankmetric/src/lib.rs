//! Rank-metric coding toolkit.
//!
//! Encodes Gabidulin-family codes (plain, twisted, and additive-twisted)
//! over configurable extension fields, injects rank errors through two
//! channel models, and decodes one unit past half the minimum rank
//! distance. Brute-force oracles back the fast paths at desk scale, and a
//! simulation harness drives Monte Carlo trials over either a rayon pool
//! (feature `parallel`, on by default) or a plain sequential loop.

pub mod acceptance;
pub mod codes;
pub mod decoders;
pub mod field;
pub mod fp;
pub mod keyeq;
pub mod linalg;
pub mod linpoly;
pub mod models;
pub mod oracle;
pub mod params;
pub mod sim;

pub use codes::{CodeError, CodeFamily, CodeSpec};
pub use field::{Ctx, FieldContext, FieldElement, FieldError};
pub use linpoly::LinearizedPoly;
