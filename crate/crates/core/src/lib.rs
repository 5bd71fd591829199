//! Finite-field toolkit for primitive pairs `(α, aα² + bα + c)` with a
//! prescribed trace: integer number theory, F_{q^m} arithmetic, the
//! character-sum and prime-sieve existence criteria, numerical checks of the
//! character machinery, and exhaustive search on small fields.

pub mod cli;
pub mod criteria;
pub mod error;
pub mod gf;
pub mod intnum;
pub mod verify;

pub use error::{Error, Result};
pub use gf::{build_field, FieldCtx, FieldElem};
pub use intnum::{factorize, Factorization};
