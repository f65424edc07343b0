//! Chow rings of classifying spaces of the classical groups `GL_n`, `SL_n`,
//! `Sp_n`, `O_n` and `SO_n`: presentations by generators and relations,
//! canonical normal forms, restriction to maximal tori and to elementary
//! abelian 2-subgroups, and degree-wise verification that the relations
//! hold and suffice.

pub mod cli;
pub mod error;
pub mod polyring;
pub mod presentations;
pub mod restrictions;

pub use error::{Error, Result};
