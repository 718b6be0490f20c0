//! Exact verification toolkit for curves over small finite fields: field and
//! polynomial arithmetic, point counting, zeta-function bookkeeping, quadric
//! pencils, covering maps, and an exhaustive plane-sextic search.

pub mod counting;
pub mod cover;
pub mod gf;
pub mod pencil;
pub mod poly;
pub mod registry;
pub mod report;
pub mod search;
pub mod verify;
pub mod zeta;
