pub mod abelian;
pub mod arith;
pub mod cocycle;
pub mod error;
pub mod finite;
pub mod fo;
pub mod psi;
pub mod ring;
pub mod structure;
pub mod tri;
pub mod units;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/rings.md")]
mod book_rings {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cocycles.md")]
mod book_cocycles {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/groups.md")]
mod book_groups {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/structure.md")]
mod book_structure {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/formulas.md")]
mod book_formulas {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
