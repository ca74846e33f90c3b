pub mod chars;
pub mod cli;
pub mod error;
pub mod formal_group;
pub mod gm;
pub mod hensel;
pub mod jet;
pub mod padic;
pub mod qexp;
pub mod sharp;

pub use error::{Error, Result};
pub use jet::{JetSeries, Monomial, PhiPoly};
pub use padic::{CtxDescriptor, ExtKind, PadicCtx, PadicNum};
