//! The base differential field Q(x) with derivation d/dx.

mod parse;
mod partial;
mod poly;
mod ratfunc;

pub(crate) use parse::Cursor;
pub use parse::parse;
pub use partial::{partial_fractions, split_roots, PartialFraction, PoleTerm};
pub use poly::Poly;
pub(crate) use poly::fmt_q;
pub use ratfunc::RatFunc;

use crate::algebra::Differential;

/// `df/dx` in normal form.
pub fn derive(f: &RatFunc) -> RatFunc {
    f.derive()
}
