//! Exact symbolic engine for the one-parameter contraction families of
//! sl(2) Harish-Chandra modules.
//!
//! The Lie algebra `g_t` is spanned by `E_t = tE`, `F_t = tF`, `H_t = H`, with
//! `[E_t, F_t] = t² H_t`. At `t = 1` it is `sl(2, C)`; at `t = 0` it is the Lie
//! algebra of the Cartan motion group. Every module the engine handles is a
//! weight ladder: one basis vector per index, `H` diagonal, and `E`, `F`
//! moving one rung. Coefficients are rational functions of `t` over the
//! Gaussian rationals, so every identity is checked with zero tolerance.
//!
//! * [`exactnum`]: Gaussian rationals, polynomials and rational functions in `t`.
//! * [`ladder`]: ladder families, generator actions, defects, reachability.
//! * [`families`]: principal, discrete, Rees and minimal-K-type constructors.
//! * [`contraction`]: the `t = 0` endpoint, supports in `s*`, Mackey data.
//! * [`intertwine`]: normalized intertwining operators and their limits.
//! * [`geometry`]: K-orbits on the flag variety and the orbit map to `s*`.

pub mod contraction;
pub mod error;
pub mod exactnum;
pub mod families;
pub mod geometry;
pub mod intertwine;
pub mod ladder;
mod text;

/// Version stamped into every report.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use exactnum::{GaussRational, Scalar, TPoly};
pub use families::{FamilySpec, Parity, Sign};
pub use ladder::{Generator, IndexSet, LadderFamily, ModuleElement, Window};
