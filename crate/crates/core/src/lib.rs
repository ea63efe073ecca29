//! Numerical evaluation of the two-variable extended Hurwitz-Lerch zeta function
//!
//! ```text
//!   Φ_{μ,η,η′,δ,δ′;ν,ξ,ξ′}(z,t,s,a) =
//!     Σ_{k,l≥0} (μ)_{k+l}(η)_k(η′)_l(δ)_k(δ′)_l / ((ν)_{k+l}(ξ)_k(ξ′)_l k! l!) · z^k t^l / (k+l+a)^s
//! ```
//!
//! together with the hypergeometric functions it is built from. Values can be
//! computed several independent ways (shell-summed double series, the explicit
//! single-index series, Mellin-type and beta-kernel quadratures), which is what
//! the identity checks in the CLI's `verify` command exercise.
//!
//! - [`special`]: Pochhammer symbols, log-gamma, principal-branch powers.
//! - [`hypfun`]: `pFq`, Appell `F1`, Humbert `Φ1`–`Φ3`, `M4`.
//! - [`zeta`]: series representations, limiting forms, reductions, the shift
//!   summation formula.
//! - [`quad`]: integral representations.
//! - [`oracle`]: brute-force double-double reference sums with tail bounds.

pub mod error;
pub mod hypfun;
pub mod oracle;
pub mod quad;
mod series;
pub mod special;
pub mod tanh_sinh;
pub mod types;
pub mod zeta;

pub use error::{HlzError, Result};
pub use num_complex::Complex64;
pub use types::{EvalPoint, EvalResult, Method, ParameterSet, QuadConfig, SeriesConfig};
pub use zeta::{LimitVariant, ReductionTag};
