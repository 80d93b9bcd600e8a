//! Exact and p-adic arithmetic.

pub mod linalg;
pub mod newton;
pub mod padic;
pub mod poly;
pub mod rat;
pub mod ring;

pub use linalg::Mat;
pub use newton::{hensel_slope_factor, newton_polygon, NewtonPolygon};
pub use padic::{padic_sqrt, PadicApprox};
pub use poly::{char_poly, fredholm_poly, UniPoly};
pub use rat::{padic_val, Rat};
pub use ring::{RatField, Ring, Zpm};
