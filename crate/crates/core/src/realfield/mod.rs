//! Certified real arithmetic.
//!
//! Values are balls `mid ± rad` with dyadic midpoints and radii. Midpoints
//! are rounded to the working precision after every operation and the
//! rounding error is added to the radius, so each enclosure contains the
//! exact result of the operation applied to any points of its inputs.

mod ball;
mod dyadic;
mod functions;

pub use ball::{decimal, decimal_ball, parse_decimal, Ball, Precision};
pub use dyadic::{Dyadic, Round};
pub use functions::{ln2, log_certified, plastic_root};
