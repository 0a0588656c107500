//! Certified replay of the classification of Perrin numbers that are
//! concatenations of two distinct repdigits.
//!
//! The crate reproduces each computational step of the argument:
//!
//! - exact Perrin terms and numerically certified Binet/growth checks
//!   ([`sequences`]),
//! - the two-repdigit encoding ([`repdigits`]),
//! - ball arithmetic ([`realfield`]) and certified continued fractions
//!   ([`contfrac`]),
//! - linear-forms-in-logarithms bounds ([`baker`]) and their reduction
//!   ([`reduction`]),
//! - the exhaustive low-range search ([`search`]) and the end-to-end
//!   certificate ([`pipeline`]).
//!
//! ```
//! use perrin_repdigits::search::brute_search;
//!
//! let values: Vec<String> = brute_search(0, 30)
//!     .iter()
//!     .map(|r| r.value.to_string())
//!     .collect();
//! assert_eq!(values, ["10", "12", "17", "29", "39", "51", "68", "90", "119", "277", "644"]);
//! ```

pub mod baker;
pub mod contfrac;
pub mod error;
pub mod exec;
pub mod pipeline;
pub mod realfield;
pub mod reduction;
pub mod repdigits;
pub mod search;
pub mod sequences;

pub use error::{Error, Result};
pub use realfield::{Ball, Precision};
