//! Desk-scale laboratory for list-decodable codes and the individual
//! codewords they correspond to under a fixed, total description system.
//!
//! * [`hamming`]: words, distance, balls and the canonical ball order.
//! * [`codes`]: list-decoding profiles, greedy and exact code search.
//! * [`descsys`]: the description system and exact conditional complexity.
//! * [`codewords`]: codeword certificates and the four bound checks.
//!
//! Data-parallel loops run on rayon with the default `parallel` feature and
//! fall back to sequential iteration without it; results are identical.

pub mod codes;
pub mod codewords;
pub mod descsys;
pub mod error;
pub mod hamming;
mod par;

pub use codes::{Code, CodeParams, SearchMethod};
pub use descsys::{ComplexityResult, DescriptionSystem, Level, Program, SystemConfig, VERSION_TAG};
pub use error::{Error, Result};
pub use hamming::{BallSpec, Word};
