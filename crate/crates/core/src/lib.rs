//! CRC-aided and multi-CRC-aided polar codes with SC, SCL and
//! reduced-complexity SCL (R-SCL) decoders.
//!
//! ```
//! use polarlab::{channel, crc::CrcSpec, decoder, polar::{Construction, PolarCode}};
//!
//! let crc = CrcSpec::crc16();
//! let code = PolarCode::construct(8, 64 + 16, &Construction::default()).unwrap();
//! let message = vec![1u8; 64];
//! let x = code.encode(&crc.append(&message)).unwrap();
//! let llrs = channel::llr_from_variance(&channel::modulate(&x), 0.5);
//! let out = decoder::scl_decode(&llrs, &code, 8, Some(&crc)).unwrap();
//! assert_eq!(out.message(&code, 16), message);
//! ```

pub mod channel;
pub mod cli;
pub mod crc;
pub mod decoder;
pub mod error;
pub mod multicrc;
pub mod polar;
pub mod sim;

pub use error::{Error, Result};
