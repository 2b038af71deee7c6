//! Bitwise CRC over GF(2): MSB first, zero register, no reflection, no output XOR.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A CRC generator polynomial of degree `r`.
///
/// `coefficients` run from `x^r` down to `x^0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CrcSpec {
    coefficients: Vec<u8>,
}

impl CrcSpec {
    /// `x^2 + x + 1`
    pub fn crc2() -> Self {
        Self::from_exponents(&[2, 1, 0]).expect("valid polynomial")
    }

    /// `x^10 + x^9 + x^8 + x^7 + x^6 + x^4 + x^3 + 1`
    pub fn crc10() -> Self {
        Self::from_exponents(&[10, 9, 8, 7, 6, 4, 3, 0]).expect("valid polynomial")
    }

    /// `x^16 + x^12 + x^5 + 1`
    pub fn crc16() -> Self {
        Self::from_exponents(&[16, 12, 5, 0]).expect("valid polynomial")
    }

    /// Built-in polynomial of the given degree, if there is one.
    pub fn builtin(degree: usize) -> Option<Self> {
        match degree {
            2 => Some(Self::crc2()),
            10 => Some(Self::crc10()),
            16 => Some(Self::crc16()),
            _ => None,
        }
    }

    pub fn new(coefficients: Vec<u8>) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::param("CRC polynomial must have degree at least 1"));
        }
        if coefficients.iter().any(|&c| c > 1) {
            return Err(Error::param("CRC coefficients must be bits"));
        }
        if coefficients[0] != 1 || *coefficients.last().unwrap() != 1 {
            return Err(Error::param(
                "CRC polynomial must have leading and constant coefficients equal to 1",
            ));
        }
        Ok(Self { coefficients })
    }

    pub fn from_exponents(exponents: &[usize]) -> Result<Self> {
        let degree = *exponents.iter().max().ok_or_else(|| Error::param("empty polynomial"))?;
        let mut coefficients = vec![0u8; degree + 1];
        for &e in exponents {
            if coefficients[degree - e] == 1 {
                return Err(Error::param(format!("repeated term x^{e}")));
            }
            coefficients[degree - e] = 1;
        }
        Self::new(coefficients)
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[u8] {
        &self.coefficients
    }

    /// Remainder of `message · x^r` modulo the generator.
    pub fn remainder(&self, message: &[u8]) -> Vec<u8> {
        let r = self.degree();
        let mut reg = vec![0u8; r];
        for &bit in message {
            let feedback = (bit & 1) ^ reg[0];
            reg.rotate_left(1);
            reg[r - 1] = 0;
            if feedback == 1 {
                for (slot, &g) in reg.iter_mut().zip(&self.coefficients[1..]) {
                    *slot ^= g;
                }
            }
        }
        reg
    }

    pub fn append(&self, message: &[u8]) -> Vec<u8> {
        let mut out = message.to_vec();
        out.extend(self.remainder(message));
        out
    }

    /// Checks the trailing `r` bits against the remainder of the rest.
    pub fn check(&self, codeword: &[u8]) -> Result<bool> {
        let r = self.degree();
        if codeword.len() <= r {
            return Err(Error::param(format!(
                "codeword of length {} is too short for a degree-{r} CRC",
                codeword.len()
            )));
        }
        Ok(self.check_unchecked(codeword))
    }

    pub(crate) fn check_unchecked(&self, codeword: &[u8]) -> bool {
        let split = codeword.len() - self.degree();
        self.remainder(&codeword[..split]) == codeword[split..]
    }
}

pub fn crc_remainder(message: &[u8], spec: &CrcSpec) -> Result<Vec<u8>> {
    if message.is_empty() {
        return Err(Error::param("CRC message must be non-empty"));
    }
    Ok(spec.remainder(message))
}

pub fn crc_append(message: &[u8], spec: &CrcSpec) -> Result<Vec<u8>> {
    if message.is_empty() {
        return Err(Error::param("CRC message must be non-empty"));
    }
    Ok(spec.append(message))
}

pub fn crc_check(codeword: &[u8], spec: &CrcSpec) -> Result<bool> {
    spec.check(codeword)
}

impl fmt::Display for CrcSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.degree();
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 1)
            .map(|(idx, _)| match r - idx {
                0 => "1".to_string(),
                1 => "x".to_string(),
                e => format!("x^{e}"),
            })
            .collect();
        f.write_str(&terms.join("+"))
    }
}

impl FromStr for CrcSpec {
    type Err = Error;

    /// Accepts `x^16+x^12+x^5+1` style polynomials or the names `CRC-2`,
    /// `CRC-10`, `CRC-16`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let upper = compact.to_ascii_uppercase();
        if let Some(deg) = upper.strip_prefix("CRC-").or_else(|| upper.strip_prefix("CRC")) {
            let degree: usize = deg.parse().map_err(|_| Error::param(format!("bad CRC name `{s}`")))?;
            return Self::builtin(degree).ok_or_else(|| Error::param(format!("no built-in CRC of degree {degree}")));
        }
        let mut exponents = Vec::new();
        for term in compact.split('+') {
            let e = match term {
                "1" => 0,
                "x" | "X" => 1,
                t => t
                    .strip_prefix("x^")
                    .or_else(|| t.strip_prefix("X^"))
                    .and_then(|e| e.parse::<usize>().ok())
                    .ok_or_else(|| Error::param(format!("bad polynomial term `{t}` in `{s}`")))?,
            };
            exponents.push(e);
        }
        Self::from_exponents(&exponents)
    }
}

impl Serialize for CrcSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CrcSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
