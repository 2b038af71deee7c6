//! Multi-CRC-aided polar codes.
//!
//! The `2^n` bit channels are cut into `M = 2^s` consecutive sub-blocks of
//! `2^(n-s)` channels. Sub-block `j` carries message bits `a_j` followed by
//! `r_j` CRC bits. The first `M - 1` CRCs are local (over `a_j` only); the
//! last one is global (over the whole message). The decoder prunes the list
//! to locally CRC-passing paths at the end of every sub-block but the last.

use serde::{Deserialize, Serialize};

use crate::crc::CrcSpec;
use crate::decoder::{run_list_decoder, Accept, DecodeStats, DecoderOptions, LVector, LevelCheck};
use crate::error::{Error, Result};
use crate::polar::PolarCode;

#[derive(Debug, Clone, PartialEq)]
pub struct MultiCrcLayout {
    n: usize,
    s: usize,
    r_vec: Vec<usize>,
    crcs: Vec<Option<CrcSpec>>,
    blocks: Vec<Vec<usize>>,
    k_vec: Vec<usize>,
}

/// Serialized form: `{ "s": 2, "r_vec": [2,2,2,10], "crc_polynomials": [...] }`.
///
/// `crc_polynomials` may be omitted to use the built-in polynomial of each
/// degree; entries for zero-length CRCs are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutSpec {
    pub s: usize,
    pub r_vec: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crc_polynomials: Option<Vec<String>>,
}

impl LayoutSpec {
    pub fn build(&self, code: &PolarCode) -> Result<MultiCrcLayout> {
        let crcs = match &self.crc_polynomials {
            None => builtin_crcs(&self.r_vec)?,
            Some(polys) => {
                if polys.len() != self.r_vec.len() {
                    return Err(Error::Config(format!(
                        "{} CRC polynomials given for {} sub-blocks",
                        polys.len(),
                        self.r_vec.len()
                    )));
                }
                polys
                    .iter()
                    .zip(&self.r_vec)
                    .map(|(p, &r)| {
                        if r == 0 {
                            return Ok(None);
                        }
                        let spec: CrcSpec = p.parse()?;
                        if spec.degree() != r {
                            return Err(Error::Config(format!(
                                "polynomial `{p}` has degree {} but r = {r}",
                                spec.degree()
                            )));
                        }
                        Ok(Some(spec))
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        MultiCrcLayout::with_crcs(code, self.s, crcs)
    }

    /// Total CRC bits `r = Σ r_j`.
    pub fn total_crc_bits(&self) -> usize {
        self.r_vec.iter().sum()
    }
}

fn builtin_crcs(r_vec: &[usize]) -> Result<Vec<Option<CrcSpec>>> {
    r_vec
        .iter()
        .map(|&r| match r {
            0 => Ok(None),
            r => CrcSpec::builtin(r)
                .map(Some)
                .ok_or_else(|| Error::param(format!("no built-in CRC of degree {r}"))),
        })
        .collect()
}

/// Partitions the unfrozen set of `code` into `2^s` sub-blocks with CRC
/// lengths `r_vec`, using the built-in polynomial of each degree.
pub fn build_layout(code: &PolarCode, s: usize, r_vec: &[usize]) -> Result<MultiCrcLayout> {
    MultiCrcLayout::with_crcs(code, s, builtin_crcs(r_vec)?)
}

impl MultiCrcLayout {
    /// `crcs[j]` is `None` for a sub-block without CRC bits.
    pub fn with_crcs(code: &PolarCode, s: usize, crcs: Vec<Option<CrcSpec>>) -> Result<Self> {
        let n = code.exponent();
        if s == 0 || s > n {
            return Err(Error::param(format!("sub-block exponent s = {s} not in 1..={n}")));
        }
        let m = 1usize << s;
        if crcs.len() != m {
            return Err(Error::param(format!(
                "{} CRC lengths given for {m} sub-blocks",
                crcs.len()
            )));
        }
        let width = 1usize << (n - s);
        let mut blocks = vec![Vec::new(); m];
        for &i in code.unfrozen() {
            blocks[i / width].push(i);
        }
        let r_vec: Vec<usize> = crcs.iter().map(|c| c.as_ref().map_or(0, CrcSpec::degree)).collect();
        let mut k_vec = Vec::with_capacity(m);
        for (j, (block, &r)) in blocks.iter().zip(&r_vec).enumerate() {
            if block.len() < r {
                return Err(Error::Layout {
                    block: j,
                    available: block.len(),
                    required: r,
                });
            }
            k_vec.push(block.len() - r);
        }
        Ok(Self {
            n,
            s,
            r_vec,
            crcs,
            blocks,
            k_vec,
        })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn sub_blocks(&self) -> usize {
        1 << self.s
    }

    /// Number of bit channels per sub-block, `2^(n-s)`.
    pub fn block_width(&self) -> usize {
        1 << (self.n - self.s)
    }

    pub fn r_vec(&self) -> &[usize] {
        &self.r_vec
    }

    pub fn k_vec(&self) -> &[usize] {
        &self.k_vec
    }

    /// `A_j`.
    pub fn block_indices(&self, j: usize) -> &[usize] {
        &self.blocks[j]
    }

    pub fn crc(&self, j: usize) -> Option<&CrcSpec> {
        self.crcs[j].as_ref()
    }

    pub fn message_len(&self) -> usize {
        self.k_vec.iter().sum()
    }

    pub fn total_crc_bits(&self) -> usize {
        self.r_vec.iter().sum()
    }

    /// Decoding level at which sub-block `j` is complete.
    pub fn block_end_level(&self, j: usize) -> usize {
        (j + 1) * self.block_width() - 1
    }

    /// Concatenated `a_0 ∥ ... ∥ a_(M-1)` read from decisions `u`.
    pub fn extract_message(&self, u: &[u8]) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.message_len());
        for (block, &k) in self.blocks.iter().zip(&self.k_vec) {
            out.extend(block[..k].iter().map(|&i| u[i]));
        }
        out
    }

    fn local_check_passes(&self, j: usize, u: &[u8]) -> bool {
        match &self.crcs[j] {
            None => true,
            Some(crc) => {
                let payload: Vec<u8> = self.blocks[j].iter().map(|&i| u[i]).collect();
                crc.check_unchecked(&payload)
            }
        }
    }

    fn global_check_passes(&self, u: &[u8]) -> bool {
        let last = self.sub_blocks() - 1;
        match &self.crcs[last] {
            None => true,
            Some(crc) => {
                let k = self.k_vec[last];
                let parity: Vec<u8> = self.blocks[last][k..].iter().map(|&i| u[i]).collect();
                crc.remainder(&self.extract_message(u)) == parity
            }
        }
    }

    fn check_code(&self, code: &PolarCode) -> Result<()> {
        let same = code.exponent() == self.n
            && self
                .blocks
                .iter()
                .flatten()
                .copied()
                .eq(code.unfrozen().iter().copied());
        if !same {
            return Err(Error::param("layout was built for a different code"));
        }
        Ok(())
    }
}

/// Builds `u` from a message: `ā = [a_0, c_0, ..., a_(M-1), c_(M-1)]` on the
/// unfrozen positions, zeros elsewhere. Apply `kron_encode` for the codeword.
pub fn multicrc_encode(message: &[u8], layout: &MultiCrcLayout, code: &PolarCode) -> Result<Vec<u8>> {
    layout.check_code(code)?;
    if message.len() != layout.message_len() {
        return Err(Error::dimension(layout.message_len(), message.len()));
    }
    let last = layout.sub_blocks() - 1;
    let mut encoded = Vec::with_capacity(code.dimension());
    let mut offset = 0;
    for (j, &k) in layout.k_vec.iter().enumerate() {
        let a_j = &message[offset..offset + k];
        encoded.extend_from_slice(a_j);
        if let Some(crc) = &layout.crcs[j] {
            if j == last {
                encoded.extend(crc.remainder(message));
            } else {
                encoded.extend(crc.remainder(a_j));
            }
        }
        offset += k;
    }
    code.map_payload(&encoded)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiCrcDecoding {
    pub message: Vec<u8>,
    /// No final candidate passed the global CRC.
    pub detected_error: bool,
    /// Some local check rejected every candidate and the list was kept unfiltered.
    pub local_fallback: bool,
    pub decisions: Vec<u8>,
    pub stats: DecodeStats,
}

/// R-SCL decoding with local CRC pruning at the end of each sub-block and
/// global CRC selection at the last level.
pub fn multicrc_rscl_decode(
    llrs: &[f64],
    code: &PolarCode,
    layout: &MultiCrcLayout,
    lvec: &LVector,
) -> Result<MultiCrcDecoding> {
    multicrc_rscl_decode_with(llrs, code, layout, lvec, &DecoderOptions::default())
}

pub fn multicrc_rscl_decode_with(
    llrs: &[f64],
    code: &PolarCode,
    layout: &MultiCrcLayout,
    lvec: &LVector,
    opts: &DecoderOptions,
) -> Result<MultiCrcDecoding> {
    layout.check_code(code)?;
    let last = layout.sub_blocks() - 1;
    type Check<'a> = Box<dyn Fn(&[u8]) -> bool + 'a>;
    let locals: Vec<Check<'_>> = (0..last)
        .map(|j| Box::new(move |u: &[u8]| layout.local_check_passes(j, u)) as Check<'_>)
        .collect();
    let checks: Vec<LevelCheck<'_>> = locals
        .iter()
        .enumerate()
        .filter(|(j, _)| layout.crcs[*j].is_some())
        .map(|(j, f)| LevelCheck {
            level: layout.block_end_level(j),
            accept: f.as_ref(),
        })
        .collect();
    let global = |u: &[u8]| layout.global_check_passes(u);
    let final_accept: Option<Accept<'_>> = layout.crcs[last].as_ref().map(|_| &global as _);
    let out = run_list_decoder(llrs, code, lvec, opts, &checks, final_accept)?;
    let decisions = out.paths[out.selected].decisions.clone();
    Ok(MultiCrcDecoding {
        message: layout.extract_message(&decisions),
        detected_error: out.detected_error,
        local_fallback: out.check_fallback,
        decisions,
        stats: out.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::modulate;
    use crate::decoder::rscl_decode;
    use crate::polar::{kron_encode, lowest_set_bit_index, Construction};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Long division on integers, independent of CrcSpec::remainder.
    fn oracle_crc(msg: &[u8], gen: u64, r: usize) -> Vec<u8> {
        let mut d: u64 = msg.iter().fold(0, |a, &b| (a << 1) | b as u64) << r;
        for pos in (r..msg.len() + r).rev() {
            if (d >> pos) & 1 == 1 {
                d ^= gen << (pos - r);
            }
        }
        (0..r).rev().map(|j| ((d >> j) & 1) as u8).collect()
    }

    fn noiseless(x: &[u8]) -> Vec<f64> {
        modulate(x).iter().map(|s| 30.0 * s).collect()
    }

    #[test]
    fn degenerate_layout() {
        let code = PolarCode::construct(5, 12, &Construction::default()).unwrap();
        let layout = build_layout(&code, 1, &[0, 0]).unwrap();
        assert_eq!(layout.k_vec()[0], layout.block_indices(0).len());
        assert_eq!(layout.message_len(), 12);
    }

    #[test]
    fn full_size_layout() {
        let code = PolarCode::construct(11, 1024 + 16, &Construction::default()).unwrap();
        let layout = build_layout(&code, 2, &[2, 2, 2, 10]).unwrap();
        assert_eq!(layout.message_len(), 1024);
        assert_eq!(layout.total_crc_bits(), 16);
        for j in 0..4 {
            assert!(layout
                .block_indices(j)
                .iter()
                .all(|&i| i >= j * 512 && i < (j + 1) * 512));
        }
    }

    #[test]
    fn block_without_room_for_crc() {
        let code = PolarCode::new(3, vec![6, 7]).unwrap();
        match build_layout(&code, 1, &[2, 0]) {
            Err(Error::Layout {
                block,
                available,
                required,
            }) => {
                assert_eq!((block, available, required), (0, 0, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(build_layout(&code, 1, &[2]).is_err());
        assert!(build_layout(&code, 4, &[0; 16]).is_err());
        assert!(build_layout(&code, 1, &[3, 0]).is_err());
    }

    #[test]
    fn encode_two_blocks_with_crc2() {
        // blocks of width 4: A_0 = {1, 2, 3}, A_1 = {5, 6, 7}
        let code = PolarCode::new(3, vec![1, 2, 3, 5, 6, 7]).unwrap();
        let layout = build_layout(&code, 1, &[2, 2]).unwrap();
        assert_eq!(layout.k_vec(), &[1, 1]);
        let u = multicrc_encode(&[1, 0], &layout, &code).unwrap();
        let gen = 0b111;
        let c0 = oracle_crc(&[1], gen, 2);
        let c1 = oracle_crc(&[1, 0], gen, 2);
        let mut abar = vec![1];
        abar.extend(&c0);
        abar.push(0);
        abar.extend(&c1);
        assert_eq!(abar, vec![1, 1, 1, 0, 0, 1]);
        assert_eq!(code.extract_payload(&u), abar);
        assert_eq!(u[0], 0);
        assert_eq!(u[4], 0);
    }

    #[test]
    fn zero_message_encodes_to_zero() {
        let code = PolarCode::construct(6, 40, &Construction::default()).unwrap();
        let layout = build_layout(&code, 2, &[2, 2, 2, 10]).unwrap();
        let u = multicrc_encode(&vec![0; layout.message_len()], &layout, &code).unwrap();
        assert!(u.iter().all(|&b| b == 0));
        assert!(multicrc_encode(&[0; 3], &layout, &code).is_err());
    }

    #[test]
    fn boundary_budget_matches_rscl_budget() {
        let lv: LVector = "1,2,3,4,5,6,7,8,9,10,11".parse().unwrap();
        let (n, s) = (11, 2);
        for (j, expect_m) in [(0usize, 2usize), (1, 1), (2, 2)] {
            let i = (j + 1) * (1 << (n - s)) - 1;
            let m = s - lowest_set_bit_index(j + 1).unwrap();
            assert_eq!(m, expect_m);
            assert_eq!(lv.boundary_stage(i), m);
        }
        assert_eq!(lv.boundary_stage(511), 2);
        assert_eq!(lv.boundary_stage(1023), 1);
    }

    #[test]
    fn boundary_stage_identity_exhaustive() {
        for n in 1..=14usize {
            for s in 1..=n.min(4) {
                for j in 0..(1usize << s) - 1 {
                    let lhs = s - lowest_set_bit_index(j + 1).unwrap();
                    let rhs = n - lowest_set_bit_index((j + 1) << (n - s)).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn noiseless_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let code = PolarCode::construct(7, 80, &Construction::default()).unwrap();
        let layout = build_layout(&code, 2, &[2, 2, 2, 10]).unwrap();
        let lv: LVector = "1,2,4,4,4,4,4".parse().unwrap();
        for _ in 0..20 {
            let msg: Vec<u8> = (0..layout.message_len()).map(|_| rng.random_range(0..2)).collect();
            let u = multicrc_encode(&msg, &layout, &code).unwrap();
            let x = kron_encode(&u, 7).unwrap();
            let out = multicrc_rscl_decode(&noiseless(&x), &code, &layout, &lv).unwrap();
            assert_eq!(out.message, msg);
            assert!(!out.detected_error);
            assert!(!out.local_fallback);
        }
    }

    #[test]
    fn global_only_matches_single_crc() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let code = PolarCode::construct(7, 64 + 16, &Construction::default()).unwrap();
        let layout = build_layout(&code, 2, &[0, 0, 0, 16]).unwrap();
        let lv = LVector::uniform(7, 4).unwrap();
        let crc = CrcSpec::crc16();
        for _ in 0..100 {
            let msg: Vec<u8> = (0..64).map(|_| rng.random_range(0..2)).collect();
            let u = multicrc_encode(&msg, &layout, &code).unwrap();
            assert_eq!(code.extract_payload(&u), crc.append(&msg));
            let x = kron_encode(&u, 7).unwrap();
            let llrs: Vec<f64> = modulate(&x)
                .iter()
                .map(|s| 2.0 * (s + rng.random_range(-1.2..1.2)) / 0.7)
                .collect();
            let multi = multicrc_rscl_decode(&llrs, &code, &layout, &lv).unwrap();
            let single = rscl_decode(&llrs, &code, &lv, Some(&crc)).unwrap();
            assert_eq!(multi.decisions, single.decisions);
            assert_eq!(multi.detected_error, single.detected_error);
        }
    }

    #[test]
    fn layout_spec_polynomials() {
        let code = PolarCode::construct(6, 30, &Construction::default()).unwrap();
        let spec = LayoutSpec {
            s: 1,
            r_vec: vec![2, 10],
            crc_polynomials: Some(vec!["x^2+x+1".into(), "CRC-10".into()]),
        };
        let layout = spec.build(&code).unwrap();
        assert_eq!(layout.crc(1), Some(&CrcSpec::crc10()));
        let bad = LayoutSpec {
            crc_polynomials: Some(vec!["x^3+x+1".into(), "CRC-10".into()]),
            ..spec.clone()
        };
        assert!(bad.build(&code).is_err());
        let json = serde_json::to_string(&spec).unwrap();
        let back: LayoutSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }
}
