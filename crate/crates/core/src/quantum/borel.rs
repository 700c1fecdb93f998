use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::csv::fmt_f64;
use crate::error::{Error, Result};

/// Frequency of one block pattern among the non-overlapping `k`-blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockFrequency {
    pub k: usize,
    pub block: String,
    pub freq: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockLengthVerdict {
    pub k: usize,
    pub blocks: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BorelReport {
    pub frequencies: Vec<BlockFrequency>,
    pub verdicts: Vec<BlockLengthVerdict>,
}

impl BorelReport {
    pub fn passes(&self, k: usize) -> bool {
        self.verdicts.iter().any(|v| v.k == k && v.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// `k,block,freq,expected,pass`
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "k,block,freq,expected,pass")?;
        for f in &self.frequencies {
            writeln!(
                out,
                "{},{},{},{},{}",
                f.k,
                f.block,
                fmt_f64(f.freq),
                fmt_f64(f.expected),
                u8::from(f.pass)
            )?;
        }
        Ok(())
    }
}

/// For each `k` in `1..=max_k`, splits the sequence into `len / k`
/// non-overlapping blocks and checks every pattern's frequency against
/// `2^-k` within four binomial standard deviations.
pub fn borel_block_test(bits: &[bool], max_k: usize) -> Result<BorelReport> {
    if max_k == 0 || max_k > 20 {
        return Err(Error::Config(format!("max_k must be in 1..=20, got {max_k}")));
    }
    let needed = (1usize << max_k) * 100;
    if bits.len() < needed {
        return Err(Error::TooShort {
            len: bits.len(),
            needed,
        });
    }
    let mut frequencies = Vec::new();
    let mut verdicts = Vec::new();
    for k in 1..=max_k {
        let patterns = 1usize << k;
        let mut counts = vec![0u64; patterns];
        let blocks = bits.len() / k;
        for chunk in bits.chunks_exact(k) {
            let index = chunk.iter().fold(0usize, |acc, &b| acc << 1 | usize::from(b));
            counts[index] += 1;
        }
        let expected = 1.0 / patterns as f64;
        let tolerance = 4.0 * (expected * (1.0 - expected) / blocks as f64).sqrt();
        let mut all = true;
        for (index, &count) in counts.iter().enumerate() {
            let freq = count as f64 / blocks as f64;
            let pass = (freq - expected).abs() <= tolerance;
            all &= pass;
            frequencies.push(BlockFrequency {
                k,
                block: format!("{index:0k$b}"),
                freq,
                expected,
                tolerance,
                pass,
            });
        }
        verdicts.push(BlockLengthVerdict { k, blocks, pass: all });
    }
    Ok(BorelReport {
        frequencies,
        verdicts,
    })
}

/// `n` uniform bits from a seeded ChaCha8 stream.
pub fn prng_bits(n: usize, seed: u64) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random::<bool>()).collect()
}
