//! Largest prime factor of `n² + 1` over a range, summarized per dyadic
//! block.

use rayon::prelude::*;
use serde::Serialize;

use super::sieve::{prime_roots, sieve_segment, PrimeRoot};
use crate::error::{Error, Result};

pub const MAX_N: u64 = 10_000_000;
/// Exponent of the unconditional result.
pub const TARGET_EXPONENT: f64 = 1.279;
const SEGMENT: u64 = 1 << 15;
const WITNESSES_PER_BLOCK: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LpfRecord {
    pub n: u64,
    pub lpf: u64,
    /// `log P / log n`.
    pub exponent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DyadicBlock {
    /// Block `[lo, hi]`, clipped to the scanned range.
    pub lo: u64,
    pub hi: u64,
    pub count: u64,
    pub max: LpfRecord,
    pub median_exponent: f64,
    /// Number of `n` with exponent above [`TARGET_EXPONENT`].
    pub above_target: u64,
    /// The first few such `n`.
    pub witnesses: Vec<LpfRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpfScan {
    pub lo: u64,
    pub hi: u64,
    pub blocks: Vec<DyadicBlock>,
}

fn check_range(lo: u64, hi: u64) -> Result<()> {
    if lo < 2 || lo > hi || hi > MAX_N {
        return Err(Error::domain(format!("need 2 <= lo <= hi <= 10^7, got [{lo}, {hi}]")));
    }
    Ok(())
}

fn records_with(lo: u64, hi: u64, primes: &[PrimeRoot]) -> Vec<LpfRecord> {
    let segments: Vec<(u64, u64)> = (lo..=hi)
        .step_by(SEGMENT as usize)
        .map(|a| (a, (a + SEGMENT).min(hi + 1)))
        .collect();
    let parts: Vec<Vec<LpfRecord>> = segments
        .par_iter()
        .map(|&(a, b)| {
            let seg = sieve_segment(a, b, primes, |_, _| {});
            (a..b)
                .enumerate()
                .map(|(i, n)| {
                    let lpf = seg.cofactor[i].max(seg.largest[i]);
                    LpfRecord {
                        n,
                        lpf,
                        exponent: (lpf as f64).ln() / (n as f64).ln(),
                    }
                })
                .collect()
        })
        .collect();
    parts.concat()
}

/// One record per `n ∈ [lo, hi]`.
pub fn lpf_records(lo: u64, hi: u64) -> Result<Vec<LpfRecord>> {
    check_range(lo, hi)?;
    Ok(records_with(lo, hi, &prime_roots(hi)))
}

/// Dyadic summaries of the largest prime factor of `n² + 1`, `n ∈ [lo, hi]`.
pub fn lpf_scan(lo: u64, hi: u64) -> Result<LpfScan> {
    check_range(lo, hi)?;
    let primes = prime_roots(hi);
    let mut blocks = Vec::new();
    let mut start = lo;
    while start <= hi {
        let next_power = 1u64 << (64 - start.leading_zeros());
        let end = (next_power - 1).min(hi);
        let records = records_with(start, end, &primes);
        let mut exps: Vec<f64> = records.iter().map(|r| r.exponent).collect();
        exps.sort_by(f64::total_cmp);
        let k = exps.len();
        let median = if k % 2 == 1 { exps[k / 2] } else { 0.5 * (exps[k / 2 - 1] + exps[k / 2]) };
        let max = *records
            .iter()
            .max_by(|a, b| a.exponent.total_cmp(&b.exponent).then(b.n.cmp(&a.n)))
            .unwrap();
        let above: Vec<&LpfRecord> = records.iter().filter(|r| r.exponent > TARGET_EXPONENT).collect();
        blocks.push(DyadicBlock {
            lo: start,
            hi: end,
            count: k as u64,
            max,
            median_exponent: median,
            above_target: above.len() as u64,
            witnesses: above.into_iter().take(WITNESSES_PER_BLOCK).copied().collect(),
        });
        start = end + 1;
    }
    Ok(LpfScan { lo, hi, blocks })
}
