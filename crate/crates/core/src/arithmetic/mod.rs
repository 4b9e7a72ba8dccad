//! Desk-scale checks of the arithmetic inputs to the sieve: roots of
//! `ν² + 1` modulo `m`, Kloosterman sums, the two-square correspondence, the
//! gcd-sum lemma, the Chebyshev–Hooley identity, Poisson evaluation of
//! congruence counts and a largest-prime-factor scan.

use serde::Serialize;

pub mod chebyshev;
pub mod gauss;
pub mod kloosterman;
pub mod lpf;
pub mod modular;
pub mod poisson;
pub mod roots;
mod sieve;

pub use chebyshev::{chebyshev_sum, gcd_sum_check, ChebyshevReport, GcdSum};
pub use gauss::{gauss_correspondence, TwoSquareRep};
pub use kloosterman::{kloosterman, KloostermanValue};
pub use lpf::{lpf_records, lpf_scan, LpfRecord, LpfScan};
pub use poisson::{count_a_d, count_a_d_with, type2_empirical, CongruenceCount, SmoothWeight};
pub use roots::{rho, roots_neg1, RootsModM};

const MAX_DETAILS: usize = 10;

/// Outcome of a verification suite.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub instances: u64,
    pub failures: u64,
    /// The first few failure descriptions.
    pub details: Vec<String>,
}

impl CheckReport {
    pub fn new(check: &str) -> Self {
        CheckReport {
            check: check.to_string(),
            ..Default::default()
        }
    }

    pub fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            if self.details.len() < MAX_DETAILS {
                self.details.push(detail());
            }
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.instances += other.instances;
        self.failures += other.failures;
        let room = MAX_DETAILS.saturating_sub(self.details.len());
        self.details.extend(other.details.into_iter().take(room));
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}
