//! Exhaustive brute-force ground truth.
//!
//! Enumerates every total parent map from elements to attach points (no
//! self-attachment) and filters to the acyclic ones. This reproduces the
//! rooted-diagram counts without using any counting formula, so it can
//! adjudicate the formulas and validate the codec independently. There are
//! deliberately no counting shortcuts here: independence is the point.

use num::{BigInt, Zero};
use thiserror::Error;

use crate::diagram::{AttachPoint, ChainProfile, RootedDiagram};

/// Cap on the candidate parent-function space `alphabet_size^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_states: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self {
            max_states: 10_000_000,
        }
    }
}

impl EnumerationBudget {
    pub fn new(max_states: u64) -> Self {
        Self { max_states }
    }

    /// Candidate space size `alphabet_size^k` for `profile`, or `None` if it
    /// does not fit in a `u64` (then it certainly exceeds any usable cap).
    pub fn state_count(profile: &ChainProfile) -> Option<u64> {
        let alphabet = profile.alphabet_size();
        let mut acc: u64 = 1;
        for _ in 0..profile.element_count() {
            acc = acc.checked_mul(alphabet)?;
        }
        Some(acc)
    }

    pub fn admits(&self, profile: &ChainProfile) -> bool {
        Self::state_count(profile).is_some_and(|n| n <= self.max_states)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration budget exceeded: profile {profile} needs {needed} candidate states (cap {cap})")]
    BudgetExceeded {
        profile: String,
        needed: String,
        cap: u64,
    },
    #[error("rooted count times rotations is not divisible by the alphabet size; the diagram model is broken")]
    InexactDivision,
}

fn check_budget(profile: &ChainProfile, budget: &EnumerationBudget) -> Result<(), OracleError> {
    if budget.admits(profile) {
        Ok(())
    } else {
        let needed = EnumerationBudget::state_count(profile)
            .map(|n| n.to_string())
            .unwrap_or_else(|| "> u64::MAX".to_string());
        Err(OracleError::BudgetExceeded {
            profile: profile.to_string(),
            needed,
            cap: budget.max_states,
        })
    }
}

/// Iterator over every rooted diagram of `profile`: all acyclic parent maps
/// with no self-attachment, in lexicographic order of
/// `(parent(1), ..., parent(k))` under the canonical attach-point order.
pub fn enumerate_rooted(
    profile: &ChainProfile,
    budget: &EnumerationBudget,
) -> Result<RootedDiagrams, OracleError> {
    check_budget(profile, budget)?;
    Ok(RootedDiagrams::new(profile.clone()))
}

pub struct RootedDiagrams {
    profile: ChainProfile,
    /// Per element: the attach points it may use (everything except its own
    /// slots), in canonical order.
    choices: Vec<Vec<AttachPoint>>,
    digits: Vec<usize>,
    scratch: Vec<AttachPoint>,
    started: bool,
    done: bool,
}

impl RootedDiagrams {
    fn new(profile: ChainProfile) -> Self {
        let k = profile.element_count();
        let choices: Vec<Vec<AttachPoint>> = (0..k)
            .map(|i| {
                profile
                    .attach_points()
                    .filter(|p| p.element() != Some(i))
                    .collect()
            })
            .collect();
        let scratch = choices.iter().map(|c| c[0]).collect();
        Self {
            profile,
            choices,
            digits: vec![0; k],
            scratch,
            started: false,
            done: false,
        }
    }

    /// Advances the odometer; returns false when the space is exhausted.
    fn advance(&mut self) -> bool {
        for i in (0..self.digits.len()).rev() {
            self.digits[i] += 1;
            if self.digits[i] < self.choices[i].len() {
                self.scratch[i] = self.choices[i][self.digits[i]];
                return true;
            }
            self.digits[i] = 0;
            self.scratch[i] = self.choices[i][0];
        }
        false
    }

    /// Parent-pointer walk with a step counter; no per-candidate allocation.
    fn is_acyclic(&self) -> bool {
        let k = self.scratch.len();
        for start in 0..k {
            let mut cur = start;
            let mut steps = 0;
            while let AttachPoint::Slot { element, .. } = self.scratch[cur] {
                cur = element;
                steps += 1;
                if steps > k {
                    return false;
                }
            }
        }
        true
    }
}

impl Iterator for RootedDiagrams {
    type Item = RootedDiagram;

    fn next(&mut self) -> Option<RootedDiagram> {
        loop {
            if self.done {
                return None;
            }
            if self.started {
                if !self.advance() {
                    self.done = true;
                    return None;
                }
            } else {
                self.started = true;
            }
            if self.is_acyclic() {
                return Some(RootedDiagram::new(
                    self.profile.clone(),
                    self.scratch.clone(),
                ));
            }
        }
    }
}

/// Number of rooted diagrams of `profile`, counted by exhaustive
/// enumeration (no formula involved).
pub fn rooted_count(
    profile: &ChainProfile,
    budget: &EnumerationBudget,
) -> Result<BigInt, OracleError> {
    check_budget(profile, budget)?;
    let mut iter = RootedDiagrams::new(profile.clone());
    let mut count: u64 = 0;
    loop {
        if iter.started {
            if !iter.advance() {
                break;
            }
        } else {
            iter.started = true;
        }
        if iter.is_acyclic() {
            count += 1;
        }
    }
    Ok(BigInt::from(count))
}

/// Unrooted diagram count derived from the exhaustive rooted count:
/// `rooted * prod(q_i) / alphabet_size`. The division removes the root-edge
/// choice, the product restores the per-element rotation freedom; the
/// division must be exact.
pub fn count_unrooted(
    profile: &ChainProfile,
    budget: &EnumerationBudget,
) -> Result<BigInt, OracleError> {
    let rooted = rooted_count(profile, budget)?;
    let rotations: BigInt = profile.lengths().iter().map(|&q| BigInt::from(q)).product();
    let alphabet = BigInt::from(profile.alphabet_size());
    let numerator = rooted * rotations;
    if !(&numerator % &alphabet).is_zero() {
        return Err(OracleError::InexactDivision);
    }
    Ok(numerator / alphabet)
}

/// Convenience: the unrooted count for the regular profile `(q, ..., q)`.
pub fn count_unrooted_regular(
    q: u32,
    k: u32,
    budget: &EnumerationBudget,
) -> Result<BigInt, OracleError> {
    let profile = ChainProfile::regular(q, k).expect("regular profile is valid");
    count_unrooted(&profile, budget)
}

/// Largest `k` such that `alphabet_size^k` for the regular profile `(q, k)`
/// stays within the budget. Used to pick exhaustive test ranges.
pub fn max_regular_k_within(q: u32, budget: &EnumerationBudget) -> u32 {
    let mut k = 0u32;
    loop {
        let candidate = k + 1;
        let profile = ChainProfile::regular(q, candidate).expect("regular profile is valid");
        if budget.admits(&profile) {
            k = candidate;
        } else {
            return k;
        }
    }
}
