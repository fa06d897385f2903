//! Closed-form and recurrence-based evaluation of diagram counts.
//!
//! For the regular profile (`k` chains of `q` edges) the number of tree-type
//! diagrams is `q^k ((q-1)k + 1)^(k-2)`; the same count is reachable through
//! a chain-attachment recurrence, through the coefficients of a generating
//! function (see [`crate::series`]) and through brute-force enumeration (see
//! [`crate::oracle`]). Irregular profiles are counted by
//! `(sum(q_i) - k + 1)^(k-2) * prod(q_i)`, whose base is the attach-point
//! alphabet size.

use std::fmt::Write as _;

use num::traits::Pow;
use num::{BigInt, BigRational, One, Zero};
use thiserror::Error;

use crate::diagram::ChainProfile;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("chain length q must be >= 2 for regular counting (got {q})")]
    InvalidQ { q: u32 },
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Binomial coefficient `C(n, r)`.
pub fn binomial(n: u32, r: u32) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Multinomial coefficient `n! / (parts[0]! * parts[1]! * ...)`.
/// The parts must sum to at most `n`.
pub fn multinomial(n: u32, parts: &[u32]) -> BigInt {
    let mut acc = factorial(n);
    for &p in parts {
        acc /= factorial(p);
    }
    acc
}

/// Iterator over all ordered tuples of `parts` nonnegative integers that sum
/// to `total`, with every entry at least `min_part`, in lexicographic order.
pub fn compositions(total: u32, parts: u32, min_part: u32) -> Compositions {
    let state = if parts == 0 {
        (total == 0).then(Vec::new)
    } else if total < min_part * parts {
        None
    } else {
        let mut first = vec![min_part; parts as usize];
        *first.last_mut().unwrap() = total - min_part * (parts - 1);
        Some(first)
    };
    Compositions { state, min_part }
}

pub struct Compositions {
    state: Option<Vec<u32>>,
    min_part: u32,
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let current = self.state.take()?;
        self.state = self.successor(&current);
        Some(current)
    }
}

impl Compositions {
    /// Next tuple in lexicographic order: bump the rightmost position whose
    /// suffix still holds spare budget, then refill the suffix minimally.
    fn successor(&self, current: &[u32]) -> Option<Vec<u32>> {
        let n = current.len();
        let mut suffix_sum = 0u32;
        for i in (0..n.saturating_sub(1)).rev() {
            suffix_sum += current[i + 1];
            let suffix_len = (n - 1 - i) as u32;
            if suffix_sum > self.min_part * suffix_len {
                let mut next = current.to_vec();
                next[i] += 1;
                let mut rem = suffix_sum - 1;
                for slot in next.iter_mut().take(n - 1).skip(i + 1) {
                    *slot = self.min_part;
                    rem -= self.min_part;
                }
                next[n - 1] = rem;
                return Some(next);
            }
        }
        None
    }
}

/// Number of tree-type diagrams assembled from `k` chains of `q` edges:
/// `q^k ((q-1)k + 1)^(k-2)`, with the `k = 0` and `k = 1` cases equal to 1.
pub fn count_regular(q: u32, k: u32) -> Result<BigInt, CountError> {
    if q < 2 {
        return Err(CountError::InvalidQ { q });
    }
    Ok(match k {
        0 | 1 => BigInt::one(),
        _ => {
            let base = BigInt::from((q as u64 - 1) * k as u64 + 1);
            BigInt::from(q).pow(k) * base.pow(k - 2)
        }
    })
}

/// Number of rooted diagrams over `profile`: `alphabet_size^(k-1)`.
pub fn count_rooted(profile: &ChainProfile) -> BigInt {
    let k = profile.element_count() as u32;
    BigInt::from(profile.alphabet_size()).pow(k - 1)
}

/// Number of tree-type diagrams over an arbitrary profile:
/// `(sum(q_i) - k + 1)^(k-2) * prod(q_i)`. Reduces to [`count_regular`] on
/// constant profiles; `k = 1` yields 1 exactly.
pub fn count_irregular(profile: &ChainProfile) -> BigInt {
    let k = profile.element_count() as u32;
    if k == 1 {
        return BigInt::one();
    }
    let prod: BigInt = profile.lengths().iter().map(|&q| BigInt::from(q)).product();
    BigInt::from(profile.alphabet_size()).pow(k - 2) * prod
}

/// The non-validated variant of the irregular count with base
/// `(sum(q_i))(k-1) + 1` instead of the alphabet size. It disagrees with the
/// exhaustive enumeration (for profile `1,2,3` it yields 78 where the true
/// count is 24) and is kept only for side-by-side comparison.
pub fn count_irregular_as_printed(profile: &ChainProfile) -> BigInt {
    let k = profile.element_count() as u32;
    let prod: BigInt = profile.lengths().iter().map(|&q| BigInt::from(q)).product();
    if k == 1 {
        // The base (sum)(k-1)+1 is 1 at k = 1, so the k-2 = -1 exponent
        // cancels and the product of lengths remains.
        return prod;
    }
    let base = BigInt::from(profile.total_edges() * (k as u64 - 1) + 1);
    base.pow(k - 2) * prod
}

/// Diagram counts `d_0..d_k_max` via the chain-attachment recurrence:
/// the count for `k + 1` elements sums, over the number `l` of arcs joining
/// the new chain and over all compositions `k = j_1 + ... + j_l`, the ways to
/// split the remaining elements into sub-diagrams and attach each one.
pub fn recurrence_counts(q: u32, k_max: u32) -> Result<Vec<BigInt>, CountError> {
    if q < 2 {
        return Err(CountError::InvalidQ { q });
    }
    let mut counts = vec![BigInt::one()];
    if k_max >= 1 {
        counts.push(BigInt::one());
    }
    for k in 1..k_max {
        let mut total = BigInt::zero();
        for l in 1..=k.min(q) {
            let mut inner = BigInt::zero();
            for parts in compositions(k, l, 1) {
                let mut term = multinomial(k, &parts);
                for &j in &parts {
                    term *= BigInt::from((q as u64 - 1) * j as u64 + 1) * &counts[j as usize];
                }
                inner += term;
            }
            total += binomial(q, l) * inner;
        }
        counts.push(total);
    }
    Ok(counts)
}

/// Generating-function coefficients `h_0..h_k_max` via their recurrence
/// `h_k = ((q-1)k + 1)/k * sum over q-part compositions of k-1 of products
/// of earlier coefficients`, with `h_0 = 1`. The `k`-th coefficient equals
/// `((q-1)k + 1) * d_k / k!` where `d_k` is the diagram count.
pub fn gf_coeffs_recurrence(q: u32, k_max: u32) -> Result<Vec<BigRational>, CountError> {
    if q < 2 {
        return Err(CountError::InvalidQ { q });
    }
    let mut coeffs = vec![BigRational::one()];
    for k in 1..=k_max {
        let mut sum = BigRational::zero();
        for parts in compositions(k - 1, q, 0) {
            let mut term = BigRational::one();
            for &j in &parts {
                term *= &coeffs[j as usize];
            }
            sum += term;
        }
        let factor = BigRational::new(
            BigInt::from((q as u64 - 1) * k as u64 + 1),
            BigInt::from(k),
        );
        coeffs.push(factor * sum);
    }
    Ok(coeffs)
}

/// Closed form of the generating-function coefficient:
/// `q^k ((q-1)k + 1)^(k-1) / k!`.
pub fn gf_coeff_closed(q: u32, k: u32) -> Result<BigRational, CountError> {
    if q < 2 {
        return Err(CountError::InvalidQ { q });
    }
    if k == 0 {
        return Ok(BigRational::one());
    }
    let base = BigInt::from((q as u64 - 1) * k as u64 + 1);
    Ok(BigRational::new(
        BigInt::from(q).pow(k) * base.pow(k - 1),
        factorial(k),
    ))
}

/// Method tag attached to rows of a [`CountTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    ClosedForm,
    Recurrence,
    Series,
    Lagrange,
    Oracle,
    AsPrintedNonValidated,
}

impl CountMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CountMethod::ClosedForm => "closed_form",
            CountMethod::Recurrence => "recurrence",
            CountMethod::Series => "series",
            CountMethod::Lagrange => "lagrange",
            CountMethod::Oracle => "oracle",
            CountMethod::AsPrintedNonValidated => "as_printed_non_validated",
        }
    }
}

/// What a table counts: a regular family parameterized by `q`, or one
/// explicit profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CountSubject {
    Regular(u32),
    Profile(ChainProfile),
}

#[derive(Debug, Clone)]
pub struct CountRow {
    pub k: u32,
    pub count: BigInt,
    pub method: CountMethod,
}

/// A table of diagram counts with machine-readable serializations. Counts
/// render as exact decimal integers, never scientific notation.
#[derive(Debug, Clone)]
pub struct CountTable {
    pub subject: CountSubject,
    pub rows: Vec<CountRow>,
}

impl CountTable {
    fn q_field_csv(&self) -> String {
        match &self.subject {
            CountSubject::Regular(q) => q.to_string(),
            // Profiles contain commas, so the CSV field is quoted.
            CountSubject::Profile(p) => format!("\"{p}\""),
        }
    }

    /// CSV with the header `q,k,d_k,method`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("q,k,d_k,method\n");
        let q_field = self.q_field_csv();
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{}",
                q_field,
                row.k,
                row.count,
                row.method.as_str()
            )
            .unwrap();
        }
        out
    }

    /// JSON lines, one object per row; counts are decimal strings so no
    /// consumer can round them.
    pub fn to_json_lines(&self) -> String {
        let subject_field = match &self.subject {
            CountSubject::Regular(q) => format!("\"q\":{q}"),
            CountSubject::Profile(p) => {
                let parts: Vec<String> =
                    p.lengths().iter().map(|q| q.to_string()).collect();
                format!("\"profile\":[{}]", parts.join(","))
            }
        };
        let mut out = String::new();
        for row in &self.rows {
            writeln!(
                out,
                "{{{},\"k\":{},\"d_k\":\"{}\",\"method\":\"{}\"}}",
                subject_field,
                row.k,
                row.count,
                row.method.as_str()
            )
            .unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn compositions_examples() {
        let got: Vec<_> = compositions(2, 2, 1).collect();
        assert_eq!(got, vec![vec![1, 1]]);

        let got: Vec<_> = compositions(1, 3, 0).collect();
        assert_eq!(got, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);

        let got: Vec<_> = compositions(3, 2, 1).collect();
        assert_eq!(got, vec![vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn compositions_edge_cases() {
        assert_eq!(compositions(0, 3, 0).count(), 1);
        assert_eq!(compositions(0, 3, 1).count(), 0);
        assert_eq!(compositions(0, 0, 0).count(), 1);
        assert_eq!(compositions(2, 0, 0).count(), 0);
        assert_eq!(compositions(5, 1, 1).collect::<Vec<_>>(), vec![vec![5]]);
    }

    #[test]
    fn compositions_counts_and_order() {
        for total in 0..7u32 {
            for parts in 1..5u32 {
                for min in 0..=1u32 {
                    let all: Vec<_> = compositions(total, parts, min).collect();
                    let expected = if min == 1 {
                        if total < parts {
                            BigInt::zero()
                        } else {
                            binomial(total - 1, parts - 1)
                        }
                    } else {
                        binomial(total + parts - 1, parts - 1)
                    };
                    assert_eq!(BigInt::from(all.len()), expected, "count {total},{parts},{min}");
                    for pair in all.windows(2) {
                        assert!(pair[0] < pair[1], "lexicographic order violated");
                    }
                    for c in &all {
                        assert_eq!(c.iter().sum::<u32>(), total);
                        assert!(c.iter().all(|&x| x >= min));
                    }
                }
            }
        }
    }

    #[test]
    fn regular_counts_known_values() {
        assert_eq!(count_regular(3, 2).unwrap(), big(9));
        assert_eq!(count_regular(3, 3).unwrap(), big(189));
        assert_eq!(count_regular(3, 4).unwrap(), big(6561));
        assert_eq!(count_regular(3, 5).unwrap(), big(323433));
        for q in 2..=6 {
            assert_eq!(count_regular(q, 0).unwrap(), big(1));
            assert_eq!(count_regular(q, 1).unwrap(), big(1));
            assert_eq!(count_regular(q, 2).unwrap(), big((q as i64) * (q as i64)));
        }
        assert_eq!(count_regular(1, 3), Err(CountError::InvalidQ { q: 1 }));
    }

    #[test]
    fn q2_closed_form_matches() {
        // 2^k (k+1)^(k-2) for the two-edge chains.
        for k in 2..=10u32 {
            let expected = BigInt::from(2).pow(k) * BigInt::from(k + 1).pow(k - 2);
            assert_eq!(count_regular(2, k).unwrap(), expected);
        }
    }

    #[test]
    fn rooted_counts() {
        let p33 = ChainProfile::regular(3, 2).unwrap();
        assert_eq!(count_rooted(&p33), big(5));
        let p22 = ChainProfile::regular(2, 2).unwrap();
        assert_eq!(count_rooted(&p22), big(3));
        let p123 = ChainProfile::new(vec![1, 2, 3]).unwrap();
        assert_eq!(count_rooted(&p123), big(16));
    }

    #[test]
    fn irregular_counts() {
        let p123 = ChainProfile::new(vec![1, 2, 3]).unwrap();
        assert_eq!(count_irregular(&p123), big(24));
        assert_eq!(count_irregular_as_printed(&p123), big(78));

        let p22 = ChainProfile::new(vec![2, 2]).unwrap();
        assert_eq!(count_irregular(&p22), big(4));

        let single = ChainProfile::new(vec![5]).unwrap();
        assert_eq!(count_irregular(&single), big(1));
    }

    #[test]
    fn irregular_reduces_to_regular() {
        for q in 2..=4u32 {
            for k in 1..=8u32 {
                let p = ChainProfile::regular(q, k).unwrap();
                assert_eq!(count_irregular(&p), count_regular(q, k).unwrap());
            }
        }
    }

    #[test]
    fn recurrence_matches_examples() {
        let d2 = recurrence_counts(2, 3).unwrap();
        assert_eq!(&d2[1..], &[big(1), big(4), big(32)]);

        let d3 = recurrence_counts(3, 3).unwrap();
        assert_eq!(&d3[1..], &[big(1), big(9), big(189)]);

        let d3short = recurrence_counts(3, 2).unwrap();
        assert_eq!(&d3short[1..], &[big(1), big(9)]);
    }

    #[test]
    fn recurrence_matches_closed_form() {
        for q in 2..=5u32 {
            let table = recurrence_counts(q, 12).unwrap();
            for k in 0..=12u32 {
                assert_eq!(
                    table[k as usize],
                    count_regular(q, k).unwrap(),
                    "q={q} k={k}"
                );
            }
        }
    }

    #[test]
    fn gf_coeffs_examples() {
        let h2 = gf_coeffs_recurrence(2, 1).unwrap();
        assert_eq!(h2[1], BigRational::from_integer(big(2)));

        let h3 = gf_coeffs_recurrence(3, 2).unwrap();
        assert_eq!(h3[0], BigRational::one());
        assert_eq!(h3[2], BigRational::new(big(45), big(2)));
    }

    #[test]
    fn gf_coeffs_match_closed_form_and_definition() {
        for q in 2..=5u32 {
            let coeffs = gf_coeffs_recurrence(q, 10).unwrap();
            for k in 0..=10u32 {
                assert_eq!(coeffs[k as usize], gf_coeff_closed(q, k).unwrap());
                if k >= 1 {
                    // ((q-1)k + 1) d_k / k! definition.
                    let expected = BigRational::new(
                        BigInt::from((q as u64 - 1) * k as u64 + 1)
                            * count_regular(q, k).unwrap(),
                        factorial(k),
                    );
                    assert_eq!(coeffs[k as usize], expected);
                }
            }
        }
    }

    #[test]
    fn monotone_in_k_and_q() {
        for q in 2..=5u32 {
            let mut prev = count_regular(q, 2).unwrap();
            for k in 3..=12u32 {
                let next = count_regular(q, k).unwrap();
                assert!(next > prev);
                prev = next;
            }
        }
        for k in 2..=12u32 {
            let mut prev = count_regular(2, k).unwrap();
            for q in 3..=5u32 {
                let next = count_regular(q, k).unwrap();
                assert!(next > prev);
                prev = next;
            }
        }
    }

    #[test]
    fn table_serialization_golden() {
        let table = CountTable {
            subject: CountSubject::Regular(3),
            rows: vec![
                CountRow {
                    k: 2,
                    count: big(9),
                    method: CountMethod::ClosedForm,
                },
                CountRow {
                    k: 3,
                    count: big(189),
                    method: CountMethod::Oracle,
                },
            ],
        };
        assert_eq!(
            table.to_csv(),
            "q,k,d_k,method\n3,2,9,closed_form\n3,3,189,oracle\n"
        );
        assert_eq!(
            table.to_json_lines(),
            "{\"q\":3,\"k\":2,\"d_k\":\"9\",\"method\":\"closed_form\"}\n{\"q\":3,\"k\":3,\"d_k\":\"189\",\"method\":\"oracle\"}\n"
        );

        let profile_table = CountTable {
            subject: CountSubject::Profile(ChainProfile::new(vec![1, 2, 3]).unwrap()),
            rows: vec![CountRow {
                k: 3,
                count: big(24),
                method: CountMethod::ClosedForm,
            }],
        };
        assert_eq!(
            profile_table.to_csv(),
            "q,k,d_k,method\n\"1,2,3\",3,24,closed_form\n"
        );
        assert_eq!(
            profile_table.to_json_lines(),
            "{\"profile\":[1,2,3],\"k\":3,\"d_k\":\"24\",\"method\":\"closed_form\"}\n"
        );
    }
}
