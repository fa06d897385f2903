//! Cross-validation suite: every counting route against every other, the
//! codec against the exhaustive enumeration, and the series identities.
//!
//! Each check returns a [`CheckOutcome`]; a check never panics on
//! disagreement, it reports what differed so the caller (CLI or tests) can
//! surface it.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num::{BigInt, BigRational};

use crate::counting::{
    compositions, count_irregular, count_irregular_as_printed, count_regular, count_rooted,
    factorial, gf_coeff_closed, gf_coeffs_recurrence, recurrence_counts,
};
use crate::diagram::{ChainProfile, PruferSequence};
use crate::oracle::{count_unrooted, enumerate_rooted, rooted_count, EnumerationBudget};
use crate::prufer::{decode, encode, enumerate_sequences};
use crate::series::{lagrange_gf_coeff, solve_gf, verify_identities};

#[derive(Debug, Clone)]
pub struct CrosscheckConfig {
    pub q_max: u32,
    pub k_max: u32,
    pub sum_q_max: u32,
    pub budget: EnumerationBudget,
    /// Negative control: feed the deliberately wrong value 183 into the
    /// closed-form route at (q=3, k=3) and require the detector to fire.
    pub inject_183: bool,
}

impl Default for CrosscheckConfig {
    fn default() -> Self {
        Self {
            q_max: 3,
            k_max: 12,
            sum_q_max: 9,
            budget: EnumerationBudget::default(),
            inject_183: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

fn run_check(
    name: &'static str,
    body: impl FnOnce() -> (bool, String),
) -> CheckOutcome {
    let start = Instant::now();
    let (passed, detail) = body();
    CheckOutcome {
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

/// All profiles (ordered length tuples, entries >= 1) with the given edge
/// sum.
pub fn profiles_with_edge_sum(sum: u32) -> Vec<ChainProfile> {
    let mut out = Vec::new();
    for k in 1..=sum {
        for parts in compositions(sum, k, 1) {
            out.push(ChainProfile::new(parts).expect("composition parts are >= 1"));
        }
    }
    out
}

fn closed_form_value(q: u32, k: u32, inject_183: bool) -> BigInt {
    if inject_183 && q == 3 && k == 3 {
        return BigInt::from(183);
    }
    count_regular(q, k).expect("q >= 2 in check ranges")
}

/// Count derived from a generating-function coefficient:
/// `d_k = h_k * k! / ((q-1)k + 1)`; `None` if the division is not exact.
fn count_from_gf_coeff(coeff: &BigRational, q: u32, k: u32) -> Option<BigInt> {
    let d = coeff
        * BigRational::new(
            factorial(k),
            BigInt::from((q as u64 - 1) * k as u64 + 1),
        );
    d.is_integer().then(|| d.to_integer())
}

fn method_agreement(config: &CrosscheckConfig) -> (bool, String) {
    let mut values = 0usize;
    for q in 2..=config.q_max {
        let rec = recurrence_counts(q, config.k_max).expect("q >= 2");
        let gf = solve_gf(q, config.k_max as usize).expect("q >= 2");
        for k in 0..=config.k_max {
            let closed = closed_form_value(q, k, config.inject_183);
            let mut routes: Vec<(&str, BigInt)> = vec![
                ("closed_form", closed),
                ("recurrence", rec[k as usize].clone()),
            ];
            match count_from_gf_coeff(gf.coeff(k as usize), q, k) {
                Some(v) => routes.push(("series", v)),
                None => {
                    return (
                        false,
                        format!("series coefficient at q={q} k={k} is not an integer count"),
                    )
                }
            }
            if k >= 1 {
                let lagr = lagrange_gf_coeff(q, k).expect("q >= 2");
                match count_from_gf_coeff(&lagr, q, k) {
                    Some(v) => routes.push(("lagrange", v)),
                    None => {
                        return (
                            false,
                            format!("lagrange coefficient at q={q} k={k} is not an integer count"),
                        )
                    }
                }
            }
            let reference = routes[0].1.clone();
            if routes.iter().any(|(_, v)| *v != reference) {
                let mut detail = format!("disagreement at q={q} k={k}:");
                for (name, v) in &routes {
                    write!(detail, " {name}={v}").unwrap();
                }
                if config.inject_183 {
                    detail.push_str(" [injected 183]");
                }
                return (false, detail);
            }
            values += 1;
        }
    }
    let mut detail = format!(
        "q in 2..={}, k in 0..={}: {} values agree across all routes",
        config.q_max, config.k_max, values
    );
    if config.inject_183 {
        detail.push_str(" [injection armed but never hit: raise q_max/k_max to at least 3]");
        return (false, detail);
    }
    (true, detail)
}

fn gf_route_consistency(config: &CrosscheckConfig) -> (bool, String) {
    let k_max = config.k_max;
    for q in 2..=config.q_max {
        let rec = gf_coeffs_recurrence(q, k_max).expect("q >= 2");
        let gf = solve_gf(q, k_max as usize).expect("q >= 2");
        for k in 0..=k_max {
            let closed = gf_coeff_closed(q, k).expect("q >= 2");
            if rec[k as usize] != closed || gf.coeff(k as usize) != &closed {
                return (
                    false,
                    format!(
                        "coefficient mismatch at q={q} k={k}: recurrence={} series={} closed={closed}",
                        rec[k as usize],
                        gf.coeff(k as usize)
                    ),
                );
            }
            if k >= 1 && lagrange_gf_coeff(q, k).expect("q >= 2") != closed {
                return (false, format!("lagrange coefficient mismatch at q={q} k={k}"));
            }
        }
    }
    (
        true,
        format!(
            "generating-function coefficients agree for q in 2..={}, k in 0..={}",
            config.q_max, config.k_max
        ),
    )
}

fn oracle_agreement(config: &CrosscheckConfig) -> (bool, String) {
    let mut spans = Vec::new();
    for q in 2..=config.q_max {
        let mut max_k = 0;
        for k in 1..=config.k_max {
            let profile = ChainProfile::regular(q, k).expect("valid profile");
            if !config.budget.admits(&profile) {
                break;
            }
            let rooted = rooted_count(&profile, &config.budget).expect("within budget");
            if rooted != count_rooted(&profile) {
                return (
                    false,
                    format!(
                        "rooted count mismatch at q={q} k={k}: enumerated {rooted}, formula {}",
                        count_rooted(&profile)
                    ),
                );
            }
            let unrooted = count_unrooted(&profile, &config.budget).expect("within budget");
            let closed = count_regular(q, k).expect("q >= 2");
            if unrooted != closed {
                return (
                    false,
                    format!(
                        "unrooted count mismatch at q={q} k={k}: enumerated {unrooted}, closed form {closed}"
                    ),
                );
            }
            max_k = k;
        }
        spans.push(format!("q={q}: k<={max_k}"));
    }
    (
        true,
        format!("exhaustive counts match formulas ({})", spans.join(", ")),
    )
}

fn codec_roundtrips(config: &CrosscheckConfig) -> (bool, String) {
    let mut profiles: Vec<ChainProfile> = Vec::new();
    for q in 2..=config.q_max {
        for k in 1..=config.k_max {
            let p = ChainProfile::regular(q, k).expect("valid profile");
            if config.budget.admits(&p) {
                profiles.push(p);
            }
        }
    }
    for sum in 1..=config.sum_q_max {
        for p in profiles_with_edge_sum(sum) {
            if p.regular_q().is_none() && config.budget.admits(&p) {
                profiles.push(p);
            }
        }
    }
    let mut diagrams = 0u64;
    let mut sequences = 0u64;
    for p in &profiles {
        let mut enumerated = 0u64;
        for d in enumerate_rooted(p, &config.budget).expect("within budget") {
            let seq = match encode(&d) {
                Ok(s) => s,
                Err(v) => return (false, format!("encode rejected oracle diagram on {p}: {v}")),
            };
            if decode(&seq) != d {
                return (false, format!("decode(encode(d)) != d on profile {p}"));
            }
            enumerated += 1;
        }
        let mut words = 0u64;
        for s in enumerate_sequences(p, &config.budget).expect("within budget") {
            let d = decode(&s);
            if d.validate().is_err() {
                return (false, format!("decode produced an invalid diagram on {p}"));
            }
            if encode(&d).expect("decoded diagram is valid") != s {
                return (false, format!("encode(decode(s)) != s on profile {p}"));
            }
            words += 1;
        }
        // Bijectivity: as many diagrams as words, and both match the
        // rooted-count formula.
        let expected = count_rooted(p);
        if BigInt::from(enumerated) != expected || BigInt::from(words) != expected {
            return (
                false,
                format!(
                    "cardinality mismatch on {p}: {enumerated} diagrams, {words} words, formula {expected}"
                ),
            );
        }
        diagrams += enumerated;
        sequences += words;
    }
    (
        true,
        format!(
            "{} profiles, {diagrams} diagram roundtrips, {sequences} sequence roundtrips",
            profiles.len()
        ),
    )
}

fn irregular_agreement(config: &CrosscheckConfig) -> (bool, String) {
    let mut checked = 0usize;
    let mut printed_note = String::new();
    for sum in 3..=config.sum_q_max {
        for p in profiles_with_edge_sum(sum) {
            if !config.budget.admits(&p) {
                continue;
            }
            let formula = count_irregular(&p);
            let enumerated = count_unrooted(&p, &config.budget).expect("within budget");
            if formula != enumerated {
                return (
                    false,
                    format!("irregular count mismatch on {p}: formula {formula}, enumerated {enumerated}"),
                );
            }
            if let Some(q) = p.regular_q() {
                if q >= 2 {
                    let regular = count_regular(q, p.element_count() as u32).expect("q >= 2");
                    if formula != regular {
                        return (
                            false,
                            format!("constant profile {p} disagrees with regular closed form"),
                        );
                    }
                }
            }
            checked += 1;
        }
    }
    if config.sum_q_max >= 6 {
        let p = ChainProfile::new(vec![1, 2, 3]).expect("valid profile");
        let printed = count_irregular_as_printed(&p);
        let true_count = count_unrooted(&p, &config.budget).expect("within budget");
        if printed == true_count {
            return (
                false,
                "as-printed variant unexpectedly matches the enumeration on 1,2,3".to_string(),
            );
        }
        printed_note = format!(
            "; as-printed variant disagrees as documented ({printed} != {true_count} on 1,2,3)"
        );
    }
    (
        true,
        format!(
            "{checked} profiles with edge sum 3..={} match the enumeration{printed_note}",
            config.sum_q_max
        ),
    )
}

fn series_identities(config: &CrosscheckConfig) -> (bool, String) {
    let order = (config.k_max as usize).clamp(2, 30) + 1;
    for q in 2..=config.q_max {
        let report = verify_identities(q, order).expect("q >= 2");
        if !report.all_zero() {
            let broken: Vec<&str> = report
                .residuals
                .iter()
                .filter(|r| !r.is_zero())
                .map(|r| r.name)
                .collect();
            return (
                false,
                format!("nonzero residuals at q={q}: {}", broken.join(", ")),
            );
        }
    }
    (
        true,
        format!(
            "four identities hold through order {} for q in 2..={}",
            order - 1,
            config.q_max
        ),
    )
}

fn reference_codec(_config: &CrosscheckConfig) -> (bool, String) {
    let p = ChainProfile::regular(3, 6).expect("valid profile");
    let seq = match PruferSequence::parse("b2,0,b1,a1,e2", &p) {
        Ok(s) => s,
        Err(e) => return (false, format!("reference sequence failed to parse: {e}")),
    };
    let d = decode(&seq);
    let expected = "{\"profile\":[3,3,3,3,3,3],\"parents\":[\
                    {\"elem\":\"a\",\"attach\":\"e2\"},\
                    {\"elem\":\"b\",\"attach\":\"a1\"},\
                    {\"elem\":\"c\",\"attach\":\"b2\"},\
                    {\"elem\":\"d\",\"attach\":\"0\"},\
                    {\"elem\":\"e\",\"attach\":\"0\"},\
                    {\"elem\":\"f\",\"attach\":\"b1\"}]}";
    if d.to_json() != expected {
        return (false, format!("reference decode produced {}", d.to_json()));
    }
    match encode(&d) {
        Ok(back) if back == seq => (),
        Ok(back) => return (false, format!("re-encode produced {}", back.render())),
        Err(v) => return (false, format!("re-encode failed: {v}")),
    }
    (true, "b2,0,b1,a1,e2 decodes to the reference diagram and back".to_string())
}

/// Runs the whole suite; outcomes arrive in a fixed order regardless of
/// configuration.
pub fn run(config: &CrosscheckConfig) -> Vec<CheckOutcome> {
    vec![
        run_check("method-agreement", || method_agreement(config)),
        run_check("gf-coefficients", || gf_route_consistency(config)),
        run_check("oracle-vs-formulas", || oracle_agreement(config)),
        run_check("codec-roundtrips", || codec_roundtrips(config)),
        run_check("irregular-profiles", || irregular_agreement(config)),
        run_check("series-identities", || series_identities(config)),
        run_check("reference-sequence", || reference_codec(config)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_config_passes() {
        let config = CrosscheckConfig {
            q_max: 2,
            k_max: 4,
            sum_q_max: 6,
            ..Default::default()
        };
        let outcomes = run(&config);
        for o in &outcomes {
            assert!(o.passed, "{} failed: {}", o.name, o.detail);
        }
        assert_eq!(outcomes.len(), 7);
    }

    #[test]
    fn injection_is_detected() {
        let config = CrosscheckConfig {
            q_max: 3,
            k_max: 4,
            sum_q_max: 3,
            inject_183: true,
            ..Default::default()
        };
        let outcomes = run(&config);
        let agreement = &outcomes[0];
        assert!(!agreement.passed);
        assert!(agreement.detail.contains("183"), "{}", agreement.detail);
    }

    #[test]
    fn profiles_with_sum_are_exhaustive() {
        // 2^(s-1) compositions of s.
        assert_eq!(profiles_with_edge_sum(5).len(), 16);
    }
}
