//! The tree codec: a bijection between rooted diagrams and attach-point
//! sequences of length `k - 1`.
//!
//! Encoding repeatedly removes the minimal-color element that has no
//! children left and records its attach point; after `k - 1` removals the
//! surviving element is root-attached and its token stays implicit.
//! Decoding reads the sequence left to right, each time attaching the
//! minimal color that is not yet placed and does not occur in the remaining
//! suffix of the sequence. The same procedure works verbatim for irregular
//! profiles; only the attach-point alphabet changes.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::diagram::{AttachPoint, ChainProfile, PruferSequence, RootedDiagram, Violation};
use crate::oracle::{EnumerationBudget, OracleError};

/// Encodes a valid rooted diagram into its sequence of `k - 1` tokens.
pub fn encode(diagram: &RootedDiagram) -> Result<PruferSequence, Violation> {
    diagram.validate()?;
    let k = diagram.profile().element_count();
    let mut child_count = vec![0usize; k];
    for &p in diagram.parents() {
        if let Some(e) = p.element() {
            child_count[e] += 1;
        }
    }
    let mut leaves: BinaryHeap<Reverse<usize>> = (0..k)
        .filter(|&i| child_count[i] == 0)
        .map(Reverse)
        .collect();
    let mut tokens = Vec::with_capacity(k - 1);
    for _ in 0..k - 1 {
        let Reverse(leaf) = leaves
            .pop()
            .expect("a valid diagram always has a childless element");
        let parent = diagram.parent(leaf);
        tokens.push(parent);
        if let Some(e) = parent.element() {
            child_count[e] -= 1;
            if child_count[e] == 0 {
                leaves.push(Reverse(e));
            }
        }
    }
    let Reverse(survivor) = leaves.pop().expect("one element survives");
    debug_assert_eq!(
        diagram.parent(survivor),
        AttachPoint::Root,
        "the surviving element carries the implicit trailing root token"
    );
    Ok(PruferSequence::new(diagram.profile().clone(), tokens)
        .expect("tokens from a valid diagram are valid"))
}

/// Decodes a sequence back into the unique rooted diagram producing it.
pub fn decode(sequence: &PruferSequence) -> RootedDiagram {
    let profile = sequence.profile();
    let k = profile.element_count();
    let mut occurrences = vec![0usize; k];
    for t in sequence.tokens() {
        if let Some(e) = t.element() {
            occurrences[e] += 1;
        }
    }
    let mut available: BinaryHeap<Reverse<usize>> = (0..k)
        .filter(|&i| occurrences[i] == 0)
        .map(Reverse)
        .collect();
    let mut parents: Vec<Option<AttachPoint>> = vec![None; k];
    for &token in sequence.tokens() {
        let Reverse(next) = available
            .pop()
            .expect("a valid sequence always leaves a placeable element");
        // The chosen color cannot occur in the remaining suffix, so in
        // particular it is not the token's own element.
        assert_ne!(token.element(), Some(next), "decode produced self-attachment");
        parents[next] = Some(token);
        if let Some(e) = token.element() {
            occurrences[e] -= 1;
            if occurrences[e] == 0 {
                available.push(Reverse(e));
            }
        }
    }
    let Reverse(last) = available.pop().expect("one element remains unplaced");
    parents[last] = Some(AttachPoint::Root);
    let parents: Vec<AttachPoint> = parents
        .into_iter()
        .map(|p| p.expect("every element was placed"))
        .collect();
    let diagram = RootedDiagram::new(profile.clone(), parents);
    debug_assert_eq!(diagram.validate(), Ok(()));
    diagram
}

/// Iterator over every length-`(k-1)` word over the attach-point alphabet,
/// in lexicographic order. Refuses profiles whose `alphabet_size^(k-1)`
/// exceeds the budget.
pub fn enumerate_sequences(
    profile: &ChainProfile,
    budget: &EnumerationBudget,
) -> Result<Sequences, OracleError> {
    let alphabet = profile.alphabet_size();
    let mut total: u64 = 1;
    let mut in_budget = true;
    for _ in 0..profile.element_count() - 1 {
        match total.checked_mul(alphabet) {
            Some(t) if t <= budget.max_states => total = t,
            _ => {
                in_budget = false;
                break;
            }
        }
    }
    if !in_budget {
        return Err(OracleError::BudgetExceeded {
            profile: profile.to_string(),
            needed: format!("{alphabet}^{}", profile.element_count() - 1),
            cap: budget.max_states,
        });
    }
    Ok(Sequences {
        profile: profile.clone(),
        alphabet: profile.attach_points().collect(),
        digits: vec![0; profile.element_count() - 1],
        started: false,
        done: false,
    })
}

pub struct Sequences {
    profile: ChainProfile,
    alphabet: Vec<AttachPoint>,
    digits: Vec<usize>,
    started: bool,
    done: bool,
}

impl Iterator for Sequences {
    type Item = PruferSequence;

    fn next(&mut self) -> Option<PruferSequence> {
        if self.done {
            return None;
        }
        if self.started {
            let mut advanced = false;
            for i in (0..self.digits.len()).rev() {
                self.digits[i] += 1;
                if self.digits[i] < self.alphabet.len() {
                    advanced = true;
                    break;
                }
                self.digits[i] = 0;
            }
            if !advanced {
                self.done = true;
                return None;
            }
        } else {
            self.started = true;
        }
        let tokens: Vec<AttachPoint> = self.digits.iter().map(|&d| self.alphabet[d]).collect();
        Some(
            PruferSequence::new(self.profile.clone(), tokens)
                .expect("alphabet tokens are valid by construction"),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::enumerate_rooted;
    use proptest::prelude::*;

    fn profile(lengths: &[u32]) -> ChainProfile {
        ChainProfile::new(lengths.to_vec()).unwrap()
    }

    fn slot(element: usize, subscript: u32) -> AttachPoint {
        AttachPoint::Slot { element, subscript }
    }

    /// The six-element reference diagram: c->b2, d->0, f->b1, b->a1, a->e2,
    /// e->0.
    fn reference_diagram() -> RootedDiagram {
        RootedDiagram::new(
            profile(&[3, 3, 3, 3, 3, 3]),
            vec![
                slot(4, 2),        // a -> e2
                slot(0, 1),        // b -> a1
                slot(1, 2),        // c -> b2
                AttachPoint::Root, // d -> 0
                AttachPoint::Root, // e -> 0
                slot(1, 1),        // f -> b1
            ],
        )
    }

    #[test]
    fn encode_reference_sequence() {
        let seq = encode(&reference_diagram()).unwrap();
        assert_eq!(seq.render(), "b2,0,b1,a1,e2");
    }

    #[test]
    fn decode_reference_sequence() {
        let p = profile(&[3, 3, 3, 3, 3, 3]);
        let seq = PruferSequence::parse("b2,0,b1,a1,e2", &p).unwrap();
        assert_eq!(decode(&seq), reference_diagram());
    }

    #[test]
    fn encode_single_element() {
        let d = RootedDiagram::new(profile(&[3]), vec![AttachPoint::Root]);
        assert_eq!(encode(&d).unwrap().tokens().len(), 0);
    }

    #[test]
    fn encode_two_elements() {
        let d = RootedDiagram::new(profile(&[2, 2]), vec![AttachPoint::Root, slot(0, 1)]);
        assert_eq!(encode(&d).unwrap().render(), "a1");
    }

    #[test]
    fn encode_rejects_invalid() {
        let d = RootedDiagram::new(profile(&[2, 2]), vec![slot(1, 1), slot(0, 1)]);
        assert!(encode(&d).is_err());
    }

    #[test]
    fn decode_empty_sequence() {
        let seq = PruferSequence::parse("", &profile(&[3])).unwrap();
        let d = decode(&seq);
        assert_eq!(d.parents(), &[AttachPoint::Root]);
    }

    #[test]
    fn decode_root_token_places_minimal_color_first() {
        let seq = PruferSequence::parse("0", &profile(&[3, 3])).unwrap();
        let d = decode(&seq);
        assert_eq!(d.parents(), &[AttachPoint::Root, AttachPoint::Root]);
        assert_eq!(encode(&d).unwrap(), seq);
    }

    #[test]
    fn enumerate_small_alphabets() {
        let budget = EnumerationBudget::default();
        let seqs: Vec<String> = enumerate_sequences(&profile(&[2, 2]), &budget)
            .unwrap()
            .map(|s| s.render())
            .collect();
        assert_eq!(seqs, vec!["0", "a1", "b1"]);

        assert_eq!(
            enumerate_sequences(&profile(&[3]), &budget).unwrap().count(),
            1
        );
        assert_eq!(
            enumerate_sequences(&profile(&[3, 3, 3]), &budget)
                .unwrap()
                .count(),
            49
        );
    }

    #[test]
    fn enumerate_respects_budget() {
        let tight = EnumerationBudget::new(10);
        assert!(matches!(
            enumerate_sequences(&profile(&[3, 3, 3]), &tight),
            Err(OracleError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn roundtrip_exhaustive_small_profiles() {
        let budget = EnumerationBudget::default();
        for lengths in [
            vec![2u32, 2],
            vec![3, 3],
            vec![3, 3, 3],
            vec![1, 2, 3],
            vec![2, 1, 4],
            vec![1, 1, 2, 2],
        ] {
            let p = profile(&lengths);
            // Diagram -> sequence -> diagram.
            for d in enumerate_rooted(&p, &budget).unwrap() {
                let seq = encode(&d).unwrap();
                assert_eq!(decode(&seq), d, "roundtrip A on {lengths:?}");
            }
            // Sequence -> diagram -> sequence.
            for s in enumerate_sequences(&p, &budget).unwrap() {
                let d = decode(&s);
                assert_eq!(d.validate(), Ok(()));
                assert_eq!(encode(&d).unwrap(), s, "roundtrip B on {lengths:?}");
            }
        }
    }

    #[test]
    fn token_counts_match_child_counts() {
        let budget = EnumerationBudget::default();
        let p = profile(&[3, 3, 3]);
        for d in enumerate_rooted(&p, &budget).unwrap() {
            let seq = encode(&d).unwrap();
            let k = p.element_count();
            assert_eq!(seq.tokens().len(), k - 1);
            for x in 0..k {
                let children = d
                    .parents()
                    .iter()
                    .filter(|a| a.element() == Some(x))
                    .count();
                let tokens_at_x = seq
                    .tokens()
                    .iter()
                    .filter(|t| t.element() == Some(x))
                    .count();
                assert_eq!(tokens_at_x, children);
            }
        }
    }

    fn arb_sequence() -> impl Strategy<Value = PruferSequence> {
        proptest::collection::vec(1u32..=4, 1..=5)
            .prop_map(|v| ChainProfile::new(v).unwrap())
            .prop_flat_map(|p| {
                let alphabet: Vec<AttachPoint> = p.attach_points().collect();
                let len = p.element_count() - 1;
                proptest::collection::vec(0..alphabet.len(), len).prop_map(move |digits| {
                    let tokens = digits.iter().map(|&d| alphabet[d]).collect();
                    PruferSequence::new(p.clone(), tokens).unwrap()
                })
            })
    }

    proptest! {
        #[test]
        fn decode_then_encode_is_identity(seq in arb_sequence()) {
            let d = decode(&seq);
            prop_assert_eq!(d.validate(), Ok(()));
            prop_assert_eq!(encode(&d).unwrap(), seq);
        }
    }
}
