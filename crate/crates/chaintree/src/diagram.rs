//! Data model for tree-type diagrams assembled from oriented labeled chains.
//!
//! A diagram is built from `k` chain elements, where element `i` contributes
//! `q_i` edges. In the star form used throughout this crate each element is a
//! star: a center with `q_i - 1` ordered colored slots (the bottom edge is
//! washed out). A rooted diagram is a total parent assignment from elements
//! to attach points, where an attach point is either the root edge `"0"` or a
//! slot `(element, subscript)` of some element. Elements are colored `a, b,
//! c, ...` in order; several elements may share an attach point, but the
//! parent graph must be acyclic and an element never attaches to itself.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors produced while parsing profiles, attach points, sequences or
/// diagram JSON. These are input-shape problems; structural problems with a
/// well-formed diagram are reported as [`Violation`]s instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("profile must contain at least one chain length")]
    EmptyProfile,
    #[error("chain lengths must be >= 1 (found 0 at position {position})")]
    ZeroLength { position: usize },
    #[error("malformed profile entry {text:?}")]
    BadProfileEntry { text: String },
    #[error("malformed attach point {text:?}")]
    BadAttachPoint { text: String },
    #[error("malformed element name {text:?}")]
    BadElementName { text: String },
    #[error("color {color} exceeds element count {element_count}")]
    ColorOutOfRange { color: usize, element_count: usize },
    #[error("subscript {subscript} out of range for element {element}: max {max}")]
    SubscriptOutOfRange {
        element: String,
        subscript: u32,
        max: u32,
    },
    #[error("expected {expected} tokens for this profile, found {found}")]
    BadSequenceLength { expected: usize, found: usize },
    #[error("element {name} listed more than once")]
    DuplicateElement { name: String },
    #[error("element {name} missing from parent list")]
    MissingElement { name: String },
    #[error("invalid diagram JSON: {0}")]
    Json(String),
}

/// A structural invariant violated by a [`RootedDiagram`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("slot ({element},{subscript}) out of range: element {element} has {max} slots")]
    SlotOutOfRange {
        element: String,
        subscript: u32,
        max: u32,
    },
    #[error("parent color out of range for element {element}")]
    ParentOutOfRange { element: String },
    #[error("self-attachment of element {element}")]
    SelfAttachment { element: String },
    #[error("cycle {{{}}}", members.join(","))]
    Cycle { members: Vec<String> },
}

/// Canonical name of the element with 0-based index `element`: `a..z` for the
/// first 26 colors, `e27`, `e28`, ... beyond.
pub fn color_name(element: usize) -> String {
    if element < 26 {
        ((b'a' + element as u8) as char).to_string()
    } else {
        format!("e{}", element + 1)
    }
}

/// Parses a canonical element name back to its 0-based index.
pub fn parse_color_name(text: &str) -> Result<usize, ParseError> {
    let bad = || ParseError::BadElementName { text: text.into() };
    let bytes = text.as_bytes();
    match bytes {
        [c] if c.is_ascii_lowercase() => Ok((c - b'a') as usize),
        [b'e', digits @ ..] if !digits.is_empty() => {
            let n: usize = text[1..].parse().map_err(|_| bad())?;
            // Colors 1..=26 are written as letters; only larger ones use the
            // e-prefixed form.
            if n >= 27 {
                Ok(n - 1)
            } else {
                Err(bad())
            }
        }
        _ => Err(bad()),
    }
}

/// The multiset of chain lengths `(q_1, ..., q_k)`, one per element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainProfile {
    lengths: Vec<u32>,
}

impl ChainProfile {
    /// Builds a profile from explicit chain lengths. Every length must be
    /// >= 1 and at least one element is required.
    pub fn new(lengths: Vec<u32>) -> Result<Self, ParseError> {
        if lengths.is_empty() {
            return Err(ParseError::EmptyProfile);
        }
        if let Some(position) = lengths.iter().position(|&q| q == 0) {
            return Err(ParseError::ZeroLength { position });
        }
        Ok(Self { lengths })
    }

    /// The regular profile: `k` chains of `q` edges each.
    pub fn regular(q: u32, k: u32) -> Result<Self, ParseError> {
        Self::new(vec![q; k as usize])
    }

    pub fn lengths(&self) -> &[u32] {
        &self.lengths
    }

    /// Number of elements `k`.
    pub fn element_count(&self) -> usize {
        self.lengths.len()
    }

    /// Number of colored slots of `element`: `q_i - 1`.
    pub fn slot_count(&self, element: usize) -> u32 {
        self.lengths[element] - 1
    }

    /// Size of the attach-point alphabet: all colored slots plus the root,
    /// `sum(q_i - 1) + 1`. Equals `(q-1)k + 1` for the regular profile.
    pub fn alphabet_size(&self) -> u64 {
        self.lengths.iter().map(|&q| (q - 1) as u64).sum::<u64>() + 1
    }

    /// Sum of all chain lengths.
    pub fn total_edges(&self) -> u64 {
        self.lengths.iter().map(|&q| q as u64).sum()
    }

    /// `Some(q)` if all chains have the same length `q`.
    pub fn regular_q(&self) -> Option<u32> {
        let q = self.lengths[0];
        self.lengths.iter().all(|&x| x == q).then_some(q)
    }

    /// All attach points in canonical order: root first, then slots by
    /// (element, subscript).
    pub fn attach_points(&self) -> impl Iterator<Item = AttachPoint> + '_ {
        std::iter::once(AttachPoint::Root).chain((0..self.element_count()).flat_map(|e| {
            (1..=self.slot_count(e)).map(move |s| AttachPoint::Slot {
                element: e,
                subscript: s,
            })
        }))
    }

    /// Whether `point` is the root or a slot that exists in this profile.
    pub fn contains(&self, point: AttachPoint) -> bool {
        match point {
            AttachPoint::Root => true,
            AttachPoint::Slot { element, subscript } => {
                element < self.element_count()
                    && subscript >= 1
                    && subscript <= self.slot_count(element)
            }
        }
    }
}

impl FromStr for ChainProfile {
    type Err = ParseError;

    /// Parses the comma-separated form, e.g. `"1,2,3"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lengths = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|_| ParseError::BadProfileEntry { text: part.into() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(lengths)
    }
}

impl fmt::Display for ChainProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lengths.iter().map(|q| q.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Either the root edge or a colored slot of an element.
///
/// The derived ordering (root first, then slots by element and subscript) is
/// the canonical alphabet order used by sequence enumeration and by the
/// exhaustive oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AttachPoint {
    Root,
    Slot {
        /// 0-based color index of the element that owns the slot.
        element: usize,
        /// 1-based slot subscript, `1..=q_i - 1`.
        subscript: u32,
    },
}

impl AttachPoint {
    /// The element owning this slot, if any.
    pub fn element(&self) -> Option<usize> {
        match *self {
            AttachPoint::Root => None,
            AttachPoint::Slot { element, .. } => Some(element),
        }
    }

    /// Canonical text form: `"0"` for the root, `"a1"`, `"c2"`, ... for
    /// slots (`"e27_1"` style beyond 26 colors).
    pub fn render(&self) -> String {
        match *self {
            AttachPoint::Root => "0".to_string(),
            AttachPoint::Slot { element, subscript } => {
                if element < 26 {
                    format!("{}{}", color_name(element), subscript)
                } else {
                    format!("{}_{}", color_name(element), subscript)
                }
            }
        }
    }

    /// Parses the canonical text form, checking bounds against `profile`.
    pub fn parse(text: &str, profile: &ChainProfile) -> Result<Self, ParseError> {
        if text == "0" {
            return Ok(AttachPoint::Root);
        }
        let bad = || ParseError::BadAttachPoint { text: text.into() };
        let (name, digits) = if let Some(rest) = text.strip_prefix('e').filter(|r| r.contains('_'))
        {
            let (idx, sub) = rest.split_once('_').ok_or_else(bad)?;
            (format!("e{idx}"), sub)
        } else {
            let first = text.chars().next().ok_or_else(bad)?;
            if !first.is_ascii_lowercase() {
                return Err(bad());
            }
            (first.to_string(), &text[1..])
        };
        let element = parse_color_name(&name).map_err(|_| bad())?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let subscript: u32 = digits.parse().map_err(|_| bad())?;
        if element >= profile.element_count() {
            return Err(ParseError::ColorOutOfRange {
                color: element + 1,
                element_count: profile.element_count(),
            });
        }
        let max = profile.slot_count(element);
        if subscript < 1 || subscript > max {
            return Err(ParseError::SubscriptOutOfRange {
                element: color_name(element),
                subscript,
                max,
            });
        }
        Ok(AttachPoint::Slot { element, subscript })
    }
}

impl fmt::Display for AttachPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramJson {
    profile: Vec<u32>,
    parents: Vec<ParentJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParentJson {
    elem: String,
    attach: String,
}

/// An acyclic parent assignment from elements to attach points: the
/// canonical star-form representation of a rooted tree-type diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootedDiagram {
    profile: ChainProfile,
    parents: Vec<AttachPoint>,
}

impl RootedDiagram {
    /// Wraps a parent assignment without checking structural invariants;
    /// call [`validate`](Self::validate) to check them.
    ///
    /// Panics if `parents.len()` differs from the element count.
    pub fn new(profile: ChainProfile, parents: Vec<AttachPoint>) -> Self {
        assert_eq!(
            parents.len(),
            profile.element_count(),
            "one parent per element required"
        );
        Self { profile, parents }
    }

    pub fn profile(&self) -> &ChainProfile {
        &self.profile
    }

    pub fn parents(&self) -> &[AttachPoint] {
        &self.parents
    }

    /// Attach point of `element`.
    pub fn parent(&self, element: usize) -> AttachPoint {
        self.parents[element]
    }

    /// Checks subscript bounds, self-attachment and acyclicity, reporting
    /// the first violated invariant.
    pub fn validate(&self) -> Result<(), Violation> {
        let k = self.profile.element_count();
        for (i, &p) in self.parents.iter().enumerate() {
            if let AttachPoint::Slot { element, subscript } = p {
                if element >= k {
                    return Err(Violation::ParentOutOfRange {
                        element: color_name(i),
                    });
                }
                let max = self.profile.slot_count(element);
                if subscript < 1 || subscript > max {
                    return Err(Violation::SlotOutOfRange {
                        element: color_name(element),
                        subscript,
                        max,
                    });
                }
                if element == i {
                    return Err(Violation::SelfAttachment {
                        element: color_name(i),
                    });
                }
            }
        }
        for start in 0..k {
            let mut cur = start;
            let mut steps = 0;
            while let AttachPoint::Slot { element, .. } = self.parents[cur] {
                cur = element;
                steps += 1;
                if steps > k {
                    return Err(Violation::Cycle {
                        members: self.cycle_members(cur),
                    });
                }
            }
        }
        Ok(())
    }

    /// Collects the cycle reachable from `inside` (which must lie on a
    /// cycle), sorted by color for a deterministic report.
    fn cycle_members(&self, inside: usize) -> Vec<String> {
        let mut cur = inside;
        // After k more steps we are guaranteed to sit on the cycle itself.
        for _ in 0..self.profile.element_count() {
            cur = self.parents[cur].element().expect("walk stays on a cycle");
        }
        let first = cur;
        let mut members = vec![first];
        loop {
            cur = self.parents[cur].element().expect("walk stays on a cycle");
            if cur == first {
                break;
            }
            members.push(cur);
        }
        members.sort_unstable();
        members.into_iter().map(color_name).collect()
    }

    /// Canonical JSON form, e.g.
    /// `{"profile":[3,3],"parents":[{"elem":"a","attach":"0"},{"elem":"b","attach":"a1"}]}`.
    /// Parents are listed in element order; the output is bit-exact.
    pub fn to_json(&self) -> String {
        let dto = DiagramJson {
            profile: self.profile.lengths().to_vec(),
            parents: self
                .parents
                .iter()
                .enumerate()
                .map(|(i, p)| ParentJson {
                    elem: color_name(i),
                    attach: p.render(),
                })
                .collect(),
        };
        serde_json::to_string(&dto).expect("diagram JSON serialization cannot fail")
    }

    /// Parses the canonical JSON form. Every element must appear exactly
    /// once in `parents`; structural invariants are not checked here.
    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        let dto: DiagramJson =
            serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        let profile = ChainProfile::new(dto.profile)?;
        let k = profile.element_count();
        let mut parents: Vec<Option<AttachPoint>> = vec![None; k];
        for entry in &dto.parents {
            let element = parse_color_name(&entry.elem)?;
            if element >= k {
                return Err(ParseError::ColorOutOfRange {
                    color: element + 1,
                    element_count: k,
                });
            }
            if parents[element].is_some() {
                return Err(ParseError::DuplicateElement {
                    name: entry.elem.clone(),
                });
            }
            parents[element] = Some(AttachPoint::parse(&entry.attach, &profile)?);
        }
        let parents = parents
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                p.ok_or(ParseError::MissingElement {
                    name: color_name(i),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { profile, parents })
    }
}

/// A word of `k - 1` attach points: the output of the tree codec. The final
/// root attachment of the last surviving element is implicit, so the stored
/// length is always exactly `k - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PruferSequence {
    profile: ChainProfile,
    tokens: Vec<AttachPoint>,
}

impl PruferSequence {
    /// Builds a sequence, checking the length and every token against the
    /// profile.
    pub fn new(profile: ChainProfile, tokens: Vec<AttachPoint>) -> Result<Self, ParseError> {
        let expected = profile.element_count() - 1;
        if tokens.len() != expected {
            return Err(ParseError::BadSequenceLength {
                expected,
                found: tokens.len(),
            });
        }
        for &t in &tokens {
            if !profile.contains(t) {
                if let AttachPoint::Slot { element, subscript } = t {
                    if element >= profile.element_count() {
                        return Err(ParseError::ColorOutOfRange {
                            color: element + 1,
                            element_count: profile.element_count(),
                        });
                    }
                    return Err(ParseError::SubscriptOutOfRange {
                        element: color_name(element),
                        subscript,
                        max: profile.slot_count(element),
                    });
                }
            }
        }
        Ok(Self { profile, tokens })
    }

    pub fn profile(&self) -> &ChainProfile {
        &self.profile
    }

    pub fn tokens(&self) -> &[AttachPoint] {
        &self.tokens
    }

    /// Canonical text form: comma-separated tokens with no spaces, e.g.
    /// `"b2,0,b1,a1,e2"`. The empty string encodes the k = 1 sequence.
    pub fn render(&self) -> String {
        let parts: Vec<String> = self.tokens.iter().map(AttachPoint::render).collect();
        parts.join(",")
    }

    /// Parses the canonical text form against `profile`.
    pub fn parse(text: &str, profile: &ChainProfile) -> Result<Self, ParseError> {
        let tokens = if text.is_empty() {
            Vec::new()
        } else {
            text.split(',')
                .map(|t| AttachPoint::parse(t, profile))
                .collect::<Result<Vec<_>, _>>()?
        };
        Self::new(profile.clone(), tokens)
    }
}

impl fmt::Display for PruferSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(lengths: &[u32]) -> ChainProfile {
        ChainProfile::new(lengths.to_vec()).unwrap()
    }

    #[test]
    fn parse_root() {
        let p = profile(&[3, 3, 3, 3]);
        assert_eq!(AttachPoint::parse("0", &p).unwrap(), AttachPoint::Root);
    }

    #[test]
    fn parse_slot_token() {
        let p = profile(&[3, 3, 3, 3, 3, 3]);
        assert_eq!(
            AttachPoint::parse("c2", &p).unwrap(),
            AttachPoint::Slot {
                element: 2,
                subscript: 2
            }
        );
    }

    #[test]
    fn parse_subscript_out_of_range() {
        let p = profile(&[3, 3, 3]);
        let err = AttachPoint::parse("c3", &p).unwrap_err();
        assert_eq!(
            err,
            ParseError::SubscriptOutOfRange {
                element: "c".into(),
                subscript: 3,
                max: 2
            }
        );
    }

    #[test]
    fn parse_color_out_of_range() {
        let p = profile(&[3, 3]);
        let err = AttachPoint::parse("c1", &p).unwrap_err();
        assert_eq!(
            err,
            ParseError::ColorOutOfRange {
                color: 3,
                element_count: 2
            }
        );
    }

    #[test]
    fn parse_rejects_garbage() {
        let p = profile(&[3, 3]);
        for text in ["", "a", "1a", "a0x", "A1", "e_1", "e5_1", "00"] {
            assert!(AttachPoint::parse(text, &p).is_err(), "accepted {text:?}");
        }
    }

    #[test]
    fn render_parse_roundtrip() {
        let p = profile(&[4, 1, 3]);
        for point in p.attach_points() {
            let text = point.render();
            assert_eq!(AttachPoint::parse(&text, &p).unwrap(), point);
        }
    }

    #[test]
    fn high_color_names() {
        assert_eq!(color_name(0), "a");
        assert_eq!(color_name(25), "z");
        assert_eq!(color_name(26), "e27");
        assert_eq!(parse_color_name("z").unwrap(), 25);
        assert_eq!(parse_color_name("e27").unwrap(), 26);
        assert!(parse_color_name("e26").is_err());

        let p = ChainProfile::regular(3, 30).unwrap();
        let slot = AttachPoint::Slot {
            element: 28,
            subscript: 2,
        };
        assert_eq!(slot.render(), "e29_2");
        assert_eq!(AttachPoint::parse("e29_2", &p).unwrap(), slot);
    }

    #[test]
    fn alphabet_size_regular() {
        for q in 1..=6u32 {
            for k in 1..=8u32 {
                let p = ChainProfile::regular(q, k).unwrap();
                assert_eq!(p.alphabet_size(), ((q - 1) * k + 1) as u64);
                assert_eq!(p.attach_points().count() as u64, p.alphabet_size());
            }
        }
    }

    #[test]
    fn profile_rejects_bad_input() {
        assert_eq!(
            ChainProfile::new(vec![]).unwrap_err(),
            ParseError::EmptyProfile
        );
        assert_eq!(
            ChainProfile::new(vec![2, 0]).unwrap_err(),
            ParseError::ZeroLength { position: 1 }
        );
        assert!("".parse::<ChainProfile>().is_err());
        assert!("3,x".parse::<ChainProfile>().is_err());
        assert_eq!("1,2,3".parse::<ChainProfile>().unwrap(), profile(&[1, 2, 3]));
    }

    #[test]
    fn validate_accepts_simple_tree() {
        let p = profile(&[3, 3]);
        let d = RootedDiagram::new(
            p,
            vec![
                AttachPoint::Root,
                AttachPoint::Slot {
                    element: 0,
                    subscript: 1,
                },
            ],
        );
        assert_eq!(d.validate(), Ok(()));
    }

    #[test]
    fn validate_rejects_two_cycle() {
        let p = profile(&[3, 3]);
        let d = RootedDiagram::new(
            p,
            vec![
                AttachPoint::Slot {
                    element: 1,
                    subscript: 1,
                },
                AttachPoint::Slot {
                    element: 0,
                    subscript: 1,
                },
            ],
        );
        assert_eq!(
            d.validate(),
            Err(Violation::Cycle {
                members: vec!["a".into(), "b".into()]
            })
        );
    }

    #[test]
    fn validate_rejects_self_attachment() {
        let p = profile(&[2]);
        let d = RootedDiagram::new(
            p,
            vec![AttachPoint::Slot {
                element: 0,
                subscript: 1,
            }],
        );
        assert_eq!(
            d.validate(),
            Err(Violation::SelfAttachment {
                element: "a".into()
            })
        );
    }

    #[test]
    fn validate_rejects_bad_subscript() {
        let p = profile(&[2, 2]);
        let d = RootedDiagram::new(
            p,
            vec![
                AttachPoint::Root,
                AttachPoint::Slot {
                    element: 0,
                    subscript: 2,
                },
            ],
        );
        assert!(matches!(
            d.validate(),
            Err(Violation::SlotOutOfRange { .. })
        ));
    }

    #[test]
    fn diagram_json_golden() {
        let p = profile(&[3, 3]);
        let d = RootedDiagram::new(
            p,
            vec![
                AttachPoint::Root,
                AttachPoint::Slot {
                    element: 0,
                    subscript: 1,
                },
            ],
        );
        let json = d.to_json();
        assert_eq!(
            json,
            r#"{"profile":[3,3],"parents":[{"elem":"a","attach":"0"},{"elem":"b","attach":"a1"}]}"#
        );
        assert_eq!(RootedDiagram::from_json(&json).unwrap(), d);
    }

    #[test]
    fn diagram_json_rejects_duplicates_and_gaps() {
        let dup = r#"{"profile":[3,3],"parents":[{"elem":"a","attach":"0"},{"elem":"a","attach":"0"}]}"#;
        assert!(matches!(
            RootedDiagram::from_json(dup),
            Err(ParseError::DuplicateElement { .. })
        ));
        let gap = r#"{"profile":[3,3],"parents":[{"elem":"a","attach":"0"}]}"#;
        assert!(matches!(
            RootedDiagram::from_json(gap),
            Err(ParseError::MissingElement { .. })
        ));
    }

    #[test]
    fn sequence_text_roundtrip() {
        let p = profile(&[3, 3, 3, 3, 3, 3]);
        let s = PruferSequence::parse("b2,0,b1,a1,e2", &p).unwrap();
        assert_eq!(s.render(), "b2,0,b1,a1,e2");
        assert_eq!(s.tokens().len(), 5);

        let single = profile(&[3]);
        let empty = PruferSequence::parse("", &single).unwrap();
        assert_eq!(empty.tokens().len(), 0);
        assert_eq!(empty.render(), "");
    }

    #[test]
    fn sequence_rejects_wrong_length() {
        let p = profile(&[3, 3, 3]);
        assert!(matches!(
            PruferSequence::parse("0", &p),
            Err(ParseError::BadSequenceLength {
                expected: 2,
                found: 1
            })
        ));
    }
}
