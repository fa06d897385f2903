//! Graphviz export of the star form of a rooted diagram.
//!
//! Each element is drawn as a triangle with one rectangle per colored slot;
//! the root edge is a single node labeled `"0"`. Attachment edges run from
//! the parent attach point down to the attached element, so `dot -Tsvg`
//! lays the tree out root-first.

use std::fmt::Write as _;

use crate::diagram::{color_name, AttachPoint, RootedDiagram};

/// Renders the diagram as DOT text with deterministic node ordering.
pub fn to_dot(diagram: &RootedDiagram) -> String {
    let profile = diagram.profile();
    let k = profile.element_count();
    let mut out = String::from("digraph diagram {\n");
    out.push_str("  root [shape=circle, label=\"0\"];\n");
    for e in 0..k {
        let name = color_name(e);
        writeln!(out, "  {name} [shape=triangle, label=\"{name}\"];").unwrap();
        for s in 1..=profile.slot_count(e) {
            let slot = AttachPoint::Slot {
                element: e,
                subscript: s,
            }
            .render();
            writeln!(out, "  {slot} [shape=rectangle, label=\"{slot}\"];").unwrap();
        }
    }
    for e in 0..k {
        let name = color_name(e);
        for s in 1..=profile.slot_count(e) {
            let slot = AttachPoint::Slot {
                element: e,
                subscript: s,
            }
            .render();
            writeln!(out, "  {name} -> {slot};").unwrap();
        }
    }
    for e in 0..k {
        let parent = match diagram.parent(e) {
            AttachPoint::Root => "root".to_string(),
            slot => slot.render(),
        };
        writeln!(out, "  {parent} -> {};", color_name(e)).unwrap();
    }
    out.push_str("}\n");
    out
}
