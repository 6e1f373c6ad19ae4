mod common;

use gkcalc_core::words::{applicable_rewrites, expand, rewrite_one, Registry, Rewrite};
use gkcalc_core::WordError;

use common::corpus;

#[test]
fn composition_is_typed_left_to_right() {
    let ws = corpus();
    let w = ws.parse_word("gen_p . phi").unwrap();
    assert_eq!(w.source().name(), "C");
    assert_eq!(w.target().name(), "CM2");
}

#[test]
fn ill_typed_composition_reports_position() {
    let ws = corpus();
    let err = gkcalc_core::words::parse("gen_p . gen_q", &ws).unwrap_err();
    assert!(matches!(err, WordError::TypeMismatch { pos: 7, .. }), "{err:?}");
}

#[test]
fn unknown_names_and_bad_brackets_are_rejected() {
    let ws = corpus();
    assert!(matches!(gkcalc_core::words::parse("nope", &ws), Err(WordError::Unknown { .. })));
    assert!(matches!(gkcalc_core::words::parse("(gen_p . phi", &ws), Err(WordError::Unbalanced { .. })));
    assert!(matches!(gkcalc_core::words::parse("rot@2", &ws), Err(WordError::NotEndpoint(_))));
}

#[test]
fn sums_must_share_endpoints() {
    let ws = corpus();
    assert!(ws.parse_word("gen_p + gen_q").is_ok());
    assert!(matches!(gkcalc_core::words::parse("gen_p + diag", &ws), Err(WordError::SumMismatch { .. })));
}

#[test]
fn synthetic_letters_parse() {
    let ws = corpus();
    let w = ws.parse_word("gen_p . e^-1 . diag . Delta[s_cc] . 1[C] . rot@0").unwrap();
    assert_eq!(w.target().name(), "M2");
    let sop = expand(&w);
    assert_eq!(sop.terms.len(), 1);
    assert_eq!(sop.terms[0].letters.len(), 6);
}

#[test]
fn expansion_distributes_and_tracks_signs() {
    let ws = corpus();
    let w = ws.parse_word("diag . (swap - p1 . i1) . p2").unwrap();
    let sop = expand(&w);
    assert_eq!(sop.terms.len(), 2);
    assert!(!sop.terms[0].negative && sop.terms[1].negative);
    assert_eq!(sop.to_string(), "diag . swap . p2 - diag . p1 . i1 . p2");
    assert!(sop.is_well_typed());
}

#[test]
fn stored_words_expand_inline() {
    let ws = corpus();
    let stored = ws.word("w_zero").unwrap();
    assert_eq!(expand(&stored).terms.len(), 2);
    let w = ws.parse_word("w_p").unwrap();
    assert_eq!(expand(&w).to_string(), "gen_p . phi");
}

#[test]
fn dump_ast_is_a_typed_tree() {
    let ws = corpus();
    let json = ws.parse_word("gen_p . phi").unwrap().to_json();
    let text = json.to_string();
    assert!(text.contains("gen_p") && text.contains("CM2"), "{text}");
}

#[test]
fn every_rewrite_keeps_words_well_typed() {
    let ws = corpus();
    let vocab = ws.vocabulary();
    let sop = expand(&ws.parse_word("diag . Delta[s_cc] . i1 . p1 . e . e^-1 + diag . p1 . e . e^-1").unwrap());
    let rewrites = applicable_rewrites(&sop, &vocab);
    let rules: std::collections::BTreeSet<&str> = rewrites.iter().map(Rewrite::rule).collect();
    assert!(["b", "c", "d", "f"].iter().all(|r| rules.contains(r)), "{rules:?}");
    for r in &rewrites {
        let out = rewrite_one(&sop, r).unwrap();
        assert!(out.is_well_typed(), "{r}");
        assert_eq!(out.target.name(), sop.target.name());
    }
}

#[test]
fn rewrites_apply_only_at_matching_sites() {
    let ws = corpus();
    let sop = expand(&ws.parse_word("gen_p . phi").unwrap());
    let wrong = Rewrite::CancelCorner { term: 0, at: 0 };
    assert!(matches!(rewrite_one(&sop, &wrong), Err(WordError::NotApplicable { .. })));
}

#[test]
fn composing_letters_names_the_composite() {
    let ws = corpus();
    let sop = expand(&ws.parse_word("gen_p . phi").unwrap());
    let out = rewrite_one(&sop, &Rewrite::ComposeHoms { term: 0, at: 0 }).unwrap();
    assert_eq!(out.to_string(), "(gen_p.phi)");
    assert_eq!(expand(&ws.parse_word("(gen_p.phi)").unwrap()).terms[0].letters.len(), 2);
}

#[test]
fn homotopy_endpoints_swap() {
    let ws = corpus();
    let sop = expand(&ws.parse_word("rot@0").unwrap());
    let out = rewrite_one(&sop, &Rewrite::SwapEndpoint { term: 0, at: 0 }).unwrap();
    assert_eq!(out.to_string(), "rot@1");
}
