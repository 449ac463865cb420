mod common;

use tieup_core::score::score_document;
use tieup_core::template::{parse_objects, serialize_templates, Status};
use tieup_core::Stage;

use common::*;

fn extract_fixture(name: &str, discourse: bool) -> Vec<String> {
    let mut extractor = shipped_extractor();
    extractor.discourse = discourse;
    fixture_docs(name)
        .iter()
        .map(|d| serialize_templates(&extractor.extract(d).templates).unwrap())
        .collect()
}

#[test]
fn tanabe_matches_golden() {
    let out = extract_fixture("tanabe.tok", true);
    assert_eq!(out, vec![read_fixture("tanabe.tpl")]);
}

#[test]
fn xyz_matches_golden() {
    let out = extract_fixture("xyz.tok", true);
    assert_eq!(out, vec![read_fixture("xyz.tpl")]);
}

#[test]
fn golden_output_scores_perfectly() {
    for name in ["tanabe", "xyz"] {
        let key = parse_objects(&read_fixture(&format!("{name}.tpl"))).unwrap();
        let resp = parse_objects(&extract_fixture(&format!("{name}.tok"), true)[0]).unwrap();
        let s = score_document(&key, &resp);
        assert_eq!(s.counts.metrics().err.percent(), "0.0", "{name}");
    }
}

#[test]
fn extraction_is_deterministic() {
    for name in ["tanabe.tok", "xyz.tok", "pronouns.tok"] {
        assert_eq!(extract_fixture(name, true), extract_fixture(name, true));
    }
}

#[test]
fn flat_mode_keeps_references_closed() {
    let extractor = {
        let mut e = shipped_extractor();
        e.discourse = false;
        e
    };
    for name in ["tanabe.tok", "xyz.tok", "pronouns.tok"] {
        for doc in fixture_docs(name) {
            let ex = extractor.extract(&doc);
            assert!(ex.pronouns.is_empty());
            assert!(ex.templates.dangling_reference().is_none());
            assert!(ex.templates.tie_ups.iter().all(|t| t.is_well_formed()));
        }
    }
}

#[test]
fn flat_mode_drops_pronoun_partners() {
    // 両社 names nobody without resolution, so the venture in the second
    // sentence is not attached
    let out = extract_fixture("tanabe.tok", false);
    assert!(out[0].contains("<TIE_UP-1>"));
    assert!(!out[0].contains("JOINT_VENTURE"));
    assert!(!out[0].contains("<TIE_UP-2>"));
}

#[test]
fn pronoun_documents_produce_tie_ups() {
    let extractor = shipped_extractor();
    for doc in fixture_docs("pronouns.tok") {
        let ex = extractor.extract(&doc);
        assert!(!ex.pronouns.is_empty(), "{}", doc.doc_id);
        assert!(ex.pronouns.iter().all(|p| !p.referents.is_empty()), "{}", doc.doc_id);
        for t in &ex.templates.tie_ups {
            assert_eq!(t.status, Status::Existing);
        }
    }
}

#[test]
fn dumps_name_every_stage() {
    let doc = &fixture_docs("tanabe.tok")[0];
    let ex = shipped_extractor().extract(doc);
    assert!(ex.dump(Stage::Registry).contains("田辺製薬"));
    assert!(ex.dump(Stage::Matches).contains("Establish3"));
    assert!(ex.dump(Stage::Topics).starts_with("s0 marked"));
    assert!(ex.dump(Stage::Segments).contains("cluster"));
}
