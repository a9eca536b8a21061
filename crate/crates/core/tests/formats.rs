mod common;

use heegaard_seifert::format::*;
use heegaard_seifert::seifert::generalized_seifert;
use proptest::prelude::*;

#[test]
fn poincare_graph_round_trips_to_the_same_value() {
    let g = common::graph("poincare.hg");
    let text = serialize_hg(&g);
    assert_eq!(parse_hg(&text).unwrap(), g);
    assert_eq!(serialize_hg(&parse_hg(&text).unwrap()), text);
}

#[test]
fn every_diagram_fixture_round_trips() {
    for (hg, tgl) in [
        ("poincare.hg", "A1.tgl"),
        ("poincare.hg", "A2.tgl"),
        ("lens.hg", "lens_loop.tgl"),
        ("sphere.hg", "trefoil.tgl"),
        ("sphere.hg", "figure8.tgl"),
    ] {
        let g = common::graph(hg);
        let d = common::diagram(&g, tgl);
        assert_eq!(parse_tgl(&serialize_tgl(&d), &g).unwrap(), d, "{tgl}");
    }
}

#[test]
fn plat_fixtures_round_trip() {
    for name in ["unknot_p1.plat", "trefoil_p1.plat", "figure8_p1.plat", "figure8_mismatch.plat", "hopf.plat"] {
        let p = parse_plat(&common::fixture(name)).unwrap();
        assert_eq!(parse_plat(&serialize_plat(&p)).unwrap(), p, "{name}");
    }
}

#[test]
fn surface_report_round_trips() {
    let g = common::graph("poincare.hg");
    let d = common::diagram(&g, "A1.tgl");
    let s = generalized_seifert(&g, &d).unwrap().surface;
    assert_eq!(parse_surf(&serialize_surf(&s)).unwrap(), s);
}

#[test]
fn empty_graph_file_reports_missing_genus() {
    let err = parse_hg("").unwrap_err();
    assert!(err.to_string().contains("missing genus"), "{err}");
}

#[test]
fn unknown_edge_is_named_with_its_position() {
    let g = common::graph("lens.hg");
    let text = "vertex 1+ : a,s,b\nvertex 1- : b',t,a'\nstrand g : 1-.t tnope:0:+ 1+.s\npassage 1+.s ~ 1-.t\n";
    let err = parse_tgl(text, &g).unwrap_err();
    let d = &err.diagnostics[0];
    assert_eq!(d.line, 3);
    assert!(d.to_string().contains("nope"), "{d}");
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let text = format!("# header\n\n{}  # trailing\n", common::fixture("sphere.hg").trim_end());
    assert_eq!(parse_hg(&text).unwrap().genus, 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn parsers_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..400)) {
        let text = String::from_utf8_lossy(&bytes);
        let _ = parse_hg(&text);
        let _ = parse_plat(&text);
        let _ = parse_surf(&text);
        let _ = parse_tgl(&text, &common::graph("poincare.hg"));
    }

    #[test]
    fn near_miss_text_never_panics(
        base in prop_oneof![Just("poincare.hg"), Just("A2.tgl"), Just("figure8_p1.plat")],
        cut in 0usize..2000,
        junk in "[ a-z0-9:.,'~+#>-]{0,12}",
    ) {
        let mut text = common::fixture(base);
        let at = text.char_indices().map(|(i, _)| i).nth(cut % text.chars().count()).unwrap_or(0);
        text.insert_str(at, &junk);
        let g = common::graph("poincare.hg");
        let _ = parse_hg(&text);
        let _ = parse_tgl(&text, &g);
        let _ = parse_plat(&text);
    }
}
