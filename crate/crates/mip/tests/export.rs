use platoon_mip::{export_model, read_lp, solve, to_mps, ExportFormat, MipConfig, MipModel, ObjectiveSense, Sense};

fn one_variable() -> MipModel {
    let mut m = MipModel::new("single");
    let x = m.add_integer("x", 0.0, 10.0);
    m.add_constraint("cap", vec![(x, 2.0)], Sense::Le, 7.0);
    m.set_objective(ObjectiveSense::Maximize, vec![(x, 3.0)], 1.0);
    m
}

#[test]
fn one_variable_mps_golden() {
    let expected = "\
NAME          single
OBJSENSE
    MAX
ROWS
 N  OBJ
 L  cap
COLUMNS
    MARKER0     'MARKER'                 'INTORG'
    x         OBJ                  3   cap                  2
    MARKER1     'MARKER'                 'INTEND'
RHS
    RHS       OBJ                 -1   cap                  7
BOUNDS
 UP BND       x                   10
ENDATA
";
    assert_eq!(to_mps(&one_variable()), expected);
}

#[test]
fn one_variable_lp_golden() {
    let expected = "\
\\ single
Maximize
 obj: 3.0 x + 1.0
Subject To
 cap: 2.0 x <= 7.0
Bounds
 0.0 <= x <= 10.0
General
 x
End
";
    assert_eq!(platoon_mip::to_lp(&one_variable()), expected);
}

#[test]
fn long_names_get_injective_mps_codes() {
    let mut m = MipModel::new("long");
    let a = m.add_binary("x_10_11_3");
    let b = m.add_binary("x_10_11_4");
    m.add_constraint("link_10_11_3_4", vec![(a, 1.0), (b, -1.0)], Sense::Eq, 0.0);
    let text = to_mps(&m);
    assert!(text.contains("C0000000") && text.contains("C0000001"));
    assert!(text.contains(" E  R0000000"));
    assert!(!text.contains("x_10_11"));
}

#[test]
fn file_export_round_trips_through_the_lp_reader() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.lp");
    let m = one_variable();
    export_model(&m, ExportFormat::LpText, &path).unwrap();
    let back = read_lp(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back, m);
    let a = solve(&m, &MipConfig::default()).unwrap();
    let b = solve(&back, &MipConfig::default()).unwrap();
    assert_eq!(a.objective, b.objective);
    assert_eq!(a.objective, 10.0);

    let mps = dir.path().join("m.mps");
    export_model(&m, ExportFormat::Mps, &mps).unwrap();
    assert!(std::fs::read_to_string(mps).unwrap().ends_with("ENDATA\n"));
}
