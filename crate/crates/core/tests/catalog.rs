use loopkit::search::{enumerate_loops, Catalog, Filter, SearchConfig, MANIFEST_FILE};
use loopkit::verifier::{verify_catalog, StatementId, VerifyConfig};
use loopkit::Exec;

fn order5() -> Catalog {
    enumerate_loops(5, &Filter::all(), None, &SearchConfig::default()).unwrap()
}

#[test]
fn save_and_load_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cat = order5();
    cat.save(dir.path()).unwrap();
    let back = Catalog::load(dir.path()).unwrap();
    assert_eq!(back.loops, cat.loops);
    assert_eq!(back.digest, cat.digest);
    assert_eq!(back.manifest(), cat.manifest());
}

#[test]
fn load_rejects_tampered_tables() {
    let dir = tempfile::tempdir().unwrap();
    order5().save(dir.path()).unwrap();
    std::fs::copy(
        dir.path().join("loop_000001.tbl"),
        dir.path().join("loop_000000.tbl"),
    )
    .unwrap();
    let err = Catalog::load(dir.path()).unwrap_err().to_string();
    assert!(err.contains("digest mismatch"), "{err}");

    std::fs::remove_file(dir.path().join("loop_000003.tbl")).unwrap();
    let err = Catalog::load(dir.path()).unwrap_err().to_string();
    assert!(err.contains("manifest lists 56"), "{err}");
}

#[test]
fn load_requires_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    order5().save(dir.path()).unwrap();
    std::fs::remove_file(dir.path().join(MANIFEST_FILE)).unwrap();
    assert!(Catalog::load(dir.path()).is_err());
}

#[test]
fn digests_do_not_depend_on_execution_mode() {
    let filter: Filter = "OS2".parse().unwrap();
    let seq = enumerate_loops(6, &filter, None, &SearchConfig::sequential()).unwrap();
    let par = enumerate_loops(
        6,
        &filter,
        None,
        &SearchConfig {
            exec: Exec::Parallel,
            ..SearchConfig::default()
        },
    )
    .unwrap();
    assert_eq!(seq.len(), 120);
    assert_eq!(seq.digest, par.digest);
    let limited = enumerate_loops(6, &filter, Some(7), &SearchConfig::sequential()).unwrap();
    assert_eq!(limited.loops, seq.loops[..7]);
}

#[test]
fn reports_do_not_depend_on_execution_mode() {
    let cat = enumerate_loops(6, &"OS2".parse().unwrap(), None, &SearchConfig::default()).unwrap();
    for s in [
        StatementId::InnerMappings,
        StatementId::RhoFifthPower,
        StatementId::CfSubgroups,
    ] {
        let seq = verify_catalog(&cat, s, &VerifyConfig::sequential()).to_text();
        let par = verify_catalog(&cat, s, &VerifyConfig::default()).to_text();
        assert_eq!(seq, par, "{s}");
    }
}
