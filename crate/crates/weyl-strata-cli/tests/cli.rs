//! End-to-end tests of the binary: documented examples, exit codes, and
//! output determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weyl-strata"))
        .args(args)
        .env_remove("WEYL_STRATA_RANK_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn verify_a1_all_passes() {
    let out = run(&["verify", "--type", "A1", "--suite", "all"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("summary: 9/9 suites passed"), "{text}");
    assert_eq!(text.matches("[PASS]").count(), 9);
}

#[test]
fn verify_b2_steinberg_passes() {
    let out = run(&["verify", "--type", "B2", "--suite", "steinberg"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("[PASS] steinberg type=B2 delta=id"));
}

#[test]
fn verify_a2_flip_lemma7_passes() {
    let out = run(&["verify", "--type", "A2", "--delta", "1,0", "--suite", "lemma7"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("[PASS] lemma7 type=A2 delta=1,0"));
}

#[test]
fn verify_falsification_exits_3_with_witness() {
    let out = run(&["verify", "--type", "A2", "--delta", "1,0", "--suite", "steinberg"]);
    assert_eq!(code(&out), 3);
    let text = stdout(&out);
    assert!(text.contains("[FAIL] steinberg type=A2 delta=1,0"), "{text}");
    assert!(text.contains("[falsification] multiplicity of T={} at J={} is 3, identity requires 1"));
}

#[test]
fn verify_suite_failures_merge_deterministically_across_jobs() {
    let sequential = run(&["verify", "--type", "B2", "--suite", "all"]);
    let parallel = run(&["verify", "--type", "B2", "--suite", "all", "--jobs", "4"]);
    assert_eq!(code(&sequential), 0);
    assert_eq!(code(&parallel), 0);
    assert_eq!(stdout(&sequential), stdout(&parallel));
}

#[test]
fn enumerate_semistable_a2_is_the_four_row_table() {
    let out = run(&["enumerate", "--type", "A2", "--semistable", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "J,w_word,v_word,K,dim\n\
         0,[],[],3,6\n\
         1,[],[],3,7\n\
         2,[],[],3,7\n\
         3,[],[],3,8\n"
    );
}

#[test]
fn enumerate_pieces_a1_full_k_has_three_rows() {
    // K = I leaves a single minimal coset representative for v, so the
    // family is [{}, e, e], [{}, s0, e], [I, e, e].
    let out = run(&["enumerate", "--type", "A1", "--pieces", "--K", "all", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "J,w_word,v_word,K,dim\n\
         0,[],[],1,2\n\
         0,[0],[],1,1\n\
         1,[],[],1,3\n"
    );
}

#[test]
fn enumerate_parabolic_closure_matches_the_library() {
    let out = run(&[
        "enumerate", "--type", "A2", "--delta", "1,0", "--parabolic-closure", "--K", "",
        "--format", "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    // One row per (J, w) with w delta-fixed: two each for the three proper
    // J, and only [I, e, e] at the top since W^I cap W^delta = {e}.
    assert_eq!(text.lines().count(), 8, "{text}");
    assert!(text.contains("3,[],[],0,5"));
}

#[test]
fn closure_downset_of_the_top_a1_piece_is_the_diamond() {
    let out = run(&["closure", "--type", "A1", "--J", "all", "--K", ""]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.matches("label=").count(), 4, "{text}");
    assert_eq!(text.matches("->").count(), 4, "{text}");
    assert!(text.contains("J={0};w=[];v=[];dim=2"));
}

#[test]
fn closure_downset_of_the_identity_piece_has_two_nodes() {
    // [{}, e, e] is not minimal: [{}, s0, e] of dimension 0 lies below it
    // (x = e, y = e gives s0 >= e and e <= e).
    let out = run(&["closure", "--type", "A1", "--J", "", "--K", ""]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.matches("label=").count(), 2, "{text}");
    assert!(text.contains("J={};w=[0];v=[];dim=0"));
}

#[test]
fn closure_normalizes_unreduced_words() {
    let direct = run(&["closure", "--type", "A2", "--J", "0", "--K", "", "--w", "[1]"]);
    let padded = run(&["closure", "--type", "A2", "--J", "0", "--K", "", "--w", "1,0,0"]);
    assert_eq!(code(&direct), 0);
    assert_eq!(stdout(&direct), stdout(&padded));
}

#[test]
fn twisted_classes_of_the_flip_on_a2() {
    let out = run(&[
        "twisted-classes", "--type", "A2", "--delta", "1,0", "--mode", "classes",
        "--format", "csv",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "rep,size\n[],3\n[0],2\n\"[0,1,0]\",1\n");
}

#[test]
fn twisted_pieces_empty_k_are_singletons() {
    let out = run(&["twisted-classes", "--type", "A1", "--K", "", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "w1,w2,I,size\n[],[],0,1\n[],[0],0,1\n[0],[],0,1\n[0],[0],0,1\n"
    );
}

#[test]
fn steinberg_table_orbit_signs_pass_where_node_signs_fail() {
    let nodes = run(&["steinberg-table", "--type", "A2", "--delta", "1,0"]);
    assert_eq!(code(&nodes), 3);
    assert!(stdout(&nodes).contains("A2,\"1,0\",0,0,3,1,false"));
    let orbits = run(&["steinberg-table", "--type", "A2", "--delta", "1,0", "--signs", "orbits"]);
    assert_eq!(code(&orbits), 0);
    assert!(!stdout(&orbits).contains("false"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify", "--type", "Z9", "--suite", "all"][..],
        &["verify", "--type", "A2", "--suite", "bogus"][..],
        &["enumerate", "--type", "A2"][..],
        &["enumerate", "--type", "A2", "--pieces", "--K", "7"][..],
        &["twisted-classes", "--type", "A2", "--delta", "1,0", "--K", "0"][..],
        &["verify", "--suite", "all"][..],
        &["closure", "--type", "A1", "--format", "csv"][..],
        &["verify", "--type", "A1", "--suite", "all", "--jobs", "0"][..],
    ] {
        let out = run(args);
        assert_eq!(code(&out), 2, "args {args:?}: {}", stderr(&out));
    }
}

#[test]
fn rank_cap_env_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_weyl-strata"))
        .args(["verify", "--type", "A3", "--suite", "bruhat-oracle"])
        .env("WEYL_STRATA_RANK_CAP", "2")
        .output()
        .expect("binary runs");
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("exceeds the configured cap"));
}

#[test]
fn custom_matrix_runs() {
    let out = run(&["enumerate", "--matrix", "[[2,-1],[-3,2]]", "--semistable", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    // A G2-shaped matrix: |W| = 12, longest element of length 6.
    assert!(stdout(&out).contains("3,[],[],3,14"));
}

#[test]
fn enumerate_json_round_trips() {
    let out = run(&["enumerate", "--type", "B2", "--pieces", "--K", "0", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let group = weyl_strata::WeylGroup::of_type(weyl_strata::TypeName::B(2), 8).unwrap();
    let (delta, pieces) = weyl_strata::export::pieces_from_json(&group, &stdout(&out)).unwrap();
    assert_eq!(delta, weyl_strata::DiagramAut::identity(group.cartan()));
    let expected = weyl_strata::compact::enumerate_pieces(
        &group,
        &delta,
        weyl_strata::NodeSet::singleton(0),
    )
    .unwrap();
    assert_eq!(pieces, expected);
}

#[test]
fn out_flag_writes_the_file() {
    let dir = std::env::temp_dir().join("weyl-strata-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.txt");
    let out = run(&[
        "verify", "--type", "A1", "--suite", "bruhat-oracle",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("[PASS] bruhat-oracle type=A1 delta=id"));
    std::fs::remove_file(&path).ok();
}
