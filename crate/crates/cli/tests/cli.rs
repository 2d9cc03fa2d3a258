use std::io::Write;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_surfflow"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn temp_file(name: &str, body: &str) -> String {
    let path = std::env::temp_dir().join(format!("surfflow-{}-{name}", std::process::id()));
    std::fs::File::create(&path)
        .unwrap()
        .write_all(body.as_bytes())
        .unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn grid_solution_lines() {
    let (code, out, _) = run(&["solve", "grid:3x3", "--modulus", "3"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = out.lines().map(|l| l.split(' ').next().unwrap()).collect();
    assert_eq!(names.len(), 9);
    assert_eq!(names[0], "v0,0");
    assert_eq!(names[5], "v1,2");
}

#[test]
fn q13_prints_none() {
    let (code, out, _) = run(&["solve", "q13", "--oracle"]);
    assert_eq!((code, out.as_str()), (1, "NONE\n"));
}

#[test]
fn stats_of_q13() {
    let (code, out, _) = run(&["stats", "q13"]);
    assert_eq!(code, 0);
    for want in [
        "genus 2",
        "qstar 1",
        "bstar 1",
        "faces 13x4",
        "vertices 13",
        "edges 26",
    ] {
        assert!(out.lines().any(|l| l == want), "missing {want}");
    }
}

#[test]
fn invalid_inputs_exit_two() {
    assert_eq!(run(&["solve", "grid:3x3", "--modulus", "4"]).0, 2);
    assert_eq!(run(&["solve", "grid:2x3"]).0, 2);
    assert_eq!(run(&["solve", "/nonexistent/map"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    let unknown = temp_file("unknown", "9 0\n");
    assert_eq!(run(&["solve", "grid:3x3", "--precolor", &unknown]).0, 2);
    let color = temp_file("color", "0 3\n");
    let (code, _, err) = run(&["solve", "grid:3x3", "--precolor", &color]);
    assert_eq!(code, 2);
    assert!(err.contains("color out of range"));
    let garbage = temp_file("garbage.surf", "surfmap 1\nhalfedges 3\n");
    assert_eq!(run(&["stats", &garbage]).0, 2);
}

#[test]
fn precoloring_is_respected() {
    let pre = temp_file("pre", "# corner\nv0,0 2\n4 1\n");
    let (code, out, _) = run(&["solve", "grid:3x3", "--precolor", &pre]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "v0,0 2"));
    assert!(out.lines().any(|l| l == "v1,1 1"));
    let clash = temp_file("clash", "0 0\n1 0\n");
    let (code, out, _) = run(&["solve", "grid:3x3", "--precolor", &clash]);
    assert_eq!((code, out.as_str()), (1, "NONE\n"));
}

#[test]
fn gen_and_dual_round_trip_through_files() {
    let (_, text, _) = run(&["gen", "grid:3x4"]);
    let path = temp_file("grid.surf", &text);
    assert_eq!(run(&["gen", &path]).1, text);
    let (_, dual, _) = run(&["dual", &path]);
    let dpath = temp_file("dual.surf", &dual);
    assert_eq!(run(&["dual", &dpath]).0, 0);
    let (_, stats, _) = run(&["stats", &dpath]);
    assert!(stats.contains("genus 2"));
    let (code, out, _) = run(&["solve", &path]);
    assert_eq!(code, 0);
    assert!(out.starts_with("v0 "));
}

#[test]
fn polytope_of_bouquet() {
    let (code, out, _) = run(&["polytope", "bouquet"]);
    assert_eq!(code, 0);
    assert!(out.contains("points 4\n"));
    assert!(out.contains("\n1 1 | 0\n"));
    assert_eq!(run(&["polytope", "grid:3x3"]).0, 2);
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["solve", "grid:4x4", "--jobs", "2"][..],
        &["gen", "random:4:7:9"],
        &["hollow2d-verify", "--smoke"],
    ] {
        assert_eq!(run(args).1, run(args).1);
    }
    assert_eq!(
        run(&["solve", "grid:4x4", "--jobs", "3"]).1,
        run(&["solve", "grid:4x4"]).1
    );
}
