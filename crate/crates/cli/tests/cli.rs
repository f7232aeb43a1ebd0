use std::path::Path;
use std::process::{Command, Output};

fn threegen(args: &[&str], seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_threegen"));
    cmd.args(args).env_remove("BRUNS_SEED");
    if let Some(s) = seed_env {
        cmd.env("BRUNS_SEED", s);
    }
    cmd.output().expect("binary runs")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn koszul4(dir: &Path) -> String {
    let out = path(dir, "koszul.txt");
    let run = threegen(
        &["koszul", "--p", "32003", "--vars", "x,y,z,w", "--out", &out],
        None,
    );
    assert_eq!(run.status.code(), Some(0));
    out
}

fn ideal_line(doc: &str, name: &str) -> String {
    doc.lines()
        .find(|l| l.starts_with(&format!("ideal {name} =")))
        .expect("ideal section present")
        .to_string()
}

#[test]
fn koszul_then_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let k = koszul4(dir.path());
    let doc = std::fs::read_to_string(&k).unwrap();
    assert!(doc.starts_with("ring 32003 x,y,z,w grevlex\n"));
    assert!(doc.contains("complex koszul = d1 d2 d3 d4"));
    let run = threegen(&["check", "--in", &k, "--complex", "koszul"], None);
    assert_eq!(run.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(report["verdict"], "pass");
    assert_eq!(
        report["exactness"]["ranks"],
        serde_json::json!([1, 4, 6, 4, 1])
    );
    // R/(x,y,z,w) is torsion
    let torsion = threegen(
        &[
            "check",
            "--in",
            &k,
            "--complex",
            "koszul",
            "--torsionless",
            "1",
        ],
        None,
    );
    assert_eq!(torsion.status.code(), Some(2));
}

#[test]
fn column_of_variables_is_three_torsionless() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(dir.path(), "omega.txt");
    std::fs::write(
        &input,
        "ring 32003 x,y,z,w grevlex\nmatrix g 4 1\nx;\ny;\nz;\nw;\ncomplex c = g\n",
    )
    .unwrap();
    let pass = threegen(
        &[
            "check",
            "--in",
            &input,
            "--complex",
            "c",
            "--torsionless",
            "3",
        ],
        None,
    );
    assert_eq!(pass.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&pass.stdout).unwrap();
    assert_eq!(report["torsionless"]["verdict"], "pass");
    let fail = threegen(
        &[
            "check",
            "--in",
            &input,
            "--complex",
            "c",
            "--torsionless",
            "4",
        ],
        None,
    );
    assert_eq!(fail.status.code(), Some(2));
}

#[test]
fn flagship_brunsify_gives_three_generators() {
    let dir = tempfile::tempdir().unwrap();
    let k = koszul4(dir.path());
    let out = path(dir.path(), "flag.txt");
    let run = threegen(
        &[
            "brunsify",
            "--in",
            &k,
            "--complex",
            "koszul",
            "--m",
            "2",
            "--seed",
            "7",
            "--out",
            &out,
        ],
        None,
    );
    assert_eq!(
        run.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let doc = std::fs::read_to_string(&out).unwrap();
    let line = ideal_line(&doc, "a");
    assert_eq!(line.split(", ").count(), 3);
    let certs: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{out}.certs.json")).unwrap())
            .unwrap();
    assert_eq!(certs["exactness"]["verdict"], "pass");
    assert_eq!(certs["ranks"], serde_json::json!([1, 3, 5, 4, 1]));
    let check = threegen(&["check", "--in", &out, "--complex", "rewritten"], None);
    assert_eq!(check.status.code(), Some(0));
}

#[test]
fn seed_flag_beats_environment() {
    let dir = tempfile::tempdir().unwrap();
    let k = koszul4(dir.path());
    let run = |name: &str, flag: Option<&str>, env: Option<&str>| {
        let out = path(dir.path(), name);
        let mut args = vec![
            "brunsify",
            "--in",
            &k,
            "--complex",
            "koszul",
            "--m",
            "2",
            "--out",
            &out,
        ];
        if let Some(s) = flag {
            args.extend(["--seed", s]);
        }
        assert_eq!(threegen(&args, env).status.code(), Some(0));
        std::fs::read(format!("{out}.certs.json")).unwrap()
    };
    let by_flag = run("a.txt", Some("5"), Some("9"));
    let by_env = run("b.txt", None, Some("5"));
    let default = run("c.txt", None, None);
    let zero = run("d.txt", Some("0"), None);
    assert_eq!(by_flag, by_env);
    assert_eq!(default, zero);
    let bad = threegen(
        &[
            "brunsify",
            "--in",
            &k,
            "--complex",
            "koszul",
            "--m",
            "2",
            "--out",
            "x",
        ],
        Some("abc"),
    );
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn pdmod_with_s_one_is_the_column_of_variables() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "pd.txt");
    let run = threegen(
        &[
            "pdmod", "--s", "1", "--m", "1", "--p", "32003", "--out", &out,
        ],
        None,
    );
    assert_eq!(run.status.code(), Some(0));
    let doc = std::fs::read_to_string(&out).unwrap();
    assert_eq!(
        doc,
        "ring 32003 x,y grevlex\nmatrix f1 2 1\nx;\ny;\ncomplex res = f1\n"
    );
    let report: serde_json::Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(report["projective_dimension"], 1);
    assert_eq!(report["minimal_generators"], 2);
}

#[test]
fn resolve_writes_a_minimal_resolution() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(dir.path(), "in.txt");
    std::fs::write(
        &input,
        "ring 32003 x,y,z grevlex\nmatrix g 1 4\nx, y, z, x+y;\n",
    )
    .unwrap();
    let out = path(dir.path(), "res.txt");
    let run = threegen(
        &["resolve", "--in", &input, "--matrix", "g", "--out", &out],
        None,
    );
    assert_eq!(run.status.code(), Some(0));
    let doc = std::fs::read_to_string(&out).unwrap();
    assert!(doc.contains("matrix f1 1 3\n"));
    assert!(doc.contains("complex res = f1 f2 f3\n"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(dir.path(), "bad.txt");
    std::fs::write(
        &input,
        "ring 101 x grevlex\nmatrix a 1 1\nx;\nmatrix b 1 1\n0;\ncomplex k = a b\n",
    )
    .unwrap();
    let fail = threegen(&["check", "--in", &input, "--complex", "k"], None);
    assert_eq!(fail.status.code(), Some(2));
    let report: serde_json::Value = serde_json::from_slice(&fail.stdout).unwrap();
    assert_eq!(report["verdict"], "fail");

    std::fs::write(&input, "ring 101 x grevlex\nmatrix a 1 1\nx\n").unwrap();
    let parse = threegen(&["check", "--in", &input, "--complex", "k"], None);
    assert_eq!(parse.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("line 3"));

    assert_eq!(threegen(&["nonsense"], None).status.code(), Some(1));
    let k = koszul4(dir.path());
    let pre = threegen(
        &[
            "brunsify",
            "--in",
            &k,
            "--complex",
            "koszul",
            "--m",
            "0",
            "--out",
            "x",
        ],
        None,
    );
    assert_eq!(pre.status.code(), Some(1));
}
