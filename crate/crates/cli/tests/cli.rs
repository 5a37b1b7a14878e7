use std::fs;

use assert_cmd::Command;

fn wk() -> Command {
    let mut cmd = Command::cargo_bin("wk").unwrap();
    cmd.env_remove("WK_CACHE_DIR");
    cmd
}

fn stdout_of(cmd: &mut Command) -> String {
    let out = cmd.output().unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn tau_examples() {
    wk().args(["tau", "--genus", "0", "--powers", "0,0,0"]).assert().success().code(0).stdout("1\n");
    wk().args(["tau", "--genus", "1", "--powers", "1"]).assert().success().stdout("1/24\n");
    wk().args(["tau", "--genus", "1", "--powers", "0,0,3"]).assert().success().stdout("1/24\n");
    wk().args(["tau", "--genus", "2", "--powers", "4"]).assert().success().stdout("1/1152\n");
    wk().args(["tau", "--genus", "1", "--powers", "1,1"]).assert().success().stdout("1/24\n");
    wk().args(["tau", "--genus", "1", "--powers", "2,1,0"]).assert().success().stdout("1/12\n");
    wk().args(["tau", "--genus", "1", "--powers", "2,0,0"]).assert().success().stdout("0\n");
}

#[test]
fn tau_tsv() {
    wk().args(["--format", "tsv", "tau", "-g", "1", "-d", "1"])
        .assert()
        .success()
        .stdout("g\tpowers\tvalue\n1\t1\t1/24\n");
}

#[test]
fn domain_errors_exit_two() {
    wk().args(["tau", "--genus", "0", "--powers", "0,0"]).assert().code(2);
    wk().args(["pn", "-n", "3", "-r", "2"]).assert().code(2);
    wk().args(["pn", "-n", "2", "-r", "0"]).assert().code(2);
    wk().args(["agn", "--genus", "0", "-n", "1"]).assert().code(2);
    wk().args(["dtable", "-n", "3", "--r-max", "1"]).assert().code(2);
    wk().args(["tau", "--genus", "x", "--powers", "1"]).assert().code(2);
}

#[test]
fn pn_examples() {
    wk().args(["pn", "-n", "4", "-r", "3", "--basis", "schur"]).assert().success().stdout("s[3,3,2,2] 1/24\n");
    wk().args(["pn", "-n", "5", "-r", "1", "--basis", "elementary"])
        .assert()
        .success()
        .stdout("e[5] 27/10\ne[4,1] -3/2\ne[3,1,1] 1/2\n");
    wk().args(["pn", "-n", "3", "-r", "0"]).assert().success().stdout("s[-] 1\n");
}

#[test]
fn agn_examples() {
    wk().args(["agn", "--genus", "0", "-n", "5", "--basis", "elementary"]).assert().success().stdout("e[1,1] 1\n");
    wk().args(["agn", "--genus", "1", "-n", "4", "--basis", "elementary"])
        .assert()
        .success()
        .stdout("e[4] -1/12\ne[3,1] -1/24\ne[2,1,1] -1/24\ne[1,1,1,1] 1/24\n");
    wk().args(["agn", "--genus", "1", "-n", "1"]).assert().success().stdout("m[1] 1/24\n");
    let tsv = stdout_of(wk().args(["--format", "tsv", "agn", "--genus", "1", "-n", "3"]));
    assert!(tsv.starts_with("basis\tpartition\tcoefficient\n"));
    assert!(tsv.contains("m\t1,1,1\t1/12\n"));
}

#[test]
fn dtable_files_are_canonical_and_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    wk().arg("--cache").arg(&cache).args(["dtable", "-n", "3", "--r-max", "1"]).assert().success();
    let text = fs::read_to_string(cache.join("dtable.txt")).unwrap();
    assert_eq!(text, "# dtable v1\nn=3 r=0\n- 1\n\nn=3 r=1\n1,1,1 1/2\n");

    wk().env("WK_CACHE_DIR", &cache).args(["dtable", "-n", "4", "--r-max", "3"]).assert().success();
    let first = fs::read(cache.join("dtable.txt")).unwrap();
    let text = String::from_utf8(first.clone()).unwrap();
    for block in ["n=4 r=0\n1 1\n", "n=4 r=1\n2,1,1 1/2\n1,1,1,1 -1\n", "n=4 r=3\n3,3,2,2 1/24\n"] {
        assert!(text.contains(block), "{block:?} missing from\n{text}");
    }
    wk().env("WK_CACHE_DIR", &cache).args(["dtable", "-n", "4", "--r-max", "3"]).assert().success();
    assert_eq!(fs::read(cache.join("dtable.txt")).unwrap(), first);
    wk().env("WK_CACHE_DIR", &cache)
        .args(["dtable", "-n", "4", "--r-max", "3", "--route", "bootstrap"])
        .assert()
        .success();
    assert_eq!(fs::read(cache.join("dtable.txt")).unwrap(), first);
}

#[test]
fn dtable_on_unwritable_path_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain-file");
    fs::write(&file, "not a directory").unwrap();
    wk().arg("--cache").arg(file.join("cache")).args(["dtable", "-n", "3", "--r-max", "1"]).assert().code(3);
}

#[test]
fn unreadable_cache_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("dtable.txt"), "# dtable v0\n").unwrap();
    wk().arg("--cache").arg(dir.path()).args(["tau", "-g", "1", "-d", "1,1,1"]).assert().code(3);
}

#[test]
fn verify_examples() {
    let out = stdout_of(wk().args(["verify", "--g-max", "2", "--n-max", "4"]));
    assert!(out.ends_with("all equal\n"), "{out}");
    wk().args(["verify", "--g-max", "0", "--n-max", "3"])
        .assert()
        .success()
        .stdout("checked 1 indices: all equal\n");
}

#[test]
fn verify_reports_a_corrupted_cache_entry() {
    let dir = tempfile::tempdir().unwrap();
    wk().arg("--cache").arg(dir.path()).args(["dtable", "-n", "3", "--r-max", "1"]).assert().success();
    let path = dir.path().join("dtable.txt");
    let text = fs::read_to_string(&path).unwrap().replace("1,1,1 1/2", "1,1,1 1/3");
    fs::write(&path, text).unwrap();
    let out = wk().arg("--cache").arg(dir.path()).args(["verify", "--g-max", "1", "--n-max", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("MISMATCH g=1 d=1,1,1 formula="), "{stdout}");
    assert!(stdout.contains("oracle=1/12"), "{stdout}");
    assert!(stdout.ends_with("mismatches\n"), "{stdout}");
}

#[test]
fn elo_examples() {
    let out = stdout_of(wk().args(["--format", "tsv", "elo", "-n", "3"]));
    assert_eq!(out, "r\tappearing\tallowed\n0\t1\t1\n1\t1\t2\n");
    let out = stdout_of(wk().args(["--format", "tsv", "elo", "-n", "5"]));
    let appearing: Vec<&str> = out.lines().skip(1).map(|l| l.split('\t').nth(1).unwrap()).collect();
    assert_eq!(appearing, ["1", "3", "5", "7", "6", "3", "2"]);
}

#[test]
fn bench_shape() {
    let out = stdout_of(wk().args(["--format", "tsv", "--threads", "1", "bench", "-n", "3", "--g-max", "6", "--runs", "1"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "g\tt_setup\tt_formula\tt_oracle");
    assert_eq!(lines.len(), 7);
    for (i, line) in lines[1..].iter().enumerate() {
        let cols: Vec<&str> = line.split('\t').collect();
        assert_eq!(cols.len(), 4);
        assert_eq!(cols[0], (i + 1).to_string());
        assert!(cols[1..].iter().all(|c| c.parse::<f64>().unwrap() >= 0.0));
    }
}
