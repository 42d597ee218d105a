use std::process::{Command, Output};

fn jetsplit(args: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jetsplit")).args(args.split_whitespace()).output().expect("binary runs")
}

fn stdout(args: &str) -> String {
    let out = jetsplit(args);
    assert_eq!(out.status.code(), Some(0), "{args}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).expect("utf8")
}

fn json(args: &str) -> serde_json::Value {
    serde_json::from_str(&stdout(&format!("--format json {args}"))).expect("json")
}

#[test]
fn transition_examples() {
    assert_eq!(stdout("transition --n 3 --k 1 --char 0 --side left").trim(), "[[t^3, 0], [3*t^2, -t^1]]");
    assert_eq!(stdout("transition --n 3 --k 1 --char 3 --side left").trim(), "[[t^3, 0], [0, -t^1]]");
    assert_eq!(stdout("transition --n 2 --k 1 --side right").trim(), "[[t^2, 0], [0, -1]]");
    let v = json("transition --n 3 --k 1 --char 3");
    assert_eq!(v["matrix"], serde_json::json!([["1*t^3", "0"], ["0", "2*t^1"]]));
}

#[test]
fn split_examples() {
    for (args, want) in [
        ("split --n 4 --k 1 --char 2 --side left", [4, 2]),
        ("split --n 4 --k 1 --char 3 --side left", [3, 3]),
        ("split --n 4 --k 1 --char 0 --side right", [4, 2]),
    ] {
        let v = json(args);
        assert_eq!(v["degrees"], serde_json::json!(want), "{args}");
        assert_eq!(v["certificate_verified"], true);
        assert_eq!(v["oracle_checked"], true);
    }
}

#[test]
fn split_json_key_order() {
    let text = stdout("--format json split --n 5 --k 2 --char 0");
    let keys = [
        "\"params\"",
        "\"degrees\"",
        "\"multiplicities\"",
        "\"certificate_verified\"",
        "\"oracle_checked\"",
        "\"ms\"",
    ];
    let pos: Vec<usize> = keys.iter().map(|k| text.find(k).expect(k)).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{text}");
    assert!(text.contains("\"multiplicities\":[[3,3]]"));
}

#[test]
fn solve_examples() {
    let v = json("solve --n 2 --k 1 --r 1 --char 0");
    assert_eq!(v["status"], "unique");
    assert_eq!(v["x"], serde_json::json!(["1", "2"]));
    let v = json("solve --n 2 --k 1 --r 1 --char 2");
    assert_eq!(v["x"], serde_json::json!(["1", "0"]));
    assert!(stdout("solve --n 2 --k 1 --r 1 --char 2").contains("x_{1,1} = 0"));
    // A_1 = [[C(4,1), -1], [1, 0]] = [[0, 1], [1, 0]] mod 2 is invertible
    let v = json("solve --n 4 --k 1 --r 1 --char 2");
    assert_eq!(v["status"], "unique");
    assert_eq!(v["x"], serde_json::json!(["1", "0"]));
    let v = json("solve --n 4 --k 2 --r 1 --char 2");
    assert_eq!(v["status"], "none");
    assert_eq!(v["gluing_row"], serde_json::Value::Null);
}

#[test]
fn table_examples() {
    let v = json("table --k 1 --n-min 1 --n-max 6 --chars 0,2");
    let cell = |n: usize, j: usize| v["grid"][n - 1][j].clone();
    assert_eq!(cell(4, 1)["left"], "O(4)+O(2)");
    assert_eq!(cell(4, 0)["left"], "O(3)+O(3)");
    assert_eq!(cell(2, 1)["left"], "O(2)+O(0)");
    assert_eq!(cell(2, 1)["right"], "O(2)+O(0)");
    for n in 1..=6 {
        for j in 0..2 {
            assert_eq!(cell(n, j)["right"], format!("O({n})+O({})", n as i64 - 2));
        }
    }
    let v = json("table --k 2 --n-min 2 --n-max 6 --chars 0");
    assert_eq!(v["grid"][3][0]["left"], "O(3)+O(3)+O(3)");
}

#[test]
fn json_is_deterministic() {
    let a = stdout("--format json table --k 1 --n-min 1 --n-max 9 --chars 0,2,3,5");
    let b = stdout("--format json table --k 1 --n-min 1 --n-max 9 --chars 0,2,3,5");
    assert_eq!(a, b);
}

#[test]
fn verify_lemmas_passes() {
    let out = stdout("verify --suite lemmas");
    assert!(out.lines().any(|l| l.starts_with("PASS")));
    assert!(!out.contains("FAIL"));
}

#[test]
fn verify_split_passes() {
    let v = json("verify --suite split --seed 9");
    assert_eq!(v["passed"], true);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        "transition --n 3 --k 2 --side right",
        "split --n 3 --char 4",
        "split --n 2 --k 3",
        "solve --n 2 --k 1 --r 2",
        "table --k 2 --n-min 1 --n-max 3",
        "verify --suite nope",
        "frobnicate",
        "split",
    ] {
        let out = jetsplit(args);
        assert_eq!(out.status.code(), Some(2), "{args}");
        assert!(!out.stderr.is_empty(), "{args}");
    }
}
