use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_singpoincare"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

#[test]
fn trivial_series_golden() {
    assert_eq!(stdout(&["toric", "--p", "2", "--q", "3"]), "(1) / ((1 - L^2*T^1))\n");
}

#[test]
fn cusp_expansion_golden() {
    let out = stdout(&["toric", "--p", "1", "--q", "3", "--expand", "1", "--specialize", "2"]);
    assert_eq!(
        out,
        "(1 + (L^2 - 2*L + 1)*T^1 + (L^2 - L)*T^2 + (-L)*T^3) / ((1 - L^2*T^1)*(1 - L^1*T^3))\n\
         T^0: 1\n\
         T^1: 2*L^2 - 2*L + 1\n\
         L = 2: [1, 5]\n"
    );
}

#[test]
fn pipelines_exit_status() {
    for c in ["2", "3", "4", "7"] {
        let o = run(&["toric", "--p", "1", "--q", c, "--pipeline", "both"]);
        assert!(o.status.success(), "c = {c}");
    }
    let o = run(&["toric", "--p", "1", "--q", "5", "--pipeline", "both", "--correction", "as-displayed"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["toric", "--p", "2", "--q", "5", "--pipeline", "stratified"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--pipeline"));
}

#[test]
fn usage_errors_name_the_flag() {
    let o = run(&["toric", "--p", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--q"));
    let o = run(&["curve", "--mult", "4", "--exponents", "6,8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--mult/--exponents"));
}

#[test]
fn jets_json_shape() {
    let out = stdout(&["oracle", "jets", "--c", "3", "--n", "1", "--q", "2", "--format", "json", "--verify"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["count"], 5);
    assert_eq!(v["stabilized"], true);
    assert_eq!(v["depth"], 4);
    assert_eq!(v["matches"], true);
    let o = run(&["oracle", "jets", "--c", "3", "--n", "2", "--q", "3", "--budget", "1000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn dx_commands() {
    let out = stdout(&["dx", "--mult", "2", "--exponents", "3", "--at", "strict:1.2.2", "--gamma", "1", "--gamma-x", "2"]);
    assert_eq!(out, "d_X = 5 (case 8, StrictTransform)\n");
    let out = stdout(&["oracle", "dx", "--mult", "2", "--exponents", "3", "--arc-x", "2:1", "--arc-y", "3:1,5:1"]);
    assert_eq!(out, "d_X = 5\n");
    let out = stdout(&["oracle", "dx", "--mult", "2", "--exponents", "3", "--arc-x", "2:1", "--arc-y", "3:1", "--depth", "12"]);
    assert_eq!(out, "d_X > 12 (search cap reached)\n");
}

#[test]
fn cf_and_curve() {
    assert_eq!(stdout(&["cf", "--n", "7", "--k", "3"]), "7/3 = [3, 2, 2]\n");
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["curve", "--mult", "2", "--exponents", "5", "--format", "json"])).unwrap();
    let ns: Vec<i64> = v["chain"].as_array().unwrap().iter().map(|n| n["N"].as_i64().unwrap()).collect();
    assert_eq!(ns, vec![2, 4, 10, 5]);
}

#[test]
fn output_is_byte_stable() {
    let args = ["oracle", "jets", "--c", "4", "--n", "2", "--q", "2", "--format", "json"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let single = Command::new(env!("CARGO_BIN_EXE_singpoincare"))
        .args(args)
        .env("RAYON_NUM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.as_bytes(), single.stdout.as_slice());
    let t = ["toric", "--p", "5", "--q", "13", "--plan", "--expand", "4", "--format", "json"];
    assert_eq!(stdout(&t), stdout(&t));
}

#[test]
fn check_passes() {
    let out = stdout(&["check"]);
    assert_eq!(out.lines().count(), 7);
    assert!(out.lines().all(|l| l.starts_with("PASS")), "{out}");
}
