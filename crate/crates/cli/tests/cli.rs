use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn admg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_admg")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("admg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn sep_exit_codes() {
    let g = data("chain-with-line.g");
    let o = admg(&["sep", "--graph", &g, "--criterion", "2", "--x", "A", "--y", "D", "--z", "B"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "connected\n");

    let chain = temp_file("chain.g", "nodes 3\narrow 1 2\narrow 2 3\n");
    let chain = chain.to_str().unwrap();
    for c in ["1", "2", "3", "4"] {
        let o = admg(&["sep", "--graph", chain, "--criterion", c, "--x", "1", "--y", "3", "--z", "2"]);
        assert_eq!(o.status.code(), Some(0), "criterion {c}");
        assert_eq!(stdout(&o), "separated\n");
    }
    let o = admg(&["sep", "--graph", chain, "--x", "1", "--y", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["separated"], false);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(admg(&["sep"]).status.code(), Some(2));
    let bad = temp_file("bad.g", "nodes 2\narrow 1 2\narrow 2 1\n");
    let o = admg(&["sep", "--graph", bad.to_str().unwrap(), "--x", "1", "--y", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = admg(&["sep", "--graph", &data("chain-with-line.g"), "--x", "A", "--y", "A"]);
    assert_eq!(o.status.code(), Some(2));
    let o = admg(&["learn", "--constraints", &data("missing.txt")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn graph_outputs_round_trip() {
    let o = admg(&["intervene", "--graph", &data("selection-bias-alt.g"), "--x", "A"]);
    assert_eq!(stdout(&o), "nodes 3 A B C\narrow A B\nline B C\n");
    let o = admg(&["magnify", "--graph", &data("chain-with-line.g")]);
    let text = stdout(&o);
    assert!(text.contains("line eps_B eps_D\n"));
    let again = temp_file("magnified.g", &text);
    let o = admg(&["magnify", "--graph", again.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn do_calculus() {
    let alt = data("selection-bias-alt.g");
    let orig = data("selection-bias-orig.g");
    let rule2 = ["--rule", "2", "--y", "B", "--z", "A", "--w", "C"];
    let o = admg(&[&["rule", "--graph", &alt][..], &rule2].concat());
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "applicable\n".into()));
    let o = admg(&[&["rule", "--graph", &orig][..], &rule2].concat());
    assert_eq!((o.status.code(), stdout(&o)), (Some(1), "not applicable\n".into()));

    let script = data("effect-of-a-on-b.txt");
    let o = admg(&["derive", "--graph", &alt, "--script", &script]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("derivation valid\n"));
    let o = admg(&["derive", "--graph", &orig, "--script", &script]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).ends_with("derivation fails at step 2\n"));
}

#[test]
fn learn_and_export() {
    let obs = data("three-node-observational.txt");
    let o = admg(&["learn", "--constraints", &obs]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("optimal score 3 (37 models)"));
    assert!(text.contains("\nline(1,2) line(2,3) arrow(1,2)\n"));
    assert_eq!(o.stdout, admg(&["learn", "--constraints", &obs]).stdout);

    let full = data("three-node-interventional.txt");
    let o = admg(&["learn", "--constraints", &full, "--dialect", "both", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["models"].as_array().unwrap().len(), 34);

    let asp = temp_file("out.lp", "");
    let o = admg(&["learn", "--constraints", &full, "--emit-asp", asp.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(&asp).unwrap();
    let exported = stdout(&admg(&["export-asp", "--constraints", &full]));
    assert_eq!(written, exported);
    assert!(exported.contains("nodes(3).\nset(0..7).\n"));
    assert!(exported.contains("dep(1,2,0,3,1).\n"));
}

#[test]
fn markov_and_sem_checks() {
    let amp = temp_file("amp.g", "nodes 4\narrow 1 2\nline 2 3\narrow 4 3\n");
    let amp = amp.to_str().unwrap();
    for prop in ["amp-block", "amp-local", "amp-pairwise"] {
        let o = admg(&["markov-verify", "--graph", amp, "--property", prop]);
        assert_eq!(o.status.code(), Some(0), "{prop}: {}", stdout(&o));
    }
    let leak = temp_file("leak.g", "nodes 3\narrow 3 1\nline 1 2\n");
    let o = admg(&["markov-verify", "--graph", leak.to_str().unwrap(), "--property", "local"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not separated: {2} _||_ {3} | {1}\n"));

    let o = admg(&["sem-check", "--graph", amp, "--seed", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with(" failures\n"));
    assert!(!stdout(&o).contains("FAIL"));
    let o = admg(&["equiv-check", "--graph", &data("four-node-chain.g")]);
    assert_eq!(stdout(&o), "24 queries, 0 disagreements\n");
}
