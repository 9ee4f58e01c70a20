use admg_web::*;
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

const SELECTION: &str = "nodes 3 A B C\narrow A B\nline A C\nline B C\n";

#[test]
fn describe_lists_edges() {
    let v = parse(describe(SELECTION));
    assert_eq!(v["labels"], serde_json::json!(["A", "B", "C"]));
    assert_eq!(v["arrows"], serde_json::json!([[1, 2]]));
    assert_eq!(v["lines"], serde_json::json!([[1, 3], [2, 3]]));
    assert!(parse(describe("nodes 2\narrow 1 2\narrow 2 1\n"))["error"].is_string());
}

#[test]
fn separation_queries() {
    let v = parse(separation(SELECTION, "A", "C", "", 2));
    assert_eq!(v["separated"], false);
    let chain = "nodes 3\narrow 1 2\narrow 2 3\n";
    for c in 1..=4 {
        assert_eq!(parse(separation(chain, "1", "3", "2", c))["separated"], true);
    }
    assert!(parse(separation(chain, "1", "3", "2", 5))["error"].is_string());
    assert!(parse(separation(chain, "1", "1", "", 2))["error"].is_string());
}

#[test]
fn intervention_example() {
    let v = parse(intervention(SELECTION, "A"));
    assert_eq!(v["text"], "nodes 3 A B C\narrow A B\nline B C\n");
}

#[test]
fn learning() {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../data/three-node-interventional.txt"
    ))
    .unwrap();
    let v = parse(learn_models(&text, "alt"));
    assert_eq!(v["models"].as_array().unwrap().len(), 18);
    assert_eq!(v["graphs"].as_array().unwrap().len(), 18);
    assert!(parse(learn_models(&text, "x"))["error"].is_string());
    assert!(parse(learn_models("nodes 5\n", "alt"))["error"].is_string());
}
