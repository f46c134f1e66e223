//! wasm-bindgen entry points for the static page in `www/`.
//!
//! Each function takes a problem file (the TOML accepted by the `lrcoh`
//! binary) and returns a JSON object `{"exit_code": n, "report": {...}}`,
//! or `{"exit_code": 2, "error": "..."}` on bad input.

use lrcoh_cli::{Command, Flags};
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

fn respond(cmd: Command, source: &str) -> String {
    let flags = Flags { json: true, window: None };
    let v = match lrcoh_cli::report(cmd, source, flags) {
        Ok((r, _)) => {
            let report: Value = serde_json::to_value(&r).expect("reports serialize");
            json!({ "exit_code": r.exit_code(), "report": report })
        }
        Err(e) => json!({ "exit_code": 2, "error": e.to_string() }),
    };
    v.to_string()
}

/// Per-degree Lie-Rinehart cohomology of a `[ring]` problem.
#[wasm_bindgen]
pub fn cohomology(source: &str) -> String {
    respond(Command::Cohomology, source)
}

/// Milnor and Tjurina numbers with the cohomology cross-check.
#[wasm_bindgen]
pub fn invariants(source: &str) -> String {
    respond(Command::Invariants, source)
}

/// Connection trichotomy and cohomology for a `[curve]` problem.
#[wasm_bindgen]
pub fn curve(source: &str) -> String {
    respond(Command::Curve, source)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CUBIC: &str = "[ring]\nvariables = [\"x\", \"y\", \"z\"]\nweights = [1, 1, 1]\nf = \"x^3 + y^3 + z^3\"\n";

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    fn summary(v: &Value, key: &str) -> String {
        let tables = v["report"]["tables"].as_array().unwrap();
        let t = tables.iter().find(|t| t["title"] == "summary").unwrap();
        let row = t["rows"].as_array().unwrap().iter().find(|r| r[0] == key).unwrap();
        row[1].as_str().unwrap().to_string()
    }

    #[test]
    fn cubic_cohomology() {
        let v = parse(cohomology(CUBIC));
        assert_eq!(v["exit_code"], 0);
        assert_eq!(summary(&v, "dim H1"), "1");
        assert_eq!(summary(&v, "support"), "[0]");
    }

    #[test]
    fn cubic_invariants() {
        let v = parse(invariants(CUBIC));
        assert_eq!(summary(&v, "mu"), "8");
        assert_eq!(summary(&v, "tau"), "8");
    }

    #[test]
    fn curves() {
        let v = parse(curve("[curve]\ngenerators = [3, 4, 5]\nlambda_complement = [2]\n"));
        assert_eq!(summary(&v, "verdict"), "None");
        let v = parse(curve("[curve]\ngenerators = [2, 3]\nlambda_complement = [1]\n"));
        assert_eq!(summary(&v, "verdict"), "Unique(c=0)");
        assert_eq!(v["exit_code"], 0);
    }

    #[test]
    fn input_errors() {
        let v = parse(cohomology("[ring]\nvariables = [\"x\"]\n"));
        assert_eq!(v["exit_code"], 2);
        assert!(v["error"].as_str().unwrap().contains("weights"));
        let v = parse(curve("[curve]\ngenerators = [4, 6]\n"));
        assert_eq!(v["exit_code"], 2);
    }
}
