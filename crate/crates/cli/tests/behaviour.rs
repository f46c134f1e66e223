use lrcoh::polyring::WeightedRing;
use lrcoh_cli::{parse_window, run, Command, Flags};
use serde_json::Value;

fn data(file: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(file);
    std::fs::read_to_string(path).unwrap()
}

fn json(cmd: Command, file: &str) -> Value {
    let out = run(cmd, &data(file), Flags { json: true, window: None });
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn command_names_round_trip() {
    for c in Command::ALL {
        assert_eq!(Command::from_name(c.name()), Some(c));
    }
    assert_eq!(Command::from_name("connection  find"), Some(Command::ConnectionFind));
    assert_eq!(Command::from_name("connection"), None);
}

#[test]
fn json_top_level_keys() {
    for (cmd, file, subject) in [(Command::Cohomology, "cubic_nabla.toml", "ring"), (Command::Curve, "gamma23.toml", "curve")] {
        let out = run(cmd, &data(file), Flags { json: true, window: None }).stdout;
        let keys: Vec<&str> =
            out.lines().filter_map(|l| l.strip_prefix("  \"")).filter_map(|l| l.split('"').next()).collect();
        assert_eq!(keys, ["command", subject, "tables", "assertions", "representatives"]);
    }
}

// Every table cell and representative of the JSON report appears in the text report.
#[test]
fn text_and_json_carry_the_same_numbers() {
    for (cmd, file) in [
        (Command::Cohomology, "cubic_nabla.toml"),
        (Command::Invariants, "x3y4z4.toml"),
        (Command::Curve, "gamma23_n0.toml"),
        (Command::ConnectionCurvature, "cubic_nablaprime.toml"),
    ] {
        let text = run(cmd, &data(file), Flags::default()).stdout;
        let v = json(cmd, file);
        for t in v["tables"].as_array().unwrap() {
            for row in t["rows"].as_array().unwrap() {
                let cells: Vec<&str> = row.as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
                let found = text.lines().any(|l| {
                    let mut rest = l;
                    cells.iter().all(|c| match rest.find(c) {
                        Some(i) => {
                            rest = &rest[i + c.len()..];
                            true
                        }
                        None => false,
                    })
                });
                assert!(found, "{file}: row {cells:?} missing from text");
            }
        }
        for r in v["representatives"].as_array().unwrap() {
            assert!(text.contains(r["value"].as_str().unwrap()));
        }
    }
}

#[test]
fn printed_polynomials_reparse() {
    for (cmd, file) in [
        (Command::Cohomology, "cone_d5.toml"),
        (Command::ConnectionFind, "cubic_nabla.toml"),
        (Command::ConnectionClass, "cubic_nablaprime.toml"),
        (Command::ConnectionCurvature, "cubic_nablaprime.toml"),
        (Command::ConnectionEquiv, "cubic_nabla.toml"),
    ] {
        let v = json(cmd, file);
        let ring = &v["ring"];
        let names: Vec<&str> = ring["variables"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
        let weights: Vec<i64> = ring["weights"].as_array().unwrap().iter().map(|s| s.as_i64().unwrap()).collect();
        let r = WeightedRing::from_text(&names, &weights, ring["f"].as_str().unwrap()).unwrap();
        assert_eq!(r.format(r.f()), ring["f"].as_str().unwrap());
        for rep in v["representatives"].as_array().unwrap() {
            let text = rep["value"].as_str().unwrap();
            if rep["at"] == "as" {
                continue;
            }
            let p = r.parse(text).unwrap();
            assert_eq!(r.format(&r.reduce(&p)), text, "{file}");
        }
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(Command::Cohomology, &data("cubic_nabla.toml"), Flags::default()).exit_code, 0);
    assert_eq!(run(Command::ConnectionCurvature, &data("cubic_nablaprime.toml"), Flags::default()).exit_code, 0);
    assert_eq!(run(Command::Curve, &data("gamma23_n0.toml"), Flags::default()).exit_code, 1);
    assert_eq!(run(Command::Cohomology, &data("gamma23.toml"), Flags::default()).exit_code, 2);
    assert_eq!(run(Command::ConnectionCheck, &data("x3y4z4.toml"), Flags::default()).exit_code, 2);
    let bad = run(Command::Cohomology, "[ring]\nvariables = [\"x\"]\nweights = [1]\nf = \"x^2 +\"\n", Flags::default());
    assert_eq!(bad.exit_code, 2);
    assert!(bad.stderr.contains("4:"), "{}", bad.stderr);
    let unknown = run(Command::Cohomology, "[ring]\nvariables = [\"x\", \"y\", \"z\"]\nweights = [1, 1, 1]\nf = \"x^3\"\nextra = 1\n", Flags::default());
    assert_eq!(unknown.exit_code, 2);
}

#[test]
fn wrong_connection_fails_with_one() {
    let src = data("cubic_nabla.toml").replace("action = \"right\"\neuler = \"degree\"\nE = [[\"2/3\"", "action = \"left\"\neuler = \"degree\"\nE = [[\"2/3\"");
    let out = run(Command::ConnectionCheck, &src, Flags::default());
    assert_eq!(out.exit_code, 1);
}

#[test]
fn window_flag() {
    assert_eq!(parse_window("-3..6"), Ok((-3, 6)));
    assert!(parse_window("3..1").is_err());
    assert!(parse_window("3").is_err());
    let out = run(Command::Cohomology, &data("cubic_nabla.toml"), Flags { json: false, window: Some((0, 1)) });
    assert!(out.stdout.lines().any(|l| l.trim_start().starts_with("window") && l.ends_with(" 0..1")), "{}", out.stdout);
}

#[test]
fn non_isolated_is_reported() {
    let src = "[ring]\nvariables = [\"x\", \"y\", \"z\"]\nweights = [1, 1, 1]\nf = \"x^2*y + y^3\"\n";
    let out = run(Command::Invariants, src, Flags::default());
    assert_eq!(out.exit_code, 1);
    assert!(out.stdout.contains("not isolated"));
}
