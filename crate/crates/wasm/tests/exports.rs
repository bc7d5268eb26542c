use serde_json::Value;
use weilreg_wasm::{newton_json, roots_json, strip_json};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn roots_lie_on_the_unit_circle() {
    let v = parse(roots_json("9,-3,2,-1,1", 3, 1).unwrap());
    let roots = v["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 4);
    for r in roots {
        let (re, im) = (r["re"].as_f64().unwrap(), r["im"].as_f64().unwrap());
        assert!((re * re + im * im - 1.0).abs() < 1e-9);
    }
}

#[test]
fn newton_polygon_of_a_supersingular_curve() {
    // t^2 + 2 over F_2: a single slope 1/2 segment
    let v = parse(newton_json("2,0,1", 2, 1).unwrap());
    assert_eq!(v["slopes"][0]["slope"], "1/2");
    assert_eq!(v["vertices"][1][0], 2);
    assert!((v["vertices"][1][1].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn strip_marks_inert_primes() {
    // t^2 - t + 2: P(X) is the set of primes inert in Q(sqrt(-7))
    let v = parse(strip_json("2,-1,1", 2, 1, 30).unwrap());
    let members: Vec<u64> = v["cells"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["state"] == "member")
        .map(|c| c["l"].as_u64().unwrap())
        .collect();
    assert_eq!(members, vec![3, 5, 13, 17, 19]);
    assert_eq!(v["cells"][0]["state"], "characteristic");
}

#[test]
fn rejects_bad_input() {
    assert!(roots_json("2,x,1", 2, 1).unwrap_err().contains("bad coefficient"));
    assert!(newton_json("2,-3,1", 2, 1).is_err());
    assert!(strip_json("2,-1,1", 2, 1, 1_000_000).is_err());
}
