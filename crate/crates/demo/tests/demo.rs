use qpencil_demo::{canonical_doc, generate_doc, solve_doc};
use serde_json::Value;

fn field(v: &Value, key: &str) -> String {
    v[key].to_string()
}

#[test]
fn generate_then_solve() {
    let inst: Value = serde_json::from_str(&generate_doc(7, 5, 9, "", "ip2s").unwrap()).unwrap();
    let (a, b) = (field(&inst, "A"), field(&inst, "B"));
    let sol: Value = serde_json::from_str(&solve_doc(&a, &b, true).unwrap()).unwrap();
    assert!(sol["gamma"].is_array());

    let inst: Value = serde_json::from_str(&generate_doc(9, 4, 2, "", "ip1s").unwrap()).unwrap();
    let sol = solve_doc(&field(&inst, "A"), &field(&inst, "B"), false).unwrap();
    assert!(sol.starts_with("{\"S\""));
}

#[test]
fn canonical_forms_agree_on_congruent_pencils() {
    let inst: Value = serde_json::from_str(&generate_doc(5, 5, 4, "K1, L(x^2+2,1,D)", "ip1s").unwrap()).unwrap();
    let strip = |d: String| {
        let mut v: Value = serde_json::from_str(&d).unwrap();
        v.as_object_mut().unwrap().remove("transform");
        v
    };
    let ca = strip(canonical_doc(&field(&inst, "A")).unwrap());
    let cb = strip(canonical_doc(&field(&inst, "B")).unwrap());
    assert_eq!(ca, cb);
    assert_eq!(ca["kronecker"], serde_json::json!([1]));
}

#[test]
fn non_equivalent_gives_null() {
    let a = generate_doc(7, 3, 1, "K1", "none").unwrap();
    let b = generate_doc(7, 3, 1, "K0,K0,K0", "none").unwrap();
    let a: Value = serde_json::from_str(&a).unwrap();
    let b: Value = serde_json::from_str(&b).unwrap();
    assert_eq!(solve_doc(&field(&a, "A"), &field(&b, "A"), false).unwrap(), "null");
}

#[test]
fn errors_are_messages() {
    assert!(generate_doc(6, 2, 0, "", "none").is_err());
    assert!(generate_doc(7, 2, 0, "", "bogus").is_err());
    assert!(canonical_doc("{").is_err());
}
