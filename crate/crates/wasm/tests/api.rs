use fewweight_wasm::api;
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn spectrum_of_the_quarter_monomial() {
    let v = parse(&api::spectrum(3, 4, "", "quarter lambda=1").unwrap());
    assert_eq!(v["ok"], true);
    let dist = v["report"]["distribution"].as_array().unwrap();
    assert_eq!(dist.len(), 4);
    let total: u64 = dist.iter().map(|d| d["count"].as_u64().unwrap()).sum();
    assert_eq!(total, 81);
    assert_eq!(v["report"]["prediction"]["matched"], true);
}

#[test]
fn construct_with_stated_modulus() {
    let v = parse(&api::construct(3, 4, "x^4-x^3-1", "quadprod lambda=a u=a^16 v=a^8", "halfset").unwrap());
    assert_eq!(v["ok"], true);
    assert_eq!(v["report"]["params"], "[22, 4, 9]");
    assert_eq!(v["report"]["enumerator"], "1 + 4z^9 + 72z^15 + 4z^18");
}

#[test]
fn examples_are_listed_and_run() {
    let list = parse(&api::list_examples());
    assert_eq!(list.as_array().unwrap().len(), 12);
    let v = parse(&api::run_example("2.9").unwrap());
    assert_eq!(v["matched"], true);
}

#[test]
fn errors_are_reported() {
    assert!(api::spectrum(4, 2, "", "zero").is_err());
    assert!(api::spectrum(3, 12, "", "zero").is_err());
    let e = api::spectrum(3, 3, "", "table file=/etc/passwd").unwrap_err();
    assert!(e.to_string().contains("browser"));
    assert!(api::run_example("1.1").is_err());
}
