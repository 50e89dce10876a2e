use serde_json::{Map, Value};

use drg_walk_core::rational::{render, to_f64};
use drg_walk_core::{IntersectionArray, MaybeExact, Q};

pub type Object = Map<String, Value>;

/// `{"array", "n", "k", "D"}`, the prefix of every JSON document.
pub fn header(arr: &IntersectionArray) -> Object {
    let mut map = Object::new();
    map.insert("array".into(), arr.to_string().into());
    map.insert("n".into(), arr.vertex_count().into());
    map.insert("k".into(), arr.degree().into());
    map.insert("D".into(), arr.diameter().into());
    map
}

pub fn exact(value: &Q) -> Value {
    render(value).into()
}

pub fn decimal(value: f64) -> Value {
    // NaN and infinities become null.
    value.into()
}

/// `key: "p/q"` and `key_decimal: float`.
pub fn put_q(map: &mut Object, key: &str, value: &Q) {
    map.insert(key.into(), exact(value));
    map.insert(format!("{key}_decimal"), decimal(to_f64(value)));
}

pub fn put_qs<'a>(map: &mut Object, key: &str, values: impl IntoIterator<Item = &'a Q>) {
    let values: Vec<&Q> = values.into_iter().collect();
    map.insert(key.into(), values.iter().map(|v| exact(v)).collect());
    map.insert(
        format!("{key}_decimal"),
        values.iter().map(|v| decimal(to_f64(v))).collect(),
    );
}

/// Exact values as `p/q`; irrational ones as a 12-significant-digit string.
pub fn put_maybe(map: &mut Object, key: &str, value: &MaybeExact) {
    map.insert(key.into(), value.render().into());
    map.insert(format!("{key}_decimal"), decimal(value.to_f64()));
}

pub fn q_object(key: &str, value: &Q) -> Object {
    let mut map = Object::new();
    put_q(&mut map, key, value);
    map
}
