//! JSON input formats for posets, functions, monotone maps, and modules.
//!
//! - poset: `{"elements": ["a","b"], "relations": [["a","b"]]}`; relations
//!   are any generating set; the closure is computed on load.
//! - function: `{"values": {"a": 2, "b": 1}}`: total on the poset, integer
//!   values (strings accepted for big integers).
//! - monotone map: `{"values": {"a": "x", "b": "y"}}`.
//! - module: `{"field": {"kind": "rationals"}, "dims": {"a": 2, "b": 1},
//!   "maps": {"a<b": [[1, 0]]}}`: map keys name covering relations and
//!   matrices have shape `dims(y) x dims(x)`, acting on column vectors;
//!   entries are integers or `"p/q"` strings. Maps whose source or target is
//!   zero-dimensional may be omitted. When no ambient poset is supplied the
//!   carrier is read off the `dims` keys (in file order) and the order is
//!   generated by the map keys, plus optional `"elements"` / `"relations"`
//!   fields for cases the maps alone do not determine.
//!
//! Key order in JSON objects is significant (it fixes the canonical element
//! order), so objects are deserialized into ordered pairs rather than maps.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer};

use crate::incidence::GrFunction;
use crate::linalg::{FieldSpec, LinalgError, Matrix, Scalar};
use crate::module::{ModuleError, PosetModule};
use crate::poset::{ElemId, MonotoneMap, Poset, PosetError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LoadError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("missing value for element {0:?}")]
    MissingValue(String),
    #[error("bad map key {0:?}: expected \"x<y\"")]
    BadCoverKey(String),
    #[error("bad entry {0:?} in map for {1:?}")]
    BadEntry(String, String),
    #[error("map for {0:?} has {1} rows, expected {2}")]
    BadRowCount(String, usize, usize),
    #[error("map for {0:?} has a row of width {1}, expected {2}")]
    BadRowWidth(String, usize, usize),
    #[error("bad field spec: {0}")]
    BadField(String),
}

fn json_err(e: serde_json::Error) -> LoadError {
    LoadError::Json(e.to_string())
}

/// A JSON object deserialized as ordered key-value pairs.
struct OrderedMap<T>(Vec<(String, T)>);

impl<T> Default for OrderedMap<T> {
    fn default() -> Self {
        OrderedMap(Vec::new())
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for OrderedMap<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V<T>(PhantomData<T>);
        impl<'de, T: Deserialize<'de>> Visitor<'de> for V<T> {
            type Value = OrderedMap<T>;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = access.next_entry::<String, T>()? {
                    out.push((k, v));
                }
                Ok(OrderedMap(out))
            }
        }
        deserializer.deserialize_map(V(PhantomData))
    }
}

/// An integer or string-encoded number in a JSON file.
#[derive(Deserialize)]
#[serde(untagged)]
enum NumberRepr {
    Int(i64),
    Str(String),
}

impl NumberRepr {
    fn to_bigint(&self) -> Option<BigInt> {
        match self {
            NumberRepr::Int(v) => Some(BigInt::from(*v)),
            NumberRepr::Str(s) => BigInt::from_str(s.trim()).ok(),
        }
    }

    fn to_scalar(&self, field: FieldSpec) -> Option<Scalar> {
        match self {
            NumberRepr::Int(v) => Some(field.from_i64(*v)),
            NumberRepr::Str(s) => {
                let s = s.trim();
                match (field, s.split_once('/')) {
                    (FieldSpec::Rationals, Some((num, den))) => {
                        let num = BigInt::from_str(num.trim()).ok()?;
                        let den = BigInt::from_str(den.trim()).ok()?;
                        if den == BigInt::from(0) {
                            return None;
                        }
                        Some(Scalar::Rat(BigRational::new(num, den)))
                    }
                    (_, Some(_)) => None, // no fractions over a prime field
                    (_, None) => Some(field.from_bigint(&BigInt::from_str(s).ok()?)),
                }
            }
        }
    }
}

#[derive(Deserialize)]
struct PosetFile {
    elements: Vec<String>,
    #[serde(default)]
    relations: Vec<(String, String)>,
}

/// Parses a poset file and computes the closure of its relations.
pub fn parse_poset(text: &str) -> Result<Poset, LoadError> {
    let file: PosetFile = serde_json::from_str(text).map_err(json_err)?;
    let relations: Vec<(&str, &str)> = file
        .relations
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    let elements: Vec<&str> = file.elements.iter().map(String::as_str).collect();
    Ok(Poset::from_relations(&elements, &relations)?)
}

#[derive(Deserialize)]
struct GrFunctionFile {
    values: OrderedMap<NumberRepr>,
}

/// Parses an integer function file against a poset; the function must be
/// total.
pub fn parse_grfunction(text: &str, poset: &Arc<Poset>) -> Result<GrFunction, LoadError> {
    let file: GrFunctionFile = serde_json::from_str(text).map_err(json_err)?;
    let mut values: Vec<Option<BigInt>> = vec![None; poset.len()];
    for (name, repr) in &file.values.0 {
        let id = poset
            .element(name)
            .ok_or_else(|| LoadError::UnknownElement(name.clone()))?;
        let v = repr
            .to_bigint()
            .ok_or_else(|| LoadError::BadEntry(display_repr(repr), name.clone()))?;
        values[id.index()] = Some(v);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| LoadError::MissingValue(poset.name(ElemId(i)).to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GrFunction::new(Arc::clone(poset), values))
}

#[derive(Deserialize)]
struct MapFile {
    values: OrderedMap<String>,
}

/// Parses a monotone map file; monotonicity is validated.
pub fn parse_monotone_map(
    text: &str,
    source: &Arc<Poset>,
    target: &Arc<Poset>,
) -> Result<MonotoneMap, LoadError> {
    let file: MapFile = serde_json::from_str(text).map_err(json_err)?;
    let mut values: Vec<Option<ElemId>> = vec![None; source.len()];
    for (name, image) in &file.values.0 {
        let a = source
            .element(name)
            .ok_or_else(|| LoadError::UnknownElement(name.clone()))?;
        let y = target
            .element(image)
            .ok_or_else(|| LoadError::UnknownElement(image.clone()))?;
        values[a.index()] = Some(y);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| LoadError::MissingValue(source.name(ElemId(i)).to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MonotoneMap::new(
        Arc::clone(source),
        Arc::clone(target),
        values,
    )?)
}

#[derive(Deserialize)]
struct FieldFile {
    kind: String,
    p: Option<u64>,
}

impl FieldFile {
    fn to_spec(&self) -> Result<FieldSpec, LoadError> {
        match self.kind.as_str() {
            "rationals" => Ok(FieldSpec::Rationals),
            "prime" => {
                let p = self
                    .p
                    .ok_or_else(|| LoadError::BadField("prime field needs \"p\"".into()))?;
                Ok(FieldSpec::prime(p)?)
            }
            other => Err(LoadError::BadField(format!("unknown kind {other:?}"))),
        }
    }
}

#[derive(Deserialize)]
struct ModuleFile {
    field: FieldFile,
    dims: OrderedMap<usize>,
    #[serde(default)]
    maps: OrderedMap<Vec<Vec<NumberRepr>>>,
    #[serde(default)]
    elements: Option<Vec<String>>,
    #[serde(default)]
    relations: Option<Vec<(String, String)>>,
}

/// Parses a module file. With `poset` given, element names are resolved
/// against it; otherwise the carrier and order are derived from the file
/// itself. Dimensions default to zero for unmentioned elements, maps with a
/// zero-dimensional side may be omitted, and functoriality is verified.
pub fn parse_module(text: &str, poset: Option<&Arc<Poset>>) -> Result<PosetModule, LoadError> {
    let file: ModuleFile = serde_json::from_str(text).map_err(json_err)?;
    let field = file.field.to_spec()?;

    let cover_keys: Vec<(String, String)> = file
        .maps
        .0
        .iter()
        .map(|(k, _)| {
            k.split_once('<')
                .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
                .ok_or_else(|| LoadError::BadCoverKey(k.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let poset = match poset {
        Some(p) => Arc::clone(p),
        None => {
            let names: Vec<String> = match &file.elements {
                Some(explicit) => explicit.clone(),
                None => file.dims.0.iter().map(|(k, _)| k.clone()).collect(),
            };
            let mut relations: Vec<(&str, &str)> = cover_keys
                .iter()
                .map(|(a, b)| (a.as_str(), b.as_str()))
                .collect();
            if let Some(extra) = &file.relations {
                relations.extend(extra.iter().map(|(a, b)| (a.as_str(), b.as_str())));
            }
            let names_ref: Vec<&str> = names.iter().map(String::as_str).collect();
            Arc::new(Poset::from_relations(&names_ref, &relations)?)
        }
    };

    let mut dims = vec![0usize; poset.len()];
    for (name, d) in &file.dims.0 {
        let id = poset
            .element(name)
            .ok_or_else(|| LoadError::UnknownElement(name.clone()))?;
        dims[id.index()] = *d;
    }

    let mut cover_maps: BTreeMap<(ElemId, ElemId), Matrix> = BTreeMap::new();
    for ((key, rows), (a_name, b_name)) in file.maps.0.iter().zip(&cover_keys) {
        let a = poset
            .element(a_name)
            .ok_or_else(|| LoadError::UnknownElement(a_name.clone()))?;
        let b = poset
            .element(b_name)
            .ok_or_else(|| LoadError::UnknownElement(b_name.clone()))?;
        let expect_rows = dims[b.index()];
        let expect_cols = dims[a.index()];
        if rows.len() != expect_rows {
            return Err(LoadError::BadRowCount(key.clone(), rows.len(), expect_rows));
        }
        let mut m = Matrix::zero(field, expect_rows, expect_cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != expect_cols {
                return Err(LoadError::BadRowWidth(key.clone(), row.len(), expect_cols));
            }
            for (c, entry) in row.iter().enumerate() {
                let v = entry
                    .to_scalar(field)
                    .ok_or_else(|| LoadError::BadEntry(display_repr(entry), key.clone()))?;
                m.set(r, c, v);
            }
        }
        cover_maps.insert((a, b), m);
    }
    // maps with a zero-dimensional endpoint are unique; fill them in
    for &(a, b) in poset.covers() {
        if !cover_maps.contains_key(&(a, b)) && (dims[a.index()] == 0 || dims[b.index()] == 0) {
            cover_maps.insert(
                (a, b),
                Matrix::zero(field, dims[b.index()], dims[a.index()]),
            );
        }
    }
    Ok(PosetModule::from_parts(poset, field, dims, cover_maps)?)
}

fn display_repr(repr: &NumberRepr) -> String {
    match repr {
        NumberRepr::Int(v) => v.to_string(),
        NumberRepr::Str(s) => s.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_file_round_trip() {
        let p = parse_poset(r#"{"elements": ["a","b","c"], "relations": [["a","b"],["b","c"]]}"#)
            .unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.leq(ElemId(0), ElemId(2)));
    }

    #[test]
    fn poset_file_rejects_cycles_and_unknowns() {
        assert!(matches!(
            parse_poset(r#"{"elements": ["a","b"], "relations": [["a","b"],["b","a"]]}"#),
            Err(LoadError::Poset(PosetError::Cycle(_, _)))
        ));
        assert!(matches!(
            parse_poset(r#"{"elements": ["a"], "relations": [["a","z"]]}"#),
            Err(LoadError::Poset(PosetError::UnknownElement(_)))
        ));
    }

    #[test]
    fn grfunction_requires_totality() {
        let p = Arc::new(Poset::from_relations(&["a", "b"], &[("a", "b")]).unwrap());
        let f = parse_grfunction(r#"{"values": {"a": 2, "b": -1}}"#, &p).unwrap();
        assert_eq!(f.get(ElemId(0)), &BigInt::from(2));
        assert!(matches!(
            parse_grfunction(r#"{"values": {"a": 2}}"#, &p),
            Err(LoadError::MissingValue(_))
        ));
        // big integers arrive as strings
        let big = parse_grfunction(
            r#"{"values": {"a": "123456789012345678901234567890", "b": 0}}"#,
            &p,
        )
        .unwrap();
        assert!(big.get(ElemId(0)) > &BigInt::from(u64::MAX));
    }

    #[test]
    fn module_file_with_derived_poset() {
        let text = r#"{
            "field": {"kind": "rationals"},
            "dims": {"a": 2, "b": 1},
            "maps": {"a<b": [[1, 0]]}
        }"#;
        let m = parse_module(text, None).unwrap();
        assert_eq!(m.dims(), &[2, 1]);
        let p = m.poset();
        assert!(p.leq(p.element("a").unwrap(), p.element("b").unwrap()));
        let cm = m
            .cover_map(p.element("a").unwrap(), p.element("b").unwrap())
            .unwrap();
        assert_eq!(cm.get(0, 0), &FieldSpec::Rationals.one());
    }

    #[test]
    fn module_file_shape_errors_name_the_cover() {
        let text = r#"{
            "field": {"kind": "rationals"},
            "dims": {"a": 2, "b": 1},
            "maps": {"a<b": [[1, 0], [0, 1]]}
        }"#;
        match parse_module(text, None) {
            Err(LoadError::BadRowCount(key, 2, 1)) => assert_eq!(key, "a<b"),
            other => panic!("expected row-count error, got {other:?}"),
        }
    }

    #[test]
    fn module_file_functoriality_is_checked() {
        let text = r#"{
            "field": {"kind": "rationals"},
            "dims": {"bot": 1, "x": 1, "y": 1, "top": 1},
            "maps": {
                "bot<x": [[1]], "bot<y": [[1]],
                "x<top": [[1]], "y<top": [[2]]
            }
        }"#;
        match parse_module(text, None) {
            Err(LoadError::Module(ModuleError::NotFunctorial(a, b))) => {
                assert_eq!((a.as_str(), b.as_str()), ("bot", "top"));
            }
            other => panic!("expected functoriality error, got {other:?}"),
        }
    }

    #[test]
    fn module_file_with_rational_entries_and_prime_field() {
        let text = r#"{
            "field": {"kind": "rationals"},
            "dims": {"a": 1, "b": 1},
            "maps": {"a<b": [["2/3"]]}
        }"#;
        let m = parse_module(text, None).unwrap();
        let p = m.poset().clone();
        let cm = m
            .cover_map(p.element("a").unwrap(), p.element("b").unwrap())
            .unwrap();
        assert_eq!(cm.get(0, 0).to_string(), "2/3");

        let text = r#"{
            "field": {"kind": "prime", "p": 7},
            "dims": {"a": 1, "b": 1},
            "maps": {"a<b": [[-3]]}
        }"#;
        let m = parse_module(text, None).unwrap();
        let p = m.poset().clone();
        let cm = m
            .cover_map(p.element("a").unwrap(), p.element("b").unwrap())
            .unwrap();
        assert_eq!(cm.get(0, 0).to_string(), "4");

        assert!(matches!(
            parse_module(r#"{"field": {"kind": "prime", "p": 6}, "dims": {}}"#, None),
            Err(LoadError::Linalg(LinalgError::NotPrime(6)))
        ));
    }

    #[test]
    fn module_file_against_ambient_poset() {
        let p =
            Arc::new(Poset::from_relations(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap());
        // sparse: only b gets a dimension, all covers are forced
        let m = parse_module(
            r#"{"field": {"kind": "rationals"}, "dims": {"b": 2}}"#,
            Some(&p),
        )
        .unwrap();
        assert_eq!(m.dims(), &[0, 2, 0]);
        assert!(matches!(
            parse_module(
                r#"{"field": {"kind": "rationals"}, "dims": {"z": 1}}"#,
                Some(&p)
            ),
            Err(LoadError::UnknownElement(_))
        ));
    }

    #[test]
    fn module_file_rejects_maps_for_non_covers() {
        // a<c is a relation of the closure but not a covering relation
        let text = r#"{
            "field": {"kind": "rationals"},
            "dims": {"a": 1, "b": 1, "c": 1},
            "maps": {"a<b": [[1]], "b<c": [[1]], "a<c": [[1]]}
        }"#;
        assert!(matches!(
            parse_module(text, None),
            Err(LoadError::Module(ModuleError::NotACover(_, _)))
        ));
    }

    #[test]
    fn module_file_missing_required_cover_map() {
        let text = r#"{
            "field": {"kind": "rationals"},
            "dims": {"a": 1, "b": 1},
            "elements": ["a", "b"],
            "relations": [["a", "b"]]
        }"#;
        assert!(matches!(
            parse_module(text, None),
            Err(LoadError::Module(ModuleError::MissingCoverMap(_, _)))
        ));
    }
}
