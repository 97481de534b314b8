//! JSON forms of every artifact. Rationals travel as `"p/q"` strings, subsets
//! as strictly increasing index lists, and measures as atom lists in canonical
//! order with zero coefficients dropped.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Value};

use crate::ball::{BallKernelStub, BallMeasure, BallPoint, Coords};
use crate::chain::{BetaOrderFamily, OrderMode};
use crate::error::{Error, Result};
use crate::freeset::{LowerBoundCertificate, Region, SetValuedMap};
use crate::kernel::{ExtensionKernel, PointFunction};
use crate::measure::SignedMeasure;
use crate::rational::{self, Rational};
use crate::subset::Subset;

/// Serializes a rational in display form (`"3"`, `"5/2"`).
pub fn ser_display<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Serializes a rational in wire form (`"3/1"`).
pub fn ser_wire<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::to_wire(r))
}

fn schema(e: impl std::fmt::Display) -> Error {
    Error::Schema(e.to_string())
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(schema)
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("wire types always serialize")
}

fn subset_list(s: Subset) -> Vec<usize> {
    s.to_vec()
}

fn list_subset(v: &[usize]) -> Result<Subset> {
    Subset::from_sorted(v)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomWire {
    atom: Vec<usize>,
    coeff: String,
}

fn measure_wire(mu: &SignedMeasure) -> Vec<AtomWire> {
    mu.atoms()
        .map(|(a, c)| AtomWire {
            atom: subset_list(a),
            coeff: rational::to_wire(c),
        })
        .collect()
}

fn wire_measure(atoms: &[AtomWire]) -> Result<SignedMeasure> {
    let pairs = atoms
        .iter()
        .map(|w| Ok((list_subset(&w.atom)?, rational::parse(&w.coeff)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SignedMeasure::from_atoms(pairs))
}

pub fn measure_to_value(mu: &SignedMeasure) -> Value {
    serde_json::to_value(measure_wire(mu)).expect("wire types always serialize")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryWire {
    point: Vec<usize>,
    measure: Vec<AtomWire>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelWire {
    ground_size: usize,
    m: usize,
    n: usize,
    entries: Vec<EntryWire>,
}

pub fn kernel_to_json(k: &ExtensionKernel) -> String {
    pretty(&KernelWire {
        ground_size: k.ground_size(),
        m: k.m(),
        n: k.n(),
        entries: k
            .entries()
            .map(|(p, mu)| EntryWire {
                point: subset_list(p),
                measure: measure_wire(mu),
            })
            .collect(),
    })
}

pub fn kernel_from_json(text: &str) -> Result<ExtensionKernel> {
    let wire: KernelWire = parse_json(text)?;
    let entries = wire
        .entries
        .iter()
        .map(|e| Ok((list_subset(&e.point)?, wire_measure(&e.measure)?)))
        .collect::<Result<Vec<_>>>()?;
    ExtensionKernel::from_entries(wire.ground_size, wire.m, wire.n, entries)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyWire {
    orders: Vec<Vec<usize>>,
    mode: String,
    seed: u64,
}

pub fn family_to_json(f: &BetaOrderFamily) -> String {
    pretty(&FamilyWire {
        orders: f.orders().to_vec(),
        mode: f.mode().map_or("custom", OrderMode::name).to_string(),
        seed: f.seed(),
    })
}

pub fn family_from_json(text: &str) -> Result<BetaOrderFamily> {
    let wire: FamilyWire = parse_json(text)?;
    let mode = match wire.mode.as_str() {
        "custom" => None,
        "random" => Some(OrderMode::Random),
        "reverse" => Some(OrderMode::Reverse),
        "natural" => Some(OrderMode::Natural),
        other => return Err(Error::Schema(format!("unknown order mode {other:?}"))),
    };
    BetaOrderFamily::from_orders(wire.orders, mode, wire.seed)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapEntryWire {
    #[serde(rename = "in")]
    input: Vec<usize>,
    out: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapWire {
    entries: Vec<MapEntryWire>,
}

pub fn map_to_json(s: &SetValuedMap) -> String {
    pretty(&MapWire {
        entries: s
            .entries()
            .map(|(a, b)| MapEntryWire {
                input: subset_list(a),
                out: subset_list(b),
            })
            .collect(),
    })
}

pub fn map_from_json(text: &str) -> Result<SetValuedMap> {
    let wire: MapWire = parse_json(text)?;
    wire.entries
        .iter()
        .map(|e| Ok((list_subset(&e.input)?, list_subset(&e.out)?)))
        .collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ValueWire {
    set: Vec<usize>,
    value: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionWire {
    entries: Vec<ValueWire>,
}

pub fn function_to_json(f: &PointFunction) -> String {
    pretty(&FunctionWire {
        entries: f
            .iter()
            .map(|(a, v)| ValueWire {
                set: subset_list(*a),
                value: rational::to_wire(v),
            })
            .collect(),
    })
}

pub fn function_from_json(text: &str) -> Result<PointFunction> {
    let wire: FunctionWire = parse_json(text)?;
    let mut f = PointFunction::new();
    for e in &wire.entries {
        let a = list_subset(&e.set)?;
        if f.insert(a, rational::parse(&e.value)?).is_some() {
            return Err(Error::Schema(format!("duplicate value for {a}")));
        }
    }
    Ok(f)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BallAtomWire {
    ball_point: BTreeMap<String, String>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StubEntryWire {
    point_subset: Vec<usize>,
    measure: Vec<BallAtomWire>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StubWire {
    mu: String,
    m: usize,
    k: usize,
    entries: Vec<StubEntryWire>,
}

/// `{"idx": "p/q"}`, with indices in numeric order.
pub fn ball_point_to_value(z: &BallPoint) -> Value {
    Value::Object(
        z.coords()
            .iter()
            .map(|(i, v)| (i.to_string(), Value::String(rational::to_wire(v))))
            .collect(),
    )
}

fn ball_point_wire(z: &BallPoint) -> BTreeMap<String, String> {
    z.coords()
        .iter()
        .map(|(i, v)| (i.to_string(), rational::to_wire(v)))
        .collect()
}

fn coords_from_map(map: &BTreeMap<String, String>) -> Result<Coords> {
    map.iter()
        .map(|(i, v)| {
            let i: usize = i
                .parse()
                .map_err(|_| Error::Schema(format!("bad coordinate index {i:?}")))?;
            Ok((i, rational::parse(v)?))
        })
        .collect()
}

/// Parses `{"idx": "p/q"}` into a point of `B⁺_1`.
pub fn ball_point_from_map(map: &BTreeMap<String, String>) -> Result<BallPoint> {
    BallPoint::unit(coords_from_map(map)?)
}

pub fn ball_point_from_json(text: &str) -> Result<BallPoint> {
    ball_point_from_map(&parse_json(text)?)
}

pub fn stub_to_json(stub: &BallKernelStub) -> String {
    pretty(&StubWire {
        mu: rational::to_wire(&stub.mu),
        m: stub.m,
        k: stub.k,
        entries: stub
            .entries
            .iter()
            .map(|(a, t)| StubEntryWire {
                point_subset: subset_list(*a),
                measure: t
                    .atoms()
                    .map(|(z, c)| BallAtomWire {
                        ball_point: ball_point_wire(z),
                        coeff: rational::to_wire(c),
                    })
                    .collect(),
            })
            .collect(),
    })
}

pub fn stub_from_json(text: &str) -> Result<BallKernelStub> {
    let wire: StubWire = parse_json(text)?;
    let mut entries = BTreeMap::new();
    for e in &wire.entries {
        let a = list_subset(&e.point_subset)?;
        let mut t = BallMeasure::default();
        for atom in &e.measure {
            t.add(
                ball_point_from_map(&atom.ball_point)?,
                rational::parse(&atom.coeff)?,
            );
        }
        if entries.insert(a, t).is_some() {
            return Err(Error::Schema(format!("duplicate stub entry for {a}")));
        }
    }
    Ok(BallKernelStub {
        mu: rational::parse(&wire.mu)?,
        m: wire.m,
        k: wire.k,
        entries,
    })
}

fn region_value(region: &Region) -> Value {
    match region {
        Region::Atom(a) => json!({ "kind": "atom", "atom": subset_list(*a) }),
        Region::CylinderMinus { base, minus } => json!({
            "kind": "cylinder_minus",
            "base": subset_list(*base),
            "minus": minus.iter().map(|c| subset_list(*c)).collect::<Vec<_>>(),
        }),
    }
}

pub fn certificate_to_value(c: &LowerBoundCertificate) -> Value {
    json!({
        "witness": c.witness.z,
        "epsilon": rational::to_wire(&c.epsilon),
        "epsilon_prime": rational::to_wire(&c.epsilon_prime),
        "block_size": c.block_size,
        "regions": c.regions.iter().map(|r| json!({
            "region": region_value(&r.region),
            "mass": rational::to_wire(&r.mass),
            "target": rational::to_wire(&r.target),
            "tolerance": rational::to_wire(&r.tolerance),
        })).collect::<Vec<_>>(),
        "certified_bound": rational::to_wire(&c.certified_bound),
        "tv_norm": rational::to_wire(&c.tv_norm),
        "measure": measure_to_value(&c.measure),
    })
}

/// Which artifact a JSON document holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArtifactKind {
    Kernel,
    OrderFamily,
    Map,
    Stub,
    Function,
}

pub fn detect_kind(text: &str) -> Result<ArtifactKind> {
    let value: Value = parse_json(text)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Schema("expected a JSON object".into()))?;
    let has = |k: &str| obj.contains_key(k);
    if has("ground_size") {
        return Ok(ArtifactKind::Kernel);
    }
    if has("orders") {
        return Ok(ArtifactKind::OrderFamily);
    }
    if has("mu") {
        return Ok(ArtifactKind::Stub);
    }
    let first = obj
        .get("entries")
        .and_then(Value::as_array)
        .and_then(|e| e.first())
        .and_then(Value::as_object);
    match first {
        Some(e) if e.contains_key("set") => Ok(ArtifactKind::Function),
        Some(e) if e.contains_key("in") => Ok(ArtifactKind::Map),
        None if obj.contains_key("entries") => Ok(ArtifactKind::Map),
        _ => Err(Error::Schema("unrecognised artifact".into())),
    }
}

/// Parses and re-emits a document in canonical form.
pub fn canonicalize(text: &str) -> Result<(ArtifactKind, String)> {
    let kind = detect_kind(text)?;
    let out = match kind {
        ArtifactKind::Kernel => kernel_to_json(&kernel_from_json(text)?),
        ArtifactKind::OrderFamily => family_to_json(&family_from_json(text)?),
        ArtifactKind::Map => map_to_json(&map_from_json(text)?),
        ArtifactKind::Stub => stub_to_json(&stub_from_json(text)?),
        ArtifactKind::Function => function_to_json(&function_from_json(text)?),
    };
    Ok((kind, out))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundtripReport {
    pub kind: ArtifactKind,
    /// Canonical form is a fixed point of parse → serialize.
    pub stable: bool,
    /// The input was already in canonical form.
    pub canonical_input: bool,
}

/// Parse → serialize → parse → serialize, comparing the two serializations.
pub fn roundtrip(text: &str) -> Result<RoundtripReport> {
    let (kind, once) = canonicalize(text)?;
    let (_, twice) = canonicalize(&once)?;
    let same_input = serde_json::from_str::<Value>(text).map_err(schema)?
        == serde_json::from_str::<Value>(&once).map_err(schema)?;
    Ok(RoundtripReport {
        kind,
        stable: once == twice,
        canonical_input: same_input,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::canonical_kernel;
    use crate::chain::make_beta_orders;
    use crate::rational::{int, ratio};

    #[test]
    fn kernel_schema() {
        let k = canonical_kernel(3, 1, 2).unwrap();
        let text = kernel_to_json(&k);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["ground_size"], 3);
        assert_eq!(v["entries"][0]["point"], json!([]));
        assert_eq!(
            v["entries"][0]["measure"],
            json!([{"atom": [], "coeff": "1/1"}])
        );
        assert_eq!(kernel_from_json(&text).unwrap(), k);
        let report = roundtrip(&text).unwrap();
        assert!(report.stable && report.canonical_input);
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let text = r#"{"ground_size": 1, "m": 0, "n": 1, "entries": [
            {"point": [], "measure": [{"atom": [], "coeff": "1/1"}]},
            {"point": [0], "measure": [{"atom": [], "coeff": "2/2"}, {"atom": [], "coeff": "0/1"}]}]}"#;
        let report = roundtrip(text).unwrap();
        assert_eq!(report.kind, ArtifactKind::Kernel);
        assert!(report.stable);
        assert!(!report.canonical_input);
        let (_, canon) = canonicalize(text).unwrap();
        assert!(!canon.contains("0/1"));
        assert!(roundtrip(&canon).unwrap().canonical_input);
    }

    #[test]
    fn schema_violations() {
        assert!(matches!(kernel_from_json("{"), Err(Error::Schema(_))));
        let unsorted = r#"{"ground_size": 2, "m": 0, "n": 0, "entries": [{"point": [], "measure": [{"atom": [1, 0], "coeff": "1"}]}]}"#;
        assert!(matches!(kernel_from_json(unsorted), Err(Error::Schema(_))));
        let decimal = r#"{"entries": [{"set": [], "value": "0.5"}]}"#;
        assert!(matches!(function_from_json(decimal), Err(Error::Schema(_))));
        assert!(detect_kind("[]").is_err());
    }

    #[test]
    fn family_and_map() {
        let f = make_beta_orders(5, OrderMode::Random, 7).unwrap();
        let text = family_to_json(&f);
        assert_eq!(family_from_json(&text).unwrap(), f);
        assert!(roundtrip(&text).unwrap().stable);

        let s: SetValuedMap = [(Subset::singleton(0), Subset::singleton(3))]
            .into_iter()
            .collect();
        let text = map_to_json(&s);
        assert_eq!(map_from_json(&text).unwrap(), s);
        assert_eq!(
            detect_kind(r#"{"entries": []}"#).unwrap(),
            ArtifactKind::Map
        );
    }

    #[test]
    fn stub_and_function() {
        let stub = crate::ball::random_stub(3, 1, 1, 4, 2).unwrap();
        let text = stub_to_json(&stub);
        assert_eq!(stub_from_json(&text).unwrap(), stub);
        assert!(roundtrip(&text).unwrap().canonical_input);

        let f: PointFunction = [
            (Subset::EMPTY, int(1)),
            (Subset::singleton(2), ratio(-3, 4)),
        ]
        .into_iter()
        .collect();
        let text = function_to_json(&f);
        assert_eq!(function_from_json(&text).unwrap(), f);
        assert_eq!(detect_kind(&text).unwrap(), ArtifactKind::Function);
    }
}
