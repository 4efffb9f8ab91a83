//! Canonical JSON encoding of analysis results.
//!
//! Keys come out sorted because `serde_json::Map` is a `BTreeMap` here.
//! Exact values are strings (`"p/q"`), Gaussian rationals are
//! `{"im": .., "re": ..}`, and only sampler eigenvalues are floats.

use jetcontact::contact::ContactReport;
use jetcontact::faa::{ConstantComparison, SlotShape};
use jetcontact::lift::{Obstruction, WitnessDiagnostic, WitnessOutcome};
use jetcontact::parse::{format_curve, format_polynomial};
use jetcontact::search::{ProbeSummary, TypeEstimate, Witness};
use jetcontact::{CurveJet, GaussianRational, Order, Polynomial, Rational, TraceSeries};
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: &str = "1";

pub fn rational(q: &Rational) -> Value {
    Value::String(q.to_string())
}

pub fn gaussian(c: &GaussianRational) -> Value {
    json!({ "re": c.re.to_string(), "im": c.im.to_string() })
}

/// Inverse of [`rational`].
pub fn read_rational(v: &Value) -> Option<Rational> {
    v.as_str()?.parse().ok()
}

/// Inverse of [`gaussian`].
pub fn read_gaussian(v: &Value) -> Option<GaussianRational> {
    Some(GaussianRational::new(
        read_rational(v.get("re")?)?,
        read_rational(v.get("im")?)?,
    ))
}

pub fn order(o: Order) -> Value {
    Value::String(o.to_string())
}

pub fn polynomial(p: &Polynomial) -> Value {
    Value::String(format_polynomial(p))
}

pub fn curve(c: &CurveJet) -> Value {
    json!({
        "text": format_curve(c),
        "multiplicity": c.multiplicity(),
        "jet_length": c.jet_length(),
    })
}

pub fn trace(t: &TraceSeries) -> Value {
    let terms: Vec<Value> = t
        .nonzero()
        .map(|(&(p, q), c)| json!({ "p": p, "q": q, "coeff": gaussian(c) }))
        .collect();
    json!({ "truncation": t.truncation(), "nonzero": terms })
}

pub fn contact_report(r: &ContactReport) -> Value {
    json!({
        "nu_curve": r.nu_curve,
        "nu_trace": order(r.nu_trace),
        "contact": r.contact.to_string(),
        "first_nonzero": r.first_nonzero.map(|(a, b)| json!([a, b])),
        "truncation": r.truncation,
    })
}

pub fn shape(s: &SlotShape) -> Value {
    json!({
        "holomorphic": s.holomorphic,
        "antiholomorphic": s.antiholomorphic,
        "display": s.to_string(),
    })
}

pub fn constant(c: &ConstantComparison) -> Value {
    let name = match c.kind {
        jetcontact::faa::ConstantKind::G => format!("G_{}", c.index),
        other => other.to_string(),
    };
    json!({
        "name": name,
        "multiplicity": c.multiplicity,
        "derivative": [c.derivative.0, c.derivative.1],
        "shape": shape(&c.shape),
        "paper_value": rational(&c.paper_value),
        "oracle_value": rational(&c.oracle_value),
        "agrees": c.agrees(),
        "identical_slots": c.identical_slots(),
        "ratio": c.ratio().map(|r| rational(&r)),
    })
}

pub fn obstruction(b: &Obstruction<GaussianRational>) -> Value {
    json!({
        "paper_convention": gaussian(&b.paper_convention),
        "oracle_convention": gaussian(&b.oracle_convention),
        "trivial": b.trivial,
    })
}

pub fn witness_outcome(w: &WitnessOutcome<GaussianRational>) -> Value {
    let diagnostic = w.diagnostic.as_ref().map(|d| {
        let mut m = Map::new();
        m.insert("message".into(), Value::String(d.to_string()));
        match d {
            WitnessDiagnostic::Precondition { nu_trace, needed } => {
                m.insert("kind".into(), "precondition".into());
                m.insert("nu_trace".into(), order(*nu_trace));
                m.insert("needed".into(), json!(needed));
            }
            WitnessDiagnostic::Obstructed { obstruction: b } => {
                m.insert("kind".into(), "obstructed".into());
                m.insert("obstruction".into(), obstruction(b));
            }
            WitnessDiagnostic::VerificationFailed { pair, order: o } => {
                m.insert("kind".into(), "verification_failed".into());
                m.insert("pair".into(), json!([pair.0, pair.1]));
                m.insert("nu_lift".into(), order(*o));
            }
        }
        Value::Object(m)
    });
    json!({
        "kind": w.kind.to_string(),
        "witness": w.witness.as_ref().map(curve),
        "lift_order": w.lift_order.map(order),
        "diagnostic": diagnostic,
    })
}

pub fn witness(w: &Witness) -> Value {
    json!({
        "curve": curve(&w.curve),
        "nu_trace": order(w.nu_trace),
        "contact": w.contact.to_string(),
    })
}

pub fn probes(p: &ProbeSummary) -> Value {
    let strata: Vec<Value> = p
        .strata
        .iter()
        .map(|s| {
            json!({
                "order_one": s.order_one.iter().map(|q| q + 1).collect::<Vec<_>>(),
                "probes": s.probes,
                "max_nu": order(s.max_nu),
                "nonzero_d31": s.nonzero_d31,
                "best": s.best.as_ref().map(witness),
            })
        })
        .collect();
    json!({
        "seed": p.seed,
        "probes_per_stratum": p.probes_per_stratum,
        "tangent_only": p.tangent_only,
        "max_nu": p.max_nu.map(order),
        "strata": strata,
    })
}

pub fn type_estimate(t: &TypeEstimate) -> Value {
    json!({
        "singular_lower": t.singular_lower.as_ref().map(witness),
        "regular_lower": t.regular_lower.as_ref().map(witness),
        "regular_probe_max": probes(&t.regular_probe_max),
        "caps": {
            "truncation": t.caps.truncation,
            "max_mult": t.caps.max_mult,
            "jet_len": t.caps.jet_len,
            "coefficient_count": t.caps.coefficient_count,
            "space_size": t.caps.space_size.to_string(),
            "enumerated": t.caps.enumerated,
            "budget": t.caps.budget.to_string(),
        },
    })
}

/// Wraps a payload with the schema version, command name and input echo.
pub fn envelope(command: &str, input: Value, result: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "input": input,
        "result": result,
    })
}

/// `a.b[0].c: value` lines, one per leaf, in key order.
pub fn to_text(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<String>) {
        match v {
            Value::Object(m) if !m.is_empty() => {
                for (k, x) in m {
                    let p = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&p, x, out);
                }
            }
            Value::Array(a) if !a.is_empty() && a.iter().any(|x| x.is_object() || x.is_array()) => {
                for (i, x) in a.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), x, out);
                }
            }
            Value::String(s) => out.push(format!("{prefix}: {s}")),
            other => out.push(format!("{prefix}: {other}")),
        }
    }
    let mut out = Vec::new();
    walk("", v, &mut out);
    out.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use jetcontact::Scalar;

    #[test]
    fn exact_values_round_trip() {
        let samples = [
            GaussianRational::from_ratio(-3, 7),
            GaussianRational::imag_unit(),
            GaussianRational::new(Rational::new(5.into(), 2.into()), Rational::new((-1).into(), 9.into())),
        ];
        for c in samples {
            let v = gaussian(&c);
            let text = serde_json::to_string(&v).unwrap();
            let back: Value = serde_json::from_str(&text).unwrap();
            assert_eq!(read_gaussian(&back), Some(c));
        }
        assert_eq!(rational(&Rational::new(6.into(), 4.into())), json!("3/2"));
    }

    #[test]
    fn keys_are_sorted() {
        let v = envelope("x", json!({"b": 1, "a": 2}), json!(null));
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(
            s,
            r#"{"command":"x","input":{"a":2,"b":1},"result":null,"schema_version":"1"}"#
        );
    }

    #[test]
    fn text_rendering() {
        let v = json!({"a": {"b": "1/2"}, "c": [1, 2], "d": [{"e": true}]});
        assert_eq!(to_text(&v), "a.b: 1/2\nc: [1,2]\nd[0].e: true");
    }
}
