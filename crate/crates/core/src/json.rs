//! JSON encoding of types, terms, and derivations.
//!
//! Types are `["iota"]` / `["arr", a, b]`; terms are `["var", k]` /
//! `["app", f, a]` / `["abs", T, b]`; derivation nodes are objects tagged by
//! `"rule"`. Terms do not record their context, so decoding threads the
//! context through. Objects are always emitted with keys in sorted order and
//! contain no floats, so `to_string` of an encoded value is canonical.

use serde_json::{json, Map, Value};

use crate::conversion::{check_deriv, Deriv, DerivNode};
use crate::error::{Error, Result};
use crate::syntax::{alpha_eq, Ctxt, Idx, Tm, TmNode, Ty};

pub fn ty_to_json(t: &Ty) -> Value {
    match t {
        Ty::Iota => json!(["iota"]),
        Ty::Arr(a, b) => json!(["arr", ty_to_json(a), ty_to_json(b)]),
    }
}

pub fn ctxt_to_json(g: &Ctxt) -> Value {
    Value::Array(g.types().iter().map(ty_to_json).collect())
}

pub fn tm_to_json(t: &Tm) -> Value {
    match t.node() {
        TmNode::Var(i) => json!(["var", i.depth()]),
        TmNode::App(f, a) => json!(["app", tm_to_json(f), tm_to_json(a)]),
        TmNode::Abs(b) => {
            let dom = t.ty().as_arr().expect("abstraction has arrow type").0;
            json!(["abs", ty_to_json(dom), tm_to_json(b)])
        }
    }
}

/// Builds an object from key/value pairs, inserting keys in sorted order.
fn object<const N: usize>(mut pairs: [(&str, Value); N]) -> Value {
    pairs.sort_by(|a, b| a.0.cmp(b.0));
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

pub fn deriv_to_json(d: &Deriv) -> Value {
    match d.node() {
        DerivNode::Var(i) => object([("rule", json!("Var")), ("index", json!(i.depth()))]),
        DerivNode::App(f, a) => object([
            ("rule", json!("App")),
            ("fun", deriv_to_json(f)),
            ("arg", deriv_to_json(a)),
        ]),
        DerivNode::Abs(b) => {
            let inner = b.ctxt();
            let dom = inner.split_last().map(|(_, t)| t.clone()).unwrap_or(Ty::Iota);
            object([
                ("rule", json!("Abs")),
                ("dom", ty_to_json(&dom)),
                ("body", deriv_to_json(b)),
            ])
        }
        DerivNode::Beta { body, arg } => object([
            ("rule", json!("Beta")),
            ("body", tm_to_json(body)),
            ("arg", tm_to_json(arg)),
        ]),
        DerivNode::Eta { term, dom } => object([
            ("rule", json!("Eta")),
            ("term", tm_to_json(term)),
            ("dom", ty_to_json(dom)),
        ]),
        DerivNode::Symm(a) => object([("rule", json!("Symm")), ("of", deriv_to_json(a))]),
        DerivNode::Trans(a, b) => object([
            ("rule", json!("Trans")),
            ("left", deriv_to_json(a)),
            ("right", deriv_to_json(b)),
        ]),
    }
}

struct Cursor {
    path: Vec<String>,
}

impl Cursor {
    fn new() -> Cursor {
        Cursor { path: vec![] }
    }

    fn err(&self, reason: impl Into<String>) -> Error {
        let mut p = String::from("$");
        for seg in &self.path {
            p.push('/');
            p.push_str(seg);
        }
        Error::Json {
            path: p,
            reason: reason.into(),
        }
    }

    fn at<T>(&mut self, seg: impl Into<String>, f: impl FnOnce(&mut Cursor) -> Result<T>) -> Result<T> {
        self.path.push(seg.into());
        let r = f(self);
        self.path.pop();
        r
    }

    fn ty(&mut self, v: &Value) -> Result<Ty> {
        let arr = v.as_array().ok_or_else(|| self.err("type must be an array"))?;
        match (arr.first().and_then(Value::as_str), arr.len()) {
            (Some("iota"), 1) => Ok(Ty::Iota),
            (Some("arr"), 3) => {
                let a = self.at("1", |c| c.ty(&arr[1]))?;
                let b = self.at("2", |c| c.ty(&arr[2]))?;
                Ok(Ty::arr(a, b))
            }
            _ => Err(self.err("expected [\"iota\"] or [\"arr\", a, b]")),
        }
    }

    fn ctxt(&mut self, v: &Value) -> Result<Ctxt> {
        let arr = v.as_array().ok_or_else(|| self.err("context must be an array of types"))?;
        let mut g = Ctxt::nil();
        for (k, t) in arr.iter().enumerate() {
            g = g.snoc(self.at(k.to_string(), |c| c.ty(t))?);
        }
        Ok(g)
    }

    fn tm(&mut self, g: &Ctxt, v: &Value) -> Result<Tm> {
        let arr = v.as_array().ok_or_else(|| self.err("term must be an array"))?;
        match (arr.first().and_then(Value::as_str), arr.len()) {
            (Some("var"), 2) => {
                let k = arr[1]
                    .as_u64()
                    .ok_or_else(|| self.err("variable index must be a natural number"))?;
                Tm::var_at(g, k as usize).map_err(|e| self.err(e.to_string()))
            }
            (Some("app"), 3) => {
                let f = self.at("1", |c| c.tm(g, &arr[1]))?;
                let a = self.at("2", |c| c.tm(g, &arr[2]))?;
                Tm::app(f, a).map_err(|e| self.err(e.to_string()))
            }
            (Some("abs"), 3) => {
                let dom = self.at("1", |c| c.ty(&arr[1]))?;
                let b = self.at("2", |c| c.tm(&g.snoc(dom), &arr[2]))?;
                Tm::abs(b).map_err(|e| self.err(e.to_string()))
            }
            _ => Err(self.err("expected [\"var\", k], [\"app\", f, a] or [\"abs\", T, b]")),
        }
    }

    fn field<'v>(&self, obj: &'v Map<String, Value>, key: &str) -> Result<&'v Value> {
        obj.get(key).ok_or_else(|| self.err(format!("missing field \"{key}\"")))
    }

    fn deriv(&mut self, g: &Ctxt, v: &Value) -> Result<Deriv> {
        let obj = v.as_object().ok_or_else(|| self.err("derivation node must be an object"))?;
        let rule = self
            .field(obj, "rule")?
            .as_str()
            .ok_or_else(|| self.err("\"rule\" must be a string"))?;
        let expect_keys = |c: &Cursor, keys: &[&str]| -> Result<()> {
            for k in obj.keys() {
                if k != "rule" && !keys.contains(&k.as_str()) {
                    return Err(c.err(format!("unexpected field \"{k}\" in {rule} node")));
                }
            }
            Ok(())
        };
        match rule {
            "Var" => {
                expect_keys(self, &["index"])?;
                let k = self
                    .field(obj, "index")?
                    .as_u64()
                    .ok_or_else(|| self.err("\"index\" must be a natural number"))?;
                Idx::new(g, k as usize).map(Deriv::var).map_err(|e| self.err(e.to_string()))
            }
            "App" => {
                expect_keys(self, &["fun", "arg"])?;
                let f = self.at("fun", |c| c.deriv(g, c_field(obj, "fun")))?;
                let a = self.at("arg", |c| c.deriv(g, c_field(obj, "arg")))?;
                Ok(Deriv::app(f, a))
            }
            "Abs" => {
                expect_keys(self, &["dom", "body"])?;
                let dom = self.at("dom", |c| c.ty(c_field(obj, "dom")))?;
                let body = self.at("body", |c| c.deriv(&g.snoc(dom), c_field(obj, "body")))?;
                Ok(Deriv::abs(body))
            }
            "Beta" => {
                expect_keys(self, &["body", "arg"])?;
                let arg = self.at("arg", |c| c.tm(g, c_field(obj, "arg")))?;
                let inner = g.snoc(arg.ty().clone());
                let body = self.at("body", |c| c.tm(&inner, c_field(obj, "body")))?;
                Ok(Deriv::beta(body, arg))
            }
            "Eta" => {
                expect_keys(self, &["term", "dom"])?;
                let term = self.at("term", |c| c.tm(g, c_field(obj, "term")))?;
                let dom = self.at("dom", |c| c.ty(c_field(obj, "dom")))?;
                Ok(Deriv::eta(term, dom))
            }
            "Symm" => {
                expect_keys(self, &["of"])?;
                Ok(Deriv::symm(self.at("of", |c| c.deriv(g, c_field(obj, "of")))?))
            }
            "Trans" => {
                expect_keys(self, &["left", "right"])?;
                let a = self.at("left", |c| c.deriv(g, c_field(obj, "left")))?;
                let b = self.at("right", |c| c.deriv(g, c_field(obj, "right")))?;
                Ok(Deriv::trans(a, b))
            }
            other => Err(self.err(format!("unknown rule \"{other}\""))),
        }
    }
}

// Missing fields surface when the nested decoder sees `null`.
fn c_field<'v>(obj: &'v Map<String, Value>, key: &str) -> &'v Value {
    obj.get(key).unwrap_or(&Value::Null)
}

pub fn ty_from_json(v: &Value) -> Result<Ty> {
    Cursor::new().ty(v)
}

pub fn ctxt_from_json(v: &Value) -> Result<Ctxt> {
    Cursor::new().ctxt(v)
}

pub fn tm_from_json(g: &Ctxt, v: &Value) -> Result<Tm> {
    Cursor::new().tm(g, v)
}

pub fn deriv_from_json(g: &Ctxt, v: &Value) -> Result<Deriv> {
    Cursor::new().deriv(g, v)
}

/// A self-contained claim `lhs ~βη rhs` over `ctxt`, witnessed by `deriv`.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub ctxt: Ctxt,
    pub lhs: Tm,
    pub rhs: Tm,
    pub deriv: Deriv,
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        object([
            ("ctxt", ctxt_to_json(&self.ctxt)),
            ("lhs", tm_to_json(&self.lhs)),
            ("rhs", tm_to_json(&self.rhs)),
            ("deriv", deriv_to_json(&self.deriv)),
        ])
    }

    pub fn from_json(v: &Value) -> Result<Certificate> {
        let mut c = Cursor::new();
        let obj = v.as_object().ok_or_else(|| c.err("certificate must be an object"))?;
        let ctxt = c.at("ctxt", |c| c.ctxt(c_field(obj, "ctxt")))?;
        let lhs = c.at("lhs", |c| c.tm(&ctxt, c_field(obj, "lhs")))?;
        let rhs = c.at("rhs", |c| c.tm(&ctxt, c_field(obj, "rhs")))?;
        let deriv = c.at("deriv", |c| c.deriv(&ctxt, c_field(obj, "deriv")))?;
        Ok(Certificate { ctxt, lhs, rhs, deriv })
    }

    /// Checks the derivation and that its endpoints are the claimed terms.
    pub fn verify(&self) -> Result<()> {
        let (l, r) = check_deriv(&self.deriv)?;
        if !alpha_eq(&l, &self.lhs) {
            return Err(Error::BadNode {
                path: "$".into(),
                reason: format!("derivation starts at {l}, but the claimed left endpoint is {}", self.lhs),
            });
        }
        if !alpha_eq(&r, &self.rhs) {
            return Err(Error::BadNode {
                path: "$".into(),
                reason: format!("derivation ends at {r}, but the claimed right endpoint is {}", self.rhs),
            });
        }
        Ok(())
    }
}

/// Decodes the fields shared by certificate-bearing documents.
pub(crate) fn decode_field<T>(
    obj: &Map<String, Value>,
    key: &str,
    f: impl FnOnce(&Value) -> Result<T>,
) -> Result<T> {
    f(c_field(obj, key)).map_err(|e| match e {
        Error::Json { path, reason } => Error::Json {
            path: path.replacen('$', &format!("$/{key}"), 1),
            reason,
        },
        other => other,
    })
}

pub(crate) fn sorted_object<const N: usize>(pairs: [(&str, Value); N]) -> Value {
    object(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::church;
    use crate::conversion::deriv_refl;

    #[test]
    fn types_and_terms() {
        let t = church::succ();
        let v = tm_to_json(&t);
        assert_eq!(tm_from_json(&Ctxt::nil(), &v).unwrap(), t);
        assert_eq!(
            ty_to_json(&church::endo()).to_string(),
            r#"["arr",["iota"],["iota"]]"#
        );
        assert_eq!(tm_to_json(&church::one()).to_string(), r#"["abs",["arr",["iota"],["iota"]],["var",0]]"#);
    }

    #[test]
    fn deriv_object_keys_are_sorted() {
        let d = Deriv::eta(church::one(), church::endo());
        let s = deriv_to_json(&d).to_string();
        assert_eq!(
            s,
            r#"{"dom":["arr",["iota"],["iota"]],"rule":"Eta","term":["abs",["arr",["iota"],["iota"]],["var",0]]}"#
        );
        let back = deriv_from_json(&Ctxt::nil(), &serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(deriv_to_json(&back).to_string(), s);
    }

    #[test]
    fn decode_errors_carry_paths() {
        let v: Value = serde_json::from_str(r#"{"rule":"App","fun":{"rule":"Var","index":3},"arg":{"rule":"Var","index":0}}"#).unwrap();
        match deriv_from_json(&Ctxt::from_types([Ty::Iota]), &v).unwrap_err() {
            Error::Json { path, .. } => assert_eq!(path, "$/fun"),
            other => panic!("unexpected {other:?}"),
        }
        let v: Value = serde_json::from_str(r#"["app",["var",0],["var",0]]"#).unwrap();
        assert!(tm_from_json(&Ctxt::from_types([Ty::Iota]), &v).is_err());
        assert!(ty_from_json(&serde_json::json!(["arrow"])).is_err());
        let v: Value = serde_json::from_str(r#"{"rule":"Frob"}"#).unwrap();
        assert!(deriv_from_json(&Ctxt::nil(), &v).is_err());
    }

    #[test]
    fn certificate_verify_checks_claims() {
        let t = church::one();
        let cert = Certificate {
            ctxt: Ctxt::nil(),
            lhs: t.clone(),
            rhs: t.clone(),
            deriv: deriv_refl(&t),
        };
        cert.verify().unwrap();
        let again = Certificate::from_json(&cert.to_json()).unwrap();
        again.verify().unwrap();
        let wrong = Certificate {
            rhs: church::numeral(1),
            ..cert
        };
        assert!(matches!(wrong.verify(), Err(Error::BadNode { .. })));
    }
}
