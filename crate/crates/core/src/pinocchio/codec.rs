use serde_json::{Map, Value};

use super::{ConsistencyKey, Proof, ProvingKey, Variant, VerificationKey, ZkTerms};
use crate::codec::{
    hex_list, parse_list, ArtifactKind, CodecError, ContainerReader, ContainerWriter,
};
use crate::group::{Backend, GroupElement};

enum Item {
    One(GroupElement),
    Many(Vec<GroupElement>),
}

/// Field layout shared by the binary and JSON encodings. Only final-protocol
/// keys are serializable.
trait Artifact: Sized {
    const KIND: ArtifactKind;
    const JSON_KIND: &'static str;
    /// `(name, is_list)` in encoding order.
    const SCHEMA: &'static [(&'static str, bool)];

    fn backend(&self) -> Backend;
    fn items(&self) -> Result<Vec<Item>, CodecError>;
    fn from_items(items: Vec<Item>) -> Result<Self, CodecError>;
}

struct Items(std::vec::IntoIter<Item>);

impl Items {
    fn one(&mut self) -> GroupElement {
        match self.0.next() {
            Some(Item::One(g)) => g,
            _ => unreachable!("schema mismatch"),
        }
    }

    fn many(&mut self) -> Vec<GroupElement> {
        match self.0.next() {
            Some(Item::Many(g)) => g,
            _ => unreachable!("schema mismatch"),
        }
    }
}

fn shape(msg: &str) -> CodecError {
    CodecError::Shape(msg.to_string())
}

fn final_only(v: Variant) -> Result<(), CodecError> {
    if v == Variant::Final {
        Ok(())
    } else {
        Err(shape("only final-protocol keys can be serialized"))
    }
}

impl Artifact for ProvingKey {
    const KIND: ArtifactKind = ArtifactKind::ProvingKey;
    const JSON_KIND: &'static str = "provingKey";
    const SCHEMA: &'static [(&'static str, bool)] = &[
        ("powers", true),
        ("l", true),
        ("r", true),
        ("o", true),
        ("lAlpha", true),
        ("rAlpha", true),
        ("oAlpha", true),
        ("z", true),
        ("lT", false),
        ("rT", false),
        ("oT", false),
        ("lAlphaT", false),
        ("rAlphaT", false),
        ("oAlphaT", false),
        ("lBetaT", false),
        ("rBetaT", false),
        ("oBetaT", false),
    ];

    fn backend(&self) -> Backend {
        ProvingKey::backend(self)
    }

    fn items(&self) -> Result<Vec<Item>, CodecError> {
        final_only(self.variant)?;
        let zk = &self.zk;
        let mut out: Vec<Item> = [
            &self.powers,
            &self.l,
            &self.r,
            &self.o,
            &self.l_alpha,
            &self.r_alpha,
            &self.o_alpha,
            &self.z,
        ]
        .into_iter()
        .map(|v| Item::Many(v.clone()))
        .collect();
        out.extend(
            [
                zk.l_t,
                zk.r_t,
                zk.o_t,
                zk.l_alpha_t,
                zk.r_alpha_t,
                zk.o_alpha_t,
                zk.l_beta_t,
                zk.r_beta_t,
                zk.o_beta_t,
            ]
            .into_iter()
            .map(Item::One),
        );
        Ok(out)
    }

    fn from_items(items: Vec<Item>) -> Result<Self, CodecError> {
        let mut it = Items(items.into_iter());
        let powers = it.many();
        let (l, r, o) = (it.many(), it.many(), it.many());
        let (l_alpha, r_alpha, o_alpha, z) = (it.many(), it.many(), it.many(), it.many());
        if powers.len() < 2 || l.is_empty() || r.len() != l.len() || o.len() != l.len() {
            return Err(shape("proving key operand lists disagree"));
        }
        let owned = l_alpha.len();
        if owned == 0
            || owned >= l.len()
            || [&r_alpha, &o_alpha, &z].iter().any(|v| v.len() != owned)
        {
            return Err(shape("proving key shifted lists disagree"));
        }
        let zk = ZkTerms {
            l_t: it.one(),
            r_t: it.one(),
            o_t: it.one(),
            l_alpha_t: it.one(),
            r_alpha_t: it.one(),
            o_alpha_t: it.one(),
            l_beta_t: it.one(),
            r_beta_t: it.one(),
            o_beta_t: it.one(),
        };
        Ok(ProvingKey {
            variant: Variant::Final,
            m: l.len() - 1 - owned,
            powers,
            l,
            r,
            o,
            l_alpha,
            r_alpha,
            o_alpha,
            z,
            zk,
        })
    }
}

impl Artifact for VerificationKey {
    const KIND: ArtifactKind = ArtifactKind::VerificationKey;
    const JSON_KIND: &'static str = "verificationKey";
    const SCHEMA: &'static [(&'static str, bool)] = &[
        ("g", false),
        ("gOT", false),
        ("l", true),
        ("r", true),
        ("o", true),
        ("gAlphaL", false),
        ("gAlphaR", false),
        ("gAlphaO", false),
        ("gGamma", false),
        ("gBetaGamma", false),
    ];

    fn backend(&self) -> Backend {
        VerificationKey::backend(self)
    }

    fn items(&self) -> Result<Vec<Item>, CodecError> {
        final_only(self.variant)?;
        let ConsistencyKey::Masked {
            g_gamma,
            g_beta_gamma,
        } = &self.consistency
        else {
            return Err(shape("final key without gamma masking"));
        };
        Ok(vec![
            Item::One(self.g),
            Item::One(self.g_o_t),
            Item::Many(self.l.clone()),
            Item::Many(self.r.clone()),
            Item::Many(self.o.clone()),
            Item::One(self.g_alpha_l),
            Item::One(self.g_alpha_r),
            Item::One(self.g_alpha_o),
            Item::One(*g_gamma),
            Item::One(*g_beta_gamma),
        ])
    }

    fn from_items(items: Vec<Item>) -> Result<Self, CodecError> {
        let mut it = Items(items.into_iter());
        let (g, g_o_t) = (it.one(), it.one());
        let (l, r, o) = (it.many(), it.many(), it.many());
        if l.is_empty() || r.len() != l.len() || o.len() != l.len() {
            return Err(shape("verification key public lists disagree"));
        }
        Ok(VerificationKey {
            variant: Variant::Final,
            g,
            g_o_t,
            l,
            r,
            o,
            g_alpha_l: it.one(),
            g_alpha_r: it.one(),
            g_alpha_o: it.one(),
            consistency: ConsistencyKey::Masked {
                g_gamma: it.one(),
                g_beta_gamma: it.one(),
            },
        })
    }
}

impl Artifact for Proof {
    const KIND: ArtifactKind = ArtifactKind::Proof;
    const JSON_KIND: &'static str = "proof";
    const SCHEMA: &'static [(&'static str, bool)] = &[
        ("l", false),
        ("r", false),
        ("o", false),
        ("h", false),
        ("lAlpha", false),
        ("rAlpha", false),
        ("oAlpha", false),
        ("z", false),
    ];

    fn backend(&self) -> Backend {
        self.l.backend()
    }

    fn items(&self) -> Result<Vec<Item>, CodecError> {
        Ok(self.elements().into_iter().map(Item::One).collect())
    }

    fn from_items(items: Vec<Item>) -> Result<Self, CodecError> {
        let mut it = Items(items.into_iter());
        Ok(Proof::from_elements(std::array::from_fn(|_| it.one())))
    }
}

fn to_bytes<A: Artifact>(a: &A) -> Result<Vec<u8>, CodecError> {
    let mut w = ContainerWriter::new(A::KIND, a.backend());
    for item in a.items()? {
        match item {
            Item::One(g) => w.element(&g),
            Item::Many(gs) => w.elements(&gs),
        };
    }
    Ok(w.finish())
}

fn from_bytes<A: Artifact>(data: &[u8]) -> Result<A, CodecError> {
    let mut r = ContainerReader::open(data, A::KIND)?;
    let mut items = Vec::with_capacity(A::SCHEMA.len());
    for &(_, list) in A::SCHEMA {
        items.push(if list {
            Item::Many(r.elements()?)
        } else {
            Item::One(r.element()?)
        });
    }
    r.finish()?;
    A::from_items(items)
}

fn to_json<A: Artifact>(a: &A) -> Result<String, CodecError> {
    // serde_json's default map is ordered, so keys come out sorted
    let mut doc = Map::new();
    doc.insert(
        "backend".into(),
        Value::String(a.backend().id().to_string()),
    );
    doc.insert("kind".into(), Value::String(A::JSON_KIND.into()));
    for (&(name, _), item) in A::SCHEMA.iter().zip(a.items()?) {
        let v = match item {
            Item::One(g) => Value::String(g.to_tagged_hex()),
            Item::Many(gs) => Value::from(hex_list(&gs)),
        };
        doc.insert(name.into(), v);
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(doc))?;
    s.push('\n');
    Ok(s)
}

fn from_json<A: Artifact>(s: &str) -> Result<A, CodecError> {
    let doc: Map<String, Value> = serde_json::from_str(s)?;
    let text = |key: &str| -> Result<&str, CodecError> {
        doc.get(key)
            .and_then(Value::as_str)
            .ok_or_else(|| CodecError::Json(format!("missing string field {:?}", key)))
    };
    if text("kind")? != A::JSON_KIND {
        return Err(CodecError::Json(format!(
            "expected kind {:?}",
            A::JSON_KIND
        )));
    }
    if doc.len() != A::SCHEMA.len() + 2 {
        return Err(CodecError::Json("unexpected fields".into()));
    }
    let backend = Backend::from_id(text("backend")?.parse()?)?;
    let mut items = Vec::with_capacity(A::SCHEMA.len());
    for &(name, list) in A::SCHEMA {
        items.push(if list {
            let raw: Vec<String> = serde_json::from_value(
                doc.get(name)
                    .cloned()
                    .ok_or_else(|| CodecError::Json(format!("missing field {:?}", name)))?,
            )?;
            Item::Many(parse_list(&backend, &raw)?)
        } else {
            Item::One(backend.parse_element(text(name)?)?)
        });
    }
    A::from_items(items)
}

macro_rules! artifact_io {
    ($t:ty) => {
        impl $t {
            pub fn to_bytes(&self) -> Result<Vec<u8>, CodecError> {
                to_bytes(self)
            }

            pub fn from_bytes(data: &[u8]) -> Result<Self, CodecError> {
                from_bytes(data)
            }

            pub fn to_json(&self) -> Result<String, CodecError> {
                to_json(self)
            }

            pub fn from_json(s: &str) -> Result<Self, CodecError> {
                from_json(s)
            }
        }
    };
}

artifact_io!(ProvingKey);
artifact_io!(VerificationKey);
artifact_io!(Proof);
