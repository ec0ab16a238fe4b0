use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::CircuitError;
use crate::algebra::{Field, FieldElement};

/// Sparse `sum c_i * v_i`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinComb(BTreeMap<usize, FieldElement>);

impl LinComb {
    pub fn new() -> Self {
        LinComb(BTreeMap::new())
    }

    pub fn var(i: usize, field: Field) -> Self {
        let mut lc = LinComb::new();
        lc.add_term(i, field.one());
        lc
    }

    pub fn add_term(&mut self, i: usize, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let entry = self.0.entry(i).or_insert(c.field().zero());
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&i);
        }
    }

    pub fn add_scaled(&mut self, other: &LinComb, k: FieldElement) {
        for (&i, &c) in &other.0 {
            self.add_term(i, c * k);
        }
    }

    pub fn scaled(&self, k: FieldElement) -> LinComb {
        let mut out = LinComb::new();
        out.add_scaled(self, k);
        out
    }

    pub fn get(&self, i: usize) -> Option<FieldElement> {
        self.0.get(&i).copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, FieldElement)> + '_ {
        self.0.iter().map(|(&i, &c)| (i, c))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Only the constant-one slot (or nothing) is referenced.
    pub fn constant_value(&self, field: Field) -> Option<FieldElement> {
        match self.0.len() {
            0 => Some(field.zero()),
            1 => self.0.get(&0).copied(),
            _ => None,
        }
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }

    pub fn eval(&self, values: &[FieldElement], field: Field) -> FieldElement {
        self.0
            .iter()
            .fold(field.zero(), |acc, (&i, &c)| acc + c * values[i])
    }
}

/// `(l . v) * (r . v) = (o . v)`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub l: LinComb,
    pub r: LinComb,
    pub o: LinComb,
}

/// Full assignment; `values[0] = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub values: Vec<FieldElement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct R1cs {
    pub field: Field,
    /// Variable count, not including the constant one at index 0.
    pub n: usize,
    /// Public variables occupy indices `1..=m`.
    pub m: usize,
    pub constraints: Vec<Constraint>,
    /// Length `n + 1`.
    pub var_names: Vec<String>,
}

impl R1cs {
    pub fn d(&self) -> usize {
        self.constraints.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.var_names.iter().position(|v| v == name)
    }

    /// Indices of constraints the witness violates.
    pub fn unsatisfied(&self, w: &Witness) -> Vec<usize> {
        if w.values.len() != self.n + 1 {
            return (0..self.d()).collect();
        }
        let f = self.field;
        self.constraints
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                c.l.eval(&w.values, f) * c.r.eval(&w.values, f) != c.o.eval(&w.values, f)
            })
            .map(|(j, _)| j)
            .collect()
    }

    pub fn is_satisfied(&self, w: &Witness) -> bool {
        w.values.first().is_some_and(|v| v.is_one()) && self.unsatisfied(w).is_empty()
    }

    pub fn to_json(&self) -> String {
        let lc = |l: &LinComb| -> BTreeMap<String, String> {
            l.terms()
                .map(|(i, c)| (i.to_string(), c.to_hex()))
                .collect()
        };
        let doc = R1csDoc {
            constraints: self
                .constraints
                .iter()
                .map(|c| ConstraintDoc {
                    l: lc(&c.l),
                    o: lc(&c.o),
                    r: lc(&c.r),
                })
                .collect(),
            d: self.d(),
            m: self.m,
            modulus: self.field.modulus(),
            n: self.n,
            var_names: self.var_names.clone(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("r1cs serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, CircuitError> {
        let bad = |m: String| CircuitError::Malformed(m);
        let doc: R1csDoc = serde_json::from_str(s).map_err(|e| bad(e.to_string()))?;
        let field = Field::new(doc.modulus).map_err(|e| bad(e.to_string()))?;
        if doc.var_names.len() != doc.n + 1 {
            return Err(bad("varNames length must be n + 1".into()));
        }
        if doc.m > doc.n || doc.d != doc.constraints.len() {
            return Err(bad("inconsistent n, m or d".into()));
        }
        let lc = |m: &BTreeMap<String, String>| -> Result<LinComb, CircuitError> {
            let mut out = LinComb::new();
            for (k, v) in m {
                let i: usize = k.parse().map_err(|_| bad(format!("bad index {:?}", k)))?;
                if i > doc.n {
                    return Err(bad(format!("index {} out of range", i)));
                }
                let c = FieldElement::from_hex(field, v).map_err(|e| bad(e.to_string()))?;
                out.add_term(i, c);
            }
            Ok(out)
        };
        let constraints = doc
            .constraints
            .iter()
            .map(|c| {
                Ok(Constraint {
                    l: lc(&c.l)?,
                    r: lc(&c.r)?,
                    o: lc(&c.o)?,
                })
            })
            .collect::<Result<_, CircuitError>>()?;
        Ok(R1cs {
            field,
            n: doc.n,
            m: doc.m,
            constraints,
            var_names: doc.var_names,
        })
    }
}

// Field order is alphabetical so the serialized keys are canonical.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct R1csDoc {
    constraints: Vec<ConstraintDoc>,
    d: usize,
    m: usize,
    modulus: u64,
    n: usize,
    #[serde(rename = "varNames")]
    var_names: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintDoc {
    l: BTreeMap<String, String>,
    o: BTreeMap<String, String>,
    r: BTreeMap<String, String>,
}
