//! The JSON model file format.
//!
//! ```json
//! {"worlds": 2, "order": "linear", "domains": [[0], [0, 1]],
//!  "interpretation": {"P": {"arity": 1, "atoms": [[1, 0]]}},
//!  "hereditary_closure": false}
//! ```
//!
//! `order` is either `"linear"` or an explicit list of `[u, v]` pairs taken
//! verbatim. Each atom is `[world, a1, ..., ak]`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{AugmentedFrame, Frame, KripkeModel, ModelError};

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawOrder", into = "RawOrder")]
pub enum OrderSpec {
    /// `0 ≤ 1 ≤ … ≤ n-1`.
    Linear,
    Pairs(Vec<(usize, usize)>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawOrder {
    Name(String),
    Pairs(Vec<(usize, usize)>),
}

impl TryFrom<RawOrder> for OrderSpec {
    type Error = String;

    fn try_from(raw: RawOrder) -> Result<Self, String> {
        match raw {
            RawOrder::Name(s) if s == "linear" => Ok(OrderSpec::Linear),
            RawOrder::Name(s) => Err(format!("unknown order `{s}`, expected \"linear\" or a list of pairs")),
            RawOrder::Pairs(p) => Ok(OrderSpec::Pairs(p)),
        }
    }
}

impl From<OrderSpec> for RawOrder {
    fn from(o: OrderSpec) -> Self {
        match o {
            OrderSpec::Linear => RawOrder::Name("linear".into()),
            OrderSpec::Pairs(p) => RawOrder::Pairs(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LetterSpec {
    pub arity: usize,
    #[serde(default)]
    pub atoms: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub worlds: usize,
    pub order: OrderSpec,
    pub domains: Vec<Vec<usize>>,
    #[serde(default)]
    pub interpretation: BTreeMap<String, LetterSpec>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub hereditary_closure: bool,
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self, ModelFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ModelFileError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ModelFileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model files always serialize")
    }

    /// Builds the model. Structural problems that the validator can report
    /// (heredity, arity, domain membership) are kept, not rejected.
    pub fn to_model(&self) -> Result<KripkeModel, ModelFileError> {
        let n = self.worlds;
        let frame = match &self.order {
            OrderSpec::Linear => Frame::linear(n)?,
            OrderSpec::Pairs(p) => Frame::from_pairs(n, p)?,
        };
        if self.domains.len() != n {
            return Err(ModelFileError::Invalid(format!(
                "{} domains listed for {n} worlds",
                self.domains.len()
            )));
        }
        let mut m = KripkeModel::new(AugmentedFrame::new(frame, &self.domains));
        for (letter, spec) in &self.interpretation {
            if letter.is_empty() {
                return Err(ModelFileError::Invalid("empty letter name".into()));
            }
            m.declare(letter, spec.arity)?;
            for atom in &spec.atoms {
                let (&w, tuple) = atom
                    .split_first()
                    .ok_or_else(|| ModelFileError::Invalid(format!("atom of `{letter}` has no world")))?;
                if w >= n {
                    return Err(ModelError::WorldOutOfRange(w).into());
                }
                m.insert_unchecked(w, letter, tuple.to_vec());
            }
        }
        if self.hereditary_closure {
            m.close_hereditarily();
        }
        Ok(m)
    }

    pub fn from_model(m: &KripkeModel) -> Self {
        let frame = m.frame();
        let order = if frame.is_standard_chain() {
            OrderSpec::Linear
        } else {
            OrderSpec::Pairs(frame.pairs())
        };
        let domains = frame.worlds().map(|w| m.aframe().domain(w).collect()).collect();
        let interpretation = m
            .letters()
            .map(|(name, rel)| {
                let atoms = rel
                    .atoms
                    .iter()
                    .enumerate()
                    .flat_map(|(w, set)| {
                        set.iter().map(move |t| {
                            let mut atom = Vec::with_capacity(t.len() + 1);
                            atom.push(w);
                            atom.extend(t);
                            atom
                        })
                    })
                    .collect();
                (name.to_string(), LetterSpec { arity: rel.arity, atoms })
            })
            .collect();
        ModelFile {
            worlds: m.world_count(),
            order,
            domains,
            interpretation,
            hereditary_closure: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::validate_model;

    #[test]
    fn loads_linear_model() {
        let f = ModelFile::from_json(
            r#"{"worlds": 2, "order": "linear", "domains": [[0], [0]],
                "interpretation": {"P": {"arity": 1, "atoms": [[1, 0]]}}}"#,
        )
        .unwrap();
        let m = f.to_model().unwrap();
        assert!(m.holds_atom(1, "P", &[0]));
        assert!(!m.holds_atom(0, "P", &[0]));
        assert!(validate_model(&m).is_valid());
    }

    #[test]
    fn closure_only_on_request() {
        let text = r#"{"worlds": 2, "order": "linear", "domains": [[0], [0]],
            "interpretation": {"P": {"arity": 1, "atoms": [[0, 0]]}}HC}"#;
        let raw = ModelFile::from_json(&text.replace("HC", "")).unwrap().to_model().unwrap();
        assert!(!validate_model(&raw).is_valid());
        let closed = ModelFile::from_json(&text.replace("HC", r#", "hereditary_closure": true"#))
            .unwrap()
            .to_model()
            .unwrap();
        assert!(validate_model(&closed).is_valid());
    }

    #[test]
    fn pairs_are_verbatim() {
        let f = ModelFile::from_json(r#"{"worlds": 2, "order": [[0, 1]], "domains": [[0], [0]]}"#).unwrap();
        let m = f.to_model().unwrap();
        assert!(m.frame().sees(0, 1) && !m.frame().sees(0, 0));
    }

    #[test]
    fn wrong_arity_atom_reaches_validator() {
        let f = ModelFile::from_json(
            r#"{"worlds": 1, "order": "linear", "domains": [[0]],
                "interpretation": {"R": {"arity": 2, "atoms": [[0, 0]]}}}"#,
        )
        .unwrap();
        let r = validate_model(&f.to_model().unwrap());
        assert!(r.violations.iter().any(|v| matches!(v, crate::semantics::Violation::Arity { .. })));
    }

    #[test]
    fn rejects_bad_order_and_world() {
        assert!(ModelFile::from_json(r#"{"worlds": 1, "order": "tree", "domains": [[0]]}"#).is_err());
        let f = ModelFile::from_json(
            r#"{"worlds": 1, "order": "linear", "domains": [[0]],
                "interpretation": {"P": {"arity": 1, "atoms": [[3, 0]]}}}"#,
        )
        .unwrap();
        assert!(f.to_model().is_err());
    }

    #[test]
    fn malformed_json_has_position() {
        let e = ModelFile::from_json("{\"worlds\": 1,\n \"order\": }").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
    }

    #[test]
    fn round_trip() {
        let f = ModelFile::from_json(
            r#"{"worlds": 3, "order": [[0,0],[0,1],[1,1],[2,2]], "domains": [[0], [0, 1], [2]],
                "interpretation": {"R": {"arity": 2, "atoms": [[1, 0, 1]]}, "p": {"arity": 0, "atoms": [[2]]}}}"#,
        )
        .unwrap();
        let m = f.to_model().unwrap();
        let back = ModelFile::from_model(&m);
        assert_eq!(back, f);
        assert_eq!(ModelFile::from_json(&back.to_json()).unwrap().to_model().unwrap(), m);
    }
}
