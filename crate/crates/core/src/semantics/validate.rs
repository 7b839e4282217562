use std::fmt;

use serde::Serialize;

use super::KripkeModel;

/// Optional conditions checked on top of the intuitionistic ones.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ValidationOptions {
    /// Any two worlds are comparable.
    pub linear: bool,
    /// `u R w ⇒ D_u = D_w`.
    pub constant_domains: bool,
}

/// One violated condition with a concrete witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum Violation {
    Reflexivity { world: usize },
    Transitivity { u: usize, v: usize, w: usize },
    Antisymmetry { u: usize, v: usize },
    Linearity { u: usize, v: usize },
    EmptyDomain { world: usize },
    ExpandingDomains { from: usize, to: usize, individual: usize },
    ConstantDomains { from: usize, to: usize, individual: usize },
    Heredity { from: usize, to: usize, letter: String, tuple: Vec<usize> },
    Arity { world: usize, letter: String, expected: usize, tuple: Vec<usize> },
    OutsideDomain { world: usize, letter: String, tuple: Vec<usize> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Reflexivity { world } => write!(f, "reflexivity: world {world} does not see itself"),
            Violation::Transitivity { u, v, w } => {
                write!(f, "transitivity: {u} R {v} and {v} R {w} but not {u} R {w}")
            }
            Violation::Antisymmetry { u, v } => write!(f, "antisymmetry: {u} R {v} and {v} R {u}"),
            Violation::Linearity { u, v } => write!(f, "linearity: worlds {u} and {v} are incomparable"),
            Violation::EmptyDomain { world } => write!(f, "empty domain at world {world}"),
            Violation::ExpandingDomains { from, to, individual } => write!(
                f,
                "expanding domains: {individual} is in D_{from} but not in D_{to} although {from} R {to}"
            ),
            Violation::ConstantDomains { from, to, individual } => write!(
                f,
                "constant domains: {individual} is in D_{to} but not in D_{from} although {from} R {to}"
            ),
            Violation::Heredity { from, to, letter, tuple } => write!(
                f,
                "heredity: {letter}{tuple:?} holds at {from} but not at {to} although {from} R {to}"
            ),
            Violation::Arity { world, letter, expected, tuple } => write!(
                f,
                "arity: {letter} has arity {expected} but {tuple:?} is listed at world {world}"
            ),
            Violation::OutsideDomain { world, letter, tuple } => {
                write!(f, "domain: {letter}{tuple:?} at world {world} uses an individual outside D_{world}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the intuitionistic frame conditions, expanding domains, heredity,
/// and that every atom has the right arity and lives in its world's domain.
pub fn validate_model(m: &KripkeModel) -> ValidationReport {
    validate_model_with(m, ValidationOptions::default())
}

pub fn validate_model_with(m: &KripkeModel, opts: ValidationOptions) -> ValidationReport {
    let frame = m.frame();
    let af = m.aframe();
    let mut out = Vec::new();

    for w in frame.worlds() {
        if !frame.sees(w, w) {
            out.push(Violation::Reflexivity { world: w });
        }
    }
    for u in frame.worlds() {
        for v in frame.successors(u) {
            for w in frame.successors(v) {
                if !frame.sees(u, w) {
                    out.push(Violation::Transitivity { u, v, w });
                }
            }
            if u < v && frame.sees(v, u) {
                out.push(Violation::Antisymmetry { u, v });
            }
        }
    }
    if opts.linear {
        for u in frame.worlds() {
            for v in u + 1..frame.len() {
                if !frame.sees(u, v) && !frame.sees(v, u) {
                    out.push(Violation::Linearity { u, v });
                }
            }
        }
    }

    for w in frame.worlds() {
        if af.domain(w).next().is_none() {
            out.push(Violation::EmptyDomain { world: w });
        }
    }
    for (u, v) in frame.pairs() {
        for a in af.domain(u) {
            if !af.in_domain(v, a) {
                out.push(Violation::ExpandingDomains { from: u, to: v, individual: a });
            }
        }
        if opts.constant_domains {
            for a in af.domain(v) {
                if !af.in_domain(u, a) {
                    out.push(Violation::ConstantDomains { from: u, to: v, individual: a });
                }
            }
        }
    }

    for (letter, rel) in m.letters() {
        for (w, atoms) in rel.atoms.iter().enumerate() {
            for t in atoms {
                if t.len() != rel.arity {
                    out.push(Violation::Arity {
                        world: w,
                        letter: letter.to_string(),
                        expected: rel.arity,
                        tuple: t.clone(),
                    });
                }
                if t.iter().any(|&a| !af.in_domain(w, a)) {
                    out.push(Violation::OutsideDomain {
                        world: w,
                        letter: letter.to_string(),
                        tuple: t.clone(),
                    });
                }
                for v in frame.successors(w) {
                    if !rel.atoms[v].contains(t) {
                        out.push(Violation::Heredity {
                            from: w,
                            to: v,
                            letter: letter.to_string(),
                            tuple: t.clone(),
                        });
                    }
                }
            }
        }
    }

    ValidationReport { violations: out }
}
