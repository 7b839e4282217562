//! Finite intuitionistic Kripke models with per-world domains, a structural
//! validator for the frame, domain and heredity conditions, and the forcing
//! relation.
//!
//! Worlds and individuals are dense indices `0..n`. The accessibility
//! relation and the domains are bitsets. A model is built once and then only
//! read; [`Checker`] precomputes lookup tables on top of it.

mod eval;
mod json;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

pub use eval::{forces, holds_everywhere, Checker, EvalError, Prepared, Witness};
pub use json::{ModelFile, ModelFileError, OrderSpec};
pub use validate::{validate_model, validate_model_with, ValidationOptions, ValidationReport, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("a frame needs at least one world")]
    NoWorlds,
    #[error("world {0} is out of range")]
    WorldOutOfRange(usize),
    #[error("letter `{letter}` declared with arity {declared}, used with {used}")]
    ArityConflict {
        letter: String,
        declared: usize,
        used: usize,
    },
}

/// Worlds `0..n` with an accessibility relation, stored as successor sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    succ: Vec<FixedBitSet>,
}

impl Frame {
    /// `n` worlds and no accessibility pairs at all.
    pub fn empty(n: usize) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::NoWorlds);
        }
        Ok(Frame {
            succ: vec![FixedBitSet::with_capacity(n); n],
        })
    }

    /// The chain `0 ≤ 1 ≤ … ≤ n-1`.
    pub fn linear(n: usize) -> Result<Self, ModelError> {
        let mut f = Frame::empty(n)?;
        for u in 0..n {
            f.succ[u].insert_range(u..n);
        }
        Ok(f)
    }

    /// The relation exactly as given by `pairs`; no closure is taken.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, ModelError> {
        let mut f = Frame::empty(n)?;
        for &(u, v) in pairs {
            f.relate(u, v)?;
        }
        Ok(f)
    }

    /// Reflexive-transitive closure of `pairs`.
    pub fn preorder_closure(n: usize, pairs: &[(usize, usize)]) -> Result<Self, ModelError> {
        let mut f = Frame::from_pairs(n, pairs)?;
        for u in 0..n {
            f.succ[u].insert(u);
        }
        // Warshall
        for k in 0..n {
            for u in 0..n {
                if f.succ[u].contains(k) {
                    let row = f.succ[k].clone();
                    f.succ[u].union_with(&row);
                }
            }
        }
        Ok(f)
    }

    pub fn relate(&mut self, u: usize, v: usize) -> Result<(), ModelError> {
        let n = self.len();
        if u >= n {
            return Err(ModelError::WorldOutOfRange(u));
        }
        if v >= n {
            return Err(ModelError::WorldOutOfRange(v));
        }
        self.succ[u].insert(v);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn worlds(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    /// `u R v`.
    pub fn sees(&self, u: usize, v: usize) -> bool {
        self.succ.get(u).is_some_and(|s| s.contains(v))
    }

    pub fn successors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.succ[u].ones()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.worlds()
            .flat_map(|u| self.successors(u).map(move |v| (u, v)))
            .collect()
    }

    /// The relation is exactly the chain `0 ≤ 1 ≤ … ≤ n-1`.
    pub fn is_standard_chain(&self) -> bool {
        self.worlds()
            .all(|u| self.worlds().all(|v| self.sees(u, v) == (u <= v)))
    }
}

/// A frame together with a domain of individuals for each world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedFrame {
    frame: Frame,
    domains: Vec<FixedBitSet>,
    universe: usize,
}

impl AugmentedFrame {
    /// `domains[w]` lists the individuals of world `w`; missing entries are
    /// empty domains (reported by the validator).
    pub fn new(frame: Frame, domains: &[Vec<usize>]) -> Self {
        let universe = domains
            .iter()
            .flatten()
            .map(|&a| a + 1)
            .max()
            .unwrap_or(0);
        let mut sets = vec![FixedBitSet::with_capacity(universe); frame.len()];
        for (w, members) in domains.iter().enumerate().take(frame.len()) {
            for &a in members {
                sets[w].insert(a);
            }
        }
        AugmentedFrame {
            frame,
            domains: sets,
            universe,
        }
    }

    /// Every world gets the domain `0..size`.
    pub fn constant(frame: Frame, size: usize) -> Self {
        let mut d = FixedBitSet::with_capacity(size);
        d.insert_range(..);
        AugmentedFrame {
            domains: vec![d; frame.len()],
            frame,
            universe: size,
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Individuals are `0..universe_size()`; not all need belong to a domain.
    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn domain(&self, w: usize) -> impl Iterator<Item = usize> + '_ {
        self.domains[w].ones()
    }

    pub fn in_domain(&self, w: usize, a: usize) -> bool {
        self.domains.get(w).is_some_and(|d| d.contains(a))
    }

    /// The union of all local domains.
    pub fn global_domain(&self) -> BTreeSet<usize> {
        self.domains.iter().flat_map(|d| d.ones()).collect()
    }

    pub(crate) fn domain_set(&self, w: usize) -> &FixedBitSet {
        &self.domains[w]
    }
}

/// The extension of one predicate letter at every world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub arity: usize,
    /// `atoms[w]` is the set of tuples true at `w`. Tuples of the wrong
    /// length can be stored so the validator can report them.
    pub atoms: Vec<BTreeSet<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    aframe: AugmentedFrame,
    letters: BTreeMap<String, Relation>,
}

impl KripkeModel {
    pub fn new(aframe: AugmentedFrame) -> Self {
        KripkeModel {
            aframe,
            letters: BTreeMap::new(),
        }
    }

    pub fn aframe(&self) -> &AugmentedFrame {
        &self.aframe
    }

    pub fn frame(&self) -> &Frame {
        &self.aframe.frame
    }

    pub fn world_count(&self) -> usize {
        self.aframe.frame.len()
    }

    /// Declares a letter with no true atoms. Redeclaring with the same arity
    /// is a no-op.
    pub fn declare(&mut self, letter: &str, arity: usize) -> Result<(), ModelError> {
        let n = self.world_count();
        match self.letters.get(letter) {
            Some(r) if r.arity != arity => Err(ModelError::ArityConflict {
                letter: letter.to_string(),
                declared: r.arity,
                used: arity,
            }),
            Some(_) => Ok(()),
            None => {
                self.letters.insert(
                    letter.to_string(),
                    Relation {
                        arity,
                        atoms: vec![BTreeSet::new(); n],
                    },
                );
                Ok(())
            }
        }
    }

    /// Makes `letter(tuple)` true at world `w` only (no closure under R).
    pub fn insert(&mut self, w: usize, letter: &str, tuple: &[usize]) -> Result<(), ModelError> {
        if w >= self.world_count() {
            return Err(ModelError::WorldOutOfRange(w));
        }
        self.declare(letter, tuple.len())?;
        let rel = self.letters.get_mut(letter).expect("declared above");
        rel.atoms[w].insert(tuple.to_vec());
        Ok(())
    }

    /// Inserts a tuple without an arity check; used by the file loader so
    /// that malformed atoms reach the validator.
    pub(crate) fn insert_unchecked(&mut self, w: usize, letter: &str, tuple: Vec<usize>) {
        if let Some(rel) = self.letters.get_mut(letter) {
            if let Some(set) = rel.atoms.get_mut(w) {
                set.insert(tuple);
            }
        }
    }

    /// Copies every atom to all worlds that see its world.
    pub fn close_hereditarily(&mut self) {
        let pairs = self.aframe.frame.pairs();
        for rel in self.letters.values_mut() {
            let snapshot = rel.atoms.clone();
            for &(u, v) in &pairs {
                for t in &snapshot[u] {
                    rel.atoms[v].insert(t.clone());
                }
            }
        }
    }

    pub fn relation(&self, letter: &str) -> Option<&Relation> {
        self.letters.get(letter)
    }

    pub fn letters(&self) -> impl Iterator<Item = (&str, &Relation)> {
        self.letters.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Truth of an atom at a world straight from the interpretation.
    pub fn holds_atom(&self, w: usize, letter: &str, tuple: &[usize]) -> bool {
        self.letters
            .get(letter)
            .and_then(|r| r.atoms.get(w))
            .is_some_and(|s| s.contains(tuple))
    }
}

/// Values for variables, drawn from the model's individuals.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct Assignment(BTreeMap<String, usize>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: &str, value: usize) -> Self {
        self.0.insert(var.to_string(), value);
        self
    }

    pub fn set(&mut self, var: &str, value: usize) {
        self.0.insert(var.to_string(), value);
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.0.get(var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn values(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.values().copied()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}: {v}")?;
        }
        f.write_str("}")
    }
}

impl<S: Into<String>> FromIterator<(S, usize)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (S, usize)>>(iter: I) -> Self {
        Assignment(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}
