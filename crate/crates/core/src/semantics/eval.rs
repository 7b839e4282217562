use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap, HashSet};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use super::{Assignment, KripkeModel};
use crate::syntax::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("world {0} is out of range")]
    WorldOutOfRange(usize),
    #[error("free variable `{0}` has no value")]
    Unbound(String),
    #[error("value {value} of `{var}` is not an individual of the model")]
    OutsideGlobalDomain { var: String, value: usize },
    #[error("value {value} of `{var}` is not in the domain of world {world}")]
    OutsideLocalDomain { var: String, value: usize, world: usize },
    #[error("letter `{letter}` has arity {model} in the model but is applied to {used} argument(s)")]
    Arity { letter: String, model: usize, used: usize },
}

/// Tables above this many bits per world fall back to hashing.
const DENSE_LIMIT: usize = 1 << 22;
const UNBOUND: u32 = u32::MAX;

enum Table {
    /// Bit `Σ aᵢ·Uⁱ` of `per_world[w]` is set iff the tuple holds at `w`.
    Dense(Vec<FixedBitSet>),
    Sparse(Vec<HashSet<Vec<u32>>>),
}

struct LetterTable {
    arity: usize,
    table: Table,
}

/// Read-only view of a model with lookup tables for fast evaluation.
pub struct Checker<'m> {
    model: &'m KripkeModel,
    universe: usize,
    succ: Vec<Vec<u32>>,
    doms: Vec<Vec<u32>>,
    global: FixedBitSet,
    letters: HashMap<String, usize>,
    tables: Vec<LetterTable>,
}

impl<'m> Checker<'m> {
    pub fn new(model: &'m KripkeModel) -> Self {
        let af = model.aframe();
        let universe = af.universe_size();
        let n = model.world_count();
        let succ = (0..n)
            .map(|w| af.frame().successors(w).map(|v| v as u32).collect())
            .collect();
        let doms = (0..n)
            .map(|w| af.domain(w).map(|a| a as u32).collect())
            .collect();
        let mut global = FixedBitSet::with_capacity(universe);
        for w in 0..n {
            global.union_with(af.domain_set(w));
        }

        let mut letters = HashMap::new();
        let mut tables = Vec::new();
        for (name, rel) in model.letters() {
            let bits = universe.checked_pow(rel.arity as u32).filter(|&b| b <= DENSE_LIMIT);
            let well_formed = |t: &&Vec<usize>| t.len() == rel.arity && t.iter().all(|&a| a < universe);
            let table = match bits {
                Some(bits) => Table::Dense(
                    rel.atoms
                        .iter()
                        .map(|atoms| {
                            let mut set = FixedBitSet::with_capacity(bits.max(1));
                            for t in atoms.iter().filter(well_formed) {
                                set.insert(code(t.iter().map(|&a| a as u32), universe));
                            }
                            set
                        })
                        .collect(),
                ),
                None => Table::Sparse(
                    rel.atoms
                        .iter()
                        .map(|atoms| {
                            atoms
                                .iter()
                                .filter(well_formed)
                                .map(|t| t.iter().map(|&a| a as u32).collect())
                                .collect()
                        })
                        .collect(),
                ),
            };
            letters.insert(name.to_string(), tables.len());
            tables.push(LetterTable {
                arity: rel.arity,
                table,
            });
        }

        Checker {
            model,
            universe,
            succ,
            doms,
            global,
            letters,
            tables,
        }
    }

    pub fn model(&self) -> &'m KripkeModel {
        self.model
    }

    /// Compiles `f` against this model. Letters the model does not mention
    /// are empty at every world.
    pub fn prepare(&self, f: &Formula) -> Result<Prepared<'_, 'm>, EvalError> {
        let mut c = Compiler {
            checker: self,
            vars: Vec::new(),
            nodes: Vec::new(),
        };
        let root = c.compile(f)?;
        let root_free = c.nodes[root].free.clone();
        Ok(Prepared {
            checker: self,
            vars: c.vars,
            nodes: c.nodes,
            root,
            root_free,
            memo: RefCell::new(HashMap::new()),
            wide_memo: RefCell::new(HashMap::new()),
        })
    }

    pub fn forces(&self, w: usize, g: &Assignment, f: &Formula) -> Result<bool, EvalError> {
        self.prepare(f)?.forces(w, g)
    }
}

fn code(tuple: impl Iterator<Item = u32>, universe: usize) -> usize {
    let mut acc = 0usize;
    let mut scale = 1usize;
    for a in tuple {
        acc += a as usize * scale;
        scale *= universe;
    }
    acc
}

#[derive(Debug, Clone)]
enum Op {
    Bottom,
    /// `table` is `None` for letters absent from the model.
    Atom { table: Option<usize>, args: Vec<u16> },
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Forall(u16, usize),
    Exists(u16, usize),
}

#[derive(Debug, Clone)]
struct Node {
    op: Op,
    /// Sorted slots of the free variables.
    free: Vec<u16>,
}

struct Compiler<'c, 'm> {
    checker: &'c Checker<'m>,
    vars: Vec<String>,
    nodes: Vec<Node>,
}

impl Compiler<'_, '_> {
    fn slot(&mut self, v: &str) -> u16 {
        match self.vars.iter().position(|x| x == v) {
            Some(i) => i as u16,
            None => {
                self.vars.push(v.to_string());
                (self.vars.len() - 1) as u16
            }
        }
    }

    fn push(&mut self, op: Op, free: BTreeSet<u16>) -> usize {
        self.nodes.push(Node {
            op,
            free: free.into_iter().collect(),
        });
        self.nodes.len() - 1
    }

    fn free_of(&self, i: usize) -> BTreeSet<u16> {
        self.nodes[i].free.iter().copied().collect()
    }

    fn compile(&mut self, f: &Formula) -> Result<usize, EvalError> {
        Ok(match f {
            Formula::Bottom => self.push(Op::Bottom, BTreeSet::new()),
            Formula::Atom { letter, args } => {
                let table = self.checker.letters.get(letter).copied();
                if let Some(t) = table {
                    let arity = self.checker.tables[t].arity;
                    if arity != args.len() {
                        return Err(EvalError::Arity {
                            letter: letter.clone(),
                            model: arity,
                            used: args.len(),
                        });
                    }
                }
                let slots: Vec<u16> = args.iter().map(|a| self.slot(a)).collect();
                let free = slots.iter().copied().collect();
                self.push(Op::Atom { table, args: slots }, free)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                let (a, b) = (self.compile(a)?, self.compile(b)?);
                let mut free = self.free_of(a);
                free.extend(self.free_of(b));
                let op = match f {
                    Formula::And(..) => Op::And(a, b),
                    Formula::Or(..) => Op::Or(a, b),
                    _ => Op::Implies(a, b),
                };
                self.push(op, free)
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let x = self.slot(v);
                let b = self.compile(body)?;
                let mut free = self.free_of(b);
                free.remove(&x);
                let op = if matches!(f, Formula::Forall(..)) {
                    Op::Forall(x, b)
                } else {
                    Op::Exists(x, b)
                };
                self.push(op, free)
            }
        })
    }
}

/// A point at which a formula fails: a world and the values of the
/// variables bound on the way there.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Witness {
    pub world: usize,
    pub assignment: Assignment,
}

impl Witness {
    /// Largest world or individual index mentioned.
    pub fn max_index(&self) -> usize {
        self.assignment.values().chain([self.world]).max().unwrap_or(0)
    }
}

/// A formula compiled against a [`Checker`], with its own memo table.
///
/// The memo caches results of `→`, `∀` and `∃` nodes keyed by the node, the
/// world and the values of the node's free variables; forcing is a function
/// of exactly those, so cached and fresh answers coincide.
pub struct Prepared<'c, 'm> {
    checker: &'c Checker<'m>,
    vars: Vec<String>,
    nodes: Vec<Node>,
    root: usize,
    root_free: Vec<u16>,
    memo: RefCell<HashMap<(u32, u32, u64), bool>>,
    wide_memo: RefCell<HashMap<Vec<u32>, bool>>,
}

impl Prepared<'_, '_> {
    pub fn free_variables(&self) -> Vec<&str> {
        self.root_free.iter().map(|&s| self.vars[s as usize].as_str()).collect()
    }

    fn env_for(&self, w: usize, g: &Assignment) -> Result<Vec<u32>, EvalError> {
        let c = self.checker;
        if w >= c.succ.len() {
            return Err(EvalError::WorldOutOfRange(w));
        }
        let mut env = vec![UNBOUND; self.vars.len()];
        for &s in &self.root_free {
            let var = &self.vars[s as usize];
            let value = g.get(var).ok_or_else(|| EvalError::Unbound(var.clone()))?;
            if value >= c.universe || !c.global.contains(value) {
                return Err(EvalError::OutsideGlobalDomain {
                    var: var.clone(),
                    value,
                });
            }
            if !c.model.aframe().in_domain(w, value) {
                return Err(EvalError::OutsideLocalDomain {
                    var: var.clone(),
                    value,
                    world: w,
                });
            }
            env[s as usize] = value as u32;
        }
        Ok(env)
    }

    /// `M, w ⊨^g f`. Every free variable of `f` must have a value in `D_w`.
    pub fn forces(&self, w: usize, g: &Assignment) -> Result<bool, EvalError> {
        let mut env = self.env_for(w, g)?;
        Ok(self.eval(self.root, w as u32, &mut env))
    }

    /// True iff `f` is forced at every world under every assignment of its
    /// free variables into that world's domain.
    pub fn holds_everywhere(&self) -> Result<bool, EvalError> {
        Ok(self.first_failure()?.is_none())
    }

    /// The first world and assignment (in index order) at which the formula
    /// is not forced.
    pub fn first_failure(&self) -> Result<Option<Witness>, EvalError> {
        let c = self.checker;
        for w in 0..c.succ.len() {
            let mut env = vec![UNBOUND; self.vars.len()];
            if let Some(env) = self.search_assignments(w as u32, 0, &mut env) {
                return Ok(Some(self.witness(w as u32, &env)));
            }
        }
        Ok(None)
    }

    fn search_assignments(&self, w: u32, i: usize, env: &mut Vec<u32>) -> Option<Vec<u32>> {
        if i == self.root_free.len() {
            return (!self.eval(self.root, w, env)).then(|| env.clone());
        }
        let slot = self.root_free[i] as usize;
        for &d in &self.checker.doms[w as usize] {
            env[slot] = d;
            if let Some(found) = self.search_assignments(w, i + 1, env) {
                return Some(found);
            }
        }
        env[slot] = UNBOUND;
        None
    }

    /// When `f` is not forced at `w` under `g`, follows the refutation down
    /// through `∀`, `→` and `∧` and reports the world and bound values where
    /// it bottoms out. With `limit`, only worlds and individuals below it are
    /// chosen along the way. `None` means forced, or no refutation within
    /// the limit.
    pub fn refutation(
        &self,
        w: usize,
        g: &Assignment,
        limit: Option<usize>,
    ) -> Result<Option<Witness>, EvalError> {
        let mut env = self.env_for(w, g)?;
        if self.eval(self.root, w as u32, &mut env) {
            return Ok(None);
        }
        let limit = limit.map_or(u32::MAX, |l| l.min(u32::MAX as usize) as u32);
        Ok(self
            .refute(self.root, w as u32, &mut env, limit)
            .map(|(world, env)| self.witness(world, &env)))
    }

    fn witness(&self, world: u32, env: &[u32]) -> Witness {
        Witness {
            world: world as usize,
            assignment: env
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != UNBOUND)
                .map(|(s, &v)| (self.vars[s].clone(), v as usize))
                .collect(),
        }
    }

    fn refute(&self, node: usize, w: u32, env: &mut Vec<u32>, limit: u32) -> Option<(u32, Vec<u32>)> {
        let c = self.checker;
        match self.nodes[node].op {
            Op::And(a, b) => {
                if !self.eval(a, w, env) {
                    if let Some(r) = self.refute(a, w, env, limit) {
                        return Some(r);
                    }
                }
                if !self.eval(b, w, env) {
                    return self.refute(b, w, env, limit);
                }
                None
            }
            Op::Implies(a, b) => {
                for &v in c.succ[w as usize].iter().filter(|&&v| v < limit) {
                    if self.eval(a, v, env) && !self.eval(b, v, env) {
                        if let Some(r) = self.refute(b, v, env, limit) {
                            return Some(r);
                        }
                    }
                }
                None
            }
            Op::Forall(x, b) => {
                let x = x as usize;
                let saved = env[x];
                for &v in c.succ[w as usize].iter().filter(|&&v| v < limit) {
                    for &d in c.doms[v as usize].iter().filter(|&&d| d < limit) {
                        env[x] = d;
                        if !self.eval(b, v, env) {
                            if let Some(r) = self.refute(b, v, env, limit) {
                                env[x] = saved;
                                return Some(r);
                            }
                        }
                    }
                }
                env[x] = saved;
                None
            }
            _ => Some((w, env.clone())),
        }
    }

    fn memo_get(&self, node: usize, w: u32, env: &[u32]) -> (Option<bool>, MemoKey) {
        let free = &self.nodes[node].free;
        let key = if free.len() <= 2 {
            let mut packed = u64::MAX;
            for (i, &s) in free.iter().enumerate() {
                let shift = 32 * i;
                packed &= !(0xFFFF_FFFFu64 << shift);
                packed |= (env[s as usize] as u64) << shift;
            }
            MemoKey::Narrow((node as u32, w, packed))
        } else {
            let mut k = Vec::with_capacity(free.len() + 2);
            k.push(node as u32);
            k.push(w);
            k.extend(free.iter().map(|&s| env[s as usize]));
            MemoKey::Wide(k)
        };
        let hit = match &key {
            MemoKey::Narrow(k) => self.memo.borrow().get(k).copied(),
            MemoKey::Wide(k) => self.wide_memo.borrow().get(k).copied(),
        };
        (hit, key)
    }

    fn memo_put(&self, key: MemoKey, value: bool) {
        match key {
            MemoKey::Narrow(k) => {
                self.memo.borrow_mut().insert(k, value);
            }
            MemoKey::Wide(k) => {
                self.wide_memo.borrow_mut().insert(k, value);
            }
        }
    }

    fn eval(&self, node: usize, w: u32, env: &mut Vec<u32>) -> bool {
        let c = self.checker;
        match &self.nodes[node].op {
            Op::Bottom => false,
            Op::Atom { table, args } => {
                let Some(t) = table else { return false };
                let lt = &c.tables[*t];
                match &lt.table {
                    Table::Dense(per_world) => {
                        let k = code(args.iter().map(|&s| env[s as usize]), c.universe);
                        per_world[w as usize].contains(k)
                    }
                    Table::Sparse(per_world) => {
                        let t: Vec<u32> = args.iter().map(|&s| env[s as usize]).collect();
                        per_world[w as usize].contains(&t)
                    }
                }
            }
            Op::And(a, b) => self.eval(*a, w, env) && self.eval(*b, w, env),
            Op::Or(a, b) => self.eval(*a, w, env) || self.eval(*b, w, env),
            op @ (Op::Implies(..) | Op::Forall(..) | Op::Exists(..)) => {
                let (hit, key) = self.memo_get(node, w, env);
                if let Some(v) = hit {
                    return v;
                }
                let value = match *op {
                    Op::Implies(a, b) => c.succ[w as usize]
                        .iter()
                        .all(|&v| !self.eval(a, v, env) || self.eval(b, v, env)),
                    Op::Forall(x, b) => {
                        let x = x as usize;
                        let saved = env[x];
                        let mut ok = true;
                        'outer: for &v in &c.succ[w as usize] {
                            for &d in &c.doms[v as usize] {
                                env[x] = d;
                                if !self.eval(b, v, env) {
                                    ok = false;
                                    break 'outer;
                                }
                            }
                        }
                        env[x] = saved;
                        ok
                    }
                    Op::Exists(x, b) => {
                        let x = x as usize;
                        let saved = env[x];
                        let mut found = false;
                        for &d in &c.doms[w as usize] {
                            env[x] = d;
                            if self.eval(b, w, env) {
                                found = true;
                                break;
                            }
                        }
                        env[x] = saved;
                        found
                    }
                    _ => unreachable!(),
                };
                self.memo_put(key, value);
                value
            }
        }
    }
}

enum MemoKey {
    Narrow((u32, u32, u64)),
    Wide(Vec<u32>),
}

/// `M, w ⊨^g f`.
pub fn forces(m: &KripkeModel, w: usize, g: &Assignment, f: &Formula) -> Result<bool, EvalError> {
    Checker::new(m).forces(w, g, f)
}

/// `f` is forced at every world under every assignment into that world's
/// domain.
pub fn holds_everywhere(m: &KripkeModel, f: &Formula) -> Result<bool, EvalError> {
    Checker::new(m).prepare(f)?.holds_everywhere()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{AugmentedFrame, Frame};
    use crate::syntax::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    /// w0 R w1, constant domain {a = 0}, P(a) only at w1.
    fn two_chain() -> KripkeModel {
        let mut m = KripkeModel::new(AugmentedFrame::constant(Frame::linear(2).unwrap(), 1));
        m.insert(1, "P", &[0]).unwrap();
        m
    }

    #[test]
    fn bottom_never_forced() {
        let m = two_chain();
        for w in 0..2 {
            assert!(!forces(&m, w, &Assignment::new(), &Formula::Bottom).unwrap());
        }
    }

    #[test]
    fn double_negation_on_two_chain() {
        let m = two_chain();
        let g = Assignment::new().with("a", 0);
        assert!(!forces(&m, 0, &g, &p("~P(a)")).unwrap());
        assert!(forces(&m, 0, &g, &p("~~P(a)")).unwrap());
        assert!(!forces(&m, 0, &g, &p("P(a)")).unwrap());
        assert!(forces(&m, 1, &g, &p("P(a)")).unwrap());
    }

    #[test]
    fn excluded_middle_fails() {
        let m = two_chain();
        let f = p("forall x. (P(x) | ~P(x))");
        assert!(!holds_everywhere(&m, &f).unwrap());
        let checker = Checker::new(&m);
        let prepared = checker.prepare(&f).unwrap();
        let w = prepared.first_failure().unwrap().unwrap();
        assert_eq!(w.world, 0);
        let r = prepared.refutation(0, &Assignment::new(), None).unwrap().unwrap();
        assert_eq!(r.world, 0);
        assert_eq!(r.assignment.get("x"), Some(0));
    }

    #[test]
    fn existential_ranges_over_local_domain() {
        // D_0 = {0}, D_1 = {0, 1}; P(1) at w1 only
        let af = AugmentedFrame::new(Frame::linear(2).unwrap(), &[vec![0], vec![0, 1]]);
        let mut m = KripkeModel::new(af);
        m.insert(1, "P", &[1]).unwrap();
        let f = p("exists x. P(x)");
        assert!(!forces(&m, 0, &Assignment::new(), &f).unwrap());
        assert!(forces(&m, 1, &Assignment::new(), &f).unwrap());
        // but the universal at w0 looks at D_1 too
        assert!(!forces(&m, 0, &Assignment::new(), &p("forall x. ~P(x)")).unwrap());
        assert!(forces(&m, 0, &Assignment::new(), &p("~exists x. P(x)")).is_ok());
    }

    #[test]
    fn precondition_errors() {
        let af = AugmentedFrame::new(Frame::linear(2).unwrap(), &[vec![0], vec![0, 1]]);
        let m = KripkeModel::new(af);
        let f = p("P(x)");
        assert_eq!(
            forces(&m, 0, &Assignment::new(), &f),
            Err(EvalError::Unbound("x".into()))
        );
        assert!(matches!(
            forces(&m, 0, &Assignment::new().with("x", 7), &f),
            Err(EvalError::OutsideGlobalDomain { value: 7, .. })
        ));
        assert!(matches!(
            forces(&m, 0, &Assignment::new().with("x", 1), &f),
            Err(EvalError::OutsideLocalDomain { value: 1, world: 0, .. })
        ));
        assert!(forces(&m, 1, &Assignment::new().with("x", 1), &f).is_ok());
        assert_eq!(
            forces(&m, 5, &Assignment::new().with("x", 0), &f),
            Err(EvalError::WorldOutOfRange(5))
        );
    }

    #[test]
    fn arity_mismatch_against_model() {
        let mut m = two_chain();
        m.insert(0, "R", &[0, 0]).unwrap();
        assert!(matches!(
            forces(&m, 0, &Assignment::new().with("x", 0), &p("R(x)")),
            Err(EvalError::Arity { .. })
        ));
    }

    #[test]
    fn nullary_letters() {
        let mut m = KripkeModel::new(AugmentedFrame::constant(Frame::linear(2).unwrap(), 1));
        m.insert(1, "p", &[]).unwrap();
        assert!(!forces(&m, 0, &Assignment::new(), &p("p | ~p")).unwrap());
        assert!(forces(&m, 1, &Assignment::new(), &p("p")).unwrap());
    }

    #[test]
    fn constant_domain_formula_on_chain() {
        // cd is valid on constant domains: check all interpretations of P/1
        // and p/0 on a 3-chain with domain size 2
        let cd = p("(forall x. (P(x) | p)) -> (forall x. P(x)) | p");
        let n = 3;
        // a hereditary extension over a chain is given by the first world
        // where it becomes true (n = never)
        let mut checked = 0;
        for start_p in 0..=n {
            for s0 in 0..=n {
                for s1 in 0..=n {
                    let mut m = KripkeModel::new(AugmentedFrame::constant(Frame::linear(n).unwrap(), 2));
                    m.declare("P", 1).unwrap();
                    m.declare("p", 0).unwrap();
                    for w in 0..n {
                        if w >= start_p {
                            m.insert(w, "p", &[]).unwrap();
                        }
                        if w >= s0 {
                            m.insert(w, "P", &[0]).unwrap();
                        }
                        if w >= s1 {
                            m.insert(w, "P", &[1]).unwrap();
                        }
                    }
                    assert!(holds_everywhere(&m, &cd).unwrap());
                    checked += 1;
                }
            }
        }
        assert_eq!(checked, 64);
    }

    #[test]
    fn cd_fails_with_expanding_domain() {
        // D_0 = {0}, D_1 = {0, 1}; P(0) everywhere, p only at w1
        let af = AugmentedFrame::new(Frame::linear(2).unwrap(), &[vec![0], vec![0, 1]]);
        let mut m = KripkeModel::new(af);
        m.insert(0, "P", &[0]).unwrap();
        m.insert(1, "P", &[0]).unwrap();
        m.insert(1, "p", &[]).unwrap();
        let cd = p("(forall x. (P(x) | p)) -> (forall x. P(x)) | p");
        assert!(!forces(&m, 0, &Assignment::new(), &cd).unwrap());
    }

    #[test]
    fn refutation_respects_limit() {
        // Serial-style failure only at the top individual
        let mut m = KripkeModel::new(AugmentedFrame::constant(Frame::linear(1).unwrap(), 4));
        for a in 0..3 {
            m.insert(0, "lhd", &[a, a + 1]).unwrap();
        }
        let checker = Checker::new(&m);
        let f = checker.prepare(&p("forall x. exists y. lhd(x, y)")).unwrap();
        let g = Assignment::new();
        assert_eq!(f.refutation(0, &g, Some(3)).unwrap(), None);
        let w = f.refutation(0, &g, None).unwrap().unwrap();
        assert_eq!(w.assignment.get("x"), Some(3));
        assert_eq!(w.max_index(), 3);
    }
}
