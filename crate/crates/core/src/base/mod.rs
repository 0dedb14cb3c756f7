//! Cayley automatic structures `(S₀, Λ₀, L₀, ψ₀)` for base groups, with one
//! multiplier automaton per generator.

mod validate;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::automata::{Alphabet, Automaton, AutomatonBuilder, AutomatonError, AutomatonJson, Symbol};
use crate::groups::{BaseGroup, GElem, GroupError, GroupSpecJson};

pub use validate::{
    multiplier_shift_bound, validate_structure, Check, GeneratorReport, QuasigeodesicBound, ValidationFailure, ValidationReport,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BaseError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("validation failed: {0}")]
    Validation(Box<ValidationFailure>),
    #[error("multiplier for '{0}' has unbounded padded shift")]
    UnboundedShift(String),
    #[error("malformed structure: {0}")]
    Malformed(String),
}

/// How `ψ₀⁻¹` is computed.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Representation {
    /// One word per table element.
    Table(Vec<Vec<Symbol>>),
    /// `k ↦ pos^k` or `neg^|k|`.
    Unary { pos: Symbol, neg: Symbol },
}

/// A Cayley automatic structure for a base group `G`.
///
/// Each symbol of `Λ₀` denotes a group element and a word evaluates to the
/// product of its symbols; `ψ₀` is that evaluation restricted to `L₀`.
#[derive(Clone, Debug)]
pub struct BaseAutomaticStructure {
    group: BaseGroup,
    generators: Vec<(String, GElem)>,
    alphabet: Arc<Alphabet>,
    pairs: Arc<Alphabet>,
    symbol_values: Vec<GElem>,
    language: Automaton,
    multipliers: Vec<Automaton>,
    repr: Representation,
}

impl BaseAutomaticStructure {
    pub fn group(&self) -> &BaseGroup {
        &self.group
    }

    pub fn generators(&self) -> &[(String, GElem)] {
        &self.generators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|(n, _)| n == name)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn pairs(&self) -> &Arc<Alphabet> {
        &self.pairs
    }

    pub fn language(&self) -> &Automaton {
        &self.language
    }

    pub fn multiplier(&self, i: usize) -> &Automaton {
        &self.multipliers[i]
    }

    pub fn multipliers(&self) -> &[Automaton] {
        &self.multipliers
    }

    /// Swap in a different multiplier automaton (fault injection, hand-built structures).
    pub fn replace_multiplier(&mut self, i: usize, m: Automaton) -> Result<(), BaseError> {
        if m.alphabet() != &self.pairs {
            return Err(AutomatonError::AlphabetMismatch.into());
        }
        self.multipliers[i] = m;
        Ok(())
    }

    /// `ψ₀`: evaluate a word over `Λ₀`.
    pub fn evaluate(&self, word: &[Symbol]) -> GElem {
        word.iter().fold(self.group.identity(), |acc, &s| self.group.mult(acc, self.symbol_values[s]))
    }

    /// `ψ₀⁻¹`: the normal form of `g`.
    pub fn word_for(&self, g: GElem) -> Vec<Symbol> {
        match &self.repr {
            Representation::Table(words) => words[g as usize].clone(),
            Representation::Unary { pos, neg } => {
                let s = if g >= 0 { *pos } else { *neg };
                vec![s; g.unsigned_abs() as usize]
            }
        }
    }

    pub fn format_word(&self, word: &[Symbol]) -> String {
        if word.is_empty() {
            return "ε".into();
        }
        word.iter().map(|&s| self.alphabet.name(s)).collect::<Vec<_>>().join(" ")
    }

    /// Structure for a finite group: `Λ₀` = non-identity elements, `L₀ = {ε} ∪ Λ₀`.
    pub fn finite(group: BaseGroup) -> Result<Self, BaseError> {
        let BaseGroup::Finite(table) = &group else {
            return Err(BaseError::Malformed("finite structure needs a finite table".into()));
        };
        let e = table.identity();
        let elems: Vec<usize> = (0..table.order()).filter(|&x| x != e).collect();
        let alphabet = Arc::new(Alphabet::new(elems.iter().map(|&x| table.name(x).to_string()))?);
        let pairs = Arc::new(Alphabet::pairs(&alphabet));
        let symbol_values: Vec<GElem> = elems.iter().map(|&x| x as GElem).collect();
        let mut words = vec![Vec::new(); table.order()];
        for (sym, &x) in elems.iter().enumerate() {
            words[x] = vec![sym];
        }

        let mut b = AutomatonBuilder::new(alphabet.clone());
        let s0 = b.add_state(true);
        let s1 = b.add_state(true);
        b.add_initial(s0);
        for sym in alphabet.symbols() {
            b.add_transition(s0, sym, s1);
        }
        let language = b.build().minimize();

        let generators = group.generators();
        let multipliers = generators
            .iter()
            .map(|&(_, s)| {
                let mut b = AutomatonBuilder::new(pairs.clone());
                let start = b.add_state(false);
                let end = b.add_state(true);
                b.add_initial(start);
                for x in 0..table.order() {
                    let (u, v) = (&words[x], &words[table.mult(x, s as usize)]);
                    match (u.first(), v.first()) {
                        (None, None) => b.set_accepting(start, true),
                        (a, c) => b.add_transition(start, pairs.pair(a.copied(), c.copied()), end),
                    }
                }
                b.build().minimize()
            })
            .collect();
        Ok(Self { group, generators, alphabet, pairs, symbol_values, language, multipliers, repr: Representation::Table(words) })
    }

    /// Unary structure for ℤ: `Λ₀ = {p, n}`, `L₀ = p* ∪ n*`.
    pub fn integers() -> Self {
        let alphabet = Arc::new(Alphabet::new(["p", "n"]).expect("static alphabet"));
        let pairs = Arc::new(Alphabet::pairs(&alphabet));
        let (p, n) = (0, 1);
        let mut b = AutomatonBuilder::new(alphabet.clone());
        let s0 = b.add_state(true);
        let sp = b.add_state(true);
        let sn = b.add_state(true);
        b.add_initial(s0);
        b.add_transition(s0, p, sp);
        b.add_transition(sp, p, sp);
        b.add_transition(s0, n, sn);
        b.add_transition(sn, n, sn);
        let language = b.build().minimize();
        let group = BaseGroup::Integers;
        let generators = group.generators();
        let multipliers = vec![unary_step(&pairs, p, n), unary_step(&pairs, n, p)];
        Self {
            group,
            generators,
            alphabet,
            pairs,
            symbol_values: vec![1, -1],
            language,
            multipliers,
            repr: Representation::Unary { pos: p, neg: n },
        }
    }

    /// The default structure for a base group.
    pub fn for_group(group: BaseGroup) -> Result<Self, BaseError> {
        match group {
            BaseGroup::Integers => Ok(Self::integers()),
            g => Self::finite(g),
        }
    }

    pub fn to_json(&self) -> BaseStructureJson {
        BaseStructureJson {
            group: GroupSpecJson::from(&self.group),
            alphabet: self.alphabet.names().to_vec(),
            language: AutomatonJson::from(&self.language),
            multipliers: self
                .generators
                .iter()
                .zip(&self.multipliers)
                .map(|((name, _), m)| NamedAutomaton { generator: name.clone(), automaton: AutomatonJson::from(m) })
                .collect(),
        }
    }

    /// Rebuild from JSON. The evaluator is rederived from the group spec; the
    /// stored automata replace the default ones.
    pub fn from_json(j: &BaseStructureJson) -> Result<Self, BaseError> {
        let mut s = Self::for_group(j.group.to_base_group()?)?;
        if j.alphabet != s.alphabet.names() {
            return Err(BaseError::Malformed(format!("alphabet {:?} does not match the group", j.alphabet)));
        }
        let language = Automaton::try_from(&j.language)?;
        s.language = language.embed(s.alphabet.clone())?;
        if j.multipliers.len() != s.generators.len() {
            return Err(BaseError::Malformed("one multiplier per generator expected".into()));
        }
        for m in &j.multipliers {
            let i = s.generator_index(&m.generator).ok_or_else(|| GroupError::UnknownGenerator(m.generator.clone()))?;
            let a = Automaton::try_from(&m.automaton)?;
            s.multipliers[i] = a.embed(s.pairs.clone())?;
        }
        Ok(s)
    }
}

/// `M` for `+1` in the unary encoding with `up` the positive letter:
/// `up^k → up^{k+1}`, `ε → up`, `down^k → down^{k-1}`.
fn unary_step(pairs: &Arc<Alphabet>, up: Symbol, down: Symbol) -> Automaton {
    let mut b = AutomatonBuilder::new(pairs.clone());
    let s0 = b.add_state(false);
    let su = b.add_state(false);
    let sd = b.add_state(false);
    let acc = b.add_state(true);
    b.add_initial(s0);
    let same = |x| pairs.pair(Some(x), Some(x));
    b.add_transition(s0, same(up), su);
    b.add_transition(su, same(up), su);
    b.add_transition(s0, pairs.pair(None, Some(up)), acc);
    b.add_transition(su, pairs.pair(None, Some(up)), acc);
    b.add_transition(s0, same(down), sd);
    b.add_transition(sd, same(down), sd);
    b.add_transition(s0, pairs.pair(Some(down), None), acc);
    b.add_transition(sd, pairs.pair(Some(down), None), acc);
    b.build().minimize()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedAutomaton {
    pub generator: String,
    pub automaton: AutomatonJson,
}

/// JSON envelope for a base structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseStructureJson {
    pub group: GroupSpecJson,
    pub alphabet: Vec<String>,
    pub language: AutomatonJson,
    pub multipliers: Vec<NamedAutomaton>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{apply_relation, transpose};
    use crate::groups::FiniteGroupTable;

    fn z2() -> BaseAutomaticStructure {
        BaseAutomaticStructure::finite(BaseGroup::Finite(FiniteGroupTable::cyclic(2, "a"))).unwrap()
    }

    #[test]
    fn z2_structure() {
        let s = z2();
        assert_eq!(s.language().enumerate(3), vec![vec![], vec![0]]);
        let m = s.multiplier(0);
        assert_eq!(apply_relation(m, &[]).unwrap(), vec![0]);
        assert_eq!(apply_relation(m, &[0]).unwrap(), Vec::<Symbol>::new());
    }

    #[test]
    fn trivial_group_has_no_multipliers() {
        let s = BaseAutomaticStructure::finite(BaseGroup::Finite(FiniteGroupTable::cyclic(1, "a"))).unwrap();
        assert!(s.multipliers().is_empty());
        assert_eq!(s.language().enumerate(2), vec![Vec::<Symbol>::new()]);
    }

    #[test]
    fn z3_multiplier_cycles() {
        let s = BaseAutomaticStructure::finite(BaseGroup::Finite(FiniteGroupTable::cyclic(3, "c"))).unwrap();
        let (c, c2) = (s.word_for(1), s.word_for(2));
        let m = s.multiplier(0);
        assert_eq!(apply_relation(m, &[]).unwrap(), c);
        assert_eq!(apply_relation(m, &c).unwrap(), c2);
        assert_eq!(apply_relation(m, &c2).unwrap(), Vec::<Symbol>::new());
    }

    #[test]
    fn integer_structure_arithmetic() {
        let s = BaseAutomaticStructure::integers();
        assert_eq!(s.evaluate(&[0, 0]), 2);
        assert_eq!(s.evaluate(&[1]), -1);
        let up = s.multiplier(0);
        assert_eq!(apply_relation(up, &[1]).unwrap(), Vec::<Symbol>::new());
        assert_eq!(apply_relation(up, &[]).unwrap(), vec![0]);
        assert_eq!(apply_relation(up, &[0]).unwrap(), vec![0, 0]);
        assert_eq!(apply_relation(up, &[1; 5]).unwrap(), vec![1; 4]);
    }

    #[test]
    fn inverse_multipliers_are_converses() {
        for s in [z2(), BaseAutomaticStructure::integers()] {
            for i in (0..s.generators().len()).step_by(2) {
                let t = transpose(s.multiplier(i)).unwrap();
                assert!(t.equivalent(s.multiplier(i + 1)).unwrap());
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        for s in [z2(), BaseAutomaticStructure::integers()] {
            let text = serde_json::to_string(&s.to_json()).unwrap();
            let back = BaseAutomaticStructure::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert!(back.language().equivalent(s.language()).unwrap());
            for (a, b) in back.multipliers().iter().zip(s.multipliers()) {
                assert!(a.equivalent(b).unwrap());
            }
        }
    }
}
