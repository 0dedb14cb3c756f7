//! Finite automata and synchronous two-tape relations.
//!
//! Everything is immutable after construction and operations are pure, so
//! automata can be shared freely between threads.

mod alphabet;
mod automaton;
pub mod relation;
pub mod transducer;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use alphabet::{Alphabet, Symbol, PAD_NAME};
pub use automaton::{Automaton, AutomatonBuilder, ProductMode, StateId};
pub use relation::{apply_relation, convolution_product, convolve, deconvolve, identity_relation, transpose};
pub use transducer::{LetterTransducer, TransducerEdge};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomatonError {
    #[error("automata are over different alphabets")]
    AlphabetMismatch,
    #[error("operation requires a pair alphabet")]
    NotPairAlphabet,
    #[error("padding symbol followed by a letter on the same tape")]
    PaddingViolation,
    #[error("word has no image under the relation")]
    NoImage,
    #[error("relation has more than one image for the word")]
    NotFunctional,
    #[error("duplicate symbol name '{0}'")]
    DuplicateSymbol(String),
    #[error("symbol name '{0}' is reserved or malformed")]
    ReservedSymbol(String),
    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),
    #[error("state {state} out of range (automaton has {states} states)")]
    InvalidState { state: StateId, states: usize },
    #[error("automaton marked deterministic but has a nondeterministic choice")]
    DeterminismMismatch,
}

/// JSON form of an automaton.
///
/// Pair alphabets serialize their symbols as `"a|b"`, with `"~"` for padding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonJson {
    pub alphabet: Vec<String>,
    pub states: usize,
    pub initial: Vec<StateId>,
    pub accepting: Vec<StateId>,
    pub transitions: Vec<[usize; 3]>,
    pub deterministic: bool,
}

impl From<&Automaton> for AutomatonJson {
    fn from(a: &Automaton) -> Self {
        Self {
            alphabet: a.alphabet().names().to_vec(),
            states: a.num_states(),
            initial: a.initial().to_vec(),
            accepting: a.accepting_states().collect(),
            transitions: a.transitions().map(|(f, s, t)| [f, s, t]).collect(),
            deterministic: a.is_deterministic(),
        }
    }
}

impl TryFrom<&AutomatonJson> for Automaton {
    type Error = AutomatonError;

    fn try_from(j: &AutomatonJson) -> Result<Self, Self::Error> {
        let alphabet = Arc::new(parse_alphabet(&j.alphabet)?);
        let a = Automaton::new(
            alphabet,
            j.states,
            j.initial.clone(),
            j.accepting.iter().copied(),
            j.transitions.iter().map(|&[f, s, t]| (f, s, t)),
        )?;
        if j.deterministic && !a.is_deterministic() {
            return Err(AutomatonError::DeterminismMismatch);
        }
        Ok(a)
    }
}

/// Rebuild an alphabet from its names, recognizing pair alphabets.
pub fn parse_alphabet(names: &[String]) -> Result<Alphabet, AutomatonError> {
    if names.is_empty() || !names.iter().all(|n| n.contains('|')) {
        return Alphabet::new(names.iter().cloned());
    }
    // base symbols appear as "x|~" in row order
    let base_names: Vec<String> = names
        .iter()
        .filter_map(|n| n.strip_suffix(&format!("|{PAD_NAME}")))
        .filter(|x| *x != PAD_NAME)
        .map(str::to_owned)
        .collect();
    let base = Arc::new(Alphabet::new(base_names)?);
    let pairs = Alphabet::pairs(&base);
    if pairs.names() != names {
        return Err(AutomatonError::ReservedSymbol(names.join(",")));
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_plain_and_pair() {
        let base = Arc::new(Alphabet::new(["a", "b"]).unwrap());
        let a = Automaton::new(base.clone(), 2, vec![0], [1], [(0, 0, 1), (1, 1, 1)]).unwrap();
        let j = AutomatonJson::from(&a);
        let text = serde_json::to_string(&j).unwrap();
        let back = Automaton::try_from(&serde_json::from_str::<AutomatonJson>(&text).unwrap()).unwrap();
        assert!(back.same_structure(&a));

        let pairs = Arc::new(Alphabet::pairs(&base));
        let id = identity_relation(&pairs).unwrap();
        let j = AutomatonJson::from(&id);
        assert!(j.alphabet.contains(&"a|~".to_string()));
        let back = Automaton::try_from(&j).unwrap();
        assert!(back.alphabet().is_pair());
        assert!(back.equivalent(&id).unwrap());
    }

    #[test]
    fn json_rejects_false_determinism_flag() {
        let j = AutomatonJson {
            alphabet: vec!["a".into()],
            states: 2,
            initial: vec![0],
            accepting: vec![1],
            transitions: vec![[0, 0, 0], [0, 0, 1]],
            deterministic: true,
        };
        assert_eq!(Automaton::try_from(&j).unwrap_err(), AutomatonError::DeterminismMismatch);
    }
}
