//! Word problem in `G ≀ H` by folding multiplier automata over a word.

use serde::Serialize;

use crate::automata::{AutomatonError, Symbol};
use crate::groups::GroupError;
use crate::wreath::WreathStructure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Trivial,
    Nontrivial,
}

/// Every intermediate normal form of a solve run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolverTrace {
    pub input: Vec<usize>,
    /// `forms[i]` is the normal form of the length-`i` prefix
    pub forms: Vec<Vec<Symbol>>,
    /// state count of each multiplier applied
    pub relation_sizes: Vec<usize>,
    pub verdict: Option<Verdict>,
}

impl SolverTrace {
    pub fn steps(&self) -> usize {
        self.forms.len().saturating_sub(1)
    }

    pub fn final_form(&self) -> &[Symbol] {
        self.forms.last().expect("trace starts with the identity")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error(transparent)]
    UnknownGenerator(#[from] GroupError),
    /// A multiplier had no image or several: the structure is broken.
    #[error("construction bug at step {step}: {source}")]
    ConstructionBug {
        step: usize,
        source: AutomatonError,
        trace: Box<SolverTrace>,
    },
}

/// Fold `R_a` over `word` starting from the identity's normal form.
pub fn solve(ws: &WreathStructure, word: &[usize]) -> Result<SolverTrace, SolveError> {
    let start = ws.encode(&ws.group().identity());
    let mut trace = SolverTrace { input: word.to_vec(), forms: vec![start.clone()], relation_sizes: Vec::new(), verdict: None };
    let mut cur = start.clone();
    for (step, &a) in word.iter().enumerate() {
        match ws.apply(a, &cur) {
            Ok(next) => {
                trace.relation_sizes.push(ws.multiplier(a).num_states());
                trace.forms.push(next.clone());
                cur = next;
            }
            Err(source) => return Err(SolveError::ConstructionBug { step, source, trace: Box::new(trace) }),
        }
    }
    trace.verdict = Some(if cur == start { Verdict::Trivial } else { Verdict::Nontrivial });
    Ok(trace)
}

/// [`solve`] on whitespace-separated generator names.
pub fn solve_text(ws: &WreathStructure, text: &str) -> Result<SolverTrace, SolveError> {
    let word = ws.group().generators().parse_word(text)?;
    solve(ws, &word)
}

/// Does the solver's final normal form denote the oracle's value of `word`?
pub fn crosscheck(ws: &WreathStructure, word: &[usize]) -> bool {
    match solve(ws, word) {
        Ok(trace) => ws.decode(trace.final_form()).is_ok_and(|v| v == ws.group().eval_indices(word)),
        Err(_) => false,
    }
}

/// Every prefix's normal form decodes to the oracle's value of that prefix.
pub fn prefix_coherent(ws: &WreathStructure, word: &[usize]) -> bool {
    let Ok(trace) = solve(ws, word) else { return false };
    let g = ws.group();
    let mut acc = g.identity();
    for (i, form) in trace.forms.iter().enumerate() {
        if i > 0 {
            acc = g.mult_generator(&acc, word[i - 1]);
        }
        if ws.decode(form).ok().as_ref() != Some(&acc) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn empty_word_is_trivial() {
        let ws = fixtures::lamplighter().unwrap();
        let t = solve(&ws, &[]).unwrap();
        assert_eq!(t.verdict, Some(Verdict::Trivial));
        assert_eq!(t.forms.len(), 1);
        assert!(crosscheck(&ws, &[]));
    }

    #[test]
    fn lamplighter_word() {
        let ws = fixtures::lamplighter().unwrap();
        let t = solve_text(&ws, "a t a t^-1 a").unwrap();
        assert_eq!(t.verdict, Some(Verdict::Nontrivial));
        assert_eq!(t.forms.len(), 6);
        let expected = ws.group().eval_word("a t a t^-1 a").unwrap();
        assert_eq!(ws.decode(t.final_form()).unwrap(), expected);
        // lamp at 0 toggled twice, lamp at 1 once
        assert_eq!(ws.format_word(t.final_form()), "B0 C* B C a");
    }

    #[test]
    fn dihedral_relator_is_trivial() {
        let ws = fixtures::z2_wr_dihedral().unwrap();
        assert_eq!(solve_text(&ws, "x1 t x1 t").unwrap().verdict, Some(Verdict::Trivial));
        assert_eq!(solve_text(&ws, "x1 t x1").unwrap().verdict, Some(Verdict::Nontrivial));
        assert!(matches!(solve_text(&ws, "x2"), Err(SolveError::UnknownGenerator(_))));
    }
}
