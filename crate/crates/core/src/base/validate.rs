use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use super::{BaseAutomaticStructure, BaseError};
use crate::automata::{apply_relation, deconvolve, AutomatonError, StateId};
use crate::groups::GElem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Check {
    EmptyWord,
    Injectivity,
    Soundness,
    Completeness,
    Functionality,
}

/// The first counterexample found by [`validate_structure`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationFailure {
    pub check: Check,
    pub generator: Option<String>,
    pub u: String,
    pub v: Option<String>,
    pub detail: String,
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.check)?;
        if let Some(g) = &self.generator {
            write!(f, " for '{g}'")?;
        }
        write!(f, " at u = {}", self.u)?;
        if let Some(v) = &self.v {
            write!(f, ", v = {v}")?;
        }
        write!(f, ": {}", self.detail)
    }
}

/// Measured constant `λ` with `|ψ₀⁻¹(g)| ≤ λ(|g| + 1)` for `|g| ≤ audit_depth`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuasigeodesicBound {
    pub lambda: Ratio<u64>,
    pub audit_depth: usize,
}

impl Serialize for QuasigeodesicBound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuasigeodesicBound", 2)?;
        st.serialize_field("lambda", &self.lambda.to_string())?;
        st.serialize_field("audit_depth", &self.audit_depth)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorReport {
    pub generator: String,
    pub domain_checked: usize,
    pub pairs_checked: usize,
    pub shift_bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub depth: usize,
    pub words_checked: usize,
    pub generators: Vec<GeneratorReport>,
    pub quasigeodesic: QuasigeodesicBound,
}

fn fail(check: Check, generator: Option<&str>, u: String, v: Option<String>, detail: impl Into<String>) -> BaseError {
    BaseError::Validation(Box::new(ValidationFailure {
        check,
        generator: generator.map(str::to_owned),
        u,
        v,
        detail: detail.into(),
    }))
}

/// Audit the definitional properties of `b` on all words of length `<= depth`.
pub fn validate_structure(b: &BaseAutomaticStructure, depth: usize) -> Result<ValidationReport, BaseError> {
    assert!(depth >= 1, "audit depth must be at least 1");
    let group = b.group();
    if !b.language().accepts(&[]) || b.evaluate(&[]) != group.identity() {
        return Err(fail(Check::EmptyWord, None, "ε".into(), None, "ε must be in L₀ and denote the identity"));
    }
    let words = b.language().enumerate(depth);
    let mut seen: HashMap<GElem, usize> = HashMap::new();
    for (i, w) in words.iter().enumerate() {
        if let Some(&j) = seen.get(&b.evaluate(w)) {
            return Err(fail(
                Check::Injectivity,
                None,
                b.format_word(&words[j]),
                Some(b.format_word(w)),
                "two normal forms evaluate to the same element",
            ));
        }
        seen.insert(b.evaluate(w), i);
    }

    let mut reports = Vec::new();
    for (gi, (name, s)) in b.generators().iter().enumerate() {
        let m = b.multiplier(gi);
        for u in &words {
            let v = apply_relation(m, u).map_err(|e| {
                let check = match e {
                    AutomatonError::NotFunctional => Check::Functionality,
                    _ => Check::Completeness,
                };
                fail(check, Some(name), b.format_word(u), None, e.to_string())
            })?;
            if !b.language().accepts(&v) || b.evaluate(&v) != group.mult(b.evaluate(u), *s) {
                return Err(fail(Check::Soundness, Some(name), b.format_word(u), Some(b.format_word(&v)), "ψ₀(v) ≠ ψ₀(u)s"));
            }
        }
        let accepted = m.enumerate(depth);
        for w in &accepted {
            let (u, v) = deconvolve(b.pairs(), w)?;
            let ok = b.language().accepts(&u)
                && b.language().accepts(&v)
                && b.evaluate(&v) == group.mult(b.evaluate(&u), *s);
            if !ok {
                return Err(fail(Check::Soundness, Some(name), b.format_word(&u), Some(b.format_word(&v)), "accepted pair is not a product"));
            }
        }
        reports.push(GeneratorReport {
            generator: name.clone(),
            domain_checked: words.len(),
            pairs_checked: accepted.len(),
            shift_bound: multiplier_shift_bound(b, gi)?,
        });
    }

    Ok(ValidationReport {
        depth,
        words_checked: words.len(),
        generators: reports,
        quasigeodesic: quasigeodesic_bound(b, depth),
    })
}

/// Smallest `λ >= 1` with `|ψ₀⁻¹(g)| <= λ(|g| + 1)` over the ball of radius `depth`.
fn quasigeodesic_bound(b: &BaseAutomaticStructure, depth: usize) -> QuasigeodesicBound {
    let group = b.group();
    let mut dist: HashMap<GElem, usize> = HashMap::from([(group.identity(), 0)]);
    let mut queue = VecDeque::from([group.identity()]);
    let mut lambda = Ratio::from_integer(1u64);
    while let Some(g) = queue.pop_front() {
        let d = dist[&g];
        let len = b.word_for(g).len() as u64;
        lambda = lambda.max(Ratio::new(len, d as u64 + 1));
        if d == depth {
            continue;
        }
        for &(_, s) in b.generators() {
            let h = group.mult(g, s);
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(h) {
                e.insert(d + 1);
                queue.push_back(h);
            }
        }
    }
    QuasigeodesicBound { lambda, audit_depth: depth }
}

/// Largest `||u| - |v||` over pairs accepted by the multiplier for generator `i`.
///
/// Once one tape is exhausted every later symbol carries padding, so the
/// shift is the longest run of padded transitions that ends in acceptance.
/// A cycle in that region means the shift is unbounded.
pub fn multiplier_shift_bound(b: &BaseAutomaticStructure, i: usize) -> Result<usize, BaseError> {
    let m = b.multiplier(i).trim();
    let pairs = m.alphabet();
    let padded = |sym| {
        let (x, y) = pairs.unpair(sym);
        x.is_none() || y.is_none()
    };
    // longest padded path from each state to an accepting state; None if none exists
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done(Option<usize>),
    }
    fn visit(
        s: StateId,
        m: &crate::automata::Automaton,
        padded: &dyn Fn(usize) -> bool,
        marks: &mut Vec<Mark>,
    ) -> Result<Option<usize>, ()> {
        match marks[s] {
            Mark::Done(v) => return Ok(v),
            Mark::Active => return Err(()),
            Mark::New => {}
        }
        marks[s] = Mark::Active;
        let mut best = m.is_accepting(s).then_some(0);
        for &(sym, t) in m.edges(s) {
            if !padded(sym) {
                continue;
            }
            if let Some(len) = visit(t, m, padded, marks)? {
                best = Some(best.map_or(len + 1, |b: usize| b.max(len + 1)));
            }
        }
        marks[s] = Mark::Done(best);
        Ok(best)
    }
    let mut marks = vec![Mark::New; m.num_states()];
    let mut bound = 0;
    for s in 0..m.num_states() {
        let v = visit(s, &m, &padded, &mut marks).map_err(|()| BaseError::UnboundedShift(b.generators()[i].0.clone()))?;
        bound = bound.max(v.unwrap_or(0));
    }
    Ok(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::AutomatonBuilder;
    use crate::groups::{BaseGroup, FiniteGroupTable};

    #[test]
    fn builtin_structures_pass() {
        let z2 = BaseAutomaticStructure::finite(BaseGroup::Finite(FiniteGroupTable::cyclic(2, "a"))).unwrap();
        let r = validate_structure(&z2, 4).unwrap();
        assert_eq!(r.quasigeodesic.lambda, Ratio::from_integer(1));
        assert!(r.generators.iter().all(|g| g.shift_bound == 1));
        let z = BaseAutomaticStructure::integers();
        let r = validate_structure(&z, 8).unwrap();
        assert_eq!(r.words_checked, 17);
        assert!(r.generators.iter().all(|g| g.shift_bound == 1));
    }

    #[test]
    fn corrupted_transition_is_reported() {
        let mut z3 = BaseAutomaticStructure::finite(BaseGroup::Finite(FiniteGroupTable::cyclic(3, "c"))).unwrap();
        // send c -> c instead of c -> c2
        let pairs = z3.pairs().clone();
        let mut b = AutomatonBuilder::new(pairs.clone());
        let (s, t) = (b.add_state(false), b.add_state(true));
        b.add_initial(s);
        b.add_transition(s, pairs.pair(None, Some(0)), t);
        b.add_transition(s, pairs.pair(Some(0), Some(0)), t);
        b.add_transition(s, pairs.pair(Some(1), None), t);
        z3.replace_multiplier(0, b.build()).unwrap();
        match validate_structure(&z3, 3) {
            Err(BaseError::Validation(f)) => {
                assert_eq!(f.check, Check::Soundness);
                assert_eq!(f.u, "c");
                assert_eq!(f.v.as_deref(), Some("c"));
            }
            other => panic!("expected a counterexample, got {other:?}"),
        }
    }

    #[test]
    fn padded_loop_is_unbounded() {
        let mut z = BaseAutomaticStructure::integers();
        let pairs = z.pairs().clone();
        let mut b = AutomatonBuilder::new(pairs.clone());
        let s = b.add_state(true);
        b.add_initial(s);
        b.add_transition(s, pairs.pair(None, Some(0)), s);
        z.replace_multiplier(0, b.build()).unwrap();
        assert_eq!(multiplier_shift_bound(&z, 0), Err(BaseError::UnboundedShift("z".into())));
    }
}
