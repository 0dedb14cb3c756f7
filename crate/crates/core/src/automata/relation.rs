//! Synchronous two-tape relations: convolution of word pairs, converse
//! relations, and evaluation of functional relations.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::{Alphabet, Automaton, AutomatonError, StateId, Symbol};

/// Convolution of `u` and `v` over `pairs`; the shorter word is padded at the end.
pub fn convolve(pairs: &Alphabet, u: &[Symbol], v: &[Symbol]) -> Vec<Symbol> {
    let len = u.len().max(v.len());
    (0..len).map(|i| pairs.pair(u.get(i).copied(), v.get(i).copied())).collect()
}

/// Split a convolution word back into its two tapes.
pub fn deconvolve(pairs: &Alphabet, w: &[Symbol]) -> Result<(Vec<Symbol>, Vec<Symbol>), AutomatonError> {
    if !pairs.is_pair() {
        return Err(AutomatonError::NotPairAlphabet);
    }
    let (mut u, mut v) = (Vec::new(), Vec::new());
    let (mut u_done, mut v_done) = (false, false);
    for &sym in w {
        let (a, b) = pairs.unpair(sym);
        match a {
            Some(a) if !u_done => u.push(a),
            Some(_) => return Err(AutomatonError::PaddingViolation),
            None => u_done = true,
        }
        match b {
            Some(b) if !v_done => v.push(b),
            Some(_) => return Err(AutomatonError::PaddingViolation),
            None => v_done = true,
        }
    }
    Ok((u, v))
}

/// Converse relation: accepts `convolve(v, u)` iff `r` accepts `convolve(u, v)`.
pub fn transpose(r: &Automaton) -> Result<Automaton, AutomatonError> {
    let pairs = r.alphabet().clone();
    if !pairs.is_pair() {
        return Err(AutomatonError::NotPairAlphabet);
    }
    let swap = |s: Symbol| {
        let (a, b) = pairs.unpair(s);
        Some(pairs.pair(b, a))
    };
    Ok(r.relabel(pairs.clone(), swap))
}

/// Identity relation `{(w, w)}` over the base of `pairs`.
pub fn identity_relation(pairs: &Arc<Alphabet>) -> Result<Automaton, AutomatonError> {
    let base = pairs.pair_base().ok_or(AutomatonError::NotPairAlphabet)?;
    let edges = base.symbols().map(|s| (0, pairs.pair(Some(s), Some(s)), 0));
    Automaton::new(pairs.clone(), 1, vec![0], [0], edges)
}

/// Pair automaton accepting `convolve(u, v)` for `u` in `a` and `v` in `b`.
///
/// Both inputs are determinized; the result is deterministic and only accepts
/// well-formed convolutions.
pub fn convolution_product(pairs: &Arc<Alphabet>, a: &Automaton, b: &Automaton) -> Result<Automaton, AutomatonError> {
    let base = pairs.pair_base().ok_or(AutomatonError::NotPairAlphabet)?;
    if a.alphabet().as_ref() != base.as_ref() || b.alphabet().as_ref() != base.as_ref() {
        return Err(AutomatonError::AlphabetMismatch);
    }
    let a = if a.is_deterministic() { a.clone() } else { a.determinize() };
    let b = if b.is_deterministic() { b.clone() } else { b.determinize() };
    // a tape that has ended is represented by `None` and must have stopped in an accepting state
    type Key = (Option<StateId>, Option<StateId>);
    let start: Key = (Some(a.initial()[0]), Some(b.initial()[0]));
    let mut index: HashMap<Key, StateId> = HashMap::from([(start, 0)]);
    let mut keys = vec![start];
    let mut accepting = Vec::new();
    let mut transitions = Vec::new();
    let mut work = 0;
    while work < keys.len() {
        let (sa, sb) = keys[work];
        accepting.push(sa.is_none_or(|s| a.is_accepting(s)) && sb.is_none_or(|s| b.is_accepting(s)));
        let mut edges = Vec::new();
        let moves_a: Vec<(Option<Symbol>, Option<StateId>)> = match sa {
            Some(s) => {
                let mut m: Vec<_> = a.edges(s).iter().map(|&(x, t)| (Some(x), Some(t))).collect();
                if a.is_accepting(s) {
                    m.push((None, None));
                }
                m
            }
            None => vec![(None, None)],
        };
        let moves_b: Vec<(Option<Symbol>, Option<StateId>)> = match sb {
            Some(s) => {
                let mut m: Vec<_> = b.edges(s).iter().map(|&(y, t)| (Some(y), Some(t))).collect();
                if b.is_accepting(s) {
                    m.push((None, None));
                }
                m
            }
            None => vec![(None, None)],
        };
        for &(x, ta) in &moves_a {
            for &(y, tb) in &moves_b {
                if x.is_none() && y.is_none() {
                    continue;
                }
                let key = (ta, tb);
                let id = *index.entry(key).or_insert_with(|| {
                    keys.push(key);
                    keys.len() - 1
                });
                edges.push((pairs.pair(x, y), id));
            }
        }
        transitions.push(edges);
        work += 1;
    }
    Ok(Automaton::from_parts(pairs.clone(), vec![0], accepting, transitions))
}

/// Evaluate the functional relation `r` at `u`: the unique `v` with
/// `convolve(u, v)` accepted.
///
/// Runs `r` against the single-word language of `u` on the first tape,
/// projects to the second tape, and extracts the unique accepted word.
pub fn apply_relation(r: &Automaton, u: &[Symbol]) -> Result<Vec<Symbol>, AutomatonError> {
    let pairs = r.alphabet().clone();
    let base_len = pairs.pair_base().ok_or(AutomatonError::NotPairAlphabet)?.len();
    if let Some(&bad) = u.iter().find(|&&s| s >= base_len) {
        return Err(AutomatonError::UnknownSymbol(bad.to_string()));
    }
    let n = u.len();

    // forward: states reachable after i steps with first tape = u[..i]
    let mut forward: Vec<Vec<StateId>> = Vec::with_capacity(n + 1);
    forward.push(r.initial().to_vec());
    for i in 0..n {
        let row = pairs.pair_row(Some(u[i]));
        let mut next: Vec<StateId> = Vec::new();
        for &s in &forward[i] {
            next.extend(edges_in(r, s, &row).iter().map(|&(_, t)| t));
        }
        next.sort_unstable();
        next.dedup();
        if next.is_empty() {
            return Err(AutomatonError::NoImage);
        }
        forward.push(next);
    }

    // tail: states that reach acceptance reading only (pad, b) pairs
    let pad_row = pairs.pair_row(None);
    let tail_live = tail_coreachable(r, &pad_row);

    // backward: live subsets of each forward layer
    let mut live: Vec<HashSet<StateId>> = vec![HashSet::new(); n + 1];
    live[n] = forward[n].iter().copied().filter(|&s| tail_live[s]).collect();
    for i in (0..n).rev() {
        let row = pairs.pair_row(Some(u[i]));
        let next = &live[i + 1];
        live[i] =
            forward[i].iter().copied().filter(|&s| edges_in(r, s, &row).iter().any(|(_, t)| next.contains(t))).collect();
    }
    if live[0].is_empty() {
        return Err(AutomatonError::NoImage);
    }

    // walk forward, insisting on a unique second-tape symbol at each step
    let mut word: Vec<Option<Symbol>> = Vec::with_capacity(n);
    let mut current: Vec<StateId> = live[0].iter().copied().collect();
    for i in 0..n {
        let row = pairs.pair_row(Some(u[i]));
        let mut chosen: Option<Symbol> = None;
        let mut next = Vec::new();
        for &s in &current {
            for &(sym, t) in edges_in(r, s, &row) {
                if live[i + 1].contains(&t) {
                    match chosen {
                        None => chosen = Some(sym),
                        Some(c) if c != sym => return Err(AutomatonError::NotFunctional),
                        _ => {}
                    }
                    next.push(t);
                }
            }
        }
        let sym = chosen.expect("live state has a live successor");
        word.push(pairs.unpair(sym).1);
        next.sort_unstable();
        next.dedup();
        current = next;
    }
    let mut seen: HashSet<Vec<StateId>> = HashSet::new();
    loop {
        let accepting = current.iter().any(|&s| r.is_accepting(s));
        let mut chosen: Option<Symbol> = None;
        let mut next = Vec::new();
        for &s in &current {
            for &(sym, t) in edges_in(r, s, &pad_row) {
                if tail_live[t] {
                    match chosen {
                        None => chosen = Some(sym),
                        Some(c) if c != sym => return Err(AutomatonError::NotFunctional),
                        _ => {}
                    }
                    next.push(t);
                }
            }
        }
        match (accepting, chosen) {
            (true, None) => break,
            (true, Some(_)) => return Err(AutomatonError::NotFunctional),
            (false, None) => return Err(AutomatonError::NoImage),
            (false, Some(sym)) => {
                word.push(pairs.unpair(sym).1);
                next.sort_unstable();
                next.dedup();
                if !seen.insert(next.clone()) {
                    // a live cycle without acceptance means infinitely many images
                    return Err(AutomatonError::NotFunctional);
                }
                current = next;
            }
        }
    }
    // second-tape padding must be a suffix
    let v_len = word.iter().take_while(|s| s.is_some()).count();
    if word[v_len..].iter().any(Option::is_some) {
        return Err(AutomatonError::PaddingViolation);
    }
    Ok(word.into_iter().take(v_len).map(|s| s.unwrap()).collect())
}

fn edges_in<'a>(r: &'a Automaton, state: StateId, row: &std::ops::Range<Symbol>) -> &'a [(Symbol, StateId)] {
    let edges = r.edges(state);
    let lo = edges.partition_point(|&(s, _)| s < row.start);
    let hi = edges.partition_point(|&(s, _)| s < row.end);
    &edges[lo..hi]
}

fn tail_coreachable(r: &Automaton, pad_row: &std::ops::Range<Symbol>) -> Vec<bool> {
    let n = r.num_states();
    let mut preds = vec![Vec::new(); n];
    for s in 0..n {
        for &(_, t) in edges_in(r, s, pad_row) {
            preds[t].push(s);
        }
    }
    let mut live = vec![false; n];
    let mut stack: Vec<StateId> = r.accepting_states().collect();
    for &s in &stack {
        live[s] = true;
    }
    while let Some(s) = stack.pop() {
        for &p in &preds[s] {
            if !live[p] {
                live[p] = true;
                stack.push(p);
            }
        }
    }
    live
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab_pairs() -> (Arc<Alphabet>, Arc<Alphabet>) {
        let base = Arc::new(Alphabet::new(["a", "b"]).unwrap());
        let pairs = Arc::new(Alphabet::pairs(&base));
        (base, pairs)
    }

    #[test]
    fn convolve_pads_at_end() {
        let (_, pairs) = ab_pairs();
        let w = convolve(&pairs, &[0, 1], &[1]);
        assert_eq!(w, vec![pairs.pair(Some(0), Some(1)), pairs.pair(Some(1), None)]);
        assert!(convolve(&pairs, &[], &[]).is_empty());
        assert_eq!(deconvolve(&pairs, &w).unwrap(), (vec![0, 1], vec![1]));
    }

    #[test]
    fn deconvolve_rejects_interior_padding() {
        let (_, pairs) = ab_pairs();
        let bad = vec![pairs.pair(Some(0), None), pairs.pair(Some(0), Some(1))];
        assert!(matches!(deconvolve(&pairs, &bad), Err(AutomatonError::PaddingViolation)));
    }

    #[test]
    fn identity_relation_applies_and_transposes() {
        let (_, pairs) = ab_pairs();
        let id = identity_relation(&pairs).unwrap();
        assert_eq!(apply_relation(&id, &[0, 1, 1]).unwrap(), vec![0, 1, 1]);
        assert_eq!(apply_relation(&id, &[]).unwrap(), Vec::<Symbol>::new());
        assert!(transpose(&id).unwrap().equivalent(&id).unwrap());
    }

    #[test]
    fn transpose_requires_pair_alphabet() {
        let (base, _) = ab_pairs();
        assert!(matches!(transpose(&Automaton::universal(base)), Err(AutomatonError::NotPairAlphabet)));
    }

    #[test]
    fn apply_relation_reports_missing_and_multiple_images() {
        let (base, pairs) = ab_pairs();
        // relation {(a, a), (a, b)}: two images for "a", none for "b"
        let r = Automaton::new(
            pairs.clone(),
            2,
            vec![0],
            [1],
            [(0, pairs.pair(Some(0), Some(0)), 1), (0, pairs.pair(Some(0), Some(1)), 1)],
        )
        .unwrap();
        assert!(matches!(apply_relation(&r, &[0]), Err(AutomatonError::NotFunctional)));
        assert!(matches!(apply_relation(&r, &[1]), Err(AutomatonError::NoImage)));
        // relation appending one b: u -> u b
        let all = Automaton::universal(base.clone());
        let mut edges: Vec<(usize, usize, usize)> = base.symbols().map(|s| (0, pairs.pair(Some(s), Some(s)), 0)).collect();
        edges.push((0, pairs.pair(None, Some(1)), 1));
        let append = Automaton::new(pairs.clone(), 2, vec![0], [1], edges).unwrap();
        let guarded = append.intersect(&convolution_product(&pairs, &all, &all).unwrap()).unwrap();
        assert_eq!(apply_relation(&guarded, &[0, 0]).unwrap(), vec![0, 0, 1]);
    }

    #[test]
    fn convolution_product_accepts_exactly_pairs() {
        let (base, pairs) = ab_pairs();
        let a_star = Automaton::new(base.clone(), 1, vec![0], [0], [(0, 0, 0)]).unwrap();
        let just_b = Automaton::single_word(base.clone(), &[1]);
        let prod = convolution_product(&pairs, &a_star, &just_b).unwrap();
        assert!(prod.accepts(&convolve(&pairs, &[0, 0], &[1])));
        assert!(prod.accepts(&convolve(&pairs, &[], &[1])));
        assert!(!prod.accepts(&convolve(&pairs, &[1], &[1])));
        assert!(!prod.accepts(&convolve(&pairs, &[0], &[])));
    }
}
