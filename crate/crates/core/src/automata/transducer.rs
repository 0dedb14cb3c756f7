//! Letter-to-letter transducers with ε on either side, and their compilation
//! into synchronous pair automata under a bounded delay.
//!
//! A transducer edge reads at most one input symbol and writes at most one
//! output symbol. When every accepting run keeps the difference between
//! symbols read and symbols written within `max_delay`, the relation it
//! computes is synchronous: a pair automaton can track the difference with a
//! buffer of at most `max_delay` symbols.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;
use std::sync::Arc;

use super::{Alphabet, Automaton, AutomatonError, StateId, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TransducerEdge {
    pub input: Option<Symbol>,
    pub output: Option<Symbol>,
    pub to: StateId,
}

#[derive(Clone, Debug)]
pub struct LetterTransducer {
    alphabet: Arc<Alphabet>,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
    edges: Vec<Vec<TransducerEdge>>,
}

impl LetterTransducer {
    /// Build a transducer by exploring symbolic states from `start`.
    ///
    /// `moves` lists `(input, output, next)` for a state; `accepting` decides
    /// final states. Only states reachable from `start` are materialized.
    pub fn explore<K, F, A>(alphabet: Arc<Alphabet>, start: K, moves: F, accepting: A) -> Self
    where
        K: Clone + Eq + Hash,
        F: Fn(&K) -> Vec<(Option<Symbol>, Option<Symbol>, K)>,
        A: Fn(&K) -> bool,
    {
        let mut index: HashMap<K, StateId> = HashMap::from([(start.clone(), 0)]);
        let mut keys = vec![start];
        let mut acc = Vec::new();
        let mut edges = Vec::new();
        let mut work = 0;
        while work < keys.len() {
            let key = keys[work].clone();
            acc.push(accepting(&key));
            let mut out = Vec::new();
            for (input, output, next) in moves(&key) {
                let to = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = keys.len();
                        index.insert(next.clone(), id);
                        keys.push(next);
                        id
                    }
                };
                out.push(TransducerEdge { input, output, to });
            }
            edges.push(out);
            work += 1;
        }
        Self { alphabet, initial: vec![0], accepting: acc, edges }
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    /// Pair automaton for the relation `{(u, v) : some run reads u and writes v}`
    /// restricted to runs whose read/write lag never exceeds `max_delay`, and
    /// intersected on the fly with `guard` (a pair automaton over the same
    /// base alphabet).
    pub fn synchronize(&self, max_delay: usize, guard: &Automaton) -> Result<Automaton, AutomatonError> {
        let pairs = guard.alphabet().clone();
        match pairs.pair_base() {
            Some(base) if base.as_ref() == self.alphabet.as_ref() => {}
            Some(_) => return Err(AutomatonError::AlphabetMismatch),
            None => return Err(AutomatonError::NotPairAlphabet),
        }
        let guard = if guard.is_deterministic() { guard.clone() } else { guard.determinize() };
        let sync = Synchronizer { t: self, max_delay };

        let mut index: HashMap<Config, StateId> = HashMap::new();
        let mut configs: Vec<Config> = Vec::new();
        let mut intern = |c: Config, configs: &mut Vec<Config>| -> StateId {
            *index.entry(c.clone()).or_insert_with(|| {
                configs.push(c);
                configs.len() - 1
            })
        };
        let g0 = guard.initial()[0];
        let starts: Vec<Config> = self
            .initial
            .iter()
            .map(|&t| Config { t, side: Side::Output, queue: VecDeque::new(), in_done: false, out_done: false, guard: g0 })
            .collect();
        let initial: Vec<StateId> = sync.closure(starts).into_iter().map(|c| intern(c, &mut configs)).collect();

        let mut accepting = Vec::new();
        let mut transitions: Vec<Vec<(Symbol, StateId)>> = Vec::new();
        let mut work = 0;
        while work < configs.len() {
            let cfg = configs[work].clone();
            accepting.push(self.accepting[cfg.t] && cfg.queue.is_empty() && guard.is_accepting(cfg.guard));
            let mut out = Vec::new();
            for &(sym, g) in guard.edges(cfg.guard) {
                let (x, y) = pairs.unpair(sym);
                for next in sync.step(&cfg, x, y, g) {
                    out.push((sym, intern(next, &mut configs)));
                }
            }
            transitions.push(out);
            work += 1;
        }
        if initial.is_empty() {
            return Ok(Automaton::empty(pairs));
        }
        Ok(Automaton::from_parts(pairs, initial, accepting, transitions))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Side {
    /// queue holds transducer output not yet seen on the second tape
    Output,
    /// queue holds second-tape symbols the transducer has not yet written
    Tape2,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Config {
    t: StateId,
    side: Side,
    queue: VecDeque<Symbol>,
    in_done: bool,
    out_done: bool,
    guard: StateId,
}

struct Synchronizer<'a> {
    t: &'a LetterTransducer,
    max_delay: usize,
}

impl Synchronizer<'_> {
    fn emit(&self, mut c: Config, o: Option<Symbol>) -> Option<Config> {
        let Some(o) = o else { return Some(c) };
        if c.side == Side::Tape2 && !c.queue.is_empty() {
            return (c.queue.pop_front() == Some(o)).then(|| normalize(c));
        }
        if c.out_done || c.queue.len() >= self.max_delay {
            return None;
        }
        c.side = Side::Output;
        c.queue.push_back(o);
        Some(c)
    }

    fn read_tape2(&self, mut c: Config, y: Option<Symbol>) -> Option<Config> {
        match y {
            Some(b) => {
                if c.out_done {
                    return None;
                }
                if c.side == Side::Output && !c.queue.is_empty() {
                    return (c.queue.pop_front() == Some(b)).then(|| normalize(c));
                }
                // one symbol of slack: the transducer consumes this step's input afterwards
                if c.queue.len() > self.max_delay {
                    return None;
                }
                c.side = Side::Tape2;
                c.queue.push_back(b);
                Some(c)
            }
            None => {
                if c.side == Side::Output && !c.queue.is_empty() {
                    return None;
                }
                c.out_done = true;
                Some(c)
            }
        }
    }

    /// Close a set of configurations under input-free transducer edges.
    fn closure(&self, seeds: Vec<Config>) -> Vec<Config> {
        let mut seen: std::collections::HashSet<Config> = seeds.iter().cloned().collect();
        let mut stack = seeds;
        let mut out = Vec::new();
        while let Some(c) = stack.pop() {
            for e in &self.t.edges[c.t] {
                if e.input.is_some() {
                    continue;
                }
                let mut next = c.clone();
                next.t = e.to;
                if let Some(next) = self.emit(next, e.output) {
                    if seen.insert(next.clone()) {
                        stack.push(next);
                    }
                }
            }
            out.push(c);
        }
        out
    }

    fn step(&self, c: &Config, x: Option<Symbol>, y: Option<Symbol>, guard: StateId) -> Vec<Config> {
        if (c.in_done && x.is_some()) || (c.out_done && y.is_some()) {
            return Vec::new();
        }
        let mut c = c.clone();
        c.guard = guard;
        let Some(c) = self.read_tape2(c, y) else { return Vec::new() };
        let seeds = match x {
            Some(a) => self.t.edges[c.t]
                .iter()
                .filter(|e| e.input == Some(a))
                .filter_map(|e| {
                    let mut next = c.clone();
                    next.t = e.to;
                    self.emit(next, e.output)
                })
                .collect(),
            None => {
                let mut c = c;
                c.in_done = true;
                vec![c]
            }
        };
        self.closure(seeds)
    }
}

fn normalize(mut c: Config) -> Config {
    if c.queue.is_empty() {
        c.side = Side::Output;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::relation::{apply_relation, convolution_product};

    fn setup() -> (Arc<Alphabet>, Arc<Alphabet>, Automaton) {
        let base = Arc::new(Alphabet::new(["a", "b"]).unwrap());
        let pairs = Arc::new(Alphabet::pairs(&base));
        let all = Automaton::universal(base.clone());
        let guard = convolution_product(&pairs, &all, &all).unwrap();
        (base, pairs, guard)
    }

    #[test]
    fn copy_transducer_is_identity() {
        let (base, _, guard) = setup();
        let t = LetterTransducer::explore(
            base.clone(),
            (),
            |_| base.symbols().map(|s| (Some(s), Some(s), ())).collect(),
            |_| true,
        );
        let r = t.synchronize(0, &guard).unwrap();
        assert_eq!(apply_relation(&r, &[0, 1, 0]).unwrap(), vec![0, 1, 0]);
    }

    #[test]
    fn delete_first_symbol_needs_delay() {
        // u = x w  ->  v = w : a left shift by one symbol
        let (base, _, guard) = setup();
        let moves = |k: &u8| -> Vec<(Option<Symbol>, Option<Symbol>, u8)> {
            match k {
                0 => (0..2).map(|s| (Some(s), None, 1)).collect(),
                _ => (0..2).map(|s| (Some(s), Some(s), 1)).collect(),
            }
        };
        let t = LetterTransducer::explore(base.clone(), 0u8, moves, |k| *k == 1);
        let r0 = t.synchronize(0, &guard).unwrap();
        assert!(apply_relation(&r0, &[0, 1, 1]).is_err());
        let r1 = t.synchronize(1, &guard).unwrap();
        assert_eq!(apply_relation(&r1, &[0, 1, 1]).unwrap(), vec![1, 1]);
        assert_eq!(apply_relation(&r1, &[1]).unwrap(), Vec::<Symbol>::new());
    }

    #[test]
    fn prepend_symbol_with_delay() {
        // u -> b u
        let (base, _, guard) = setup();
        let moves = |k: &u8| -> Vec<(Option<Symbol>, Option<Symbol>, u8)> {
            match k {
                0 => vec![(None, Some(1), 1)],
                _ => (0..2).map(|s| (Some(s), Some(s), 1)).collect(),
            }
        };
        let t = LetterTransducer::explore(base.clone(), 0u8, moves, |k| *k == 1);
        let r = t.synchronize(1, &guard).unwrap().minimize();
        assert_eq!(apply_relation(&r, &[0, 0]).unwrap(), vec![1, 0, 0]);
        assert_eq!(apply_relation(&r, &[]).unwrap(), vec![1]);
    }
}
