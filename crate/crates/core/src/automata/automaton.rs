use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use super::{Alphabet, AutomatonError, Symbol};

pub type StateId = usize;

/// Boolean combination used by [`Automaton::product`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductMode {
    Intersect,
    Union,
    Difference,
}

/// A finite automaton over an indexed alphabet, without ε-transitions.
///
/// Outgoing edges of each state are kept sorted by `(symbol, target)` with no
/// duplicates. The automaton is deterministic iff it has one initial state and
/// at most one successor per `(state, symbol)`; the flag is derived, never
/// asserted by callers.
#[derive(Clone, Debug)]
pub struct Automaton {
    alphabet: Arc<Alphabet>,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
    transitions: Vec<Vec<(Symbol, StateId)>>,
    deterministic: bool,
}

/// Incremental construction of an [`Automaton`].
#[derive(Clone, Debug)]
pub struct AutomatonBuilder {
    alphabet: Arc<Alphabet>,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
    transitions: Vec<Vec<(Symbol, StateId)>>,
}

impl AutomatonBuilder {
    pub fn new(alphabet: Arc<Alphabet>) -> Self {
        Self { alphabet, initial: Vec::new(), accepting: Vec::new(), transitions: Vec::new() }
    }

    pub fn add_state(&mut self, accepting: bool) -> StateId {
        self.accepting.push(accepting);
        self.transitions.push(Vec::new());
        self.accepting.len() - 1
    }

    pub fn set_accepting(&mut self, state: StateId, accepting: bool) {
        self.accepting[state] = accepting;
    }

    pub fn add_initial(&mut self, state: StateId) {
        self.initial.push(state);
    }

    pub fn add_transition(&mut self, from: StateId, sym: Symbol, to: StateId) {
        debug_assert!(sym < self.alphabet.len());
        self.transitions[from].push((sym, to));
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn build(self) -> Automaton {
        Automaton::from_parts(self.alphabet, self.initial, self.accepting, self.transitions)
    }
}

impl Automaton {
    /// Checked constructor from explicit parts.
    pub fn new(
        alphabet: Arc<Alphabet>,
        num_states: usize,
        initial: Vec<StateId>,
        accepting: impl IntoIterator<Item = StateId>,
        transitions: impl IntoIterator<Item = (StateId, Symbol, StateId)>,
    ) -> Result<Self, AutomatonError> {
        let check = |s: StateId| {
            if s < num_states {
                Ok(s)
            } else {
                Err(AutomatonError::InvalidState { state: s, states: num_states })
            }
        };
        let mut acc = vec![false; num_states];
        for s in accepting {
            acc[check(s)?] = true;
        }
        for &s in &initial {
            check(s)?;
        }
        let mut edges = vec![Vec::new(); num_states];
        for (from, sym, to) in transitions {
            check(from)?;
            check(to)?;
            if sym >= alphabet.len() {
                return Err(AutomatonError::UnknownSymbol(sym.to_string()));
            }
            edges[from].push((sym, to));
        }
        Ok(Self::from_parts(alphabet, initial, acc, edges))
    }

    pub(crate) fn from_parts(
        alphabet: Arc<Alphabet>,
        mut initial: Vec<StateId>,
        accepting: Vec<bool>,
        mut transitions: Vec<Vec<(Symbol, StateId)>>,
    ) -> Self {
        initial.sort_unstable();
        initial.dedup();
        let mut deterministic = initial.len() == 1;
        for edges in &mut transitions {
            edges.sort_unstable();
            edges.dedup();
            if deterministic && edges.windows(2).any(|w| w[0].0 == w[1].0) {
                deterministic = false;
            }
        }
        Self { alphabet, initial, accepting, transitions, deterministic }
    }

    /// Build an automaton by exploring symbolic states reachable from `starts`.
    ///
    /// `moves` lists `(symbol, next)` for a state; only reachable states are
    /// materialized.
    pub fn explore<K, F, A>(alphabet: Arc<Alphabet>, starts: Vec<K>, moves: F, accepting: A) -> Self
    where
        K: Clone + Eq + std::hash::Hash,
        F: Fn(&K) -> Vec<(Symbol, K)>,
        A: Fn(&K) -> bool,
    {
        let mut index: HashMap<K, StateId> = HashMap::new();
        let mut keys: Vec<K> = Vec::new();
        let mut initial = Vec::new();
        for k in starts {
            let id = *index.entry(k.clone()).or_insert_with(|| {
                keys.push(k);
                keys.len() - 1
            });
            initial.push(id);
        }
        if initial.is_empty() {
            return Self::empty(alphabet);
        }
        let mut acc = Vec::new();
        let mut transitions = Vec::new();
        let mut work = 0;
        while work < keys.len() {
            let key = keys[work].clone();
            acc.push(accepting(&key));
            let mut edges = Vec::new();
            for (sym, next) in moves(&key) {
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        keys.push(next.clone());
                        index.insert(next, keys.len() - 1);
                        keys.len() - 1
                    }
                };
                edges.push((sym, id));
            }
            transitions.push(edges);
            work += 1;
        }
        Self::from_parts(alphabet, initial, acc, transitions)
    }

    /// Automaton accepting nothing: one non-accepting state.
    pub fn empty(alphabet: Arc<Alphabet>) -> Self {
        Self::from_parts(alphabet, vec![0], vec![false], vec![Vec::new()])
    }

    /// Automaton accepting every word over the alphabet.
    pub fn universal(alphabet: Arc<Alphabet>) -> Self {
        let edges = alphabet.symbols().map(|s| (s, 0)).collect();
        Self::from_parts(alphabet, vec![0], vec![true], vec![edges])
    }

    /// Automaton accepting exactly `word`.
    pub fn single_word(alphabet: Arc<Alphabet>, word: &[Symbol]) -> Self {
        let n = word.len();
        let mut accepting = vec![false; n + 1];
        accepting[n] = true;
        let transitions = (0..=n).map(|i| if i < n { vec![(word[i], i + 1)] } else { Vec::new() }).collect();
        Self::from_parts(alphabet, vec![0], accepting, transitions)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_accepting(&self, state: StateId) -> bool {
        self.accepting[state]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.accepting.iter().enumerate().filter(|(_, &a)| a).map(|(s, _)| s)
    }

    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    /// Outgoing edges of `state`, sorted by symbol.
    pub fn edges(&self, state: StateId) -> &[(Symbol, StateId)] {
        &self.transitions[state]
    }

    /// All `(from, symbol, to)` triples in state order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Symbol, StateId)> + '_ {
        self.transitions.iter().enumerate().flat_map(|(from, e)| e.iter().map(move |&(sym, to)| (from, sym, to)))
    }

    /// Successor under `sym` when deterministic (first successor otherwise).
    pub fn step(&self, state: StateId, sym: Symbol) -> Option<StateId> {
        let edges = &self.transitions[state];
        let i = edges.partition_point(|&(s, _)| s < sym);
        edges.get(i).filter(|&&(s, _)| s == sym).map(|&(_, t)| t)
    }

    /// All successors of `state` under `sym`.
    pub fn successors(&self, state: StateId, sym: Symbol) -> impl Iterator<Item = StateId> + '_ {
        let edges = &self.transitions[state];
        let i = edges.partition_point(|&(s, _)| s < sym);
        edges[i..].iter().take_while(move |&&(s, _)| s == sym).map(|&(_, t)| t)
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        let mut current = self.initial.clone();
        let mut next = Vec::new();
        for &sym in word {
            next.clear();
            for &s in &current {
                next.extend(self.successors(s, sym));
            }
            next.sort_unstable();
            next.dedup();
            if next.is_empty() {
                return false;
            }
            std::mem::swap(&mut current, &mut next);
        }
        current.iter().any(|&s| self.accepting[s])
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<StateId> = self.initial.clone();
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(s) = stack.pop() {
            for &(_, t) in &self.transitions[s] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// States from which some accepting state is reachable.
    pub(crate) fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut preds = vec![Vec::new(); n];
        for (from, _, to) in self.transitions() {
            preds[to].push(from);
        }
        let mut live = self.accepting.clone();
        let mut stack: Vec<StateId> = self.accepting_states().collect();
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

    /// Keep only states that are both reachable and co-reachable.
    pub fn trim(&self) -> Automaton {
        let reach = self.reachable();
        let live = self.coreachable();
        let keep: Vec<bool> = reach.iter().zip(&live).map(|(a, b)| *a && *b).collect();
        if !self.initial.iter().any(|&s| keep[s]) {
            return Automaton::empty(self.alphabet.clone());
        }
        let mut map = vec![usize::MAX; self.num_states()];
        let mut next = 0;
        for s in 0..self.num_states() {
            if keep[s] {
                map[s] = next;
                next += 1;
            }
        }
        let mut accepting = vec![false; next];
        let mut transitions = vec![Vec::new(); next];
        for s in (0..self.num_states()).filter(|&s| keep[s]) {
            accepting[map[s]] = self.accepting[s];
            transitions[map[s]] =
                self.transitions[s].iter().filter(|&&(_, t)| keep[t]).map(|&(sym, t)| (sym, map[t])).collect();
        }
        let initial = self.initial.iter().filter(|&&s| keep[s]).map(|&s| map[s]).collect();
        Automaton::from_parts(self.alphabet.clone(), initial, accepting, transitions)
    }

    /// Subset construction restricted to reachable subsets.
    ///
    /// The result is partial: the empty subset is never materialized.
    pub fn determinize(&self) -> Automaton {
        let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
        let mut subsets: Vec<Vec<StateId>> = Vec::new();
        let mut accepting = Vec::new();
        let mut transitions: Vec<Vec<(Symbol, StateId)>> = Vec::new();

        let start = self.initial.clone();
        index.insert(start.clone(), 0);
        subsets.push(start);
        let mut work = 0;
        let mut moves: Vec<(Symbol, StateId)> = Vec::new();
        while work < subsets.len() {
            let subset = std::mem::take(&mut subsets[work]);
            accepting.push(subset.iter().any(|&s| self.accepting[s]));
            moves.clear();
            for &s in &subset {
                moves.extend_from_slice(&self.transitions[s]);
            }
            moves.sort_unstable();
            moves.dedup();
            let mut edges = Vec::new();
            let mut i = 0;
            while i < moves.len() {
                let sym = moves[i].0;
                let j = i + moves[i..].partition_point(|&(s, _)| s == sym);
                let target: Vec<StateId> = moves[i..j].iter().map(|&(_, t)| t).collect();
                let id = match index.get(&target) {
                    Some(&id) => id,
                    None => {
                        let id = index.len();
                        index.insert(target.clone(), id);
                        subsets.push(target);
                        id
                    }
                };
                edges.push((sym, id));
                i = j;
            }
            transitions.push(edges);
            subsets[work] = Vec::new();
            work += 1;
        }
        Automaton::from_parts(self.alphabet.clone(), vec![0], accepting, transitions)
    }

    /// Minimal trimmed DFA with canonical (breadth-first, symbol-ordered)
    /// state numbering, so equal languages give structurally equal results.
    ///
    /// The empty language minimizes to a single non-accepting state.
    pub fn minimize(&self) -> Automaton {
        let dfa = if self.deterministic { self.clone() } else { self.determinize() };
        let dfa = dfa.trim();
        if !dfa.accepting.iter().any(|&a| a) {
            return Automaton::empty(self.alphabet.clone());
        }
        let classes = hopcroft_partition(&dfa);
        let num_classes = classes.iter().copied().max().map_or(0, |c| c + 1);
        let mut accepting = vec![false; num_classes];
        let mut transitions: Vec<Vec<(Symbol, StateId)>> = vec![Vec::new(); num_classes];
        let mut filled = vec![false; num_classes];
        for s in 0..dfa.num_states() {
            let c = classes[s];
            if filled[c] {
                continue;
            }
            filled[c] = true;
            accepting[c] = dfa.accepting[s];
            transitions[c] = dfa.transitions[s].iter().map(|&(sym, t)| (sym, classes[t])).collect();
        }
        let quotient = Automaton::from_parts(self.alphabet.clone(), vec![classes[dfa.initial[0]]], accepting, transitions);
        quotient.canonical_numbering()
    }

    /// Renumber a DFA in breadth-first order from its initial state.
    fn canonical_numbering(&self) -> Automaton {
        debug_assert!(self.deterministic);
        let n = self.num_states();
        let mut order = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        let start = self.initial[0];
        order[start] = 0;
        queue.push_back(start);
        let mut visited = vec![start];
        while let Some(s) = queue.pop_front() {
            for &(_, t) in &self.transitions[s] {
                if order[t] == usize::MAX {
                    order[t] = visited.len();
                    visited.push(t);
                    queue.push_back(t);
                }
            }
        }
        let m = visited.len();
        let mut accepting = vec![false; m];
        let mut transitions = vec![Vec::new(); m];
        for (new, &old) in visited.iter().enumerate() {
            accepting[new] = self.accepting[old];
            transitions[new] = self.transitions[old].iter().map(|&(sym, t)| (sym, order[t])).collect();
        }
        Automaton::from_parts(self.alphabet.clone(), vec![0], accepting, transitions)
    }

    /// Boolean combination of two languages over the same alphabet.
    pub fn product(&self, other: &Automaton, mode: ProductMode) -> Result<Automaton, AutomatonError> {
        if self.alphabet != other.alphabet {
            return Err(AutomatonError::AlphabetMismatch);
        }
        Ok(match mode {
            ProductMode::Intersect => self.intersect_unchecked(other),
            ProductMode::Union | ProductMode::Difference => {
                let a = if self.deterministic { self.clone() } else { self.determinize() };
                let b = if other.deterministic { other.clone() } else { other.determinize() };
                complete_product(&a, &b, mode)
            }
        })
    }

    pub fn intersect(&self, other: &Automaton) -> Result<Automaton, AutomatonError> {
        self.product(other, ProductMode::Intersect)
    }

    /// Pairwise product of reachable states; works on nondeterministic input.
    fn intersect_unchecked(&self, other: &Automaton) -> Automaton {
        let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut pairs = Vec::new();
        let mut initial = Vec::new();
        for &a in &self.initial {
            for &b in &other.initial {
                let id = pairs.len();
                index.insert((a, b), id);
                pairs.push((a, b));
                initial.push(id);
            }
        }
        let mut accepting = Vec::new();
        let mut transitions = Vec::new();
        let mut work = 0;
        while work < pairs.len() {
            let (a, b) = pairs[work];
            accepting.push(self.accepting[a] && other.accepting[b]);
            let mut edges = Vec::new();
            let (ea, eb) = (&self.transitions[a], &other.transitions[b]);
            let (mut i, mut j) = (0, 0);
            while i < ea.len() && j < eb.len() {
                let (sa, sb) = (ea[i].0, eb[j].0);
                if sa < sb {
                    i += 1;
                } else if sb < sa {
                    j += 1;
                } else {
                    let i_end = i + ea[i..].partition_point(|e| e.0 == sa);
                    let j_end = j + eb[j..].partition_point(|e| e.0 == sb);
                    for &(_, ta) in &ea[i..i_end] {
                        for &(_, tb) in &eb[j..j_end] {
                            let id = *index.entry((ta, tb)).or_insert_with(|| {
                                pairs.push((ta, tb));
                                pairs.len() - 1
                            });
                            edges.push((sa, id));
                        }
                    }
                    i = i_end;
                    j = j_end;
                }
            }
            transitions.push(edges);
            work += 1;
        }
        if initial.is_empty() {
            return Automaton::empty(self.alphabet.clone());
        }
        Automaton::from_parts(self.alphabet.clone(), initial, accepting, transitions)
    }

    /// Complement with respect to all words over the alphabet.
    pub fn complement(&self) -> Automaton {
        let dfa = if self.deterministic { self.clone() } else { self.determinize() };
        let n = dfa.num_states();
        let sink = n;
        let mut accepting: Vec<bool> = dfa.accepting.iter().map(|a| !a).collect();
        accepting.push(true);
        let mut transitions = Vec::with_capacity(n + 1);
        for s in 0..n {
            let mut edges = Vec::with_capacity(self.alphabet.len());
            for sym in self.alphabet.symbols() {
                edges.push((sym, dfa.step(s, sym).unwrap_or(sink)));
            }
            transitions.push(edges);
        }
        transitions.push(self.alphabet.symbols().map(|sym| (sym, sink)).collect());
        let initial = if dfa.initial.is_empty() { vec![sink] } else { dfa.initial.clone() };
        Automaton::from_parts(self.alphabet.clone(), initial, accepting, transitions)
    }

    /// Disjoint union of the two state sets; no determinization.
    pub fn union_nfa(&self, other: &Automaton) -> Result<Automaton, AutomatonError> {
        if self.alphabet != other.alphabet {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let off = self.num_states();
        let mut initial = self.initial.clone();
        initial.extend(other.initial.iter().map(|s| s + off));
        let mut accepting = self.accepting.clone();
        accepting.extend_from_slice(&other.accepting);
        let mut transitions = self.transitions.clone();
        transitions.extend(other.transitions.iter().map(|e| e.iter().map(|&(sym, t)| (sym, t + off)).collect()));
        Ok(Automaton::from_parts(self.alphabet.clone(), initial, accepting, transitions))
    }

    pub fn is_empty(&self) -> bool {
        let reach = self.reachable();
        !reach.iter().zip(&self.accepting).any(|(r, a)| *r && *a)
    }

    pub fn equivalent(&self, other: &Automaton) -> Result<bool, AutomatonError> {
        Ok(self.product(other, ProductMode::Difference)?.is_empty()
            && other.product(self, ProductMode::Difference)?.is_empty())
    }

    /// Structural equality (same numbering); meaningful after [`Automaton::minimize`].
    pub fn same_structure(&self, other: &Automaton) -> bool {
        self.alphabet == other.alphabet
            && self.initial == other.initial
            && self.accepting == other.accepting
            && self.transitions == other.transitions
    }

    /// All accepted words of length at most `max_len`, ordered by length and
    /// then lexicographically by symbol index.
    pub fn enumerate(&self, max_len: usize) -> Vec<Vec<Symbol>> {
        let dfa = if self.deterministic { self.clone() } else { self.determinize() };
        let dfa = dfa.trim();
        let n = dfa.num_states();
        // finish[r][s]: some word of length exactly r leads from s to acceptance
        let mut finish = vec![dfa.accepting.clone()];
        for r in 1..=max_len {
            let prev = &finish[r - 1];
            let row = (0..n).map(|s| dfa.transitions[s].iter().any(|&(_, t)| prev[t])).collect();
            finish.push(row);
        }
        let mut out = Vec::new();
        let mut word = Vec::new();
        for len in 0..=max_len {
            if finish[len][dfa.initial[0]] {
                dfa.collect_exact(dfa.initial[0], len, &finish, &mut word, &mut out);
            }
        }
        out
    }

    fn collect_exact(
        &self,
        state: StateId,
        remaining: usize,
        finish: &[Vec<bool>],
        word: &mut Vec<Symbol>,
        out: &mut Vec<Vec<Symbol>>,
    ) {
        if remaining == 0 {
            out.push(word.clone());
            return;
        }
        for &(sym, t) in &self.transitions[state] {
            if finish[remaining - 1][t] {
                word.push(sym);
                self.collect_exact(t, remaining - 1, finish, word, out);
                word.pop();
            }
        }
    }

    /// Same automaton read over a larger alphabet that contains this one's
    /// symbols by name.
    pub fn embed(&self, target: Arc<Alphabet>) -> Result<Automaton, AutomatonError> {
        let map: Vec<Symbol> = self
            .alphabet
            .names()
            .iter()
            .map(|n| target.symbol(n).ok_or_else(|| AutomatonError::UnknownSymbol(n.clone())))
            .collect::<Result<_, _>>()?;
        let transitions = self.transitions.iter().map(|e| e.iter().map(|&(sym, t)| (map[sym], t)).collect()).collect();
        Ok(Automaton::from_parts(target, self.initial.clone(), self.accepting.clone(), transitions))
    }

    /// Replace every transition symbol through `f`; edges mapped to `None` are dropped.
    pub(crate) fn relabel(&self, alphabet: Arc<Alphabet>, f: impl Fn(Symbol) -> Option<Symbol>) -> Automaton {
        let transitions = self
            .transitions
            .iter()
            .map(|e| e.iter().filter_map(|&(sym, t)| f(sym).map(|s| (s, t))).collect())
            .collect();
        Automaton::from_parts(alphabet, self.initial.clone(), self.accepting.clone(), transitions)
    }
}

/// Product of two DFAs completed with an implicit sink on either side.
fn complete_product(a: &Automaton, b: &Automaton, mode: ProductMode) -> Automaton {
    type Pair = (Option<StateId>, Option<StateId>);
    let accept = |p: Pair| {
        let x = p.0.is_some_and(|s| a.accepting[s]);
        let y = p.1.is_some_and(|s| b.accepting[s]);
        match mode {
            ProductMode::Intersect => x && y,
            ProductMode::Union => x || y,
            ProductMode::Difference => x && !y,
        }
    };
    let start: Pair = (a.initial.first().copied(), b.initial.first().copied());
    let mut index: HashMap<Pair, StateId> = HashMap::from([(start, 0)]);
    let mut pairs = vec![start];
    let mut accepting = Vec::new();
    let mut transitions = Vec::new();
    let mut work = 0;
    while work < pairs.len() {
        let p = pairs[work];
        accepting.push(accept(p));
        let mut edges = Vec::new();
        for sym in a.alphabet.symbols() {
            let q = (p.0.and_then(|s| a.step(s, sym)), p.1.and_then(|s| b.step(s, sym)));
            if q == (None, None) {
                continue;
            }
            if mode == ProductMode::Difference && q.0.is_none() {
                continue;
            }
            let id = *index.entry(q).or_insert_with(|| {
                pairs.push(q);
                pairs.len() - 1
            });
            edges.push((sym, id));
        }
        transitions.push(edges);
        work += 1;
    }
    Automaton::from_parts(a.alphabet.clone(), vec![0], accepting, transitions)
}

/// Coarsest partition of a trimmed, partial DFA into language-equivalence
/// classes. Missing transitions go to an implicit dead state.
fn hopcroft_partition(dfa: &Automaton) -> Vec<usize> {
    let n = dfa.num_states();
    let k = dfa.alphabet.len();
    // predecessor lists per symbol, stored flat: preds[sym * n + target]
    let mut pred_start = vec![0usize; k * n + 1];
    for (_, sym, to) in dfa.transitions() {
        pred_start[sym * n + to + 1] += 1;
    }
    for i in 0..k * n {
        pred_start[i + 1] += pred_start[i];
    }
    let mut fill = pred_start.clone();
    let mut preds = vec![0usize; pred_start[k * n]];
    for (from, sym, to) in dfa.transitions() {
        preds[fill[sym * n + to]] = from;
        fill[sym * n + to] += 1;
    }

    let mut class_of = vec![0usize; n];
    let mut classes: Vec<Vec<StateId>> = Vec::new();
    let acc: Vec<StateId> = (0..n).filter(|&s| dfa.accepting[s]).collect();
    let rej: Vec<StateId> = (0..n).filter(|&s| !dfa.accepting[s]).collect();
    for block in [acc, rej] {
        if !block.is_empty() {
            let c = classes.len();
            for &s in &block {
                class_of[s] = c;
            }
            classes.push(block);
        }
    }
    // Every state is live, so the implicit dead state is its own class and a
    // valid initial splitter; seeding all classes covers it.
    let mut in_work = vec![true; classes.len()];
    let mut work: Vec<usize> = (0..classes.len()).collect();
    let mut dead_splitter_done = false;

    let mut marked = vec![false; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut hits: HashMap<usize, Vec<StateId>> = HashMap::new();

    loop {
        // splitter: either a real class, or the dead state (states lacking a symbol)
        let splitter: Option<Vec<StateId>> = if let Some(c) = work.pop() {
            in_work[c] = false;
            Some(classes[c].clone())
        } else if !dead_splitter_done {
            dead_splitter_done = true;
            None
        } else {
            break;
        };
        for sym in 0..k {
            hits.clear();
            match &splitter {
                Some(members) => {
                    for &t in members {
                        for &p in &preds[pred_start[sym * n + t]..pred_start[sym * n + t + 1]] {
                            if !marked[p] {
                                marked[p] = true;
                                touched.push(p);
                                hits.entry(class_of[p]).or_default().push(p);
                            }
                        }
                    }
                }
                None => {
                    for p in 0..n {
                        if dfa.step(p, sym).is_none() {
                            marked[p] = true;
                            touched.push(p);
                            hits.entry(class_of[p]).or_default().push(p);
                        }
                    }
                }
            }
            for p in touched.drain(..) {
                marked[p] = false;
            }
            let mut split: Vec<(usize, Vec<StateId>)> = hits.drain().collect();
            split.sort_unstable_by_key(|(c, _)| *c);
            for (c, inside) in split {
                if inside.len() == classes[c].len() {
                    continue;
                }
                let mut is_inside = std::collections::HashSet::with_capacity(inside.len());
                is_inside.extend(inside.iter().copied());
                let outside: Vec<StateId> = classes[c].iter().copied().filter(|s| !is_inside.contains(s)).collect();
                let new_c = classes.len();
                let (keep, moved) = (outside, inside);
                for &s in &moved {
                    class_of[s] = new_c;
                }
                classes[c] = keep;
                classes.push(moved);
                in_work.push(false);
                if in_work[c] {
                    in_work[new_c] = true;
                    work.push(new_c);
                } else {
                    let smaller = if classes[c].len() <= classes[new_c].len() { c } else { new_c };
                    in_work[smaller] = true;
                    work.push(smaller);
                }
            }
        }
    }
    class_of
}
