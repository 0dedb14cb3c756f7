//! Multiplier automata `R_a` for the wreath structure.
//!
//! Lamp generators rewrite the slot after `C*` with the base multiplier.
//! Position-moving generators keep every lamp in its column and relocate `C*`;
//! when the integer support grows or shrinks, trivial blocks `B C^{m+1}` are
//! added or removed at the ends. Both are described as letter transducers and
//! compiled to synchronous automata with a bounded delay, always intersected
//! with `L × L`.

use std::hash::Hash;

use crate::automata::{Automaton, LetterTransducer, StateId, Symbol};
use crate::base::multiplier_shift_bound;
use crate::groups::{HElement, VirtuallyZSpec};

use super::{CosetShiftTable, WreathAlphabet, WreathError, WreathStructure};

type Edge<K> = (Option<Symbol>, Option<Symbol>, K);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum LampKey {
    /// copying up to and including `C*`
    Pre,
    /// running the base multiplier on the slot after `C*`
    Slot(StateId),
    /// slot finished; the next letter must be a marker
    After,
    Post,
}

/// `R_s` for base generator `bi` of the base structure.
pub fn build_lamp_multiplier(ws: &WreathStructure, bi: usize, guard: &Automaton) -> Result<Automaton, WreathError> {
    let base = ws.base();
    let ms = base.multiplier(bi);
    let bpairs = ms.alphabet().clone();
    let delay = multiplier_shift_bound(base, bi)?;
    let a = ws.alphabet().clone();
    let full = a.full().clone();
    let moves = |k: &LampKey| -> Vec<Edge<LampKey>> {
        match *k {
            LampKey::Pre => full
                .symbols()
                .flat_map(|s| {
                    if s == a.cstar() {
                        ms.initial().iter().map(|&p| (Some(s), Some(s), LampKey::Slot(p))).collect::<Vec<_>>()
                    } else {
                        vec![(Some(s), Some(s), LampKey::Pre)]
                    }
                })
                .collect(),
            LampKey::Slot(p) => {
                let mut out: Vec<_> = ms
                    .edges(p)
                    .iter()
                    .map(|&(sym, p2)| {
                        let (x, y) = bpairs.unpair(sym);
                        (x, y, LampKey::Slot(p2))
                    })
                    .collect();
                if ms.is_accepting(p) {
                    out.push((None, None, LampKey::After));
                }
                out
            }
            LampKey::After => [a.b(), a.b0(), a.c()].into_iter().map(|s| (Some(s), Some(s), LampKey::Post)).collect(),
            LampKey::Post => full.symbols().map(|s| (Some(s), Some(s), LampKey::Post)).collect(),
        }
    };
    let accepting = |k: &LampKey| matches!(k, LampKey::After | LampKey::Post);
    let t = LetterTransducer::explore(full.clone(), LampKey::Pre, moves, accepting);
    Ok(t.synchronize(delay, guard)?.minimize())
}

/// Per-coset effect of a position-moving generator: `x_q · h = t^k x_r`
/// together with the `C*` offset `s` used by the same-support branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveTable {
    pub k: Vec<i64>,
    pub r: Vec<usize>,
    pub s: Vec<i64>,
}

impl MoveTable {
    /// Closed-form table `s = q - r - (m+1)k`.
    pub fn new(h: &VirtuallyZSpec, step: HElement) -> Self {
        let m = h.m() as i64;
        let (mut k, mut r, mut s) = (Vec::new(), Vec::new(), Vec::new());
        for q in 0..=h.m() {
            let e = h.mult(h.x(q), step);
            k.push(e.k);
            r.push(e.q);
            s.push(q as i64 - e.q as i64 - (m + 1) * e.k);
        }
        Self { k, r, s }
    }

    /// Table whose offsets come from the measured shift table.
    pub fn from_shifts(h: &VirtuallyZSpec, step: HElement, shifts: &CosetShiftTable, generator: &str) -> Self {
        let mut t = Self::new(h, step);
        for q in 0..=h.m() {
            if let Some(e) = shifts.get(generator, q) {
                t.s[q] = e.s;
            }
        }
        t
    }

    /// Largest `|k|`: how many columns the lamplighter can move.
    pub fn reach(&self) -> i64 {
        self.k.iter().map(|k| k.abs()).max().unwrap_or(0)
    }
}

/// `R_h` for a position-moving generator: the same-support branch
/// `Y ∩ κ⁻¹(X_q) ∩ (L × L)` united with the support-changing transducer branch.
pub fn build_move_multiplier(ws: &WreathStructure, step: HElement, guard: &Automaton) -> Result<Automaton, WreathError> {
    let name = ws
        .group()
        .generators()
        .names()
        .iter()
        .enumerate()
        .find(|&(i, _)| ws.group().generators().action(i) == crate::groups::Generator::Move(step))
        .map(|(_, n)| n.clone());
    let table = match name {
        Some(n) => MoveTable::from_shifts(ws.hspec(), step, ws.shifts(), &n),
        None => MoveTable::new(ws.hspec(), step),
    };
    let same = same_support_branch(ws.alphabet(), ws.m(), &table)?.intersect(guard)?;
    let changed = move_transducer(ws.alphabet(), ws.m(), &table, true).synchronize(move_delay(ws.m(), &table), guard)?;
    Ok(same.union_nfa(&changed)?.determinize().minimize())
}

/// `R_h` from the transducer alone, covering same-support moves too.
pub fn build_move_multiplier_transducer(ws: &WreathStructure, step: HElement, guard: &Automaton) -> Result<Automaton, WreathError> {
    let table = MoveTable::new(ws.hspec(), step);
    let t = move_transducer(ws.alphabet(), ws.m(), &table, false);
    Ok(t.synchronize(move_delay(ws.m(), &table), guard)?.minimize())
}

/// Letters the output can run ahead of or behind the input: whole trivial blocks.
fn move_delay(m: usize, table: &MoveTable) -> usize {
    table.reach() as usize * (m + 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum XPhase {
    Before,
    /// v's `C*` seen first; `n` Γ letters since, counting it
    AfterV(i64),
    /// u's `C*` seen first
    AfterU(i64),
    Done,
}

/// Letterwise-equal pairs (except `C ↔ C*` swaps) whose `C*` letters sit
/// `s_q` Γ-letters apart, with u's `C*` in slot `q`; united over `q`.
///
/// On aligned pairs the marker projections line up position by position, so
/// the projected condition can be checked letter by letter.
fn same_support_branch(a: &WreathAlphabet, m: usize, table: &MoveTable) -> Result<Automaton, WreathError> {
    let pairs = a.pairs().clone();
    let mut result: Option<Automaton> = None;
    for q in 0..=m {
        let s = table.s[q];
        let start = (0usize, XPhase::Before);
        let moves = |&(slot, ph): &(usize, XPhase)| -> Vec<(Symbol, (usize, XPhase))> {
            let mut out = Vec::new();
            for x in a.full().symbols() {
                if a.is_gamma(x) {
                    continue;
                }
                let next = if a.is_beta(x) { 0 } else { slot };
                if a.is_beta(x) && slot != m + 1 {
                    continue;
                }
                out.push((pairs.pair(Some(x), Some(x)), (next, ph)));
            }
            if slot > m {
                return out;
            }
            let (c, cs) = (a.c(), a.cstar());
            for (x, y) in [(c, c), (cs, cs), (cs, c), (c, cs)] {
                let np = match (ph, x == cs, y == cs) {
                    (XPhase::Before, false, false) => Some(XPhase::Before),
                    (XPhase::Before, true, true) => (s == 0 && slot == q).then_some(XPhase::Done),
                    (XPhase::Before, false, true) => (s > 0).then_some(XPhase::AfterV(1)),
                    (XPhase::Before, true, false) => (s < 0 && slot == q).then_some(XPhase::AfterU(1)),
                    (XPhase::AfterV(n), false, false) => (n < s).then_some(XPhase::AfterV(n + 1)),
                    (XPhase::AfterV(n), true, false) => (n == s && slot == q).then_some(XPhase::Done),
                    (XPhase::AfterU(n), false, false) => (n < -s).then_some(XPhase::AfterU(n + 1)),
                    (XPhase::AfterU(n), false, true) => (n == -s).then_some(XPhase::Done),
                    (XPhase::Done, false, false) => Some(XPhase::Done),
                    _ => None,
                };
                if let Some(np) = np {
                    out.push((pairs.pair(Some(x), Some(y)), (slot + 1, np)));
                }
            }
            out
        };
        // a fresh word starts "after" a virtual block so that it opens with β
        let start = (m + 1, start.1);
        let xq = Automaton::explore(pairs.clone(), vec![start], moves, |&(_, ph)| ph == XPhase::Done);
        result = Some(match result {
            None => xq,
            Some(r) => r.union_nfa(&xq)?,
        });
    }
    Ok(result.expect("m + 1 >= 1 cosets"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Phase {
    Start,
    /// input-only trivial blocks until both tapes reach the same column
    LeftRemove,
    /// output-only trivial blocks until both tapes reach the same column
    LeftAdd,
    Copy,
    RightRemove,
    RightAdd,
}

/// Transducer state. Columns are compared through `d` = input column minus
/// output column; `C*` placements still owed are obligations
/// `(blocks to pass on that tape, slot)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct MoveKey {
    phase: Phase,
    d: i64,
    /// last Γ slot processed on each tape; -1 right after β
    si: i64,
    so: i64,
    old_seen: bool,
    new_written: bool,
    out_obl: Option<(i64, i64)>,
    in_obl: Option<(i64, i64)>,
    changed: bool,
}

struct MoveRules<'a> {
    a: &'a WreathAlphabet,
    m: i64,
    reach: i64,
    table: &'a MoveTable,
}

impl MoveRules<'_> {
    fn within_reach(&self, k: MoveKey) -> Option<MoveKey> {
        (k.d.abs() <= self.reach).then_some(k)
    }

    /// β on the input tape; the column bound is checked by the caller so a
    /// paired β can pass through `d + 1` when the reach is zero.
    fn read_beta_raw(&self, mut k: MoveKey) -> Option<MoveKey> {
        if k.si != self.m || matches!(k.in_obl, Some((0, _))) {
            return None;
        }
        k.in_obl = k.in_obl.map(|(n, s)| (n - 1, s));
        k.d += 1;
        k.si = -1;
        Some(k)
    }

    fn write_beta_raw(&self, mut k: MoveKey) -> Option<MoveKey> {
        if k.so != self.m || matches!(k.out_obl, Some((0, _))) {
            return None;
        }
        k.out_obl = k.out_obl.map(|(n, s)| (n - 1, s));
        k.d -= 1;
        k.so = -1;
        Some(k)
    }

    fn read_beta(&self, k: MoveKey) -> Option<MoveKey> {
        self.read_beta_raw(k).and_then(|k| self.within_reach(k))
    }

    fn write_beta(&self, k: MoveKey) -> Option<MoveKey> {
        self.write_beta_raw(k).and_then(|k| self.within_reach(k))
    }

    fn read_gamma(&self, mut k: MoveKey, x: Symbol) -> Option<MoveKey> {
        let j = k.si + 1;
        if j > self.m {
            return None;
        }
        k.si = j;
        if x == self.a.cstar() {
            if let Some((n, slot)) = k.in_obl {
                if n != 0 || slot != j {
                    return None;
                }
                k.in_obl = None;
            } else {
                if k.old_seen || k.new_written {
                    return None;
                }
                let (kq, rq) = (self.table.k[j as usize], self.table.r[j as usize] as i64);
                let n = k.d + kq;
                if n < 0 || (n == 0 && rq <= k.so) {
                    return None;
                }
                k.out_obl = Some((n, rq));
            }
            k.old_seen = true;
        } else if k.in_obl == Some((0, j)) {
            return None;
        }
        Some(k)
    }

    fn write_gamma(&self, mut k: MoveKey, y: Symbol) -> Vec<MoveKey> {
        let j = k.so + 1;
        if j > self.m {
            return Vec::new();
        }
        k.so = j;
        let star = y == self.a.cstar();
        match k.out_obl {
            Some((0, slot)) if slot == j => {
                if !star {
                    return Vec::new();
                }
                k.out_obl = None;
                k.new_written = true;
                vec![k]
            }
            Some(_) => if star { Vec::new() } else { vec![k] },
            None if !star => vec![k],
            None => {
                if k.old_seen || k.new_written {
                    return Vec::new();
                }
                // guess the coset the lamplighter comes from
                (0..=self.m)
                    .filter(|&q| self.table.r[q as usize] as i64 == j)
                    .filter_map(|q| {
                        let n = -(k.d + self.table.k[q as usize]);
                        (n > 0 || (n == 0 && q > k.si)).then_some(MoveKey { in_obl: Some((n, q)), new_written: true, ..k })
                    })
                    .collect()
            }
        }
    }

    fn aligned(&self, k: &MoveKey) -> bool {
        k.d == 0 && k.si == self.m && k.so == self.m
    }

    fn moves(&self, k: &MoveKey) -> Vec<Edge<MoveKey>> {
        let a = self.a;
        let (c, cs, b) = (a.c(), a.cstar(), a.b());
        let mut out = Vec::new();
        let input_trivial = |out: &mut Vec<Edge<MoveKey>>, k: &MoveKey| {
            out.extend(self.read_beta(*k).map(|n| (Some(b), None, n)));
            for x in [c, cs] {
                out.extend(self.read_gamma(*k, x).map(|n| (Some(x), None, n)));
            }
        };
        let output_trivial = |out: &mut Vec<Edge<MoveKey>>, k: &MoveKey| {
            out.extend(self.write_beta(*k).map(|n| (None, Some(b), n)));
            for y in [c, cs] {
                out.extend(self.write_gamma(*k, y).into_iter().map(|n| (None, Some(y), n)));
            }
        };
        match k.phase {
            Phase::Start => {
                for d in -self.reach..=self.reach {
                    let phase = match d {
                        0 => Phase::Copy,
                        d if d < 0 => Phase::LeftRemove,
                        _ => Phase::LeftAdd,
                    };
                    out.push((None, None, MoveKey { phase, d, changed: d != 0, ..*k }));
                }
            }
            Phase::LeftRemove | Phase::LeftAdd => {
                let mut step = Vec::new();
                if k.phase == Phase::LeftRemove {
                    input_trivial(&mut step, k);
                } else {
                    output_trivial(&mut step, k);
                }
                for (x, y, mut n) in step {
                    if self.aligned(&n) {
                        n.phase = Phase::Copy;
                    }
                    out.push((x, y, n));
                }
            }
            Phase::Copy => {
                for x in a.full().symbols() {
                    if a.is_base(x) {
                        if k.si >= 0 {
                            out.push((Some(x), Some(x), *k));
                        }
                    } else if a.is_beta(x) {
                        if let Some(n) = self.read_beta_raw(*k).and_then(|n| self.write_beta_raw(n)).and_then(|n| self.within_reach(n)) {
                            out.push((Some(x), Some(x), n));
                        }
                    }
                }
                for x in [c, cs] {
                    let Some(n1) = self.read_gamma(*k, x) else { continue };
                    for y in [c, cs] {
                        out.extend(self.write_gamma(n1, y).into_iter().map(|n| (Some(x), Some(y), n)));
                    }
                }
                if k.si == self.m && k.so == self.m {
                    let rem = MoveKey { phase: Phase::RightRemove, changed: true, ..*k };
                    out.extend(self.read_beta(rem).map(|n| (Some(b), None, n)));
                    let add = MoveKey { phase: Phase::RightAdd, changed: true, ..*k };
                    out.extend(self.write_beta(add).map(|n| (None, Some(b), n)));
                }
            }
            Phase::RightRemove => input_trivial(&mut out, k),
            Phase::RightAdd => output_trivial(&mut out, k),
        }
        out
    }

    fn accepting(&self, k: &MoveKey, only_changed: bool) -> bool {
        matches!(k.phase, Phase::Copy | Phase::RightRemove | Phase::RightAdd)
            && k.si == self.m
            && k.so == self.m
            && k.old_seen
            && k.new_written
            && k.in_obl.is_none()
            && k.out_obl.is_none()
            && (k.changed || !only_changed)
    }
}

fn move_transducer(a: &WreathAlphabet, m: usize, table: &MoveTable, only_changed: bool) -> LetterTransducer {
    let rules = MoveRules { a, m: m as i64, reach: table.reach(), table };
    let start = MoveKey {
        phase: Phase::Start,
        d: 0,
        si: m as i64,
        so: m as i64,
        old_seen: false,
        new_written: false,
        out_obl: None,
        in_obl: None,
        changed: false,
    };
    LetterTransducer::explore(a.full().clone(), start, |k| rules.moves(k), |k| rules.accepting(k, only_changed))
}
