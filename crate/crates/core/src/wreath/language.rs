use crate::automata::{Automaton, StateId, Symbol};

use super::WreathAlphabet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Pos {
    /// before the first β
    Start,
    /// after β, expecting Γ₀
    Beta,
    /// inside slot `j` with the base automaton in state `q`
    Slot(usize, StateId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Key {
    pos: Pos,
    b0: bool,
    cstar: bool,
    first: bool,
    /// current block holds a base letter, B0 or C*
    marked: bool,
}

/// The normal-form language `L` for index `m + 1`.
///
/// Words are sequences of blocks `β Γ₀ v₀ … Γ_m v_m` with `v_j ∈ L₀`,
/// exactly one `B0` and one `C*`, and whose first and last blocks are not
/// trivial: each holds a base letter, `B0` or `C*`.
pub fn build_language(alpha: &WreathAlphabet, l0: &Automaton, m: usize) -> Automaton {
    let l0 = if l0.is_deterministic() { l0.clone() } else { l0.determinize() };
    let q0 = l0.initial()[0];
    let start = Key { pos: Pos::Start, b0: false, cstar: false, first: true, marked: false };
    let betas = [alpha.b(), alpha.b0()];
    let gammas = [alpha.c(), alpha.cstar()];
    let open_block = |k: &Key, beta: Symbol, first: bool| -> Option<Key> {
        let is_b0 = beta == alpha.b0();
        (!(is_b0 && k.b0)).then_some(Key { pos: Pos::Beta, b0: k.b0 || is_b0, cstar: k.cstar, first, marked: is_b0 })
    };
    let open_slot = |k: &Key, gamma: Symbol, j: usize| -> Option<Key> {
        let is_star = gamma == alpha.cstar();
        (!(is_star && k.cstar)).then_some(Key {
            pos: Pos::Slot(j, q0),
            cstar: k.cstar || is_star,
            marked: k.marked || is_star,
            ..*k
        })
    };
    let moves = |k: &Key| -> Vec<(Symbol, Key)> {
        let mut out = Vec::new();
        match k.pos {
            Pos::Start => {
                for beta in betas {
                    out.extend(open_block(k, beta, true).map(|n| (beta, n)));
                }
            }
            Pos::Beta => {
                for g in gammas {
                    out.extend(open_slot(k, g, 0).map(|n| (g, n)));
                }
            }
            Pos::Slot(j, q) => {
                for (a, q2) in l0.edges(q).iter().copied() {
                    out.push((a, Key { pos: Pos::Slot(j, q2), marked: true, ..*k }));
                }
                if l0.is_accepting(q) {
                    if j < m {
                        for g in gammas {
                            out.extend(open_slot(k, g, j + 1).map(|n| (g, n)));
                        }
                    } else if !k.first || k.marked {
                        for beta in betas {
                            out.extend(open_block(k, beta, false).map(|n| (beta, n)));
                        }
                    }
                }
            }
        }
        out
    };
    let accepting = |k: &Key| matches!(k.pos, Pos::Slot(j, q) if j == m && l0.is_accepting(q)) && k.b0 && k.cstar && k.marked;
    Automaton::explore(alpha.full().clone(), vec![start], moves, accepting).minimize()
}
