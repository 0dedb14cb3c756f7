use serde::{Deserialize, Serialize};

use crate::automata::Symbol;
use crate::groups::{Generator, HElement};

use super::{WreathAlphabet, WreathStructure};

/// Erase every letter except `C`, `C*` and `B0`.
pub fn project_markers(alpha: &WreathAlphabet, w: &[Symbol]) -> Vec<Symbol> {
    w.iter().copied().filter(|&s| s == alpha.c() || s == alpha.cstar() || s == alpha.b0()).collect()
}

/// Number of `C`/`C*` letters before the `C*`.
pub fn c_index_of_cstar(alpha: &WreathAlphabet, w: &[Symbol]) -> Option<usize> {
    w.iter().filter(|&&s| alpha.is_gamma(s)).position(|&s| s == alpha.cstar())
}

/// Right multiplication of coset `q` by a position-moving generator:
/// `x_q · h = t^k x_r`, and the `C*` offset `s` it causes when the support
/// does not change.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftEntry {
    pub generator: String,
    pub q: usize,
    pub k: i64,
    pub r: usize,
    /// `C`-letter index of `C*` in `u` minus that in `v`
    pub s: i64,
    /// measured on a probe element rather than taken from `q - r - (m+1)k`
    pub probed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetShiftTable {
    pub entries: Vec<ShiftEntry>,
}

impl CosetShiftTable {
    /// Measure each constant on a probe whose lamps pin the support wide
    /// enough that the move cannot change it. Groups with no lamp values
    /// fall back to the closed form.
    pub(crate) fn derive(ws: &WreathStructure) -> Self {
        let g = ws.group();
        let h = g.hspec();
        let m = h.m() as i64;
        let lamp = g.base().generators().into_iter().map(|(_, s)| s).find(|&s| s != g.base().identity());
        let mut entries = Vec::new();
        for i in 0..g.generators().len() {
            let Generator::Move(step) = g.generators().action(i) else { continue };
            for q in 0..=h.m() {
                let HElement { k, q: r } = h.mult(h.x(q), step);
                let formula = q as i64 - r as i64 - (m + 1) * k;
                let (s, probed) = match lamp {
                    Some(val) => {
                        let pin = k.abs() + 1;
                        let probe = g.element([(HElement::new(-pin, 0), val), (HElement::new(pin, 0), val)], h.x(q));
                        let u = ws.encode(&probe);
                        let v = ws.encode(&g.mult_generator(&probe, i));
                        let a = ws.alphabet();
                        let x = c_index_of_cstar(a, &u).expect("normal forms hold C*") as i64;
                        let y = c_index_of_cstar(a, &v).expect("normal forms hold C*") as i64;
                        (x - y, true)
                    }
                    None => (formula, false),
                };
                entries.push(ShiftEntry { generator: g.generators().name(i).to_string(), q, k, r, s, probed });
            }
        }
        Self { entries }
    }

    pub fn get(&self, generator: &str, q: usize) -> Option<&ShiftEntry> {
        self.entries.iter().find(|e| e.generator == generator && e.q == q)
    }
}
