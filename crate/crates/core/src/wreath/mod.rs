//! The Cayley automatic structure for `G ≀ H`: normal forms over
//! `Λ = Λ₀ ∪ {B, B0, C, C*}` and one multiplier automaton per generator.
//!
//! A normal form lists the integer support `[m1, m2]` column by column. The
//! block for column `c` is `β Γ₀ v₀ Γ₁ v₁ … Γ_m v_m`, where `β = B0` iff
//! `c = 0`, `Γ_j = C*` iff the lamplighter sits at `t^c x_j`, and `v_j` is the
//! base normal form of the lamp at `t^c x_j`.

mod language;
mod multipliers;
mod shift;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::automata::{
    apply_relation, convolution_product, transpose, Alphabet, Automaton, AutomatonError, AutomatonJson, Symbol,
};
use crate::base::{BaseAutomaticStructure, BaseError, BaseStructureJson, NamedAutomaton};
use crate::groups::{Generator, GroupError, GroupSpecJson, HElement, VirtuallyZSpec, WreathElement, WreathGroup};
use crate::par::Exec;

pub use language::build_language;
pub use multipliers::{build_lamp_multiplier, build_move_multiplier, build_move_multiplier_transducer, MoveTable};
pub use shift::{c_index_of_cstar, project_markers, CosetShiftTable, ShiftEntry};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WreathError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error("word is not a normal form: {0}")]
    NotInLanguage(String),
    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),
    #[error("base alphabet uses reserved marker name '{0}'")]
    MarkerClash(String),
    #[error("malformed structure: {0}")]
    Malformed(String),
}

pub const MARKER_NAMES: [&str; 4] = ["B", "B0", "C", "C*"];

/// `Λ = Λ₀ ∪ {B, B0, C, C*}`; base symbols keep their indices, markers follow.
#[derive(Clone, Debug)]
pub struct WreathAlphabet {
    lambda0: Arc<Alphabet>,
    full: Arc<Alphabet>,
    pairs: Arc<Alphabet>,
}

impl WreathAlphabet {
    pub fn new(lambda0: Arc<Alphabet>) -> Result<Self, WreathError> {
        if let Some(n) = lambda0.names().iter().find(|n| MARKER_NAMES.contains(&n.as_str())) {
            return Err(WreathError::MarkerClash(n.clone()));
        }
        let names = lambda0.names().iter().cloned().chain(MARKER_NAMES.iter().map(|s| s.to_string()));
        let full = Arc::new(Alphabet::new(names)?);
        let pairs = Arc::new(Alphabet::pairs(&full));
        Ok(Self { lambda0, full, pairs })
    }

    pub fn lambda0(&self) -> &Arc<Alphabet> {
        &self.lambda0
    }

    pub fn full(&self) -> &Arc<Alphabet> {
        &self.full
    }

    pub fn pairs(&self) -> &Arc<Alphabet> {
        &self.pairs
    }

    pub fn b(&self) -> Symbol {
        self.lambda0.len()
    }

    pub fn b0(&self) -> Symbol {
        self.lambda0.len() + 1
    }

    pub fn c(&self) -> Symbol {
        self.lambda0.len() + 2
    }

    pub fn cstar(&self) -> Symbol {
        self.lambda0.len() + 3
    }

    pub fn is_base(&self, s: Symbol) -> bool {
        s < self.lambda0.len()
    }

    pub fn is_beta(&self, s: Symbol) -> bool {
        s == self.b() || s == self.b0()
    }

    pub fn is_gamma(&self, s: Symbol) -> bool {
        s == self.c() || s == self.cstar()
    }

    pub fn format_word(&self, w: &[Symbol]) -> String {
        w.iter().map(|&s| self.full.name(s)).collect::<Vec<_>>().join(" ")
    }

    /// Parse a whitespace-separated word; also accepts markers glued to
    /// each other (`B0C*C`) when the base alphabet has single-character names.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Symbol>, WreathError> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            match self.full.symbol(tok) {
                Some(s) => out.push(s),
                None => out.extend(self.split_glued(tok)?),
            }
        }
        Ok(out)
    }

    fn split_glued(&self, tok: &str) -> Result<Vec<Symbol>, WreathError> {
        // longest match first so "B0" wins over "B" and "C*" over "C"
        let mut names: Vec<(&str, Symbol)> = self.full.symbols().map(|s| (self.full.name(s), s)).collect();
        names.sort_by_key(|(n, _)| std::cmp::Reverse(n.len()));
        let mut rest = tok;
        let mut out = Vec::new();
        while !rest.is_empty() {
            let (n, s) = names
                .iter()
                .find(|(n, _)| rest.starts_with(n))
                .ok_or_else(|| WreathError::UnknownSymbol(rest.to_string()))?;
            out.push(*s);
            rest = &rest[n.len()..];
        }
        Ok(out)
    }
}

/// The constructed structure `(S, Λ, L, ψ)` for `G ≀ H`.
#[derive(Clone, Debug)]
pub struct WreathStructure {
    base: BaseAutomaticStructure,
    group: WreathGroup,
    alphabet: WreathAlphabet,
    language: Automaton,
    multipliers: Vec<Automaton>,
    shifts: CosetShiftTable,
}

impl WreathStructure {
    /// Assemble `L`, the shift table and every multiplier. Forward generators
    /// are built directly; each `s^-1` is the converse of `s`.
    pub fn build(base: BaseAutomaticStructure, hspec: VirtuallyZSpec, exec: Exec) -> Result<Self, WreathError> {
        let group = WreathGroup::new(base.group().clone(), hspec);
        let alphabet = WreathAlphabet::new(base.alphabet().clone())?;
        let language = build_language(&alphabet, base.language(), group.hspec().m());
        let mut ws = Self {
            base,
            group,
            alphabet,
            language,
            multipliers: Vec::new(),
            shifts: CosetShiftTable::default(),
        };
        ws.shifts = CosetShiftTable::derive(&ws);
        let guard = ws.language_pair_guard()?;
        let gens = ws.group.generators().clone();
        let forward: Vec<usize> = (0..gens.len()).filter(|&i| gens.is_forward(i)).collect();
        let built = exec.try_map(&forward, |&i| ws.build_forward(i, &guard))?;
        let mut multipliers = vec![None; gens.len()];
        for (&i, r) in forward.iter().zip(built) {
            multipliers[gens.inverse_of(i)] = Some(transpose(&r)?);
            multipliers[i] = Some(r);
        }
        ws.multipliers = multipliers.into_iter().map(|m| m.expect("every generator has a multiplier")).collect();
        Ok(ws)
    }

    fn build_forward(&self, i: usize, guard: &Automaton) -> Result<Automaton, WreathError> {
        match self.group.generators().action(i) {
            Generator::Lamp(_) => {
                let name = self.group.generators().name(i);
                let bi = self.base.generator_index(name).expect("lamp generators come from the base");
                build_lamp_multiplier(self, bi, guard)
            }
            Generator::Move(h) => build_move_multiplier(self, h, guard),
        }
    }

    /// Convolutions of pairs from `L × L`.
    pub fn language_pair_guard(&self) -> Result<Automaton, WreathError> {
        Ok(convolution_product(self.alphabet.pairs(), &self.language, &self.language)?)
    }

    pub fn base(&self) -> &BaseAutomaticStructure {
        &self.base
    }

    pub fn group(&self) -> &WreathGroup {
        &self.group
    }

    pub fn hspec(&self) -> &VirtuallyZSpec {
        self.group.hspec()
    }

    pub fn m(&self) -> usize {
        self.group.hspec().m()
    }

    pub fn alphabet(&self) -> &WreathAlphabet {
        &self.alphabet
    }

    pub fn language(&self) -> &Automaton {
        &self.language
    }

    pub fn multipliers(&self) -> &[Automaton] {
        &self.multipliers
    }

    pub fn multiplier(&self, i: usize) -> &Automaton {
        &self.multipliers[i]
    }

    pub fn shifts(&self) -> &CosetShiftTable {
        &self.shifts
    }

    /// `ψ⁻¹`: the normal form of `v`.
    pub fn encode(&self, v: &WreathElement) -> Vec<Symbol> {
        let info = self.group.support_info(v);
        let a = &self.alphabet;
        let mut w = Vec::new();
        for col in info.m1..=info.m2 {
            w.push(if col == 0 { a.b0() } else { a.b() });
            for j in 0..=self.m() {
                let h = HElement::new(col, j);
                w.push(if v.position() == h { a.cstar() } else { a.c() });
                if let Some(g) = v.lamp(h) {
                    w.extend(self.base.word_for(g));
                }
            }
        }
        w
    }

    /// `ψ`: the element a normal form denotes.
    pub fn decode(&self, w: &[Symbol]) -> Result<WreathElement, WreathError> {
        if !self.language.accepts(w) {
            return Err(WreathError::NotInLanguage(self.alphabet.format_word(w)));
        }
        let a = &self.alphabet;
        let b0_block = w.iter().filter(|&&s| a.is_beta(s)).position(|&s| s == a.b0()).expect("L has one B0");
        let mut col = -(b0_block as i64) - 1;
        let mut slot = 0usize;
        let mut position = HElement::IDENTITY;
        let mut lamps = Vec::new();
        let mut i = 0;
        while i < w.len() {
            let s = w[i];
            if a.is_beta(s) {
                col += 1;
                i += 1;
                continue;
            }
            // Γ followed by a maximal run of base letters
            slot = if i > 0 && a.is_beta(w[i - 1]) { 0 } else { slot + 1 };
            let h = HElement::new(col, slot);
            if s == a.cstar() {
                position = h;
            }
            let start = i + 1;
            let mut end = start;
            while end < w.len() && a.is_base(w[end]) {
                end += 1;
            }
            if end > start {
                lamps.push((h, self.base.evaluate(&w[start..end])));
            }
            i = end;
        }
        Ok(self.group.element(lamps, position))
    }

    /// Right multiplication of a normal form by generator `i`.
    pub fn apply(&self, i: usize, u: &[Symbol]) -> Result<Vec<Symbol>, AutomatonError> {
        apply_relation(&self.multipliers[i], u)
    }

    pub fn format_word(&self, w: &[Symbol]) -> String {
        self.alphabet.format_word(w)
    }

    pub fn parse_word(&self, text: &str) -> Result<Vec<Symbol>, WreathError> {
        self.alphabet.parse_word(text)
    }

    pub fn to_json(&self) -> WreathStructureJson {
        let gens = self.group.generators();
        WreathStructureJson {
            base: self.base.to_json(),
            hspec: GroupSpecJson::from(self.hspec()),
            alphabet: self.alphabet.full().names().to_vec(),
            language: AutomatonJson::from(&self.language),
            multipliers: (0..gens.len())
                .map(|i| NamedAutomaton { generator: gens.name(i).to_string(), automaton: AutomatonJson::from(&self.multipliers[i]) })
                .collect(),
            shifts: self.shifts.clone(),
        }
    }

    pub fn from_json(j: &WreathStructureJson) -> Result<Self, WreathError> {
        let base = BaseAutomaticStructure::from_json(&j.base)?;
        let group = WreathGroup::new(base.group().clone(), j.hspec.to_hspec()?);
        let alphabet = WreathAlphabet::new(base.alphabet().clone())?;
        if j.alphabet != alphabet.full().names() {
            return Err(WreathError::Malformed("alphabet does not match the base structure".into()));
        }
        let language = Automaton::try_from(&j.language)?.embed(alphabet.full().clone())?;
        let gens = group.generators().clone();
        let mut multipliers = vec![None; gens.len()];
        for m in &j.multipliers {
            let i = gens.index(&m.generator).ok_or_else(|| GroupError::UnknownGenerator(m.generator.clone()))?;
            multipliers[i] = Some(Automaton::try_from(&m.automaton)?.embed(alphabet.pairs().clone())?);
        }
        let multipliers = multipliers
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| WreathError::Malformed(format!("missing multiplier for '{}'", gens.name(i)))))
            .collect::<Result<_, _>>()?;
        Ok(Self { base, group, alphabet, language, multipliers, shifts: j.shifts.clone() })
    }
}

/// JSON envelope for a [`WreathStructure`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WreathStructureJson {
    pub base: BaseStructureJson,
    pub hspec: GroupSpecJson,
    pub alphabet: Vec<String>,
    pub language: AutomatonJson,
    pub multipliers: Vec<NamedAutomaton>,
    pub shifts: CosetShiftTable,
}
