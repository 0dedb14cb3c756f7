use std::collections::BTreeMap;

use super::{BaseGroup, GElem, GroupError, HElement, VirtuallyZSpec};

/// Element `(γ, h)` of `G ≀ H`: a finitely supported lamp configuration and a position.
///
/// Only non-identity lamp values are stored, so structural equality is group equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WreathElement {
    support: BTreeMap<HElement, GElem>,
    position: HElement,
}

impl WreathElement {
    pub fn support(&self) -> &BTreeMap<HElement, GElem> {
        &self.support
    }

    pub fn position(&self) -> HElement {
        self.position
    }

    /// Lamp value at `h`, if not the identity.
    pub fn lamp(&self, h: HElement) -> Option<GElem> {
        self.support.get(&h).copied()
    }
}

/// Integer support data: `[m1, m2]` spans 0, the position and every lamp.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SupportInfo {
    pub k_star: i64,
    pub k1: i64,
    pub k2: i64,
    pub m1: i64,
    pub m2: i64,
}

impl SupportInfo {
    /// Number of integer columns `m2 - m1 + 1`.
    pub fn width(&self) -> usize {
        (self.m2 - self.m1 + 1) as usize
    }
}

/// What a generator of `G ≀ H` does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    /// Multiply the lamp under the lamplighter by a base element.
    Lamp(GElem),
    /// Move the lamplighter by right multiplication in `H`.
    Move(HElement),
}

/// The symmetric generating set `S₀ ∪ T` with named inverses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    names: Vec<String>,
    actions: Vec<Generator>,
    inverse: Vec<usize>,
}

impl GeneratorSet {
    fn new(base: &BaseGroup, h: &VirtuallyZSpec) -> Self {
        let mut names = Vec::new();
        let mut actions = Vec::new();
        for (name, g) in base.generators() {
            names.push(name);
            actions.push(Generator::Lamp(g));
        }
        let mut push_pair = |name: String, e: HElement| {
            names.push(name.clone());
            actions.push(Generator::Move(e));
            names.push(format!("{name}^-1"));
            actions.push(Generator::Move(h.inverse(e)));
        };
        push_pair("t".into(), h.t());
        for i in 1..=h.m() {
            push_pair(format!("x{i}"), h.x(i));
        }
        // generators come in (s, s^-1) pairs
        let inverse = (0..names.len()).map(|i| i ^ 1).collect();
        Self { names, actions, inverse }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn action(&self, i: usize) -> Generator {
        self.actions[i]
    }

    pub fn inverse_of(&self, i: usize) -> usize {
        self.inverse[i]
    }

    /// Generators whose multipliers are built directly; the others are their converses.
    pub fn is_forward(&self, i: usize) -> bool {
        i.is_multiple_of(2)
    }

    /// Parse whitespace-separated generator names.
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>, GroupError> {
        text.split_whitespace()
            .map(|tok| self.index(tok).ok_or_else(|| GroupError::UnknownGenerator(tok.to_string())))
            .collect()
    }

    pub fn format_word(&self, word: &[usize]) -> String {
        word.iter().map(|&i| self.names[i].as_str()).collect::<Vec<_>>().join(" ")
    }
}

/// The restricted wreath product `G ≀ H` as a brute-force oracle.
#[derive(Clone, Debug)]
pub struct WreathGroup {
    base: BaseGroup,
    h: VirtuallyZSpec,
    generators: GeneratorSet,
}

impl WreathGroup {
    pub fn new(base: BaseGroup, h: VirtuallyZSpec) -> Self {
        let generators = GeneratorSet::new(&base, &h);
        Self { base, h, generators }
    }

    pub fn base(&self) -> &BaseGroup {
        &self.base
    }

    pub fn hspec(&self) -> &VirtuallyZSpec {
        &self.h
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    pub fn identity(&self) -> WreathElement {
        WreathElement { support: BTreeMap::new(), position: HElement::IDENTITY }
    }

    /// Build an element, dropping identity lamp values.
    pub fn element(&self, lamps: impl IntoIterator<Item = (HElement, GElem)>, position: HElement) -> WreathElement {
        let e = self.base.identity();
        let mut support = BTreeMap::new();
        for (h, g) in lamps {
            let v = support.get(&h).map_or(g, |&old| self.base.mult(old, g));
            if v == e {
                support.remove(&h);
            } else {
                support.insert(h, v);
            }
        }
        WreathElement { support, position }
    }

    /// `(γ, h)(γ', h') = (x ↦ γ(x)·γ'(h⁻¹x), hh')`.
    pub fn mult(&self, a: &WreathElement, b: &WreathElement) -> WreathElement {
        let mut support = a.support.clone();
        let e = self.base.identity();
        for (&y, &g) in &b.support {
            let x = self.h.mult(a.position, y);
            let v = self.base.mult(support.get(&x).copied().unwrap_or(e), g);
            if v == e {
                support.remove(&x);
            } else {
                support.insert(x, v);
            }
        }
        WreathElement { support, position: self.h.mult(a.position, b.position) }
    }

    /// `(γ, h)⁻¹ = (y ↦ γ(hy)⁻¹, h⁻¹)`.
    pub fn inverse(&self, a: &WreathElement) -> WreathElement {
        let hinv = self.h.inverse(a.position);
        let support = a.support.iter().map(|(&x, &g)| (self.h.mult(hinv, x), self.base.inverse(g))).collect();
        WreathElement { support, position: hinv }
    }

    /// Right multiplication by generator `i`.
    pub fn mult_generator(&self, a: &WreathElement, i: usize) -> WreathElement {
        match self.generators.action(i) {
            Generator::Lamp(g) => {
                let cur = a.lamp(a.position).unwrap_or(self.base.identity());
                let mut out = a.clone();
                let v = self.base.mult(cur, g);
                if v == self.base.identity() {
                    out.support.remove(&a.position);
                } else {
                    out.support.insert(a.position, v);
                }
                out
            }
            Generator::Move(h) => WreathElement { support: a.support.clone(), position: self.h.mult(a.position, h) },
        }
    }

    pub fn generator_element(&self, i: usize) -> WreathElement {
        self.mult_generator(&self.identity(), i)
    }

    /// Left-to-right product of generator images.
    pub fn eval_indices(&self, word: &[usize]) -> WreathElement {
        word.iter().fold(self.identity(), |acc, &i| self.mult_generator(&acc, i))
    }

    pub fn eval_word(&self, text: &str) -> Result<WreathElement, GroupError> {
        Ok(self.eval_indices(&self.generators.parse_word(text)?))
    }

    pub fn support_info(&self, v: &WreathElement) -> SupportInfo {
        let k_star = v.position.xi();
        let k1 = v.support.keys().map(HElement::xi).fold(0, i64::min);
        let k2 = v.support.keys().map(HElement::xi).fold(0, i64::max);
        SupportInfo { k_star, k1, k2, m1: k_star.min(k1), m2: k_star.max(k2) }
    }

    /// Every element whose lamps and position have `t`-exponent in `window`
    /// and whose lamp values lie in `values`.
    pub fn enumerate_elements(&self, window: (i64, i64), values: &[GElem]) -> Vec<WreathElement> {
        self.enumerate_elements_sparse(window, values, usize::MAX)
    }

    /// As [`WreathGroup::enumerate_elements`], keeping at most `max_lamps` lit lamps.
    pub fn enumerate_elements_sparse(&self, window: (i64, i64), values: &[GElem], max_lamps: usize) -> Vec<WreathElement> {
        let (w1, w2) = window;
        assert!(w1 <= 0 && 0 <= w2, "window must contain 0");
        let e = self.base.identity();
        let mut vals: Vec<GElem> = values.iter().copied().filter(|&g| g != e).collect();
        vals.sort_unstable();
        vals.dedup();
        let sites = self.h.window_range(w1, w2);
        let mut configs: Vec<BTreeMap<HElement, GElem>> = Vec::new();
        let mut cur = BTreeMap::new();
        lamp_configs(&sites, &vals, max_lamps, &mut cur, &mut configs);
        let mut out = Vec::with_capacity(configs.len() * sites.len());
        for support in configs {
            for &position in &sites {
                out.push(WreathElement { support: support.clone(), position });
            }
        }
        out
    }

    /// Human-readable form, e.g. `{t^-2 x2: c, t^1: c2} @ t^-1 x3`.
    pub fn describe(&self, v: &WreathElement) -> String {
        let lamps: Vec<String> =
            v.support.iter().map(|(h, &g)| format!("{h}: {}", self.base.element_name(g))).collect();
        format!("{{{}}} @ {}", lamps.join(", "), v.position)
    }
}

fn lamp_configs(
    sites: &[HElement],
    vals: &[GElem],
    budget: usize,
    cur: &mut BTreeMap<HElement, GElem>,
    out: &mut Vec<BTreeMap<HElement, GElem>>,
) {
    let Some((&site, rest)) = sites.split_first() else {
        out.push(cur.clone());
        return;
    };
    lamp_configs(rest, vals, budget, cur, out);
    if budget == 0 {
        return;
    }
    for &g in vals {
        cur.insert(site, g);
        lamp_configs(rest, vals, budget - 1, cur, out);
        cur.remove(&site);
    }
}

impl VirtuallyZSpec {
    /// Elements `t^k x_q` with `w1 <= k <= w2`.
    pub fn window_range(&self, w1: i64, w2: i64) -> Vec<HElement> {
        (w1..=w2).flat_map(|k| (0..=self.m()).map(move |q| HElement::new(k, q))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroupTable;

    fn lamplighter() -> WreathGroup {
        WreathGroup::new(BaseGroup::Finite(FiniteGroupTable::cyclic(2, "a")), VirtuallyZSpec::integers())
    }

    #[test]
    fn lamplighter_products() {
        let g = lamplighter();
        let a_t = g.element([(HElement::IDENTITY, 1)], HElement::new(1, 0));
        let sq = g.mult(&a_t, &a_t);
        assert_eq!(sq, g.element([(HElement::new(0, 0), 1), (HElement::new(1, 0), 1)], HElement::new(2, 0)));
        let w = g.eval_word("a t a t^-1").unwrap();
        assert_eq!(w, g.element([(HElement::new(0, 0), 1), (HElement::new(1, 0), 1)], HElement::IDENTITY));
        assert_eq!(g.mult(&w, &g.inverse(&w)), g.identity());
        assert_eq!(g.eval_word("").unwrap(), g.identity());
        assert_eq!(g.eval_word("a b"), Err(GroupError::UnknownGenerator("b".into())));
    }

    #[test]
    fn generator_counts() {
        assert_eq!(lamplighter().generators().len(), 4);
        let d = WreathGroup::new(BaseGroup::Finite(FiniteGroupTable::cyclic(2, "a")), VirtuallyZSpec::infinite_dihedral());
        assert_eq!(d.generators().names(), &["a", "a^-1", "t", "t^-1", "x1", "x1^-1"]);
        let f = WreathGroup::new(BaseGroup::Finite(FiniteGroupTable::cyclic(3, "c")), VirtuallyZSpec::z_times_cyclic(5));
        assert_eq!(f.generators().len(), 12);
    }

    #[test]
    fn support_info_cases() {
        let g = WreathGroup::new(BaseGroup::Finite(FiniteGroupTable::cyclic(3, "c")), VirtuallyZSpec::z_times_cyclic(5));
        let id = g.support_info(&g.identity());
        assert_eq!((id.k_star, id.k1, id.k2, id.m1, id.m2), (0, 0, 0, 0, 0));
        let w = g.eval_word("t^-1 t^-1 x2 c x2^-1 x4 c x4^-1 t t t c x1 c x1^-1 t^-1 t^-1 x3").unwrap();
        let s = g.support_info(&w);
        assert_eq!((s.m1, s.m2), (-2, 1));
        assert_eq!(w.position(), HElement::new(-1, 3));
        for n in [-3i64, 3] {
            let v = g.element([], HElement::new(n, 2));
            let s = g.support_info(&v);
            assert_eq!((s.m1, s.m2), (n.min(0), n.max(0)));
        }
    }

    #[test]
    fn enumeration_counts() {
        let d = WreathGroup::new(BaseGroup::Finite(FiniteGroupTable::cyclic(2, "a")), VirtuallyZSpec::infinite_dihedral());
        assert_eq!(d.enumerate_elements((0, 0), &[0, 1]).len(), 8);
        assert_eq!(d.enumerate_elements((0, 0), &[0]).len(), 2);
        assert_eq!(lamplighter().enumerate_elements((0, 1), &[0, 1]).len(), 8);
        assert_eq!(lamplighter().enumerate_elements_sparse((-2, 2), &[1], 1).len(), 6 * 5);
    }
}
