use super::FiniteGroupTable;

/// A base-group element: a table index for finite groups, the integer itself for ℤ.
pub type GElem = i64;

/// A base group `G` the oracle can compute in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseGroup {
    Finite(FiniteGroupTable),
    /// ℤ written additively; generated by `z = +1`.
    Integers,
}

impl BaseGroup {
    pub fn identity(&self) -> GElem {
        match self {
            BaseGroup::Finite(t) => t.identity() as GElem,
            BaseGroup::Integers => 0,
        }
    }

    pub fn mult(&self, a: GElem, b: GElem) -> GElem {
        match self {
            BaseGroup::Finite(t) => t.mult(a as usize, b as usize) as GElem,
            BaseGroup::Integers => a + b,
        }
    }

    pub fn inverse(&self, a: GElem) -> GElem {
        match self {
            BaseGroup::Finite(t) => t.inverse(a as usize) as GElem,
            BaseGroup::Integers => -a,
        }
    }

    /// Symmetric generating set: each declared generator `s` and `s^-1`.
    pub fn generators(&self) -> Vec<(String, GElem)> {
        match self {
            BaseGroup::Finite(t) => t
                .generators()
                .iter()
                .flat_map(|&g| {
                    let name = t.name(g);
                    [(name.to_string(), g as GElem), (format!("{name}^-1"), t.inverse(g) as GElem)]
                })
                .collect(),
            BaseGroup::Integers => vec![("z".into(), 1), ("z^-1".into(), -1)],
        }
    }

    /// All elements, when the group is finite.
    pub fn elements(&self) -> Option<Vec<GElem>> {
        match self {
            BaseGroup::Finite(t) => Some((0..t.order() as GElem).collect()),
            BaseGroup::Integers => None,
        }
    }

    pub fn element_name(&self, a: GElem) -> String {
        match self {
            BaseGroup::Finite(t) => t.name(a as usize).to_string(),
            BaseGroup::Integers => a.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_lists_include_inverses() {
        let z3 = BaseGroup::Finite(FiniteGroupTable::cyclic(3, "c"));
        assert_eq!(z3.generators(), vec![("c".to_string(), 1), ("c^-1".to_string(), 2)]);
        let z2 = BaseGroup::Finite(FiniteGroupTable::cyclic(2, "a"));
        assert_eq!(z2.generators(), vec![("a".to_string(), 1), ("a^-1".to_string(), 1)]);
        assert_eq!(BaseGroup::Integers.mult(3, -5), -2);
    }
}
