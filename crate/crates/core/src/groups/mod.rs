//! Ground-truth group arithmetic: base groups, virtually infinite cyclic
//! groups given by coset data, and the restricted wreath product.

mod base_group;
mod finite;
mod virtually_z;
mod wreath;

use serde::{Deserialize, Serialize};

pub use base_group::{BaseGroup, GElem};
pub use finite::FiniteGroupTable;
pub use virtually_z::{HElement, VirtuallyZSpec, AUDIT_RADIUS};
pub use wreath::{Generator, GeneratorSet, SupportInfo, WreathElement, WreathGroup};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("table has no two-sided identity")]
    IdentityLaw,
    #[error("inverse law fails at {0}")]
    InverseLaw(String),
    #[error("multiplication is not associative at {triple}")]
    NotAssociative { triple: String },
    #[error("generators do not generate the group")]
    GeneratorsDoNotGenerate,
    #[error("invalid coset data: {0}")]
    InvalidHSpec(String),
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error("expected a {expected} group spec")]
    WrongSpecKind { expected: &'static str },
}

/// JSON form of a group description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GroupSpecJson {
    FiniteTable {
        order: usize,
        mult: Vec<Vec<usize>>,
        inverse: Vec<usize>,
        generators: Vec<usize>,
        names: Vec<String>,
    },
    VirtuallyZ {
        m: usize,
        coset_mult: Vec<Vec<[i64; 2]>>,
        t_conj: Vec<[i64; 2]>,
        inverse: Vec<[i64; 2]>,
    },
    /// The infinite cyclic group as a base group.
    Integers,
}

impl GroupSpecJson {
    pub fn to_base_group(&self) -> Result<BaseGroup, GroupError> {
        match self {
            GroupSpecJson::FiniteTable { order, mult, inverse, generators, names } => {
                if mult.len() != *order {
                    return Err(GroupError::InvalidTable(format!("order {order} but {} table rows", mult.len())));
                }
                let t = FiniteGroupTable::new(mult.clone(), inverse.clone(), generators.clone(), names.clone())?;
                Ok(BaseGroup::Finite(t))
            }
            GroupSpecJson::Integers => Ok(BaseGroup::Integers),
            GroupSpecJson::VirtuallyZ { .. } => Err(GroupError::WrongSpecKind { expected: "base" }),
        }
    }

    pub fn to_hspec(&self) -> Result<VirtuallyZSpec, GroupError> {
        let GroupSpecJson::VirtuallyZ { m, coset_mult, t_conj, inverse } = self else {
            return Err(GroupError::WrongSpecKind { expected: "virtually_z" });
        };
        let pair = |&[k, r]: &[i64; 2]| -> Result<(i64, usize), GroupError> {
            usize::try_from(r).map(|r| (k, r)).map_err(|_| GroupError::InvalidHSpec(format!("negative coset index {r}")))
        };
        let rows = coset_mult.iter().map(|row| row.iter().map(pair).collect()).collect::<Result<_, _>>()?;
        let t_conj = t_conj.iter().map(pair).collect::<Result<_, _>>()?;
        let inverse = inverse.iter().map(pair).collect::<Result<_, _>>()?;
        VirtuallyZSpec::new(*m, rows, t_conj, inverse)
    }
}

impl From<&BaseGroup> for GroupSpecJson {
    fn from(g: &BaseGroup) -> Self {
        match g {
            BaseGroup::Finite(t) => GroupSpecJson::FiniteTable {
                order: t.order(),
                mult: t.table().to_vec(),
                inverse: t.inverse_table().to_vec(),
                generators: t.generators().to_vec(),
                names: t.names().to_vec(),
            },
            BaseGroup::Integers => GroupSpecJson::Integers,
        }
    }
}

impl From<&VirtuallyZSpec> for GroupSpecJson {
    fn from(h: &VirtuallyZSpec) -> Self {
        h.to_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_json_roundtrip() {
        let d = VirtuallyZSpec::infinite_dihedral();
        let text = serde_json::to_string(&GroupSpecJson::from(&d)).unwrap();
        assert!(text.contains("\"type\":\"virtually_z\""));
        let back: GroupSpecJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_hspec().unwrap(), d);

        let z2 = BaseGroup::Finite(FiniteGroupTable::cyclic(2, "a"));
        let text = serde_json::to_string(&GroupSpecJson::from(&z2)).unwrap();
        let back: GroupSpecJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_base_group().unwrap(), z2);

        let z: GroupSpecJson = serde_json::from_str(r#"{"type":"integers"}"#).unwrap();
        assert_eq!(z.to_base_group().unwrap(), BaseGroup::Integers);
        assert!(z.to_hspec().is_err());
    }

    #[test]
    fn broken_hspec_reports_triple() {
        let text = r#"{"type":"virtually_z","m":1,
            "coset_mult":[[[0,0],[0,1]],[[0,1],[1,0]]],
            "t_conj":[[1,0],[-1,1]],"inverse":[[0,0],[-1,1]]}"#;
        let spec: GroupSpecJson = serde_json::from_str(text).unwrap();
        let err = spec.to_hspec().unwrap_err();
        assert!(matches!(err, GroupError::NotAssociative { .. } | GroupError::InverseLaw(_)), "{err}");
    }
}
