//! The reference groups used throughout the tests and the CLI.

use crate::base::BaseAutomaticStructure;
use crate::groups::{BaseGroup, FiniteGroupTable, VirtuallyZSpec};
use crate::par::Exec;
use crate::wreath::{WreathError, WreathStructure};

/// ℤ₂ ≀ ℤ, the lamplighter group (`m = 0`).
pub fn lamplighter() -> Result<WreathStructure, WreathError> {
    build(BaseGroup::Finite(FiniteGroupTable::cyclic(2, "a")), VirtuallyZSpec::integers())
}

/// ℤ₂ ≀ D∞ (`m = 1`).
pub fn z2_wr_dihedral() -> Result<WreathStructure, WreathError> {
    build(BaseGroup::Finite(FiniteGroupTable::cyclic(2, "a")), VirtuallyZSpec::infinite_dihedral())
}

/// ℤ₃ ≀ (ℤ × ℤ₅) (`m = 4`).
pub fn z3_wr_z_z5() -> Result<WreathStructure, WreathError> {
    build(BaseGroup::Finite(FiniteGroupTable::cyclic(3, "c")), VirtuallyZSpec::z_times_cyclic(5))
}

/// ℤ ≀ ℤ with the unary base structure.
pub fn integers_wr_integers() -> Result<WreathStructure, WreathError> {
    build(BaseGroup::Integers, VirtuallyZSpec::integers())
}

fn build(g: BaseGroup, h: VirtuallyZSpec) -> Result<WreathStructure, WreathError> {
    WreathStructure::build(BaseAutomaticStructure::for_group(g)?, h, Exec::default())
}
