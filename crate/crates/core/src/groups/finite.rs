use std::collections::VecDeque;

use super::GroupError;

/// A finite group given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupTable {
    mult: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    identity: usize,
    generators: Vec<usize>,
    names: Vec<String>,
}

impl FiniteGroupTable {
    /// Validate and build a table. The identity is located from the table.
    pub fn new(
        mult: Vec<Vec<usize>>,
        inverse: Vec<usize>,
        generators: Vec<usize>,
        names: Vec<String>,
    ) -> Result<Self, GroupError> {
        let n = mult.len();
        let bad = |msg: String| Err(GroupError::InvalidTable(msg));
        if n == 0 {
            return bad("group must have at least one element".into());
        }
        if mult.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return bad("multiplication table must be square with entries in range".into());
        }
        if inverse.len() != n || inverse.iter().any(|&x| x >= n) {
            return bad("inverse table has wrong length or out-of-range entry".into());
        }
        if names.len() != n {
            return bad(format!("expected {n} element names, got {}", names.len()));
        }
        if generators.iter().any(|&g| g >= n) {
            return bad("generator index out of range".into());
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mult[e][x] == x && mult[x][e] == x))
            .ok_or(GroupError::IdentityLaw)?;
        for x in 0..n {
            if mult[x][inverse[x]] != identity || mult[inverse[x]][x] != identity {
                return Err(GroupError::InverseLaw(names[x].clone()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                        return Err(GroupError::NotAssociative {
                            triple: format!("({}, {}, {})", names[a], names[b], names[c]),
                        });
                    }
                }
            }
        }
        let table = Self { mult, inverse, identity, generators, names };
        if table.closure_size() != n {
            return Err(GroupError::GeneratorsDoNotGenerate);
        }
        Ok(table)
    }

    /// ℤ_n with elements `e, c, c2, …` named after `letter`, generated by `letter`.
    pub fn cyclic(n: usize, letter: &str) -> Self {
        assert!(n >= 1);
        let mult = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let inverse = (0..n).map(|a| (n - a) % n).collect();
        let names = (0..n)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => letter.to_string(),
                _ => format!("{letter}{i}"),
            })
            .collect();
        let generators = if n > 1 { vec![1] } else { Vec::new() };
        Self::new(mult, inverse, generators, names).expect("cyclic group table is valid")
    }

    fn closure_size(&self) -> usize {
        let n = self.order();
        let mut seen = vec![false; n];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in &self.generators {
                for y in [self.mult[x][g], self.mult[x][self.inverse[g]]] {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        seen.iter().filter(|&&s| s).count()
    }

    pub fn order(&self) -> usize {
        self.mult.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mult(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mult
    }

    pub fn inverse_table(&self) -> &[usize] {
        &self.inverse
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups_validate() {
        let z3 = FiniteGroupTable::cyclic(3, "c");
        assert_eq!(z3.order(), 3);
        assert_eq!(z3.mult(1, 2), 0);
        assert_eq!(z3.name(2), "c2");
        assert_eq!(FiniteGroupTable::cyclic(1, "a").generators(), &[] as &[usize]);
    }

    #[test]
    fn rejects_non_associative_table() {
        // a 3-element quasigroup-ish table that is not associative
        let mult = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]];
        let err = FiniteGroupTable::new(mult, vec![0, 1, 2], vec![1, 2], vec!["e".into(), "x".into(), "y".into()]);
        assert!(matches!(err, Err(GroupError::InverseLaw(_)) | Err(GroupError::NotAssociative { .. })));
    }

    #[test]
    fn rejects_non_generating_set() {
        let z2 = FiniteGroupTable::cyclic(2, "a");
        let err = FiniteGroupTable::new(z2.table().to_vec(), z2.inverse_table().to_vec(), vec![], z2.names().to_vec());
        assert_eq!(err.unwrap_err(), GroupError::GeneratorsDoNotGenerate);
    }
}
