use std::fmt;

use serde::{Deserialize, Serialize};

use super::GroupError;

/// Element `t^k x_q` of a virtually infinite cyclic group.
///
/// The right-coset decomposition over `⟨t⟩` makes `(k, q)` unique.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HElement {
    pub k: i64,
    pub q: usize,
}

impl HElement {
    pub const IDENTITY: HElement = HElement { k: 0, q: 0 };

    pub fn new(k: i64, q: usize) -> Self {
        Self { k, q }
    }

    /// The `t`-exponent of the coset decomposition.
    pub fn xi(&self) -> i64 {
        self.k
    }
}

impl fmt::Display for HElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.k, self.q) {
            (0, 0) => write!(f, "1"),
            (0, q) => write!(f, "x{q}"),
            (k, 0) => write!(f, "t^{k}"),
            (k, q) => write!(f, "t^{k} x{q}"),
        }
    }
}

/// A group `H` containing `⟨t⟩ ≅ ℤ` with index `m + 1`, given by coset data.
///
/// With coset representatives `x_0 = 1, x_1, …, x_m`:
/// `coset_mult[q][i] = (k, r)` means `x_q x_i = t^k x_r`,
/// `t_conj[q] = (k, r)` means `x_q t = t^k x_r`, and
/// `inverse[q] = (k, r)` means `x_q⁻¹ = t^k x_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtuallyZSpec {
    m: usize,
    coset_mult: Vec<Vec<(i64, usize)>>,
    t_conj: Vec<(i64, usize)>,
    inverse: Vec<(i64, usize)>,
    /// `x_q t⁻¹ = t^k x_r`, derived from `t_conj`
    t_inv_conj: Vec<(i64, usize)>,
}

/// Exponent bound of the associativity audit window.
pub const AUDIT_RADIUS: i64 = 3;

impl VirtuallyZSpec {
    pub fn new(
        m: usize,
        coset_mult: Vec<Vec<(i64, usize)>>,
        t_conj: Vec<(i64, usize)>,
        inverse: Vec<(i64, usize)>,
    ) -> Result<Self, GroupError> {
        let n = m + 1;
        let bad = |msg: &str| Err(GroupError::InvalidHSpec(msg.to_string()));
        if coset_mult.len() != n || coset_mult.iter().any(|row| row.len() != n) {
            return bad("coset_mult must be (m+1) x (m+1)");
        }
        if t_conj.len() != n || inverse.len() != n {
            return bad("t_conj and inverse must have m+1 entries");
        }
        let in_range = |&(_, r): &(i64, usize)| r < n;
        if !coset_mult.iter().flatten().all(in_range) || !t_conj.iter().all(in_range) || !inverse.iter().all(in_range) {
            return bad("coset index out of range");
        }
        for (i, row) in coset_mult.iter().enumerate() {
            if coset_mult[0][i] != (0, i) || row[0] != (0, i) {
                return bad("x_0 must be the identity in coset_mult");
            }
        }
        if t_conj[0] != (1, 0) || inverse[0] != (0, 0) {
            return bad("x_0 must be the identity in t_conj and inverse");
        }
        // right multiplication by t permutes the right cosets
        let mut t_inv_conj = vec![(0, usize::MAX); n];
        for (q, &(k, r)) in t_conj.iter().enumerate() {
            if t_inv_conj[r].1 != usize::MAX {
                return bad("t_conj does not permute the cosets");
            }
            // x_q t = t^k x_r  =>  x_r t^-1 = t^-k x_q
            t_inv_conj[r] = (-k, q);
        }
        let spec = Self { m, coset_mult, t_conj, inverse, t_inv_conj };
        spec.audit()?;
        Ok(spec)
    }

    /// ℤ = ⟨t⟩ itself.
    pub fn integers() -> Self {
        Self::new(0, vec![vec![(0, 0)]], vec![(1, 0)], vec![(0, 0)]).expect("ℤ spec is valid")
    }

    /// D∞ = ⟨a, b | a², b²⟩ with `t = ab` and `x_1 = a`.
    pub fn infinite_dihedral() -> Self {
        Self::new(1, vec![vec![(0, 0), (0, 1)], vec![(0, 1), (0, 0)]], vec![(1, 0), (-1, 1)], vec![(0, 0), (0, 1)])
            .expect("D∞ spec is valid")
    }

    /// ℤ × ℤ_n with `x_q` the `q`-th power of the ℤ_n generator.
    pub fn z_times_cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let coset_mult = (0..n).map(|q| (0..n).map(|i| (0, (q + i) % n)).collect()).collect();
        let t_conj = (0..n).map(|q| (1, q)).collect();
        let inverse = (0..n).map(|q| (0, (n - q) % n)).collect();
        Self::new(n - 1, coset_mult, t_conj, inverse).expect("ℤ × ℤ_n spec is valid")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coset_mult(&self, q: usize, i: usize) -> (i64, usize) {
        self.coset_mult[q][i]
    }

    pub fn t_conj(&self, q: usize) -> (i64, usize) {
        self.t_conj[q]
    }

    pub fn coset_inverse(&self, q: usize) -> (i64, usize) {
        self.inverse[q]
    }

    pub fn t(&self) -> HElement {
        HElement::new(1, 0)
    }

    pub fn x(&self, i: usize) -> HElement {
        HElement::new(0, i)
    }

    /// `x_q t^n = t^k x_r`, returned as `(k, r)`.
    pub fn push_t(&self, q: usize, n: i64) -> (i64, usize) {
        let (table, steps) = if n >= 0 { (&self.t_conj, n) } else { (&self.t_inv_conj, -n) };
        // walk the cycle of q once, then jump whole cycles
        let mut cycle_k = 0;
        let mut cur = q;
        let mut len = 0i64;
        loop {
            let (k, r) = table[cur];
            cycle_k += k;
            cur = r;
            len += 1;
            if cur == q {
                break;
            }
        }
        let (whole, rest) = (steps / len, steps % len);
        let mut k_total = whole * cycle_k;
        let mut cur = q;
        for _ in 0..rest {
            let (k, r) = table[cur];
            k_total += k;
            cur = r;
        }
        (k_total, cur)
    }

    pub fn mult(&self, a: HElement, b: HElement) -> HElement {
        let (k1, q1) = self.push_t(a.q, b.k);
        let (k2, r) = self.coset_mult[q1][b.q];
        HElement::new(a.k + k1 + k2, r)
    }

    pub fn inverse(&self, h: HElement) -> HElement {
        let (k, r) = self.inverse[h.q];
        self.mult(HElement::new(k, r), HElement::new(-h.k, 0))
    }

    /// Elements `t^k x_q` with `|k| <= radius`.
    pub fn window(&self, radius: i64) -> Vec<HElement> {
        (-radius..=radius).flat_map(|k| (0..=self.m).map(move |q| HElement::new(k, q))).collect()
    }

    /// Associativity and inverse laws on the audit window.
    fn audit(&self) -> Result<(), GroupError> {
        let window = self.window(AUDIT_RADIUS);
        // associativity first: a broken table usually breaks inverses too,
        // and the triple is the more useful counterexample
        for &a in &window {
            for &b in &window {
                let ab = self.mult(a, b);
                for &c in &window {
                    if self.mult(ab, c) != self.mult(a, self.mult(b, c)) {
                        return Err(GroupError::NotAssociative { triple: format!("({a}, {b}, {c})") });
                    }
                }
            }
        }
        for &a in &window {
            let inv = self.inverse(a);
            if self.mult(a, inv) != HElement::IDENTITY || self.mult(inv, a) != HElement::IDENTITY {
                return Err(GroupError::InverseLaw(a.to_string()));
            }
        }
        Ok(())
    }

    pub(crate) fn to_json(&self) -> super::GroupSpecJson {
        let pair = |&(k, r): &(i64, usize)| [k, r as i64];
        super::GroupSpecJson::VirtuallyZ {
            m: self.m,
            coset_mult: self.coset_mult.iter().map(|row| row.iter().map(pair).collect()).collect(),
            t_conj: self.t_conj.iter().map(pair).collect(),
            inverse: self.inverse.iter().map(pair).collect(),
        }
    }
}
