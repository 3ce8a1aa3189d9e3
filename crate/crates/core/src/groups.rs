//! Finite groups stored as full multiplication tables.
//!
//! Every constructor puts the identity at index 0, and every table that
//! enters the crate from outside goes through [`validate_table`].

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Why a multiplication table is not a group (or why a constructor refused).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group order must be positive")]
    EmptyGroup,
    #[error("table row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("entry table[{row}][{col}] = {value} is out of range")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("element 0 is not an identity: 0*{x} or {x}*0 differs from {x}")]
    IdentityNotZero { x: usize },
    #[error("element {element} has no inverse")]
    NoInverse { element: usize },
    #[error("associativity fails for ({a}*{b})*{c}")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("group is not abelian: {a}*{b} != {b}*{a}")]
    NotAbelian { a: usize, b: usize },
    #[error("multiplication by {r} is not an automorphism of Z_{m} of order dividing {k}")]
    BadAction { m: usize, k: usize, r: i64 },
    #[error("element {element} is out of range for a group of order {order}")]
    ElementOutOfRange { element: usize, order: usize },
}

/// A finite group given by its multiplication table; `table[a][b] = a·b`.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
    name: String,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("order", &self.order)
            .finish()
    }
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Index of the identity element (always 0).
    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// Row `a` of the table: `row(a)[b] = a·b`.
    pub fn row(&self, a: usize) -> &[usize] {
        &self.table[a * self.order..(a + 1) * self.order]
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| self.row(a).to_vec()).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Multiset of element orders, as `order -> count`.
    pub fn order_profile(&self) -> BTreeMap<usize, usize> {
        let mut profile = BTreeMap::new();
        for a in self.elements() {
            *profile.entry(self.element_order(a)).or_insert(0) += 1;
        }
        profile
    }

    /// Returns a witness pair `(a, b)` with `ab != ba`, if any.
    pub fn non_commuting_pair(&self) -> Option<(usize, usize)> {
        for a in self.elements() {
            for b in a + 1..self.order {
                if self.mul(a, b) != self.mul(b, a) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_abelian(&self) -> bool {
        self.non_commuting_pair().is_none()
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut elems = vec![0];
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    elems.push(y);
                }
            }
            i += 1;
        }
        elems.sort_unstable();
        elems
    }
}

/// Is `is_abelian` as a free function, mirroring the other operations.
pub fn is_abelian(group: &FiniteGroup) -> bool {
    group.is_abelian()
}

/// Checks the group axioms on a square table with identity at index 0.
///
/// Checks run in the order shape, range, identity, inverses, associativity,
/// and the first failure is reported with its witnesses.
pub fn validate_table(rows: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
    let n = rows.len();
    if n == 0 {
        return Err(GroupError::EmptyGroup);
    }
    let mut table = Vec::with_capacity(n * n);
    for (row, entries) in rows.iter().enumerate() {
        if entries.len() != n {
            return Err(GroupError::NotSquare { row, len: entries.len(), expected: n });
        }
        for (col, &value) in entries.iter().enumerate() {
            if value >= n {
                return Err(GroupError::OutOfRange { row, col, value });
            }
        }
        table.extend_from_slice(entries);
    }
    from_flat_table(n, table, String::from("G"))
}

fn from_flat_table(n: usize, table: Vec<usize>, name: String) -> Result<FiniteGroup, GroupError> {
    let at = |a: usize, b: usize| table[a * n + b];
    for x in 0..n {
        if at(0, x) != x || at(x, 0) != x {
            return Err(GroupError::IdentityNotZero { x });
        }
    }
    let mut inv = vec![usize::MAX; n];
    for x in 0..n {
        match (0..n).find(|&y| at(x, y) == 0 && at(y, x) == 0) {
            Some(y) => inv[x] = y,
            None => return Err(GroupError::NoInverse { element: x }),
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = at(a, b);
            for c in 0..n {
                if at(ab, c) != at(a, at(b, c)) {
                    return Err(GroupError::NotAssociative { a, b, c });
                }
            }
        }
    }
    Ok(FiniteGroup { order: n, table, inv, name })
}

/// Builds a group from a closure computing products; the result is validated.
fn build(n: usize, name: String, product: impl Fn(usize, usize) -> usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::EmptyGroup);
    }
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            table.push(product(a, b));
        }
    }
    from_flat_table(n, table, name)
}

/// The cyclic group Z_n with elements `0..n` under addition mod n.
pub fn cyclic(n: usize) -> Result<FiniteGroup, GroupError> {
    build(n, format!("Z{n}"), |a, b| (a + b) % n)
}

/// Componentwise product; element `(g, h)` has index `g * |H| + h`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    let hn = h.order();
    build(g.order() * hn, format!("{}x{}", g.name(), h.name()), |a, b| {
        g.mul(a / hn, b / hn) * hn + h.mul(a % hn, b % hn)
    })
    .expect("direct product of groups is a group")
}

/// Generalized dihedral group of an abelian group `A`.
///
/// Element `(a, e)` has index `e * |A| + a`; `(a,0)(b,f) = (ab, f)` and
/// `(a,1)(b,f) = (ab⁻¹, 1+f)`.
pub fn generalized_dihedral(base: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
    if let Some((a, b)) = base.non_commuting_pair() {
        return Err(GroupError::NotAbelian { a, b });
    }
    let n = base.order();
    build(2 * n, format!("Dih({})", base.name()), |x, y| {
        let (a, e) = (x % n, x / n);
        let (b, f) = (y % n, y / n);
        let b = if e == 1 { base.inv(b) } else { b };
        ((e + f) % 2) * n + base.mul(a, b)
    })
}

fn pow_mod(base: i64, mut exp: u64, m: i64) -> i64 {
    let mut result = 1 % m;
    let mut b = base.rem_euclid(m);
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Semidirect product Z_m ⋊ Z_k where the generator of Z_k acts on Z_m as
/// multiplication by `r`.
///
/// Element `(t, j)` has index `j * m + t` and
/// `(t1, j1)(t2, j2) = (t1 + r^j1 t2, j1 + j2)`.
pub fn semidirect_cyclic(m: usize, k: usize, r: i64) -> Result<FiniteGroup, GroupError> {
    if m == 0 || k == 0 {
        return Err(GroupError::EmptyGroup);
    }
    let mi = m as i64;
    if gcd(r, mi) != 1 || pow_mod(r, k as u64, mi) != 1 % mi {
        return Err(GroupError::BadAction { m, k, r });
    }
    let powers: Vec<usize> = (0..k).map(|j| pow_mod(r, j as u64, mi) as usize).collect();
    build(m * k, format!("Z{m}:{k}[{r}]"), |x, y| {
        let (t1, j1) = (x % m, x / m);
        let (t2, j2) = (y % m, y / m);
        ((j1 + j2) % k) * m + (t1 + powers[j1] * t2) % m
    })
}

/// A duplicate-free, ascending set of element indices of some group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSubset {
    group_order: usize,
    members: Vec<usize>,
}

impl ElementSubset {
    /// Sorts and deduplicates `members`; rejects indices outside the group.
    pub fn new(group: &FiniteGroup, members: impl IntoIterator<Item = usize>) -> Result<Self, GroupError> {
        let order = group.order();
        let mut members: Vec<usize> = members.into_iter().collect();
        if let Some(&element) = members.iter().find(|&&x| x >= order) {
            return Err(GroupError::ElementOutOfRange { element, order });
        }
        members.sort_unstable();
        members.dedup();
        Ok(ElementSubset { group_order: order, members })
    }

    pub fn empty(group: &FiniteGroup) -> Self {
        ElementSubset { group_order: group.order(), members: Vec::new() }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_inverse_closed(&self, group: &FiniteGroup) -> bool {
        self.members.iter().all(|&x| self.contains(group.inv(x)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_small_cases() {
        let z1 = cyclic(1).unwrap();
        assert_eq!(z1.table_rows(), vec![vec![0]]);
        let z3 = cyclic(3).unwrap();
        assert_eq!(z3.mul(1, 2), 0);
        assert_eq!(z3.inv(1), 2);
        let z5 = cyclic(5).unwrap();
        assert_eq!(z5.inv(2), 3);
        assert_eq!(z5.mul(4, 4), 3);
        assert_eq!(cyclic(0), Err(GroupError::EmptyGroup));
    }

    #[test]
    fn direct_product_cases() {
        let z1 = cyclic(1).unwrap();
        let z3 = cyclic(3).unwrap();
        // trivial first factor keeps the pair-lexicographic indices of Z3
        assert_eq!(direct_product(&z1, &z3).table_rows(), z3.table_rows());
        let g = direct_product(&cyclic(10).unwrap(), &cyclic(2).unwrap());
        assert_eq!(g.order(), 20);
        assert!(g.is_abelian());
        let klein = direct_product(&cyclic(2).unwrap(), &cyclic(2).unwrap());
        assert!((1..4).all(|x| klein.inv(x) == x));
    }

    #[test]
    fn generalized_dihedral_cases() {
        let z2 = generalized_dihedral(&cyclic(1).unwrap()).unwrap();
        assert_eq!(z2.table_rows(), cyclic(2).unwrap().table_rows());
        let d5 = generalized_dihedral(&cyclic(5).unwrap()).unwrap();
        assert_eq!(d5.order(), 10);
        // brute-force commutativity scan
        let witness = (0..10)
            .flat_map(|a| (0..10).map(move |b| (a, b)))
            .find(|&(a, b)| d5.mul(a, b) != d5.mul(b, a));
        assert!(witness.is_some());
        assert!(!is_abelian(&d5));
        let klein = direct_product(&cyclic(2).unwrap(), &cyclic(2).unwrap());
        let e8 = generalized_dihedral(&klein).unwrap();
        assert_eq!(e8.order(), 8);
        assert!(e8.is_abelian());
        assert!(e8.elements().all(|x| e8.mul(x, x) == 0));
    }

    #[test]
    fn generalized_dihedral_rejects_nonabelian() {
        let d3 = generalized_dihedral(&cyclic(3).unwrap()).unwrap();
        assert!(matches!(generalized_dihedral(&d3), Err(GroupError::NotAbelian { .. })));
    }

    #[test]
    fn generalized_dihedral_abelian_iff_exponent_two() {
        for base in [cyclic(1), cyclic(2), cyclic(3), cyclic(4), cyclic(6)] {
            let base = base.unwrap();
            let exp2 = base.elements().all(|x| base.mul(x, x) == 0);
            assert_eq!(generalized_dihedral(&base).unwrap().is_abelian(), exp2);
        }
    }

    #[test]
    fn semidirect_cases() {
        let f20 = semidirect_cyclic(5, 4, 2).unwrap();
        assert_eq!(f20.order(), 20);
        assert!(!f20.is_abelian());
        let trivial = semidirect_cyclic(4, 3, 1).unwrap();
        assert_eq!(trivial.order(), 12);
        assert!(trivial.is_abelian());
        let g = semidirect_cyclic(10, 4, 3).unwrap();
        assert_eq!(g.order(), 40);
        assert!(validate_table(&g.table_rows()).is_ok());
        assert!(matches!(semidirect_cyclic(5, 3, 2), Err(GroupError::BadAction { .. })));
        assert!(matches!(semidirect_cyclic(6, 2, 2), Err(GroupError::BadAction { .. })));
        // negative multipliers reduce mod m
        assert_eq!(semidirect_cyclic(5, 4, -2).unwrap().order(), 20);
    }

    #[test]
    fn semidirect_with_trivial_action_is_direct_product() {
        let sd = semidirect_cyclic(3, 4, 1).unwrap();
        // index j*m + t vs direct product index t*k + j: compare via relabeling
        let dp = direct_product(&cyclic(3).unwrap(), &cyclic(4).unwrap());
        let relabel = |x: usize| (x % 3) * 4 + x / 3;
        for a in 0..12 {
            for b in 0..12 {
                assert_eq!(relabel(sd.mul(a, b)), dp.mul(relabel(a), relabel(b)));
            }
        }
    }

    #[test]
    fn validate_table_cases() {
        let z4 = cyclic(4).unwrap();
        assert!(validate_table(&z4.table_rows()).is_ok());
        assert_eq!(
            validate_table(&[vec![0, 1], vec![1, 1]]),
            Err(GroupError::NoInverse { element: 1 })
        );
        assert!(matches!(
            validate_table(&[vec![0, 1], vec![1]]),
            Err(GroupError::NotSquare { row: 1, .. })
        ));
        assert!(matches!(
            validate_table(&[vec![0, 2], vec![1, 0]]),
            Err(GroupError::OutOfRange { row: 0, col: 1, value: 2 })
        ));
        assert!(matches!(
            validate_table(&[vec![1, 0], vec![0, 1]]),
            Err(GroupError::IdentityNotZero { .. })
        ));
        // a loop with identity and inverses that is not associative
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(validate_table(&loop5), Err(GroupError::NotAssociative { .. })));
    }

    #[test]
    fn element_subsets() {
        let z6 = cyclic(6).unwrap();
        let s = ElementSubset::new(&z6, [4, 2, 2, 3]).unwrap();
        assert_eq!(s.members(), &[2, 3, 4]);
        assert!(s.is_inverse_closed(&z6));
        assert!(!ElementSubset::new(&z6, [1, 2]).unwrap().is_inverse_closed(&z6));
        assert!(ElementSubset::new(&z6, [6]).is_err());
    }
}
