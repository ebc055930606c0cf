//! Bit vectors and affine subspaces over GF(2).
//!
//! Everything here is word-packed (u64 limbs). The sizes we care about
//! are small (hundreds of bits, occasionally a few thousand after a
//! reduction), so the linear algebra is plain Gaussian elimination with
//! no pivot tricks.

use crate::error::{Error, Result};

/// Fixed-length bit vector backed by u64 words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    nbits: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.nbits {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl BitVec {
    pub fn zeros(nbits: usize) -> Self {
        BitVec {
            nbits,
            words: vec![0; nbits.div_ceil(64)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Low `nbits` of `value`, bit i of the integer becoming coordinate i.
    pub fn from_u64(value: u64, nbits: usize) -> Self {
        assert!(nbits <= 64);
        let mut v = BitVec::zeros(nbits);
        if nbits > 0 {
            let mask = if nbits == 64 { !0 } else { (1u64 << nbits) - 1 };
            if !v.words.is_empty() {
                v.words[0] = value & mask;
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.nbits
    }

    pub fn is_empty(&self) -> bool {
        self.nbits == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.nbits);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.nbits);
        let w = &mut self.words[i / 64];
        if b {
            *w |= 1 << (i % 64);
        } else {
            *w &= !(1 << (i % 64));
        }
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Parity of the overlap with `other` (the GF(2) inner product).
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.nbits, other.nbits);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nbits).filter(move |&i| self.get(i))
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.nbits).map(|i| self.get(i)).collect()
    }
}

/// Affine subspace `offset + span(basis)` of GF(2)^n.
///
/// The basis vectors are kept as given (not reduced); `dim` is their
/// count, and constructors are expected to hand in an independent set.
/// `validate` checks that.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSubspace {
    pub n: usize,
    pub offset: BitVec,
    pub basis: Vec<BitVec>,
}

impl AffineSubspace {
    pub fn new(n: usize, offset: BitVec, basis: Vec<BitVec>) -> Result<Self> {
        if offset.len() != n || basis.iter().any(|b| b.len() != n) {
            return Err(Error::LengthMismatch(format!(
                "subspace vectors must all have length {n}"
            )));
        }
        let s = AffineSubspace { n, offset, basis };
        if rank(&s.basis) != s.basis.len() {
            return Err(Error::InvalidSystem(
                "basis vectors are linearly dependent".into(),
            ));
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Point for a coefficient choice, one bit per basis vector.
    pub fn point(&self, coeffs: &BitVec) -> BitVec {
        debug_assert_eq!(coeffs.len(), self.basis.len());
        let mut p = self.offset.clone();
        for i in coeffs.iter_ones() {
            p.xor_assign(&self.basis[i]);
        }
        p
    }

    pub fn contains(&self, point: &BitVec) -> bool {
        if point.len() != self.n {
            return false;
        }
        let mut d = point.clone();
        d.xor_assign(&self.offset);
        in_span(&self.basis, &d)
    }
}

/// Rank of a list of vectors.
pub fn rank(vectors: &[BitVec]) -> usize {
    let mut rows: Vec<BitVec> = Vec::new();
    'outer: for v in vectors {
        let mut v = v.clone();
        for r in &rows {
            if let Some(p) = r.first_one() {
                if v.get(p) {
                    v.xor_assign(r);
                }
            }
        }
        if v.is_zero() {
            continue 'outer;
        }
        rows.push(v);
    }
    rows.len()
}

fn in_span(basis: &[BitVec], v: &BitVec) -> bool {
    // Reduce v against an eliminated copy of the basis.
    let mut rows: Vec<BitVec> = Vec::new();
    for b in basis {
        let mut b = b.clone();
        for r in &rows {
            if let Some(p) = r.first_one() {
                if b.get(p) {
                    b.xor_assign(r);
                }
            }
        }
        if !b.is_zero() {
            rows.push(b);
        }
    }
    let mut v = v.clone();
    for r in &rows {
        if let Some(p) = r.first_one() {
            if v.get(p) {
                v.xor_assign(r);
            }
        }
    }
    v.is_zero()
}

/// Solve the linear system given by `rows` (coefficient vector, rhs bit)
/// over n variables. Returns the solution set as an affine subspace, or
/// None if the system is inconsistent.
pub fn solve_linear_system(n: usize, rows: &[(BitVec, bool)]) -> Option<AffineSubspace> {
    // Augmented elimination: keep (row, rhs) pairs in echelon form.
    let mut ech: Vec<(BitVec, bool)> = Vec::new();
    for (row, rhs) in rows {
        let mut row = row.clone();
        let mut rhs = *rhs;
        debug_assert_eq!(row.len(), n);
        for (e, eb) in &ech {
            if let Some(p) = e.first_one() {
                if row.get(p) {
                    row.xor_assign(e);
                    rhs ^= eb;
                }
            }
        }
        if row.is_zero() {
            if rhs {
                return None; // 0 = 1
            }
            continue;
        }
        ech.push((row, rhs));
    }
    // Back-substitute so each pivot appears in exactly one row.
    ech.sort_by_key(|(r, _)| r.first_one());
    for i in (0..ech.len()).rev() {
        let (row_i, rhs_i) = ech[i].clone();
        let p = row_i.first_one().unwrap();
        for (row_j, rhs_j) in ech.iter_mut().take(i) {
            if row_j.get(p) {
                row_j.xor_assign(&row_i);
                *rhs_j ^= rhs_i;
            }
        }
    }
    let pivots: Vec<usize> = ech.iter().map(|(r, _)| r.first_one().unwrap()).collect();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; n];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    // Particular solution: free variables zero, pivots take their rhs.
    let mut offset = BitVec::zeros(n);
    for ((row, rhs), &p) in ech.iter().zip(&pivots) {
        debug_assert!(row.get(p));
        if *rhs {
            offset.set(p, true);
        }
    }
    // One basis vector per free variable.
    let mut basis = Vec::new();
    for f in 0..n {
        if is_pivot[f] {
            continue;
        }
        let mut b = BitVec::zeros(n);
        b.set(f, true);
        for ((row, _), &p) in ech.iter().zip(&pivots) {
            if row.get(f) {
                b.set(p, true);
            }
        }
        basis.push(b);
    }
    Some(AffineSubspace { n, offset, basis })
}

/// Basis of the null space of the matrix whose rows are `rows`:
/// all w with <row, w> = 0 for every row.
pub fn kernel_basis(n: usize, rows: &[BitVec]) -> Vec<BitVec> {
    let hom: Vec<(BitVec, bool)> = rows.iter().map(|r| (r.clone(), false)).collect();
    solve_linear_system(n, &hom)
        .expect("homogeneous system is always consistent")
        .basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVec {
        BitVec::from_bools(&s.chars().map(|c| c == '1').collect::<Vec<_>>())
    }

    #[test]
    fn bitvec_basics() {
        let mut v = BitVec::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.count_ones(), 3);
        assert_eq!(v.first_one(), Some(0));
        v.set(0, false);
        assert_eq!(v.first_one(), Some(64));
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![64, 129]);
    }

    #[test]
    fn dot_product_parity() {
        assert!(bv("110").dot(&bv("100")));
        assert!(!bv("110").dot(&bv("110")));
        assert!(!bv("000").dot(&bv("111")));
    }

    #[test]
    fn solve_simple_system() {
        // x0 + x1 = 1, x1 + x2 = 0 over 3 vars
        let rows = vec![(bv("110"), true), (bv("011"), false)];
        let s = solve_linear_system(3, &rows).unwrap();
        assert_eq!(s.dim(), 1);
        for c in 0..2u64 {
            let p = s.point(&BitVec::from_u64(c, 1));
            assert!(p.get(0) ^ p.get(1));
            assert!(!(p.get(1) ^ p.get(2)));
        }
    }

    #[test]
    fn inconsistent_system() {
        let rows = vec![(bv("110"), true), (bv("110"), false)];
        assert!(solve_linear_system(3, &rows).is_none());
    }

    #[test]
    fn kernel_is_orthogonal() {
        let rows = vec![bv("1100"), bv("0110")];
        let ker = kernel_basis(4, &rows);
        assert_eq!(ker.len(), 2);
        for w in &ker {
            for r in &rows {
                assert!(!w.dot(r));
            }
        }
    }

    #[test]
    fn rank_and_membership() {
        let basis = vec![bv("1010"), bv("0110")];
        assert_eq!(rank(&basis), 2);
        let s = AffineSubspace::new(4, bv("0001"), basis).unwrap();
        assert!(s.contains(&bv("0001")));
        assert!(s.contains(&bv("1011")));
        assert!(!s.contains(&bv("1111")));
        assert!(AffineSubspace::new(4, bv("0000"), vec![bv("1010"), bv("1010")]).is_err());
    }
}
