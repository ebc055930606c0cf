//! Conversions between affine subspaces of F2^n, signed-basis
//! polynomials, and matching vector families.
//!
//! The bridge identity: for an offset b and basis u_1..u_d, the
//! polynomial with one signed monomial per ambient coordinate satisfies
//! n - 2*Ham(b + sum y_i u_i) = p((-1)^y) for every y. Subspaces with a
//! unique point in a weight class mod m correspond to OR-representing
//! polynomials, which in turn unfold into matching vector families.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::inv_mod;
use crate::error::{Error, Result};
use crate::gf2::{AffineSubspace, BitVec};
use crate::oracle::count_solutions;
use crate::poly::{is_or_rep_pm1, pm1_value_table, IntPoly};

/// Signed-basis polynomial carrying the subspace: coordinate t
/// contributes the monomial of basis vectors that touch t, signed by
/// the offset bit. Coefficient norm is at most the ambient dimension.
pub fn subspace_to_poly(b: &BitVec, us: &[BitVec]) -> IntPoly {
    let n = b.len();
    for u in us {
        assert_eq!(u.len(), n, "basis vector length must match the offset");
    }
    let mut p = IntPoly::zero(us.len());
    for t in 0..n {
        let mono: Vec<u32> = (0..us.len())
            .filter(|&i| us[i].get(t))
            .map(|i| i as u32)
            .collect();
        let c = if b.get(t) { -1 } else { 1 };
        p.add_term(mono, BigInt::from(c));
    }
    p
}

/// Inverse construction: expand each monomial into |coefficient| many
/// ambient coordinates, negative coefficients setting the offset bit.
/// subspace_to_poly of the result reproduces p exactly.
pub fn poly_to_subspace(p: &IntPoly) -> (BitVec, Vec<BitVec>) {
    let n: usize = p
        .coeffnorm()
        .try_into()
        .expect("coefficient norm fits the address space");
    let d = p.nvars();
    let mut b = BitVec::zeros(n);
    let mut us = vec![BitVec::zeros(n); d];
    let mut t = 0usize;
    for (mono, c) in p.terms() {
        let copies: usize = c.abs().try_into().unwrap();
        for _ in 0..copies {
            if c < &BigInt::zero() {
                b.set(t, true);
            }
            for &i in mono {
                us[i as usize].set(t, true);
            }
            t += 1;
        }
    }
    debug_assert_eq!(t, n);
    (b, us)
}

/// From a subspace holding exactly one point of weight congruent to a
/// mod m (m odd), build an OR representation over the coefficient
/// variables: recenter the bridge polynomial on the unique point and
/// drop the constant n - 2a. Sparsity is at most ambient + 1.
pub fn unique_point_subspace_to_or_poly(
    space: &AffineSubspace,
    a: u32,
    m: u32,
) -> Result<IntPoly> {
    if m < 2 {
        return Err(Error::InvalidModulus(format!("modulus {m} is below 2")));
    }
    if m % 2 == 0 {
        return Err(Error::EvenModulus(m));
    }
    let a = a % m;
    if count_solutions(space, a, m)? != 1 {
        return Err(Error::NotUniquePoint);
    }
    let d = space.dim();
    // Locate the unique coefficient vector by a Gray-code walk.
    let mut point = space.offset.clone();
    let mut code = 0u64;
    let mut star: Option<u64> = None;
    for k in 0..1u64 << d {
        if k > 0 {
            let bit = k.trailing_zeros() as usize;
            point.xor_assign(&space.basis[bit]);
            code ^= 1 << bit;
        }
        if point.count_ones() % m == a {
            star = Some(code);
            break;
        }
    }
    let star = star.expect("counted exactly one matching point");
    let p = subspace_to_poly(&space.offset, &space.basis);
    // Substitute z -> z * z_star: flip the sign of monomials seeing an
    // odd number of set star bits, then remove the constant value the
    // unique point attains.
    let mut f = IntPoly::zero(d);
    for (mono, c) in p.terms() {
        let flips = mono.iter().filter(|&&i| star >> i & 1 == 1).count();
        let c = if flips % 2 == 1 { -c.clone() } else { c.clone() };
        f.add_term(mono.clone(), c);
    }
    f.add_term(vec![], BigInt::from(2 * a as i64 - space.n as i64));
    debug_assert!(f.sparsity() <= space.n + 1);
    assert!(
        is_or_rep_pm1(&f, d, m)?,
        "internal: recentered polynomial failed the OR checker"
    );
    Ok(f)
}

/// Converse: a valid OR representation mod odd m yields a subspace with
/// exactly one point of weight congruent to the returned residue. The
/// ambient dimension is the canonical coefficient norm, at most
/// (m-1) * sparsity.
pub fn or_poly_to_subspace(p: &IntPoly, m: u32) -> Result<(AffineSubspace, u32)> {
    if m < 2 {
        return Err(Error::InvalidModulus(format!("modulus {m} is below 2")));
    }
    if m % 2 == 0 {
        return Err(Error::EvenModulus(m));
    }
    if !is_or_rep_pm1(p, p.nvars(), m)? {
        return Err(Error::NotUniquePoint);
    }
    let q = p.reduce_mod(m);
    let (b, us) = poly_to_subspace(&q);
    let n = b.len();
    // A valid representation cannot produce dependent columns: a kernel
    // vector y would make p vanish at a second point.
    let space = AffineSubspace::new(n, b, us).map_err(|_| Error::NotUniquePoint)?;
    let a = (n as u64 % m as u64 * inv_mod(2, m as u64) % m as u64) as u32;
    debug_assert_eq!(count_solutions(&space, a, m).unwrap(), 1);
    Ok((space, a))
}

/// Vectors over Z/m in matched pairs: the inner product of u_i with v_j
/// vanishes exactly on the diagonal.
#[derive(Debug, Clone)]
pub struct MatchingVectorFamily {
    pub modulus: u32,
    pub us: Vec<Vec<u32>>,
    pub vs: Vec<Vec<u32>>,
}

impl MatchingVectorFamily {
    pub fn size(&self) -> usize {
        self.us.len()
    }

    pub fn rank(&self) -> usize {
        self.us.first().map(|u| u.len()).unwrap_or(0)
    }

    pub fn inner(&self, i: usize, j: usize) -> u32 {
        let m = self.modulus as u64;
        let s = self.us[i]
            .iter()
            .zip(&self.vs[j])
            .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % m);
        s as u32
    }

    /// Direct check of every pairwise inner product. Quadratic in the
    /// family size times the rank; meant for small families.
    pub fn verify_exhaustive(&self) -> Result<()> {
        if self.us.len() != self.vs.len() {
            return Err(Error::LengthMismatch(
                "matched vector lists differ in size".into(),
            ));
        }
        for i in 0..self.size() {
            for j in 0..self.size() {
                let ip = self.inner(i, j);
                if (i == j) != (ip == 0) {
                    return Err(Error::InvalidSystem(format!(
                        "inner product ({i},{j}) is {ip}"
                    )));
                }
            }
        }
        Ok(())
    }
}

const MVF_MAX_ARITY: usize = 12;

/// Unfold an OR representation on d variables into a family of size 2^d
/// and rank equal to the representation's sparsity: index vectors by
/// sign patterns z, with u_z listing coefficient-weighted monomial
/// values at z and v_z the bare monomial values. Then the inner product
/// of u_z with v_w is the polynomial's value at the componentwise
/// product, which vanishes exactly when z = w.
pub fn mvf_from_or_poly(p: &IntPoly, m: u32) -> Result<MatchingVectorFamily> {
    if m < 2 {
        return Err(Error::InvalidModulus(format!("modulus {m} is below 2")));
    }
    let d = p.nvars();
    if d > MVF_MAX_ARITY {
        return Err(Error::SizeLimit(format!(
            "family construction capped at {MVF_MAX_ARITY} variables, got {d}"
        )));
    }
    if !is_or_rep_pm1(p, d, m)? {
        return Err(Error::InvalidRep(
            "polynomial is not an OR representation for this modulus".into(),
        ));
    }
    let q = p.reduce_mod(m);
    let terms: Vec<(u64, u32)> = q
        .terms()
        .iter()
        .map(|(mono, c)| {
            let mask = mono.iter().fold(0u64, |acc, &v| acc | 1 << v);
            let c: i64 = c.try_into().expect("canonical residue fits");
            (mask, c as u32)
        })
        .collect();
    let n = 1usize << d;
    let mut us = Vec::with_capacity(n);
    let mut vs = Vec::with_capacity(n);
    for y in 0..n as u64 {
        // monomial value at z = (-1)^y: sign by the parity of overlap
        let mut u = Vec::with_capacity(terms.len());
        let mut v = Vec::with_capacity(terms.len());
        for &(mask, c) in &terms {
            let negative = (mask & y).count_ones() % 2 == 1;
            let sign = if negative { m - 1 } else { 1 };
            v.push(sign);
            u.push((c as u64 * sign as u64 % m as u64) as u32);
        }
        us.push(u);
        vs.push(v);
    }
    let fam = MatchingVectorFamily { modulus: m, us, vs };
    // The inner product of u_y and v_w telescopes to the value table at
    // y xor w; checking that table re-proves the invariants without a
    // quadratic pass.
    let vals = pm1_value_table(&q, d, m)?;
    assert!(vals[0] == 0 && vals[1..].iter().all(|&v| v != 0));
    debug_assert!({
        let mut ok = true;
        for (y, w) in [(0usize, 0usize), (1, 0), (n - 1, n / 2), (n / 2, n / 2)] {
            let (y, w) = (y % n, w % n);
            ok &= fam.inner(y, w) as i64 == vals[y ^ w];
        }
        ok
    });
    Ok(fam)
}
