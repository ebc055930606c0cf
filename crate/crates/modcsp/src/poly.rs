//! Sparse multilinear integer polynomials, representation checkers, and
//! the NAND / OR construction zoo.
//!
//! Construction code never multiplies polynomials symbolically. A
//! multilinear polynomial on n variables is determined by its value
//! table on {0,1}^n (or on {-1,1}^n), so constructions build the table
//! they want pointwise and interpolate coefficients back with a Moebius
//! or Walsh-Hadamard pass. At the arities involved (n <= 20) this is
//! both faster and harder to get wrong than term-by-term algebra.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::arith::{crt_combine, factorize, inv_mod, is_prime};
use crate::error::{Error, Result};

/// Which domain the variables range over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    ZeroOne,
    PlusMinusOne,
}

/// Multilinear polynomial with integer coefficients. Monomials are
/// sorted variable-index vectors; the constant term is the empty
/// monomial. No zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        IntPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = IntPoly::zero(nvars);
        p.add_term(vec![], c.into());
        p
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>,
    ) -> Result<Self> {
        let mut p = IntPoly::zero(nvars);
        for (mono, c) in terms {
            for w in mono.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::InvalidRep(
                        "monomial variables must be strictly increasing".into(),
                    ));
                }
            }
            if let Some(&last) = mono.last() {
                if last as usize >= nvars {
                    return Err(Error::InvalidRep(format!(
                        "monomial variable {last} out of range for {nvars} variables"
                    )));
                }
            }
            p.add_term(mono, c);
        }
        Ok(p)
    }

    /// Add a coefficient onto a monomial, keeping the no-zeros invariant.
    pub fn add_term(&mut self, mono: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of monomials with non-zero coefficient.
    pub fn sparsity(&self) -> usize {
        self.terms.len()
    }

    /// Largest monomial size.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.len()).max().unwrap_or(0)
    }

    /// Sum of absolute coefficient values.
    pub fn coeffnorm(&self) -> BigUint {
        let mut total = BigUint::zero();
        for c in self.terms.values() {
            total += c.abs().to_biguint().unwrap();
        }
        total
    }

    /// Evaluate at a point of the given basis, optionally reducing mod m
    /// (reduced results are canonical in [0, m)).
    pub fn eval(&self, point: &[i64], basis: Basis, modulus: Option<u32>) -> Result<BigInt> {
        if point.len() != self.nvars {
            return Err(Error::BasisMismatch(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        for &v in point {
            let ok = match basis {
                Basis::ZeroOne => v == 0 || v == 1,
                Basis::PlusMinusOne => v == -1 || v == 1,
            };
            if !ok {
                return Err(Error::BasisMismatch(format!(
                    "coordinate {v} not in the {basis:?} domain"
                )));
            }
        }
        let mut acc = BigInt::zero();
        for (mono, c) in &self.terms {
            let mut sign = 1i64;
            let mut zero = false;
            for &v in mono {
                match point[v as usize] {
                    0 => {
                        zero = true;
                        break;
                    }
                    -1 => sign = -sign,
                    _ => {}
                }
            }
            if !zero {
                acc += c * sign;
            }
        }
        if let Some(m) = modulus {
            let m = BigInt::from(m);
            acc = ((acc % &m) + &m) % &m;
        }
        Ok(acc)
    }

    /// Coefficients reduced canonically into [0, m), zeros dropped.
    pub fn reduce_mod(&self, m: u32) -> IntPoly {
        let mb = BigInt::from(m);
        let mut out = IntPoly::zero(self.nvars);
        for (mono, c) in &self.terms {
            let r = ((c % &mb) + &mb) % &mb;
            out.add_term(mono.clone(), r);
        }
        out
    }

    /// Same polynomial declared over a wider variable set.
    pub fn with_nvars(&self, nvars: usize) -> Result<IntPoly> {
        if self.terms.keys().any(|m| {
            m.last().map(|&l| l as usize >= nvars).unwrap_or(false)
        }) {
            return Err(Error::InvalidRep(
                "cannot shrink below a used variable".into(),
            ));
        }
        Ok(IntPoly {
            nvars,
            terms: self.terms.clone(),
        })
    }
}

fn mono_from_mask(mut mask: u64) -> Vec<u32> {
    let mut m = Vec::new();
    while mask != 0 {
        let b = mask.trailing_zeros();
        m.push(b);
        mask &= mask - 1;
    }
    m
}

pub(crate) fn mask_from_mono(mono: &[u32]) -> u64 {
    mono.iter().fold(0u64, |acc, &v| acc | 1 << v)
}

// ---------------------------------------------------------------------
// Dense transforms between value tables and coefficients.

/// In-place subset-sum (zeta) transform mod m.
fn zeta_01_mod(vals: &mut [i64], n: usize, m: i64) {
    for i in 0..n {
        let bit = 1usize << i;
        for mask in 0..vals.len() {
            if mask & bit != 0 {
                vals[mask] = (vals[mask] + vals[mask ^ bit]) % m;
            }
        }
    }
}

/// In-place Moebius (inverse zeta) transform mod m.
fn mobius_01_mod(vals: &mut [i64], n: usize, m: i64) {
    for i in 0..n {
        let bit = 1usize << i;
        for mask in 0..vals.len() {
            if mask & bit != 0 {
                vals[mask] = (vals[mask] - vals[mask ^ bit]).rem_euclid(m);
            }
        }
    }
}

/// In-place exact integer Moebius transform.
fn mobius_01_exact(vals: &mut [i128], n: usize) {
    for i in 0..n {
        let bit = 1usize << i;
        for mask in 0..vals.len() {
            if mask & bit != 0 {
                vals[mask] -= vals[mask ^ bit];
            }
        }
    }
}

/// In-place Walsh-Hadamard transform (unnormalized, self-inverse up to
/// a factor 2^n).
fn wht_i128(vals: &mut [i128], n: usize) {
    for i in 0..n {
        let bit = 1usize << i;
        for mask in 0..vals.len() {
            if mask & bit == 0 {
                let (a, b) = (vals[mask], vals[mask | bit]);
                vals[mask] = a + b;
                vals[mask | bit] = a - b;
            }
        }
    }
}

fn wht_mod(vals: &mut [i64], n: usize, m: i64) {
    for i in 0..n {
        let bit = 1usize << i;
        for mask in 0..vals.len() {
            if mask & bit == 0 {
                let (a, b) = (vals[mask], vals[mask | bit]);
                vals[mask] = (a + b) % m;
                vals[mask | bit] = (a - b).rem_euclid(m);
            }
        }
    }
}

/// Multilinear polynomial (coefficients canonical in [0, m)) whose value
/// on {0,1}^n at index-mask x equals vals[x] mod m.
pub fn from_01_value_table(vals: &[i64], n: usize, m: u64) -> IntPoly {
    assert_eq!(vals.len(), 1 << n);
    let mut v: Vec<i64> = vals.iter().map(|&x| x.rem_euclid(m as i64)).collect();
    mobius_01_mod(&mut v, n, m as i64);
    let mut p = IntPoly::zero(n);
    for (mask, &c) in v.iter().enumerate() {
        if c != 0 {
            p.add_term(mono_from_mask(mask as u64), BigInt::from(c));
        }
    }
    p
}

/// Exact integer version: the unique multilinear polynomial over Z with
/// the given {0,1}^n value table.
pub fn from_01_value_table_exact(vals: &[i128], n: usize) -> IntPoly {
    assert_eq!(vals.len(), 1 << n);
    let mut v = vals.to_vec();
    mobius_01_exact(&mut v, n);
    let mut p = IntPoly::zero(n);
    for (mask, &c) in v.iter().enumerate() {
        if c != 0 {
            p.add_term(mono_from_mask(mask as u64), BigInt::from(c));
        }
    }
    p
}

/// Multilinear polynomial mod odd m matching a {-1,1}^n value table;
/// index masks mark the coordinates equal to -1. Needs odd m because the
/// interpolation divides by 2^n.
pub fn from_pm1_value_table_mod_odd(vals: &[i64], n: usize, m: u64) -> IntPoly {
    assert_eq!(vals.len(), 1 << n);
    assert!(m % 2 == 1, "interpolation over the signed basis needs odd modulus");
    let mut v: Vec<i64> = vals.iter().map(|&x| x.rem_euclid(m as i64)).collect();
    wht_mod(&mut v, n, m as i64);
    let inv = inv_mod(
        {
            let mut t = 1u64;
            for _ in 0..n {
                t = (t * 2) % m;
            }
            t
        },
        m,
    ) as i64;
    let mut p = IntPoly::zero(n);
    for (mask, &c) in v.iter().enumerate() {
        let c = (c % m as i64 * inv).rem_euclid(m as i64);
        if c != 0 {
            p.add_term(mono_from_mask(mask as u64), BigInt::from(c));
        }
    }
    p
}

/// Exact signed-basis interpolation; the table must come from an actual
/// integer-coefficient multilinear polynomial so the division by 2^n is
/// exact (asserted).
pub fn from_pm1_value_table_exact(vals: &[i128], n: usize) -> IntPoly {
    assert_eq!(vals.len(), 1 << n);
    let mut v = vals.to_vec();
    wht_i128(&mut v, n);
    let div = 1i128 << n;
    let mut p = IntPoly::zero(n);
    for (mask, &c) in v.iter().enumerate() {
        assert!(c % div == 0, "value table is not integer-multilinear");
        let c = c / div;
        if c != 0 {
            p.add_term(mono_from_mask(mask as u64), BigInt::from(c));
        }
    }
    p
}

// ---------------------------------------------------------------------
// Representation checkers.

const CHECKER_MAX_ARITY: usize = 24;

fn dense_coeffs_mod(p: &IntPoly, d: usize, m: u32) -> Result<Vec<i64>> {
    if d > CHECKER_MAX_ARITY {
        return Err(Error::SizeLimit(format!(
            "representation checks capped at arity {CHECKER_MAX_ARITY}, got {d}"
        )));
    }
    if m < 2 {
        return Err(Error::InvalidModulus(format!("modulus {m} is below 2")));
    }
    let mut dense = vec![0i64; 1 << d];
    let mb = BigInt::from(m);
    for (mono, c) in p.terms() {
        if let Some(&last) = mono.last() {
            if last as usize >= d {
                return Err(Error::BasisMismatch(format!(
                    "monomial uses variable {last}, check arity is {d}"
                )));
            }
        }
        let r = ((c % &mb) + &mb) % &mb;
        let r: i64 = r.try_into().expect("reduced coefficient fits i64");
        let mask = mask_from_mono(mono) as usize;
        dense[mask] = (dense[mask] + r) % m as i64;
    }
    Ok(dense)
}

/// Does p vanish mod m exactly on the all-ones point of {0,1}^d?
/// That is the value pattern of NAND: zero iff every input is 1.
pub fn is_nand_rep_01(p: &IntPoly, d: usize, m: u32) -> Result<bool> {
    let mut vals = dense_coeffs_mod(p, d, m)?;
    zeta_01_mod(&mut vals, d, m as i64);
    let full = (1usize << d) - 1;
    if vals[full] != 0 {
        return Ok(false);
    }
    Ok(vals.iter().take(full).all(|&v| v != 0))
}

/// Full value table of p over {-1,1}^d mod m; the index mask marks the
/// coordinates set to -1, so index 0 is the all-ones point.
pub fn pm1_value_table(p: &IntPoly, d: usize, m: u32) -> Result<Vec<i64>> {
    let mut vals = dense_coeffs_mod(p, d, m)?;
    // WHT of the coefficient array gives exactly these values.
    wht_mod(&mut vals, d, m as i64);
    Ok(vals)
}

/// Does p vanish mod m exactly on the all-ones point of {-1,1}^d?
/// That is the value pattern of OR under the convention that -1 encodes
/// a true input: all-ones means every input false, where OR is 0.
pub fn is_or_rep_pm1(p: &IntPoly, d: usize, m: u32) -> Result<bool> {
    let vals = pm1_value_table(p, d, m)?;
    if vals[0] != 0 {
        return Ok(false);
    }
    Ok(vals.iter().skip(1).all(|&v| v != 0))
}

// ---------------------------------------------------------------------
// Indicator polynomials for weight residues.

/// Binomial coefficient mod p by Lucas' theorem.
pub fn lucas_binom(a: u64, b: u64, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let (mut a, mut b) = (a, b);
    let mut out = 1u64;
    while a > 0 || b > 0 {
        let (ai, bi) = (a % p, b % p);
        if bi > ai {
            return Ok(0);
        }
        // C(ai, bi) mod p with ai, bi < p
        let mut c = 1u64;
        for j in 1..=bi {
            let num = (ai - bi + j) % p;
            c = (c as u128 * num as u128 % p as u128) as u64;
            c = (c as u128 * inv_mod(j % p, p) as u128 % p as u128) as u64;
        }
        out = (out as u128 * c as u128 % p as u128) as u64;
        a /= p;
        b /= p;
    }
    Ok(out)
}

const INDICATOR_MAX_ARITY: usize = 16;

/// Shared core without the public arity cap; callers bring their own.
fn residue_indicator_core(p: u64, l: u32, a: u64, n: usize) -> Result<IntPoly> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let pl = (p as u128).checked_pow(l).ok_or_else(|| {
        Error::SizeLimit(format!("p^l overflows: {p}^{l}"))
    })?;
    let vals: Vec<i64> = (0..1usize << n)
        .map(|mask| i64::from((mask.count_ones() as u128 % pl) != (a as u128 % pl)))
        .collect();
    let poly = from_01_value_table(&vals, n, p);
    debug_assert!(poly.degree() as u128 <= pl.saturating_sub(1).min(n as u128));
    Ok(poly)
}

/// Multilinear polynomial mod p over n variables that evaluates to 0
/// exactly when the Hamming weight of the input is congruent to a mod
/// p^l, and to 1 otherwise. Degree at most p^l - 1.
pub fn residue_indicator_poly(p: u64, l: u32, a: u64, n: usize) -> Result<IntPoly> {
    if n > INDICATOR_MAX_ARITY {
        return Err(Error::SizeLimit(format!(
            "indicator construction capped at {INDICATOR_MAX_ARITY} variables, got {n}"
        )));
    }
    residue_indicator_core(p, l, a, n)
}

/// Indicator for a weighted sum: 0 mod p exactly when
/// a_1 x_1 + ... + a_n x_n = a_0 (mod p^k), non-zero otherwise.
/// `weights[0]` is a_0, the rest are the per-variable weights.
pub fn linear_to_prime_poly(weights: &[u64], p: u64, k: u32) -> Result<IntPoly> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if weights.is_empty() {
        return Err(Error::LengthMismatch(
            "need at least the constant weight".into(),
        ));
    }
    let n = weights.len() - 1;
    if n > INDICATOR_MAX_ARITY {
        return Err(Error::SizeLimit(format!(
            "indicator construction capped at {INDICATOR_MAX_ARITY} variables, got {n}"
        )));
    }
    let pk = (p as u128).checked_pow(k).ok_or_else(|| {
        Error::SizeLimit(format!("p^k overflows: {p}^{k}"))
    })?;
    let a0 = weights[0] as u128 % pk;
    let vals: Vec<i64> = (0..1usize << n)
        .map(|mask| {
            let mut s: u128 = 0;
            for (j, &w) in weights[1..].iter().enumerate() {
                if mask >> j & 1 == 1 {
                    s = (s + w as u128) % pk;
                }
            }
            i64::from(s != a0)
        })
        .collect();
    Ok(from_01_value_table(&vals, n, p))
}

// ---------------------------------------------------------------------
// NAND and OR representations.

const CONSTRUCTION_VALIDATE_ARITY: usize = 16;

/// Split 0..d into `parts` contiguous chunks as evenly as possible.
fn chunks(d: usize, parts: usize) -> Vec<Vec<u32>> {
    let base = d / parts;
    let extra = d % parts;
    let mut out = Vec::with_capacity(parts);
    let mut next = 0u32;
    for i in 0..parts {
        let len = base + usize::from(i < extra);
        out.push((next..next + len as u32).collect());
        next += len as u32;
    }
    out
}

/// Partition-based NAND representation over {0,1}: split the inputs into
/// min(m-1, d) blocks and subtract each block's product from the block
/// count. Value is 0 iff all inputs are 1; otherwise it is the number of
/// incomplete blocks, which stays in [1, m-1]. Degree is exactly
/// ceil(d / (m-1)).
pub fn nand_trivial(d: usize, m: u32) -> Result<IntPoly> {
    if m < 2 {
        return Err(Error::InvalidModulus(format!("modulus {m} is below 2")));
    }
    if d == 0 {
        return Err(Error::InvalidRep("arity must be positive".into()));
    }
    let parts = (m as usize - 1).min(d);
    let mut p = IntPoly::zero(d);
    p.add_term(vec![], BigInt::from(parts));
    for chunk in chunks(d, parts) {
        p.add_term(chunk, BigInt::from(-1));
    }
    if d <= CONSTRUCTION_VALIDATE_ARITY {
        assert!(
            is_nand_rep_01(&p, d, m)?,
            "internal: partition NAND failed its checker"
        );
    }
    Ok(p)
}

/// Partition-based OR representation over {-1,1} (with -1 meaning a true
/// input) for odd m: sum over blocks of 1 - 2^-|block| * prod(1 + z_i),
/// with coefficients canonical in [0, m). Value is 0 mod m iff every
/// input is false. Degree is exactly ceil(d / (m-1)).
pub fn or_trivial_pm1(d: usize, m: u32) -> Result<IntPoly> {
    if m < 2 {
        return Err(Error::InvalidModulus(format!("modulus {m} is below 2")));
    }
    if m % 2 == 0 {
        return Err(Error::EvenModulus(m));
    }
    if d == 0 {
        return Err(Error::InvalidRep("arity must be positive".into()));
    }
    let parts = (m as usize - 1).min(d);
    let m64 = m as u64;
    let inv2 = inv_mod(2, m64);
    let mut p = IntPoly::zero(d);
    for chunk in chunks(d, parts) {
        // inv2^|chunk|
        let mut c = 1u64;
        for _ in 0..chunk.len() {
            c = c * inv2 % m64;
        }
        p.add_term(vec![], BigInt::from((1 + m64 - c) % m64));
        // all non-empty sub-monomials of the chunk get -inv2^|chunk|
        let neg = (m64 - c) % m64;
        for sub in 1u64..1 << chunk.len() {
            let mono: Vec<u32> = (0..chunk.len())
                .filter(|&i| sub >> i & 1 == 1)
                .map(|i| chunk[i])
                .collect();
            p.add_term(mono, BigInt::from(neg));
        }
    }
    let p = p.reduce_mod(m);
    if d <= CONSTRUCTION_VALIDATE_ARITY {
        assert!(
            is_or_rep_pm1(&p, d, m)?,
            "internal: partition OR failed its checker"
        );
    }
    Ok(p)
}

/// Exponent choice for the CRT-based NAND representation: per prime of
/// m, a power p_i^{l_i} such that the product of the chosen powers
/// exceeds d. Degree of the resulting polynomial is max_i (p_i^{l_i}-1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BbrPlan {
    /// (prime, exponent) with exponent possibly 0 (prime unused).
    pub primes: Vec<(u64, u32)>,
    /// max_i (p_i^{l_i} - 1)
    pub degree: u64,
    /// Product of p_i over primes with positive exponent.
    pub crt_modulus: u64,
}

/// Pick the exponents. Returns None when m is a prime power (the
/// partition construction applies directly and no CRT step exists).
/// Search window: products up to 2 * d * max-prime; minimized by degree,
/// then by product, then lexicographically.
pub fn nand_bbr_plan(d: usize, m: u32) -> Result<Option<BbrPlan>> {
    if m < 2 {
        return Err(Error::InvalidModulus(format!("modulus {m} is below 2")));
    }
    if d == 0 {
        return Err(Error::InvalidRep("arity must be positive".into()));
    }
    let primes: Vec<u64> = factorize(m as u64).into_iter().map(|(p, _)| p).collect();
    if primes.len() < 2 {
        return Ok(None);
    }
    let max_p = *primes.iter().max().unwrap();
    let window = 2 * d as u128 * max_p as u128;
    // Enumerate exponent tuples with product inside the window.
    let mut best: Option<(u64, u128, Vec<u32>)> = None; // (degree, product, tuple)
    let mut tuple = vec![0u32; primes.len()];
    loop {
        let mut product: u128 = 1;
        let mut degree: u64 = 0;
        let mut ok = true;
        for (i, &e) in tuple.iter().enumerate() {
            let pe = (primes[i] as u128).checked_pow(e);
            match pe {
                Some(pe) if product.checked_mul(pe).map(|v| v <= window).unwrap_or(false) => {
                    product *= pe;
                    degree = degree.max(pe as u64 - 1);
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && product > d as u128 {
            let cand = (degree, product, tuple.clone());
            let better = match &best {
                None => true,
                Some((bd, bp, bt)) => {
                    (cand.0, cand.1, &cand.2) < (*bd, *bp, bt)
                }
            };
            if better {
                best = Some(cand);
            }
        }
        // odometer over exponents; each exponent is capped by the window
        let mut i = 0;
        loop {
            if i == tuple.len() {
                break;
            }
            tuple[i] += 1;
            if (primes[i] as u128).checked_pow(tuple[i]).map(|v| v <= window).unwrap_or(false) {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
        if i == tuple.len() {
            break;
        }
    }
    let (degree, _, exps) = best.expect("window always contains a valid tuple");
    let mut crt_modulus = 1u64;
    for (i, &e) in exps.iter().enumerate() {
        if e > 0 {
            crt_modulus *= primes[i];
        }
    }
    Ok(Some(BbrPlan {
        primes: primes.into_iter().zip(exps).collect(),
        degree,
        crt_modulus,
    }))
}

const BBR_MAX_ARITY: usize = 20;

/// CRT-based NAND representation over {0,1} for moduli with at least two
/// distinct primes; prime powers fall back to the partition form. Per
/// chosen prime power the weight-residue indicator vanishes mod p_i only
/// at weight d mod p_i^{l_i}; the CRT recombination then vanishes mod m
/// exactly on the all-ones input. Degree max_i (p_i^{l_i} - 1), often
/// far below ceil(d / (m-1)).
pub fn nand_bbr(d: usize, m: u32) -> Result<IntPoly> {
    let plan = match nand_bbr_plan(d, m)? {
        None => return nand_trivial(d, m),
        Some(p) => p,
    };
    if d > BBR_MAX_ARITY {
        return Err(Error::SizeLimit(format!(
            "CRT NAND construction capped at arity {BBR_MAX_ARITY}, got {d} (the plan alone has no cap)"
        )));
    }
    // Per active prime, the indicator's sparse coefficients mod p.
    let mut components: Vec<(u64, BTreeMap<Vec<u32>, u64>)> = Vec::new();
    for &(p, e) in &plan.primes {
        if e == 0 {
            continue;
        }
        let f = residue_indicator_core(p, e, d as u64, d)?;
        let map: BTreeMap<Vec<u32>, u64> = f
            .terms()
            .iter()
            .map(|(mono, c)| {
                let c: i64 = c.try_into().expect("small residue");
                (mono.clone(), c.rem_euclid(p as i64) as u64)
            })
            .collect();
        components.push((p, map));
    }
    // Union of supports, coefficient-by-coefficient CRT, then scale from
    // the prime product up to m.
    let mut support: std::collections::BTreeSet<Vec<u32>> = std::collections::BTreeSet::new();
    for (_, map) in &components {
        support.extend(map.keys().cloned());
    }
    let scale = m as u64 / plan.crt_modulus;
    let mut out = IntPoly::zero(d);
    for mono in support {
        let parts: Vec<(u64, u64)> = components
            .iter()
            .map(|(p, map)| (*map.get(&mono).unwrap_or(&0) % p, *p))
            .collect();
        let c = crt_combine(&parts) * scale;
        out.add_term(mono, BigInt::from(c));
    }
    assert!(
        is_nand_rep_01(&out, d, m)?,
        "internal: CRT NAND failed its checker"
    );
    Ok(out)
}

// ---------------------------------------------------------------------
// Covering number.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMode {
    Exact,
    Greedy,
}

const COVER_EXACT_MAX_SETS: usize = 20;
const COVER_EXACT_MAX_VARS: usize = 24;

/// Minimum number of monomials of p whose union covers every variable
/// appearing in p (Exact), or a greedy upper bound (Greedy). The
/// constant monomial never helps and is ignored.
pub fn covering_number(p: &IntPoly, mode: CoverMode) -> Result<u32> {
    // Remap the appearing variables onto 0..u.
    let mut vars: Vec<u32> = Vec::new();
    for mono in p.terms().keys() {
        vars.extend_from_slice(mono);
    }
    vars.sort_unstable();
    vars.dedup();
    let u = vars.len();
    if u == 0 {
        return Ok(0);
    }
    let slot = |v: u32| vars.binary_search(&v).unwrap();
    let mut sets: Vec<u64> = p
        .terms()
        .keys()
        .filter(|m| !m.is_empty())
        .map(|m| m.iter().fold(0u64, |acc, &v| acc | 1 << slot(v)))
        .collect();
    sets.sort_unstable();
    sets.dedup();
    if u > 64 {
        return Err(Error::SizeLimit(format!(
            "covering computation capped at 64 distinct variables, got {u}"
        )));
    }
    let full: u64 = if u == 64 { !0 } else { (1 << u) - 1 };

    // Greedy pass; doubles as the incumbent for branch and bound.
    let greedy = {
        let mut uncovered = full;
        let mut count = 0u32;
        while uncovered != 0 {
            let best = sets
                .iter()
                .max_by_key(|&&s| (s & uncovered).count_ones())
                .copied()
                .expect("every variable appears in some monomial");
            debug_assert!(best & uncovered != 0);
            uncovered &= !best;
            count += 1;
        }
        count
    };
    if mode == CoverMode::Greedy {
        return Ok(greedy);
    }

    if sets.len() > COVER_EXACT_MAX_SETS || u > COVER_EXACT_MAX_VARS {
        return Err(Error::SizeLimit(format!(
            "exact covering capped at {COVER_EXACT_MAX_SETS} monomials / {COVER_EXACT_MAX_VARS} variables, got {} / {u}",
            sets.len()
        )));
    }
    // Branch on the sets containing the lowest uncovered variable.
    let max_size = sets.iter().map(|s| s.count_ones()).max().unwrap();
    fn bnb(sets: &[u64], uncovered: u64, used: u32, best: &mut u32, max_size: u32) {
        if uncovered == 0 {
            *best = (*best).min(used);
            return;
        }
        let lower = (uncovered.count_ones() + max_size - 1) / max_size;
        if used + lower >= *best {
            return;
        }
        let pivot = uncovered.trailing_zeros();
        for &s in sets.iter().filter(|&&s| s >> pivot & 1 == 1) {
            bnb(sets, uncovered & !s, used + 1, best, max_size);
        }
    }
    let mut best = greedy;
    bnb(&sets, full, 0, &mut best, max_size);
    Ok(best)
}
