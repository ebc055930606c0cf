//! Small number-theory helpers: trial-division primality and
//! factorization, modular inverses, CRT recombination. Everything here
//! works on u64 moduli, which is all the instance formats allow.

/// Trial division; fine for the 32-bit moduli we ever see.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization as (prime, exponent) pairs, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Some((p, k)) when n = p^k for a prime p, else None.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    let f = factorize(n);
    if f.len() == 1 {
        Some(f[0])
    } else {
        None
    }
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g.
fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Inverse of a modulo m; panics if gcd(a, m) != 1.
pub fn inv_mod(a: u64, m: u64) -> u64 {
    let (g, x, _) = egcd(a as i128 % m as i128, m as i128);
    assert_eq!(g, 1, "{a} has no inverse mod {m}");
    (x.rem_euclid(m as i128)) as u64
}

/// Combine residues by the Chinese remainder theorem. Moduli must be
/// pairwise coprime with product fitting in u64. Returns the value in
/// [0, product).
pub fn crt_combine(parts: &[(u64, u64)]) -> u64 {
    let mut r: u128 = 0;
    let mut m: u128 = 1;
    for &(ri, mi) in parts {
        debug_assert!(ri < mi);
        // solve r + m*t = ri (mod mi)
        let t = ((ri as u128 + mi as u128 - (r % mi as u128)) % mi as u128
            * inv_mod((m % mi as u128) as u64, mi) as u128)
            % mi as u128;
        r += m * t;
        m *= mi as u128;
    }
    debug_assert!(m <= u64::MAX as u128 + 1);
    r as u64
}

/// a^e, panicking on overflow (callers cap inputs first).
pub fn pow_u64(a: u64, e: u32) -> u64 {
    a.checked_pow(e).expect("power overflows u64")
}
