//! Word-size number theory: modular arithmetic, deterministic primality and
//! factorization of the group orders that show up in PSL(2, q).

use super::FieldError;

/// Deterministic Miller-Rabin with the first thirteen primes as bases is exact
/// below this bound.
pub const MILLER_RABIN_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u128, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn mul_mod_wide(a: u128, b: u128, m: u128) -> u128 {
    if a < (1 << 64) && b < (1 << 64) {
        return (a * b) % m;
    }
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod_wide(acc, a, m);
        }
        a = add_mod_wide(a, a, m);
        b >>= 1;
    }
    acc
}

#[inline]
fn add_mod_wide(a: u128, b: u128, m: u128) -> u128 {
    // a, b < m <= 2^127 in every caller, so no overflow
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

fn pow_mod_wide(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_wide(acc, base, m);
        }
        base = mul_mod_wide(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: u128, b: u128) -> u128 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Exact primality for every `n` below [`MILLER_RABIN_LIMIT`]; larger inputs
/// are refused rather than answered probabilistically.
pub fn is_prime(n: u128) -> Result<bool, FieldError> {
    if n >= MILLER_RABIN_LIMIT {
        return Err(FieldError::PrimalityCeiling(n));
    }
    if n < 2 {
        return Ok(false);
    }
    for &q in &MR_BASES {
        let q = q as u128;
        if n == q {
            return Ok(true);
        }
        if n % q == 0 {
            return Ok(false);
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod_wide(a as u128, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_wide(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// Convenience wrapper for word-size moduli, which are always below the
/// deterministic limit.
pub fn is_prime_u64(n: u64) -> bool {
    is_prime(n as u128).expect("u64 is below the deterministic Miller-Rabin limit")
}

/// Prime factorization `n = prod q^e`, sorted by `q`.
pub fn factorize(n: u128) -> Result<Vec<(u128, u32)>, FieldError> {
    if n >= MILLER_RABIN_LIMIT {
        return Err(FieldError::FactorizationCeiling(n));
    }
    let mut primes = Vec::new();
    let mut rest = n;
    let mut q = 2u128;
    while q <= 1000 && q * q <= rest {
        while rest % q == 0 {
            primes.push(q);
            rest /= q;
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        split_into(rest, &mut primes)?;
    }
    primes.sort_unstable();
    let mut out: Vec<(u128, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    Ok(out)
}

fn split_into(n: u128, out: &mut Vec<u128>) -> Result<(), FieldError> {
    if n == 1 {
        return Ok(());
    }
    if is_prime(n)? {
        out.push(n);
        return Ok(());
    }
    let d = pollard_brent(n);
    split_into(d, out)?;
    split_into(n / d, out)
}

/// Returns a non-trivial divisor of the odd composite `n`.
fn pollard_brent(n: u128) -> u128 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u128;
    loop {
        let f = |x: u128| add_mod_wide(mul_mod_wide(x, x, n), c, n);
        let (mut x, mut y, mut d) = (2u128, 2u128, 1u128);
        let mut guard = 0u64;
        while d == 1 && guard < 1 << 22 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
            guard += 1;
        }
        if d != 1 && d != n {
            return d;
        }
        c += 1;
    }
}

pub fn totient(n: u64) -> u64 {
    let mut result = n;
    let mut rest = n;
    let mut q = 2u64;
    while q * q <= rest {
        if rest % q == 0 {
            while rest % q == 0 {
                rest /= q;
            }
            result -= result / q;
        }
        q += 1;
    }
    if rest > 1 {
        result -= result / rest;
    }
    result
}

/// Least `k` dividing `multiple` with `is_identity(k)`, given that
/// `is_identity(multiple)` holds. Strips prime factors one at a time.
pub fn order_from_multiple<F>(multiple: u128, mut is_identity: F) -> Result<u128, FieldError>
where
    F: FnMut(u128) -> bool,
{
    let mut order = multiple;
    for (q, e) in factorize(multiple)? {
        for _ in 0..e {
            if order % q == 0 && is_identity(order / q) {
                order /= q;
            } else {
                break;
            }
        }
    }
    Ok(order)
}
