//! Primality testing.
//!
//! Below 2^64 the answer is exact: Miller-Rabin with the seven Jaeschke/Sinclair
//! bases has no pseudoprimes in that range. Above it we run a Baillie-PSW
//! style battery: 64 strong-probable-prime rounds (base 2 plus 63 bases drawn
//! from a ChaCha stream seeded by `n`) followed by a strong Lucas test with
//! Selfridge parameters. A `false` answer is always a proof of compositeness.
//! A `true` answer is probabilistic; the Miller-Rabin rounds alone bound the
//! error by 4^-64 and no composite is known to pass the combination.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Trial-division bound used throughout the factoring pipeline.
pub const TRIAL_BOUND: u32 = 100_000;

const MR_BASES_64: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];
const MR_ROUNDS_BIG: usize = 64;

/// All primes below [`TRIAL_BOUND`], ascending.
pub fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_below(TRIAL_BOUND))
}

/// Plain sieve of Eratosthenes.
pub fn primes_below(limit: u32) -> Vec<u32> {
    let limit = limit as usize;
    if limit < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; limit];
    let mut out = Vec::new();
    for i in 2..limit {
        if composite[i] {
            continue;
        }
        out.push(i as u32);
        let mut j = i * i;
        while j < limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
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

fn is_sprp_u64(n: u64, base: u64) -> bool {
    let a = base % n;
    if a == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    if n < 37 * 37 {
        return true;
    }
    MR_BASES_64.iter().all(|&b| is_sprp_u64(n, b))
}

fn is_sprp_big(n: &BigUint, base: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = base.modpow(&d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol (a/n) for odd positive n.
fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    let n_int = BigInt::from_biguint(Sign::Plus, n.clone());
    let mut a = a.mod_floor(&n_int).to_biguint().unwrap();
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n_mod_8 = (&n % 8u32).to_u32().unwrap();
        if tz % 2 == 1 && (n_mod_8 == 3 || n_mod_8 == 5) {
            result = -result;
        }
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a %= &n;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

fn half_mod(x: BigInt, n: &BigInt) -> BigInt {
    if x.is_odd() {
        (x + n) >> 1
    } else {
        x >> 1
    }
}

/// Strong Lucas probable-prime test with Selfridge's method A parameters.
/// Expects an odd `n` that is not a perfect square.
fn is_strong_lucas_prp(n: &BigUint) -> bool {
    let n_int = BigInt::from_biguint(Sign::Plus, n.clone());
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, n) {
            -1 => break,
            0 => {
                // gcd(D, n) > 1; D is tiny so n is composite unless n = |D|.
                return d.magnitude() == n;
            }
            _ => {}
        }
        d = if d.sign() == Sign::Plus {
            -(d + BigInt::from(2))
        } else {
            -(d - BigInt::from(2))
        };
    }
    let p = BigInt::one();
    let q: BigInt = (BigInt::one() - &d) / 4;

    let n_plus_1 = n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let k = &n_plus_1 >> s;

    // Left-to-right binary ladder over k computing U_k, V_k and Q^k.
    let mut u = BigInt::zero();
    let mut v = BigInt::from(2);
    let mut qk = BigInt::one();
    for i in (0..k.bits()).rev() {
        // doubling
        u = (&u * &v).mod_floor(&n_int);
        v = (&v * &v - (&qk << 1u32)).mod_floor(&n_int);
        qk = (&qk * &qk).mod_floor(&n_int);
        if k.bit(i) {
            let u_next = half_mod(&p * &u + &v, &n_int).mod_floor(&n_int);
            let v_next = half_mod(&d * &u + &p * &v, &n_int).mod_floor(&n_int);
            u = u_next;
            v = v_next;
            qk = (&qk * &q).mod_floor(&n_int);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - (&qk << 1u32)).mod_floor(&n_int);
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk).mod_floor(&n_int);
    }
    false
}

fn rng_for(n: &BigUint) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    for (slot, byte) in seed.iter_mut().zip(n.to_bytes_le()) {
        *slot = byte;
    }
    ChaCha8Rng::from_seed(seed)
}

/// Primality test for arbitrary naturals.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    for &p in small_primes().iter().take(300) {
        if (n % p).is_zero() {
            return false;
        }
    }
    let two = BigUint::from(2u32);
    if !is_sprp_big(n, &two) {
        return false;
    }
    let sq = n.sqrt();
    if &(&sq * &sq) == n {
        return false;
    }
    let mut rng = rng_for(n);
    let upper = n - 2u32;
    for _ in 1..MR_ROUNDS_BIG {
        let base = rng.gen_biguint_range(&two, &upper);
        if !is_sprp_big(n, &base) {
            return false;
        }
    }
    is_strong_lucas_prp(n)
}
