//! Integer sequences used as term-count laws.

use num_bigint::BigUint;
use num_traits::One;

use super::andre::{andre_perms, AndreKind};

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Fibonacci numbers with `F(1) = F(2) = 1`.
pub fn fibonacci(n: u64) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..n {
        (a, b) = (b, a + b);
    }
    a
}

/// Motzkin numbers `1, 1, 2, 4, 9, 21, ...`.
pub fn motzkin(n: u64) -> u64 {
    let n = n as usize;
    let mut m = vec![1u64; n + 1];
    for i in 2..=n {
        let mut s = m[i - 1];
        for k in 0..=i - 2 {
            s += m[k] * m[i - 2 - k];
        }
        m[i] = s;
    }
    m[n]
}

/// Largest `n` for which [`euler`] counts André permutations directly.
pub const EULER_ENUMERATION_LIMIT: u32 = 9;

/// Euler (up/down) numbers `1, 1, 1, 2, 5, 16, 61, ...`.
///
/// Counted as André permutations up to [`EULER_ENUMERATION_LIMIT`]; beyond
/// that, from `E(m+1) = E(m) + sum_k C(m-1, k) E(k+1) E(m-k-1)`.
pub fn euler(n: u32) -> BigUint {
    if n <= EULER_ENUMERATION_LIMIT {
        return BigUint::from(andre_perms(n, AndreKind::I).len());
    }
    let mut e: Vec<BigUint> = (0..=EULER_ENUMERATION_LIMIT).map(euler).collect();
    for m in EULER_ENUMERATION_LIMIT as usize..n as usize {
        let mut next = e[m].clone();
        for k in 0..=m - 2 {
            next += BigUint::from(binomial(m as u64 - 1, k as u64)) * &e[k + 1] * &e[m - k - 1];
        }
        e.push(next);
    }
    e.swap_remove(n as usize)
}

/// `E(0..=n)` via the recurrence alone, for cross-checking.
pub fn euler_by_recurrence(n: u32) -> Vec<BigUint> {
    let mut e = vec![BigUint::one()];
    for m in 0..n as usize {
        let mut next = if m == 0 { BigUint::one() } else { e[m].clone() };
        if m >= 2 {
            for k in 0..=m - 2 {
                next += BigUint::from(binomial(m as u64 - 1, k as u64)) * &e[k + 1] * &e[m - k - 1];
            }
        }
        e.push(next);
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!((1..=8).map(fibonacci).collect::<Vec<_>>(), [1, 1, 2, 3, 5, 8, 13, 21]);
        assert_eq!((0..=8).map(motzkin).collect::<Vec<_>>(), [1, 1, 2, 4, 9, 21, 51, 127, 323]);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(2, 3), 0);
        let e: Vec<BigUint> = (0..=12).map(euler).collect();
        let want: [u64; 13] = [1, 1, 1, 2, 5, 16, 61, 272, 1385, 7936, 50521, 353792, 2702765];
        assert_eq!(e, want.iter().map(|&v| BigUint::from(v)).collect::<Vec<_>>());
    }

    #[test]
    fn recurrence_matches_enumeration() {
        let r = euler_by_recurrence(EULER_ENUMERATION_LIMIT);
        for n in 0..=EULER_ENUMERATION_LIMIT {
            assert_eq!(r[n as usize], euler(n), "n={n}");
        }
    }
}
