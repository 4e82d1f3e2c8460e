//! Integer and modular primitives: primality, quadratic residues, four-square
//! representations, and the prime searches that parameterize every
//! construction downstream.

use crate::error::{Error, Result};

/// Floor of the square root, exact for all `u64`.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x > 0 && x.checked_mul(x).map_or(true, |s| s > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map_or(false, |s| s <= n) {
        x += 1;
    }
    x
}

pub fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    debug_assert!(modulus < (1 << 32), "modulus must fit in 32 bits");
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

/// Deterministic primality by trial division up to √n. The parameter ranges
/// used by the constructions stay far below the point where this matters.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    if n % 3 == 0 {
        return n == 3;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// All integer 4-tuples `(a, b, c, d)` with `a² + b² + c² + d² = n`, in
/// lexicographic order. Rejects even `n`; the downstream counting identity
/// `r₄(n) = 8·σ(n)` is stated for odd `n` only.
pub fn four_square_representations(n: u64) -> Result<Vec<(i64, i64, i64, i64)>> {
    if n % 2 == 0 {
        return Err(Error::EvenInput(n));
    }
    // Pair table: pairs[m] lists every (c, d) with c² + d² = m, sorted.
    let nn = n as usize;
    let root = isqrt(n) as i64;
    let mut pairs: Vec<Vec<(i64, i64)>> = vec![Vec::new(); nn + 1];
    for c in -root..=root {
        let c2 = (c * c) as u64;
        if c2 > n {
            continue;
        }
        let rem = n - c2;
        let dmax = isqrt(rem) as i64;
        for d in -dmax..=dmax {
            let m = c2 as usize + (d * d) as usize;
            if m <= nn {
                pairs[m].push((c, d));
            }
        }
    }
    // The double loop above emits (c, d) in lexicographic order per m already.
    let mut out = Vec::new();
    for a in -root..=root {
        let a2 = (a * a) as u64;
        if a2 > n {
            continue;
        }
        let bmax = isqrt(n - a2) as i64;
        for b in -bmax..=bmax {
            let m = (n - a2) as usize - (b * b) as usize;
            for &(c, d) in &pairs[m] {
                out.push((a, b, c, d));
            }
        }
    }
    Ok(out)
}

/// Euler's criterion. `a` may be any integer not divisible by `q`.
pub fn is_quadratic_residue(a: i64, q: u64) -> Result<bool> {
    if !is_prime(q) || q == 2 {
        return Err(Error::NotPrime(q));
    }
    let r = a.rem_euclid(q as i64) as u64;
    if r == 0 {
        return Err(Error::ZeroResidue { a, q });
    }
    Ok(mod_pow(r, (q - 1) / 2, q) == 1)
}

/// Parameters shared by every construction: distinct primes `p_i ≡ 1 (mod 4)`
/// that are quadratic residues modulo a prime `q ≡ 1 (mod 4)` with
/// `q > 2·√(∏ p_i)`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PrimeParams {
    pub p_list: Vec<u64>,
    pub q: u64,
}

impl PrimeParams {
    pub fn new(p_list: Vec<u64>, q: u64) -> Result<Self> {
        let params = PrimeParams { p_list, q };
        params.validate()?;
        Ok(params)
    }

    pub fn k(&self) -> usize {
        self.p_list.len()
    }

    pub fn validate(&self) -> Result<()> {
        let q = self.q;
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if q % 4 != 1 {
            return Err(Error::InvalidParams(format!("q = {q} is not ≡ 1 (mod 4)")));
        }
        let mut product = 1u64;
        let mut prev = 0u64;
        for &p in &self.p_list {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            if p % 4 != 1 {
                return Err(Error::InvalidParams(format!("p = {p} is not ≡ 1 (mod 4)")));
            }
            if p <= prev {
                return Err(Error::InvalidParams(
                    "p_list must be strictly ascending (distinct primes)".into(),
                ));
            }
            if p >= q {
                return Err(Error::InvalidParams(format!("requires p = {p} < q = {q}")));
            }
            if !is_quadratic_residue(p as i64, q)? {
                return Err(Error::InvalidParams(format!(
                    "p = {p} is not a quadratic residue mod q = {q}"
                )));
            }
            prev = p;
            product = product
                .checked_mul(p)
                .ok_or_else(|| Error::InvalidParams("product of p_i overflows".into()))?;
        }
        // q > 2√(∏ p_i), compared in squared form to stay exact.
        if q * q <= 4 * product {
            return Err(Error::InvalidParams(format!(
                "requires q > 2·√(∏ p_i): q = {q}, ∏ p_i = {product}"
            )));
        }
        Ok(())
    }
}

const PRIME_SEARCH_LIMIT: u64 = 1 << 40;

/// Smallest prime `q ≥ q_min` with `q ≡ 1 (mod 4·∏ p_i)`. Membership in this
/// progression forces every `p_i` to be a quadratic residue mod `q` by
/// reciprocity; the returned parameters are re-validated anyway.
pub fn find_modulus_prime(p_list: &[u64], q_min: u64) -> Result<u64> {
    let mut modulus = 4u64;
    for &p in p_list {
        modulus = modulus
            .checked_mul(p)
            .ok_or_else(|| Error::InvalidParams("progression modulus overflows".into()))?;
    }
    let mut q = modulus + 1;
    while q < q_min {
        q += modulus;
    }
    while q < PRIME_SEARCH_LIMIT {
        if is_prime(q) {
            PrimeParams::new(p_list.to_vec(), q)?;
            return Ok(q);
        }
        q += modulus;
    }
    Err(Error::PrimeSearchExhausted { modulus, q_min, limit: PRIME_SEARCH_LIMIT })
}

/// Alternate scan mode: smallest prime `q ≥ q_min` with `q ≡ 1 (mod 4)` for
/// which every `p_i` happens to be a quadratic residue. Finds much smaller
/// moduli than the progression (e.g. q = 29 works for {5, 13}), which keeps
/// the groups at buildable sizes.
pub fn find_modulus_prime_scan(p_list: &[u64], q_min: u64) -> Result<u64> {
    let floor = p_list.iter().copied().max().unwrap_or(0);
    let product: u64 = p_list.iter().product();
    let mut q = q_min.max(5);
    if q % 4 != 1 {
        q += 4 - (q + 3) % 4; // round up to ≡ 1 (mod 4)
    }
    while q < PRIME_SEARCH_LIMIT {
        if q > floor && q * q > 4 * product && is_prime(q) {
            let all_qr = p_list
                .iter()
                .all(|&p| is_quadratic_residue(p as i64, q).unwrap_or(false));
            if all_qr {
                PrimeParams::new(p_list.to_vec(), q)?;
                return Ok(q);
            }
        }
        q += 4;
    }
    Err(Error::PrimeSearchExhausted { modulus: 4, q_min, limit: PRIME_SEARCH_LIMIT })
}

/// `k` ascending distinct primes ≡ 1 (mod 4) inside the band `[x, B·x]`.
pub fn find_prime_band(k: usize, x: u64, band_ratio: f64) -> Result<Vec<u64>> {
    if k == 0 || band_ratio <= 1.0 {
        return Err(Error::InvalidParams(
            "need k ≥ 1 and band ratio B > 1".into(),
        ));
    }
    let hi = (band_ratio * x as f64).floor() as u64;
    let mut found = Vec::new();
    let mut p = x.max(5);
    while p <= hi && found.len() < k {
        if p % 4 == 1 && is_prime(p) {
            found.push(p);
        }
        p += 1;
    }
    if found.len() < k {
        return Err(Error::BandTooNarrow { lo: x, hi, found: found.len(), needed: k });
    }
    Ok(found)
}

/// Divisor sum σ(n), used as the counting oracle for the four-square identity.
pub fn divisor_sigma(n: u64) -> u64 {
    let mut total = 0;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            total += d;
            if d != n / d {
                total += n / d;
            }
        }
        d += 1;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_basics() {
        assert!(!is_prime(1));
        assert!(is_prime(2));
        assert!(is_prime(29));
        assert!(is_prime(521));
        assert!(!is_prime(221)); // 13 · 17
        let odd_primes_below_100 =
            (2..100).filter(|&n| is_prime(n)).count();
        assert_eq!(odd_primes_below_100, 25);
    }

    #[test]
    fn four_squares_unit() {
        let reps = four_square_representations(1).unwrap();
        assert_eq!(reps.len(), 8);
        // ±1 in exactly one coordinate.
        for (a, b, c, d) in &reps {
            assert_eq!(a * a + b * b + c * c + d * d, 1);
        }
    }

    #[test]
    fn four_squares_small_counts() {
        assert_eq!(four_square_representations(5).unwrap().len(), 48);
        assert_eq!(four_square_representations(65).unwrap().len(), 672);
        assert!(four_square_representations(6).is_err());
    }

    #[test]
    fn four_squares_lexicographic_and_valid() {
        let reps = four_square_representations(35).unwrap();
        for w in reps.windows(2) {
            assert!(w[0] < w[1], "not sorted: {:?} then {:?}", w[0], w[1]);
        }
        for &(a, b, c, d) in &reps {
            assert_eq!((a * a + b * b + c * c + d * d) as u64, 35);
        }
    }

    #[test]
    fn jacobi_identity_small_range() {
        for n in (1..500u64).step_by(2) {
            let count = four_square_representations(n).unwrap().len() as u64;
            assert_eq!(count, 8 * divisor_sigma(n), "r4({n}) mismatch");
        }
    }

    #[test]
    fn quadratic_residues_match_enumeration() {
        for q in [3u64, 5, 13, 29, 101, 997] {
            let squares: std::collections::HashSet<u64> =
                (1..q).map(|x| x * x % q).collect();
            for a in 1..q {
                assert_eq!(
                    is_quadratic_residue(a as i64, q).unwrap(),
                    squares.contains(&a),
                    "QR mismatch at a={a}, q={q}"
                );
            }
        }
        assert!(is_quadratic_residue(1, 29).unwrap());
        assert!(is_quadratic_residue(5, 29).unwrap());
        assert!(!is_quadratic_residue(5, 13).unwrap());
        assert!(is_quadratic_residue(-1, 29).unwrap()); // q ≡ 1 mod 4
        assert!(!is_quadratic_residue(-1, 31).unwrap()); // q ≡ 3 mod 4
    }

    #[test]
    fn zero_residue_rejected() {
        assert!(matches!(
            is_quadratic_residue(26, 13),
            Err(Error::ZeroResidue { .. })
        ));
    }

    #[test]
    fn modulus_prime_progression() {
        assert_eq!(find_modulus_prime(&[5], 2).unwrap(), 41);
        assert_eq!(find_modulus_prime(&[5, 13], 2).unwrap(), 521);
        assert_eq!(find_modulus_prime(&[], 5).unwrap(), 5);
    }

    #[test]
    fn modulus_prime_scan_finds_small_q() {
        assert_eq!(find_modulus_prime_scan(&[5, 13], 2).unwrap(), 29);
        assert_eq!(find_modulus_prime_scan(&[29, 37], 2).unwrap(), 149);
        // Four primes force q > 2√(13·17·29·37) ≈ 974.
        let q = find_modulus_prime_scan(&[13, 17, 29, 37], 2).unwrap();
        assert_eq!(q, 1069);
        assert!(PrimeParams::new(vec![13, 17, 29, 37], q).is_ok());
    }

    #[test]
    fn prime_bands() {
        assert_eq!(find_prime_band(2, 5, 6.0).unwrap(), vec![5, 13]);
        assert_eq!(find_prime_band(1, 5, 1.1).unwrap(), vec![5]);
        assert_eq!(find_prime_band(4, 5, 6.0).unwrap(), vec![5, 13, 17, 29]);
        match find_prime_band(5, 5, 2.0) {
            Err(Error::BandTooNarrow { found, needed, .. }) => {
                assert_eq!(needed, 5);
                assert!(found < 5);
            }
            other => panic!("expected BandTooNarrow, got {other:?}"),
        }
    }

    #[test]
    fn prime_params_validation() {
        assert!(PrimeParams::new(vec![5, 13], 29).is_ok());
        assert!(PrimeParams::new(vec![5, 13], 17).is_err()); // q too small, 5 not QR
        assert!(PrimeParams::new(vec![13, 5], 29).is_err()); // not ascending
        assert!(PrimeParams::new(vec![5, 13], 31).is_err()); // 31 ≡ 3 mod 4
    }
}
