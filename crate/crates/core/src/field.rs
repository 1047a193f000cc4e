//! Exact arithmetic in GF(p) and GF(p^m).
//!
//! Elements of GF(p) are canonical residues in `0..p` carried as bare `u64`;
//! the [`PrimeField`] context object supplies the operations. Extension field
//! elements are coefficient vectors of length `m` (constant term first),
//! reduced modulo a monic irreducible polynomial.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot invert zero in GF({0})")]
    ZeroInverse(u64),
    #[error("operation is undefined in characteristic 2")]
    EvenCharacteristic,
    #[error("modulus must be monic of degree {expected}, got {got}")]
    BadModulus { expected: usize, got: usize },
    #[error("modulus is reducible over GF({p})")]
    ReducibleModulus { p: u64 },
    #[error("field GF({p}^{m}) exceeds the supported size")]
    FieldTooLarge { p: u64, m: usize },
}

/// The prime field GF(p). Primality is checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Reduces a signed integer to its canonical residue.
    pub fn elem(&self, x: i64) -> u64 {
        let p = self.p as i64;
        (((x % p) + p) % p) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64, FieldError> {
        if a.is_multiple_of(self.p) {
            return Err(FieldError::ZeroInverse(self.p));
        }
        Ok(self.pow(a % self.p, self.p - 2))
    }

    /// Whether `x` is a square modulo p, by Euler's criterion. Zero counts
    /// as a square. Rejects p = 2, where squaring is a bijection and the
    /// question carries no information; callers must branch there.
    pub fn is_square(&self, x: u64) -> Result<bool, FieldError> {
        if self.p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        let x = x % self.p;
        if x == 0 {
            return Ok(true);
        }
        Ok(self.pow(x, (self.p - 1) / 2) == 1)
    }

    /// The least positive non-residue modulo p. Deterministic, so canonical
    /// forms built from it are reproducible across runs.
    pub fn smallest_nonsquare(&self) -> Result<u64, FieldError> {
        if self.p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        for r in 2..self.p {
            if !self.is_square(r)? {
                return Ok(r);
            }
        }
        unreachable!("every odd prime field has a non-residue")
    }

    /// Finds some square root by exhaustive search, smallest first.
    /// The primes in scope are tiny, so nothing cleverer is warranted.
    pub fn sqrt(&self, x: u64) -> Option<u64> {
        let x = x % self.p;
        (0..self.p).find(|&y| self.mul(y, y) == x)
    }
}

const MAX_EXT_ORDER: u64 = 59_049; // 3^10

/// The extension field GF(p^m), represented as GF(p)[x] modulo a monic
/// irreducible polynomial of degree m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtField {
    base: PrimeField,
    m: usize,
    /// Monic modulus, length m + 1, constant term first.
    modulus: Vec<u64>,
}

impl ExtField {
    /// Builds GF(p^m) with an explicit modulus. Irreducibility is checked:
    /// root-freeness suffices through degree 3, higher degrees use gcds
    /// with x^(p^k) - x.
    pub fn new(base: PrimeField, modulus: Vec<u64>) -> Result<Self, FieldError> {
        let m = modulus.len().saturating_sub(1);
        if m == 0 || *modulus.last().unwrap() != 1 {
            return Err(FieldError::BadModulus {
                expected: m.max(1),
                got: modulus.len().saturating_sub(1),
            });
        }
        let modulus: Vec<u64> = modulus.iter().map(|&c| c % base.p()).collect();
        if *modulus.last().unwrap() != 1 {
            return Err(FieldError::BadModulus { expected: m, got: m });
        }
        if order_of(base.p(), m) > MAX_EXT_ORDER {
            return Err(FieldError::FieldTooLarge { p: base.p(), m });
        }
        if !is_irreducible(base, &modulus) {
            return Err(FieldError::ReducibleModulus { p: base.p() });
        }
        Ok(ExtField { base, m, modulus })
    }

    /// Builds GF(p^m) with the default modulus for (p, m): the
    /// lexicographically smallest monic irreducible polynomial. Any
    /// irreducible gives an isomorphic field; fixing the smallest keeps
    /// construction reproducible. Callers may override via [`ExtField::new`].
    pub fn with_default_modulus(base: PrimeField, m: usize) -> Result<Self, FieldError> {
        if m == 0 {
            return Err(FieldError::BadModulus { expected: 1, got: 0 });
        }
        let p = base.p();
        if order_of(p, m) > MAX_EXT_ORDER {
            return Err(FieldError::FieldTooLarge { p, m });
        }
        let mut low = vec![0u64; m];
        loop {
            let mut cand = low.clone();
            cand.push(1);
            if is_irreducible(base, &cand) {
                return Ok(ExtField {
                    base,
                    m,
                    modulus: cand,
                });
            }
            // odometer over the lower coefficients, constant term fastest
            let mut k = 0;
            loop {
                if k == m {
                    unreachable!("an irreducible of every degree exists over GF(p)")
                }
                low[k] += 1;
                if low[k] < p {
                    break;
                }
                low[k] = 0;
                k += 1;
            }
        }
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        order_of(self.base.p(), self.m)
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.m]
    }

    pub fn one(&self) -> Vec<u64> {
        let mut e = vec![0; self.m];
        e[0] = 1;
        e
    }

    /// The basis monomial x^i.
    pub fn monomial(&self, i: usize) -> Vec<u64> {
        assert!(i < self.m);
        let mut e = vec![0; self.m];
        e[i] = 1;
        e
    }

    /// Enumerates all p^m elements, constant term fastest.
    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let p = self.base.p();
        let m = self.m;
        (0..self.order()).map(move |mut k| {
            let mut e = vec![0; m];
            for c in e.iter_mut() {
                *c = k % p;
                k /= p;
            }
            e
        })
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        assert_eq!(a.len(), self.m);
        assert_eq!(b.len(), self.m);
        a.iter()
            .zip(b)
            .map(|(&x, &y)| self.base.add(x, y))
            .collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        assert_eq!(a.len(), self.m);
        assert_eq!(b.len(), self.m);
        a.iter()
            .zip(b)
            .map(|(&x, &y)| self.base.sub(x, y))
            .collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        assert_eq!(a.len(), self.m);
        assert_eq!(b.len(), self.m);
        let prod = poly_mul(self.base, a, b);
        let rem = poly_rem(self.base, &prod, &self.modulus);
        let mut out = rem;
        out.resize(self.m, 0);
        out
    }

    pub fn inv(&self, a: &[u64]) -> Result<Vec<u64>, FieldError> {
        assert_eq!(a.len(), self.m);
        if a.iter().all(|&c| c == 0) {
            return Err(FieldError::ZeroInverse(self.base.p()));
        }
        // a^(q-2) = a^{-1} in GF(q)
        let mut acc = self.one();
        let mut sq = a.to_vec();
        let mut e = self.order() - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            sq = self.mul(&sq, &sq);
            e >>= 1;
        }
        Ok(acc)
    }
}

fn order_of(p: u64, m: usize) -> u64 {
    let mut n: u64 = 1;
    for _ in 0..m {
        n = n.saturating_mul(p);
    }
    n
}

// --- dense polynomial helpers over GF(p), coefficient lists, constant first ---

fn poly_trim(c: &mut Vec<u64>) {
    while c.last() == Some(&0) {
        c.pop();
    }
}

fn poly_mul(f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_rem(f: PrimeField, a: &[u64], m: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = f.inv(m[dm]).expect("monic modulus");
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = f.mul(r[dr], lead_inv);
        for (k, &mc) in m.iter().enumerate() {
            let idx = dr - dm + k;
            r[idx] = f.sub(r[idx], f.mul(c, mc));
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_gcd(f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(f, &x, &y);
        x = y;
        y = r;
    }
    x
}

/// x^(p^k) mod m, by repeated Frobenius powering.
fn frobenius_power(f: PrimeField, m: &[u64], k: usize) -> Vec<u64> {
    let mut cur = vec![0, 1]; // x
    for _ in 0..k {
        let mut acc = vec![1]; // cur^p mod m
        let mut sq = cur.clone();
        let mut e = f.p();
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_rem(f, &poly_mul(f, &acc, &sq), m);
            }
            sq = poly_rem(f, &poly_mul(f, &sq, &sq), m);
            e >>= 1;
        }
        cur = acc;
    }
    cur
}

fn is_irreducible(f: PrimeField, modulus: &[u64]) -> bool {
    let deg = modulus.len() - 1;
    if deg == 1 {
        return true;
    }
    if deg <= 3 {
        // degree 2 and 3 are reducible exactly when they have a root
        return (0..f.p()).all(|r| {
            let mut acc = 0;
            for &c in modulus.iter().rev() {
                acc = f.add(f.mul(acc, r), c);
            }
            acc != 0
        });
    }
    // no irreducible factor of degree k <= deg/2: gcd(m, x^(p^k) - x) trivial
    for k in 1..=deg / 2 {
        let xpk = frobenius_power(f, modulus, k);
        let mut diff = xpk;
        // subtract x
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = f.sub(diff[1], 1);
        poly_trim(&mut diff);
        let g = poly_gcd(f, modulus, &diff);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rejects_composites() {
        assert_eq!(PrimeField::new(1), Err(FieldError::NotPrime(1)));
        assert_eq!(PrimeField::new(6), Err(FieldError::NotPrime(6)));
        assert!(PrimeField::new(23).is_ok());
    }

    #[test]
    fn prime_arithmetic() {
        let f3 = gf(3);
        assert_eq!(f3.inv(2).unwrap(), 2); // 2*2 = 4 = 1
        let f5 = gf(5);
        assert_eq!(f5.add(3, 4), 2);
        assert_eq!(f5.sub(1, 3), 3);
        assert_eq!(f5.elem(-7), 3);
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(gf(7).inv(0), Err(FieldError::ZeroInverse(7)));
    }

    #[test]
    fn all_inverses_exhaustive() {
        // every nonzero element of GF(p^m) has a working inverse, p^m <= 343
        for (p, mmax) in [(2u64, 8usize), (3, 5), (5, 3), (7, 3)] {
            let base = gf(p);
            for x in 1..p {
                assert_eq!(base.mul(x, base.inv(x).unwrap()), 1);
            }
            for m in 2..=mmax {
                let ext = ExtField::with_default_modulus(base, m).unwrap();
                for e in ext.elements() {
                    if e.iter().all(|&c| c == 0) {
                        continue;
                    }
                    let inv = ext.inv(&e).unwrap();
                    assert_eq!(ext.mul(&e, &inv), ext.one(), "GF({p}^{m}), elem {e:?}");
                }
            }
        }
    }

    #[test]
    fn gf8_monomial_product() {
        // x * x^2 = x^3 = x + 1 modulo x^3 + x + 1
        let ext = ExtField::new(gf(2), vec![1, 1, 0, 1]).unwrap();
        let x = ext.monomial(1);
        let x2 = ext.monomial(2);
        assert_eq!(ext.mul(&x, &x2), vec![1, 1, 0]);
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 - 1 = (x-1)(x+1) over GF(5)
        assert_eq!(
            ExtField::new(gf(5), vec![4, 0, 1]),
            Err(FieldError::ReducibleModulus { p: 5 })
        );
        // x^4 + x^2 = x^2 (x^2 + 1) over GF(3)
        assert_eq!(
            ExtField::new(gf(3), vec![0, 0, 1, 0, 1]),
            Err(FieldError::ReducibleModulus { p: 3 })
        );
    }

    #[test]
    fn euler_criterion_matches_enumeration() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            let f = gf(p);
            let squares: std::collections::BTreeSet<u64> =
                (0..p).map(|y| f.mul(y, y)).collect();
            for x in 0..p {
                assert_eq!(f.is_square(x).unwrap(), squares.contains(&x), "p={p} x={x}");
            }
        }
    }

    #[test]
    fn square_examples() {
        assert!(!gf(3).is_square(2).unwrap());
        assert!(gf(5).is_square(4).unwrap());
        assert!(!gf(7).is_square(3).unwrap()); // squares mod 7 are {0,1,2,4}
    }

    #[test]
    fn smallest_nonsquare_examples() {
        assert_eq!(gf(3).smallest_nonsquare().unwrap(), 2);
        assert_eq!(gf(5).smallest_nonsquare().unwrap(), 2);
        assert_eq!(gf(7).smallest_nonsquare().unwrap(), 3);
        assert_eq!(
            gf(2).smallest_nonsquare(),
            Err(FieldError::EvenCharacteristic)
        );
    }

    #[test]
    fn ext_field_element_count() {
        let ext = ExtField::with_default_modulus(gf(3), 3).unwrap();
        assert_eq!(ext.order(), 27);
        let all: Vec<_> = ext.elements().collect();
        assert_eq!(all.len(), 27);
    }
}
