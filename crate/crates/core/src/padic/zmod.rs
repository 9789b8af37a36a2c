//! Arithmetic in `Z / p^m Z` with residues stored as `u128`.
//!
//! The modulus is kept below `2^126` so that sums never overflow; products go
//! through a 256-bit intermediate when the modulus does not fit in 64 bits.

use ethnum::U256;

/// Largest modulus accepted by [`ZMod`].
pub const MAX_MODULUS_BITS: u32 = 126;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ZMod {
    p: u64,
    m: u32,
    modulus: u128,
}

impl ZMod {
    /// Returns `None` when `p^m` does not fit below `2^126`.
    pub fn new(p: u64, m: u32) -> Option<Self> {
        let mut modulus: u128 = 1;
        for _ in 0..m {
            modulus = modulus.checked_mul(p as u128)?;
            if modulus >= 1u128 << MAX_MODULUS_BITS {
                return None;
            }
        }
        Some(Self { p, m, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn digits(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    /// `p^k` as an integer (k ≤ m).
    pub fn p_pow(&self, k: u32) -> u128 {
        debug_assert!(k <= self.m);
        (self.p as u128).pow(k)
    }

    #[inline]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u128) -> u128 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        if self.modulus <= u64::MAX as u128 {
            (a * b) % self.modulus
        } else {
            let prod = U256::from(a) * U256::from(b);
            (prod % U256::from(self.modulus)).as_u128()
        }
    }

    /// Reduces a signed integer.
    pub fn from_i128(&self, x: i128) -> u128 {
        let r = x.rem_euclid(self.modulus as i128);
        r as u128
    }

    /// `p`-adic valuation of a residue (`None` for 0).
    pub fn val(&self, a: u128) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let mut v = 0;
        let mut x = a;
        let p = self.p as u128;
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        Some(v)
    }

    /// Reduces modulo `p^k` (k ≤ m), keeping the canonical representative.
    #[inline]
    pub fn truncate(&self, a: u128, k: u32) -> u128 {
        if k >= self.m {
            a
        } else {
            a % self.p_pow(k)
        }
    }

    /// Inverse of a unit modulo `p^m` via Newton iteration starting from the
    /// inverse modulo `p`.
    pub fn inv(&self, a: u128) -> Option<u128> {
        let p = self.p as u128;
        if a % p == 0 {
            return None;
        }
        let a0 = (a % p) as u64;
        let mut x = mod_inverse_u64(a0, self.p)? as u128;
        let mut prec = 1u32;
        while prec < self.m {
            // x <- x (2 - a x)
            let ax = self.mul(a, x);
            let two_minus = self.sub(2 % self.modulus, ax);
            x = self.mul(x, two_minus);
            prec *= 2;
        }
        Some(x % self.modulus)
    }

    /// Base-`p` digits, least significant first, exactly `m` of them.
    pub fn to_digits(&self, a: u128) -> Vec<u64> {
        let p = self.p as u128;
        let mut x = a;
        (0..self.m)
            .map(|_| {
                let d = (x % p) as u64;
                x /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u64]) -> Option<u128> {
        let p = self.p as u128;
        let mut acc: u128 = 0;
        for &d in digits.iter().rev() {
            if d >= self.p {
                return None;
            }
            acc = acc.checked_mul(p)?.checked_add(d as u128)?;
        }
        if acc >= self.modulus {
            return None;
        }
        Some(acc)
    }
}

/// Inverse modulo a small prime via the extended Euclidean algorithm.
pub fn mod_inverse_u64(a: u64, p: u64) -> Option<u64> {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(p as i128) as u64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
