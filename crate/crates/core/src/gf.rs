//! Exact arithmetic in small finite fields GF(p^e).
//!
//! Elements are stored by their integer encoding `Σ cᵢ pⁱ`, where `cᵢ` are
//! the coefficients of the residue polynomial (low degree first). The
//! encoding is a bijection onto `0..q`, with `0` the additive and `1` the
//! multiplicative identity. All operations go through precomputed tables,
//! so the fast path is a single lookup.
//!
//! Two layers are exposed:
//!
//! * raw operations on `u16` encodings (`add`, `mul`, ...) used by the
//!   geometry code, which never mixes fields;
//! * checked operations on [`FieldElement`] (`try_add`, ...) which carry the
//!   identity of their field and reject mixed-field operands.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order accepted unless a caller raises it.
pub const DEFAULT_ORDER_CEILING: u32 = 128;

/// Hard limit on any configured ceiling (tables are `q²` entries).
pub const MAX_ORDER_CEILING: u32 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {q} exceeds the configured ceiling {ceiling}")]
    OrderTooLarge { q: u64, ceiling: u32 },
    #[error("modulus {modulus:?} is not monic of degree {degree} over GF({p})")]
    BadModulusShape { modulus: Vec<u32>, degree: u32, p: u32 },
    #[error("modulus {modulus:?} is reducible over GF({p})")]
    ReducibleModulus { modulus: Vec<u32>, p: u32 },
    #[error("no built-in modulus for GF({p}^{e}); supply one explicitly")]
    NoDefaultModulus { p: u32, e: u32 },
    #[error("element code {code} is out of range for GF({q})")]
    CodeOutOfRange { code: u32, q: u32 },
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Identity of a field: derived from `(p, e, modulus)`, so two independently
/// constructed copies of the same field compare equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FieldId(u64);

impl FieldId {
    fn derive(p: u32, e: u32, modulus: &[u32]) -> Self {
        // FNV-1a over the defining data.
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for w in [p, e].iter().chain(modulus.iter()) {
            for b in w.to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        FieldId(h)
    }
}

/// An element tagged with the field it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement {
    field: FieldId,
    code: u16,
}

impl FieldElement {
    pub fn code(self) -> u16 {
        self.code
    }

    pub fn field(self) -> FieldId {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.code == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)
    }
}

/// A validated finite field together with its operation tables.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    id: FieldId,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
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

/// Splits `q = p^e` with `p` prime, or returns `None`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

/// Built-in moduli (Conway polynomials, coefficients low to high).
///
/// | q   | modulus              |
/// |-----|----------------------|
/// | 4   | x²+x+1               |
/// | 8   | x³+x+1               |
/// | 9   | x²+2x+2              |
/// | 16  | x⁴+x+1               |
/// | 25  | x²+4x+2              |
/// | 27  | x³+2x+1              |
/// | 32  | x⁵+x²+1              |
/// | 49  | x²+6x+3              |
/// | 64  | x⁶+x⁴+x³+x+1         |
/// | 81  | x⁴+2x³+2             |
/// | 121 | x²+7x+2              |
/// | 125 | x³+3x+3              |
/// | 128 | x⁷+x+1               |
///
/// Prime fields use `x` (the residue representation is the integer itself).
pub fn default_modulus(p: u32, e: u32) -> Option<Vec<u32>> {
    let m: &[u32] = match (p, e) {
        (_, 1) => return Some(vec![0, 1]),
        (2, 2) => &[1, 1, 1],
        (2, 3) => &[1, 1, 0, 1],
        (2, 4) => &[1, 1, 0, 0, 1],
        (2, 5) => &[1, 0, 1, 0, 0, 1],
        (2, 6) => &[1, 1, 0, 1, 1, 0, 1],
        (2, 7) => &[1, 1, 0, 0, 0, 0, 0, 1],
        (3, 2) => &[2, 2, 1],
        (3, 3) => &[1, 2, 0, 1],
        (3, 4) => &[2, 0, 0, 2, 1],
        (5, 2) => &[2, 4, 1],
        (5, 3) => &[3, 3, 0, 1],
        (7, 2) => &[3, 6, 1],
        (11, 2) => &[2, 7, 1],
        _ => return None,
    };
    Some(m.to_vec())
}

/// Remainder of `a` modulo monic `m` over GF(p); both low-to-high.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r[r.len() - 1] % p;
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (k, &c) in m.iter().enumerate() {
                let idx = shift + k;
                r[idx] = (r[idx] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let e = m.len() - 1;
    if e <= 1 {
        return true;
    }
    // Any factorization has a monic factor of degree <= e/2.
    for d in 1..=e / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut f = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                f.push((c % p as u64) as u32);
                c /= p as u64;
            }
            f.push(1);
            if poly_rem(m, &f, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

/// Builds GF(p^e) with the default ceiling.
pub fn make_field(p: u32, e: u32, modulus: Option<&[u32]>) -> Result<FieldSpec, GfError> {
    make_field_with_ceiling(p, e, modulus, DEFAULT_ORDER_CEILING)
}

pub fn make_field_with_ceiling(p: u32, e: u32, modulus: Option<&[u32]>, ceiling: u32) -> Result<FieldSpec, GfError> {
    if !is_prime(u64::from(p)) {
        return Err(GfError::CompositeCharacteristic(p));
    }
    if e == 0 {
        return Err(GfError::ZeroDegree);
    }
    let ceiling = ceiling.min(MAX_ORDER_CEILING);
    let q = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
    if q > u64::from(ceiling) {
        return Err(GfError::OrderTooLarge { q, ceiling });
    }
    let modulus = match modulus {
        Some(m) => m.to_vec(),
        None => default_modulus(p, e).ok_or(GfError::NoDefaultModulus { p, e })?,
    };
    if modulus.len() != e as usize + 1 || modulus.last() != Some(&1) || modulus.iter().any(|&c| c >= p) {
        return Err(GfError::BadModulusShape { modulus, degree: e, p });
    }
    if !is_irreducible(&modulus, p) {
        return Err(GfError::ReducibleModulus { modulus, p });
    }
    Ok(FieldSpec::from_validated(p, e, q as u32, modulus))
}

/// Builds GF(q) for a prime power `q` using the built-in modulus.
pub fn field_of_order(q: u64) -> Result<FieldSpec, GfError> {
    field_of_order_with_ceiling(q, DEFAULT_ORDER_CEILING)
}

pub fn field_of_order_with_ceiling(q: u64, ceiling: u32) -> Result<FieldSpec, GfError> {
    let (p, e) = prime_power(q).ok_or(GfError::NotPrimePower(q))?;
    make_field_with_ceiling(p, e, None, ceiling)
}

impl FieldSpec {
    fn from_validated(p: u32, e: u32, q: u32, modulus: Vec<u32>) -> Self {
        let qs = q as usize;
        let digits = |mut c: usize| {
            let mut v = vec![0u32; e as usize];
            for d in v.iter_mut() {
                *d = (c % p as usize) as u32;
                c /= p as usize;
            }
            v
        };
        let encode = |v: &[u32]| v.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize);
        let polys: Vec<Vec<u32>> = (0..qs).map(digits).collect();

        let mut add = vec![0u16; qs * qs];
        let mut mul = vec![0u16; qs * qs];
        for a in 0..qs {
            for b in 0..qs {
                let s: Vec<u32> = polys[a].iter().zip(&polys[b]).map(|(x, y)| (x + y) % p).collect();
                add[a * qs + b] = encode(&s) as u16;

                let mut prod = vec![0u32; 2 * e as usize - 1];
                for (i, x) in polys[a].iter().enumerate() {
                    for (j, y) in polys[b].iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(&prod, &modulus, p);
                r.resize(e as usize, 0);
                mul[a * qs + b] = encode(&r) as u16;
            }
        }
        let neg: Vec<u16> = (0..qs).map(|a| (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as u16).collect();

        let id = FieldId::derive(p, e, &modulus);
        let mut field = FieldSpec { p, e, q, modulus, id, add, mul, neg, inv: vec![0; qs] };
        // a^(q-2); inv[0] stays 0 and is never handed out by the checked API.
        for a in 1..qs {
            field.inv[a] = field.pow(a as u16, u64::from(q) - 2);
        }
        field
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn id(&self) -> FieldId {
        self.id
    }

    /// `q mod 3` as a signed residue in `{-1, 0, 1}`.
    pub fn xi(&self) -> i32 {
        match self.q % 3 {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }

    /// All encodings in ascending order.
    pub fn codes(&self) -> impl Iterator<Item = u16> + Clone {
        0..self.q as u16
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    /// Inverse of a nonzero encoding. Returns 0 for 0.
    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }

    pub fn pow(&self, a: u16, mut n: u64) -> u16 {
        let mut base = a;
        let mut acc = 1u16;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// The image of the integer `n` in the prime subfield.
    pub fn from_int(&self, n: i64) -> u16 {
        n.rem_euclid(i64::from(self.p)) as u16
    }

    pub fn elem(&self, code: u32) -> Result<FieldElement, GfError> {
        if code >= self.q {
            return Err(GfError::CodeOutOfRange { code, q: self.q });
        }
        Ok(FieldElement { field: self.id, code: code as u16 })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.id, code: 0 }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { field: self.id, code: 1 }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        self.codes().map(move |code| FieldElement { field: self.id, code })
    }

    fn own(&self, a: FieldElement) -> Result<u16, GfError> {
        if a.field != self.id {
            return Err(GfError::FieldMismatch);
        }
        Ok(a.code)
    }

    fn wrap(&self, code: u16) -> FieldElement {
        FieldElement { field: self.id, code }
    }

    pub fn try_add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.wrap(self.add(self.own(a)?, self.own(b)?)))
    }

    pub fn try_sub(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.wrap(self.sub(self.own(a)?, self.own(b)?)))
    }

    pub fn try_mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.wrap(self.mul(self.own(a)?, self.own(b)?)))
    }

    pub fn try_neg(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.wrap(self.neg(self.own(a)?)))
    }

    pub fn try_inv(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        match self.own(a)? {
            0 => Err(GfError::InverseOfZero),
            c => Ok(self.wrap(self.inv(c))),
        }
    }

    pub fn try_pow(&self, a: FieldElement, n: u64) -> Result<FieldElement, GfError> {
        Ok(self.wrap(self.pow(self.own(a)?, n)))
    }

    pub fn is_square(&self, a: u16) -> bool {
        a == 0 || self.q.is_multiple_of(2) || self.pow(a, u64::from(self.q - 1) / 2) == 1
    }

    /// Whether `a` is a nonzero cube.
    pub fn is_cube(&self, a: u16) -> bool {
        a != 0 && (self.q % 3 != 1 || self.pow(a, u64::from(self.q - 1) / 3) == 1)
    }

    /// The quadratic character η: 0 at 0, +1 on nonzero squares, −1 otherwise.
    pub fn quadratic_character(&self, a: FieldElement) -> Result<i8, GfError> {
        let a = self.own(a)?;
        if self.p == 2 {
            return Err(GfError::Precondition("quadratic character needs odd characteristic".into()));
        }
        Ok(match a {
            0 => 0,
            _ if self.is_square(a) => 1,
            _ => -1,
        })
    }

    /// `#{a : a²+a+1 is a square}`; requires odd `q ≡ −1 (mod 3)`.
    pub fn count_square_values_of_f(&self) -> Result<usize, GfError> {
        if self.q.is_multiple_of(2) || self.q % 3 != 2 {
            return Err(GfError::Precondition(format!("need odd q with q ≡ −1 (mod 3), got q = {}", self.q)));
        }
        let one = 1u16;
        Ok(self
            .codes()
            .filter(|&a| {
                let f = self.add(self.add(self.mul(a, a), a), one);
                self.is_square(f)
            })
            .count())
    }

    /// Counts cube and non-cube results over the multiset of products of
    /// three distinct elements of `F_q^*`; requires `q ≡ 1 (mod 3)`.
    ///
    /// Uses the homomorphism `x ↦ x^((q−1)/3)` onto the cube roots of unity:
    /// a product is a cube iff the images multiply to 1.
    pub fn triple_product_class_counts(&self) -> Result<(u64, u64), GfError> {
        if self.q % 3 != 1 {
            return Err(GfError::Precondition(format!("need q ≡ 1 (mod 3), got q = {}", self.q)));
        }
        let exp = u64::from(self.q - 1) / 3;
        let mut roots: Vec<u16> = Vec::new();
        let mut sizes: Vec<u64> = Vec::new();
        for a in 1..self.q as u16 {
            let w = self.pow(a, exp);
            match roots.iter().position(|&r| r == w) {
                Some(i) => sizes[i] += 1,
                None => {
                    roots.push(w);
                    sizes.push(1);
                }
            }
        }
        let choose = |n: u64, k: u64| -> u64 {
            if k > n {
                return 0;
            }
            (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
        };
        let mut cubes = 0u64;
        let mut total = 0u64;
        // Multisets of classes {a ≤ b ≤ c}.
        let r = roots.len();
        for a in 0..r {
            for b in a..r {
                for c in b..r {
                    let count = if a == b && b == c {
                        choose(sizes[a], 3)
                    } else if a == b {
                        choose(sizes[a], 2) * sizes[c]
                    } else if b == c {
                        sizes[a] * choose(sizes[b], 2)
                    } else {
                        sizes[a] * sizes[b] * sizes[c]
                    };
                    total += count;
                    if self.mul(self.mul(roots[a], roots[b]), roots[c]) == 1 {
                        cubes += count;
                    }
                }
            }
        }
        Ok((cubes, total - cubes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields_have_integer_arithmetic() {
        let f = make_field(5, 1, None).unwrap();
        assert_eq!(f.order(), 5);
        assert_eq!(f.codes().collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
        assert_eq!(f.inv(2), 3);
        let f7 = make_field(7, 1, None).unwrap();
        assert_eq!(f7.pow(3, 3), 6);
    }

    #[test]
    fn gf9_with_explicit_modulus() {
        // x²+1 has no root in GF(3): 0→1, 1→2, 2→5≡2.
        for x in 0..3u32 {
            assert_ne!((x * x + 1) % 3, 0);
        }
        let f = make_field(3, 2, Some(&[1, 0, 1])).unwrap();
        assert_eq!(f.order(), 9);
        for a in f.codes() {
            for b in f.codes() {
                for c in f.codes() {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn construction_errors() {
        assert_eq!(make_field(4, 1, None).unwrap_err(), GfError::CompositeCharacteristic(4));
        assert_eq!(make_field(3, 0, None).unwrap_err(), GfError::ZeroDegree);
        // x²+2 = (x+1)(x+2) over GF(3)
        assert!(matches!(make_field(3, 2, Some(&[2, 0, 1])), Err(GfError::ReducibleModulus { .. })));
        assert!(matches!(make_field(3, 2, Some(&[1, 0, 2])), Err(GfError::BadModulusShape { .. })));
        assert!(matches!(make_field(2, 8, None), Err(GfError::OrderTooLarge { .. })));
        assert!(matches!(make_field_with_ceiling(2, 8, None, 256), Err(GfError::NoDefaultModulus { .. })));
        assert_eq!(field_of_order(6).unwrap_err(), GfError::NotPrimePower(6));
    }

    #[test]
    fn default_moduli_cover_required_orders() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64, 81, 121, 125, 128] {
            let f = field_of_order(q).unwrap();
            assert_eq!(u64::from(f.order()), q);
        }
    }

    #[test]
    fn identities_and_inverse_involution() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32] {
            let f = field_of_order(q).unwrap();
            for a in f.codes() {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.mul(a, 0), 0);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                    assert_eq!(f.inv(f.inv(a)), a);
                }
            }
        }
    }

    #[test]
    fn cube_map_image_size() {
        for q in [4u64, 5, 7, 8, 9, 11, 13, 16, 25, 27] {
            let f = field_of_order(q).unwrap();
            let mut image: Vec<u16> = (1..f.order() as u16).map(|a| f.pow(a, 3)).collect();
            image.sort_unstable();
            image.dedup();
            let expected = if q % 3 == 1 { (q - 1) / 3 } else { q - 1 };
            assert_eq!(image.len() as u64, expected, "q = {q}");
        }
    }

    #[test]
    fn checked_api_rejects_mixed_fields_and_zero_inverse() {
        let f5 = field_of_order(5).unwrap();
        let f7 = field_of_order(7).unwrap();
        let a = f5.elem(2).unwrap();
        let b = f7.elem(2).unwrap();
        assert_eq!(f5.try_add(a, b), Err(GfError::FieldMismatch));
        assert_eq!(f7.try_mul(a, b), Err(GfError::FieldMismatch));
        assert_eq!(f5.try_inv(f5.zero()), Err(GfError::InverseOfZero));
        assert_eq!(f5.try_inv(a).unwrap().code(), 3);
        assert_eq!(f7.try_pow(f7.elem(3).unwrap(), 3).unwrap().code(), 6);
        assert!(f5.elem(5).is_err());
        // same field built twice is the same field
        let again = field_of_order(5).unwrap();
        assert_eq!(again.try_add(a, a).unwrap().code(), 4);
    }

    #[test]
    fn quadratic_character_gf7() {
        let f = field_of_order(7).unwrap();
        let squares: Vec<u16> = (1..7).map(|a| f.mul(a, a)).collect();
        for a in f.elements() {
            let expected = if a.is_zero() {
                0
            } else if squares.contains(&a.code()) {
                1
            } else {
                -1
            };
            assert_eq!(f.quadratic_character(a).unwrap(), expected);
        }
        assert_eq!(f.quadratic_character(f.elem(2).unwrap()).unwrap(), 1);
        assert_eq!(f.quadratic_character(f.elem(3).unwrap()).unwrap(), -1);
        let f4 = field_of_order(4).unwrap();
        assert!(f4.quadratic_character(f4.one()).is_err());
    }

    #[test]
    fn square_values_of_a2_a_1() {
        assert_eq!(field_of_order(5).unwrap().count_square_values_of_f().unwrap(), 2);
        assert_eq!(field_of_order(11).unwrap().count_square_values_of_f().unwrap(), 5);
        assert!(field_of_order(7).unwrap().count_square_values_of_f().is_err());
        assert!(field_of_order(8).unwrap().count_square_values_of_f().is_err());
    }

    fn brute_triples(f: &FieldSpec) -> (u64, u64) {
        let cubes: Vec<u16> = (1..f.order() as u16).map(|a| f.pow(a, 3)).collect();
        let mut c = 0;
        let mut nc = 0;
        let n = f.order() as u16;
        for a in 1..n {
            for b in a + 1..n {
                for d in b + 1..n {
                    if cubes.contains(&f.mul(f.mul(a, b), d)) {
                        c += 1;
                    } else {
                        nc += 1;
                    }
                }
            }
        }
        (c, nc)
    }

    #[test]
    fn triple_products_match_brute_force() {
        for q in [7u64, 13, 16, 19, 25] {
            let f = field_of_order(q).unwrap();
            assert_eq!(f.triple_product_class_counts().unwrap(), brute_triples(&f), "q = {q}");
        }
        assert_eq!(field_of_order(7).unwrap().triple_product_class_counts().unwrap(), (8, 12));
        // ((q−1)/3)·(q²−5q+10)/6 = 4·19 and (2(q−1)/3)·(q²−5q+4)/6 = 8·18 at q = 13
        assert_eq!(field_of_order(13).unwrap().triple_product_class_counts().unwrap(), (76, 144));
        assert!(field_of_order(5).unwrap().triple_product_class_counts().is_err());
    }
}
