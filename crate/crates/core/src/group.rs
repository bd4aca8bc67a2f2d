//! Prime-order groups for the aggregate scheme.
//!
//! Two backends present the same interface:
//!
//! * [`Group::Schnorr`]: the order-`q` subgroup of `Z_p^*` described by
//!   [`GroupParams`]. Only small moduli (`p < 2^64`) are supported; this
//!   backend exists so the verification equation can be checked against
//!   exhaustive discrete-log search.
//! * [`Group::Ristretto255`]: the prime-order group built on Curve25519,
//!   order `2^252 + 27742317777372353535851937790883648493`.
//!
//! The aggregate scheme is written multiplicatively (`exp`, `mul`), which for
//! the curve backend means scalar multiplication and point addition.
//!
//! Scalars serialize as 32-byte big-endian integers; elements use the
//! backend's canonical 32-byte encoding (big-endian, zero padded, for the
//! Schnorr backend). Scalar arithmetic here is not constant time.

use std::fmt;

use curve25519_dalek::ristretto::{CompressedRistretto, RistrettoPoint};
use curve25519_dalek::traits::Identity;
use num_bigint::BigUint;
use num_traits::Zero;
use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::hash::{hash_to_scalar, Domain};

pub const SCALAR_LEN: usize = 32;
pub const ELEMENT_LEN: usize = 32;

/// Wire tag for the Schnorr mod-p backend.
pub const BACKEND_SCHNORR: u8 = 0x01;
/// Wire tag for the Ristretto255 backend.
pub const BACKEND_RISTRETTO: u8 = 0x02;

static RISTRETTO_ORDER: Lazy<BigUint> = Lazy::new(|| {
    use curve25519_dalek::scalar::Scalar as S;
    let minus_one = S::ZERO - S::ONE;
    BigUint::from_bytes_le(minus_one.as_bytes()) + 1u8
});

/// Schnorr group description: prime `p`, prime `q | p - 1`, and a generator
/// `alpha` of the order-`q` subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupParams {
    pub p: u64,
    pub q: u64,
    pub alpha: u64,
}

impl GroupParams {
    pub fn new(p: u64, q: u64, alpha: u64) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidParams(format!("group ({p}, {q}, {alpha}): {m}")));
        if !is_prime_u64(p) {
            return bad("p is not prime");
        }
        if !is_prime_u64(q) {
            return bad("q is not prime");
        }
        if q <= 2 {
            return bad("q must exceed 2");
        }
        if !(p - 1).is_multiple_of(q) {
            return bad("q does not divide p - 1");
        }
        if alpha <= 1 || alpha >= p {
            return bad("alpha must lie in (1, p)");
        }
        if pow_mod(alpha, q, p) != 1 {
            return bad("alpha does not have order q");
        }
        Ok(GroupParams { p, q, alpha })
    }

    /// `p = 23, q = 11, alpha = 2`.
    pub fn small_test() -> Self {
        GroupParams { p: 23, q: 11, alpha: 2 }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct SchnorrGroup {
    params: GroupParams,
    order: BigUint,
}

impl fmt::Debug for SchnorrGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SchnorrGroup{:?}", self.params)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Group {
    Schnorr(SchnorrGroup),
    Ristretto255,
}

/// Exponent in `[0, q - 1]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar(BigUint);

impl Scalar {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_bytes(&self) -> [u8; SCALAR_LEN] {
        let raw = self.0.to_bytes_be();
        let mut out = [0u8; SCALAR_LEN];
        out[SCALAR_LEN - raw.len()..].copy_from_slice(&raw);
        out
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupElement {
    ModP(u64),
    Point(RistrettoPoint),
}

impl Group {
    pub fn small_test() -> Self {
        Group::from_params(GroupParams::small_test())
    }

    pub fn production() -> Self {
        Group::Ristretto255
    }

    pub fn from_params(params: GroupParams) -> Self {
        Group::Schnorr(SchnorrGroup {
            params,
            order: BigUint::from(params.q),
        })
    }

    /// Schnorr parameters, if this is the mod-p backend.
    pub fn params(&self) -> Option<&GroupParams> {
        match self {
            Group::Schnorr(g) => Some(&g.params),
            Group::Ristretto255 => None,
        }
    }

    pub fn backend_tag(&self) -> u8 {
        match self {
            Group::Schnorr(_) => BACKEND_SCHNORR,
            Group::Ristretto255 => BACKEND_RISTRETTO,
        }
    }

    pub fn order(&self) -> &BigUint {
        match self {
            Group::Schnorr(g) => &g.order,
            Group::Ristretto255 => &RISTRETTO_ORDER,
        }
    }

    pub fn generator(&self) -> GroupElement {
        match self {
            Group::Schnorr(g) => GroupElement::ModP(g.params.alpha),
            Group::Ristretto255 => {
                GroupElement::Point(curve25519_dalek::constants::RISTRETTO_BASEPOINT_POINT)
            }
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            Group::Schnorr(_) => GroupElement::ModP(1),
            Group::Ristretto255 => GroupElement::Point(RistrettoPoint::identity()),
        }
    }

    /// `base^s`.
    ///
    /// # Panics
    ///
    /// If `base` came from the other backend.
    pub fn exp(&self, base: &GroupElement, s: &Scalar) -> GroupElement {
        match (self, base) {
            (Group::Schnorr(g), GroupElement::ModP(b)) => {
                let e = u64::try_from(&s.0).expect("scalar below q");
                GroupElement::ModP(pow_mod(*b, e, g.params.p))
            }
            (Group::Ristretto255, GroupElement::Point(pt)) => {
                GroupElement::Point(pt * to_dalek(s))
            }
            _ => panic!("group element from a different backend"),
        }
    }

    /// `alpha^s`.
    pub fn exp_generator(&self, s: &Scalar) -> GroupElement {
        match self {
            Group::Ristretto255 => GroupElement::Point(RistrettoPoint::mul_base(&to_dalek(s))),
            _ => self.exp(&self.generator(), s),
        }
    }

    /// Group operation.
    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (self, a, b) {
            (Group::Schnorr(g), GroupElement::ModP(x), GroupElement::ModP(y)) => {
                GroupElement::ModP(mul_mod(*x, *y, g.params.p))
            }
            (Group::Ristretto255, GroupElement::Point(x), GroupElement::Point(y)) => {
                GroupElement::Point(x + y)
            }
            _ => panic!("group element from a different backend"),
        }
    }

    /// Reduces an arbitrary integer into a scalar.
    pub fn scalar(&self, v: impl Into<BigUint>) -> Scalar {
        Scalar(v.into() % self.order())
    }

    pub fn scalar_add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        Scalar((&a.0 + &b.0) % self.order())
    }

    pub fn scalar_sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let q = self.order();
        Scalar((&a.0 + q - (&b.0 % q)) % q)
    }

    pub fn scalar_mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        Scalar((&a.0 * &b.0) % self.order())
    }

    /// Hash into `[1, q - 1]`; see [`hash_to_scalar`].
    pub fn hash_to_scalar(&self, domain: Domain, parts: &[&[u8]]) -> Scalar {
        Scalar(hash_to_scalar(domain, parts, self.order()))
    }

    pub fn encode_scalar(&self, s: &Scalar) -> [u8; SCALAR_LEN] {
        s.to_bytes()
    }

    /// Rejects non-canonical encodings (values `>= q`).
    pub fn decode_scalar(&self, bytes: &[u8]) -> Result<Scalar> {
        if bytes.len() != SCALAR_LEN {
            return Err(Error::decode("scalar must be 32 bytes"));
        }
        let v = BigUint::from_bytes_be(bytes);
        if &v >= self.order() {
            return Err(Error::decode("scalar not reduced modulo the group order"));
        }
        Ok(Scalar(v))
    }

    pub fn encode_element(&self, e: &GroupElement) -> [u8; ELEMENT_LEN] {
        match e {
            GroupElement::ModP(v) => {
                let mut out = [0u8; ELEMENT_LEN];
                out[ELEMENT_LEN - 8..].copy_from_slice(&v.to_be_bytes());
                out
            }
            GroupElement::Point(pt) => pt.compress().to_bytes(),
        }
    }

    /// Decodes and checks subgroup membership.
    pub fn decode_element(&self, bytes: &[u8]) -> Result<GroupElement> {
        let bytes: [u8; ELEMENT_LEN] = bytes
            .try_into()
            .map_err(|_| Error::decode("group element must be 32 bytes"))?;
        match self {
            Group::Schnorr(g) => {
                if bytes[..ELEMENT_LEN - 8].iter().any(|&b| b != 0) {
                    return Err(Error::decode("group element out of range"));
                }
                let v = u64::from_be_bytes(bytes[ELEMENT_LEN - 8..].try_into().unwrap());
                if v == 0 || v >= g.params.p || pow_mod(v, g.params.q, g.params.p) != 1 {
                    return Err(Error::decode("value is not in the order-q subgroup"));
                }
                Ok(GroupElement::ModP(v))
            }
            Group::Ristretto255 => CompressedRistretto(bytes)
                .decompress()
                .map(GroupElement::Point)
                .ok_or_else(|| Error::decode("invalid ristretto255 encoding")),
        }
    }

    /// Backend tag followed by the Schnorr parameters when applicable
    /// (three 8-byte big-endian integers).
    pub fn encode(&self) -> Vec<u8> {
        let mut out = vec![self.backend_tag()];
        if let Group::Schnorr(g) = self {
            out.extend_from_slice(&g.params.p.to_be_bytes());
            out.extend_from_slice(&g.params.q.to_be_bytes());
            out.extend_from_slice(&g.params.alpha.to_be_bytes());
        }
        out
    }

    /// Inverse of [`Group::encode`]; returns the group and bytes consumed.
    pub fn decode(bytes: &[u8]) -> Result<(Group, usize)> {
        match bytes.first() {
            Some(&BACKEND_RISTRETTO) => Ok((Group::Ristretto255, 1)),
            Some(&BACKEND_SCHNORR) => {
                if bytes.len() < 25 {
                    return Err(Error::decode("truncated group parameters"));
                }
                let rd = |i: usize| u64::from_be_bytes(bytes[i..i + 8].try_into().unwrap());
                let params = GroupParams::new(rd(1), rd(9), rd(17))?;
                Ok((Group::from_params(params), 25))
            }
            Some(t) => Err(Error::decode(format!("unknown group backend tag {t:#04x}"))),
            None => Err(Error::decode("missing group backend tag")),
        }
    }
}

fn to_dalek(s: &Scalar) -> curve25519_dalek::scalar::Scalar {
    let mut le = [0u8; 32];
    let raw = s.0.to_bytes_le();
    le[..raw.len()].copy_from_slice(&raw);
    curve25519_dalek::scalar::Scalar::from_bytes_mod_order(le)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; these witnesses cover every 64-bit integer.
fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Group {
        Group::small_test()
    }

    fn modp(e: &GroupElement) -> u64 {
        match e {
            GroupElement::ModP(v) => *v,
            _ => unreachable!(),
        }
    }

    #[test]
    fn small_params_are_valid() {
        let p = GroupParams::small_test();
        assert_eq!(GroupParams::new(p.p, p.q, p.alpha), Ok(p));
        // 2^11 = 2048 = 89 * 23 + 1
        assert_eq!(pow_mod(2, 11, 23), 1);
        assert_ne!(pow_mod(2, 1, 23), 1);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(GroupParams::new(22, 11, 2).is_err());
        assert!(GroupParams::new(23, 7, 2).is_err());
        assert!(GroupParams::new(23, 11, 1).is_err());
        // 5 has order 22 mod 23
        assert!(GroupParams::new(23, 11, 5).is_err());
    }

    #[test]
    fn tiny_subgroup_has_eleven_members() {
        let g = tiny();
        let mut seen = std::collections::BTreeSet::new();
        let mut acc = g.identity();
        for _ in 0..11 {
            seen.insert(modp(&acc));
            acc = g.mul(&acc, &g.generator());
        }
        assert_eq!(acc, g.identity());
        assert_eq!(seen.len(), 11);
    }

    #[test]
    fn tiny_exp_vectors() {
        let g = tiny();
        assert_eq!(modp(&g.exp(&g.generator(), &g.scalar(5u8))), 9);
        let h = GroupElement::ModP(8);
        assert_eq!(g.exp(&h, &g.scalar(1u8)), h);
        let inv = g.exp(&h, &g.scalar(10u8));
        assert_eq!(g.mul(&inv, &h), g.identity());
    }

    #[test]
    fn tiny_scalar_arithmetic() {
        let g = tiny();
        let s = g.scalar_sub(&g.scalar(5u8), &g.scalar_mul(&g.scalar(4u8), &g.scalar(3u8)));
        assert_eq!(s, g.scalar(4u8));
        let a = g.scalar(7u8);
        assert_eq!(g.scalar_add(&a, &Scalar::default()), a);
        assert!(g.scalar_sub(&a, &a).is_zero());
    }

    #[test]
    fn tiny_exp_agrees_with_exhaustive_dlog() {
        let g = tiny();
        for s in 0u8..11 {
            let e = g.exp_generator(&g.scalar(s));
            let mut acc = g.identity();
            let mut found = None;
            for cand in 0u8..11 {
                if acc == e {
                    found = Some(cand);
                    break;
                }
                acc = g.mul(&acc, &g.generator());
            }
            assert_eq!(found, Some(s));
        }
    }

    #[test]
    fn production_order_and_laws() {
        let g = Group::production();
        assert!(g.order().bits() >= 250);
        let zero = Scalar::default();
        assert_eq!(g.exp_generator(&zero), g.identity());
        let q_minus_1 = g.scalar(g.order() - 1u8);
        let a = g.exp_generator(&q_minus_1);
        assert_eq!(g.mul(&a, &g.generator()), g.identity());
        let x = g.scalar(123456789u64);
        let y = g.scalar(987654321u64);
        assert_eq!(
            g.exp(&g.exp_generator(&x), &y),
            g.exp_generator(&g.scalar_mul(&x, &y))
        );
        assert_eq!(g.exp(&g.generator(), &x), g.exp_generator(&x));
    }

    #[test]
    fn encodings_round_trip_and_reject_garbage() {
        for g in [tiny(), Group::production()] {
            let s = g.hash_to_scalar(Domain::H0, &[b"x"]);
            assert_eq!(g.decode_scalar(&g.encode_scalar(&s)).unwrap(), s);
            let e = g.exp_generator(&s);
            assert_eq!(g.decode_element(&g.encode_element(&e)).unwrap(), e);
            assert!(g.decode_scalar(&[0xff; 32]).is_err());
            let (back, used) = Group::decode(&g.encode()).unwrap();
            assert_eq!(back, g);
            assert_eq!(used, g.encode().len());
        }
        // 5 is not in the order-11 subgroup of Z_23^*
        let mut five = [0u8; 32];
        five[31] = 5;
        assert!(tiny().decode_element(&five).is_err());
    }

    proptest::proptest! {
        #[test]
        fn exponent_homomorphism(a in 0u64..u64::MAX, b in 0u64..u64::MAX) {
            for g in [tiny(), Group::production()] {
                let (sa, sb) = (g.scalar(a), g.scalar(b));
                proptest::prop_assert_eq!(
                    g.exp_generator(&g.scalar_add(&sa, &sb)),
                    g.mul(&g.exp_generator(&sa), &g.exp_generator(&sb))
                );
            }
        }
    }
}
