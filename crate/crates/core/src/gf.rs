//! Exact arithmetic in F_{q^2} for odd q = p^e.
//!
//! Every nonzero element is stored as its discrete logarithm to a fixed
//! primitive element θ, so multiplication, inversion, powers, Frobenius and
//! the norm map are all integer arithmetic modulo q^2 - 1. Addition goes
//! through a Zech logarithm table built once per context.
//!
//! The subfield F_q is the set of fixed points of x -> x^q; its nonzero
//! elements are exactly the powers θ^d with (q + 1) | d.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest q^2 for which tables are built unless overridden.
pub const DEFAULT_TABLE_BUDGET: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not a prime")]
    NonPrime(u64),
    #[error("characteristic 2 is not supported (q must be odd)")]
    EvenCharacteristic,
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of size {size} exceeds the table budget of {budget} elements")]
    TableBudgetExceeded { size: u64, budget: u64 },
    #[error("modulus {0:?} is not a monic degree-2e polynomial with x primitive")]
    InvalidModulus(Vec<u32>),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not in the base field F_q")]
    NotInBaseField,
    #[error("norm equation has no nonzero solution for a zero input")]
    ZeroInput,
}

/// An element of F_{q^2}: zero, or θ^d with d reduced modulo q^2 - 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElement {
    Zero,
    Pow(u32),
}

impl FieldElement {
    pub const ONE: FieldElement = FieldElement::Pow(0);

    pub fn is_zero(self) -> bool {
        matches!(self, FieldElement::Zero)
    }

    /// Discrete log to base θ, `None` for zero.
    pub fn log(self) -> Option<u32> {
        match self {
            FieldElement::Zero => None,
            FieldElement::Pow(d) => Some(d),
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Zero => f.write_str("0"),
            FieldElement::Pow(d) => write!(f, "θ^{d}"),
        }
    }
}

// Wire form: the string "0" for zero, the bare exponent d for θ^d.
impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            FieldElement::Zero => serializer.serialize_str("0"),
            FieldElement::Pow(d) => serializer.serialize_u32(*d),
        }
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Exp(u32),
            Text(String),
        }
        match Wire::deserialize(deserializer)? {
            Wire::Exp(d) => Ok(FieldElement::Pow(d)),
            Wire::Text(s) if s == "0" => Ok(FieldElement::Zero),
            Wire::Text(s) => Err(serde::de::Error::custom(format!(
                "field element must be \"0\" or an exponent, got {s:?}"
            ))),
        }
    }
}

/// The tower F_p ⊆ F_q ⊆ F_{q^2} together with its log/antilog/Zech tables.
///
/// Immutable once built; share it behind an `Arc`.
pub struct FieldContext {
    p: u32,
    e: u32,
    q: u32,
    /// q^2 - 1, the order of θ.
    order: u32,
    /// Low-to-high coefficients of the monic degree-2e modulus.
    modulus: Vec<u32>,
    /// d -> packed polynomial of θ^d (base-p digits, constant term lowest).
    antilog: Vec<u32>,
    /// packed polynomial -> d; entry 0 is unused.
    log: Vec<u32>,
    /// n -> log(1 + θ^n), or `NO_ZECH` when 1 + θ^n = 0.
    zech: Vec<u32>,
    xi_exponent: u32,
}

const NO_ZECH: u32 = u32::MAX;

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldContext")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish_non_exhaustive()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits q = p^e, returning `None` if q is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

impl FieldContext {
    /// Builds F_{q^2} for q = p^e under the default table budget.
    pub fn new(p: u64, e: u32) -> Result<Self, GfError> {
        Self::with_budget(p, e, DEFAULT_TABLE_BUDGET)
    }

    /// Builds F_{q^2} with the lexicographically smallest modulus for which
    /// x is primitive.
    pub fn with_budget(p: u64, e: u32, budget: u64) -> Result<Self, GfError> {
        let (p32, degree) = Self::check_sizes(p, e, budget)?;
        let size = (p as u64).pow(degree as u32);
        // Low coefficients enumerate 0, 1, 2, ... as base-p digit strings,
        // which is lexicographic order with the highest coefficient first.
        for packed in 0..size {
            let mut modulus = unpack(packed as u32, p32, degree);
            if modulus[0] == 0 {
                continue;
            }
            modulus.push(1);
            if let Some(ctx) = Self::try_build(p32, e, modulus) {
                return Ok(ctx);
            }
        }
        unreachable!("primitive polynomials exist in every degree")
    }

    /// Rebuilds a context from a stored modulus (low-to-high, monic).
    pub fn from_modulus(p: u64, e: u32, modulus: &[u32], budget: u64) -> Result<Self, GfError> {
        let (p32, degree) = Self::check_sizes(p, e, budget)?;
        let well_formed = modulus.len() == degree + 1
            && modulus[degree] == 1
            && modulus.iter().all(|&c| c < p32);
        if !well_formed {
            return Err(GfError::InvalidModulus(modulus.to_vec()));
        }
        Self::try_build(p32, e, modulus.to_vec())
            .ok_or_else(|| GfError::InvalidModulus(modulus.to_vec()))
    }

    fn check_sizes(p: u64, e: u32, budget: u64) -> Result<(u32, usize), GfError> {
        if !is_prime(p) {
            return Err(GfError::NonPrime(p));
        }
        if p == 2 {
            return Err(GfError::EvenCharacteristic);
        }
        if e == 0 {
            return Err(GfError::ZeroDegree);
        }
        let size = (p as u128).checked_pow(2 * e).unwrap_or(u128::MAX);
        if size > budget as u128 || size > u32::MAX as u128 {
            return Err(GfError::TableBudgetExceeded {
                size: size.min(u64::MAX as u128) as u64,
                budget,
            });
        }
        Ok((p as u32, 2 * e as usize))
    }

    /// Walks powers of x modulo `modulus`; succeeds only if x has order
    /// p^{2e} - 1, which also forces the modulus to be irreducible.
    fn try_build(p: u32, e: u32, modulus: Vec<u32>) -> Option<Self> {
        let degree = modulus.len() - 1;
        let size = p.pow(degree as u32);
        let order = size - 1;
        let mut antilog = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; size as usize];
        let mut cur = vec![0u32; degree];
        cur[0] = 1;
        for d in 0..order {
            let packed = pack(&cur, p);
            if log[packed as usize] != u32::MAX {
                return None;
            }
            log[packed as usize] = d;
            antilog.push(packed);
            mul_by_x(&mut cur, &modulus, p);
        }
        if pack(&cur, p) != 1 {
            return None;
        }

        let zech = (0..order)
            .map(|n| {
                let mut poly = unpack(antilog[n as usize], p, degree);
                poly[0] = (poly[0] + 1) % p;
                match pack(&poly, p) {
                    0 => NO_ZECH,
                    packed => log[packed as usize],
                }
            })
            .collect();

        let q = p.pow(e);
        let xi_exponent = (order - (q + 1) / 2) % order;
        Some(FieldContext {
            p,
            e,
            q,
            order,
            modulus,
            antilog,
            log,
            zech,
            xi_exponent,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// q^2 - 1.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn xi_exponent(&self) -> u32 {
        self.xi_exponent
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::Zero
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// θ^d for any integer d.
    pub fn theta_pow(&self, d: i64) -> FieldElement {
        FieldElement::Pow(d.rem_euclid(self.order as i64) as u32)
    }

    /// ξ = θ^{-(q+1)/2}, which satisfies ξ^q = -ξ.
    pub fn xi(&self) -> FieldElement {
        FieldElement::Pow(self.xi_exponent)
    }

    /// Image of an integer under Z -> F_p ⊆ F_{q^2}.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let c = n.rem_euclid(self.p as i64) as usize;
        if c == 0 {
            FieldElement::Zero
        } else {
            FieldElement::Pow(self.log[c])
        }
    }

    /// Coefficients of x in the polynomial basis, constant term first.
    pub fn coefficients(&self, x: FieldElement) -> Vec<u32> {
        let degree = self.modulus.len() - 1;
        match x {
            FieldElement::Zero => vec![0; degree],
            FieldElement::Pow(d) => unpack(self.antilog[d as usize], self.p, degree),
        }
    }

    /// Inverse of [`coefficients`](Self::coefficients).
    pub fn from_coefficients(&self, coeffs: &[u32]) -> FieldElement {
        match pack(coeffs, self.p) {
            0 => FieldElement::Zero,
            packed => FieldElement::Pow(self.log[packed as usize]),
        }
    }

    /// Every element of F_{q^2}, zero first, then θ^0, θ^1, ...
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        std::iter::once(FieldElement::Zero).chain((0..self.order).map(FieldElement::Pow))
    }

    /// The q - 1 nonzero elements of F_q, in increasing exponent order.
    pub fn base_field_units(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let step = self.q + 1;
        (0..self.q - 1).map(move |c| FieldElement::Pow(c * step))
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        match (x, y) {
            (FieldElement::Zero, other) | (other, FieldElement::Zero) => other,
            (FieldElement::Pow(a), FieldElement::Pow(b)) => {
                let diff = (b + self.order - a) % self.order;
                match self.zech[diff as usize] {
                    NO_ZECH => FieldElement::Zero,
                    z => FieldElement::Pow(((a as u64 + z as u64) % self.order as u64) as u32),
                }
            }
        }
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        match x {
            FieldElement::Zero => FieldElement::Zero,
            FieldElement::Pow(a) => FieldElement::Pow((a + self.order / 2) % self.order),
        }
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        match (x, y) {
            (FieldElement::Pow(a), FieldElement::Pow(b)) => {
                FieldElement::Pow(((a as u64 + b as u64) % self.order as u64) as u32)
            }
            _ => FieldElement::Zero,
        }
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement, GfError> {
        match x {
            FieldElement::Zero => Err(GfError::DivisionByZero),
            FieldElement::Pow(a) => Ok(FieldElement::Pow((self.order - a) % self.order)),
        }
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// x^n with the convention 0^0 = 1; negative n requires x ≠ 0.
    pub fn pow(&self, x: FieldElement, n: i64) -> Result<FieldElement, GfError> {
        match x {
            FieldElement::Zero if n == 0 => Ok(FieldElement::ONE),
            FieldElement::Zero if n > 0 => Ok(FieldElement::Zero),
            FieldElement::Zero => Err(GfError::DivisionByZero),
            FieldElement::Pow(d) => {
                let e = (d as i128 * n as i128).rem_euclid(self.order as i128);
                Ok(FieldElement::Pow(e as u32))
            }
        }
    }

    /// x^n for n ≥ 0; never fails.
    pub fn pow_u(&self, x: FieldElement, n: u64) -> FieldElement {
        match x {
            FieldElement::Zero if n == 0 => FieldElement::ONE,
            FieldElement::Zero => FieldElement::Zero,
            FieldElement::Pow(d) => {
                FieldElement::Pow(((d as u128 * n as u128) % self.order as u128) as u32)
            }
        }
    }

    /// x -> x^q.
    pub fn frobenius(&self, x: FieldElement) -> FieldElement {
        self.pow_u(x, self.q as u64)
    }

    /// x -> x^{q+1}, the norm down to F_q.
    pub fn norm(&self, x: FieldElement) -> FieldElement {
        self.pow_u(x, self.q as u64 + 1)
    }

    pub fn in_base_field(&self, x: FieldElement) -> bool {
        self.frobenius(x) == x
    }

    /// Smallest-exponent v with v^{q+1} = u, for nonzero u in F_q.
    pub fn solve_norm(&self, u: FieldElement) -> Result<FieldElement, GfError> {
        let FieldElement::Pow(d) = u else {
            return Err(GfError::ZeroInput);
        };
        if !self.in_base_field(u) {
            return Err(GfError::NotInBaseField);
        }
        // (q+1)·v ≡ d has solutions d/(q+1) + j(q-1); the first is < q-1.
        Ok(FieldElement::Pow(d / (self.q + 1)))
    }

    /// Sum of a sequence of elements.
    pub fn sum<I: IntoIterator<Item = FieldElement>>(&self, items: I) -> FieldElement {
        items
            .into_iter()
            .fold(FieldElement::Zero, |acc, x| self.add(acc, x))
    }
}

fn pack(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn unpack(mut packed: u32, p: u32, degree: usize) -> Vec<u32> {
    let mut out = vec![0; degree];
    for c in out.iter_mut() {
        *c = packed % p;
        packed /= p;
    }
    out
}

/// cur <- x · cur mod modulus.
fn mul_by_x(cur: &mut [u32], modulus: &[u32], p: u32) {
    let degree = cur.len();
    let top = cur[degree - 1];
    for i in (1..degree).rev() {
        cur[i] = cur[i - 1];
    }
    cur[0] = 0;
    if top != 0 {
        for (c, &m) in cur.iter_mut().zip(modulus) {
            *c = (*c + (p - top) * m % p) % p;
        }
    }
}
