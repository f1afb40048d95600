//! Finite fields GF(p^h) for odd p, built as towers of simple extensions.
//!
//! Elements are encoded as integers `0..order`. An element of an extension of
//! degree `m` over a base field of order `b` is the integer whose base-`b`
//! digits are its coordinates in the basis `1, x, ..., x^(m-1)`, where `x` is
//! a root of the defining modulus. The base field therefore embeds as the
//! digit-0 elements, and GF(p) is always `0..p` with ordinary modular
//! arithmetic.

mod norm;

pub use norm::{Coset, NormGroup};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{param, Error, Result};

/// An encoded field element.
pub type Elem = u32;

/// Fields whose order is at most this keep a full addition table.
const ADD_TABLE_MAX_ORDER: u32 = 1024;

/// Largest field order a tower may reach unless the caller raises it.
pub const DEFAULT_MAX_ORDER: u32 = 1 << 22;

/// Requested field: characteristic, degree and optionally the modulus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub h: u32,
    /// Monic modulus over GF(p), constant term first, length `h + 1`.
    /// `None` selects the lexicographically least primitive polynomial.
    pub modulus: Option<Vec<Elem>>,
}

impl FieldSpec {
    pub fn new(p: u32, h: u32) -> Self {
        FieldSpec { p, h, modulus: None }
    }

    /// Factors `q` as an odd prime power.
    pub fn from_order(q: u32) -> Result<Self> {
        let (p, h) = prime_power(q).ok_or_else(|| Error::Field(format!("{q} is not a prime power")))?;
        if p == 2 {
            return Err(Error::Field(format!("{q} is even; only odd q is supported")));
        }
        Ok(FieldSpec::new(p, h))
    }

    pub fn order(&self) -> u32 {
        self.p.pow(self.h)
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `9`, `q=9` or `p=3,h=2,modulus=[2,1,1]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(q) = s.trim_start_matches("q=").parse::<u32>() {
            return FieldSpec::from_order(q);
        }
        let (mut p, mut h, mut modulus) = (None, None, None);
        let mut rest = s;
        while !rest.is_empty() {
            let (key, tail) =
                rest.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value in {s:?}")))?;
            let (value, tail) = if let Some(inner) = tail.strip_prefix('[') {
                let (list, after) =
                    inner.split_once(']').ok_or_else(|| Error::Parse("unterminated modulus list".into()))?;
                (list, after)
            } else {
                match tail.split_once(',') {
                    Some((v, t)) => (v, t),
                    None => (tail, ""),
                }
            };
            rest = tail.trim_start_matches(',').trim();
            let num = |v: &str| v.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad number {v:?}")));
            match key.trim() {
                "p" => p = Some(num(value)?),
                "h" => h = Some(num(value)?),
                "q" => return FieldSpec::from_order(num(value)?),
                "modulus" => {
                    let coeffs =
                        value.split(',').filter(|t| !t.trim().is_empty()).map(num).collect::<Result<Vec<_>>>()?;
                    modulus = Some(coeffs);
                }
                other => return Err(Error::Parse(format!("unknown field key {other:?}"))),
            }
        }
        let p = p.ok_or_else(|| Error::Parse("missing p".into()))?;
        let h = h.unwrap_or(1);
        Ok(FieldSpec { p, h, modulus })
    }
}

/// Returns `(p, h)` with `q = p^h` when `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut rest, mut h) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        h += 1;
    }
    (rest == 1).then_some((p, h))
}

/// Integer square root when `n` is a perfect square.
pub fn exact_sqrt(n: u32) -> Option<u32> {
    let r = (n as f64).sqrt().round() as u32;
    (r.checked_mul(r) == Some(n)).then_some(r)
}

#[derive(Clone)]
enum Addition {
    Prime,
    Table(Vec<Elem>),
    Digits(Vec<Elem>),
}

/// Arithmetic tables for one finite field.
///
/// Immutable after construction and cheap to share behind an `Arc`.
#[derive(Clone)]
pub struct FieldTables {
    p: u32,
    order: u32,
    base_order: u32,
    degree: u32,
    modulus: Vec<Elem>,
    exp: Vec<Elem>,
    log: Vec<u32>,
    neg: Vec<Elem>,
    addition: Addition,
}

impl fmt::Debug for FieldTables {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTables")
            .field("order", &self.order)
            .field("base_order", &self.base_order)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator())
            .finish()
    }
}

const NO_LOG: u32 = u32::MAX;

impl FieldTables {
    /// Builds GF(p^h) from a spec.
    pub fn new(spec: &FieldSpec) -> Result<Self> {
        if spec.h == 0 {
            return Err(Error::Field("degree must be positive".into()));
        }
        match prime_power(spec.p) {
            Some((_, 1)) if spec.p % 2 == 1 => {}
            _ => return Err(Error::Field(format!("{} is not an odd prime", spec.p))),
        }
        let order = (spec.p as u64).pow(spec.h);
        if order > DEFAULT_MAX_ORDER as u64 {
            return Err(Error::Field(format!("order {order} exceeds the supported range")));
        }
        if spec.h == 1 {
            Self::prime(spec.p, spec.modulus.as_deref())
        } else {
            let prime = Self::prime(spec.p, None)?;
            Self::extension(&prime, spec.h, spec.modulus.as_deref(), DEFAULT_MAX_ORDER)
        }
    }

    /// GF(q) for an odd prime power `q` with the default modulus.
    pub fn of_order(q: u32) -> Result<Self> {
        Self::new(&FieldSpec::from_order(q)?)
    }

    fn prime(p: u32, modulus: Option<&[Elem]>) -> Result<Self> {
        let candidates: Vec<Vec<Elem>> = match modulus {
            Some(m) => vec![m.to_vec()],
            None => (0..p).map(|c| vec![c, 1]).collect(),
        };
        for m in candidates {
            if m.len() != 2 || m[1] != 1 || m[0] >= p {
                return Err(Error::Field(format!("modulus {m:?} is not monic linear over GF({p})")));
            }
            let root = (p - m[0]) % p;
            if let Some((exp, log)) = power_tables(p, |x| (x * root) % p) {
                let neg = (0..p).map(|a| (p - a) % p).collect();
                return Ok(FieldTables {
                    p,
                    order: p,
                    base_order: p,
                    degree: 1,
                    modulus: m,
                    exp,
                    log,
                    neg,
                    addition: Addition::Prime,
                });
            }
            if modulus.is_some() {
                return Err(Error::Field(format!("modulus {m:?} is not primitive")));
            }
        }
        Err(Error::Field(format!("no primitive element found in GF({p})")))
    }

    /// Simple extension of degree `degree` over `base`.
    ///
    /// With `modulus == None` the lexicographically least primitive monic
    /// polynomial is used, comparing coefficients from the constant term up.
    pub fn extension(base: &FieldTables, degree: u32, modulus: Option<&[Elem]>, max_order: u32) -> Result<Self> {
        if degree < 2 {
            return Err(Error::Field("extension degree must be at least 2".into()));
        }
        let b = base.order;
        let order = (b as u64)
            .checked_pow(degree)
            .filter(|&o| o <= max_order as u64)
            .ok_or_else(|| Error::Field(format!("GF({b}^{degree}) exceeds the order cap {max_order}")))?
            as u32;
        let m = degree as usize;
        let try_modulus = |coeffs: &[Elem]| -> Option<(Vec<Elem>, Vec<u32>)> {
            if coeffs[0] == 0 {
                return None;
            }
            let neg_low: Vec<Elem> = coeffs[..m].iter().map(|&c| base.neg(c)).collect();
            power_tables(order, |x| {
                let top = x / b.pow(degree - 1);
                let mut out = 0;
                let mut place = 1;
                for (i, &low) in neg_low.iter().enumerate() {
                    let shifted = if i == 0 { 0 } else { (x / b.pow(i as u32 - 1)) % b };
                    let digit = base.add(shifted, base.mul(top, low));
                    out += digit * place;
                    place *= b;
                }
                out
            })
        };
        let (coeffs, exp, log) = match modulus {
            Some(given) => {
                if given.len() != m + 1 || given[m] != 1 || given.iter().any(|&c| c >= b) {
                    return Err(Error::Field(format!(
                        "modulus {given:?} is not monic of degree {degree} over GF({b})"
                    )));
                }
                let (exp, log) =
                    try_modulus(given).ok_or_else(|| Error::Field(format!("modulus {given:?} is not primitive")))?;
                (given.to_vec(), exp, log)
            }
            None => {
                let mut found = None;
                let count = (b as u64).pow(degree);
                for n in 0..count {
                    // c0 is the most significant position of the lex order.
                    let mut coeffs = vec![0; m + 1];
                    let mut rest = n;
                    for i in (0..m).rev() {
                        coeffs[i] = (rest % b as u64) as Elem;
                        rest /= b as u64;
                    }
                    coeffs[m] = 1;
                    if let Some((exp, log)) = try_modulus(&coeffs) {
                        found = Some((coeffs, exp, log));
                        break;
                    }
                }
                found.ok_or_else(|| Error::Field(format!("no primitive polynomial of degree {degree} over GF({b})")))?
            }
        };
        let digits = |x: Elem| (0..m).map(move |i| (x / b.pow(i as u32)) % b);
        let neg = (0..order).map(|x| digits(x).enumerate().map(|(i, d)| base.neg(d) * b.pow(i as u32)).sum()).collect();
        let base_add: Vec<Elem> = (0..b * b).map(|i| base.add(i / b, i % b)).collect();
        let mut field = FieldTables {
            p: base.p,
            order,
            base_order: b,
            degree,
            modulus: coeffs,
            exp,
            log,
            neg,
            addition: Addition::Digits(base_add),
        };
        if order <= ADD_TABLE_MAX_ORDER {
            let table = (0..order * order).map(|i| field.add(i / order, i % order)).collect();
            field.addition = Addition::Table(table);
        }
        Ok(field)
    }

    /// GF(q^3) over this field with the default modulus.
    pub fn cube_extension(&self, max_order: u32) -> Result<Self> {
        Self::extension(self, 3, None, max_order)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Order of the field this one was built over (itself for prime fields).
    pub fn base_order(&self) -> u32 {
        self.base_order
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Defining modulus over the base field, constant term first.
    pub fn modulus(&self) -> &[Elem] {
        &self.modulus
    }

    /// The primitive element whose powers index the log table.
    pub fn generator(&self) -> Elem {
        self.exp[1 % self.exp.len()]
    }

    /// The spec that rebuilds this field when it is a direct extension of GF(p).
    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.p, h: self.degree, modulus: Some(self.modulus.clone()) }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.addition {
            Addition::Prime => {
                let s = a + b;
                if s >= self.p {
                    s - self.p
                } else {
                    s
                }
            }
            Addition::Table(t) => t[(a * self.order + b) as usize],
            Addition::Digits(base_add) => {
                let bo = self.base_order;
                let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
                for _ in 0..self.degree {
                    out += base_add[((a % bo) * bo + b % bo) as usize] * place;
                    a /= bo;
                    b /= bo;
                    place *= bo;
                }
                out
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.order - 1;
        let e = self.log[a as usize] + self.log[b as usize];
        self.exp[(if e >= n { e - n } else { e }) as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::Field("division by zero".into()));
        }
        let n = self.order - 1;
        Ok(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.order - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// Discrete log to the base [`generator`](Self::generator); `None` for zero.
    pub fn log(&self, a: Elem) -> Option<u32> {
        let l = self.log[a as usize];
        (l != NO_LOG).then_some(l)
    }

    /// `generator^k`.
    pub fn exp(&self, k: u64) -> Elem {
        self.exp[(k % (self.order as u64 - 1)) as usize]
    }

    /// True for nonzero squares.
    pub fn is_square(&self, a: Elem) -> bool {
        a != 0 && self.log[a as usize] % 2 == 0
    }

    /// A square root of a nonzero square.
    pub fn sqrt(&self, a: Elem) -> Option<Elem> {
        self.is_square(a).then(|| self.exp[(self.log[a as usize] / 2) as usize])
    }

    /// The non-square with the least encoding.
    pub fn least_nonresidue(&self) -> Elem {
        (1..self.order).find(|&a| !self.is_square(a)).expect("odd order fields have non-squares")
    }

    /// `a^p`, the Frobenius automorphism of the prime-field tower.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.p as u64)
    }

    /// Elements of the subfield of order `sub`, in increasing encoding.
    pub fn subfield(&self, sub: u32) -> Result<Vec<Elem>> {
        let ok = (1..=30).any(|k| sub.checked_pow(k) == Some(self.order))
            && prime_power(sub).map(|(p, _)| p) == Some(self.p);
        if !ok {
            return param(format!("GF({sub}) is not a subfield of GF({})", self.order));
        }
        Ok((0..self.order).filter(|&a| self.pow(a, sub as u64) == a).collect())
    }

    /// Base-field coordinates of `a`, lowest power first.
    pub fn coordinates(&self, a: Elem) -> Vec<Elem> {
        let b = self.base_order;
        (0..self.degree).map(|i| (a / b.pow(i)) % b).collect()
    }

    /// Inverse of [`coordinates`](Self::coordinates).
    pub fn from_coordinates(&self, coords: &[Elem]) -> Elem {
        coords.iter().rev().fold(0, |acc, &d| acc * self.base_order + d)
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }
}

/// Walks the powers of a candidate generator under `step` (multiplication by
/// it) and returns the exp/log tables when the generator is primitive.
fn power_tables(order: u32, step: impl Fn(Elem) -> Elem) -> Option<(Vec<Elem>, Vec<u32>)> {
    let n = order - 1;
    let mut exp = Vec::with_capacity(n as usize);
    let mut log = vec![NO_LOG; order as usize];
    let mut x = 1;
    for k in 0..n {
        if log[x as usize] != NO_LOG || x == 0 {
            return None;
        }
        log[x as usize] = k;
        exp.push(x);
        x = step(x);
    }
    (x == 1).then_some((exp, log))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Polynomial arithmetic over GF(p) reduced by the modulus, independent of
    /// the exp/log tables.
    fn poly_mul(f: &FieldTables, a: Elem, b: Elem) -> Elem {
        let p = f.characteristic();
        let m = f.degree() as usize;
        let (ca, cb) = (f.coordinates(a), f.coordinates(b));
        let mut prod = vec![0u32; 2 * m];
        for i in 0..m {
            for j in 0..m {
                prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p;
            }
        }
        let modulus = f.modulus();
        for k in (m..2 * m).rev() {
            let top = prod[k];
            for i in 0..m {
                prod[k - m + i] = (prod[k - m + i] + (p - top) * modulus[i]) % p;
            }
            prod[k] = 0;
        }
        f.from_coordinates(&prod[..m])
    }

    #[test]
    fn default_generators_of_prime_fields() {
        assert_eq!(FieldTables::of_order(3).unwrap().generator(), 2);
        assert_eq!(FieldTables::of_order(5).unwrap().generator(), 3);
        assert_eq!(FieldTables::of_order(7).unwrap().generator(), 5);
    }

    #[test]
    fn gf9_modulus_is_least_primitive() {
        let f = FieldTables::of_order(9).unwrap();
        assert_eq!(f.modulus(), &[2, 1, 1]);
        assert_eq!(f.generator(), 3);
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(FieldTables::of_order(6).is_err());
        assert!(FieldTables::of_order(8).is_err());
        assert!(FieldTables::of_order(1).is_err());
    }

    #[test]
    fn rejects_non_primitive_modulus() {
        let spec = FieldSpec { p: 3, h: 2, modulus: Some(vec![1, 0, 1]) };
        assert!(FieldTables::new(&spec).is_err());
    }

    #[test]
    fn explicit_modulus_matches_default() {
        let spec: FieldSpec = "p=3,h=2,modulus=[2,1,1]".parse().unwrap();
        let f = FieldTables::new(&spec).unwrap();
        assert_eq!(f.modulus(), FieldTables::of_order(9).unwrap().modulus());
    }

    #[test]
    fn parses_plain_orders() {
        assert_eq!("q=25".parse::<FieldSpec>().unwrap(), FieldSpec::new(5, 2));
        assert_eq!("27".parse::<FieldSpec>().unwrap(), FieldSpec::new(3, 3));
    }

    #[test]
    fn division_by_zero_errors() {
        let f = FieldTables::of_order(5).unwrap();
        assert!(f.inv(0).is_err());
    }

    #[test]
    fn multiplication_matches_polynomial_reduction() {
        for q in [9, 25, 27, 49] {
            let f = FieldTables::of_order(q).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), poly_mul(&f, a, b), "q={q} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for q in [3, 5, 7, 9, 11, 13] {
            let f = FieldTables::of_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn squares_are_half_the_units() {
        for q in [3, 5, 7, 9, 25, 27] {
            let f = FieldTables::of_order(q).unwrap();
            let squares: std::collections::BTreeSet<_> = (1..q).map(|a| f.mul(a, a)).collect();
            assert_eq!(squares.len() as u32, (q - 1) / 2);
            for a in 1..q {
                assert_eq!(f.is_square(a), squares.contains(&a));
            }
        }
    }

    #[test]
    fn least_nonresidues() {
        assert_eq!(FieldTables::of_order(5).unwrap().least_nonresidue(), 2);
        assert_eq!(FieldTables::of_order(7).unwrap().least_nonresidue(), 3);
        assert_eq!(FieldTables::of_order(3).unwrap().least_nonresidue(), 2);
    }

    #[test]
    fn cube_extension_embeds_base_as_digit_zero() {
        let f = FieldTables::of_order(9).unwrap();
        let cube = f.cube_extension(DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(cube.order(), 729);
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(cube.add(a, b), f.add(a, b));
                assert_eq!(cube.mul(a, b), f.mul(a, b));
            }
        }
        assert!(f.cube_extension(500).is_err());
    }

    #[test]
    fn subfield_of_gf9() {
        let f = FieldTables::of_order(9).unwrap();
        let sub = f.subfield(3).unwrap();
        assert_eq!(sub, vec![0, 1, 2]);
        assert!(f.subfield(5).is_err());
    }

    #[test]
    fn frobenius_is_additive() {
        let f = FieldTables::of_order(27).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
            }
        }
    }
}
