use serde::Serialize;
use std::sync::Arc;

use super::{Elem, FieldTables};
use crate::error::{Error, Result};

/// A coset `(a + b√d)·GF(q)^×`, normalized so that `b = 1`, or `(1, 0)` for
/// the identity coset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Coset {
    pub a: Elem,
    pub b: Elem,
}

impl Coset {
    pub const IDENTITY: Coset = Coset { a: 1, b: 0 };
}

/// The cyclic group GF(q²)^×/GF(q)^× of order `q + 1`, with GF(q²) realised
/// as GF(q)[√d] for the least non-residue `d`.
///
/// Maps the conic `XZ = Y²` and the line `X = dZ` onto the group so that
/// collinearity of two conic points with a point of the line becomes a
/// product relation.
#[derive(Debug, Clone)]
pub struct NormGroup {
    field: Arc<FieldTables>,
    d: Elem,
    powers: Vec<Coset>,
    log: Vec<u32>,
}

impl NormGroup {
    pub fn new(field: Arc<FieldTables>) -> Self {
        let q = field.order();
        let d = field.least_nonresidue();
        let mut group = NormGroup { field, d, powers: Vec::new(), log: Vec::new() };
        let mut candidates = std::iter::once(Coset::IDENTITY).chain((0..q).map(|a| Coset { a, b: 1 }));
        let generator = candidates.find(|&c| group.order_of(c) == q + 1).expect("the norm group is cyclic");
        let mut powers = Vec::with_capacity(q as usize + 1);
        let mut log = vec![0; q as usize + 1];
        let mut x = Coset::IDENTITY;
        for k in 0..=q {
            log[group.slot(x)] = k;
            powers.push(x);
            x = group.mul(x, generator);
        }
        group.powers = powers;
        group.log = log;
        group
    }

    pub fn field(&self) -> &Arc<FieldTables> {
        &self.field
    }

    /// The non-residue `d` adjoined as `√d`.
    pub fn nonresidue(&self) -> Elem {
        self.d
    }

    pub fn order(&self) -> u32 {
        self.field.order() + 1
    }

    pub fn generator(&self) -> Coset {
        self.powers[1]
    }

    fn slot(&self, c: Coset) -> usize {
        if c.b == 0 {
            self.field.order() as usize
        } else {
            c.a as usize
        }
    }

    fn normalize(&self, a: Elem, b: Elem) -> Coset {
        let f = &self.field;
        if b == 0 {
            Coset::IDENTITY
        } else {
            Coset { a: f.div(a, b).expect("b is nonzero"), b: 1 }
        }
    }

    pub fn mul(&self, x: Coset, y: Coset) -> Coset {
        let f = &self.field;
        let a = f.add(f.mul(x.a, y.a), f.mul(self.d, f.mul(x.b, y.b)));
        let b = f.add(f.mul(x.a, y.b), f.mul(x.b, y.a));
        self.normalize(a, b)
    }

    fn order_of(&self, c: Coset) -> u32 {
        let mut x = c;
        let mut k = 1;
        while x != Coset::IDENTITY {
            x = self.mul(x, c);
            k += 1;
        }
        k
    }

    /// `generator^k`.
    pub fn power(&self, k: u64) -> Coset {
        self.powers[(k % self.order() as u64) as usize]
    }

    /// The exponent `k` in `0..=q` with `generator^k = c`.
    pub fn log(&self, c: Coset) -> u32 {
        self.log[self.slot(c)]
    }

    /// φ: the conic point `[s²:st:t²]` goes to `(s + t√d)`.
    pub fn from_conic_point(&self, pt: [Elem; 3]) -> Result<Coset> {
        let f = &self.field;
        let [x, y, z] = pt;
        if f.mul(x, z) != f.mul(y, y) || pt == [0, 0, 0] {
            return Err(Error::NotConic(format!("{pt:?} is not on XZ = Y²")));
        }
        if x == 0 {
            return Ok(self.normalize(0, 1));
        }
        Ok(self.normalize(1, f.div(y, x)?))
    }

    /// Inverse of φ: `(a + b√d)` goes to `[a²:ab:b²]`.
    pub fn conic_point(&self, c: Coset) -> [Elem; 3] {
        let f = &self.field;
        [f.mul(c.a, c.a), f.mul(c.a, c.b), f.mul(c.b, c.b)]
    }

    /// ψ: `(a + b√d)` goes to the point `[db:a:b]` of the line `X = dZ`.
    pub fn line_point(&self, c: Coset) -> [Elem; 3] {
        [self.field.mul(self.d, c.b), c.a, c.b]
    }
}
