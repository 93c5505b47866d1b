//! Finite fields GF(p^k) for small orders.
//!
//! Elements are stored as integers whose base-p digits are the polynomial
//! coefficients (constant term least significant). Integer order on these
//! ids is the lexicographic order on coefficient vectors read from the top
//! degree down, and every deterministic choice downstream uses it.

use crate::error::{Error, Result};
use std::fmt;

/// Largest field order supported.
pub const MAX_ORDER: u64 = 49;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem(u32);

impl FieldElem {
    pub fn id(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Neg,
    Inv,
}

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, coefficients from constant term up, length k+1.
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// Returns `(p, k)` with `q = p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

// Polynomials over GF(p) as coefficient vectors, constant term first.

fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &mi) in m.iter().enumerate() {
            let t = r[shift + i] + p - c * mi % p;
            r[shift + i] = t % p;
        }
        trim(&mut r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    (1..p).find(|&x| a * x % p == 1).expect("nonzero residue")
}

fn digits(mut id: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = id % p;
            id /= p;
            d
        })
        .collect()
}

fn undigits(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn monic(lower: u32, p: u32, deg: u32) -> Vec<u32> {
    let mut c = digits(lower, p, deg);
    c.push(1);
    c
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = (f.len() - 1) as u32;
    for d in 1..=deg / 2 {
        for lower in 0..p.pow(d) {
            let g = monic(lower, p, d);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    /// GF(q) with the lexicographically least monic irreducible modulus.
    pub fn new(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(Error::FieldTooLarge(q));
        }
        let (p, q) = (p as u32, q as u32);
        let modulus = (0..p.pow(k))
            .map(|lower| monic(lower, p, k))
            .find(|f| is_irreducible(f, p))
            .expect("an irreducible polynomial exists in every degree");

        let n = q as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..q {
            let da = digits(a, p, k);
            for b in 0..q {
                let db = digits(b, p, k);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&sum, p);

                let mut prod = vec![0u32; 2 * k as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(&prod, &modulus, p);
                r.resize(k as usize, 0);
                mul[(a * q + b) as usize] = undigits(&r, p);
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[(a * q + b) as usize] == 0).unwrap())
            .collect();
        let inv = (0..q)
            .map(|a| (0..q).find(|&b| mul[(a * q + b) as usize] == 1).unwrap_or(0))
            .collect();
        Ok(FiniteField {
            p,
            k,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first (monic, so the last entry is 1).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    /// Element with the given id; panics if `id >= q`.
    pub fn elem(&self, id: u32) -> FieldElem {
        assert!(id < self.q, "element id {id} out of range for GF({})", self.q);
        FieldElem(id)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> FieldElem {
        let mut c: Vec<u32> = coeffs.iter().map(|x| x % self.p).collect();
        c.resize(self.k as usize, 0);
        FieldElem(undigits(&c, self.p))
    }

    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        digits(a.0, self.p, self.k)
    }

    /// All elements in increasing (lexicographic) order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q).map(FieldElem)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.add[(a.0 * self.q + b.0) as usize])
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.mul[(a.0 * self.q + b.0) as usize])
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg[a.0 as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElem(self.inv[a.0 as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Dispatches one of the four primitive operations. Binary operations
    /// require `b`.
    pub fn arith(&self, op: ArithOp, a: FieldElem, b: Option<FieldElem>) -> Result<FieldElem> {
        let need_b = || b.ok_or_else(|| Error::BadParams(format!("{op:?} needs two operands")));
        match op {
            ArithOp::Add => Ok(self.add(a, need_b()?)),
            ArithOp::Mul => Ok(self.mul(a, need_b()?)),
            ArithOp::Neg => Ok(self.neg(a)),
            ArithOp::Inv => self.inv(a),
        }
    }
}
