//! Dense univariate polynomials over a [`FieldCtx`].
//!
//! Coefficients are stored low degree first with trailing zeros stripped, so
//! the zero polynomial is the empty vector.

pub(crate) mod factor;

pub use factor::{factorize, is_irreducible, roots_in, squarefree_decomposition, Factorization};

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::gf::{Fe, FieldCtx, FieldElem};

#[derive(Clone)]
pub struct Poly {
    ctx: FieldCtx,
    c: Vec<Fe>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.ctx == other.ctx
    }
}

impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl Ord for Poly {
    /// Degree first, then coefficients compared from the leading one down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.len().cmp(&other.c.len()).then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn trim(v: &mut Vec<Fe>) {
    while v.last().is_some_and(FieldCtx::is_zero_fe) {
        v.pop();
    }
}

impl Poly {
    pub(crate) fn from_raw(ctx: FieldCtx, mut c: Vec<Fe>) -> Poly {
        trim(&mut c);
        Poly { ctx, c }
    }

    pub fn zero(ctx: &FieldCtx) -> Poly {
        Poly { ctx: ctx.clone(), c: Vec::new() }
    }

    pub fn one(ctx: &FieldCtx) -> Poly {
        Poly { ctx: ctx.clone(), c: vec![ctx.one_fe()] }
    }

    /// The indeterminate `T`.
    pub fn x(ctx: &FieldCtx) -> Poly {
        Poly { ctx: ctx.clone(), c: vec![ctx.zero_fe(), ctx.one_fe()] }
    }

    pub fn constant(c: &FieldElem) -> Poly {
        Poly::from_raw(c.ctx().clone(), vec![c.raw().clone()])
    }

    /// `c * T^n`.
    pub fn monomial(c: &FieldElem, n: usize) -> Poly {
        let ctx = c.ctx();
        let mut v = vec![ctx.zero_fe(); n];
        v.push(c.raw().clone());
        Poly::from_raw(ctx.clone(), v)
    }

    /// Coefficients low degree first; all must lie in `ctx`.
    pub fn from_elems(ctx: &FieldCtx, coeffs: Vec<FieldElem>) -> Result<Poly> {
        let mut v = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            if c.ctx() != ctx {
                return Err(Error::CtxMismatch);
            }
            v.push(c.raw().clone());
        }
        Ok(Poly::from_raw(ctx.clone(), v))
    }

    /// Integer coefficients, low degree first, read in the prime subfield.
    pub fn from_ints(ctx: &FieldCtx, coeffs: &[i64]) -> Poly {
        Poly::from_raw(ctx.clone(), coeffs.iter().map(|&n| ctx.int_fe(n)).collect())
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn raw(&self) -> &[Fe] {
        &self.c
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && FieldCtx::is_one_fe(&self.c[0])
    }

    /// Zero or a nonzero constant.
    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        let v = self.c.get(i).cloned().unwrap_or_else(|| self.ctx.zero_fe());
        FieldElem::from_raw(self.ctx.clone(), v)
    }

    pub fn coeffs(&self) -> Vec<FieldElem> {
        self.c.iter().map(|v| FieldElem::from_raw(self.ctx.clone(), v.clone())).collect()
    }

    pub fn lc(&self) -> Option<FieldElem> {
        self.c.last().map(|v| FieldElem::from_raw(self.ctx.clone(), v.clone()))
    }

    pub fn is_monic(&self) -> bool {
        self.c.last().is_some_and(FieldCtx::is_one_fe)
    }

    pub fn monic(&self) -> Poly {
        match self.c.last() {
            None => self.clone(),
            Some(l) if FieldCtx::is_one_fe(l) => self.clone(),
            Some(l) => {
                let inv = self.ctx.inv_fe(l).expect("leading coefficient is nonzero");
                self.scale_fe(&inv)
            }
        }
    }

    fn same_ctx(&self, other: &Poly) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::CtxMismatch)
        }
    }

    pub(crate) fn scale_fe(&self, s: &Fe) -> Poly {
        Poly::from_raw(self.ctx.clone(), self.c.iter().map(|x| self.ctx.mul_fe(x, s)).collect())
    }

    pub fn scale(&self, s: &FieldElem) -> Result<Poly> {
        if s.ctx() != &self.ctx {
            return Err(Error::CtxMismatch);
        }
        Ok(self.scale_fe(s.raw()))
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.same_ctx(other)?;
        let (long, short) = if self.c.len() >= other.c.len() { (self, other) } else { (other, self) };
        let mut v = long.c.clone();
        for (i, x) in short.c.iter().enumerate() {
            v[i] = self.ctx.add_fe(&v[i], x);
        }
        Ok(Poly::from_raw(self.ctx.clone(), v))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.same_ctx(other)?;
        Ok(Poly::from_raw(self.ctx.clone(), mul_raw(&self.ctx, &self.c, &other.c)))
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        self.same_ctx(d)?;
        let ctx = &self.ctx;
        let dl = d.c.last().ok_or(Error::DivisionByZero)?;
        if self.c.len() < d.c.len() {
            return Ok((Poly::zero(ctx), self.clone()));
        }
        let inv = ctx.inv_fe(dl).expect("leading coefficient is nonzero");
        if ctx.is_flat() {
            let (q, r) = divrem_flat(ctx, &self.c, &d.c, &inv);
            return Ok((Poly::from_raw(ctx.clone(), q), Poly::from_raw(ctx.clone(), r)));
        }
        let n = d.c.len() - 1;
        let mut r = self.c.clone();
        let mut q = vec![ctx.zero_fe(); self.c.len() - n];
        for i in (n..r.len()).rev() {
            if FieldCtx::is_zero_fe(&r[i]) {
                continue;
            }
            let t = ctx.mul_fe(&r[i], &inv);
            for (j, dj) in d.c[..n].iter().enumerate() {
                if !FieldCtx::is_zero_fe(dj) {
                    r[i - n + j] = ctx.sub_fe(&r[i - n + j], &ctx.mul_fe(&t, dj));
                }
            }
            r[i] = ctx.zero_fe();
            q[i - n] = t;
        }
        r.truncate(n);
        Ok((Poly::from_raw(ctx.clone(), q), Poly::from_raw(ctx.clone(), r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(d)?.1)
    }

    /// Exact division; errors with an invariant violation if a remainder is left.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::InvariantViolation(format!("{d} does not divide {self}")));
        }
        Ok(q)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("same context");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `g = s*self + t*other` and `g` monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let ctx = &self.ctx;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(ctx), Poly::zero(ctx));
        let (mut t0, mut t1) = (Poly::zero(ctx), Poly::one(ctx));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("same context");
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.c.last() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = ctx.inv_fe(l).expect("nonzero");
                (r0.scale_fe(&inv), s0.scale_fe(&inv), t0.scale_fe(&inv))
            }
        }
    }

    /// Evaluates at a point of this field or of an extension of it.
    pub fn eval(&self, x: &FieldElem) -> Result<FieldElem> {
        let ext = x.ctx();
        if !self.ctx.is_subfield_of(ext) {
            return Err(Error::CtxMismatch);
        }
        let mut acc = ext.zero_fe();
        for c in self.c.iter().rev() {
            acc = ext.add_fe(&ext.mul_fe(&acc, x.raw()), &ext.pad_fe(c));
        }
        Ok(FieldElem::from_raw(ext.clone(), acc))
    }

    pub fn derivative(&self) -> Poly {
        let ctx = &self.ctx;
        let p = ctx.p();
        let v = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, x)| ctx.scale_int_fe(x, (i as u64 % p) as u32))
            .collect();
        Poly::from_raw(ctx.clone(), v)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut result = Poly::one(&self.ctx);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        result
    }

    pub fn mulmod(&self, other: &Poly, m: &Poly) -> Result<Poly> {
        self.try_mul(other)?.rem(m)
    }

    /// `self^e mod m` by square-and-multiply.
    pub fn powmod(&self, mut e: u128, m: &Poly) -> Result<Poly> {
        self.same_ctx(m)?;
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut result = Poly::one(&self.ctx).rem(m)?;
        let mut b = self.rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mulmod(&b, m)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.mulmod(&b, m)?;
            }
        }
        Ok(result)
    }

    /// The same polynomial with coefficients viewed in the extension `ext`.
    pub fn map_into(&self, ext: &FieldCtx) -> Result<Poly> {
        if !self.ctx.is_subfield_of(ext) {
            return Err(Error::CtxMismatch);
        }
        Ok(Poly { ctx: ext.clone(), c: self.c.iter().map(|x| ext.pad_fe(x)).collect() })
    }

    /// The same polynomial over the subfield `sub`, if every coefficient lies there.
    pub fn descend(&self, sub: &FieldCtx) -> Option<Poly> {
        let mut v = Vec::with_capacity(self.c.len());
        for x in self.coeffs() {
            v.push(x.descend(sub)?.raw().clone());
        }
        Some(Poly::from_raw(sub.clone(), v))
    }

    /// Applies `x -> x^(|sub|^e)` to every coefficient.
    pub fn frobenius_coeffs(&self, sub: &FieldCtx, e: u64) -> Result<Poly> {
        let v = self
            .coeffs()
            .iter()
            .map(|x| x.frobenius_over(sub, e).map(|y| y.raw().clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_raw(self.ctx.clone(), v))
    }

    /// `self(g(T))`.
    pub fn compose(&self, g: &Poly) -> Result<Poly> {
        self.same_ctx(g)?;
        let mut acc = Poly::zero(&self.ctx);
        for c in self.coeffs().iter().rev() {
            acc = &(&acc * g) + &Poly::constant(c);
        }
        Ok(acc)
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Text form with the indeterminate named `var`.
    pub fn display_with(&self, var: &str) -> String {
        if self.c.is_empty() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, x) in self.coeffs().iter().enumerate().rev() {
            if x.is_zero() {
                continue;
            }
            let cs = x.to_string();
            let mon = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            terms.push(if i == 0 {
                cs
            } else if x.is_one() {
                mon
            } else {
                format!("{cs}*{mon}")
            });
        }
        terms.join(" + ")
    }
}

fn mul_raw(ctx: &FieldCtx, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if ctx.is_flat() {
        return mul_flat(ctx, a, b);
    }
    let mut out = vec![ctx.zero_fe(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if FieldCtx::is_zero_fe(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !FieldCtx::is_zero_fe(y) {
                out[i + j] = ctx.add_fe(&out[i + j], &ctx.mul_fe(x, y));
            }
        }
    }
    out
}

/// Schoolbook product over the prime field or a flat extension. Coordinate products are summed
/// in `u64` and reduced once per coefficient when that cannot overflow.
fn mul_flat(ctx: &FieldCtx, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let p = ctx.p() as u64;
    let k = ctx.width();
    let span = 2 * k - 1;
    let terms = (k * a.len().min(b.len())) as u128;
    let lazy = (p as u128 - 1).pow(2) * terms < u64::MAX as u128;
    let mut acc = vec![0u64; (a.len() + b.len() - 1) * span];
    for (i, x) in a.iter().enumerate() {
        if FieldCtx::is_zero_fe(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if FieldCtx::is_zero_fe(y) {
                continue;
            }
            let base = (i + j) * span;
            for (s, &xs) in x.0.iter().enumerate() {
                if xs == 0 {
                    continue;
                }
                let row = &mut acc[base + s..base + s + k];
                for (slot, &yt) in row.iter_mut().zip(&y.0) {
                    *slot += xs as u64 * yt as u64;
                    if !lazy {
                        *slot %= p;
                    }
                }
            }
        }
    }
    acc.chunks_mut(span)
        .map(|c| {
            c.iter_mut().for_each(|v| *v %= p);
            ctx.reduce_product(c)
        })
        .collect()
}

/// Long division over the prime field or a flat extension, using the
/// multiplication matrix of each quotient coefficient. Remainder coordinates
/// are reduced lazily when the accumulated sums cannot overflow.
fn divrem_flat(ctx: &FieldCtx, num: &[Fe], den: &[Fe], inv: &Fe) -> (Vec<Fe>, Vec<Fe>) {
    let p = ctx.p() as u64;
    let k = ctx.width();
    let n = den.len() - 1;
    let lazy = (p as u128 - 1).pow(2) * (num.len() * k + 1) as u128 + (p as u128) < u64::MAX as u128;
    let mut r: Vec<u64> = num.iter().flat_map(|c| c.0.iter().map(|&v| v as u64)).collect();
    let mut q = vec![ctx.zero_fe(); num.len() - n];
    let den_coords: Vec<&[u32]> = den[..n].iter().map(|d| &d.0[..]).collect();
    for i in (n..num.len()).rev() {
        let lead_slot = &mut r[i * k..(i + 1) * k];
        lead_slot.iter_mut().for_each(|v| *v %= p);
        let lead = Fe(lead_slot.iter().map(|&v| v as u32).collect());
        if FieldCtx::is_zero_fe(&lead) {
            continue;
        }
        let t = ctx.mul_fe(&lead, inv);
        // Rows of -t * y^s, so each update is an addition.
        let mt: Vec<Vec<u64>> = ctx.mul_matrix(&t).into_iter().map(|row| row.into_iter().map(|m| (p - m) % p).collect()).collect();
        for (j, dj) in den_coords.iter().enumerate() {
            let slot = &mut r[(i - n + j) * k..(i - n + j + 1) * k];
            for (row, &c) in mt.iter().zip(dj.iter()) {
                if c == 0 {
                    continue;
                }
                let c = c as u64;
                for (v, &m) in slot.iter_mut().zip(row) {
                    *v += c * m;
                    if !lazy {
                        *v %= p;
                    }
                }
            }
        }
        r[i * k..(i + 1) * k].iter_mut().for_each(|v| *v = 0);
        q[i - n] = t;
    }
    r.truncate(n * k);
    let rem = r.chunks(k).map(|c| Fe(c.iter().map(|&v| (v % p) as u32).collect())).collect();
    (q, rem)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("T"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&Poly> for &Poly {
            type Output = Poly;
            /// Panics when the operands live over different fields.
            fn $m(self, rhs: &Poly) -> Poly {
                self.$try(rhs).expect("polynomial context mismatch")
            }
        }
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { ctx: self.ctx.clone(), c: self.c.iter().map(|x| self.ctx.neg_fe(x)).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{field_create, prime_field};

    #[test]
    fn divrem_basic() {
        let f = prime_field(5).unwrap();
        let t3 = Poly::from_ints(&f, &[0, 0, 0, 1]);
        let t = Poly::x(&f);
        let (q, r) = t3.divrem(&t).unwrap();
        assert_eq!(q, Poly::from_ints(&f, &[0, 0, 1]));
        assert!(r.is_zero());
        assert_eq!(t.divrem(&Poly::zero(&f)).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn gcd_with_zero_is_monic() {
        let f = prime_field(7).unwrap();
        let a = Poly::from_ints(&f, &[1, 2, 3]);
        assert_eq!(a.gcd(&Poly::zero(&f)), a.monic());
        assert!(a.gcd(&Poly::zero(&f)).is_monic());
    }

    #[test]
    fn xgcd_identity() {
        let f = prime_field(11).unwrap();
        let a = Poly::from_ints(&f, &[3, 1, 4, 1, 5]);
        let b = Poly::from_ints(&f, &[9, 2, 6]);
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(&(&s * &a) + &(&t * &b), g);
    }

    #[test]
    fn eval_in_extension() {
        let f3 = prime_field(3).unwrap();
        let h = Poly::from_ints(&f3, &[1, 0, 1]);
        let f9 = crate::gf::extend(&f3, &h).unwrap();
        assert!(h.eval(&f9.generator()).unwrap().is_zero());
    }

    #[test]
    fn derivative_char_p() {
        let f = prime_field(3).unwrap();
        let a = Poly::from_ints(&f, &[1, 1, 0, 1]);
        assert_eq!(a.derivative(), Poly::from_ints(&f, &[1]));
    }

    #[test]
    fn powmod_matches_pow() {
        let f9 = field_create(3, 2).unwrap();
        let m = Poly::from_elems(&f9, vec![f9.generator(), f9.one(), f9.zero(), f9.one()]).unwrap();
        let x = Poly::x(&f9);
        assert_eq!(x.powmod(29, &m).unwrap(), x.pow(29).rem(&m).unwrap());
    }

    #[test]
    fn display() {
        let f = prime_field(19).unwrap();
        let a = Poly::from_ints(&f, &[1, 13, -6, 6, 1]);
        assert_eq!(a.to_string(), "T^4 + 6*T^3 + 13*T^2 + 13*T + 1");
        assert_eq!(Poly::zero(&f).to_string(), "0");
    }
}
