//! Finite fields `F_p`, `F_q = F_p[y]/(m)` and one further extension
//! `F_q[z]/(h)`.
//!
//! Every element is stored as a flat coordinate vector over the prime field.
//! In a two-level tower the layout is chunk-major: chunk `j` holds the
//! base-field coefficient of `z^j`. Elements of a subfield therefore embed by
//! zero padding, and the integer index `sum c_i p^i` gives a total order that
//! is shared by enumeration, sorting and the choice of least moduli.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use smallvec::{smallvec, SmallVec};

use crate::error::{violation, Error, Result};
use crate::limits;
use crate::upoly::{self, Poly};

/// Raw coordinates of a field element, without its context.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Fe(pub(crate) SmallVec<[u32; 4]>);

impl Fe {
    pub fn coords(&self) -> &[u32] {
        &self.0
    }
}

impl Ord for Fe {
    /// Compares by integer index: the last coordinate is most significant.
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Fe {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Inner {
    p: u32,
    degree: usize,
    width: usize,
    base: Option<FieldCtx>,
    modulus: Option<Poly>,
    /// Monic modulus as plain integers when the base is the prime field.
    modulus_int: Vec<u64>,
    cardinality: u128,
}

/// A finite field. Cheap to clone; contexts built from equal data compare equal.
#[derive(Clone)]
pub struct FieldCtx(Arc<Inner>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.width == other.0.width
                && self.0.degree == other.0.degree
                && self.0.base == other.0.base
                && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldCtx {}

impl Hash for FieldCtx {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.width.hash(state);
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.modulus {
            None => write!(f, "F_{}", self.0.p),
            Some(m) => write!(f, "F_{}[{}]", self.0.cardinality, m),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p as i64) as u64
}

/// The prime field `F_p`.
pub fn prime_field(p: u64) -> Result<FieldCtx> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if p >= 1 << 31 {
        return Err(Error::SizeCapExceeded { what: "characteristic", size: p as u128, cap: 1 << 31 });
    }
    limits::check_field(p as u128)?;
    Ok(FieldCtx(Arc::new(Inner {
        p: p as u32,
        degree: 1,
        width: 1,
        base: None,
        modulus: None,
        modulus_int: Vec::new(),
        cardinality: p as u128,
    })))
}

/// `F_{p^m}` defined by the least monic irreducible of degree `m` over `F_p`.
pub fn field_create(p: u64, m: usize) -> Result<FieldCtx> {
    if m == 0 {
        return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
    }
    let fp = prime_field(p)?;
    if m == 1 {
        return Ok(fp);
    }
    check_cardinality(fp.cardinality(), m)?;
    let h = least_irreducible(&fp, m)?;
    extend(&fp, &h)
}

fn check_cardinality(base: u128, k: usize) -> Result<u128> {
    let size = u32::try_from(k)
        .ok()
        .and_then(|k| base.checked_pow(k))
        .ok_or(Error::SizeCapExceeded { what: "field cardinality", size: u128::MAX, cap: limits::field_cap() as u128 })?;
    limits::check_field(size)?;
    Ok(size)
}

/// `base[y]/(h)`. A linear `h` returns `base` itself.
pub fn extend(base: &FieldCtx, h: &Poly) -> Result<FieldCtx> {
    if h.ctx() != base {
        return Err(Error::CtxMismatch);
    }
    let k = h.degree().ok_or(Error::ConstantInput)?;
    if k == 0 {
        return Err(Error::ConstantInput);
    }
    if k == 1 {
        return Ok(base.clone());
    }
    if base.level() >= 2 {
        return Err(Error::TowerTooDeep);
    }
    let cardinality = check_cardinality(base.cardinality(), k)?;
    let h = h.monic();
    if !upoly::is_irreducible(&h)? {
        return Err(Error::NotIrreducible(h.to_string()));
    }
    let modulus_int = if base.is_prime_field() {
        h.raw().iter().map(|c| c.0[0] as u64).collect()
    } else {
        Vec::new()
    };
    Ok(FieldCtx(Arc::new(Inner {
        p: base.0.p,
        degree: k,
        width: k * base.width(),
        base: Some(base.clone()),
        modulus: Some(h),
        modulus_int,
        cardinality,
    })))
}

/// The extension of `base` of degree `k` defined by [`least_irreducible`].
pub fn extension_of_degree(base: &FieldCtx, k: usize) -> Result<FieldCtx> {
    if k == 0 {
        return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
    }
    if k == 1 {
        return Ok(base.clone());
    }
    check_cardinality(base.cardinality(), k)?;
    let h = least_irreducible(base, k)?;
    extend(base, &h)
}

/// The monic irreducible of degree `k` over `base` whose coefficient vector
/// has the least integer index, the constant term being least significant.
pub fn least_irreducible(base: &FieldCtx, k: usize) -> Result<Poly> {
    if k == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let q = base.cardinality();
    let mut idx: u128 = 0;
    loop {
        let mut coeffs = Vec::with_capacity(k + 1);
        let mut rest = idx;
        for _ in 0..k {
            coeffs.push(base.fe_from_index(rest % q));
            rest /= q;
        }
        if rest != 0 {
            return violation(format!("no irreducible of degree {k} over {base:?}"));
        }
        coeffs.push(base.one_fe());
        let f = Poly::from_raw(base.clone(), coeffs);
        if upoly::is_irreducible(&f)? {
            return Ok(f);
        }
        idx += 1;
    }
}

impl FieldCtx {
    pub fn p(&self) -> u64 {
        self.0.p as u64
    }

    /// Degree over the immediate base (1 for a prime field).
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Degree over the prime field.
    pub fn width(&self) -> usize {
        self.0.width
    }

    pub fn base(&self) -> Option<&FieldCtx> {
        self.0.base.as_ref()
    }

    pub fn modulus(&self) -> Option<&Poly> {
        self.0.modulus.as_ref()
    }

    pub fn cardinality(&self) -> u128 {
        self.0.cardinality
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.base.is_none()
    }

    /// Number of extension steps above the prime field.
    pub fn level(&self) -> usize {
        match &self.0.base {
            None => 0,
            Some(b) => 1 + b.level(),
        }
    }

    pub fn prime_subfield(&self) -> FieldCtx {
        match &self.0.base {
            None => self.clone(),
            Some(b) => b.prime_subfield(),
        }
    }

    /// True when `self` is `other` or one of the fields `other` is built on.
    pub fn is_subfield_of(&self, other: &FieldCtx) -> bool {
        if self == other {
            return true;
        }
        match &other.0.base {
            None => false,
            Some(b) => self.is_subfield_of(b),
        }
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::from_raw(self.clone(), self.zero_fe())
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::from_raw(self.clone(), self.one_fe())
    }

    /// The image of an integer in the prime subfield.
    pub fn int(&self, n: i64) -> FieldElem {
        FieldElem::from_raw(self.clone(), self.int_fe(n))
    }

    /// Element from flat prime-field coordinates (padded with zeros).
    pub fn from_coords(&self, coords: &[u32]) -> Result<FieldElem> {
        if coords.len() > self.width() {
            return Err(Error::InvalidArgument(format!(
                "{} coordinates given for a field of degree {}",
                coords.len(),
                self.width()
            )));
        }
        let mut v = self.zero_fe();
        for (i, &c) in coords.iter().enumerate() {
            v.0[i] = c % self.0.p;
        }
        Ok(FieldElem::from_raw(self.clone(), v))
    }

    /// The residue class of the adjoined variable; a root of the modulus.
    pub fn generator(&self) -> FieldElem {
        match &self.0.base {
            None => self.one(),
            Some(b) => {
                let mut v = self.zero_fe();
                v.0[b.width()] = 1;
                FieldElem::from_raw(self.clone(), v)
            }
        }
    }

    /// The least element (in index order) generating the multiplicative group.
    pub fn primitive_element(&self) -> FieldElem {
        let n = self.cardinality() - 1;
        let primes = crate::upoly::factor::prime_divisors(n as usize);
        (1..self.cardinality())
            .map(|i| FieldElem::from_raw(self.clone(), self.fe_from_index(i)))
            .find(|w| primes.iter().all(|&l| !w.pow(n / l as u128).is_one()))
            .expect("multiplicative group is cyclic")
    }

    pub fn from_index(&self, idx: u128) -> Result<FieldElem> {
        if idx >= self.cardinality() {
            return Err(Error::InvalidArgument(format!("index {idx} out of range")));
        }
        Ok(FieldElem::from_raw(self.clone(), self.fe_from_index(idx)))
    }

    /// All elements in index order. Subject to the enumeration cap.
    pub fn elements(&self) -> Result<Vec<FieldElem>> {
        limits::check_enumeration("field enumeration", self.cardinality())?;
        Ok((0..self.cardinality()).map(|i| FieldElem::from_raw(self.clone(), self.fe_from_index(i))).collect())
    }

    /// Views an element of a subfield as an element of `self`.
    pub fn embed(&self, x: &FieldElem) -> Result<FieldElem> {
        if !x.ctx.is_subfield_of(self) {
            return Err(Error::CtxMismatch);
        }
        Ok(FieldElem::from_raw(self.clone(), self.pad_fe(&x.v)))
    }

    pub(crate) fn fe_from_index(&self, mut idx: u128) -> Fe {
        let p = self.0.p as u128;
        let mut v = self.zero_fe();
        for c in v.0.iter_mut() {
            *c = (idx % p) as u32;
            idx /= p;
        }
        v
    }

    pub(crate) fn index_of(&self, a: &Fe) -> u128 {
        let p = self.0.p as u128;
        a.0.iter().rev().fold(0u128, |acc, &c| acc * p + c as u128)
    }

    pub(crate) fn pad_fe(&self, a: &Fe) -> Fe {
        let mut v = a.clone();
        v.0.resize(self.width(), 0);
        v
    }

    pub(crate) fn zero_fe(&self) -> Fe {
        Fe(smallvec![0; self.0.width])
    }

    pub(crate) fn one_fe(&self) -> Fe {
        let mut v = self.zero_fe();
        v.0[0] = 1;
        v
    }

    pub(crate) fn int_fe(&self, n: i64) -> Fe {
        let mut v = self.zero_fe();
        v.0[0] = n.rem_euclid(self.0.p as i64) as u32;
        v
    }

    pub(crate) fn is_zero_fe(a: &Fe) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub(crate) fn is_one_fe(a: &Fe) -> bool {
        a.0[0] == 1 && a.0[1..].iter().all(|&c| c == 0)
    }

    pub(crate) fn add_fe(&self, a: &Fe, b: &Fe) -> Fe {
        let p = self.0.p as u64;
        Fe(a.0.iter().zip(&b.0).map(|(&x, &y)| ((x as u64 + y as u64) % p) as u32).collect())
    }

    pub(crate) fn sub_fe(&self, a: &Fe, b: &Fe) -> Fe {
        let p = self.0.p as u64;
        Fe(a.0.iter().zip(&b.0).map(|(&x, &y)| ((x as u64 + p - y as u64) % p) as u32).collect())
    }

    pub(crate) fn neg_fe(&self, a: &Fe) -> Fe {
        let p = self.0.p;
        Fe(a.0.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect())
    }

    /// Multiplies by an element of the prime subfield.
    pub(crate) fn scale_int_fe(&self, a: &Fe, c: u32) -> Fe {
        let p = self.0.p as u64;
        Fe(a.0.iter().map(|&x| ((x as u64 * c as u64) % p) as u32).collect())
    }

    pub(crate) fn mul_fe(&self, a: &Fe, b: &Fe) -> Fe {
        match &self.0.base {
            None => {
                let p = self.0.p as u64;
                Fe(smallvec![((a.0[0] as u64 * b.0[0] as u64) % p) as u32])
            }
            Some(base) if base.is_prime_field() => self.mul_over_prime(&a.0, &b.0),
            Some(base) => self.mul_over_base(base, a, b),
        }
    }

    fn mul_over_prime(&self, a: &[u32], b: &[u32]) -> Fe {
        let p = self.0.p as u64;
        let k = self.0.degree;
        let m = &self.0.modulus_int;
        let mut prod: SmallVec<[u64; 32]> = smallvec![0; 2 * k - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p;
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            let nc = p - c;
            for j in 0..k {
                prod[i - k + j] = (prod[i - k + j] + nc * m[j]) % p;
            }
        }
        Fe(prod[..k].iter().map(|&x| x as u32).collect())
    }

    /// True for the prime field and for extensions written directly over it.
    pub(crate) fn is_flat(&self) -> bool {
        self.0.base.as_ref().is_none_or(|b| b.is_prime_field())
    }

    /// Reduces a product of two coordinate vectors, already taken mod `p`,
    /// modulo the defining polynomial. `prod` has length `2k - 1`.
    pub(crate) fn reduce_product(&self, prod: &mut [u64]) -> Fe {
        let p = self.0.p as u64;
        let k = self.0.degree;
        let m = &self.0.modulus_int;
        for i in (k..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            let nc = p - c;
            for j in 0..k {
                prod[i - k + j] = (prod[i - k + j] + nc * m[j]) % p;
            }
        }
        Fe(prod[..k].iter().map(|&x| x as u32).collect())
    }

    /// Rows `t * y^i` for `i < k`, as coordinates: the matrix of multiplication by `t`.
    pub(crate) fn mul_matrix(&self, t: &Fe) -> Vec<Vec<u64>> {
        if self.0.base.is_none() {
            return vec![vec![t.0[0] as u64]];
        }
        let p = self.0.p as u64;
        let k = self.0.degree;
        let m = &self.0.modulus_int;
        let mut row: Vec<u64> = t.0.iter().map(|&c| c as u64).collect();
        let mut out = Vec::with_capacity(k);
        for _ in 0..k {
            out.push(row.clone());
            let top = row[k - 1];
            row.rotate_right(1);
            row[0] = 0;
            if top != 0 {
                let nc = p - top;
                for j in 0..k {
                    row[j] = (row[j] + nc * m[j]) % p;
                }
            }
        }
        out
    }

    fn mul_over_base(&self, base: &FieldCtx, a: &Fe, b: &Fe) -> Fe {
        let k = self.0.degree;
        let ac = self.chunks(a);
        let bc = self.chunks(b);
        let mut prod = vec![base.zero_fe(); 2 * k - 1];
        for (i, x) in ac.iter().enumerate() {
            if Self::is_zero_fe(x) {
                continue;
            }
            for (j, y) in bc.iter().enumerate() {
                prod[i + j] = base.add_fe(&prod[i + j], &base.mul_fe(x, y));
            }
        }
        let m = self.0.modulus.as_ref().expect("extension has a modulus").raw();
        for i in (k..2 * k - 1).rev() {
            let c = prod[i].clone();
            if Self::is_zero_fe(&c) {
                continue;
            }
            for j in 0..k {
                prod[i - k + j] = base.sub_fe(&prod[i - k + j], &base.mul_fe(&c, &m[j]));
            }
        }
        self.from_chunks(&prod[..k])
    }

    /// Splits an element into its `degree` coordinates over the base.
    pub(crate) fn chunks(&self, a: &Fe) -> Vec<Fe> {
        let w = self.0.base.as_ref().map_or(1, |b| b.width());
        a.0.chunks(w).map(|c| Fe(c.into())).collect()
    }

    pub(crate) fn from_chunks(&self, cs: &[Fe]) -> Fe {
        let mut v = self.zero_fe();
        let w = self.0.base.as_ref().map_or(1, |b| b.width());
        for (j, c) in cs.iter().enumerate() {
            v.0[j * w..(j + 1) * w].copy_from_slice(&c.0);
        }
        v
    }

    pub(crate) fn inv_fe(&self, a: &Fe) -> Option<Fe> {
        if Self::is_zero_fe(a) {
            return None;
        }
        match &self.0.base {
            None => Some(Fe(smallvec![inv_mod(a.0[0] as u64, self.0.p as u64) as u32])),
            Some(base) => {
                let m = self.0.modulus.as_ref().expect("extension has a modulus");
                let f = Poly::from_raw(base.clone(), self.chunks(a));
                let (g, s, _) = f.xgcd(m);
                debug_assert_eq!(g.degree(), Some(0));
                let mut cs = s.raw().to_vec();
                cs.resize(self.0.degree, base.zero_fe());
                Some(self.from_chunks(&cs))
            }
        }
    }

    pub(crate) fn pow_fe(&self, a: &Fe, mut e: u128) -> Fe {
        let mut result = self.one_fe();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_fe(&result, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul_fe(&b, &b);
            }
        }
        result
    }
}

/// An element of a [`FieldCtx`].
#[derive(Clone)]
pub struct FieldElem {
    ctx: FieldCtx,
    v: Fe,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v && self.ctx == other.ctx
    }
}

impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.v.hash(state);
    }
}

impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.v.cmp(&other.v)
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FieldElem {
    pub(crate) fn from_raw(ctx: FieldCtx, v: Fe) -> Self {
        FieldElem { ctx, v }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn raw(&self) -> &Fe {
        &self.v
    }

    /// Flat coordinates over the prime field.
    pub fn coords(&self) -> &[u32] {
        &self.v.0
    }

    pub fn index(&self) -> u128 {
        self.ctx.index_of(&self.v)
    }

    pub fn is_zero(&self) -> bool {
        FieldCtx::is_zero_fe(&self.v)
    }

    pub fn is_one(&self) -> bool {
        FieldCtx::is_one_fe(&self.v)
    }

    fn same_ctx(&self, other: &FieldElem) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::CtxMismatch)
        }
    }

    pub fn try_add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_ctx(other)?;
        Ok(FieldElem::from_raw(self.ctx.clone(), self.ctx.add_fe(&self.v, &other.v)))
    }

    pub fn try_sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_ctx(other)?;
        Ok(FieldElem::from_raw(self.ctx.clone(), self.ctx.sub_fe(&self.v, &other.v)))
    }

    pub fn try_mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_ctx(other)?;
        Ok(FieldElem::from_raw(self.ctx.clone(), self.ctx.mul_fe(&self.v, &other.v)))
    }

    pub fn try_div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_ctx(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<FieldElem> {
        self.ctx
            .inv_fe(&self.v)
            .map(|v| FieldElem::from_raw(self.ctx.clone(), v))
            .ok_or(Error::DivisionByZero)
    }

    pub fn pow(&self, e: u128) -> FieldElem {
        FieldElem::from_raw(self.ctx.clone(), self.ctx.pow_fe(&self.v, e))
    }

    /// Integer powers; negative exponents invert first.
    pub fn powi(&self, e: i64) -> Result<FieldElem> {
        if e >= 0 {
            Ok(self.pow(e as u128))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs() as u128))
        }
    }

    /// `x^(q^e)` where `q` is the cardinality of the immediate base field.
    /// On a prime field this is the identity.
    pub fn frobenius(&self, e: u64) -> FieldElem {
        match self.ctx.base() {
            None => self.clone(),
            Some(b) => self.frobenius_over_card(b.cardinality(), e),
        }
    }

    /// `x^(|sub|^e)` for a subfield `sub` of this element's field.
    pub fn frobenius_over(&self, sub: &FieldCtx, e: u64) -> Result<FieldElem> {
        if !sub.is_subfield_of(&self.ctx) {
            return Err(Error::CtxMismatch);
        }
        Ok(self.frobenius_over_card(sub.cardinality(), e))
    }

    fn frobenius_over_card(&self, q: u128, e: u64) -> FieldElem {
        let mut x = self.clone();
        for _ in 0..e {
            x = x.pow(q);
        }
        x
    }

    /// True when the element lies in the subfield `sub` of its field.
    pub fn in_subfield(&self, sub: &FieldCtx) -> bool {
        sub.is_subfield_of(&self.ctx) && self.v.0[sub.width()..].iter().all(|&c| c == 0)
    }

    /// The same element viewed in the subfield `sub`, if it lies there.
    pub fn descend(&self, sub: &FieldCtx) -> Option<FieldElem> {
        if !self.in_subfield(sub) {
            return None;
        }
        Some(FieldElem::from_raw(sub.clone(), Fe(self.v.0[..sub.width()].into())))
    }

    /// Whether the element is a square (in its own field).
    pub fn is_square(&self) -> bool {
        if self.is_zero() || self.ctx.p() == 2 {
            return true;
        }
        self.pow((self.ctx.cardinality() - 1) / 2).is_one()
    }

    fn fmt_fe(ctx: &FieldCtx, v: &Fe, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match ctx.base() {
            None => write!(f, "{}", v.0[0]),
            Some(b) => {
                write!(f, "[")?;
                for (i, c) in ctx.chunks(v).iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    Self::fmt_fe(b, c, f)?;
                }
                write!(f, "]")
            }
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Self::fmt_fe(&self.ctx, &self.v, f)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            /// Panics when the operands live in different fields.
            fn $m(self, rhs: &FieldElem) -> FieldElem {
                self.$try(rhs).expect("field context mismatch")
            }
        }
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::from_raw(self.ctx.clone(), self.ctx.neg_fe(&self.v))
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

/// Parses an element: an integer (read in the prime subfield) or a
/// coordinate vector `[c0,c1,...]` over the immediate base, nested for towers.
pub fn parse_elem(ctx: &FieldCtx, text: &str) -> Result<FieldElem> {
    let t = text.trim();
    if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let base = ctx
            .base()
            .ok_or_else(|| Error::Parse(format!("coordinate vector given for prime field: {t}")))?;
        let parts = split_top_level(inner, ',');
        if parts.len() > ctx.degree() {
            return Err(Error::Parse(format!("too many coordinates in {t}")));
        }
        let mut chunks = vec![base.zero_fe(); ctx.degree()];
        for (j, part) in parts.iter().enumerate() {
            chunks[j] = parse_elem(base, part)?.v;
        }
        return Ok(FieldElem::from_raw(ctx.clone(), ctx.from_chunks(&chunks)));
    }
    let n: i64 = t.parse().map_err(|_| Error::Parse(format!("bad field element {t:?}")))?;
    Ok(ctx.int(n))
}

/// Splits on `sep` outside of brackets and parentheses.
pub(crate) fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Minimal polynomial of `alpha` over the subfield `over`: the product of the
/// distinct conjugates `alpha^(|over|^i)`.
pub fn minimal_poly(alpha: &FieldElem, over: &FieldCtx) -> Result<Poly> {
    if !over.is_subfield_of(alpha.ctx()) {
        return Err(Error::CtxMismatch);
    }
    let q = over.cardinality();
    let ctx = alpha.ctx().clone();
    let mut f = Poly::one(&ctx);
    let mut x = alpha.clone();
    loop {
        f = &f * &Poly::from_elems(&ctx, vec![-&x, ctx.one()])?;
        x = x.pow(q);
        if &x == alpha {
            break;
        }
    }
    f.descend(over)
        .ok_or_else(|| Error::InvariantViolation("conjugate product has coefficients outside the subfield".into()))
}

/// An embedding of a small field into a field that is not built on top of
/// it, fixed by sending the adjoined variable to the least root of its modulus.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    source: FieldCtx,
    target: FieldCtx,
    image: Vec<FieldElem>,
    back: std::collections::HashMap<Fe, u128>,
}

impl FieldEmbedding {
    pub fn new(source: &FieldCtx, target: &FieldCtx) -> Result<FieldEmbedding> {
        if source.p() != target.p() || source.level() > 1 || target.width() % source.width() != 0 {
            return Err(Error::CtxMismatch);
        }
        let q = source.cardinality();
        limits::check_enumeration("subfield embedding", q)?;
        let rho = match source.modulus() {
            None => target.one(),
            Some(h) => {
                let h = h.map_into(&target.prime_subfield())?;
                let roots = upoly::roots_in(&h, target)?;
                roots.into_iter().next().ok_or(Error::CtxMismatch)?
            }
        };
        let mut image = Vec::with_capacity(q as usize);
        let mut back = std::collections::HashMap::new();
        for i in 0..q {
            let x = FieldElem::from_raw(source.clone(), source.fe_from_index(i));
            let mut acc = target.zero();
            for c in x.coords().iter().rev() {
                acc = &(&acc * &rho) + &target.int(*c as i64);
            }
            back.insert(acc.v.clone(), i);
            image.push(acc);
        }
        Ok(FieldEmbedding { source: source.clone(), target: target.clone(), image, back })
    }

    pub fn source(&self) -> &FieldCtx {
        &self.source
    }

    pub fn target(&self) -> &FieldCtx {
        &self.target
    }

    pub fn map(&self, x: &FieldElem) -> FieldElem {
        assert_eq!(x.ctx(), &self.source, "element outside the embedded field");
        self.image[x.index() as usize].clone()
    }

    /// The source element mapping to `y`, if `y` lies in the image.
    pub fn preimage(&self, y: &FieldElem) -> Option<FieldElem> {
        self.back.get(&y.v).map(|&i| FieldElem::from_raw(self.source.clone(), self.source.fe_from_index(i)))
    }

    pub fn map_poly(&self, f: &Poly) -> Poly {
        Poly::from_elems(&self.target, f.coeffs().iter().map(|c| self.map(c)).collect()).expect("same field")
    }

    pub fn preimage_poly(&self, f: &Poly) -> Option<Poly> {
        let cs = f.coeffs().iter().map(|c| self.preimage(c)).collect::<Option<Vec<_>>>()?;
        Some(Poly::from_elems(&self.source, cs).expect("same field"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedding_respects_arithmetic() {
        let f9 = field_create(3, 2).unwrap();
        let f81 = field_create(3, 4).unwrap();
        let e = FieldEmbedding::new(&f9, &f81).unwrap();
        for x in f9.elements().unwrap() {
            for y in f9.elements().unwrap() {
                assert_eq!(e.map(&(&x * &y)), &e.map(&x) * &e.map(&y));
                assert_eq!(e.map(&(&x + &y)), &e.map(&x) + &e.map(&y));
            }
            assert_eq!(e.preimage(&e.map(&x)), Some(x));
        }
        assert_eq!(e.preimage(&f81.generator()), None);
    }

    #[test]
    fn prime_field_arith() {
        let f7 = prime_field(7).unwrap();
        assert!((f7.int(3) * f7.int(5)).is_one());
        assert!(f7.one().inv().unwrap().is_one());
        assert_eq!(f7.zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(f7.int(-1), f7.int(6));
    }

    #[test]
    fn rejects_non_prime() {
        assert_eq!(field_create(4, 1).unwrap_err(), Error::NonPrime(4));
        assert_eq!(field_create(1, 3).unwrap_err(), Error::NonPrime(1));
    }

    #[test]
    fn f9_modulus_is_least_quadratic() {
        let f9 = field_create(3, 2).unwrap();
        assert_eq!(f9.modulus().unwrap().to_string(), "T^2 + 1");
        let a = field_create(3, 2).unwrap();
        assert_eq!(f9.modulus(), a.modulus());
    }

    #[test]
    fn f8_modulus() {
        let f8 = field_create(2, 3).unwrap();
        assert_eq!(f8.modulus().unwrap().to_string(), "T^3 + T + 1");
    }

    #[test]
    fn multiplicative_order_f9() {
        let f9 = field_create(3, 2).unwrap();
        for x in f9.elements().unwrap().into_iter().skip(1) {
            assert!(x.pow(8).is_one());
            assert!((&x * &x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn linear_extension_is_base() {
        let f5 = prime_field(5).unwrap();
        let h = Poly::from_ints(&f5, &[2, 1]);
        assert_eq!(extend(&f5, &h).unwrap(), f5);
    }

    #[test]
    fn reducible_extension_rejected() {
        let f5 = prime_field(5).unwrap();
        let h = Poly::from_ints(&f5, &[1, 0, 1]);
        assert!(matches!(extend(&f5, &h), Err(Error::NotIrreducible(_))));
    }

    #[test]
    fn three_levels_rejected() {
        let f4 = field_create(2, 2).unwrap();
        let f16 = extension_of_degree(&f4, 2).unwrap();
        assert_eq!(extension_of_degree(&f16, 2).unwrap_err(), Error::TowerTooDeep);
    }

    #[test]
    fn frobenius_on_tower() {
        let f4 = field_create(2, 2).unwrap();
        let f64_ = extension_of_degree(&f4, 3).unwrap();
        for x in f64_.elements().unwrap() {
            assert_eq!(x.frobenius(1), x.pow(4));
            assert_eq!(x.frobenius(3), x);
        }
        for x in f4.elements().unwrap() {
            let y = f64_.embed(&x).unwrap();
            assert_eq!(y.frobenius(1), y);
        }
    }

    #[test]
    fn generic_tower_multiplication_is_associative() {
        let f9 = field_create(3, 2).unwrap();
        let f81 = extension_of_degree(&f9, 2).unwrap();
        let els = f81.elements().unwrap();
        for (i, a) in els.iter().enumerate().step_by(7) {
            let b = &els[(i * 13 + 5) % els.len()];
            let c = &els[(i * 29 + 11) % els.len()];
            assert_eq!(&(a * b) * c, a * &(b * c));
            if !a.is_zero() {
                assert!((a * &a.inv().unwrap()).is_one());
            }
        }
    }

    #[test]
    fn minimal_poly_of_i() {
        let f3 = prime_field(3).unwrap();
        let f9 = extend(&f3, &Poly::from_ints(&f3, &[1, 0, 1])).unwrap();
        let i = f9.generator();
        assert!((&i * &i + f9.one()).is_zero());
        assert_eq!(minimal_poly(&i, &f3).unwrap(), Poly::from_ints(&f3, &[1, 0, 1]));
        let c = f9.int(2);
        assert_eq!(minimal_poly(&c, &f3).unwrap(), Poly::from_ints(&f3, &[-2, 1]));
    }

    #[test]
    fn display_formats() {
        let f9 = field_create(3, 2).unwrap();
        assert_eq!(f9.generator().to_string(), "[0,1]");
        let f81 = extension_of_degree(&f9, 2).unwrap();
        assert_eq!(f81.generator().to_string(), "[[0,0],[1,0]]");
        assert_eq!(prime_field(7).unwrap().int(-1).to_string(), "6");
    }

    #[test]
    fn parse_round_trip() {
        let f9 = field_create(3, 2).unwrap();
        let f81 = extension_of_degree(&f9, 2).unwrap();
        for x in f81.elements().unwrap().iter().step_by(5) {
            assert_eq!(&parse_elem(&f81, &x.to_string()).unwrap(), x);
        }
        assert_eq!(parse_elem(&prime_field(7).unwrap(), "-1").unwrap().to_string(), "6");
        assert!(parse_elem(&prime_field(7).unwrap(), "[1,2]").is_err());
    }

    #[test]
    fn ctx_mismatch() {
        let a = prime_field(5).unwrap().one();
        let b = prime_field(7).unwrap().one();
        assert_eq!(a.try_mul(&b), Err(Error::CtxMismatch));
    }
}
