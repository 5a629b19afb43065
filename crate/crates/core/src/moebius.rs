//! Elements of PGL(2,q) as normalized linear fractional transformations
//! `z -> (a z + b)/(c z + d)` and their action on the projective line.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Mul;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{self, extension_of_degree, split_top_level, Fe, FieldCtx, FieldElem};
use crate::upoly::{roots_in, Poly};

/// A point of `P^1`: a field element or infinity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ProjPoint {
    Finite(FieldElem),
    Infinity,
}

impl ProjPoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }

    pub fn finite(&self) -> Option<&FieldElem> {
        match self {
            ProjPoint::Finite(v) => Some(v),
            ProjPoint::Infinity => None,
        }
    }

    /// `z -> z^(|sub|^e)`, fixing infinity.
    pub fn frobenius_over(&self, sub: &FieldCtx, e: u64) -> Result<ProjPoint> {
        match self {
            ProjPoint::Finite(v) => Ok(ProjPoint::Finite(v.frobenius_over(sub, e)?)),
            ProjPoint::Infinity => Ok(ProjPoint::Infinity),
        }
    }

    /// The same point over the subfield `sub`, if it lies in `P^1(sub)`.
    pub fn descend(&self, sub: &FieldCtx) -> Option<ProjPoint> {
        match self {
            ProjPoint::Finite(v) => v.descend(sub).map(ProjPoint::Finite),
            ProjPoint::Infinity => Some(ProjPoint::Infinity),
        }
    }

    pub fn embed(&self, ext: &FieldCtx) -> Result<ProjPoint> {
        match self {
            ProjPoint::Finite(v) => Ok(ProjPoint::Finite(ext.embed(v)?)),
            ProjPoint::Infinity => Ok(ProjPoint::Infinity),
        }
    }

    /// Index used for hashing-free bookkeeping: field index, or `|F|` for infinity.
    pub fn index_in(&self, ctx: &FieldCtx) -> u128 {
        match self {
            ProjPoint::Finite(v) => v.index(),
            ProjPoint::Infinity => ctx.cardinality(),
        }
    }
}

impl Ord for ProjPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ProjPoint::Finite(a), ProjPoint::Finite(b)) => a.cmp(b),
            (ProjPoint::Finite(_), ProjPoint::Infinity) => Ordering::Less,
            (ProjPoint::Infinity, ProjPoint::Finite(_)) => Ordering::Greater,
            (ProjPoint::Infinity, ProjPoint::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(v) => write!(f, "{v}"),
            ProjPoint::Infinity => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All points of `P^1(ctx)`: field elements in index order, then infinity.
pub fn projective_line(ctx: &FieldCtx) -> Result<Vec<ProjPoint>> {
    let mut pts: Vec<ProjPoint> = ctx.elements()?.into_iter().map(ProjPoint::Finite).collect();
    pts.push(ProjPoint::Infinity);
    Ok(pts)
}

/// The eigenvalue trichotomy of a matrix pre-image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ElementClass {
    Identity,
    Split,
    Unipotent,
    NonSplit,
}

/// Normalized `(a, b, c, d)`: the first nonzero entry is 1 and `ad - bc != 0`.
#[derive(Clone)]
pub struct Moebius {
    ctx: FieldCtx,
    m: [Fe; 4],
}

impl PartialEq for Moebius {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.ctx == other.ctx
    }
}

impl Eq for Moebius {}

impl Hash for Moebius {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.m.hash(state);
    }
}

impl Ord for Moebius {
    fn cmp(&self, other: &Self) -> Ordering {
        self.m.cmp(&other.m)
    }
}

impl PartialOrd for Moebius {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Moebius {
    /// Normalizes raw entries; `None` when the matrix is singular.
    pub(crate) fn from_raw(ctx: &FieldCtx, m: [Fe; 4]) -> Option<Moebius> {
        let det = ctx.sub_fe(&ctx.mul_fe(&m[0], &m[3]), &ctx.mul_fe(&m[1], &m[2]));
        if FieldCtx::is_zero_fe(&det) {
            return None;
        }
        let lead = m.iter().find(|x| !FieldCtx::is_zero_fe(x)).expect("nonsingular");
        let m = if FieldCtx::is_one_fe(lead) {
            m
        } else {
            let inv = ctx.inv_fe(lead).expect("nonzero");
            m.map(|x| ctx.mul_fe(&x, &inv))
        };
        Some(Moebius { ctx: ctx.clone(), m })
    }

    pub fn new(a: &FieldElem, b: &FieldElem, c: &FieldElem, d: &FieldElem) -> Result<Moebius> {
        let ctx = a.ctx();
        if [b, c, d].iter().any(|x| x.ctx() != ctx) {
            return Err(Error::CtxMismatch);
        }
        Moebius::from_raw(ctx, [a, b, c, d].map(|x| x.raw().clone())).ok_or(Error::Singular)
    }

    /// Entries read in the prime subfield.
    pub fn from_ints(ctx: &FieldCtx, a: i64, b: i64, c: i64, d: i64) -> Result<Moebius> {
        Moebius::new(&ctx.int(a), &ctx.int(b), &ctx.int(c), &ctx.int(d))
    }

    pub fn identity(ctx: &FieldCtx) -> Moebius {
        Moebius { ctx: ctx.clone(), m: [ctx.one_fe(), ctx.zero_fe(), ctx.zero_fe(), ctx.one_fe()] }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    fn entry(&self, i: usize) -> FieldElem {
        FieldElem::from_raw(self.ctx.clone(), self.m[i].clone())
    }

    pub fn a(&self) -> FieldElem {
        self.entry(0)
    }

    pub fn b(&self) -> FieldElem {
        self.entry(1)
    }

    pub fn c(&self) -> FieldElem {
        self.entry(2)
    }

    pub fn d(&self) -> FieldElem {
        self.entry(3)
    }

    pub fn entries(&self) -> [FieldElem; 4] {
        [self.a(), self.b(), self.c(), self.d()]
    }

    pub fn det(&self) -> FieldElem {
        &(&self.a() * &self.d()) - &(&self.b() * &self.c())
    }

    pub fn trace(&self) -> FieldElem {
        &self.a() + &self.d()
    }

    pub fn is_identity(&self) -> bool {
        FieldCtx::is_zero_fe(&self.m[1]) && FieldCtx::is_zero_fe(&self.m[2]) && self.m[0] == self.m[3]
    }

    /// The same transformation with entries viewed in an extension field.
    pub fn embed(&self, ext: &FieldCtx) -> Result<Moebius> {
        if !self.ctx.is_subfield_of(ext) {
            return Err(Error::CtxMismatch);
        }
        Ok(Moebius { ctx: ext.clone(), m: self.m.clone().map(|x| ext.pad_fe(&x)) })
    }

    /// The same transformation over a subfield, if its normalized entries lie there.
    pub fn descend(&self, sub: &FieldCtx) -> Option<Moebius> {
        let e = self.entries();
        let m = [
            e[0].descend(sub)?.raw().clone(),
            e[1].descend(sub)?.raw().clone(),
            e[2].descend(sub)?.raw().clone(),
            e[3].descend(sub)?.raw().clone(),
        ];
        Some(Moebius { ctx: sub.clone(), m })
    }

    /// Entry-wise `x -> x^(|sub|^e)`.
    pub fn frobenius_over(&self, sub: &FieldCtx, e: u64) -> Result<Moebius> {
        let [a, b, c, d] = self.entries();
        Moebius::new(
            &a.frobenius_over(sub, e)?,
            &b.frobenius_over(sub, e)?,
            &c.frobenius_over(sub, e)?,
            &d.frobenius_over(sub, e)?,
        )
    }

    /// Applies the transformation; `z` may live over any extension of the base.
    /// The image of infinity lies in the transformation's own field, so callers
    /// working over an extension should [`embed`](Self::embed) first.
    pub fn apply(&self, z: &ProjPoint) -> Result<ProjPoint> {
        match z {
            ProjPoint::Infinity => self.apply_infinity(),
            ProjPoint::Finite(v) => {
                let ext = v.ctx();
                if ext == &self.ctx {
                    Ok(self.apply_fe(v.raw()))
                } else {
                    Ok(self.embed(ext)?.apply_fe(v.raw()))
                }
            }
        }
    }

    /// `s(inf) = a/c`, as an element of the transformation's own field.
    fn apply_infinity(&self) -> Result<ProjPoint> {
        if FieldCtx::is_zero_fe(&self.m[2]) {
            return Ok(ProjPoint::Infinity);
        }
        Ok(ProjPoint::Finite(self.a().try_div(&self.c())?))
    }

    /// Image of a finite point given by raw coordinates in `self.ctx`.
    pub(crate) fn apply_fe(&self, z: &Fe) -> ProjPoint {
        let ctx = &self.ctx;
        let den = ctx.add_fe(&ctx.mul_fe(&self.m[2], z), &self.m[3]);
        match ctx.inv_fe(&den) {
            None => ProjPoint::Infinity,
            Some(inv) => {
                let num = ctx.add_fe(&ctx.mul_fe(&self.m[0], z), &self.m[1]);
                ProjPoint::Finite(FieldElem::from_raw(ctx.clone(), ctx.mul_fe(&num, &inv)))
            }
        }
    }

    /// `self ∘ t`, i.e. `z -> self(t(z))`.
    pub fn compose(&self, t: &Moebius) -> Result<Moebius> {
        if self.ctx != t.ctx {
            return Err(Error::CtxMismatch);
        }
        let ctx = &self.ctx;
        let [a, b, c, d] = &self.m;
        let [e, f, g, h] = &t.m;
        let dot = |x: &Fe, y: &Fe, z: &Fe, w: &Fe| ctx.add_fe(&ctx.mul_fe(x, y), &ctx.mul_fe(z, w));
        let m = [dot(a, e, b, g), dot(a, f, b, h), dot(c, e, d, g), dot(c, f, d, h)];
        Ok(Moebius::from_raw(ctx, m).expect("product of invertible matrices"))
    }

    pub fn inverse(&self) -> Moebius {
        let ctx = &self.ctx;
        let [a, b, c, d] = &self.m;
        Moebius::from_raw(ctx, [d.clone(), ctx.neg_fe(b), ctx.neg_fe(c), a.clone()]).expect("adjugate is invertible")
    }

    pub fn pow(&self, n: i64) -> Moebius {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut result = Moebius::identity(&self.ctx);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose(&b).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                b = b.compose(&b).expect("same field");
            }
        }
        result
    }

    /// Least `n >= 1` with `self^n = id`, found by iteration up to `q + 1`.
    pub fn order(&self) -> u64 {
        let cap = self.ctx.cardinality() as u64 + 1;
        let mut acc = self.clone();
        let mut n = 1;
        while !acc.is_identity() {
            acc = acc.compose(self).expect("same field");
            n += 1;
            assert!(n <= cap, "element order exceeds q + 1");
        }
        n
    }

    /// Fixed points in `P^1(ext)`: roots of `cT^2 + (d - a)T - b`, plus
    /// infinity when `c = 0`.
    pub fn fixed_points(&self, ext: &FieldCtx) -> Result<Vec<ProjPoint>> {
        if self.is_identity() {
            return Err(Error::IdentityInput);
        }
        let ctx = &self.ctx;
        let poly = Poly::from_raw(
            ctx.clone(),
            vec![ctx.neg_fe(&self.m[1]), ctx.sub_fe(&self.m[3], &self.m[0]), self.m[2].clone()],
        );
        let mut pts: Vec<ProjPoint> = if poly.is_constant() {
            Vec::new()
        } else {
            roots_in(&poly, ext)?.into_iter().map(ProjPoint::Finite).collect()
        };
        if FieldCtx::is_zero_fe(&self.m[2]) {
            pts.push(ProjPoint::Infinity);
        }
        Ok(pts)
    }

    /// Fixed points over the degree-`k` extension of the base field.
    pub fn fixed_points_k(&self, k: usize) -> Result<Vec<ProjPoint>> {
        self.fixed_points(&extension_of_degree(&self.ctx, k)?)
    }

    /// Split, Unipotent or NonSplit according to the eigenvalues of a
    /// matrix pre-image; Identity for the identity.
    pub fn classify(&self) -> ElementClass {
        if self.is_identity() {
            return ElementClass::Identity;
        }
        let [a, b, c, d] = self.entries();
        if self.ctx.p() != 2 {
            let dm = &d - &a;
            let disc = &(&dm * &dm) + &(&(&b * &c) * &self.ctx.int(4));
            if disc.is_zero() {
                ElementClass::Unipotent
            } else if disc.is_square() {
                ElementClass::Split
            } else {
                ElementClass::NonSplit
            }
        } else if a == d {
            ElementClass::Unipotent
        } else if c.is_zero() {
            ElementClass::Split
        } else {
            // Eigenvalues t*(a + d) with t^2 + t = det/(a + d)^2; solvable iff
            // the absolute trace of the right side vanishes.
            let tr = &a + &d;
            let w = self.det().try_div(&(&tr * &tr)).expect("trace nonzero");
            if absolute_trace(&w).is_zero() {
                ElementClass::Split
            } else {
                ElementClass::NonSplit
            }
        }
    }

    /// Text form; reads back with [`parse_moebius`].
    pub fn text(&self) -> String {
        let [a, b, c, d] = self.entries();
        let num = linear_text(&a, &b);
        if c.is_zero() && d.is_one() {
            num
        } else {
            let den = linear_text(&c, &d);
            let num = if num.contains('+') { format!("({num})") } else { num };
            let den = if den.contains(['+', '*']) { format!("({den})") } else { den };
            format!("{num}/{den}")
        }
    }
}

fn absolute_trace(x: &FieldElem) -> FieldElem {
    let mut acc = x.clone();
    let mut t = x.clone();
    for _ in 1..x.ctx().width() {
        t = &t * &t;
        acc = &acc + &t;
    }
    acc
}

fn linear_text(a: &FieldElem, b: &FieldElem) -> String {
    let xs = if a.is_zero() {
        None
    } else if a.is_one() {
        Some("x".to_string())
    } else {
        Some(format!("{a}*x"))
    };
    match (xs, b.is_zero()) {
        (None, _) => b.to_string(),
        (Some(x), true) => x,
        (Some(x), false) => format!("{x}+{b}"),
    }
}

impl fmt::Display for Moebius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

impl fmt::Debug for Moebius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

impl Mul<&Moebius> for &Moebius {
    type Output = Moebius;
    /// Composition; panics when the operands live over different fields.
    fn mul(self, rhs: &Moebius) -> Moebius {
        self.compose(rhs).expect("Moebius context mismatch")
    }
}

/// Parses `u*x+v` style linear expressions into `(u, v)`.
fn parse_linear(ctx: &FieldCtx, text: &str) -> Result<(FieldElem, FieldElem)> {
    let mut s = text.trim();
    while s.starts_with('(') && s.ends_with(')') && split_top_level(&s[1..s.len() - 1], ')').len() == 1 {
        s = s[1..s.len() - 1].trim();
    }
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut terms = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            '+' | '-' if depth == 0 && i > start => {
                terms.push(&s[start..i]);
                start = i;
            }
            _ => {}
        }
    }
    terms.push(&s[start..]);
    let mut u = ctx.zero();
    let mut v = ctx.zero();
    for term in terms {
        let (neg, body) = match term.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, term.strip_prefix('+').unwrap_or(term)),
        };
        let (coef, has_x) = match body.strip_suffix('x') {
            Some(c) => (c.strip_suffix('*').unwrap_or(c), true),
            None => (body, false),
        };
        let mut val = if coef.is_empty() {
            if !has_x {
                return Err(Error::Parse(format!("empty term in {text:?}")));
            }
            ctx.one()
        } else {
            gf::parse_elem(ctx, coef)?
        };
        if neg {
            val = -val;
        }
        if has_x {
            u = &u + &val;
        } else {
            v = &v + &val;
        }
    }
    Ok((u, v))
}

/// Parses `(a*x+b)/(c*x+d)`, `a*x+b` or `x`; coefficients are integers or
/// coordinate vectors.
pub fn parse_moebius(ctx: &FieldCtx, text: &str) -> Result<Moebius> {
    let [a, b, c, d] = parse_entries(ctx, text)?;
    Moebius::new(&a, &b, &c, &d).map_err(|e| match e {
        Error::Singular => Error::Parse(format!("{text:?} is not invertible")),
        other => other,
    })
}

/// The entries `[a, b, c, d]` exactly as written, before normalization.
pub fn parse_entries(ctx: &FieldCtx, text: &str) -> Result<[FieldElem; 4]> {
    let parts = split_top_level(text.trim(), '/');
    let ((a, b), (c, d)) = match parts.as_slice() {
        [num] => (parse_linear(ctx, num)?, (ctx.zero(), ctx.one())),
        [num, den] => (parse_linear(ctx, num)?, parse_linear(ctx, den)?),
        _ => return Err(Error::Parse(format!("bad transformation {text:?}"))),
    };
    Ok([a, b, c, d])
}

/// The scalar `mu` with `entries = mu * (normalized entries)`.
pub fn representative_scale(entries: &[FieldElem; 4]) -> Result<FieldElem> {
    entries.iter().find(|x| !x.is_zero()).cloned().ok_or(Error::Singular)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{field_create, prime_field};

    #[test]
    fn normalization_and_parse() {
        let f19 = prime_field(19).unwrap();
        let s = parse_moebius(&f19, "(-x-1)/(x-1)").unwrap();
        assert!(s.a().is_one());
        assert_eq!(s, Moebius::from_ints(&f19, -1, -1, 1, -1).unwrap());
        assert_eq!(parse_moebius(&f19, &s.text()).unwrap(), s);
        assert_eq!(parse_moebius(&f19, "x").unwrap(), Moebius::identity(&f19));
        assert_eq!(parse_moebius(&f19, "1/x").unwrap(), Moebius::from_ints(&f19, 0, 1, 1, 0).unwrap());
        assert_eq!(parse_moebius(&f19, "3*x+2").unwrap(), Moebius::from_ints(&f19, 3, 2, 0, 1).unwrap());
        assert!(parse_moebius(&f19, "(x+1)/(x+1)").is_err());
    }

    #[test]
    fn apply_conventions() {
        let f19 = prime_field(19).unwrap();
        let s = parse_moebius(&f19, "(-x-1)/(x-1)").unwrap();
        let zero = ProjPoint::Finite(f19.zero());
        assert_eq!(s.apply(&zero).unwrap(), ProjPoint::Finite(f19.one()));
        assert_eq!(s.apply(&ProjPoint::Infinity).unwrap(), ProjPoint::Finite(f19.int(-1)));
        assert_eq!(s.apply(&ProjPoint::Finite(f19.one())).unwrap(), ProjPoint::Infinity);
    }

    #[test]
    fn orders_of_worked_examples() {
        let s = parse_moebius(&prime_field(19).unwrap(), "(-x-1)/(x-1)").unwrap();
        assert_eq!(s.order(), 4);
        let s = parse_moebius(&prime_field(17).unwrap(), "(14x+13)/(6x+2)").unwrap();
        assert_eq!(s.order(), 3);
        let s = parse_moebius(&prime_field(7).unwrap(), "(3x-1)/(x+3)").unwrap();
        assert_eq!(s.order(), 8);
        assert_eq!(s.classify(), ElementClass::NonSplit);
    }

    #[test]
    fn compose_negation_and_reciprocal() {
        let f = prime_field(13).unwrap();
        let neg = parse_moebius(&f, "-x").unwrap();
        let rec = parse_moebius(&f, "1/x").unwrap();
        assert_eq!(&neg * &rec, parse_moebius(&f, "-1/x").unwrap());
        assert!((&neg * &neg.inverse()).is_identity());
        assert!(Moebius::identity(&f).inverse().is_identity());
    }

    #[test]
    fn fixed_point_cases() {
        let f7 = prime_field(7).unwrap();
        let t = parse_moebius(&f7, "x+3").unwrap();
        for k in 1..=3 {
            assert_eq!(t.fixed_points_k(k).unwrap(), vec![ProjPoint::Infinity]);
        }
        let m = parse_moebius(&f7, "2*x").unwrap();
        assert_eq!(m.fixed_points_k(1).unwrap(), vec![ProjPoint::Finite(f7.zero()), ProjPoint::Infinity]);
        assert_eq!(m.classify(), ElementClass::Split);
        let s = parse_moebius(&f7, "(3x-1)/(x+3)").unwrap().pow(2);
        assert_eq!(s.order(), 4);
        assert!(s.fixed_points_k(1).unwrap().is_empty());
        assert_eq!(s.fixed_points_k(2).unwrap().len(), 2);
        assert_eq!(Moebius::identity(&f7).fixed_points_k(1), Err(Error::IdentityInput));
    }

    #[test]
    fn classify_char_two_matches_order() {
        for m in 1..=3 {
            let f = field_create(2, m).unwrap();
            let q = f.cardinality() as u64;
            let els = f.elements().unwrap();
            for a in &els {
                for b in &els {
                    for c in &els {
                        for d in &els {
                            if let Ok(s) = Moebius::new(a, b, c, d) {
                                let n = s.order();
                                let expect = match s.classify() {
                                    ElementClass::Identity => n == 1,
                                    ElementClass::Unipotent => n == 2,
                                    ElementClass::Split => (q - 1) % n == 0 && n > 1,
                                    ElementClass::NonSplit => (q + 1) % n == 0 && n > 1,
                                };
                                assert!(expect, "{s} order {n} class {:?}", s.classify());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tower_coefficients_parse() {
        let f9 = field_create(3, 2).unwrap();
        let s = parse_moebius(&f9, "([0,1]*x+1)/(x+[2,1])").unwrap();
        assert_eq!(parse_moebius(&f9, &s.text()).unwrap(), s);
        let y = f9.generator();
        let expect = Moebius::new(&y, &f9.one(), &f9.one(), &(&y + &f9.int(2))).unwrap();
        assert_eq!(s, expect);
        assert!(s.a().is_one());
    }
}
