//! Rational functions over `F_q`, orbit polynomials of subgroups of PGL(2,q),
//! the invariant generator `f/g` and its linear one-parameter family.

use std::fmt;

use crate::error::{violation, Error, Result};
use crate::gf::{FieldCtx, FieldElem};
use crate::grouporbit::{full_pgl, Subgroup};
use crate::limits;
use crate::linalg;
use crate::moebius::{Moebius, ProjPoint};
use crate::upoly::Poly;

/// A reduced fraction `num/den` with `den` monic; zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if num.ctx() != den.ctx() {
            return Err(Error::CtxMismatch);
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc { den: Poly::one(num.ctx()), num });
        }
        let g = num.gcd(&den);
        let (num, den) = (num.div_exact(&g)?, den.div_exact(&g)?);
        let l = den.lc().expect("nonzero").inv()?;
        Ok(RatFunc { num: num.scale(&l)?, den: den.scale(&l)? })
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc { den: Poly::one(p.ctx()), num: p }
    }

    pub fn constant(c: &FieldElem) -> RatFunc {
        RatFunc::from_poly(Poly::constant(c))
    }

    /// The identity function `x`.
    pub fn x(ctx: &FieldCtx) -> RatFunc {
        RatFunc::from_poly(Poly::x(ctx))
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.num.ctx()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// `max(deg num, deg den)`, with 0 for constants.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn try_add(&self, o: &RatFunc) -> Result<RatFunc> {
        RatFunc::new(self.num.try_mul(&o.den)?.try_add(&o.num.try_mul(&self.den)?)?, self.den.try_mul(&o.den)?)
    }

    pub fn try_sub(&self, o: &RatFunc) -> Result<RatFunc> {
        RatFunc::new(self.num.try_mul(&o.den)?.try_sub(&o.num.try_mul(&self.den)?)?, self.den.try_mul(&o.den)?)
    }

    pub fn try_mul(&self, o: &RatFunc) -> Result<RatFunc> {
        RatFunc::new(self.num.try_mul(&o.num)?, self.den.try_mul(&o.den)?)
    }

    pub fn try_div(&self, o: &RatFunc) -> Result<RatFunc> {
        RatFunc::new(self.num.try_mul(&o.den)?, self.den.try_mul(&o.num)?)
    }

    pub fn scale(&self, c: &FieldElem) -> Result<RatFunc> {
        RatFunc::new(self.num.scale(c)?, self.den.clone())
    }

    /// Value at a projective point; finite points may lie in an extension.
    /// The value at infinity lives in the coefficient field.
    pub fn eval(&self, z: &ProjPoint) -> Result<ProjPoint> {
        match z {
            ProjPoint::Finite(v) => {
                let d = self.den.eval(v)?;
                if d.is_zero() {
                    return Ok(ProjPoint::Infinity);
                }
                Ok(ProjPoint::Finite(self.num.eval(v)?.try_div(&d)?))
            }
            ProjPoint::Infinity => {
                let dn = self.num.degree();
                let dd = self.den.degree().expect("nonzero");
                match dn {
                    None => Ok(ProjPoint::Finite(self.ctx().zero())),
                    Some(n) if n > dd => Ok(ProjPoint::Infinity),
                    Some(n) if n < dd => Ok(ProjPoint::Finite(self.ctx().zero())),
                    Some(_) => {
                        Ok(ProjPoint::Finite(self.num.lc().expect("nonzero").try_div(&self.den.lc().expect("nonzero"))?))
                    }
                }
            }
        }
    }

    /// `self(s(x))`.
    pub fn compose_moebius(&self, s: &Moebius) -> Result<RatFunc> {
        if s.ctx() != self.ctx() {
            return Err(Error::CtxMismatch);
        }
        let [a, b, c, d] = s.entries();
        let l1 = Poly::from_elems(self.ctx(), vec![b, a])?;
        let l2 = Poly::from_elems(self.ctx(), vec![d, c])?;
        let n = self.degree();
        RatFunc::new(homogenize(&self.num, &l1, &l2, n), homogenize(&self.den, &l1, &l2, n))
    }

    pub fn is_invariant_under(&self, s: &Moebius) -> Result<bool> {
        Ok(&self.compose_moebius(s)? == self)
    }

    /// Text form in the variable `var`.
    pub fn display_with(&self, var: &str) -> String {
        let n = self.num.display_with(var);
        if self.den.is_one() {
            return n;
        }
        format!("({n})/({})", self.den.display_with(var))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

/// `sum p_i l1^i l2^(n-i)` by a Horner scheme that carries the power of `l2`.
fn homogenize(p: &Poly, l1: &Poly, l2: &Poly, n: usize) -> Poly {
    let ctx = p.ctx();
    let Some(dp) = p.degree() else {
        return Poly::zero(ctx);
    };
    let mut acc = Poly::zero(ctx);
    let mut l2pow = Poly::one(ctx);
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        acc = &(&acc * l1) + &l2pow.scale(c).expect("same field");
        if i > 0 {
            l2pow = &l2pow * l2;
        }
    }
    &acc * &l2.pow((n - dp) as u64)
}

/// `P_G(T) = prod over s in G of (T - s(x))` with coefficients in `F_q(x)`.
#[derive(Clone, Debug)]
pub struct OrbitPolynomial {
    pub group: Subgroup,
    /// Coefficient of `T^i` at index `i`; the last is 1.
    pub coeffs: Vec<RatFunc>,
    /// `(a_i, b_i)` with `coeffs[i] = a_i * t + b_i`, `t = coeffs[param_index]`.
    pub family: Vec<(FieldElem, FieldElem)>,
    pub param_index: usize,
}

impl OrbitPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn parameter(&self) -> &RatFunc {
        &self.coeffs[self.param_index]
    }

    /// The family re-expressed against `t' = coeffs[j]`.
    pub fn family_relative_to(&self, j: usize) -> Result<Vec<(FieldElem, FieldElem)>> {
        let (aj, bj) = self.family.get(j).ok_or_else(|| Error::InvalidArgument(format!("no coefficient {j}")))?;
        if aj.is_zero() {
            return Err(Error::ConstantInput);
        }
        let inv = aj.inv()?;
        Ok(self.family.iter().map(|(a, b)| (a * &inv, b - &(&(a * &inv) * bj))).collect())
    }

    /// `"T^n + (a*t+b)*T^(n-1) + ..."`.
    pub fn family_text(&self) -> String {
        let mut terms = Vec::new();
        for (i, (a, b)) in self.family.iter().enumerate().rev() {
            let c = match (a.is_zero(), b.is_zero()) {
                (true, true) => continue,
                (true, false) => b.to_string(),
                (false, true) if a.is_one() => "t".into(),
                (false, true) => format!("{a}*t"),
                (false, false) if a.is_one() => format!("(t+{b})"),
                (false, false) => format!("({a}*t+{b})"),
            };
            let mon = match i {
                0 => String::new(),
                1 => "T".into(),
                _ => format!("T^{i}"),
            };
            terms.push(match (i, c.as_str()) {
                (0, _) => c,
                (_, "1") => mon,
                _ => format!("{c}*{mon}"),
            });
        }
        terms.join(" + ")
    }
}

/// Expands the orbit polynomial of `g` and extracts the linear family.
pub fn orbit_polynomial(g: &Subgroup) -> Result<OrbitPolynomial> {
    let ctx = g.ctx();
    let n = g.order();
    let mut bi: Vec<Poly> = vec![Poly::one(ctx)];
    let mut poles = Vec::new();
    for s in g.elements() {
        let [a, b, c, d] = s.entries();
        let l1 = Poly::from_elems(ctx, vec![b, a])?;
        let l2 = Poly::from_elems(ctx, vec![d, c.clone()])?;
        let mut next = vec![Poly::zero(ctx); bi.len() + 1];
        for (i, p) in bi.iter().enumerate() {
            next[i + 1] = &next[i + 1] + &(p * &l2);
            next[i] = &next[i] - &(p * &l1);
        }
        bi = next;
        if !c.is_zero() {
            poles.push(l2.monic());
        }
    }
    let fixes_infinity = g.elements().iter().any(|s| !s.is_identity() && s.c().is_zero());
    if !fixes_infinity {
        let before = poles.len();
        poles.sort();
        poles.dedup();
        if poles.len() != before {
            return violation("two group elements share a denominator");
        }
    }
    let x = Poly::x(ctx);
    let mut at_x = Poly::zero(ctx);
    for p in bi.iter().rev() {
        at_x = &(&at_x * &x) + p;
    }
    if !at_x.is_zero() {
        return violation("orbit polynomial does not vanish at T = x");
    }
    let a = bi[n].clone();
    let coeffs: Vec<RatFunc> = bi.into_iter().map(|p| RatFunc::new(p, a.clone())).collect::<Result<_>>()?;
    if !coeffs[n].num().is_one() || !coeffs[n].den().is_one() {
        return violation("orbit polynomial is not monic");
    }
    if coeffs.iter().any(|c| !c.is_constant() && c.degree() != n) {
        return violation("a nonconstant coefficient has degree other than |G|");
    }
    let param_index = coeffs.iter().position(|c| !c.is_constant()).expect("T^0 coefficient depends on x");
    let t = &coeffs[param_index];
    let family = coeffs.iter().map(|c| affine_coefficients(c, t)).collect::<Result<_>>()?;
    Ok(OrbitPolynomial { group: g.clone(), coeffs, family, param_index })
}

/// `(a, b)` with `c = a*t + b`.
fn affine_coefficients(c: &RatFunc, t: &RatFunc) -> Result<(FieldElem, FieldElem)> {
    let ctx = c.ctx();
    if c.is_constant() {
        return Ok((ctx.zero(), c.num().coeff(0)));
    }
    // c.num * t.den = a * t.num * c.den + b * t.den * c.den
    let lhs = c.num() * t.den();
    let u = t.num() * c.den();
    let v = t.den() * c.den();
    let len = [&lhs, &u, &v].iter().map(|p| p.degree().map_or(0, |d| d + 1)).max().unwrap_or(0);
    let rows = (0..len).map(|i| vec![u.coeff(i), v.coeff(i), -&lhs.coeff(i)]).collect();
    let ker = linalg::nullspace(ctx, rows, 3);
    match ker.iter().find(|k| !k[2].is_zero()) {
        Some(k) if ker.len() == 1 => {
            let inv = k[2].inv()?;
            Ok((&k[0] * &inv, &k[1] * &inv))
        }
        _ => violation("coefficients are not affinely related"),
    }
}

/// The lowest-index nonconstant coefficient of `P_G(T)`, scaled so that its
/// numerator is monic.
pub fn invariant_generator(g: &Subgroup) -> Result<RatFunc> {
    if g.order() < 2 {
        return Err(Error::TrivialGroup);
    }
    generator_from(&orbit_polynomial(g)?)
}

/// The canonical generator read off an already computed orbit polynomial.
pub fn generator_from(op: &OrbitPolynomial) -> Result<RatFunc> {
    let t = op.parameter();
    let phi = t.scale(&t.num().lc().expect("nonconstant").inv()?)?;
    if phi.degree() != op.group.order() {
        return violation("invariant generator has the wrong degree");
    }
    for s in op.group.elements() {
        if !phi.is_invariant_under(s)? {
            return violation(format!("generator not invariant under {s}"));
        }
    }
    Ok(phi)
}

/// `((1 + (x^q - x)^(q-1))^(q+1)) / (x^q - x)^(q^2 - q)`, checked against
/// `x + 1`, `w*x` for a primitive `w`, and `1/x`.
pub fn pgl_generator(ctx: &FieldCtx) -> Result<RatFunc> {
    let q = ctx.cardinality();
    limits::check_group(q * q * q - q)?;
    let q = q as u64;
    let u = &Poly::x(ctx).pow(q) - &Poly::x(ctx);
    let num = (&Poly::one(ctx) + &u.pow(q - 1)).pow(q + 1);
    let phi = RatFunc::new(num, u.pow(q * q - q))?;
    let w = ctx.primitive_element();
    let (zero, one) = (ctx.zero(), ctx.one());
    let gens = [Moebius::new(&one, &one, &zero, &one)?, Moebius::new(&w, &zero, &zero, &one)?, Moebius::new(&zero, &one, &one, &zero)?];
    for s in &gens {
        if !phi.is_invariant_under(s)? {
            return violation(format!("PGL generator not invariant under {s}"));
        }
    }
    Ok(phi)
}

/// Exhaustive invariance check of `pgl_generator` over the whole group.
pub fn pgl_generator_exhaustive_check(phi: &RatFunc) -> Result<bool> {
    for s in full_pgl(phi.ctx())?.elements() {
        if !phi.is_invariant_under(s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `P_G(T)` with `x` replaced by `alpha`.
pub fn specialize(p: &OrbitPolynomial, alpha: &FieldElem) -> Result<Poly> {
    let ext = alpha.ctx();
    let mut out = Vec::with_capacity(p.coeffs.len());
    for c in &p.coeffs {
        match c.eval(&ProjPoint::Finite(alpha.clone()))? {
            ProjPoint::Finite(v) => out.push(v),
            ProjPoint::Infinity => return Err(Error::PoleAtAlpha),
        }
    }
    Poly::from_elems(ext, out)
}

/// Whether `phi(alpha) = phi(beta)`; for the invariant generator of `G` this
/// is exactly "same G-orbit".
pub fn phi_orbit_test(phi: &RatFunc, alpha: &ProjPoint, beta: &ProjPoint) -> Result<bool> {
    let ext = [alpha, beta].iter().find_map(|z| z.finite().map(|v| v.ctx().clone())).unwrap_or_else(|| phi.ctx().clone());
    Ok(phi.eval(alpha)?.embed(&ext)? == phi.eval(beta)?.embed(&ext)?)
}
