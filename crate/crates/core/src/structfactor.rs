//! Factoring `p_s(T) = c*T^(q+1) + d*T^q - a*T - b` from the orbits of the
//! cyclic group `<s>`, the family `f - lambda*g`, and the counting law over
//! `lambda`.
//!
//! Only one irreducible factor of `p_s` is obtained from the generic
//! factorizer. Its root `alpha` is moved around by the centralizer of `s`,
//! and every `<s>`-orbit of translates yields one more factor.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{violation, Error, Result};
use crate::gf::{extend, extension_of_degree, field_create, FieldCtx, FieldElem, FieldEmbedding};
use crate::grouporbit::{centralizer, centralizer_in_pgl, cyclic, full_pgl, Subgroup};
use crate::invariants::{generator_from, invariant_generator, orbit_polynomial, pgl_generator, specialize, OrbitPolynomial, RatFunc};
use crate::limits;
use crate::moebius::{ElementClass, Moebius, ProjPoint};
use crate::upoly::{factorize, Poly};

/// Oracle calls made here use this seed so that results are reproducible.
const ORACLE_SEED: u64 = 0;

/// Up to this field size the centralizer is found by scanning PGL(2,q).
const CENTRALIZER_SCAN_LIMIT: u128 = 31;

/// `c*T^(q+1) + d*T^q - a*T - b` for the normalized entries of `s`.
pub fn frobenius_companion(s: &Moebius) -> Poly {
    let ctx = s.ctx();
    let q = ctx.cardinality() as usize;
    let [a, b, c, d] = s.entries();
    let mut v = vec![ctx.zero(); q + 2];
    v[0] = -&b;
    v[1] = -&a;
    v[q] = &v[q] + &d;
    v[q + 1] = c;
    Poly::from_elems(ctx, v).expect("same field")
}

/// The `s` in `g` with `s(alpha) = alpha^q`, after checking `phi(alpha)` is
/// rational. Returns the first match in sorted order.
pub fn find_s_for_alpha(g: &Subgroup, alpha: &FieldElem, phi: &RatFunc) -> Result<Moebius> {
    let matches = matching_elements(g, alpha, phi)?;
    matches.into_iter().next().ok_or_else(|| Error::InvariantViolation(format!("no group element maps {alpha} to its conjugate")))
}

fn matching_elements(g: &Subgroup, alpha: &FieldElem, phi: &RatFunc) -> Result<Vec<Moebius>> {
    let ctx = g.ctx();
    let a = ProjPoint::Finite(alpha.clone());
    if let ProjPoint::Finite(v) = phi.eval(&a)? {
        if !v.in_subfield(ctx) {
            return violation(format!("invariant value at {alpha} is not rational"));
        }
    }
    let ext = alpha.ctx();
    let beta = alpha.frobenius_over(ctx, 1)?;
    if ext != ctx && ext.base() != Some(ctx) {
        let (a, target) = (ProjPoint::Finite(alpha.clone()), ProjPoint::Finite(beta));
        let mut out = Vec::new();
        for s in g.elements() {
            if s.embed(ext)?.apply(&a)? == target {
                out.push(s.clone());
            }
        }
        return Ok(out);
    }
    // s(alpha) = alpha^q  <=>  a*alpha + b - c*alpha*beta - d*beta = 0, which is
    // F_q-linear in (a, b, c, d).
    let coords = |x: &FieldElem| -> Vec<FieldElem> {
        if ext == ctx {
            vec![x.clone()]
        } else {
            ext.chunks(x.raw()).into_iter().map(|c| FieldElem::from_raw(ctx.clone(), c)).collect()
        }
    };
    let cols = [coords(alpha), coords(&ext.one()), coords(&-&(alpha * &beta)), coords(&-&beta)];
    let rows: Vec<Vec<FieldElem>> = (0..cols[0].len()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let kernel = crate::linalg::nullspace(ctx, rows, 4);
    let q = ctx.cardinality();
    let total = q.checked_pow(kernel.len() as u32).unwrap_or(u128::MAX);
    limits::check_enumeration("matching kernel", total)?;
    let els = ctx.elements()?;
    let mut out = Vec::new();
    for idx in 1..total {
        let mut v = vec![ctx.zero(); 4];
        let mut rest = idx;
        for k in &kernel {
            let c = &els[(rest % q) as usize];
            rest /= q;
            for (x, y) in v.iter_mut().zip(k) {
                *x = &*x + &(c * y);
            }
        }
        if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_one()) {
            if let Ok(m) = Moebius::new(&v[0], &v[1], &v[2], &v[3]) {
                if g.contains(&m) {
                    out.push(m);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// One irreducible factor with the root it was built from.
#[derive(Clone, Debug)]
pub struct OrbitFactor {
    pub poly: Poly,
    pub source: FieldElem,
    /// Value of the family parameter at `source`.
    pub lambda: ProjPoint,
}

#[derive(Clone, Debug)]
pub struct StructuredFactorization {
    pub element: Moebius,
    pub input: Poly,
    pub unit: FieldElem,
    pub removed_linear: Vec<Poly>,
    pub factors: Vec<OrbitFactor>,
    pub degree_r: usize,
    pub orbit_poly: OrbitPolynomial,
}

impl StructuredFactorization {
    /// `unit * prod(removed_linear) * prod(factors)`.
    pub fn expand(&self) -> Poly {
        let mut acc = Poly::constant(&self.unit);
        for f in self.removed_linear.iter().chain(self.factors.iter().map(|f| &f.poly)) {
            acc = &acc * f;
        }
        acc
    }

    /// The same factorization for the matrix representative `mu * (a, b, c, d)`,
    /// whose companion polynomial is `mu * p_s`.
    pub fn rescaled(&self, mu: &FieldElem) -> Result<StructuredFactorization> {
        let mut out = self.clone();
        out.input = self.input.scale(mu)?;
        out.unit = &self.unit * mu;
        Ok(out)
    }

    /// Whether the generic factorizer returns the same unit and multiset.
    pub fn agrees_with_oracle(&self, seed: u64) -> Result<bool> {
        let fac = factorize(&self.input, seed)?;
        let mut ours: Vec<(Poly, usize)> =
            self.removed_linear.iter().chain(self.factors.iter().map(|f| &f.poly)).map(|p| (p.clone(), 1)).collect();
        ours.sort();
        Ok(fac.unit == self.unit && fac.factors == ours)
    }
}

/// Structured factorization of `p_s` for a non-identity `s`.
pub fn factor_by_orbit(s: &Moebius) -> Result<StructuredFactorization> {
    factor_by_orbit_in(s, None)
}

/// As [`factor_by_orbit`], reusing an already enumerated PGL(2,q) for the
/// centralizer scan.
pub fn factor_by_orbit_in(s: &Moebius, pgl: Option<&Subgroup>) -> Result<StructuredFactorization> {
    if s.is_identity() {
        return Err(Error::IdentityInput);
    }
    let ctx = s.ctx();
    let input = frobenius_companion(s);
    if !input.is_squarefree() {
        return violation("p_s is not squarefree");
    }
    let unit = input.lc().expect("nonzero");
    let mut rest = input.scale(&unit.inv()?)?;
    let mut removed_linear = Vec::new();
    if matches!(s.classify(), ElementClass::Split | ElementClass::Unipotent) {
        for z in s.fixed_points(ctx)? {
            if let ProjPoint::Finite(z) = z {
                let lin = Poly::from_elems(ctx, vec![-&z, ctx.one()])?;
                rest = rest.div_exact(&lin)?;
                removed_linear.push(lin);
            }
        }
    }
    let r = s.order() as usize;
    let orbit_poly = orbit_polynomial(&cyclic(s)?)?;
    let mut factors = Vec::new();
    if rest.degree() != Some(0) {
        let oracle = factorize(&rest, ORACLE_SEED)?;
        let h = &oracle.factors[0].0;
        if h.degree() != Some(r) {
            return violation(format!("bootstrap factor has degree {:?}, expected {r}", h.degree()));
        }
        let ext = extend(ctx, h)?;
        let alpha = ext.generator();
        check_conjugate_law(s, &alpha)?;
        let cent = match pgl {
            Some(g) if ctx.cardinality() <= CENTRALIZER_SCAN_LIMIT => centralizer(g, s)?,
            None if ctx.cardinality() <= CENTRALIZER_SCAN_LIMIT => centralizer(&full_pgl(ctx)?, s)?,
            _ => centralizer_in_pgl(s)?,
        };
        factors = orbit_factors(s, &alpha, &cent, &orbit_poly)?;
        let got: usize = factors.len() * r;
        if Some(got) != rest.degree() {
            return violation(format!("centralizer translates give degree {got}, expected {:?}", rest.degree()));
        }
    }
    let sf = StructuredFactorization { element: s.clone(), input, unit, removed_linear, factors, degree_r: r, orbit_poly };
    if sf.expand() != sf.input {
        return violation("structured factors do not multiply back to p_s");
    }
    Ok(sf)
}

/// `s^i(alpha) = alpha^(q^i)` for all `i`.
fn check_conjugate_law(s: &Moebius, alpha: &FieldElem) -> Result<()> {
    let se = s.embed(alpha.ctx())?;
    let mut z = ProjPoint::Finite(alpha.clone());
    let mut conj = alpha.clone();
    for _ in 0..s.order() {
        z = se.apply(&z)?;
        conj = conj.frobenius_over(s.ctx(), 1)?;
        if z != ProjPoint::Finite(conj.clone()) {
            return violation(format!("s^i(alpha) differs from alpha^(q^i) for {s}"));
        }
    }
    Ok(())
}

fn orbit_factors(s: &Moebius, alpha: &FieldElem, cent: &Subgroup, op: &OrbitPolynomial) -> Result<Vec<OrbitFactor>> {
    let ctx = s.ctx();
    let ext = alpha.ctx();
    let se = s.embed(ext)?;
    let a = ProjPoint::Finite(alpha.clone());
    let translates: BTreeSet<ProjPoint> = cent.embedded(ext)?.iter().map(|u| u.apply(&a)).collect::<Result<_>>()?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for beta in translates {
        if seen.contains(&beta) {
            continue;
        }
        let ProjPoint::Finite(b) = &beta else {
            return violation("a translate of a root is infinite");
        };
        let mut prod = Poly::one(ext);
        let mut z = beta.clone();
        loop {
            let zf = z.finite().expect("orbit of a finite non-rational point").clone();
            prod = &prod * &Poly::from_elems(ext, vec![-&zf, ext.one()])?;
            seen.insert(z.clone());
            z = se.apply(&z)?;
            if z == beta {
                break;
            }
        }
        let poly = prod.descend(ctx).ok_or_else(|| Error::InvariantViolation("orbit product is not defined over F_q".into()))?;
        let spec = specialize(op, b)?.descend(ctx);
        if spec.as_ref() != Some(&poly) {
            return violation("factor differs from the specialized orbit polynomial");
        }
        let lambda = op.parameter().eval(&beta)?.descend(ctx).ok_or_else(|| Error::InvariantViolation("family parameter is not rational".into()))?;
        if let ProjPoint::Finite(t) = &lambda {
            for (i, (ai, bi)) in op.family.iter().enumerate() {
                if poly.coeff(i) != &(ai * t) + bi {
                    return violation("factor leaves the linear family");
                }
            }
        }
        out.push(OrbitFactor { poly, source: b.clone(), lambda });
    }
    out.sort_by(|x, y| x.poly.cmp(&y.poly));
    Ok(out)
}

/// Counts, per divisor `r > 1` of `q + 1`, how many `lambda` in `F_q` make
/// `f - lambda*g` split into degree-`r` irreducibles.
#[derive(Clone, Debug, Serialize)]
pub struct LambdaReport {
    pub q: u128,
    /// `r -> (observed count, phi(r))`.
    pub counts: BTreeMap<usize, (usize, usize)>,
    pub total: usize,
    pub pass: bool,
}

pub fn euler_phi(mut n: usize) -> usize {
    let mut out = n;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            while n % d == 0 {
                n /= d;
            }
            out -= out / d;
        }
        d += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

fn require_order_q_plus_1(s: &Moebius) -> Result<()> {
    let q = s.ctx().cardinality() as u64;
    let found = s.order();
    if found != q + 1 {
        return Err(Error::WrongOrder { expected: q + 1, found });
    }
    Ok(())
}

pub fn lambda_family_report(s: &Moebius) -> Result<LambdaReport> {
    require_order_q_plus_1(s)?;
    let ctx = s.ctx();
    let q = ctx.cardinality();
    let phi = generator_from(&orbit_polynomial(&cyclic(s)?)?)?;
    let mut counts: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for r in (2..=q as usize + 1).filter(|r| (q as usize + 1) % r == 0) {
        counts.insert(r, (0, euler_phi(r)));
    }
    for lambda in ctx.elements()? {
        let f = phi.num().try_sub(&phi.den().scale(&lambda)?)?;
        let fac = factorize(&f, ORACLE_SEED)?;
        let degs: BTreeSet<usize> = fac.factors.iter().map(|(h, _)| h.degree().expect("nonzero")).collect();
        if degs.len() != 1 || !fac.is_squarefree() {
            return violation(format!("f - {lambda}*g does not split into equal-degree distinct factors"));
        }
        let r = *degs.iter().next().expect("nonempty");
        match counts.get_mut(&r) {
            Some(e) => e.0 += 1,
            None => return violation(format!("factor degree {r} does not divide q+1 or is 1")),
        }
    }
    let total = counts.values().map(|e| e.0).sum();
    let pass = total as u128 == q && counts.values().all(|(c, e)| c == e);
    Ok(LambdaReport { q, counts, total, pass })
}

/// `(i, mu_i, lambda_i)` with `f_i = mu_i*p_s + lambda_i*(x^q - x)`.
#[derive(Clone, Debug)]
pub struct NumeratorCheck {
    pub entries: Vec<(usize, FieldElem, FieldElem)>,
    pub denominator_ok: bool,
    pub pass: bool,
}

pub fn numerator_structure_check(s: &Moebius) -> Result<NumeratorCheck> {
    require_order_q_plus_1(s)?;
    let ctx = s.ctx();
    let q = ctx.cardinality() as usize;
    let ps = frobenius_companion(s);
    let lead = ps.lc().expect("nonzero").inv()?;
    let xq_x = Poly::monomial(&ctx.one(), q).try_sub(&Poly::x(ctx))?;
    let op = orbit_polynomial(&cyclic(s)?)?;
    let mut entries = Vec::new();
    let mut pass = true;
    let mut denominator_ok = true;
    for (i, c) in op.coeffs.iter().enumerate() {
        if c.is_constant() {
            continue;
        }
        denominator_ok &= c.den() == &xq_x;
        let mu = &c.num().coeff(ps.degree().expect("nonzero")) * &lead;
        let resid = c.num().try_sub(&ps.scale(&mu)?)?;
        let lam = resid.coeff(q);
        pass &= resid == xq_x.scale(&lam)?;
        entries.push((i, mu, lam));
    }
    Ok(NumeratorCheck { entries, denominator_ok, pass: pass && denominator_ok })
}

/// Factors of `f - lambda*g` for `phi = f/g`.
#[derive(Clone, Debug)]
pub enum FLambdaOutcome {
    /// Distinct factors of one degree `r`, with an element of order `r`
    /// mapping a root to its Frobenius conjugate.
    Regular { unit: FieldElem, factors: Vec<Poly>, r: usize, witness: Moebius },
    /// Repeated factors; each multiplicity is the stabilizer order of a root.
    NonRegular { unit: FieldElem, factors: Vec<(Poly, usize)>, stabilizer_orders: Vec<usize> },
}

pub fn factor_f_lambda(g: &Subgroup, lambda: &ProjPoint) -> Result<FLambdaOutcome> {
    let phi = invariant_generator(g)?;
    factor_f_lambda_with(g, &phi, lambda)
}

/// `f - lambda*g` for a supplied invariant `phi = f/g` of `g`; infinity gives `g`.
pub fn f_lambda(phi: &RatFunc, lambda: &ProjPoint) -> Result<Poly> {
    match lambda {
        ProjPoint::Infinity => Ok(phi.den().clone()),
        ProjPoint::Finite(l) => phi.num().try_sub(&phi.den().scale(l)?),
    }
}

pub fn factor_f_lambda_with(g: &Subgroup, phi: &RatFunc, lambda: &ProjPoint) -> Result<FLambdaOutcome> {
    let ctx = g.ctx();
    let f = f_lambda(phi, lambda)?;
    let fac = factorize(&f, ORACLE_SEED)?;
    let roots: Vec<FieldElem> = fac.factors.iter().map(|(h, _)| root_of(h)).collect::<Result<_>>()?;
    if !fac.is_squarefree() {
        let mut stabilizer_orders = Vec::new();
        for ((_, mult), alpha) in fac.factors.iter().zip(&roots) {
            let a = ProjPoint::Finite(alpha.clone());
            let n = g.embedded(alpha.ctx())?.iter().filter(|s| s.apply(&a).ok().as_ref() == Some(&a)).count();
            if n != *mult {
                return violation(format!("multiplicity {mult} differs from stabilizer order {n}"));
            }
            stabilizer_orders.push(n);
        }
        return Ok(FLambdaOutcome::NonRegular { unit: fac.unit, factors: fac.factors, stabilizer_orders });
    }
    let degs: BTreeSet<usize> = fac.factors.iter().map(|(h, _)| h.degree().expect("nonzero")).collect();
    if degs.len() != 1 {
        return violation("regular fibre with factors of different degrees");
    }
    let r = *degs.iter().next().expect("nonempty");
    let mut witness = None;
    for ((h, _), alpha) in fac.factors.iter().zip(&roots) {
        let ms = matching_elements(g, alpha, phi)?;
        if ms.len() != 1 {
            return violation(format!("{} elements map a root of {h} to its conjugate", ms.len()));
        }
        if ms[0].order() as usize != r {
            return violation("witness order differs from the factor degree");
        }
        if &crate::gf::minimal_poly(alpha, ctx)? != h {
            return violation("minimal polynomial of a root is not its factor");
        }
        witness.get_or_insert_with(|| ms[0].clone());
    }
    Ok(FLambdaOutcome::Regular {
        unit: fac.unit,
        factors: fac.factors.into_iter().map(|(h, _)| h).collect(),
        r,
        witness: witness.expect("at least one factor"),
    })
}

/// A root of a monic irreducible `h` in `F_q[T]/(h)`, or in `F_q` if linear.
pub(crate) fn root_of(h: &Poly) -> Result<FieldElem> {
    if h.degree() == Some(1) {
        return Ok(-&h.coeff(0));
    }
    Ok(extend(h.ctx(), h)?.generator())
}

#[derive(Clone, Debug)]
pub struct AllCubics {
    pub poly: Poly,
    pub lambda: FieldElem,
    pub unit: FieldElem,
    pub count: usize,
}

/// `f - phi(alpha)*g` for the least `alpha` in `F_{q^3} \ F_q`, checked to be a
/// unit times `(T^(q^3) - T)/(T^q - T)`, the product of all monic irreducible cubics.
pub fn all_cubics_product(ctx: &FieldCtx) -> Result<AllCubics> {
    let q = ctx.cardinality();
    limits::check_enumeration("cubic extension", q * q * q)?;
    let phi = pgl_generator(ctx)?;
    let ext = extension_of_degree(ctx, 3)?;
    let alpha = ext.from_index(q)?;
    let lambda = match phi.eval(&ProjPoint::Finite(alpha))? {
        ProjPoint::Finite(v) => v.descend(ctx).ok_or_else(|| Error::InvariantViolation("invariant value is not rational".into()))?,
        ProjPoint::Infinity => return violation("cubic point is a pole of the invariant"),
    };
    let poly = phi.num().try_sub(&phi.den().scale(&lambda)?)?;
    let unit = poly.lc().expect("nonzero");
    let one = ctx.one();
    let big = Poly::monomial(&one, (q * q * q) as usize).try_sub(&Poly::x(ctx))?;
    let small = Poly::monomial(&one, q as usize).try_sub(&Poly::x(ctx))?;
    if poly.scale(&unit.inv()?)? != big.div_exact(&small)? {
        return violation("f - lambda*g is not the product of all irreducible cubics");
    }
    Ok(AllCubics { poly, lambda, unit, count: ((q * q * q - q) / 3) as usize })
}

/// Factorization of `c*T^(Q+1) + d*T^Q - a*T - b` over `F_q`, `Q = q^k`.
#[derive(Clone, Debug)]
pub struct GeneralKFactorization {
    pub k: usize,
    pub input: Poly,
    pub unit: FieldElem,
    pub factors: Vec<Poly>,
    pub structured: bool,
    /// Common degree of the factors over `F_Q` on the structured path.
    pub degree_over_ext: Option<usize>,
}

pub fn factor_general_k(s: &Moebius, k: usize) -> Result<GeneralKFactorization> {
    let ctx = s.ctx();
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let big_q = ctx.cardinality().checked_pow(k as u32).ok_or(Error::SizeCapExceeded {
        what: "q^k",
        size: u128::MAX,
        cap: limits::enumeration_cap() as u128,
    })?;
    limits::check_enumeration("q^k", big_q)?;
    let [a, b, c, d] = s.entries();
    let mut v = vec![ctx.zero(); big_q as usize + 2];
    v[0] = -&b;
    v[1] = -&a;
    v[big_q as usize] = &v[big_q as usize] + &d;
    v[big_q as usize + 1] = c;
    let input = Poly::from_elems(ctx, v)?;
    let unit = input.lc().expect("nonzero");
    let r = s.order();
    if s.is_identity() || r <= 2 || (big_q + 1) % r as u128 != 0 {
        log::warn!("order {r} of {s} does not allow the structured path for k = {k}; using the generic factorizer");
        let fac = factorize(&input, ORACLE_SEED)?;
        let mut factors = Vec::new();
        for (h, m) in fac.factors {
            factors.extend(std::iter::repeat(h).take(m));
        }
        return Ok(GeneralKFactorization { k, input, unit, factors, structured: false, degree_over_ext: None });
    }
    let big = field_create(ctx.p(), ctx.width() * k)?;
    let emb = FieldEmbedding::new(ctx, &big)?;
    let [a, b, c, d] = s.entries().map(|x| emb.map(&x));
    let sq = Moebius::new(&a, &b, &c, &d)?;
    let over_big = factor_by_orbit(&sq)?;
    let q = ctx.cardinality();
    let pieces: Vec<Poly> = over_big.removed_linear.iter().cloned().chain(over_big.factors.iter().map(|f| f.poly.clone())).collect();
    let mut used = vec![false; pieces.len()];
    let mut factors = Vec::new();
    for i in 0..pieces.len() {
        if used[i] {
            continue;
        }
        let mut prod = Poly::one(&big);
        let mut h = pieces[i].clone();
        loop {
            let j = pieces.iter().position(|p| p == &h).ok_or_else(|| Error::InvariantViolation("conjugate factor missing".into()))?;
            if used[j] {
                break;
            }
            used[j] = true;
            prod = &prod * &h;
            let cs = h.coeffs().iter().map(|x| x.pow(q)).collect();
            h = Poly::from_elems(&big, cs)?;
        }
        factors.push(emb.preimage_poly(&prod).ok_or_else(|| Error::InvariantViolation("merged factor is not defined over F_q".into()))?);
    }
    factors.sort();
    let mut acc = Poly::constant(&unit);
    for f in &factors {
        acc = &acc * f;
    }
    if acc != input {
        return violation("merged factors do not multiply back to the input");
    }
    Ok(GeneralKFactorization { k, input, unit, factors, structured: true, degree_over_ext: Some(over_big.degree_r) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::prime_field;
    use crate::moebius::{parse_entries, parse_moebius, representative_scale};

    #[test]
    fn companion_examples() {
        let f19 = prime_field(19).unwrap();
        let s = parse_moebius(&f19, "(-x-1)/(x-1)").unwrap();
        let p = frobenius_companion(&s);
        assert_eq!(p.lc().unwrap(), f19.int(-1));
        assert_eq!(p.monic().to_string(), "T^20 + 18*T^19 + T + 1");
        let f17 = prime_field(17).unwrap();
        let raw = parse_entries(&f17, "(14x+13)/(6x+2)").unwrap();
        let s = parse_moebius(&f17, "(14x+13)/(6x+2)").unwrap();
        let p = frobenius_companion(&s).scale(&representative_scale(&raw).unwrap()).unwrap();
        assert_eq!(p.to_string(), "6*T^18 + 2*T^17 + 3*T + 4");
        let id = Moebius::identity(&f17);
        assert_eq!(frobenius_companion(&id).to_string(), "T^17 + 16*T");
    }

    #[test]
    fn headline_quartics() {
        let f = prime_field(19).unwrap();
        let s = parse_moebius(&f, "(-x-1)/(x-1)").unwrap();
        let sf = factor_by_orbit(&s).unwrap();
        assert_eq!(sf.factors.len(), 5);
        // Each factor is T^4 - l*T^3 - 6T^2 + l*T + 1 and its parameter value is l.
        let lams: BTreeSet<u128> = sf.factors.iter().map(|f| f.lambda.finite().unwrap().index()).collect();
        let want: BTreeSet<u128> = [-6i64, -9, -12, -14, -15].iter().map(|l| l.rem_euclid(19) as u128).collect();
        assert_eq!(lams, want);
        for fac in &sf.factors {
            let l = fac.lambda.finite().unwrap();
            assert_eq!(fac.poly, Poly::from_elems(&f, vec![f.one(), l.clone(), f.int(-6), -l, f.one()]).unwrap());
        }
        assert!(sf.agrees_with_oracle(0).unwrap());
    }

    #[test]
    fn cubics_over_f17() {
        let f = prime_field(17).unwrap();
        let text = "(14x+13)/(6x+2)";
        let s = parse_moebius(&f, text).unwrap();
        let mu = representative_scale(&parse_entries(&f, text).unwrap()).unwrap();
        let sf = factor_by_orbit(&s).unwrap().rescaled(&mu).unwrap();
        assert_eq!(sf.unit, f.int(6));
        assert!(sf.agrees_with_oracle(0).unwrap());
        assert_eq!(sf.factors.len(), 6);
        assert!(sf.factors.iter().any(|x| x.poly == Poly::from_ints(&f, &[7, 15, 0, 1])));
    }

    #[test]
    fn order_q_plus_1_is_irreducible() {
        let f = prime_field(7).unwrap();
        let s = parse_moebius(&f, "(3x-1)/(x+3)").unwrap();
        let sf = factor_by_orbit(&s).unwrap();
        assert_eq!(sf.factors.len(), 1);
        assert_eq!(sf.degree_r, 8);
    }

    #[test]
    fn lambda_report_q7() {
        let f = prime_field(7).unwrap();
        let s = parse_moebius(&f, "(3x-1)/(x+3)").unwrap();
        let rep = lambda_family_report(&s).unwrap();
        assert!(rep.pass);
        let c: Vec<_> = rep.counts.iter().map(|(r, (n, _))| (*r, *n)).collect();
        assert_eq!(c, vec![(2, 1), (4, 2), (8, 4)]);
        assert_eq!(rep.total, 7);
        let sq = s.pow(2);
        assert_eq!(lambda_family_report(&sq).unwrap_err(), Error::WrongOrder { expected: 8, found: 4 });
    }

    #[test]
    fn numerators_q7() {
        let f = prime_field(7).unwrap();
        let s = parse_moebius(&f, "(3x-1)/(x+3)").unwrap();
        let chk = numerator_structure_check(&s).unwrap();
        assert!(chk.pass);
        assert!(!chk.entries.is_empty());
    }

    #[test]
    fn euler_phi_values() {
        assert_eq!([1, 2, 3, 4, 8, 9, 12].map(euler_phi), [1, 1, 2, 2, 4, 6, 4]);
    }

    #[test]
    fn identity_rejected() {
        let f = prime_field(5).unwrap();
        assert_eq!(factor_by_orbit(&Moebius::identity(&f)).unwrap_err(), Error::IdentityInput);
    }

    #[test]
    fn general_k_structured_and_fallback() {
        let f2 = prime_field(2).unwrap();
        let s = parse_moebius(&f2, "1/(x+1)").unwrap();
        assert_eq!(s.order(), 3);
        let g3 = factor_general_k(&s, 3).unwrap();
        assert!(g3.structured);
        let oracle = factorize(&g3.input, 0).unwrap();
        let flat: Vec<Poly> = oracle.factors.iter().flat_map(|(h, m)| std::iter::repeat(h.clone()).take(*m)).collect();
        assert_eq!(g3.factors, flat);
        let g2 = factor_general_k(&s, 2).unwrap();
        assert!(!g2.structured);
        let g1 = factor_general_k(&s, 1).unwrap();
        let sf = factor_by_orbit(&s).unwrap();
        let mut direct: Vec<Poly> = sf.removed_linear.iter().cloned().chain(sf.factors.iter().map(|f| f.poly.clone())).collect();
        direct.sort();
        assert_eq!(g1.factors, direct);
    }
}
