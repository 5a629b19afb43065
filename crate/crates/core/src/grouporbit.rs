//! Finite subgroups of PGL(2,q), orbits on the projective line, the census of
//! non-regular orbits and the genus-0 Riemann–Hurwitz audit.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{violation, Error, Result};
use crate::gf::{extension_of_degree, FieldCtx, FieldElem};
use crate::limits;
use crate::linalg;
use crate::moebius::{projective_line, Moebius, ProjPoint};

/// A subgroup of PGL(2,q), elements kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    ctx: FieldCtx,
    elements: Vec<Moebius>,
}

impl Subgroup {
    fn from_unsorted(ctx: &FieldCtx, mut elements: Vec<Moebius>) -> Subgroup {
        elements.sort();
        elements.dedup();
        Subgroup { ctx: ctx.clone(), elements }
    }

    pub fn trivial(ctx: &FieldCtx) -> Subgroup {
        Subgroup { ctx: ctx.clone(), elements: vec![Moebius::identity(ctx)] }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Moebius] {
        &self.elements
    }

    pub fn contains(&self, s: &Moebius) -> bool {
        self.elements.binary_search(s).is_ok()
    }

    /// Whether this is all of PGL(2,q).
    pub fn is_full_pgl(&self) -> bool {
        let q = self.ctx.cardinality() as usize;
        self.order() == q * q * q - q
    }

    /// Whether the order is a power of the characteristic.
    pub fn is_p_group(&self) -> bool {
        let p = self.ctx.p() as usize;
        let mut n = self.order();
        while n % p == 0 {
            n /= p;
        }
        n == 1
    }

    /// The same group acting over an extension field.
    pub fn embedded(&self, ext: &FieldCtx) -> Result<Vec<Moebius>> {
        self.elements.iter().map(|s| s.embed(ext)).collect()
    }

    /// The orbit of a point, sorted.
    pub fn orbit_of(&self, z: &ProjPoint) -> Result<Vec<ProjPoint>> {
        let ext = match z {
            ProjPoint::Finite(v) => v.ctx().clone(),
            ProjPoint::Infinity => self.ctx.clone(),
        };
        let els = self.embedded(&ext)?;
        let set: BTreeSet<ProjPoint> = els.iter().map(|g| g.apply(z)).collect::<Result<_>>()?;
        Ok(set.into_iter().collect())
    }
}

fn pgl_order(ctx: &FieldCtx) -> u128 {
    let q = ctx.cardinality();
    q * q * q - q
}

/// The subgroup generated by `gens`, by breadth-first closure.
pub fn generate(ctx: &FieldCtx, gens: &[Moebius]) -> Result<Subgroup> {
    if gens.iter().any(|g| g.ctx() != ctx) {
        return Err(Error::CtxMismatch);
    }
    let bound = pgl_order(ctx).min(limits::group_cap() as u128) as usize;
    let id = Moebius::identity(ctx);
    let mut seen: HashSet<Moebius> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.compose(g)?;
            if seen.insert(y.clone()) {
                if seen.len() > bound {
                    limits::check_group(seen.len() as u128)?;
                    return violation("subgroup closure exceeded |PGL(2,q)|");
                }
                queue.push_back(y);
            }
        }
    }
    Ok(Subgroup::from_unsorted(ctx, seen.into_iter().collect()))
}

/// The cyclic group generated by one element.
pub fn cyclic(s: &Moebius) -> Result<Subgroup> {
    generate(s.ctx(), std::slice::from_ref(s))
}

/// All of PGL(2,q), of order `q^3 - q`.
pub fn full_pgl(ctx: &FieldCtx) -> Result<Subgroup> {
    limits::check_group(pgl_order(ctx))?;
    let els = ctx.elements()?;
    let zero = ctx.zero();
    let one = ctx.one();
    let mut out = Vec::with_capacity(pgl_order(ctx) as usize);
    for b in &els {
        for c in &els {
            for d in &els {
                if let Ok(s) = Moebius::new(&one, b, c, d) {
                    out.push(s);
                }
            }
        }
    }
    for c in els.iter().skip(1) {
        for d in &els {
            out.push(Moebius::new(&zero, &one, c, d)?);
        }
    }
    Ok(Subgroup::from_unsorted(ctx, out))
}

/// One orbit with the stabilizer of its least point.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub points: Vec<ProjPoint>,
    pub stabilizer: Subgroup,
    pub regular: bool,
}

#[derive(Clone, Debug)]
pub struct OrbitReport {
    pub k: usize,
    pub ext: FieldCtx,
    pub orbits: Vec<Orbit>,
}

/// Partition of `P^1(F_{q^k})` into orbits, sorted by (size, least point).
pub fn orbit_decomposition(g: &Subgroup, k: usize) -> Result<OrbitReport> {
    let ext = extension_of_degree(g.ctx(), k)?;
    limits::check_enumeration("projective line", ext.cardinality() + 1)?;
    let els = g.embedded(&ext)?;
    let mut seen = vec![false; ext.cardinality() as usize + 1];
    let mut orbits = Vec::new();
    for pt in projective_line(&ext)? {
        if seen[pt.index_in(&ext) as usize] {
            continue;
        }
        let mut points = BTreeSet::new();
        let mut stab = Vec::new();
        for (s, se) in g.elements().iter().zip(&els) {
            let img = se.apply(&pt)?;
            if img == pt {
                stab.push(s.clone());
            }
            seen[img.index_in(&ext) as usize] = true;
            points.insert(img);
        }
        if points.len() * stab.len() != g.order() {
            return violation("orbit-stabilizer identity failed");
        }
        orbits.push(Orbit {
            regular: points.len() == g.order(),
            points: points.into_iter().collect(),
            stabilizer: Subgroup::from_unsorted(g.ctx(), stab),
        });
    }
    orbits.sort_by(|a, b| a.points.len().cmp(&b.points.len()).then_with(|| a.points[0].cmp(&b.points[0])));
    Ok(OrbitReport { k, ext, orbits })
}

/// One non-regular orbit over the algebraic closure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusEntry {
    pub orbit_size: usize,
    pub stabilizer_order: usize,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub representative: ProjPoint,
}

/// All non-regular orbits, found from the fixed points of non-identity
/// elements (all of which lie in `P^1(F_{q^2})`).
pub fn nonregular_census(g: &Subgroup) -> Result<Vec<CensusEntry>> {
    let ext = extension_of_degree(g.ctx(), 2)?;
    let els = g.embedded(&ext)?;
    let mut fixed: BTreeSet<ProjPoint> = BTreeSet::new();
    for s in &els {
        if !s.is_identity() {
            fixed.extend(s.fixed_points(&ext)?);
        }
    }
    let mut out = Vec::new();
    let mut covered: HashSet<ProjPoint> = HashSet::new();
    for pt in &fixed {
        if covered.contains(pt) {
            continue;
        }
        let orbit: BTreeSet<ProjPoint> = els.iter().map(|s| s.apply(pt)).collect::<Result<_>>()?;
        let size = orbit.len();
        if g.order() % size != 0 {
            return violation("orbit size does not divide the group order");
        }
        out.push(CensusEntry {
            orbit_size: size,
            stabilizer_order: g.order() / size,
            representative: orbit.iter().next().expect("nonempty").clone(),
        });
        covered.extend(orbit);
    }
    out.sort_by(|a, b| a.orbit_size.cmp(&b.orbit_size).then_with(|| a.representative.cmp(&b.representative)));
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct RiemannHurwitz {
    pub census: Vec<CensusEntry>,
    /// Sum of the differents `delta_P` over all ramified points.
    pub differents_sum: usize,
    /// Sum of `e_P - 1` over all ramified points.
    pub tame_sum: usize,
    /// `2|G| - 2`.
    pub expected: usize,
    pub pass: bool,
}

/// `delta = e - 1` when `p` does not divide `e`, else `e + q_P - 2` with
/// `q_P` the `p`-part of `e`.
pub fn different_exponent(e: usize, p: usize) -> usize {
    if e % p != 0 {
        return e - 1;
    }
    let mut qp = 1;
    let mut n = e;
    while n % p == 0 {
        n /= p;
        qp *= p;
    }
    e + qp - 2
}

/// Checks `2|G| - 2 = sum of differents` over the non-regular points.
pub fn riemann_hurwitz_audit(g: &Subgroup) -> Result<RiemannHurwitz> {
    let census = nonregular_census(g)?;
    let p = g.ctx().p() as usize;
    let differents_sum = census.iter().map(|c| c.orbit_size * different_exponent(c.stabilizer_order, p)).sum();
    let tame_sum = census.iter().map(|c| c.orbit_size * (c.stabilizer_order - 1)).sum();
    let expected = 2 * g.order() - 2;
    Ok(RiemannHurwitz { census, differents_sum, tame_sum, expected, pass: differents_sum == expected })
}

/// Above this field size the centralizer in PGL(2,q) is computed algebraically.
const CENTRALIZER_SCAN_LIMIT: u128 = 31;

/// Elements of `g` commuting with `s`.
pub fn centralizer(g: &Subgroup, s: &Moebius) -> Result<Subgroup> {
    if !g.contains(s) {
        return Err(Error::NotInGroup);
    }
    if g.is_full_pgl() && g.ctx().cardinality() > CENTRALIZER_SCAN_LIMIT {
        return centralizer_in_pgl(s);
    }
    let els = g.elements().iter().filter(|t| t.compose(s).ok() == s.compose(t).ok()).cloned().collect();
    Ok(Subgroup { ctx: g.ctx().clone(), elements: els })
}

/// Centralizer of `s` in PGL(2,q) without enumerating the group.
///
/// `gSg^-1 = lambda S` forces `lambda = +-1`. For `lambda = 1` the solutions are
/// the invertible elements of `F_q[S]`; `lambda = -1` adds the invertible
/// solutions of `GS + SG = 0`, which exist only for trace-zero `S`.
pub fn centralizer_in_pgl(s: &Moebius) -> Result<Subgroup> {
    let ctx = s.ctx();
    if s.is_identity() {
        return full_pgl(ctx);
    }
    let els = ctx.elements()?;
    let [a, b, c, d] = s.entries();
    let mut out = Vec::new();
    for x in &els {
        for y in &els {
            if let Ok(t) = Moebius::new(&(x + &(y * &a)), &(y * &b), &(y * &c), &(x + &(y * &d))) {
                out.push(t);
            }
        }
    }
    if ctx.p() != 2 && s.trace().is_zero() {
        // Unknowns (g11, g12, g21, g22); rows are the entries of GS + SG.
        let z = ctx.zero();
        let rows = vec![
            vec![&a + &a, c.clone(), b.clone(), z.clone()],
            vec![b.clone(), &a + &d, z.clone(), b.clone()],
            vec![c.clone(), z.clone(), &a + &d, c.clone()],
            vec![z, c.clone(), b.clone(), &d + &d],
        ];
        let ker = linalg::nullspace(ctx, rows, 4);
        for v in linalg::span(ctx, &ker, 4) {
            if let Ok(t) = Moebius::new(&v[0], &v[1], &v[2], &v[3]) {
                out.push(t);
            }
        }
    }
    Ok(Subgroup::from_unsorted(ctx, out))
}

/// `{g s g^-1 : g in G}`, sorted.
pub fn conjugates(g: &Subgroup, s: &Moebius) -> Result<Vec<Moebius>> {
    if !g.contains(s) {
        return Err(Error::NotInGroup);
    }
    let set: BTreeSet<Moebius> = g.elements().iter().map(|t| t.compose(s).map(|ts| ts.compose(&t.inverse()))).collect::<Result<Result<_>>>()??;
    Ok(set.into_iter().collect())
}

/// Searches PGL(2,q) for `x` of order `l` and `y` of order `m` with `xy` of
/// order `n` generating a group of the given order. Elements are tried in
/// sorted order, so the result is deterministic.
pub fn find_triangle_subgroup(ctx: &FieldCtx, (l, m, n): (u64, u64, u64), order: usize) -> Result<Option<Subgroup>> {
    let pgl = full_pgl(ctx)?;
    let orders: Vec<u64> = pgl.elements().iter().map(Moebius::order).collect();
    let with_order = |k: u64| -> Vec<&Moebius> {
        pgl.elements().iter().zip(&orders).filter(|(_, &o)| o == k).map(|(s, _)| s).collect()
    };
    let xs = with_order(l);
    let ys = with_order(m);
    for x in &xs {
        for y in &ys {
            if x.compose(y)?.order() != n {
                continue;
            }
            let g = generate(ctx, &[(*x).clone(), (*y).clone()])?;
            if g.order() == order {
                return Ok(Some(g));
            }
        }
    }
    Ok(None)
}

/// Points of `P^1(F_q)` inside an extension, as a sorted list.
pub fn rational_points(base: &FieldCtx, ext: &FieldCtx) -> Result<Vec<ProjPoint>> {
    let mut pts: Vec<ProjPoint> =
        base.elements()?.iter().map(|x| ext.embed(x).map(ProjPoint::Finite)).collect::<Result<_>>()?;
    pts.push(ProjPoint::Infinity);
    pts.sort();
    Ok(pts)
}

/// Helper for tests and reports: the element `x -> w x` for `w` a field element.
pub fn scaling(w: &FieldElem) -> Result<Moebius> {
    let ctx = w.ctx();
    Moebius::new(w, &ctx.zero(), &ctx.zero(), &ctx.one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{field_create, prime_field};
    use crate::moebius::parse_moebius;

    #[test]
    fn pgl_orders() {
        for (p, m, n) in [(2, 1, 6), (3, 1, 24), (5, 1, 120), (2, 2, 60)] {
            let g = full_pgl(&field_create(p, m).unwrap()).unwrap();
            assert_eq!(g.order(), n);
            assert!(g.is_full_pgl());
        }
    }

    #[test]
    fn generated_groups() {
        let f7 = prime_field(7).unwrap();
        assert_eq!(generate(&f7, &[]).unwrap().order(), 1);
        let s = parse_moebius(&f7, "(3x-1)/(x+3)").unwrap();
        assert_eq!(cyclic(&s).unwrap().order(), 8);
        let f5 = prime_field(5).unwrap();
        let v4 = generate(&f5, &[parse_moebius(&f5, "-x").unwrap(), parse_moebius(&f5, "1/x").unwrap()]).unwrap();
        assert_eq!(v4.order(), 4);
        assert!(v4.elements().iter().all(|t| t.compose(t).unwrap().is_identity()));
    }

    #[test]
    fn pgl_orbits() {
        let f3 = prime_field(3).unwrap();
        let g = full_pgl(&f3).unwrap();
        let r1 = orbit_decomposition(&g, 1).unwrap();
        assert_eq!(r1.orbits.len(), 1);
        assert_eq!(r1.orbits[0].points.len(), 4);
        let r2 = orbit_decomposition(&g, 2).unwrap();
        let sizes: Vec<_> = r2.orbits.iter().map(|o| (o.points.len(), o.stabilizer.order())).collect();
        assert_eq!(sizes, vec![(4, 6), (6, 4)]);
    }

    #[test]
    fn cyclic_nonsplit_acts_regularly() {
        let f7 = prime_field(7).unwrap();
        let s = parse_moebius(&f7, "(3x-1)/(x+3)").unwrap().pow(2);
        let g = cyclic(&s).unwrap();
        let r = orbit_decomposition(&g, 1).unwrap();
        assert_eq!(r.orbits.len(), 2);
        assert!(r.orbits.iter().all(|o| o.regular));
        let census = nonregular_census(&g).unwrap();
        assert_eq!(census.len(), 2);
        assert!(census.iter().all(|c| c.orbit_size == 1));
    }

    #[test]
    fn translation_census() {
        let f5 = prime_field(5).unwrap();
        let g = cyclic(&parse_moebius(&f5, "x+1").unwrap()).unwrap();
        let census = nonregular_census(&g).unwrap();
        assert_eq!(census, vec![CensusEntry { orbit_size: 1, stabilizer_order: 5, representative: ProjPoint::Infinity }]);
        assert!(riemann_hurwitz_audit(&g).unwrap().pass);
    }

    #[test]
    fn trivial_audit() {
        let f5 = prime_field(5).unwrap();
        let a = riemann_hurwitz_audit(&Subgroup::trivial(&f5)).unwrap();
        assert_eq!((a.differents_sum, a.expected, a.pass), (0, 0, true));
    }

    #[test]
    fn differents() {
        assert_eq!(different_exponent(5, 2), 4);
        assert_eq!(different_exponent(12, 2), 14);
        assert_eq!(different_exponent(3, 3), 4);
    }

    #[test]
    fn centralizers() {
        for (p, m) in [(5, 1), (7, 1), (9, 1), (4, 1), (3, 2)] {
            let ctx = if p == 4 { field_create(2, 2).unwrap() } else if p == 9 { field_create(3, 2).unwrap() } else { field_create(p, m).unwrap() };
            let q = ctx.cardinality() as usize;
            let g = full_pgl(&ctx).unwrap();
            for s in g.elements().iter().step_by(7) {
                let c = centralizer(&g, s).unwrap();
                assert_eq!(c, centralizer_in_pgl(s).unwrap(), "{s}");
                if !s.is_identity() {
                    let n = c.order();
                    assert!(n % (q - 1) == 0 || n % q == 0 || n % (q + 1) == 0);
                }
                assert_eq!(conjugates(&g, s).unwrap().len() * c.order(), g.order());
            }
            assert_eq!(centralizer(&g, &Moebius::identity(&ctx)).unwrap(), g);
        }
    }

    #[test]
    fn centralizer_requires_membership() {
        let f7 = prime_field(7).unwrap();
        let g = cyclic(&parse_moebius(&f7, "x+1").unwrap()).unwrap();
        assert_eq!(centralizer(&g, &parse_moebius(&f7, "2x").unwrap()), Err(Error::NotInGroup));
    }
}
