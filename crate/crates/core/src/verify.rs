//! Replayable checks: the worked examples with known answers, and the
//! structural identities at a chosen `q`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::classes::{ClassKind, ClassTable, LambdaClass};
use crate::error::{Error, Result};
use crate::gf::{extension_of_degree, field_create, prime_field, FieldCtx};
use crate::grouporbit::{cyclic, find_triangle_subgroup, full_pgl, orbit_decomposition, riemann_hurwitz_audit};
use crate::invariants::{invariant_generator, orbit_polynomial, pgl_generator, RatFunc};
use crate::moebius::{parse_entries, parse_moebius, representative_scale, Moebius, ProjPoint};
use crate::structfactor::{
    all_cubics_product, factor_by_orbit, factor_by_orbit_in, factor_f_lambda_with, find_s_for_alpha, frobenius_companion,
    lambda_family_report, numerator_structure_check, FLambdaOutcome,
};
use crate::upoly::{factorize, is_irreducible, Poly};
use crate::classes::lang_solve;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub q: u128,
    pub pass: bool,
    pub detail: String,
}

fn run(name: &str, q: u128, f: impl FnOnce() -> Result<bool>) -> Check {
    let start = std::time::Instant::now();
    let outcome = f();
    log::debug!("{name} (q={q}): {:?}", start.elapsed());
    let (pass, detail) = match outcome {
        Ok(true) => (true, String::new()),
        Ok(false) => (false, "mismatch".into()),
        Err(e) => (false, e.to_string()),
    };
    Check { name: name.into(), q, pass, detail }
}

fn ints(ctx: &FieldCtx, c: &[i64]) -> Poly {
    Poly::from_ints(ctx, c)
}

fn rat(ctx: &FieldCtx, n: &[i64], d: &[i64]) -> Result<RatFunc> {
    RatFunc::new(ints(ctx, n), ints(ctx, d))
}

type CheckFn = fn() -> Result<bool>;

/// Worked examples with published answers. `only_q` filters by field size.
pub fn reference_examples(only_q: Option<u128>) -> Vec<Check> {
    let all: Vec<(&str, u128, CheckFn)> = vec![
        ("q19 companion polynomial", 19, q19_companion),
        ("q19 orbit polynomial", 19, q19_orbit_poly),
        ("q19 five quartic factors", 19, q19_quartics),
        ("q17 companion polynomial", 17, q17_companion),
        ("q17 orbit polynomial family", 17, q17_family),
        ("q17 six cubic factors", 17, q17_cubics),
        ("q7 invariant generator", 7, q7_generator),
        ("q7 lambda counts", 7, q7_lambda),
        ("q7 numerator structure", 7, q7_numerators),
        ("q7 order q+1 gives an irreducible companion", 7, q7_irreducible),
        ("q3 PGL fibres at phi = 1, -1, 0", 3, q3_fibres),
        ("q3 product of all cubics", 3, q3_cubics),
        ("q3 class count q+2", 3, || Ok(ClassTable::new(&prime_field(3)?)?.classes.len() == 5)),
        ("q3 involution value is ambiguous", 3, q3_ambiguous),
        ("q4 class count q+1", 4, || Ok(ClassTable::new(&field_create(2, 2)?)?.classes.len() == 5)),
        ("q4 point-class correspondence", 4, q4_correspondence),
        ("q4 involution fibre", 4, q4_involution_fibre),
        ("q5 quadratic points give involutions", 5, q5_involutions),
        ("q5 cubic points give order 3", 5, q5_order_three),
        ("q4 A5 Riemann-Hurwitz", 4, q4_a5),
        ("q11 A5 Riemann-Hurwitz", 11, q11_a5),
    ];
    all.into_iter().filter(|(_, q, _)| only_q.is_none_or(|o| o == *q)).map(|(n, q, f)| run(n, q, f)).collect()
}

fn q19_s() -> Result<Moebius> {
    parse_moebius(&prime_field(19)?, "(-x-1)/(x-1)")
}

fn q19_companion() -> Result<bool> {
    let f = prime_field(19)?;
    Ok(frobenius_companion(&q19_s()?).monic() == ints(&f, &{
        let mut v = vec![0; 21];
        v[0] = 1;
        v[1] = 1;
        v[19] = -1;
        v[20] = 1;
        v
    }))
}

fn q19_orbit_poly() -> Result<bool> {
    let f = prime_field(19)?;
    let op = orbit_polynomial(&cyclic(&q19_s()?)?)?;
    let t = rat(&f, &[1, 0, -6, 0, 1], &[0, -1, 0, 1])?;
    Ok(op.coeffs[4] == RatFunc::constant(&f.one())
        && op.coeffs[3] == t.scale(&f.int(-1))?
        && op.coeffs[2] == RatFunc::constant(&f.int(-6))
        && op.coeffs[1] == t
        && op.coeffs[0] == RatFunc::constant(&f.one()))
}

fn q19_quartics() -> Result<bool> {
    let f = prime_field(19)?;
    let sf = factor_by_orbit(&q19_s()?)?;
    let got: BTreeSet<Poly> = sf.factors.iter().map(|x| x.poly.clone()).collect();
    let want: BTreeSet<Poly> = [[1, 13, -6, 6, 1], [1, 10, -6, 9, 1], [1, 7, -6, 12, 1], [1, 5, -6, 14, 1], [1, 4, -6, 15, 1]]
        .iter()
        .map(|c| ints(&f, c))
        .collect();
    Ok(sf.factors.len() == 5 && got == want && sf.agrees_with_oracle(0)?)
}

const Q17_S: &str = "(14x+13)/(6x+2)";

fn q17_companion() -> Result<bool> {
    let f = prime_field(17)?;
    let mu = representative_scale(&parse_entries(&f, Q17_S)?)?;
    let p = frobenius_companion(&parse_moebius(&f, Q17_S)?).scale(&mu)?;
    let mut v = vec![0; 19];
    v[0] = -13;
    v[1] = -14;
    v[17] = 2;
    v[18] = 6;
    Ok(p == ints(&f, &v))
}

fn q17_family() -> Result<bool> {
    let f = prime_field(17)?;
    let op = orbit_polynomial(&cyclic(&parse_moebius(&f, Q17_S)?)?)?;
    let den = [3, 15, 1];
    let coeffs_ok = op.coeffs[2] == rat(&f, &[10, 2, 0, 16], &den)?
        && op.coeffs[1] == rat(&f, &[8, 0, 15, 2], &den)?
        && op.coeffs[0] == rat(&f, &[0, 9, 7, 14], &den)?;
    let rel = op.family_relative_to(1)?;
    let want = [(7, 4), (1, 0), (8, -1), (0, 1)].map(|(a, b)| (f.int(a), f.int(b)));
    Ok(coeffs_ok && rel == want)
}

fn q17_cubics() -> Result<bool> {
    let f = prime_field(17)?;
    let mu = representative_scale(&parse_entries(&f, Q17_S)?)?;
    let sf = factor_by_orbit(&parse_moebius(&f, Q17_S)?)?.rescaled(&mu)?;
    let got: BTreeSet<Poly> = sf.factors.iter().map(|x| x.poly.clone()).collect();
    let want: BTreeSet<Poly> =
        [[7, 15, 0, 1], [16, 9, 3, 1], [2, 7, 4, 1], [8, 3, 6, 1], [9, 8, 12, 1], [1, 2, 15, 1]].iter().map(|c| ints(&f, c)).collect();
    Ok(sf.unit == f.int(6) && got == want && sf.agrees_with_oracle(0)?)
}

fn q7_s() -> Result<Moebius> {
    parse_moebius(&prime_field(7)?, "(3x-1)/(x+3)")
}

fn q7_generator() -> Result<bool> {
    let f = prime_field(7)?;
    let phi = invariant_generator(&cyclic(&q7_s()?)?)?;
    Ok(phi.num() == &ints(&f, &[1, 0, 0, 0, 0, 0, 0, 0, 1]) && phi.den() == &ints(&f, &[0, -1, 0, 0, 0, 0, 0, 1]))
}

fn q7_lambda() -> Result<bool> {
    let rep = lambda_family_report(&q7_s()?)?;
    let counts: BTreeMap<usize, usize> = rep.counts.iter().map(|(r, (n, _))| (*r, *n)).collect();
    Ok(rep.pass && counts == BTreeMap::from([(2, 1), (4, 2), (8, 4)]))
}

fn q7_numerators() -> Result<bool> {
    Ok(numerator_structure_check(&q7_s()?)?.pass)
}

fn q7_irreducible() -> Result<bool> {
    let s = q7_s()?;
    Ok(is_irreducible(&frobenius_companion(&s))? && factor_by_orbit(&s)?.factors.len() == 1)
}

/// Fibres of `-f/g` for the degree-24 invariant of PGL(2,3). Roots of `f + g`
/// have value 1 and give cubics; roots of `f - g` have value -1 and are the
/// points of `F_9 \ F_3`; `f` gives quartics.
fn q3_fibres() -> Result<bool> {
    let f3 = prime_field(3)?;
    let mut fv = vec![0; 25];
    for i in [0, 2, 4, 8, 10, 14, 16, 20, 22, 24] {
        fv[i] = 1;
    }
    let mut gv = vec![0; 19];
    for i in [6, 12, 18] {
        gv[i] = 1;
    }
    let (f, g) = (ints(&f3, &fv), ints(&f3, &gv));
    let ours = pgl_generator(&f3)?;
    if ours != RatFunc::new(f.try_sub(&g)?, g.clone())? {
        return Ok(false);
    }
    let phi = RatFunc::new(f.scale(&f3.int(-1))?, g)?;
    if !crate::invariants::pgl_generator_exhaustive_check(&phi)? {
        return Ok(false);
    }
    let grp = full_pgl(&f3)?;
    let fibre = |l: i64| factor_f_lambda_with(&grp, &phi, &ProjPoint::Finite(f3.int(l)));
    let a = matches!(fibre(1)?, FLambdaOutcome::Regular { factors, r: 3, .. } if factors.len() == 8);
    let b = matches!(fibre(-1)?, FLambdaOutcome::NonRegular { factors, .. }
        if factors.len() == 3 && factors.iter().all(|(h, m)| h.degree() == Some(2) && *m == 4));
    let c = matches!(fibre(0)?, FLambdaOutcome::Regular { factors, r: 4, .. } if factors.len() == 6);
    Ok(a && b && c)
}

fn q3_cubics() -> Result<bool> {
    let ac = all_cubics_product(&prime_field(3)?)?;
    let fac = factorize(&ac.poly, 0)?;
    Ok(ac.count == 8 && fac.factors.len() == 8 && fac.factors.iter().all(|(h, m)| h.degree() == Some(3) && *m == 1))
}

fn q3_ambiguous() -> Result<bool> {
    let t = ClassTable::new(&prime_field(3)?)?;
    Ok(matches!(t.class_of_lambda(&ProjPoint::Finite(t.mu.clone()))?, LambdaClass::AmbiguousInvolutions(..)))
}

fn q4_correspondence() -> Result<bool> {
    let f4 = field_create(2, 2)?;
    let t = ClassTable::new(&f4)?;
    let mut reps = BTreeSet::new();
    for pt in crate::moebius::projective_line(&f4)? {
        let c = match t.class_of_lambda(&pt)? {
            LambdaClass::Class(c) => c,
            LambdaClass::AmbiguousInvolutions(..) => return Ok(false),
        };
        if let ProjPoint::Finite(l) = &pt {
            if t.class_of_fibre(l)?.representative != c.representative {
                return Ok(false);
            }
        }
        reps.insert(c.representative);
    }
    Ok(reps.len() == 5 && reps.len() == t.classes.len())
}

fn q4_involution_fibre() -> Result<bool> {
    let t = ClassTable::new(&field_create(2, 2)?)?;
    let inv = match t.class_of_lambda(&ProjPoint::Finite(t.mu.clone()))? {
        LambdaClass::Class(c) => c.kind == ClassKind::Unipotent && c.is_involution(),
        LambdaClass::AmbiguousInvolutions(..) => false,
    };
    let fibre = factor_f_lambda_with(&t.group, &t.phi, &ProjPoint::Finite(t.mu.clone()))?;
    let shape = matches!(&fibre, FLambdaOutcome::NonRegular { factors, .. }
        if factors.len() == 6 && factors.iter().all(|(h, m)| h.degree() == Some(2) && *m == 5));
    Ok(inv && shape && t.check_factor_pattern(&t.mu)?)
}

fn points_give_order(q: u64, k: usize, order: u64) -> Result<bool> {
    let f = prime_field(q)?;
    let g = full_pgl(&f)?;
    let phi = pgl_generator(&f)?;
    let ext = extension_of_degree(&f, k)?;
    for z in ext.elements()? {
        if z.in_subfield(&f) {
            continue;
        }
        if find_s_for_alpha(&g, &z, &phi)?.order() != order {
            return Ok(false);
        }
    }
    Ok(true)
}

fn q5_involutions() -> Result<bool> {
    points_give_order(5, 2, 2)
}

fn q5_order_three() -> Result<bool> {
    points_give_order(5, 3, 3)
}

fn a5_audit(ctx: &FieldCtx, sizes: &[usize]) -> Result<bool> {
    let g = find_triangle_subgroup(ctx, (2, 3, 5), 60)?.ok_or_else(|| Error::InvariantViolation("no A5 found".into()))?;
    let rh = riemann_hurwitz_audit(&g)?;
    let got: Vec<usize> = rh.census.iter().map(|c| c.orbit_size).collect();
    Ok(rh.pass && rh.differents_sum == 118 && got == sizes)
}

fn q4_a5() -> Result<bool> {
    a5_audit(&field_create(2, 2)?, &[5, 12])
}

fn q11_a5() -> Result<bool> {
    a5_audit(&prime_field(11)?, &[12, 20, 30])
}

/// Structural identities of PGL(2,q) and its cyclic subgroups at one field.
pub fn lemmas(ctx: &FieldCtx) -> Result<Vec<Check>> {
    let q = ctx.cardinality();
    let g = full_pgl(ctx)?;
    let table = ClassTable::new(ctx)?;
    let mut out = Vec::new();
    out.push(run("class count", q, || {
        let want = if ctx.p() == 2 { q + 1 } else { q + 2 };
        Ok(table.classes.len() as u128 == want && table.classes.iter().map(|c| c.size).sum::<usize>() == g.order())
    }));
    out.push(run("centralizer orders", q, || {
        let q = q as usize;
        Ok(table.classes.iter().filter(|c| c.kind != ClassKind::Identity).all(|c| {
            let n = c.centralizer_order;
            n % (q - 1) == 0 || n % q == 0 || n % (q + 1) == 0
        }))
    }));
    out.push(run("orbit-stabilizer on P^1(F_q^2)", q, || {
        let rep = orbit_decomposition(&g, 2)?;
        Ok(rep.orbits.iter().all(|o| o.points.len() * o.stabilizer.order() == g.order()))
    }));
    out.push(run("Riemann-Hurwitz for PGL(2,q)", q, || Ok(riemann_hurwitz_audit(&g)?.pass)));
    out.push(run("phi rational on quadratic and cubic points", q, || {
        for k in [2, 3] {
            let ext = extension_of_degree(ctx, k)?;
            for z in ext.elements()? {
                if let ProjPoint::Finite(v) = table.phi.eval(&ProjPoint::Finite(z))? {
                    if !v.in_subfield(ctx) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }));
    out.push(run("factor patterns for every lambda", q, || {
        for l in ctx.elements()? {
            if !table.check_factor_pattern(&l)? {
                return Ok(false);
            }
        }
        Ok(true)
    }));
    let top = g.elements().iter().find(|s| s.order() as u128 == q + 1).cloned();
    out.push(run("lambda counting law", q, || match &top {
        Some(s) => Ok(lambda_family_report(s)?.pass),
        None => Ok(false),
    }));
    out.push(run("numerator structure", q, || match &top {
        Some(s) => Ok(numerator_structure_check(s)?.pass),
        None => Ok(false),
    }));
    out.push(run("structured factorization matches the oracle", q, || {
        for s in g.elements() {
            let r = s.order() as u128;
            if r > 2 && (q + 1) % r == 0 && !factor_by_orbit_in(s, Some(&g))?.agrees_with_oracle(0)? {
                return Ok(false);
            }
        }
        Ok(true)
    }));
    out.push(run("Lang solutions for class representatives", q, || {
        for c in &table.classes {
            let sol = lang_solve(&c.representative)?;
            if sol.solutions.len() as u128 != q + 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }));
    Ok(out)
}
