//! Conjugacy classes of PGL(2,q), the correspondence between points of
//! `P^1(F_q)` and classes through the values of the invariant `phi`, and a
//! solver for Lang's equation `s = sigma(t)^-1 t`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;

use crate::error::{violation, Error, Result};
use crate::gf::{extension_of_degree, FieldCtx, FieldElem};
use crate::grouporbit::{conjugates, full_pgl, Subgroup};
use crate::invariants::{pgl_generator, RatFunc};
use crate::limits;
use crate::linalg;
use crate::moebius::{projective_line, ElementClass, Moebius, ProjPoint};
use crate::structfactor::{f_lambda, factor_f_lambda_with, find_s_for_alpha, frobenius_companion, root_of, FLambdaOutcome};
use crate::upoly::{factorize, roots_in};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "order")]
pub enum ClassKind {
    Identity,
    Split(u64),
    Unipotent,
    NonSplit(u64),
    SplitInvolution,
    NonSplitInvolution,
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKind::Identity => write!(f, "identity"),
            ClassKind::Split(r) => write!(f, "split({r})"),
            ClassKind::Unipotent => write!(f, "unipotent"),
            ClassKind::NonSplit(r) => write!(f, "nonsplit({r})"),
            ClassKind::SplitInvolution => write!(f, "split-involution"),
            ClassKind::NonSplitInvolution => write!(f, "nonsplit-involution"),
        }
    }
}

/// Kind of a single element. Involutions in odd characteristic get their
/// own kinds; in characteristic 2 they are unipotent.
pub fn kind_of(s: &Moebius) -> ClassKind {
    let odd = s.ctx().p() != 2;
    match s.classify() {
        ElementClass::Identity => ClassKind::Identity,
        ElementClass::Unipotent => ClassKind::Unipotent,
        ElementClass::Split if odd && s.order() == 2 => ClassKind::SplitInvolution,
        ElementClass::NonSplit if odd && s.order() == 2 => ClassKind::NonSplitInvolution,
        ElementClass::Split => ClassKind::Split(s.order()),
        ElementClass::NonSplit => ClassKind::NonSplit(s.order()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassLabel {
    pub kind: ClassKind,
    /// Least element of the class.
    pub representative: Moebius,
    pub size: usize,
    pub centralizer_order: usize,
}

impl ClassLabel {
    pub fn is_involution(&self) -> bool {
        self.representative.order() == 2
    }
}

/// Brute-force partition of PGL(2,q), ordered by least representative.
pub fn conjugacy_classes(ctx: &FieldCtx) -> Result<Vec<ClassLabel>> {
    classes_of(&full_pgl(ctx)?)
}

fn classes_of(g: &Subgroup) -> Result<Vec<ClassLabel>> {
    let mut seen: HashSet<Moebius> = HashSet::new();
    let mut out = Vec::new();
    for s in g.elements() {
        if seen.contains(s) {
            continue;
        }
        let class = conjugates(g, s)?;
        let kind = kind_of(s);
        if class.iter().any(|t| kind_of(t) != kind) {
            return violation(format!("class of {s} mixes element kinds"));
        }
        out.push(ClassLabel { kind, representative: s.clone(), size: class.len(), centralizer_order: g.order() / class.len() });
        seen.extend(class);
    }
    Ok(out)
}

/// Result of looking up the class attached to a value of `phi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LambdaClass {
    Class(ClassLabel),
    /// `lambda = mu` for odd `q`: both involution classes occur.
    AmbiguousInvolutions(ClassLabel, ClassLabel),
}

/// Everything needed to move between values of `phi` and classes for one `q`.
#[derive(Clone, Debug)]
pub struct ClassTable {
    pub ctx: FieldCtx,
    pub group: Subgroup,
    pub phi: RatFunc,
    /// `phi(gamma)` for the least `gamma` in `F_{q^2} \ F_q`.
    pub mu: FieldElem,
    pub classes: Vec<ClassLabel>,
    /// `phi` at a point `alpha` with `s(alpha) = alpha^q`, `s` the class
    /// representative; `None` for the identity.
    pub lambdas: Vec<Option<FieldElem>>,
}

impl ClassTable {
    pub fn new(ctx: &FieldCtx) -> Result<ClassTable> {
        let group = full_pgl(ctx)?;
        let classes = classes_of(&group)?;
        let phi = pgl_generator(ctx)?;
        let ext2 = extension_of_degree(ctx, 2)?;
        let gamma = ext2.from_index(ctx.cardinality())?;
        let mu = match phi.eval(&ProjPoint::Finite(gamma))? {
            ProjPoint::Finite(v) => v.descend(ctx).ok_or_else(|| Error::InvariantViolation("phi(gamma) is not rational".into()))?,
            ProjPoint::Infinity => return violation("quadratic point is a pole of phi"),
        };
        let lambdas = classes.iter().map(|c| lambda_of_class(&phi, &c.representative)).collect::<Result<_>>()?;
        Ok(ClassTable { ctx: ctx.clone(), group, phi, mu, classes, lambdas })
    }

    pub fn class_of(&self, s: &Moebius) -> Result<&ClassLabel> {
        if !self.group.contains(s) {
            return Err(Error::NotInGroup);
        }
        // Classes are disjoint, so membership of the representative's orbit decides.
        for c in &self.classes {
            if kind_of(s) == c.kind && conjugates(&self.group, &c.representative)?.binary_search(s).is_ok() {
                return Ok(c);
            }
        }
        violation(format!("{s} lies in no class"))
    }

    fn involution_classes(&self) -> Vec<&ClassLabel> {
        self.classes.iter().filter(|c| c.is_involution()).collect()
    }

    pub fn class_of_lambda(&self, lambda: &ProjPoint) -> Result<LambdaClass> {
        let l = match lambda {
            ProjPoint::Infinity => {
                let id = self.classes.iter().find(|c| c.kind == ClassKind::Identity).expect("identity class");
                return Ok(LambdaClass::Class(id.clone()));
            }
            ProjPoint::Finite(l) => l,
        };
        if l == &self.mu {
            let inv = self.involution_classes();
            return match inv.as_slice() {
                [one] => Ok(LambdaClass::Class((*one).clone())),
                [a, b] => Ok(LambdaClass::AmbiguousInvolutions((*a).clone(), (*b).clone())),
                _ => violation("unexpected number of involution classes"),
            };
        }
        let hits: Vec<&ClassLabel> =
            self.classes.iter().zip(&self.lambdas).filter(|(_, v)| v.as_ref() == Some(l)).map(|(c, _)| c).collect();
        match hits.as_slice() {
            [one] => Ok(LambdaClass::Class((*one).clone())),
            _ => violation(format!("{} classes take the value {l}", hits.len())),
        }
    }

    /// `class_of_lambda` computed from the fibre: factor `f - lambda*g`, take
    /// a root `alpha` and classify the `s` with `s(alpha) = alpha^q`.
    pub fn class_of_fibre(&self, lambda: &FieldElem) -> Result<&ClassLabel> {
        let f = f_lambda(&self.phi, &ProjPoint::Finite(lambda.clone()))?;
        let fac = factorize(&f, 0)?;
        let alpha = root_of(&fac.factors[0].0)?;
        let s = find_s_for_alpha(&self.group, &alpha, &self.phi)?;
        self.class_of(&s)
    }

    /// The predicted shape of `f - lambda*g`.
    pub fn factor_pattern(&self, lambda: &FieldElem) -> Result<FactorPattern> {
        let q = self.ctx.cardinality() as usize;
        if lambda == &self.mu {
            return Ok(FactorPattern::InvolutionFibre { degree: 2, count: (q * q - q) / 2, multiplicity: q + 1 });
        }
        match self.class_of_lambda(&ProjPoint::Finite(lambda.clone()))? {
            LambdaClass::Class(c) => {
                let r = c.representative.order() as usize;
                Ok(FactorPattern::Regular { degree: r, count: self.group.order() / r })
            }
            LambdaClass::AmbiguousInvolutions(..) => violation("ambiguous class away from mu"),
        }
    }

    /// Compares the predicted pattern with the generic factorizer.
    pub fn check_factor_pattern(&self, lambda: &FieldElem) -> Result<bool> {
        let pattern = self.factor_pattern(lambda)?;
        let got = factor_f_lambda_with(&self.group, &self.phi, &ProjPoint::Finite(lambda.clone()))?;
        Ok(match (pattern, got) {
            (FactorPattern::Regular { degree, count }, FLambdaOutcome::Regular { factors, r, .. }) => {
                r == degree && factors.len() == count
            }
            (FactorPattern::InvolutionFibre { degree, count, multiplicity }, FLambdaOutcome::NonRegular { factors, .. }) => {
                factors.len() == count && factors.iter().all(|(h, m)| h.degree() == Some(degree) && *m == multiplicity)
            }
            _ => false,
        })
    }
}

/// `phi(alpha)` for a root `alpha` of the Frobenius companion of `s` outside `F_q`.
fn lambda_of_class(phi: &RatFunc, s: &Moebius) -> Result<Option<FieldElem>> {
    let ctx = s.ctx();
    if s.is_identity() {
        return Ok(None);
    }
    let fac = factorize(&frobenius_companion(s), 0)?;
    let h = fac.factors.iter().map(|(h, _)| h).find(|h| h.degree().unwrap_or(0) > 1);
    let Some(h) = h else {
        return violation(format!("Frobenius companion of {s} splits over F_q"));
    };
    match phi.eval(&ProjPoint::Finite(root_of(h)?))? {
        ProjPoint::Finite(v) => v.descend(ctx).map(Some).ok_or_else(|| Error::InvariantViolation("phi value is not rational".into())),
        ProjPoint::Infinity => violation("non-rational point is a pole of phi"),
    }
}

/// `class_of_lambda` for a one-off query.
pub fn class_of_lambda(ctx: &FieldCtx, lambda: &ProjPoint) -> Result<LambdaClass> {
    ClassTable::new(ctx)?.class_of_lambda(lambda)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FactorPattern {
    /// `count` distinct irreducibles of degree `degree`.
    Regular { degree: usize, count: usize },
    /// `count` distinct irreducibles of degree `degree`, each `multiplicity` times.
    InvolutionFibre { degree: usize, count: usize, multiplicity: usize },
}

pub fn factor_pattern_of_class(ctx: &FieldCtx, lambda: &FieldElem) -> Result<FactorPattern> {
    ClassTable::new(ctx)?.factor_pattern(lambda)
}

/// A solution of `s = sigma(t)^-1 t` with `t` over `F_{q^r}`.
#[derive(Clone, Debug)]
pub struct LangSolution {
    pub s: Moebius,
    pub t: Moebius,
    /// `{z : s(z) = z^q}` in `P^1(F_{q^r})`, sorted.
    pub solutions: Vec<ProjPoint>,
    pub finite_count: usize,
}

/// Solves Lang's equation for `s` and verifies that the solutions of
/// `s(z) = z^q` are exactly `t^-1(P^1(F_q))`.
pub fn lang_solve(s: &Moebius) -> Result<LangSolution> {
    let ctx = s.ctx();
    let q = ctx.cardinality();
    let r = s.order() as usize;
    if r == 1 {
        let solutions = projective_line(ctx)?;
        let finite_count = solutions.len() - 1;
        return Ok(LangSolution { s: s.clone(), t: s.clone(), solutions, finite_count });
    }
    let ext = extension_of_degree(ctx, r)?;
    let kappa = scalar_of_power(s, r)?;
    let target = kappa.inv()?;
    // Rescaling T moves nu by a norm-one element, so any nu of norm
    // kappa^-1 works. Take a power of a primitive element.
    let gamma = ext.primitive_element();
    let norm_gamma = gamma.pow((ext.cardinality() - 1) / (q - 1)).descend(ctx);
    let exp = norm_gamma.and_then(|n| (0..q - 1).find(|&e| n.pow(e) == target));
    let t = match exp {
        Some(e) => invertible_solution(s, &gamma.pow(e), &ext)?,
        None => None,
    };
    let t = t.ok_or_else(|| Error::InvariantViolation(format!("no solution of Lang's equation for {s}")))?;
    let se = s.embed(&ext)?;
    if t.frobenius_over(ctx, 1)?.inverse().compose(&t)? != se {
        return violation("sigma(t)^-1 t differs from s");
    }
    let ps = frobenius_companion(s);
    let mut solutions: Vec<ProjPoint> = roots_in(&ps, &ext)?.into_iter().map(ProjPoint::Finite).collect();
    let finite_count = solutions.len();
    if s.c().is_zero() {
        solutions.push(ProjPoint::Infinity);
    }
    solutions.sort();
    let tinv = t.inverse();
    let image: BTreeSet<ProjPoint> = projective_line(ctx)?
        .iter()
        .map(|z| z.embed(&ext).and_then(|z| tinv.apply(&z)))
        .collect::<Result<_>>()?;
    if image.into_iter().collect::<Vec<_>>() != solutions {
        return violation("t^-1(P^1(F_q)) differs from the solution set");
    }
    if finite_count as u128 != q && finite_count as u128 != q + 1 {
        return violation(format!("{finite_count} finite solutions"));
    }
    Ok(LangSolution { s: s.clone(), t, solutions, finite_count })
}

/// `kappa` with `S^r = kappa * I` for the normalized matrix `S` of `s`.
fn scalar_of_power(s: &Moebius, r: usize) -> Result<FieldElem> {
    let [a, b, c, d] = s.entries();
    let mut m = [a.clone(), b.clone(), c.clone(), d.clone()];
    for _ in 1..r {
        m = [&(&m[0] * &a) + &(&m[1] * &c), &(&m[0] * &b) + &(&m[1] * &d), &(&m[2] * &a) + &(&m[3] * &c), &(&m[2] * &b) + &(&m[3] * &d)];
    }
    if !m[1].is_zero() || !m[2].is_zero() || m[0] != m[3] {
        return violation("S^r is not scalar");
    }
    Ok(m[0].clone())
}

/// An invertible `T` with `T = nu * sigma(T) * S`, found by solving the
/// `F_q`-linear system in the `4r` coordinates of `T` and scanning its kernel.
fn invertible_solution(s: &Moebius, nu: &FieldElem, ext: &FieldCtx) -> Result<Option<Moebius>> {
    let ctx = s.ctx();
    let r = ext.degree();
    let sm = s.embed(ext)?.entries();
    let z = ext.generator();
    let basis: Vec<FieldElem> = (0..r).map(|j| z.pow(j as u128)).collect();
    let coords = |x: &FieldElem| -> Vec<FieldElem> {
        ext.chunks(x.raw()).into_iter().map(|c| FieldElem::from_raw(ctx.clone(), c)).collect()
    };
    let map = |t: &[FieldElem; 4]| -> [FieldElem; 4] {
        let st = t.clone().map(|x| x.frobenius(1));
        let prod = [
            &(&st[0] * &sm[0]) + &(&st[1] * &sm[2]),
            &(&st[0] * &sm[1]) + &(&st[1] * &sm[3]),
            &(&st[2] * &sm[0]) + &(&st[3] * &sm[2]),
            &(&st[2] * &sm[1]) + &(&st[3] * &sm[3]),
        ];
        std::array::from_fn(|i| &t[i] - &(nu * &prod[i]))
    };
    let n = 4 * r;
    let mut cols = Vec::with_capacity(n);
    for i in 0..4 {
        for b in &basis {
            let mut t: [FieldElem; 4] = std::array::from_fn(|_| ext.zero());
            t[i] = b.clone();
            cols.push(map(&t).iter().flat_map(coords).collect::<Vec<_>>());
        }
    }
    let rows: Vec<Vec<FieldElem>> = (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let kernel = linalg::nullspace(ctx, rows, n);
    let q = ctx.cardinality();
    let total = q.checked_pow(kernel.len() as u32).unwrap_or(u128::MAX);
    limits::check_enumeration("Lang kernel", total)?;
    let els = ctx.elements()?;
    for idx in 1..total {
        let mut v = vec![ctx.zero(); n];
        let mut rest = idx;
        for k in &kernel {
            let c = &els[(rest % q) as usize];
            rest /= q;
            if !c.is_zero() {
                for (x, y) in v.iter_mut().zip(k) {
                    *x = &*x + &(c * y);
                }
            }
        }
        let entries: Vec<FieldElem> = (0..4)
            .map(|i| (0..r).fold(ext.zero(), |acc, j| &acc + &(&basis[j] * &ext.embed(&v[i * r + j]).expect("subfield"))))
            .collect();
        if let Ok(t) = Moebius::new(&entries[0], &entries[1], &entries[2], &entries[3]) {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{field_create, prime_field};

    #[test]
    fn class_counts_small() {
        for (p, m, n) in [(2, 1, 3), (3, 1, 5), (2, 2, 5), (5, 1, 7)] {
            let ctx = field_create(p, m).unwrap();
            let cl = conjugacy_classes(&ctx).unwrap();
            assert_eq!(cl.len(), n, "q = {}", ctx.cardinality());
            let q = ctx.cardinality() as usize;
            assert_eq!(cl.iter().map(|c| c.size).sum::<usize>(), q * q * q - q);
        }
    }

    #[test]
    fn involution_classes_by_parity() {
        let f3 = prime_field(3).unwrap();
        let kinds: BTreeSet<ClassKind> = conjugacy_classes(&f3).unwrap().iter().map(|c| c.kind).collect();
        assert!(kinds.contains(&ClassKind::SplitInvolution) && kinds.contains(&ClassKind::NonSplitInvolution));
        let f4 = field_create(2, 2).unwrap();
        let cl = conjugacy_classes(&f4).unwrap();
        assert_eq!(cl.iter().filter(|c| c.is_involution()).count(), 1);
    }

    #[test]
    fn lambda_correspondence_q4() {
        let f4 = field_create(2, 2).unwrap();
        let table = ClassTable::new(&f4).unwrap();
        let mut hit = BTreeSet::new();
        for pt in projective_line(&f4).unwrap() {
            match table.class_of_lambda(&pt).unwrap() {
                LambdaClass::Class(c) => assert!(hit.insert(c.representative)),
                LambdaClass::AmbiguousInvolutions(..) => panic!("q even"),
            }
        }
        assert_eq!(hit.len(), table.classes.len());
    }

    #[test]
    fn lambda_ambiguous_q3() {
        let f3 = prime_field(3).unwrap();
        let table = ClassTable::new(&f3).unwrap();
        assert!(matches!(table.class_of_lambda(&ProjPoint::Finite(table.mu.clone())).unwrap(), LambdaClass::AmbiguousInvolutions(..)));
        let id = table.classes.iter().find(|c| c.kind == ClassKind::Identity).unwrap().clone();
        assert_eq!(table.class_of_lambda(&ProjPoint::Infinity).unwrap(), LambdaClass::Class(id));
    }

    #[test]
    fn patterns_q2() {
        let f2 = prime_field(2).unwrap();
        let table = ClassTable::new(&f2).unwrap();
        for l in f2.elements().unwrap() {
            assert!(table.check_factor_pattern(&l).unwrap());
            if l != table.mu {
                assert_eq!(table.factor_pattern(&l).unwrap(), FactorPattern::Regular { degree: 3, count: 2 });
            }
        }
    }

    #[test]
    fn lang_small() {
        for (p, m) in [(2, 1), (3, 1)] {
            let ctx = field_create(p, m).unwrap();
            for s in full_pgl(&ctx).unwrap().elements() {
                let sol = lang_solve(s).unwrap();
                assert_eq!(sol.solutions.len() as u128, ctx.cardinality() + 1);
            }
        }
    }
}
