//! General factorization over finite fields: squarefree decomposition,
//! distinct-degree splitting and Cantor–Zassenhaus equal-degree splitting.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Poly;
use crate::error::{Error, Result};
use crate::gf::{Fe, FieldCtx, FieldElem};

/// `unit * prod factor^mult`, factors monic irreducible and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElem,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        let mut acc = Poly::constant(&self.unit);
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m as u64);
        }
        acc
    }

    /// Factor degrees with multiplicity, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self
            .factors
            .iter()
            .flat_map(|(f, m)| std::iter::repeat(f.degree().unwrap_or(0)).take(*m))
            .collect();
        d.sort_unstable();
        d
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, m)| *m == 1)
    }
}

/// Rabin's test: `f | T^(q^n) - T` and `gcd(f, T^(q^(n/l)) - T) = 1` for
/// every prime `l | n`.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let n = match f.degree() {
        None | Some(0) => return Err(Error::ConstantInput),
        Some(n) => n,
    };
    if n == 1 {
        return Ok(true);
    }
    let f = f.monic();
    let q = f.ctx().cardinality();
    let x = Poly::x(f.ctx());
    let mut powers = Vec::with_capacity(n + 1);
    powers.push(x.clone());
    let mut h = x.clone();
    for _ in 0..n {
        h = h.powmod(q, &f)?;
        powers.push(h.clone());
    }
    if powers[n] != x.rem(&f)? {
        return Ok(false);
    }
    for l in prime_divisors(n) {
        if !(&powers[n / l] - &x).gcd(&f).is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `p`-th root of a polynomial whose derivative vanishes.
fn pth_root(f: &Poly) -> Poly {
    let ctx = f.ctx();
    let p = ctx.p() as usize;
    let e = ctx.cardinality() / ctx.p() as u128;
    let v: Vec<Fe> = f.raw().iter().step_by(p).map(|c| ctx.pow_fe(c, e)).collect();
    Poly::from_raw(ctx.clone(), v)
}

/// Squarefree decomposition of a monic polynomial: pairs `(g_i, i)` with the
/// `g_i` squarefree, pairwise coprime and `f = prod g_i^i`.
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, usize)> {
    let f = f.monic();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c).expect("gcd divides");
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y).expect("gcd divides");
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w).expect("gcd divides");
        i += 1;
    }
    if !c.is_one() {
        let p = f.ctx().p() as usize;
        for (g, m) in squarefree_decomposition(&pth_root(&c)) {
            out.push((g, m * p));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of irreducibles of equal degree.
fn distinct_degree(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let q = f.ctx().cardinality();
    let x = Poly::x(f.ctx());
    let mut out = Vec::new();
    let mut f = f.clone();
    let mut h = x.rem(&f)?;
    let mut i = 0;
    while f.degree().unwrap_or(0) >= 2 * (i + 1) {
        i += 1;
        h = h.powmod(q, &f)?;
        let g = (&h - &x).gcd(&f);
        if !g.is_one() {
            f = f.div_exact(&g)?;
            h = h.rem(&f)?;
            out.push((g, i));
        }
    }
    if let Some(d) = f.degree().filter(|&d| d > 0) {
        out.push((f, d));
    }
    Ok(out)
}

fn random_poly(ctx: &FieldCtx, below: usize, rng: &mut ChaCha8Rng) -> Poly {
    let p = ctx.p() as u32;
    let w = ctx.width();
    let v = (0..below)
        .map(|_| {
            let mut e = ctx.zero_fe();
            for i in 0..w {
                e.0[i] = rng.gen_range(0..p);
            }
            e
        })
        .collect();
    Poly::from_raw(ctx.clone(), v)
}

/// A candidate splitting polynomial for equal-degree factorization.
fn splitter(a: &Poly, f: &Poly, d: usize) -> Result<Poly> {
    let ctx = f.ctx();
    let q = ctx.cardinality();
    if ctx.p() == 2 {
        // Absolute trace: sum of a^(2^i) for i < (log2 q) * d.
        let steps = ctx.width() * d;
        let mut t = a.rem(f)?;
        let mut acc = t.clone();
        for _ in 1..steps {
            t = t.mulmod(&t, f)?;
            acc = &acc + &t;
        }
        Ok(acc)
    } else {
        // a^((q^d - 1)/2) = (a^(1 + q + ... + q^(d-1)))^((q - 1)/2).
        let mut t = a.rem(f)?;
        let mut acc = t.clone();
        for _ in 1..d {
            t = t.powmod(q, f)?;
            acc = acc.mulmod(&t, f)?;
        }
        Ok(&acc.powmod((q - 1) / 2, f)? - &Poly::one(ctx))
    }
}

fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) -> Result<()> {
    let n = f.degree().expect("nonzero");
    if n == d {
        out.push(f.clone());
        return Ok(());
    }
    loop {
        let a = random_poly(f.ctx(), n, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let g = splitter(&a, f, d)?.gcd(f);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let h = f.div_exact(&g)?;
            equal_degree(&g, d, rng, out)?;
            equal_degree(&h, d, rng, out)?;
            return Ok(());
        }
    }
}

fn call_rng(f: &Poly, seed: u64) -> ChaCha8Rng {
    let mut h = DefaultHasher::new();
    f.raw().hash(&mut h);
    seed.hash(&mut h);
    ChaCha8Rng::seed_from_u64(h.finish())
}

/// Complete factorization into monic irreducibles. The random choices come
/// from a generator seeded by the input and `seed`; the result does not
/// depend on `seed`.
pub fn factorize(f: &Poly, seed: u64) -> Result<Factorization> {
    let unit = match f.degree() {
        None | Some(0) => return Err(Error::ConstantInput),
        Some(_) => f.lc().expect("nonzero"),
    };
    let mut rng = call_rng(f, seed);
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        for (g, d) in distinct_degree(&part)? {
            let mut irr = Vec::new();
            equal_degree(&g, d, &mut rng, &mut irr)?;
            factors.extend(irr.into_iter().map(|h| (h, mult)));
        }
    }
    factors.sort();
    Ok(Factorization { unit, factors })
}

/// Roots of `f` lying in the extension `ext`, each reported once, in index order.
pub fn roots_in(f: &Poly, ext: &FieldCtx) -> Result<Vec<FieldElem>> {
    let g = f.map_into(ext)?.monic();
    match g.degree() {
        None => return Err(Error::ConstantInput),
        Some(0) => return Ok(Vec::new()),
        Some(_) => {}
    }
    let x = Poly::x(ext);
    let h = x.powmod(ext.cardinality(), &g)?;
    let r = (&h - &x).gcd(&g);
    if r.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let mut rng = call_rng(&r, 0);
    let mut lin = Vec::new();
    equal_degree(&r, 1, &mut rng, &mut lin)?;
    let mut roots: Vec<FieldElem> = lin.iter().map(|l| -&l.coeff(0)).collect();
    roots.sort();
    Ok(roots)
}
