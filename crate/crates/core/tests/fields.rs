mod common;

use orbitfactor::gf::{extension_of_degree, least_irreducible};
use orbitfactor::{factorize, field_create, is_irreducible, minimal_poly, prime_field, roots_in, FieldCtx, Poly};
use proptest::prelude::*;

fn to_poly(ctx: &FieldCtx, v: &[u64]) -> Poly {
    Poly::from_ints(ctx, &v.iter().map(|&x| x as i64).collect::<Vec<_>>())
}

fn from_poly(f: &Poly) -> Vec<u64> {
    f.coeffs().iter().map(|c| c.index() as u64).collect()
}

fn by_index(ctx: &FieldCtx, idx: &[u64]) -> Poly {
    Poly::from_elems(ctx, idx.iter().map(|&i| ctx.from_index(i as u128 % ctx.cardinality()).unwrap()).collect()).unwrap()
}

/// All monic polynomials of degree `n` over `ctx`, coefficients by index.
fn monic_polys(ctx: &FieldCtx, n: usize) -> Vec<Poly> {
    let q = ctx.cardinality() as u64;
    (0..q.pow(n as u32))
        .map(|mut i| {
            let mut idx = vec![0; n + 1];
            for c in idx.iter_mut().take(n) {
                *c = i % q;
                i /= q;
            }
            idx[n] = 1;
            by_index(ctx, &idx)
        })
        .collect()
}

#[test]
fn prime_field_arithmetic_matches_integers() {
    for p in [2u64, 3, 5, 7, 13] {
        let f = prime_field(p).unwrap();
        for a in 0..p {
            for b in 0..p {
                let (x, y) = (f.int(a as i64), f.int(b as i64));
                assert_eq!((&x + &y).index() as u64, (a + b) % p);
                assert_eq!((&x * &y).index() as u64, a * b % p);
                assert_eq!((&x - &y).index() as u64, (a + p - b) % p);
            }
            if a != 0 {
                assert_eq!(f.int(a as i64).inv().unwrap().index() as u64, common::inv_mod(a, p));
            }
        }
    }
}

#[test]
fn frobenius_is_the_qth_power() {
    let flat = [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (7, 2), (3, 4), (2, 6)];
    for (p, m) in flat {
        let f = field_create(p, m).unwrap();
        for x in f.elements().unwrap() {
            assert_eq!(x.frobenius(1), x.pow(p as u128), "F_{p}^{m}");
            assert_eq!(x.frobenius(m as u64), x);
        }
    }
    for (p, m, k) in [(2, 2, 2), (3, 2, 2), (2, 2, 3), (2, 3, 2)] {
        let base = field_create(p, m).unwrap();
        let q = base.cardinality();
        let ext = extension_of_degree(&base, k).unwrap();
        for x in ext.elements().unwrap() {
            assert_eq!(x.frobenius(1), x.pow(q));
            assert_eq!(x.frobenius_over(&base, 1).unwrap(), x.pow(q));
        }
    }
}

#[test]
fn moduli_are_deterministic_and_least() {
    for (p, m) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2), (2, 8)] {
        let a = field_create(p, m).unwrap();
        let b = field_create(p, m).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a, b);
        let want = common::monic_irreducibles(m, p).into_iter().next().unwrap();
        assert_eq!(from_poly(a.modulus().unwrap()), want, "F_{p}^{m}");
    }
    let f9 = field_create(3, 2).unwrap();
    assert_eq!(least_irreducible(&f9, 1).unwrap().degree(), Some(1));
}

#[test]
fn irreducible_counts_match_necklace_formula() {
    for (p, m) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2)] {
        let ctx = field_create(p, m).unwrap();
        let q = ctx.cardinality() as u64;
        for n in 1..=4usize {
            if q.pow(n as u32) > 7000 {
                continue;
            }
            let got = monic_polys(&ctx, n).iter().filter(|f| is_irreducible(f).unwrap()).count() as u64;
            assert_eq!(got, common::irreducible_count(q, n as u64), "q={q} n={n}");
        }
    }
}

#[test]
fn irreducibility_agrees_with_trial_division() {
    for (p, nmax) in [(2u64, 7usize), (3, 5), (5, 3)] {
        let f = prime_field(p).unwrap();
        for n in 1..=nmax {
            for i in 0..p.pow(n as u32) {
                let v = common::monic_from_index(i, n, p);
                assert_eq!(is_irreducible(&to_poly(&f, &v)).unwrap(), common::is_irreducible(&v, p), "{v:?} mod {p}");
            }
        }
    }
}

#[test]
fn minimal_polynomials_divide_the_field_polynomial() {
    for (p, m, k) in [(2, 1, 4), (3, 1, 3), (2, 2, 2), (5, 1, 2), (3, 2, 2)] {
        let base = field_create(p, m).unwrap();
        let q = base.cardinality();
        let ext = extension_of_degree(&base, k).unwrap();
        for alpha in ext.elements().unwrap() {
            let mp = minimal_poly(&alpha, &base).unwrap();
            let d = mp.degree().unwrap();
            assert!(mp.is_monic() && is_irreducible(&mp).unwrap());
            assert_eq!(k % d, 0);
            let x = Poly::x(&base);
            assert_eq!(x.powmod(q.pow(d as u32), &mp).unwrap(), x.rem(&mp).unwrap());
            assert!(mp.map_into(&ext).unwrap().eval(&alpha).unwrap().is_zero());
        }
    }
}

#[test]
fn roots_of_the_field_polynomial_are_the_field() {
    for (p, m) in [(2, 3), (3, 2), (7, 1)] {
        let base = prime_field(p).unwrap();
        let ext = field_create(p, m).unwrap();
        let q = ext.cardinality() as usize;
        let mut v = vec![0i64; q + 1];
        v[q] = 1;
        v[1] = -1;
        let roots = roots_in(&Poly::from_ints(&base, &v), &ext).unwrap();
        assert_eq!(roots, ext.elements().unwrap());
    }
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 13, 65521, 2147483647])
}

fn small_field() -> impl Strategy<Value = FieldCtx> {
    prop::sample::select(vec![(2u64, 1usize), (3, 1), (5, 1), (7, 1), (3, 2), (2, 2), (2, 4), (3, 3)])
        .prop_map(|(p, m)| field_create(p, m).unwrap())
}

fn poly_over(ctx: FieldCtx, max_len: usize) -> impl Strategy<Value = Poly> {
    let q = ctx.cardinality() as u64;
    prop::collection::vec(0..q, 0..max_len).prop_map(move |idx| by_index(&ctx, &idx))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prime_products_match_schoolbook(p in prime(), a in prop::collection::vec(any::<u64>(), 0..40), b in prop::collection::vec(any::<u64>(), 0..40)) {
        let f = prime_field(p).unwrap();
        let (a, b): (Vec<u64>, Vec<u64>) = (a.iter().map(|x| x % p).collect(), b.iter().map(|x| x % p).collect());
        let prod = &to_poly(&f, &a) * &to_poly(&f, &b);
        prop_assert_eq!(from_poly(&prod), common::mul(&a, &b, p));
    }

    #[test]
    fn prime_remainders_match_long_division(p in prime(), a in prop::collection::vec(any::<u64>(), 0..60), b in prop::collection::vec(any::<u64>(), 1..20)) {
        let f = prime_field(p).unwrap();
        let (a, mut b): (Vec<u64>, Vec<u64>) = (a.iter().map(|x| x % p).collect(), b.iter().map(|x| x % p).collect());
        if let Some(lead @ 0) = b.last_mut() {
            *lead = 1;
        }
        let (pa, pb) = (to_poly(&f, &a), to_poly(&f, &b));
        let (q, r) = pa.divrem(&pb).unwrap();
        prop_assert_eq!(from_poly(&r), common::rem(&a, &b, p));
        prop_assert_eq!(&(&q * &pb) + &r, pa);
    }

    #[test]
    fn extension_products_match_elementwise(
        (a, b) in small_field().prop_flat_map(|ctx| (poly_over(ctx.clone(), 25), poly_over(ctx, 25)))
    ) {
        let ctx = a.ctx().clone();
        let mut want = vec![ctx.zero(); (a.coeffs().len() + b.coeffs().len()).max(1)];
        for (i, x) in a.coeffs().iter().enumerate() {
            for (j, y) in b.coeffs().iter().enumerate() {
                want[i + j] = &want[i + j] + &(x * y);
            }
        }
        prop_assert_eq!(&a * &b, Poly::from_elems(&ctx, want).unwrap());
        if !b.is_zero() {
            let (q, r) = a.divrem(&b).unwrap();
            prop_assert!(r.is_zero() || r.degree() < b.degree());
            prop_assert_eq!(&(&q * &b) + &r, a);
        }
    }

    #[test]
    fn factorization_reconstructs_input(
        f in prop::sample::select(vec![(2u64, 1usize), (3, 1), (5, 1), (7, 1), (3, 2)])
            .prop_flat_map(|(p, m)| poly_over(field_create(p, m).unwrap(), 14)),
        seed in 0u64..4,
    ) {
        prop_assume!(f.degree().unwrap_or(0) >= 1);
        let fac = factorize(&f, seed).unwrap();
        prop_assert_eq!(fac.expand(), f.clone());
        for (h, m) in &fac.factors {
            prop_assert!(h.is_monic() && *m >= 1 && is_irreducible(h).unwrap());
        }
        prop_assert_eq!(fac.factors.clone(), factorize(&f, seed + 11).unwrap().factors);
        let single = fac.factors.len() == 1 && fac.factors[0].1 == 1;
        prop_assert_eq!(is_irreducible(&f).unwrap(), single);
    }

    #[test]
    fn multiplying_irreducibles_round_trips(
        p in prop::sample::select(vec![2u64, 3, 5]),
        picks in prop::collection::btree_map(0usize..1000, 1usize..3, 1..5),
    ) {
        let f = prime_field(p).unwrap();
        let pool: Vec<Vec<u64>> = (1..=4).flat_map(|n| common::monic_irreducibles(n, p)).collect();
        let mut chosen: std::collections::BTreeMap<Vec<u64>, usize> = Default::default();
        for (i, m) in picks {
            *chosen.entry(pool[i % pool.len()].clone()).or_default() += m;
        }
        let mut prod = Poly::one(&f);
        for (h, m) in &chosen {
            for _ in 0..*m {
                prod = &prod * &to_poly(&f, h);
            }
        }
        let fac = factorize(&prod, 0).unwrap();
        let got: std::collections::BTreeMap<Vec<u64>, usize> = fac.factors.iter().map(|(h, m)| (from_poly(h), *m)).collect();
        prop_assert_eq!(got, chosen);
    }

    #[test]
    fn xgcd_is_a_bezout_identity(
        (a, b) in small_field().prop_flat_map(|ctx| (poly_over(ctx.clone(), 12), poly_over(ctx, 12)))
    ) {
        let (g, s, t) = a.xgcd(&b);
        prop_assert_eq!(&(&s * &a) + &(&t * &b), g.clone());
        prop_assert_eq!(a.gcd(&b), g.clone());
        if !g.is_zero() {
            prop_assert!(g.is_monic());
            prop_assert!(a.rem(&g).unwrap().is_zero() && b.rem(&g).unwrap().is_zero());
        }
    }
}
