//! Independent reference implementations used as oracles. Nothing here calls
//! into the library: prime-field polynomials are plain `Vec<u64>`
//! (constant term first) and PGL(2,p) is modelled with integer matrices.
#![allow(dead_code)]

use std::collections::BTreeSet;

pub fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    trim(out)
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub fn pow_mod(a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u128;
    let mut b = a as u128 % p as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u128;
        }
        b = b * b % p as u128;
        e >>= 1;
    }
    r as u64
}

/// Remainder of `a` by a nonzero `d`.
pub fn rem(a: &[u64], d: &[u64], p: u64) -> Vec<u64> {
    let d = trim(d.to_vec());
    let mut r = trim(a.to_vec());
    let inv = inv_mod(*d.last().expect("nonzero divisor"), p);
    while r.len() >= d.len() {
        let shift = r.len() - d.len();
        let t = (*r.last().unwrap() as u128 * inv as u128 % p as u128) as u64;
        for (j, &dj) in d.iter().enumerate() {
            r[shift + j] = ((r[shift + j] as u128 + (p - t) as u128 * dj as u128) % p as u128) as u64;
        }
        r = trim(r);
    }
    r
}

/// Monic polynomial of degree `n` whose lower coefficients are the base-`p`
/// digits of `idx`.
pub fn monic_from_index(mut idx: u64, n: usize, p: u64) -> Vec<u64> {
    let mut v = vec![0; n + 1];
    for c in v.iter_mut().take(n) {
        *c = idx % p;
        idx /= p;
    }
    v[n] = 1;
    v
}

/// Trial division by every monic polynomial of degree `1..=n/2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    for d in 1..=n / 2 {
        for idx in 0..p.pow(d as u32) {
            if rem(f, &monic_from_index(idx, d, p), p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// All monic irreducibles of degree `n` over `F_p`, in index order.
pub fn monic_irreducibles(n: usize, p: u64) -> Vec<Vec<u64>> {
    (0..p.pow(n as u32)).map(|i| monic_from_index(i, n, p)).filter(|f| is_irreducible(f, p)).collect()
}

fn moebius_mu(mut n: u64) -> i64 {
    let mut k = 0;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            k += 1;
        }
        d += 1;
    }
    if n > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of monic irreducibles of degree `n` over `F_q` (necklace formula).
pub fn irreducible_count(q: u64, n: u64) -> u64 {
    let s: i128 = (1..=n).filter(|d| n % d == 0).map(|d| moebius_mu(d) as i128 * (q as i128).pow((n / d) as u32)).sum();
    (s / n as i128) as u64
}

pub fn divisors(n: u64) -> BTreeSet<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

pub type Mat = [u64; 4];

/// Scales so the first nonzero entry is 1.
pub fn normalize(m: Mat, p: u64) -> Mat {
    let lead = *m.iter().find(|&&x| x != 0).expect("nonzero matrix");
    let inv = inv_mod(lead, p);
    m.map(|x| x * inv % p)
}

pub fn mat_mul(x: Mat, y: Mat, p: u64) -> Mat {
    normalize(
        [
            (x[0] * y[0] + x[1] * y[2]) % p,
            (x[0] * y[1] + x[1] * y[3]) % p,
            (x[2] * y[0] + x[3] * y[2]) % p,
            (x[2] * y[1] + x[3] * y[3]) % p,
        ],
        p,
    )
}

pub fn pgl(p: u64) -> Vec<Mat> {
    let mut out = BTreeSet::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    if (a * d + p * p - b * c) % p != 0 {
                        out.insert(normalize([a, b, c, d], p));
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

pub fn mat_order(m: Mat, p: u64) -> u64 {
    let id = [1, 0, 0, 1];
    let mut x = m;
    let mut n = 1;
    while x != id {
        x = mat_mul(x, m, p);
        n += 1;
    }
    n
}

/// Conjugacy classes of PGL(2,p) by brute force, as sorted class sizes.
pub fn class_sizes(p: u64) -> Vec<usize> {
    let g = pgl(p);
    let inv: Vec<Mat> = g.iter().map(|&m| normalize([m[3], (p - m[1]) % p, (p - m[2]) % p, m[0]], p)).collect();
    let mut seen = BTreeSet::new();
    let mut sizes = Vec::new();
    for &s in &g {
        if seen.contains(&s) {
            continue;
        }
        let class: BTreeSet<Mat> = g.iter().zip(&inv).map(|(&h, &hi)| mat_mul(mat_mul(h, s, p), hi, p)).collect();
        sizes.push(class.len());
        seen.extend(class);
    }
    sizes.sort();
    sizes
}

/// `s(z)` on `P^1(F_p)`, with `p` standing for infinity.
pub fn apply(m: Mat, z: u64, p: u64) -> u64 {
    let (num, den) = if z == p { (m[0], m[2]) } else { ((m[0] * z + m[1]) % p, (m[2] * z + m[3]) % p) };
    if den == 0 {
        p
    } else {
        num * inv_mod(den, p) % p
    }
}
