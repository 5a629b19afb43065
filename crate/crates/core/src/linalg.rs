//! Kernel of a matrix over a finite field by Gaussian elimination.

use crate::gf::{FieldCtx, FieldElem};

/// A basis of `{v : A v = 0}` for the `rows x ncols` matrix `a`.
pub(crate) fn nullspace(ctx: &FieldCtx, mut a: Vec<Vec<FieldElem>>, ncols: usize) -> Vec<Vec<FieldElem>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, pr);
        let inv = a[row][col].inv().expect("pivot is nonzero");
        for x in a[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..ncols {
                    let t = &a[row][c] * &f;
                    a[r][c] = &a[r][c] - &t;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![ctx.zero(); ncols];
        v[free] = ctx.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -&a[r][free];
        }
        basis.push(v);
    }
    basis
}

/// Every vector of the span of `basis` (there are `q^len` of them).
pub(crate) fn span(ctx: &FieldCtx, basis: &[Vec<FieldElem>], ncols: usize) -> Vec<Vec<FieldElem>> {
    let els = ctx.elements().expect("coefficient field is small");
    let mut out = vec![vec![ctx.zero(); ncols]];
    for b in basis {
        let mut next = Vec::with_capacity(out.len() * els.len());
        for v in &out {
            for c in &els {
                next.push(v.iter().zip(b).map(|(x, y)| x + &(c * y)).collect());
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::prime_field;

    #[test]
    fn kernel_of_rank_one() {
        let f = prime_field(5).unwrap();
        let row = vec![f.int(1), f.int(2), f.int(3)];
        let ker = nullspace(&f, vec![row.clone()], 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            let dot = v.iter().zip(&row).fold(f.zero(), |acc, (x, y)| &acc + &(x * y));
            assert!(dot.is_zero());
        }
        assert_eq!(span(&f, &ker, 3).len(), 25);
    }
}
