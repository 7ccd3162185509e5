use num_traits::{One, Zero};

use crate::algebra::Rational;

/// Solution set `particular + span(kernel)` of a linear system.
///
/// `particular` has every free variable set to zero; `kernel[i]` is the
/// basis vector obtained by setting the i-th free variable (in column order)
/// to one and the others to zero.
#[derive(Debug, Clone)]
pub(crate) struct AffineSolution {
    pub particular: Vec<Rational>,
    pub kernel: Vec<Vec<Rational>>,
}

/// Gauss-Jordan elimination to reduced row echelon form, pivoting on the
/// leftmost available column. Returns `None` when inconsistent.
pub(crate) fn solve_linear(
    mut rows: Vec<Vec<Rational>>,
    mut rhs: Vec<Rational>,
    ncols: usize,
) -> Option<AffineSolution> {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        rhs.swap(r, pr);
        let inv = rows[r][col].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        rhs[r] *= &inv;
        let pivot = rows[r].clone();
        for i in 0..nrows {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].clone();
            for (x, y) in rows[i].iter_mut().zip(&pivot) {
                *x -= &f * y;
            }
            let d = &f * &rhs[r];
            rhs[i] -= d;
        }
        pivots.push(col);
        r += 1;
    }
    if rhs[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut particular = vec![Rational::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = rhs[i].clone();
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -rows[i][f].clone();
            }
            v
        })
        .collect();
    Some(AffineSolution { particular, kernel })
}
