use super::MultiPoly;
use crate::error::{Error, Result};

/// Sylvester matrix of `p` and `q` in `var`, rows of `p` first, highest degree left.
pub fn sylvester_matrix(p: &MultiPoly, q: &MultiPoly, var: &str) -> Vec<Vec<MultiPoly>> {
    let m = p.degree_in(var) as usize;
    let n = q.degree_in(var) as usize;
    let pc = p.coeffs_in(var);
    let qc = q.coeffs_in(var);
    let size = m + n;
    let mut rows = vec![vec![MultiPoly::zero(); size]; size];
    for i in 0..n {
        for j in 0..=m {
            rows[i][i + j] = pc[m - j].clone();
        }
    }
    for i in 0..m {
        for j in 0..=n {
            rows[n + i][i + j] = qc[n - j].clone();
        }
    }
    rows
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn bareiss_det(mut a: Vec<Vec<MultiPoly>>) -> MultiPoly {
    let n = a.len();
    if n == 0 {
        return MultiPoly::one();
    }
    let mut sign = false;
    let mut prev = MultiPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return MultiPoly::zero();
            };
            a.swap(k, r);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = MultiPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Resultant of `p` and `q` eliminating `var`.
pub fn resultant(p: &MultiPoly, q: &MultiPoly, var: &str) -> Result<MultiPoly> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::DegenerateInput("resultant of a zero polynomial".into()));
    }
    if !p.has_var(var) || !q.has_var(var) {
        return Err(Error::DegenerateInput(format!("both inputs must involve {var}")));
    }
    Ok(bareiss_det(sylvester_matrix(p, q, var)))
}
