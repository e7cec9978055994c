//! Small dense linear algebra over exact scalars (field operations).
//!
//! Used for linear parts, coordinate changes and certificate systems; the
//! large jet computations go through [`crate::jetspace`] instead.

use crate::poly::Scalar;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut Vec<Vec<Scalar>>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pr);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    if !m[r][j].is_zero() {
                        m[i][j] = &m[i][j] - &(&f * &m[r][j]);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

pub fn rank(m: &[Vec<Scalar>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut a);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace(m: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    let mut a = m.to_vec();
    let piv = rref(&mut a);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !piv.contains(c)) {
        let mut v = vec![Scalar::zero(); ncols];
        v[free] = Scalar::one();
        for (r, &pc) in piv.iter().enumerate() {
            v[pc] = -&a[r][free];
        }
        out.push(v);
    }
    out
}

/// For each right-hand side `b`, a solution of `Σ x_c cols[c] = b` (free
/// unknowns zero), or `None` if `b` is outside the span.
pub fn solve_many(cols: &[Vec<Scalar>], rhs: &[Vec<Scalar>], dim: usize) -> Vec<Option<Vec<Scalar>>> {
    let nc = cols.len();
    let mut a: Vec<Vec<Scalar>> = (0..dim)
        .map(|r| cols.iter().map(|c| c[r].clone()).chain(rhs.iter().map(|b| b[r].clone())).collect())
        .collect();
    let piv = rref(&mut a);
    rhs.iter()
        .enumerate()
        .map(|(k, _)| {
            let col = nc + k;
            let mut x = vec![Scalar::zero(); nc];
            for (r, &pc) in piv.iter().enumerate() {
                if pc >= nc {
                    if !a[r][col].is_zero() {
                        return None;
                    }
                } else {
                    x[pc] = a[r][col].clone();
                }
            }
            Some(x)
        })
        .collect()
}

/// Exact positive definiteness of a symmetric rational matrix by symmetric
/// elimination; `None` if an entry is not a rational number.
pub fn is_positive_definite(m: &[Vec<Scalar>]) -> Option<bool> {
    let n = m.len();
    let mut a = m.to_vec();
    for k in 0..n {
        if a[k][k].sign()? != std::cmp::Ordering::Greater {
            return Some(false);
        }
        let inv = a[k][k].inv();
        for i in k + 1..n {
            let f = &a[i][k] * &inv;
            if f.is_zero() {
                continue;
            }
            for j in k + 1..n {
                let d = &f * &a[k][j];
                a[i][j] = &a[i][j] - &d;
            }
        }
    }
    Some(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[&[i64]]) -> Vec<Vec<Scalar>> {
        v.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect()
    }

    #[test]
    fn inverse_and_rank() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, m(&[&[1, -1], &[-1, 2]]));
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn solving() {
        let cols = m(&[&[1, 0], &[1, 1]]);
        let got = solve_many(&cols, &m(&[&[2, 3]]), 2);
        assert_eq!(got[0].as_ref().unwrap(), &m(&[&[-1, 3]])[0]);
        let got = solve_many(&m(&[&[1, 0]]), &m(&[&[2, 0], &[0, 1]]), 2);
        assert_eq!(got[0].as_ref().unwrap(), &m(&[&[2]])[0]);
        assert!(got[1].is_none());
    }

    #[test]
    fn definiteness() {
        assert_eq!(is_positive_definite(&m(&[&[2, 1], &[1, 2]])), Some(true));
        assert_eq!(is_positive_definite(&m(&[&[1, 2], &[2, 1]])), Some(false));
        assert_eq!(is_positive_definite(&m(&[&[1, 0], &[0, 0]])), Some(false));
    }

    #[test]
    fn nullspace_basis() {
        let a = m(&[&[1, 1, 0]]);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            for row in &a {
                let dot = row.iter().zip(&v).fold(Scalar::zero(), |acc, (x, y)| &acc + &(x * y));
                assert!(dot.is_zero());
            }
        }
    }
}
