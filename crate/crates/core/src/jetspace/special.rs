//! Ranks of parametric row spaces on the zero sets of parameter polynomials.
//!
//! Elimination over `Q[λ]/(q)` for squarefree `q`. When a would-be pivot is
//! a zero divisor, `q` splits along the gcd and both halves are redone, so
//! the result is a factorization of `q` with the rank on each factor.

use crate::poly::ZPoly;

use super::echelon::Row;

/// `lc(q)^n * e mod q`, with the power `n` fixed so that scaling is uniform
/// across a row.
fn rem_scaled(e: &ZPoly, q: &ZPoly, n: usize) -> ZPoly {
    let dq = q.degree().expect("nonzero modulus");
    let lcq = q.lc();
    let mut r = e.clone();
    let mut used = 0;
    while let Some(dr) = r.degree() {
        if dr < dq {
            break;
        }
        let lcr = r.lc();
        let mut c = r.scale(&lcq).coeffs().to_vec();
        for (j, qc) in q.coeffs().iter().enumerate() {
            c[dr - dq + j] -= &lcr * qc;
        }
        r = ZPoly::from_coeffs(c);
        used += 1;
    }
    assert!(used <= n, "scaling budget exceeded");
    let mut s = r;
    for _ in used..n {
        s = s.scale(&lcq);
    }
    s
}

fn reduce_row(row: &[(u32, ZPoly)], q: &ZPoly) -> Row<ZPoly> {
    let dq = q.degree().expect("nonzero modulus");
    let n = row.iter().filter_map(|(_, e)| e.degree()).map(|d| (d + 1).saturating_sub(dq)).max().unwrap_or(0);
    let mut out: Row<ZPoly> =
        row.iter().map(|(c, e)| (*c, rem_scaled(e, q, n))).filter(|(_, e)| !e.is_zero()).collect();
    // divide by the integer content of the row
    let g = out.iter().fold(num_bigint::BigInt::from(0), |a, (_, e)| num_integer::Integer::gcd(&a, &e.content()));
    if g > num_bigint::BigInt::from(1) {
        for (_, e) in out.iter_mut() {
            *e = e.div_scalar_exact(&g);
        }
    }
    out
}

enum Outcome {
    Rank(usize),
    Split(ZPoly, ZPoly),
}

fn rank_mod(rows: &[Row<ZPoly>], q: &ZPoly) -> Outcome {
    // pivot rows keyed by leading column, each with a unit lead mod q
    let mut pivots: std::collections::BTreeMap<u32, Row<ZPoly>> = std::collections::BTreeMap::new();
    for r in rows {
        let mut v = reduce_row(r, q);
        loop {
            let Some((lead, a)) = v.first().cloned() else { break };
            if let Some(p) = pivots.get(&lead) {
                let b = &p[0].1;
                // v <- b v - a p
                let mut merged: Vec<(u32, ZPoly)> = Vec::with_capacity(v.len() + p.len());
                let (mut i, mut j) = (0, 0);
                while i < v.len() || j < p.len() {
                    let ci = v.get(i).map(|e| e.0);
                    let cj = p.get(j).map(|e| e.0);
                    match (ci, cj) {
                        (Some(x), Some(y)) if x == y => {
                            merged.push((x, v[i].1.mul(b).sub(&p[j].1.mul(&a))));
                            i += 1;
                            j += 1;
                        }
                        (Some(x), Some(y)) if x < y => {
                            merged.push((x, v[i].1.mul(b)));
                            i += 1;
                        }
                        (Some(x), None) => {
                            merged.push((x, v[i].1.mul(b)));
                            i += 1;
                        }
                        (_, Some(y)) => {
                            merged.push((y, p[j].1.mul(&a).neg()));
                            j += 1;
                        }
                        (None, None) => unreachable!(),
                    }
                }
                v = reduce_row(&merged, q);
                continue;
            }
            let h = a.gcd(q);
            if !h.is_constant() {
                let other = q.div_exact(&h).expect("gcd divides");
                return Outcome::Split(h.primitive(), other.primitive());
            }
            pivots.insert(lead, v);
            break;
        }
    }
    Outcome::Rank(pivots.len())
}

/// Split the squarefree `q` into coprime factors with the rank of `rows`
/// reduced modulo each.
pub fn ranks_on_factors(rows: &[Row<ZPoly>], q: &ZPoly) -> Vec<(ZPoly, usize)> {
    let mut todo = vec![q.primitive()];
    let mut out = Vec::new();
    while let Some(q) = todo.pop() {
        if q.is_constant() {
            continue;
        }
        match rank_mod(rows, &q) {
            Outcome::Rank(r) => out.push((q, r)),
            Outcome::Split(a, b) => {
                todo.push(a);
                todo.push(b);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_drop_on_a_factor() {
        // rows (1, λ) and (λ, 1): determinant 1 - λ^2
        let l = ZPoly::var();
        let rows: Vec<Row<ZPoly>> = vec![vec![(0, ZPoly::one()), (1, l.clone())], vec![(0, l.clone()), (1, ZPoly::one())]];
        let q = ZPoly::from_i64s(&[-1, 0, 1]).mul(&ZPoly::from_i64s(&[2, 1]));
        let mut got = ranks_on_factors(&rows, &q);
        got.sort_by_key(|(p, _)| p.coeffs().to_vec());
        let drops: Vec<ZPoly> = got.iter().filter(|(_, r)| *r < 2).map(|(p, _)| p.clone()).collect();
        assert_eq!(drops.iter().map(|p| p.degree().unwrap()).sum::<usize>(), 2);
        for p in &drops {
            assert!(ZPoly::from_i64s(&[-1, 0, 1]).div_exact(p).is_some());
        }
        assert!(got.iter().any(|(p, r)| *p == ZPoly::from_i64s(&[2, 1]) && *r == 2));
    }
}
