//! Sparse fraction-free incremental elimination.
//!
//! Rows are kept in semi-echelon form: every stored row has a distinct
//! leading (lowest) column. Combining two rows uses the cofactors
//! `lead(r)/g` and `lead(v)/g` with `g` their gcd, and every row is kept
//! primitive. Over `Z[λ]` the engine records every non-constant leading
//! coefficient and every non-constant content it divides out, so a caller
//! can tell at which parameter values the generic rank may drop.

use std::collections::HashMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::{Scalar, ZPoly};

pub trait Domain: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_constant(&self) -> bool;
    fn mul(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Normalized gcd (positive leading coefficient).
    fn gcd(&self, o: &Self) -> Self;
    fn div_exact(&self, o: &Self) -> Self;
    fn is_negative(&self) -> bool;
    fn is_unit_gcd(&self) -> bool;
    fn to_zpoly(&self) -> ZPoly;
    fn to_scalar(&self) -> Scalar;
}

impl Domain for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_constant(&self) -> bool {
        true
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_unit_gcd(&self) -> bool {
        One::is_one(self)
    }
    fn to_zpoly(&self) -> ZPoly {
        ZPoly::constant(self.clone())
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::from_bigint(self.clone())
    }
}

impl Domain for ZPoly {
    fn zero() -> Self {
        ZPoly::zero()
    }
    fn one() -> Self {
        ZPoly::one()
    }
    fn is_zero(&self) -> bool {
        ZPoly::is_zero(self)
    }
    fn is_constant(&self) -> bool {
        ZPoly::is_constant(self)
    }
    fn mul(&self, o: &Self) -> Self {
        ZPoly::mul(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        ZPoly::sub(self, o)
    }
    fn neg(&self) -> Self {
        ZPoly::neg(self)
    }
    fn gcd(&self, o: &Self) -> Self {
        ZPoly::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        ZPoly::div_exact(self, o).expect("exact division in Z[t]")
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(&self.lc())
    }
    fn is_unit_gcd(&self) -> bool {
        self.is_one()
    }
    fn to_zpoly(&self) -> ZPoly {
        self.clone()
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::from_zpoly(self.clone())
    }
}

pub type Row<D> = Vec<(u32, D)>;

#[derive(Clone, Debug)]
pub struct Echelon<D: Domain> {
    rows: Vec<Row<D>>,
    pivot: HashMap<u32, usize>,
    recorded: Vec<ZPoly>,
}

impl<D: Domain> Default for Echelon<D> {
    fn default() -> Self {
        Echelon { rows: Vec::new(), pivot: HashMap::new(), recorded: Vec::new() }
    }
}

/// `ca * v - cb * r` for sorted sparse rows.
fn axpy<D: Domain>(ca: &D, v: &Row<D>, cb: &D, r: &Row<D>) -> Row<D> {
    let mut out = Vec::with_capacity(v.len() + r.len());
    let (mut i, mut j) = (0, 0);
    let ca_one = ca.is_unit_gcd();
    while i < v.len() || j < r.len() {
        let ci = v.get(i).map(|e| e.0).unwrap_or(u32::MAX);
        let cj = r.get(j).map(|e| e.0).unwrap_or(u32::MAX);
        if ci < cj {
            let x = if ca_one { v[i].1.clone() } else { ca.mul(&v[i].1) };
            out.push((ci, x));
            i += 1;
        } else if cj < ci {
            out.push((cj, cb.mul(&r[j].1).neg()));
            j += 1;
        } else {
            let x = if ca_one { v[i].1.clone() } else { ca.mul(&v[i].1) };
            let y = x.sub(&cb.mul(&r[j].1));
            if !y.is_zero() {
                out.push((ci, y));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Content of a row (normalized gcd of entries).
fn content<D: Domain>(v: &Row<D>) -> D {
    let mut g = D::zero();
    for (_, x) in v {
        g = g.gcd(x);
        if g.is_unit_gcd() {
            break;
        }
    }
    g
}

impl<D: Domain> Echelon<D> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Row<D>] {
        &self.rows
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        self.pivot.contains_key(&col)
    }

    pub fn pivot_columns(&self) -> Vec<u32> {
        let mut c: Vec<u32> = self.pivot.keys().copied().collect();
        c.sort_unstable();
        c
    }

    /// Non-constant polynomials that were divided out or used as pivots.
    pub fn recorded(&self) -> &[ZPoly] {
        &self.recorded
    }

    fn record(&mut self, p: &D) {
        if !p.is_constant() {
            let z = p.to_zpoly().primitive();
            if !self.recorded.contains(&z) {
                self.recorded.push(z);
            }
        }
    }

    fn make_primitive(&mut self, v: &mut Row<D>, record: bool) {
        let mut g = content(v);
        if v.first().is_some_and(|e| e.1.is_negative()) {
            g = g.neg();
        }
        if g.is_unit_gcd() {
            return;
        }
        if record {
            self.record(&g);
        }
        for e in v.iter_mut() {
            e.1 = e.1.div_exact(&g);
        }
    }

    /// Reduce the leading entries of `v` against the stored rows until the
    /// lead is not a pivot column (or `v` vanishes).
    fn reduce_lead(&mut self, mut v: Row<D>, record: bool) -> Row<D> {
        while let Some((c, b)) = v.first().cloned() {
            let Some(&ri) = self.pivot.get(&c) else { break };
            let a = self.rows[ri][0].1.clone();
            let g = a.gcd(&b);
            let (ca, cb) = (a.div_exact(&g), b.div_exact(&g));
            v = axpy(&ca, &v, &cb, &self.rows[ri]);
            self.make_primitive(&mut v, record);
        }
        v
    }

    /// Insert a row; returns true if the rank grew.
    pub fn insert(&mut self, mut v: Row<D>) -> bool {
        if v.is_empty() {
            return false;
        }
        self.make_primitive(&mut v, true);
        let v = self.reduce_lead(v, true);
        if v.is_empty() {
            return false;
        }
        self.record(&v[0].1.clone());
        let c = v[0].0;
        self.pivot.insert(c, self.rows.len());
        self.rows.push(v);
        true
    }

    /// True if `v` lies in the row space.
    pub fn contains(&self, v: Row<D>) -> bool {
        let mut v = v;
        while let Some((c, b)) = v.first().cloned() {
            let Some(&ri) = self.pivot.get(&c) else { return false };
            let a = self.rows[ri][0].1.clone();
            let g = a.gcd(&b);
            v = axpy(&a.div_exact(&g), &v, &b.div_exact(&g), &self.rows[ri]);
            let cg = content(&v);
            if !cg.is_zero() && !cg.is_unit_gcd() {
                for e in v.iter_mut() {
                    e.1 = e.1.div_exact(&cg);
                }
            }
        }
        true
    }

    /// Normal form of `v` modulo the row space, supported on non-pivot
    /// columns. Returns `(w, s)` with `NF(v) = w / s`.
    pub fn normal_form(&self, v: Row<D>) -> (Row<D>, D) {
        let mut v = v;
        let mut scale = D::one();
        let mut idx = 0;
        while idx < v.len() {
            let (c, b) = v[idx].clone();
            let Some(&ri) = self.pivot.get(&c) else {
                idx += 1;
                continue;
            };
            let row = &self.rows[ri];
            let a = row[0].1.clone();
            let g = a.gcd(&b);
            let (ca, cb) = (a.div_exact(&g), b.div_exact(&g));
            // entries before idx are on non-pivot columns and only get scaled
            v = axpy(&ca, &v, &cb, row);
            scale = scale.mul(&ca);
            idx = v.partition_point(|e| e.0 < c);
        }
        (v, scale)
    }

    /// Fully reduced rows (no row has a nonzero entry on another row's
    /// pivot column), sorted by leading column.
    pub fn reduced_rows(&mut self) -> Vec<Row<D>> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.rows[i][0].0));
        let mut done: HashMap<u32, Row<D>> = HashMap::new();
        for i in order {
            let mut v = self.rows[i].clone();
            let lead = v[0].0;
            let mut idx = 1;
            while idx < v.len() {
                let (c, b) = v[idx].clone();
                let Some(s) = done.get(&c) else {
                    idx += 1;
                    continue;
                };
                let a = s[0].1.clone();
                let g = a.gcd(&b);
                let s = s.clone();
                v = axpy(&a.div_exact(&g), &v, &b.div_exact(&g), &s);
                self.make_primitive(&mut v, true);
                idx = v.partition_point(|e| e.0 <= c);
            }
            done.insert(lead, v);
        }
        let mut out: Vec<Row<D>> = done.into_values().collect();
        out.sort_by_key(|r| r[0].0);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[(u32, i64)]) -> Row<BigInt> {
        v.iter().map(|&(c, x)| (c, BigInt::from(x))).collect()
    }

    #[test]
    fn rank_and_membership() {
        let mut e = Echelon::<BigInt>::default();
        assert!(e.insert(row(&[(0, 2), (1, 4)])));
        assert!(!e.insert(row(&[(0, 1), (1, 2)])));
        assert!(e.insert(row(&[(1, 3), (2, 1)])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(row(&[(0, 1), (1, 5), (2, 1)])));
        assert!(!e.contains(row(&[(2, 1)])));
        let (w, s) = e.normal_form(row(&[(0, 1)]));
        // x0 = (x0 + 2 x1) - (2/3)(3 x1 + x2) + (2/3) x2
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].0, 2);
        assert_eq!(Scalar::from_bigint(w[0].1.clone()) / s.to_scalar(), Scalar::ratio(2, 3));
    }

    #[test]
    fn records_parameter_pivots() {
        let t = ZPoly::var();
        let mut e = Echelon::<ZPoly>::default();
        e.insert(vec![(0, t.clone()), (1, ZPoly::one())]);
        e.insert(vec![(0, ZPoly::one()), (1, t.clone())]);
        assert_eq!(e.rank(), 2);
        // second pivot lead is t^2 - 1 up to sign
        assert!(e.recorded().contains(&ZPoly::from_i64s(&[-1, 0, 1])));
    }

    #[test]
    fn reduced_rows_clear_pivots() {
        let mut e = Echelon::<BigInt>::default();
        e.insert(row(&[(0, 1), (1, 1), (2, 1)]));
        e.insert(row(&[(1, 1), (2, 2)]));
        let r = e.reduced_rows();
        assert_eq!(r[0], row(&[(0, 1), (2, -1)]));
        assert_eq!(r[1], row(&[(1, 1), (2, 2)]));
    }
}
