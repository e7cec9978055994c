//! Splitting off the regular part: `F ~_K (core, suspension)`.

use crate::error::Result;
use crate::linalg::{inverse, rank, rref};
use crate::poly::{Polynomial, Scalar};

use super::MapGerm;

/// `n - rank df(0)`, over the fraction field when a parameter is present.
pub fn corank(f: &MapGerm) -> usize {
    f.n() - rank(&f.linear_part())
}

/// Result of eliminating the regular part of a germ.
#[derive(Clone, Debug)]
pub struct RankZeroCore {
    /// Germ with zero linear part in the kept variables, exact modulo
    /// terms of degree `> order`.
    pub core: MapGerm,
    pub rank: usize,
    /// Indices (in the original ring) of the variables kept in the core.
    pub kept_vars: Vec<usize>,
    /// Indices of the components used to eliminate variables.
    pub pivot_components: Vec<usize>,
    /// Images of the original variables in the core ring: kept variables map
    /// to themselves, eliminated ones to their power series.
    pub substitution: Vec<Polynomial>,
    pub order: u32,
}

/// Reduce `f` to a rank-zero germ with isomorphic local algebra modulo
/// `M^{order+1}`.
///
/// With `L` the linear part of rank `r`, pick an invertible `r x r` minor
/// (pivot components `R`, pivot variables `C`), replace the other
/// components by combinations with no linear part, solve `f_R = 0` for
/// `x_C` as a truncated power series in the remaining variables and
/// substitute.
pub fn rank_zero_core(f: &MapGerm, order: u32) -> Result<RankZeroCore> {
    let n = f.n();
    let lin = f.linear_part();
    // pivot variables: rref of L
    let mut l = lin.clone();
    let pivot_vars = rref(&mut l);
    let r = pivot_vars.len();
    if r == 0 {
        return Ok(RankZeroCore {
            core: f.clone(),
            rank: 0,
            kept_vars: (0..n).collect(),
            pivot_components: Vec::new(),
            substitution: (0..n).map(|i| Polynomial::var(f.ring(), i)).collect(),
            order,
        });
    }
    // pivot components: greedy independent rows of L
    let mut pivot_components = Vec::new();
    let mut chosen: Vec<Vec<Scalar>> = Vec::new();
    for (i, row) in lin.iter().enumerate() {
        let mut trial = chosen.clone();
        trial.push(row.clone());
        if rank(&trial) > chosen.len() {
            chosen = trial;
            pivot_components.push(i);
        }
        if chosen.len() == r {
            break;
        }
    }
    let kept_vars: Vec<usize> = (0..n).filter(|i| !pivot_vars.contains(i)).collect();

    // A = L[R, C], B = L[R, kept]
    let a: Vec<Vec<Scalar>> =
        pivot_components.iter().map(|&i| pivot_vars.iter().map(|&c| lin[i][c].clone()).collect()).collect();
    let a_inv = inverse(&a).expect("pivot minor is invertible");

    let names: Vec<String> = kept_vars.iter().map(|&i| f.ring().variables()[i].clone()).collect();
    let core_ring = f.ring().with_variables(names)?;

    // substitutions: kept var -> itself, pivot var -> phi
    let mut subs: Vec<Polynomial> = vec![Polynomial::zero(&core_ring); n];
    for (j, &i) in kept_vars.iter().enumerate() {
        subs[i] = Polynomial::var(&core_ring, j);
    }
    // f_R = A x_C + (rest);  x_C = x_C - A^{-1} f_R(x) iterated
    for &c in &pivot_vars {
        subs[c] = Polynomial::zero(&core_ring);
    }
    let pivot_polys: Vec<&Polynomial> = pivot_components.iter().map(|&i| &f.components()[i]).collect();
    for _ in 0..=order {
        let vals: Vec<Polynomial> =
            pivot_polys.iter().map(|p| p.compose_truncated(&subs, order)).collect::<std::result::Result<_, _>>()?;
        let mut next = Vec::with_capacity(r);
        for (ci, &c) in pivot_vars.iter().enumerate() {
            let mut corr = Polynomial::zero(&core_ring);
            for (k, v) in vals.iter().enumerate() {
                corr = &corr + &v.scalar_mul(&a_inv[ci][k]);
            }
            next.push((c, &subs[c] - &corr));
        }
        let mut changed = false;
        for (c, p) in next {
            if p != subs[c] {
                changed = true;
            }
            subs[c] = p;
        }
        if !changed {
            break;
        }
    }

    let mut comps = Vec::new();
    for (j, fj) in f.components().iter().enumerate() {
        if pivot_components.contains(&j) {
            continue;
        }
        // no linear part left: L_j lies in the row space of L_R, which
        // vanishes on the substitution
        comps.push(fj.compose_truncated(&subs, order)?);
    }
    let core = if comps.is_empty() { MapGerm::empty(&core_ring) } else { MapGerm::new(&core_ring, comps)? };
    Ok(RankZeroCore { core, rank: r, kept_vars, pivot_components, substitution: subs, order })
}
