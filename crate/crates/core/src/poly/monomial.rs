use std::cmp::Ordering;
use std::fmt;

/// Exponent vector, ordered by total degree first and then so that, within
/// one degree, the lexicographically larger exponent vector comes first
/// (`x` before `y`, `x^2` before `x*y`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u32,
    exps: Box<[u16]>,
}

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Self {
        let deg = exps.iter().map(|&e| e as u32).sum();
        Monomial { deg, exps: exps.into_boxed_slice() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::new(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::new(e)
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), o.exps.len());
        Monomial {
            deg: self.deg + o.deg,
            exps: self.exps.iter().zip(o.exps.iter()).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.deg <= o.deg && self.exps.iter().zip(o.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `self / x_i`, or `None` if `x_i` does not divide.
    pub fn div_var(&self, i: usize) -> Option<Monomial> {
        if self.exps[i] == 0 {
            return None;
        }
        let mut e = self.exps.to_vec();
        e[i] -= 1;
        Some(Monomial { deg: self.deg - 1, exps: e.into_boxed_slice() })
    }

    /// All monomials in `nvars` variables of exactly degree `d`, ascending.
    pub fn of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial::one(0));
            }
            return out;
        }
        let mut cur = vec![0u16; nvars];
        fill(&mut cur, 0, d, &mut out);
        out
    }

    /// All monomials with `lo <= degree <= hi`, ascending.
    pub fn up_to(nvars: usize, lo: u32, hi: u32) -> Vec<Monomial> {
        (lo..=hi).flat_map(|d| Self::of_degree(nvars, d)).collect()
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.deg == 0 {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{}", names[i], e)),
            }
        }
        parts.join("*")
    }
}

// emits in descending lexicographic order of the exponent vector, which is
// ascending in our order
fn fill(cur: &mut Vec<u16>, i: usize, left: u32, out: &mut Vec<Monomial>) {
    if i + 1 == cur.len() {
        cur[i] = left as u16;
        out.push(Monomial::new(cur.clone()));
        return;
    }
    for e in (0..=left).rev() {
        cur[i] = e as u16;
        fill(cur, i + 1, left - e, out);
    }
    cur[i] = 0;
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.deg.cmp(&o.deg).then_with(|| o.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.exps[..])
    }
}

/// Number of monomials of degree `<= k` in `n` variables, saturating.
pub fn count_up_to(n: usize, k: u32) -> u128 {
    // C(n + k, n)
    let mut c: u128 = 1;
    for i in 1..=n as u128 {
        c = c.saturating_mul(k as u128 + i) / i;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_graded_with_x_first() {
        let m = Monomial::up_to(2, 0, 2);
        let e: Vec<_> = m.iter().map(|m| m.exponents().to_vec()).collect();
        assert_eq!(e, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
        let mut sorted = m.clone();
        sorted.sort();
        assert_eq!(sorted, m);
    }

    #[test]
    fn counts() {
        assert_eq!(count_up_to(3, 3), 20);
        assert_eq!(Monomial::up_to(3, 0, 3).len(), 20);
        assert_eq!(Monomial::of_degree(0, 0).len(), 1);
    }
}
