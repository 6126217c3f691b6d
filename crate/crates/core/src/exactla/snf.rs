use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_i64_rows(cols: usize, rows: &[Vec<i64>]) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| &v[i] * self.get(i, j)).sum())
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(s) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, s);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[target] += factor · row[source]
    fn add_row(&mut self, target: usize, source: usize, factor: &BigInt) {
        for c in 0..self.cols {
            let v = self.get(target, c) + factor * self.get(source, c);
            self.set(target, c, v);
        }
    }

    /// col[target] += factor · col[source]
    fn add_col(&mut self, target: usize, source: usize, factor: &BigInt) {
        for r in 0..self.rows {
            let v = self.get(r, target) + factor * self.get(r, source);
            self.set(r, target, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }
}

/// Result of a Smith normal form computation: `u · m · v = diag(d, 0, …)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero invariant factors `d₁ | d₂ | …`, all positive.
    pub invariants: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub diagonal: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut a = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let limit = m.rows.min(m.cols);
    let mut t = 0;
    while t < limit {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..a.rows {
            for j in t..a.cols {
                let x = a.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..a.rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -a.get(i, t).div_floor(a.get(t, t));
                a.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !a.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..a.cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -a.get(t, j).div_floor(a.get(t, t));
                a.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !a.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // A smaller remainder appeared in row or column t: make it the pivot.
                let mut best = (t, t);
                for i in t..a.rows {
                    let x = a.get(i, t);
                    if !x.is_zero() && x.abs() < a.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t..a.cols {
                    let x = a.get(t, j);
                    if !x.is_zero() && x.abs() < a.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap_rows(t, best.0);
                    u.swap_rows(t, best.0);
                }
                if best.1 != t {
                    a.swap_cols(t, best.1);
                    v.swap_cols(t, best.1);
                }
                continue;
            }
            // Row and column are clear; enforce divisibility of the trailing block.
            let p = a.get(t, t).clone();
            let bad = (t + 1..a.rows).find(|&i| (t + 1..a.cols).any(|j| !(a.get(i, j) % &p).is_zero()));
            match bad {
                Some(i) => {
                    a.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let invariants = (0..limit).map(|i| a.get(i, i).clone()).take_while(|x| !x.is_zero()).collect();
    SmithForm {
        invariants,
        u,
        v,
        diagonal: a,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        let prod = s.u.mul(m).mul(&s.v);
        assert_eq!(prod, s.diagonal);
        assert!(prod.is_diagonal());
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
        for w in s.invariants.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        assert!(s.invariants.iter().all(|d| d.is_positive()));
        s
    }

    #[test]
    fn two_by_two_example() {
        // Hand reduction: R2 -= R1 gives [[1,-1],[0,2]]; C2 += C1 gives diag(1,2).
        let m = IntMatrix::from_i64_rows(2, &[vec![1, -1], vec![1, 1]]);
        assert_eq!(check(&m).invariants, vec![BigInt::from(1), BigInt::from(2)]);
    }

    #[test]
    fn identity_has_unit_factors() {
        let m = IntMatrix::identity(4);
        assert_eq!(check(&m).invariants, vec![BigInt::one(); 4]);
    }

    #[test]
    fn zero_row_has_no_factors() {
        let m = IntMatrix::zeros(1, 2);
        let s = check(&m);
        assert!(s.invariants.is_empty());
        assert_eq!(m.cols() - s.rank(), 2);
    }

    #[test]
    fn divisibility_fix_is_applied() {
        let m = IntMatrix::from_i64_rows(2, &[vec![2, 0], vec![0, 3]]);
        assert_eq!(check(&m).invariants, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn empty_matrix() {
        let m = IntMatrix::zeros(0, 3);
        let s = check(&m);
        assert!(s.invariants.is_empty());
        assert_eq!(s.v, IntMatrix::identity(3));
    }

    proptest! {
        #[test]
        fn smith_form_is_unimodular_and_diagonal(
            (r, c, vals) in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| (Just(r), Just(c), proptest::collection::vec(-6i64..7, r * c)))
        ) {
            let rows: Vec<Vec<i64>> = vals.chunks(c).map(|ch| ch.to_vec()).collect();
            let m = IntMatrix::from_i64_rows(c, &rows);
            prop_assert_eq!(rows.len(), r);
            check(&m);
        }
    }
}
