//! Gaussian elimination over an exact field, shared by the jet constraint
//! systems (entries in ℚ(i)) and the span test over F(x).

use crate::arith::{Polynomial, RationalFunction, Scalar};

pub trait FieldElement: Clone + PartialEq {
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Only called on nonzero values.
    fn inv(&self) -> Self;
    /// Pivot preference; smaller is cheaper.
    fn weight(&self) -> usize {
        1
    }
}

impl FieldElement for Scalar {
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        Scalar::inv(self).expect("pivot is nonzero")
    }
}

impl FieldElement for RationalFunction {
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        RationalFunction::inv(self).expect("pivot is nonzero")
    }
    fn weight(&self) -> usize {
        RationalFunction::weight(self)
    }
}

/// Reduce `rows` in place to reduced row echelon form over the first `cols`
/// columns. Returns the pivot column of each nonzero row, in order; the
/// nonzero rows are moved to the front.
pub fn rref<T: FieldElement>(rows: &mut [Vec<T>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(best) = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| rows[i][c].weight())
        else {
            continue;
        };
        rows.swap(r, best);
        let inv = rows[r][c].inv();
        for x in rows[r].iter_mut().skip(c) {
            if !x.is_zero() {
                *x = x.mul(&inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (k, x) in row.iter_mut().enumerate().skip(c) {
                if !pivot_row[k].is_zero() {
                    *x = x.sub(&factor.mul(&pivot_row[k]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: FieldElement>(rows: &[Vec<T>], cols: usize) -> usize {
    let mut work = rows.to_vec();
    rref(&mut work, cols).len()
}

/// A basis of `{ v : A v = 0 }` for the matrix with the given rows.
pub fn nullspace<T: FieldElement>(rows: &[Vec<T>], cols: usize, zero: &T, one: &T) -> Vec<Vec<T>> {
    let mut work = rows.to_vec();
    let pivots = rref(&mut work, cols);
    let mut is_pivot = vec![None; cols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| is_pivot[c].is_none()) {
        let mut v = vec![zero.clone(); cols];
        v[free] = one.clone();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = work[r][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Coefficients `h` with `f = Σ h_j g_j`, or `None` if `f` is not in the
/// span. Free coefficients are set to zero.
pub fn solve_in_span<T: FieldElement>(f: &[T], gs: &[Vec<T>], zero: &T) -> Option<Vec<T>> {
    let t = f.len();
    let k = gs.len();
    // columns g_1..g_k | f, one row per coordinate
    let mut rows: Vec<Vec<T>> = (0..t)
        .map(|i| {
            let mut row: Vec<T> = gs.iter().map(|g| g[i].clone()).collect();
            row.push(f[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows, k);
    for row in rows.iter().skip(pivots.len()) {
        if !row[k].is_zero() {
            return None;
        }
    }
    let mut h = vec![zero.clone(); k];
    for (r, &c) in pivots.iter().enumerate() {
        h[c] = rows[r][k].clone();
    }
    Some(h)
}

/// Fraction-free version of [`solve_in_span`] over `F[x]`: `(w, c)` with
/// `w ≠ 0` and `w·f = Σ c_j g_j`, or `None` if `f` is outside the
/// `F(x)`-span. Bareiss elimination keeps every entry a minor of the input,
/// so all divisions are exact and no rational functions appear.
pub fn solve_in_span_fraction_free(f: &[Polynomial], gs: &[Vec<Polynomial>]) -> Option<(Polynomial, Vec<Polynomial>)> {
    let t = f.len();
    let k = gs.len();
    let vars = f.first().or_else(|| gs.first().and_then(|g| g.first()))?.vars();
    let mut rows: Vec<Vec<Polynomial>> = (0..t)
        .map(|i| {
            let mut row: Vec<Polynomial> = gs.iter().map(|g| g[i].clone()).collect();
            row.push(f[i].clone());
            row
        })
        .filter(|row| row.iter().any(|p| !p.is_zero()))
        .collect();
    let mut pivots = Vec::new();
    let mut previous = Polynomial::one(vars);
    for c in 0..k {
        let r = pivots.len();
        let Some(best) = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).min_by_key(|&i| rows[i][c].len()) else {
            continue;
        };
        rows.swap(r, best);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..=k {
                let cross = &(&pivot_row[c] * &row[j]) - &(&factor * &pivot_row[j]);
                row[j] = cross.exact_div(&previous).expect("Bareiss division is exact");
            }
            row[c] = Polynomial::zero(vars);
        }
        previous = pivot_row[c].clone();
        pivots.push(c);
    }
    if rows.iter().skip(pivots.len()).any(|row| !row[k].is_zero()) {
        return None;
    }
    // back substitution on x = w·c, with w the last pivot
    let w = previous;
    let mut c = vec![Polynomial::zero(vars); k];
    for (r, &p) in pivots.iter().enumerate().rev() {
        let mut acc = &w * &rows[r][k];
        for &q in &pivots[r + 1..] {
            acc = &acc - &(&rows[r][q] * &c[q]);
        }
        c[p] = acc.exact_div(&rows[r][p]).expect("Cramer quotient is a polynomial");
    }
    Some((w, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    #[test]
    fn nullspace_of_single_row() {
        let rows = vec![vec![s(2), s(-2), s(1)]];
        let ns = nullspace(&rows, 3, &Scalar::zero(), &Scalar::one());
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot = rows[0].iter().zip(v).fold(Scalar::zero(), |a, (x, y)| &a + &(x * y));
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn span_membership() {
        let gs = vec![vec![s(1), s(1)], vec![s(2), s(2)]];
        let h = solve_in_span(&[s(3), s(3)], &gs, &Scalar::zero()).unwrap();
        assert_eq!(&h[0] + &(&h[1] * &s(2)), s(3));
        assert!(solve_in_span(&[s(1), s(0)], &[vec![s(0), s(1)]], &Scalar::zero()).is_none());
    }

    #[test]
    fn fraction_free_span() {
        let x = Polynomial::var(1, 0);
        let one = Polynomial::one(1);
        let zero = Polynomial::zero(1);
        // f = (x, 1), g = (x^2, x): f = g / x
        let gs = vec![vec![&x * &x, x.clone()], vec![zero.clone(), zero.clone()]];
        let (w, c) = solve_in_span_fraction_free(&[x.clone(), one.clone()], &gs).unwrap();
        assert_eq!(&w * &x, &c[0] * &(&x * &x));
        assert_eq!(w, &c[0] * &x);
        assert!(solve_in_span_fraction_free(&[one.clone(), zero.clone()], &[vec![x.clone(), one.clone()]]).is_none());
    }

    #[test]
    fn rank_deficient() {
        let rows = vec![vec![s(1), s(2)], vec![s(2), s(4)], vec![s(0), s(0)]];
        assert_eq!(rank(&rows, 2), 1);
    }
}
