use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// An exponent vector `(α_1, …, α_m)`.
///
/// Ordered graded-lexicographically: first by total degree, then
/// lexicographically with `α_1` most significant. This is the monomial order
/// used for polynomials, and it agrees with the derivative ranking when there
/// is a single unknown.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(SmallVec<[u32; 4]>);

impl MultiIndex {
    pub fn zero(vars: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, vars))
    }

    pub fn unit(vars: usize, j: usize) -> Self {
        let mut e = MultiIndex::zero(vars);
        e.0[j] = 1;
        e
    }

    pub fn from_slice(exps: &[u32]) -> Self {
        MultiIndex(SmallVec::from_slice(exps))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0[j]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise `self ≤ other`.
    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// `self − other`, `None` unless `other` divides `self`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<SmallVec<_>>>()
            .map(MultiIndex)
    }

    pub fn lcm(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn with(&self, j: usize, value: u32) -> MultiIndex {
        let mut e = self.clone();
        e.0[j] = value;
        e
    }

    pub fn inc(&self, j: usize) -> MultiIndex {
        self.with(j, self.0[j] + 1)
    }

    /// Every multi-index below or equal to `self` componentwise.
    pub fn divisors(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zero(self.len())];
        for j in 0..self.len() {
            let mut next = Vec::with_capacity(out.len() * (self.0[j] as usize + 1));
            for base in &out {
                for e in 0..=self.0[j] {
                    next.push(base.with(j, e));
                }
            }
            out = next;
        }
        out
    }

    /// `α!` as a product of factorials.
    pub fn factorial(&self) -> num_bigint::BigInt {
        let mut acc = num_bigint::BigInt::from(1);
        for &e in &self.0 {
            for k in 2..=e {
                acc *= k;
            }
        }
        acc
    }

    /// All multi-indices in `vars` variables with total degree `≤ order`,
    /// in increasing graded-lex order.
    pub fn up_to(vars: usize, order: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for d in 0..=order {
            out.extend(MultiIndex::of_degree(vars, d));
        }
        out
    }

    /// All multi-indices of total degree exactly `degree`, increasing lex.
    pub fn of_degree(vars: usize, degree: u32) -> Vec<MultiIndex> {
        fn rec(vars: usize, j: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if j + 1 == vars {
                cur.push(left);
                out.push(MultiIndex::from_slice(cur));
                cur.pop();
                return;
            }
            for e in 0..=left {
                cur.push(e);
                rec(vars, j + 1, left - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if vars == 0 {
            if degree == 0 {
                out.push(MultiIndex::zero(0));
            }
            return out;
        }
        rec(vars, 0, degree, &mut Vec::with_capacity(vars), &mut out);
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total().cmp(&other.total()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Comma separated exponents, e.g. `1,0,2`.
impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        // |I_s| = C(s + m, m)
        assert_eq!(MultiIndex::up_to(2, 3).len(), 10);
        assert_eq!(MultiIndex::up_to(3, 2).len(), 10);
        assert_eq!(MultiIndex::up_to(1, 4).len(), 5);
        let v = MultiIndex::up_to(2, 2);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn divisors_of_box() {
        let a = MultiIndex::from_slice(&[2, 1]);
        assert_eq!(a.divisors().len(), 6);
        assert!(a.divisors().iter().all(|d| d.divides(&a)));
    }

    #[test]
    fn graded_before_lex() {
        let a = MultiIndex::from_slice(&[0, 2]);
        let b = MultiIndex::from_slice(&[1, 0]);
        assert!(b < a);
        assert!(MultiIndex::from_slice(&[0, 1]) < b);
    }
}
