use std::cmp::Ordering;
use std::fmt;

use crate::arith::MultiIndex;

/// Ambient sizes: `vars` independent variables, `unknowns` unknown functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dims {
    pub vars: usize,
    pub unknowns: usize,
}

impl Dims {
    pub fn new(vars: usize, unknowns: usize) -> Self {
        Dims { vars, unknowns }
    }

    /// Same variables, one unknown: the shape of scalar operators.
    pub fn scalar(self) -> Dims {
        Dims { vars: self.vars, unknowns: 1 }
    }
}

/// The derivative `D^α e_i`: the `alpha` derivative of unknown `component`
/// (zero based).
///
/// `Ord` is the standard ranking: compare `(|α|, i, α_1, …, α_{m−1})`
/// lexicographically. Since `α_m` is determined by the total and the
/// prefix, comparing the full `α` after the total and component is the same.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Derivative {
    pub component: usize,
    pub alpha: MultiIndex,
}

impl Derivative {
    pub fn new(component: usize, alpha: MultiIndex) -> Self {
        Derivative { component, alpha }
    }

    /// `δ_0^i`, the unknown itself.
    pub fn base(vars: usize, component: usize) -> Self {
        Derivative { component, alpha: MultiIndex::zero(vars) }
    }

    pub fn order(&self) -> u32 {
        self.alpha.total()
    }

    /// `self` is reducible by `other` as a head: same component and
    /// `other.alpha ≤ self.alpha` componentwise.
    pub fn is_multiple_of(&self, other: &Derivative) -> bool {
        self.component == other.component && other.alpha.divides(&self.alpha)
    }

    /// `D^γ self`.
    pub fn shifted(&self, gamma: &MultiIndex) -> Derivative {
        Derivative { component: self.component, alpha: self.alpha.add(gamma) }
    }

    /// The ranking key `(|α|, i, α_1, …, α_{m−1})`, with `i` one based.
    pub fn rank_key(&self) -> Vec<u32> {
        let mut key = vec![self.order(), self.component as u32 + 1];
        let a = self.alpha.as_slice();
        key.extend_from_slice(&a[..a.len().saturating_sub(1)]);
        key
    }

    /// Every derivative in `Δ_s` for the given dims, in ranking order.
    pub fn up_to(dims: Dims, s: u32) -> Vec<Derivative> {
        let mut out = Vec::new();
        for d in 0..=s {
            let layer = MultiIndex::of_degree(dims.vars, d);
            for i in 0..dims.unknowns {
                out.extend(layer.iter().map(|a| Derivative::new(i, a.clone())));
            }
        }
        out
    }
}

pub fn compare_derivatives(a: &Derivative, b: &Derivative) -> Ordering {
    a.cmp(b)
}

impl Ord for Derivative {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then(self.component.cmp(&other.component))
            .then_with(|| self.alpha.as_slice().cmp(other.alpha.as_slice()))
    }
}

impl PartialOrd for Derivative {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Derivative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "δ[{}]^{}", self.alpha, self.component + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(c: usize, a: &[u32]) -> Derivative {
        Derivative::new(c, MultiIndex::from_slice(a))
    }

    #[test]
    fn ranking_two_variables() {
        // keys (1,1,0) vs (1,1,1)
        assert_eq!(d(0, &[0, 1]).rank_key(), vec![1, 1, 0]);
        assert_eq!(d(0, &[1, 0]).rank_key(), vec![1, 1, 1]);
        assert_eq!(compare_derivatives(&d(0, &[0, 1]), &d(0, &[1, 0])), Ordering::Less);
    }

    #[test]
    fn ranking_components() {
        assert_eq!(compare_derivatives(&d(0, &[0]), &d(1, &[0])), Ordering::Less);
        assert_eq!(compare_derivatives(&d(1, &[0]), &d(0, &[1])), Ordering::Less);
    }

    #[test]
    fn ranking_reflexive() {
        let a = d(1, &[2, 1]);
        assert_eq!(compare_derivatives(&a, &a), Ordering::Equal);
    }

    #[test]
    fn ord_matches_rank_key() {
        let all = Derivative::up_to(Dims::new(3, 2), 3);
        for a in &all {
            for b in &all {
                assert_eq!(a.cmp(b), a.rank_key().cmp(&b.rank_key()), "{a:?} vs {b:?}");
            }
        }
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
}
