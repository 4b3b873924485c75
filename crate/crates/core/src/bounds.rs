//! Snapshot-count bound formulas with all asymptotic constants set to 1 and
//! base-2 logarithms. Generic over the float type; the crate root exports the
//! `f64` instantiation as [`crate::Bounds`].

use std::marker::PhantomData;

use num_traits::Float;

/// Namespace for the bound formulas at scalar type `F`.
pub struct BoundFormulas<F>(PhantomData<F>);

fn cast<F: Float>(x: usize) -> F {
    F::from(x).expect("usize fits the float type")
}

/// `log2(x)`, clamped to 0 for `x <= 1`.
pub fn lg<F: Float>(x: F) -> F {
    if x <= F::one() {
        F::zero()
    } else {
        x.log2()
    }
}

fn pow15<F: Float>(x: F) -> F {
    x * x.sqrt()
}

impl<F: Float> BoundFormulas<F> {
    /// Round trips for `x` targets, each within `2nm` snapshots.
    pub fn there_and_back(n: usize, m: usize, x: usize) -> F {
        cast::<F>(2 * n * m * x)
    }

    /// Pair horizon `2Δn / (|X| - (m - 1)) + 1`.
    pub fn pair_horizon(n: usize, m: usize, delta: F, x: usize) -> F {
        let denom = x.saturating_sub(m.saturating_sub(1)).max(1);
        let two = F::one() + F::one();
        two * delta * cast(n) / cast(denom) + F::one()
    }

    /// Dominating subset size `2k log2 |X|`.
    pub fn dominating_size(k: usize, x: usize) -> F {
        cast::<F>(2 * k) * lg(cast::<F>(x))
    }

    /// Long-walk coverage `sqrt(|X| / (Δ log2 |X|)) / 16`; `|X|` itself when
    /// `|X| <= 1`.
    pub fn long_walk_coverage(delta: F, x: usize) -> F {
        if x <= 1 {
            return cast(x);
        }
        let xf = cast::<F>(x);
        (xf / (delta * lg(xf))).sqrt() / cast(16)
    }

    /// Go-and-return split size `|X| / (2 m^2)`.
    pub fn split_size(m: usize, x: usize) -> F {
        cast::<F>(x) / cast(2 * m * m)
    }

    /// Per-epoch coverage `sqrt(|X| / (Δ log2 max(2, |X| / 2m^2))) / (32 m)`.
    pub fn epoch_coverage(m: usize, delta: F, x: usize) -> F {
        let two = F::one() + F::one();
        let ratio = (cast::<F>(x) / cast(2 * m * m)).max(two);
        (cast::<F>(x) / (delta * lg(ratio))).sqrt() / cast(32 * m)
    }

    /// Subset exploration `n m^3 Δ^1.5 sqrt(|X| log2(m|X|)) log2|X| + n m^3`.
    pub fn explore_subset(n: usize, m: usize, delta: F, x: usize) -> F {
        let nm3 = cast::<F>(n * m * m * m);
        let xf = cast::<F>(x);
        nm3 * pow15(delta) * (xf * lg(cast::<F>(m * x))).sqrt() * lg(xf) + nm3
    }

    /// Full exploration `n^1.5 m^3 Δ^1.5 log2^1.5(n) + n m^3`.
    pub fn explore_all(n: usize, m: usize, delta: F) -> F {
        let nf = cast::<F>(n);
        let m3 = cast::<F>(m * m * m);
        pow15(nf) * m3 * pow15(delta) * pow15(lg(nf)) + nf * m3
    }

    /// Single-agent conversion `(T + n) k log2 n`.
    pub fn multi_to_single(t_multi: usize, n: usize, k: usize) -> F {
        cast::<F>((t_multi + n) * k) * lg(cast::<F>(n))
    }

    /// `b` agents over a strict division: `n r^0.5 b^3 Δ^1.5 log2^1.5 r + n^2 / r`.
    pub fn division_multi(n: usize, r: usize, b: usize, delta: F) -> F {
        let (nf, rf) = (cast::<F>(n), cast::<F>(r.max(1)));
        nf * rf.sqrt() * cast(b * b * b) * pow15(delta) * pow15(lg(rf)) + nf * nf / rf
    }

    /// One agent over a strict division:
    /// `n r^0.5 b^4 Δ^1.5 log2^1.5(r) log2 n + n^2 log2 n / r`.
    pub fn division_single(n: usize, r: usize, b: usize, delta: F) -> F {
        let (nf, rf) = (cast::<F>(n), cast::<F>(r.max(1)));
        let ln = lg(nf);
        nf * rf.sqrt() * cast(b * b * b * b) * pow15(delta) * pow15(lg(rf)) * ln + nf * nf * ln / rf
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type B = BoundFormulas<f64>;

    #[test]
    fn pair_horizon_substitution() {
        // Δ = 2, n = 10, |X| = 5, m = 1
        assert_eq!(B::pair_horizon(10, 1, 2.0, 5), 9.0);
    }

    #[test]
    fn dominating_size_substitution() {
        assert_eq!(B::dominating_size(3, 8), 18.0);
    }

    #[test]
    fn long_walk_coverage_substitution() {
        let c = B::long_walk_coverage(1.0, 64);
        assert!((c - (64.0f64 / 6.0).sqrt() / 16.0).abs() < 1e-12);
        assert_eq!(c.ceil(), 1.0);
        assert_eq!(B::long_walk_coverage(1.0, 1), 1.0);
    }

    #[test]
    fn generic_over_f32() {
        let a = BoundFormulas::<f32>::explore_subset(16, 2, 3.0, 16);
        let b = B::explore_subset(16, 2, 3.0, 16);
        assert!(((a as f64) - b).abs() / b < 1e-5);
    }

    #[test]
    fn degenerate_logs_vanish() {
        assert_eq!(B::explore_subset(10, 2, 2.0, 1), 80.0);
        assert_eq!(B::multi_to_single(5, 1, 3), 0.0);
    }
}
