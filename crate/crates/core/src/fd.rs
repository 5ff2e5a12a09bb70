//! Central finite-difference oracle.
//!
//! Used by the tests to cross-check jet evaluation and every closed-form
//! derivative in the geometry layers against a derivative estimate that
//! shares no code with [`crate::jet`]. Mixed partials are built by nesting
//! first-order central differences, one nesting level per unit of the
//! multi-index.

use alloc::vec::Vec;

/// Step size per total derivative order. Higher orders need a coarser step
/// to keep cancellation error in check.
pub fn step_for_order(order: usize) -> f64 {
    if order <= 2 {
        1e-3
    } else {
        1e-2
    }
}

/// Estimate `∂^alpha f` at `p` by nested central differences.
///
/// `alpha` is a multi-index over the coordinates of `p`; the step is chosen
/// from the total order unless `h` is given.
pub fn fd_partial<F>(f: &F, p: &[f64], alpha: &[usize], h: Option<f64>) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    let total: usize = alpha.iter().sum();
    if total == 0 {
        return f(p);
    }
    let h = h.unwrap_or_else(|| step_for_order(total));
    // find the first coordinate still carrying derivatives
    let i = alpha.iter().position(|&a| a > 0).unwrap();
    let mut inner = alpha.to_vec();
    inner[i] -= 1;
    let shifted = |p: &[f64], delta: f64| -> Vec<f64> {
        let mut q = p.to_vec();
        q[i] += delta;
        q
    };
    let plus = fd_partial(f, &shifted(p, h), &inner, Some(h));
    let minus = fd_partial(f, &shifted(p, -h), &inner, Some(h));
    (plus - minus) / (2.0 * h)
}
