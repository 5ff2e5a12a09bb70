//! Scalar fields on a surface domain.
//!
//! A [`ScalarField`] is either a closed-form expression, a numerically
//! reconstructed potential (a function known only through its gradient), or
//! an algebraic/functional combination of fields. All variants evaluate both
//! pointwise and as truncated jets; a potential contributes *exact* jets,
//! because every derivative of the potential is a derivative of one of its
//! gradient components — only the value itself needs quadrature.

use alloc::rc::Rc;
use alloc::string::String;
use core::fmt;

use crate::expr::{Expr, Func};
use crate::jet::{eval_jet, multi_indices, EvalError, Jet};

/// Relative tolerance for the potential's line-integral quadrature.
const QUAD_REL_TOL: f64 = 1e-12;

/// A function recovered from its gradient pair `(∂₁φ, ∂₂φ)` by line
/// integration from a base point. Requires the pair to satisfy the
/// integrability condition `∂₂(∂₁φ) = ∂₁(∂₂φ)` on the domain; the
/// constructor does not verify this, callers check it where it matters.
#[derive(Clone, Debug)]
pub struct Potential {
    pub label: String,
    pub grad1: ScalarField,
    pub grad2: ScalarField,
    pub base: [f64; 2],
    pub base_value: f64,
}

impl Potential {
    /// Value by integrating first along `x¹` at the base `x²`, then along
    /// `x²` at the target `x¹` (axis-parallel path from the base point).
    fn value(&self, p: &[f64]) -> Result<f64, EvalError> {
        let leg1 = adaptive_simpson(
            &|t| self.grad1.eval(&[t, self.base[1]]),
            self.base[0],
            p[0],
        )?;
        let leg2 = adaptive_simpson(&|t| self.grad2.eval(&[p[0], t]), self.base[1], p[1])?;
        Ok(self.base_value + leg1 + leg2)
    }

    fn jet(&self, p: &[f64], order: usize) -> Result<Jet, EvalError> {
        let mut out = Jet::constant(self.value(p)?, 2, order);
        if order == 0 {
            return Ok(out);
        }
        let g1 = self.grad1.jet(p, order - 1)?;
        let g2 = self.grad2.jet(p, order - 1)?;
        // ∂^α φ with α₁ ≥ 1 comes from ∂^{α−e₁}(∂₁φ); pure x²-partials from
        // ∂₂φ. These are exact — no differencing of the quadrature value.
        for alpha in multi_indices(2, order) {
            let a = [alpha[0] as usize, alpha[1] as usize];
            if a[0] >= 1 {
                out.set_partial(&a, g1.partial(&[a[0] - 1, a[1]]));
            } else if a[1] >= 1 {
                out.set_partial(&a, g2.partial(&[0, a[1] - 1]));
            }
        }
        Ok(out)
    }
}

/// Adaptive Simpson quadrature on the oriented interval from `a` to `b`.
fn adaptive_simpson<G>(g: &G, a: f64, b: f64) -> Result<f64, EvalError>
where
    G: Fn(f64) -> Result<f64, EvalError>,
{
    if a == b {
        return Ok(0.0);
    }
    let fa = g(a)?;
    let fb = g(b)?;
    let m = 0.5 * (a + b);
    let fm = g(m)?;
    let whole = simpson(a, b, fa, fm, fb);
    simpson_rec(g, a, b, fa, fm, fb, whole, QUAD_REL_TOL.max(1e-15), 50)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<G>(
    g: &G,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<f64, EvalError>
where
    G: Fn(f64) -> Result<f64, EvalError>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = g(lm)?;
    let frm = g(rm)?;
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    let scale = 1.0 + left.abs() + right.abs();
    if depth == 0 || delta.abs() <= 15.0 * tol * scale {
        return Ok(left + right + delta / 15.0);
    }
    Ok(simpson_rec(g, a, m, fa, flm, fm, left, tol * 0.5, depth - 1)?
        + simpson_rec(g, m, b, fm, frm, fb, right, tol * 0.5, depth - 1)?)
}

/// A scalar function of the surface coordinates `(x¹, x²)`, evaluable as a
/// value or as a truncated jet.
#[derive(Clone, Debug)]
pub enum ScalarField {
    Expr(Expr),
    Potential(Rc<Potential>),
    Add(Rc<ScalarField>, Rc<ScalarField>),
    Mul(Rc<ScalarField>, Rc<ScalarField>),
    Div(Rc<ScalarField>, Rc<ScalarField>),
    Neg(Rc<ScalarField>),
    Func(Func, Rc<ScalarField>),
}

impl ScalarField {
    pub fn constant(v: f64) -> ScalarField {
        ScalarField::Expr(Expr::Num(v))
    }

    pub fn potential(
        label: &str,
        grad1: ScalarField,
        grad2: ScalarField,
        base: [f64; 2],
        base_value: f64,
    ) -> ScalarField {
        ScalarField::Potential(Rc::new(Potential {
            label: String::from(label),
            grad1,
            grad2,
            base,
            base_value,
        }))
    }

    pub fn add(&self, other: &ScalarField) -> ScalarField {
        ScalarField::Add(Rc::new(self.clone()), Rc::new(other.clone()))
    }

    pub fn mul(&self, other: &ScalarField) -> ScalarField {
        ScalarField::Mul(Rc::new(self.clone()), Rc::new(other.clone()))
    }

    pub fn div(&self, other: &ScalarField) -> ScalarField {
        ScalarField::Div(Rc::new(self.clone()), Rc::new(other.clone()))
    }

    pub fn neg(&self) -> ScalarField {
        ScalarField::Neg(Rc::new(self.clone()))
    }

    pub fn scale(&self, s: f64) -> ScalarField {
        self.mul(&ScalarField::constant(s))
    }

    pub fn func(f: Func, arg: ScalarField) -> ScalarField {
        ScalarField::Func(f, Rc::new(arg))
    }

    pub fn eval(&self, p: &[f64; 2]) -> Result<f64, EvalError> {
        Ok(self.jet(p, 0)?.value())
    }

    pub fn jet(&self, p: &[f64], order: usize) -> Result<Jet, EvalError> {
        match self {
            ScalarField::Expr(e) => eval_jet(e, &[p[0], p[1]], order),
            ScalarField::Potential(pot) => pot.jet(p, order),
            ScalarField::Add(a, b) => Ok(a.jet(p, order)?.add(&b.jet(p, order)?)),
            ScalarField::Mul(a, b) => Ok(a.jet(p, order)?.mul(&b.jet(p, order)?)),
            ScalarField::Div(a, b) => a.jet(p, order)?.div(&b.jet(p, order)?),
            ScalarField::Neg(a) => Ok(a.jet(p, order)?.neg()),
            ScalarField::Func(f, a) => {
                let arg = a.jet(p, order)?;
                match f {
                    Func::Exp => Ok(arg.exp()),
                    Func::Log => arg.ln(),
                    Func::Sin => Ok(arg.sin()),
                    Func::Cos => Ok(arg.cos()),
                    Func::Sqrt => arg.sqrt(),
                }
            }
        }
    }
}

impl From<Expr> for ScalarField {
    fn from(e: Expr) -> ScalarField {
        ScalarField::Expr(e)
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarField::Expr(e) => write!(f, "{}", e),
            ScalarField::Potential(p) => write!(f, "{}", p.label),
            ScalarField::Add(a, b) => write!(f, "({} + {})", a, b),
            ScalarField::Mul(a, b) => write!(f, "({})*({})", a, b),
            ScalarField::Div(a, b) => write!(f, "({})/({})", a, b),
            ScalarField::Neg(a) => write!(f, "-({})", a),
            ScalarField::Func(func, a) => write!(f, "{}({})", func.name(), a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::expr;

    /// φ with ∇φ = (2 x¹ x², (x¹)² + cos(x²)); φ = (x¹)² x² + sin(x²).
    fn sample_potential() -> ScalarField {
        ScalarField::potential(
            "phi",
            ScalarField::Expr(expr("2*x1*x2")),
            ScalarField::Expr(expr("x1^2 + cos(x2)")),
            [0.0, 0.0],
            0.0,
        )
    }

    #[test]
    fn potential_value_matches_closed_form() {
        let phi = sample_potential();
        for &(x, y) in &[(0.5f64, 0.25f64), (-1.0, 2.0), (3.0, -0.75)] {
            let exact = x * x * y + y.sin();
            let got = phi.eval(&[x, y]).unwrap();
            assert!((got - exact).abs() < 1e-10, "at ({}, {}): {} vs {}", x, y, got, exact);
        }
    }

    #[test]
    fn potential_jets_are_exact() {
        let phi = sample_potential();
        let p = [0.8, -0.3];
        let j = phi.jet(&p, 3).unwrap();
        assert!((j.d(0) - 2.0 * p[0] * p[1]).abs() < 1e-12);
        assert!((j.d(1) - (p[0] * p[0] + p[1].cos())).abs() < 1e-12);
        assert!((j.d2(0, 0) - 2.0 * p[1]).abs() < 1e-12);
        assert!((j.d2(0, 1) - 2.0 * p[0]).abs() < 1e-12);
        assert!((j.d2(1, 1) + p[1].sin()).abs() < 1e-12);
        assert!((j.partial(&[2, 1]) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn function_of_potential() {
        // e^{-φ} with φ = x¹ x² (∇φ = (x², x¹))
        let phi = ScalarField::potential(
            "theta",
            ScalarField::Expr(expr("x2")),
            ScalarField::Expr(expr("x1")),
            [0.0, 0.0],
            0.0,
        );
        let f = ScalarField::func(Func::Exp, phi.neg());
        let p = [0.4, 1.3];
        let j = f.jet(&p, 2).unwrap();
        let e = (-p[0] * p[1]).exp();
        assert!((j.value() - e).abs() < 1e-10);
        assert!((j.d(0) + p[1] * e).abs() < 1e-10);
        assert!((j.d2(0, 1) - (p[0] * p[1] - 1.0) * e).abs() < 1e-9);
    }

    #[test]
    fn algebra_combinations() {
        let a = ScalarField::Expr(expr("x1^2"));
        let b = ScalarField::Expr(expr("1 + x2^2"));
        let f = a.mul(&b).add(&a.div(&b)).neg();
        let p = [2.0, 3.0];
        let exact = -(4.0 * 10.0 + 4.0 / 10.0);
        assert!((f.eval(&p).unwrap() - exact).abs() < 1e-12);
        let j = f.jet(&p, 1).unwrap();
        // ∂₁ = -(2 x¹ (1+x₂²) + 2 x¹/(1+x₂²))
        assert!((j.d(0) + (2.0 * 2.0 * 10.0 + 2.0 * 2.0 / 10.0)).abs() < 1e-12);
    }
}
