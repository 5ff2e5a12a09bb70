//! Truncated Taylor jets: exact mixed partial derivatives up to order 4 in
//! up to 4 variables.
//!
//! A [`Jet`] stores the *raw* partial derivatives `∂^α f(p)` indexed by
//! multi-index `α`, not the Taylor coefficients `∂^α f(p)/α!`. Raw partials
//! keep curvature assembly index-transparent: the coefficient tables can be
//! read directly as `∂_{x^i}`-values wherever a formula calls for them. The
//! Leibniz rule therefore carries binomial weights, and composition with an
//! elementary function converts through factorials internally.
//!
//! Multi-indices of total degree `≤ order` are stored graded (degree 0
//! first), within a degree in lexicographic order of `(α₁, …, α_d)`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Float;

use crate::expr::{Expr, Func, Var};

pub const MAX_ORDER: usize = 4;
pub const MAX_DIM: usize = 4;

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Number of compositions of `m` into `parts` non-negative integers.
fn comp_count(m: usize, parts: usize) -> usize {
    if parts == 0 {
        return if m == 0 { 1 } else { 0 };
    }
    binom(m + parts - 1, parts - 1)
}

/// Number of multi-indices with `dim` entries and total degree `≤ order`.
pub fn table_len(dim: usize, order: usize) -> usize {
    binom(dim + order, dim)
}

/// Enumerate all multi-indices `|α| ≤ order` in storage order.
pub fn multi_indices(dim: usize, order: usize) -> Vec<[u8; MAX_DIM]> {
    let mut out = Vec::with_capacity(table_len(dim, order));
    let mut cur = [0u8; MAX_DIM];
    for degree in 0..=order {
        push_degree(dim, degree, 0, &mut cur, &mut out);
    }
    out
}

fn push_degree(dim: usize, rem: usize, part: usize, cur: &mut [u8; MAX_DIM], out: &mut Vec<[u8; MAX_DIM]>) {
    if part == dim {
        if rem == 0 {
            out.push(*cur);
        }
        return;
    }
    if part == dim - 1 {
        cur[part] = rem as u8;
        out.push(*cur);
        cur[part] = 0;
        return;
    }
    for v in 0..=rem {
        cur[part] = v as u8;
        push_degree(dim, rem - v, part + 1, cur, out);
    }
    cur[part] = 0;
}

/// Storage position of multi-index `alpha` in the table for `dim` variables.
pub fn position(dim: usize, alpha: &[u8; MAX_DIM]) -> usize {
    let total: usize = alpha[..dim].iter().map(|&a| a as usize).sum();
    let mut pos = 0;
    for d in 0..total {
        pos += comp_count(d, dim);
    }
    let mut rem = total;
    for j in 0..dim {
        let parts_left = dim - j - 1;
        for v in 0..alpha[j] as usize {
            pos += comp_count(rem - v, parts_left);
        }
        rem -= alpha[j] as usize;
    }
    pos
}

const FACT: [f64; 5] = [1.0, 1.0, 2.0, 6.0, 24.0];

/// Evaluation failure of an expression or jet operation.
#[derive(Clone, Debug, PartialEq)]
pub enum EvalError {
    /// An elementary function left its domain (`log`/`sqrt` of a
    /// non-positive value, division by zero, fractional power of a
    /// non-positive base).
    DomainViolation { what: &'static str, value: f64 },
    /// A coordinate outside the evaluation context was referenced.
    UnboundVariable(Var),
    /// The computation produced a NaN or infinity.
    NonFinite,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::DomainViolation { what, value } => {
                write!(f, "domain violation: {} at value {}", what, value)
            }
            EvalError::UnboundVariable(v) => {
                write!(f, "variable {} not bound in this context", v.name())
            }
            EvalError::NonFinite => write!(f, "non-finite result"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for EvalError {}

/// A truncated jet: raw partial derivatives `∂^α f(p)` for `|α| ≤ order`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    dim: usize,
    order: usize,
    c: Vec<f64>,
}

impl Jet {
    pub fn constant(value: f64, dim: usize, order: usize) -> Jet {
        let mut c = vec![0.0; table_len(dim, order)];
        c[0] = value;
        Jet { dim, order, c }
    }

    /// The jet of the coordinate function `x_i` at a point with `x_i = value`.
    pub fn variable(value: f64, index: usize, dim: usize, order: usize) -> Jet {
        let mut j = Jet::constant(value, dim, order);
        if order >= 1 {
            let mut alpha = [0u8; MAX_DIM];
            alpha[index] = 1;
            let pos = position(dim, &alpha);
            j.c[pos] = 1.0;
        }
        j
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// Raw partial derivative for the given multi-index.
    pub fn partial(&self, alpha: &[usize]) -> f64 {
        let mut a = [0u8; MAX_DIM];
        for (i, &v) in alpha.iter().enumerate() {
            a[i] = v as u8;
        }
        self.c[position(self.dim, &a)]
    }

    /// Overwrite one raw partial derivative.
    pub fn set_partial(&mut self, alpha: &[usize], value: f64) {
        let mut a = [0u8; MAX_DIM];
        for (i, &v) in alpha.iter().enumerate() {
            a[i] = v as u8;
        }
        let pos = position(self.dim, &a);
        self.c[pos] = value;
    }

    /// First partial with respect to coordinate `i`.
    pub fn d(&self, i: usize) -> f64 {
        let mut a = [0u8; MAX_DIM];
        a[i] = 1;
        self.c[position(self.dim, &a)]
    }

    /// Second partial `∂_i ∂_j`.
    pub fn d2(&self, i: usize, j: usize) -> f64 {
        let mut a = [0u8; MAX_DIM];
        a[i] += 1;
        a[j] += 1;
        self.c[position(self.dim, &a)]
    }

    pub fn truncate(&self, order: usize) -> Jet {
        if order >= self.order {
            return self.clone();
        }
        Jet {
            dim: self.dim,
            order,
            c: self.c[..table_len(self.dim, order)].to_vec(),
        }
    }

    /// The jet of `∂_i f`, one order lower.
    pub fn partial_jet(&self, i: usize) -> Jet {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let order = self.order - 1;
        let table = multi_indices(self.dim, order);
        let mut c = Vec::with_capacity(table.len());
        for mut alpha in table {
            alpha[i] += 1;
            c.push(self.c[position(self.dim, &alpha)]);
        }
        Jet {
            dim: self.dim,
            order,
            c,
        }
    }

    /// Re-embed into a larger variable context; the new coordinates carry
    /// zero partials.
    pub fn embed(&self, new_dim: usize) -> Jet {
        assert!(new_dim >= self.dim);
        if new_dim == self.dim {
            return self.clone();
        }
        let mut out = Jet::constant(0.0, new_dim, self.order);
        for (pos, alpha) in multi_indices(self.dim, self.order).iter().enumerate() {
            out.c[position(new_dim, alpha)] = self.c[pos];
        }
        out
    }

    fn zip_order(&self, other: &Jet) -> usize {
        assert_eq!(self.dim, other.dim, "jet dimension mismatch");
        self.order.min(other.order)
    }

    pub fn add(&self, other: &Jet) -> Jet {
        let order = self.zip_order(other);
        let n = table_len(self.dim, order);
        let c = (0..n).map(|i| self.c[i] + other.c[i]).collect();
        Jet {
            dim: self.dim,
            order,
            c,
        }
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        let order = self.zip_order(other);
        let n = table_len(self.dim, order);
        let c = (0..n).map(|i| self.c[i] - other.c[i]).collect();
        Jet {
            dim: self.dim,
            order,
            c,
        }
    }

    pub fn neg(&self) -> Jet {
        self.scale(-1.0)
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            dim: self.dim,
            order: self.order,
            c: self.c.iter().map(|v| v * s).collect(),
        }
    }

    /// Leibniz product: `∂^α(fg) = Σ_{β≤α} C(α,β) ∂^β f ∂^{α−β} g`.
    pub fn mul(&self, other: &Jet) -> Jet {
        let order = self.zip_order(other);
        let dim = self.dim;
        let table = multi_indices(dim, order);
        let mut c = vec![0.0; table.len()];
        for (pos, alpha) in table.iter().enumerate() {
            let mut acc = 0.0;
            let mut beta = [0u8; MAX_DIM];
            loop {
                let mut coeff = 1.0;
                let mut gamma = [0u8; MAX_DIM];
                for i in 0..dim {
                    coeff *= binom(alpha[i] as usize, beta[i] as usize) as f64;
                    gamma[i] = alpha[i] - beta[i];
                }
                acc += coeff * self.c[position(dim, &beta)] * other.c[position(dim, &gamma)];
                // advance beta within the box 0..=alpha
                let mut i = 0;
                loop {
                    if i == dim {
                        break;
                    }
                    if beta[i] < alpha[i] {
                        beta[i] += 1;
                        break;
                    }
                    beta[i] = 0;
                    i += 1;
                }
                if i == dim {
                    break;
                }
            }
            c[pos] = acc;
        }
        Jet {
            dim,
            order,
            c,
        }
    }

    /// Compose with a univariate function given its derivatives
    /// `derivs[k] = f^{(k)}(self.value())`, `k = 0..=order`.
    pub fn compose(&self, derivs: &[f64]) -> Jet {
        let order = self.order;
        let mut w = self.clone();
        w.c[0] = 0.0;
        let mut out = Jet::constant(derivs[0], self.dim, order);
        let mut wp = w.clone();
        for k in 1..=order {
            out = out.add(&wp.scale(derivs[k] / FACT[k]));
            if k < order {
                wp = wp.mul(&w);
            }
        }
        out
    }

    pub fn recip(&self) -> Result<Jet, EvalError> {
        let u0 = self.value();
        if u0 == 0.0 {
            return Err(EvalError::DomainViolation {
                what: "division by zero",
                value: u0,
            });
        }
        let mut derivs = [0.0; MAX_ORDER + 1];
        let mut p = 1.0 / u0;
        let mut sign = 1.0;
        for k in 0..=self.order {
            derivs[k] = sign * FACT[k] * p;
            p /= u0;
            sign = -sign;
        }
        Ok(self.compose(&derivs[..=self.order]))
    }

    pub fn div(&self, other: &Jet) -> Result<Jet, EvalError> {
        let order = self.zip_order(other);
        Ok(self.truncate(order).mul(&other.truncate(order).recip()?))
    }

    pub fn exp(&self) -> Jet {
        let e = Float::exp(self.value());
        let derivs = [e; MAX_ORDER + 1];
        self.compose(&derivs[..=self.order])
    }

    pub fn ln(&self) -> Result<Jet, EvalError> {
        let u0 = self.value();
        if u0 <= 0.0 {
            return Err(EvalError::DomainViolation {
                what: "log of non-positive value",
                value: u0,
            });
        }
        let mut derivs = [0.0; MAX_ORDER + 1];
        derivs[0] = Float::ln(u0);
        let mut p = 1.0 / u0;
        let mut sign = 1.0;
        for k in 1..=self.order {
            derivs[k] = sign * FACT[k - 1] * p;
            p /= u0;
            sign = -sign;
        }
        Ok(self.compose(&derivs[..=self.order]))
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = (Float::sin(self.value()), Float::cos(self.value()));
        let derivs = [s, c, -s, -c, s];
        self.compose(&derivs[..=self.order])
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = (Float::sin(self.value()), Float::cos(self.value()));
        let derivs = [c, -s, -c, s, c];
        self.compose(&derivs[..=self.order])
    }

    pub fn sqrt(&self) -> Result<Jet, EvalError> {
        let u0 = self.value();
        if u0 <= 0.0 {
            return Err(EvalError::DomainViolation {
                what: "sqrt of non-positive value",
                value: u0,
            });
        }
        self.powf(0.5)
    }

    /// Integer power; admits any base (negative exponent requires a
    /// nonzero base).
    pub fn powi(&self, n: i64) -> Result<Jet, EvalError> {
        if n == 0 {
            return Ok(Jet::constant(1.0, self.dim, self.order));
        }
        let m = n.unsigned_abs();
        let mut acc = self.clone();
        for _ in 1..m {
            acc = acc.mul(self);
        }
        if n < 0 {
            acc.recip()
        } else {
            Ok(acc)
        }
    }

    /// Real power; requires a positive base at the evaluation point.
    pub fn powf(&self, a: f64) -> Result<Jet, EvalError> {
        let u0 = self.value();
        if u0 <= 0.0 {
            return Err(EvalError::DomainViolation {
                what: "real power of non-positive base",
                value: u0,
            });
        }
        let mut derivs = [0.0; MAX_ORDER + 1];
        let mut coeff = 1.0;
        for k in 0..=self.order {
            derivs[k] = coeff * Float::powf(u0, a - k as f64);
            coeff *= a - k as f64;
        }
        Ok(self.compose(&derivs[..=self.order]))
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|v| v.is_finite())
    }
}

/// Whether an exponent should take the integer-power path.
fn as_integer_exponent(e: f64) -> Option<i64> {
    let r = Float::round(e);
    if (e - r).abs() < 1e-12 && Float::abs(r) <= 64.0 {
        Some(r as i64)
    } else {
        None
    }
}

/// Evaluate an expression as a jet of the given order at `p`. The context
/// dimension is `p.len()`.
pub fn eval_jet(e: &Expr, p: &[f64], order: usize) -> Result<Jet, EvalError> {
    assert!(order <= MAX_ORDER);
    assert!((1..=MAX_DIM).contains(&p.len()));
    let j = eval_rec(e, p, order)?;
    if !j.is_finite() {
        return Err(EvalError::NonFinite);
    }
    Ok(j)
}

fn eval_rec(e: &Expr, p: &[f64], order: usize) -> Result<Jet, EvalError> {
    let dim = p.len();
    match e {
        Expr::Num(v) => Ok(Jet::constant(*v, dim, order)),
        Expr::Var(v) => {
            let i = v.index();
            if i >= dim {
                return Err(EvalError::UnboundVariable(*v));
            }
            Ok(Jet::variable(p[i], i, dim, order))
        }
        Expr::Add(a, b) => Ok(eval_rec(a, p, order)?.add(&eval_rec(b, p, order)?)),
        Expr::Sub(a, b) => Ok(eval_rec(a, p, order)?.sub(&eval_rec(b, p, order)?)),
        Expr::Mul(a, b) => Ok(eval_rec(a, p, order)?.mul(&eval_rec(b, p, order)?)),
        Expr::Div(a, b) => eval_rec(a, p, order)?.div(&eval_rec(b, p, order)?),
        Expr::Neg(a) => Ok(eval_rec(a, p, order)?.neg()),
        Expr::Pow(a, exp) => {
            let base = eval_rec(a, p, order)?;
            match as_integer_exponent(*exp) {
                Some(n) => base.powi(n),
                None => base.powf(*exp),
            }
        }
        Expr::Func(f, a) => {
            let arg = eval_rec(a, p, order)?;
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

/// Plain value of an expression at `p`.
pub fn eval(e: &Expr, p: &[f64]) -> Result<f64, EvalError> {
    Ok(eval_jet(e, p, 0)?.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::expr;

    #[test]
    fn table_positions_are_consistent() {
        for dim in 1..=4 {
            for order in 0..=4 {
                let table = multi_indices(dim, order);
                assert_eq!(table.len(), table_len(dim, order));
                for (i, alpha) in table.iter().enumerate() {
                    assert_eq!(position(dim, alpha), i, "dim {} order {}", dim, order);
                }
            }
        }
    }

    #[test]
    fn exp_jet_at_origin() {
        let j = eval_jet(&expr("exp(x1)"), &[0.0, 0.0], 2).unwrap();
        assert_eq!(j.value(), 1.0);
        assert_eq!(j.d(0), 1.0);
        assert_eq!(j.d2(0, 0), 1.0);
        assert_eq!(j.d(1), 0.0);
        assert_eq!(j.d2(0, 1), 0.0);
        assert_eq!(j.d2(1, 1), 0.0);
    }

    #[test]
    fn polynomial_jet() {
        let j = eval_jet(&expr("x1^2*x2"), &[2.0, 3.0], 2).unwrap();
        assert_eq!(j.value(), 12.0);
        assert_eq!(j.d(0), 12.0);
        assert_eq!(j.d(1), 4.0);
        assert_eq!(j.d2(0, 0), 6.0);
        assert_eq!(j.d2(0, 1), 4.0);
        assert_eq!(j.d2(1, 1), 0.0);
    }

    #[test]
    fn reciprocal_jet() {
        // expected values frozen from the central finite-difference oracle
        let j = eval_jet(&expr("x1^-1"), &[2.0, 0.0], 3).unwrap();
        assert!((j.value() - 0.5).abs() < 1e-15);
        assert!((j.d(0) + 0.25).abs() < 1e-15);
        assert!((j.d2(0, 0) - 0.25).abs() < 1e-15);
        assert!((j.partial(&[3, 0]) + 0.375).abs() < 1e-15);
    }

    #[test]
    fn division_by_zero_is_domain_error() {
        let err = eval_jet(&expr("1/x1"), &[0.0, 0.0], 1).unwrap_err();
        assert!(matches!(err, EvalError::DomainViolation { .. }));
        let err = eval_jet(&expr("log(x1)"), &[-1.0, 0.0], 1).unwrap_err();
        assert!(matches!(err, EvalError::DomainViolation { .. }));
    }

    #[test]
    fn partial_jet_shifts_indices() {
        let j = eval_jet(&expr("x1^3*x2"), &[2.0, 5.0], 4).unwrap();
        let dj = j.partial_jet(0);
        // ∂1(x1^3 x2) = 3 x1^2 x2
        assert!((dj.value() - 60.0).abs() < 1e-12);
        assert!((dj.d(0) - 60.0).abs() < 1e-12);
        assert!((dj.d(1) - 12.0).abs() < 1e-12);
    }

    #[test]
    fn embed_keeps_partials() {
        let j = eval_jet(&expr("x1*x2^2"), &[3.0, 2.0], 2).unwrap();
        let e = j.embed(4);
        assert_eq!(e.value(), 12.0);
        assert_eq!(e.d(0), 4.0);
        assert_eq!(e.d(1), 12.0);
        assert_eq!(e.d(2), 0.0);
        assert_eq!(e.d2(1, 1), 6.0);
    }

    #[test]
    fn order_truncation_is_min() {
        let a = eval_jet(&expr("x1^2"), &[1.0, 1.0], 3).unwrap();
        let b = eval_jet(&expr("x2"), &[1.0, 1.0], 2).unwrap();
        assert_eq!(a.mul(&b).order(), 2);
    }
}
