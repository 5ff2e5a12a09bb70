//! Torsion-free affine surfaces: Christoffel data, Ricci tensor and its
//! symmetric/skew split, covariant derivatives, recurrence detection,
//! projective flatness, and the affine soliton / quasi-Einstein residuals.
//!
//! Sign convention for the Ricci tensor (trace of the curvature operator):
//!
//! ```text
//! ρ_{jk} = ∂_i Γ_{jk}^i − ∂_j Γ_{ik}^i + Γ_{is}^i Γ_{jk}^s − Γ_{js}^i Γ_{ik}^s
//! ```
//!
//! pinned by two calibration anchors (see `tests/`): on surfaces with
//! `Γ₁₁¹ = Γ₁₁² = Γ₁₂² = 0`, `Γ₂₂² = Γ₁₂¹` the symmetrization is
//! `ρ_s = (∂₁Γ₂₂¹ − ∂₂Γ₁₂¹) dx²⊗dx²`, and the half-plane model with
//! `C₁₁² = C₁₂¹ = C₂₂² = 1` has `ρ = (x¹)⁻² dx¹∧dx²` with
//! `dx¹∧dx² = dx¹⊗dx² − dx²⊗dx¹`.

use alloc::vec::Vec;
use core::fmt;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::expr::{Expr, Var};
use crate::field::ScalarField;
use crate::jet::{eval_jet, EvalError, Jet};

/// Rectangular sampling domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Box2 {
    pub x1: [f64; 2],
    pub x2: [f64; 2],
}

impl Box2 {
    pub fn new(x1: [f64; 2], x2: [f64; 2]) -> Box2 {
        assert!(x1[0] < x1[1] && x2[0] < x2[1], "degenerate domain box");
        Box2 { x1, x2 }
    }

    pub fn center(&self) -> [f64; 2] {
        [
            0.5 * (self.x1[0] + self.x1[1]),
            0.5 * (self.x2[0] + self.x2[1]),
        ]
    }

    /// `n × n` uniformly spaced interior points (deterministic order:
    /// row-major in `x¹` then `x²`).
    pub fn grid(&self, n: usize) -> Vec<[f64; 2]> {
        let mut pts = Vec::with_capacity(n * n);
        for i in 0..n {
            let u = self.x1[0] + (i as f64 + 1.0) * (self.x1[1] - self.x1[0]) / (n as f64 + 1.0);
            for j in 0..n {
                let v =
                    self.x2[0] + (j as f64 + 1.0) * (self.x2[1] - self.x2[0]) / (n as f64 + 1.0);
                pts.push([u, v]);
            }
        }
        pts
    }

    pub fn contains(&self, p: &[f64; 2]) -> bool {
        p[0] >= self.x1[0] && p[0] <= self.x1[1] && p[1] >= self.x2[0] && p[1] <= self.x2[1]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceKind {
    /// Constant Christoffel symbols on ℝ².
    TypeA,
    /// `Γ_{ij}^k = C_{ij}^k / x¹` on the half-plane `x¹ > 0`.
    TypeB,
    General,
}

/// Component order for the six independent Christoffel symbols.
/// `Γ₁₁¹, Γ₁₁², Γ₁₂¹, Γ₁₂², Γ₂₂¹, Γ₂₂²` (lower indices symmetric).
pub const GAMMA_NAMES: [&str; 6] = ["G11_1", "G11_2", "G12_1", "G12_2", "G22_1", "G22_2"];

#[derive(Clone, Debug)]
pub struct AffineSurface {
    pub kind: SurfaceKind,
    /// In the order of [`GAMMA_NAMES`].
    pub gamma: [Expr; 6],
    /// For Type A / Type B: the six defining constants.
    pub constants: Option<[f64; 6]>,
    pub domain: Box2,
}

/// Failures of geometric operations beyond plain evaluation.
#[derive(Clone, Debug)]
pub enum GeomError {
    Eval(EvalError),
    /// A stated precondition does not hold (message says which).
    Degenerate(&'static str),
    /// `det ρ_s` changes sign across the sampling grid.
    InconsistentSign { plus: [f64; 2], minus: [f64; 2] },
}

impl From<EvalError> for GeomError {
    fn from(e: EvalError) -> GeomError {
        GeomError::Eval(e)
    }
}

impl fmt::Display for GeomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeomError::Eval(e) => write!(f, "{}", e),
            GeomError::Degenerate(msg) => write!(f, "precondition failed: {}", msg),
            GeomError::InconsistentSign { plus, minus } => write!(
                f,
                "det ρ_s changes sign: positive at ({}, {}), negative at ({}, {})",
                plus[0], plus[1], minus[0], minus[1]
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GeomError {}

/// Ricci data at a point.
#[derive(Clone, Copy, Debug)]
pub struct RicciData {
    pub rho: [[f64; 2]; 2],
    pub rho_s: [[f64; 2]; 2],
    pub rho_a: [[f64; 2]; 2],
    pub det_s: f64,
}

impl RicciData {
    /// Numerical rank of `ρ_s` under a relative eigenvalue threshold.
    pub fn rank_s(&self, tol: f64) -> usize {
        let (l1, l2) = sym2_eigenvalues(&self.rho_s);
        let scale = l1.abs().max(l2.abs()).max(1.0);
        [l1, l2].iter().filter(|l| l.abs() > tol * scale).count()
    }

    /// Sign of `det ρ_s` under a tolerance: −1, 0, or +1.
    pub fn det_sign(&self, tol: f64) -> i8 {
        let scale = frob2(&self.rho_s).max(1.0);
        if self.det_s > tol * scale * scale {
            1
        } else if self.det_s < -tol * scale * scale {
            -1
        } else {
            0
        }
    }
}

fn sym2_eigenvalues(m: &[[f64; 2]; 2]) -> (f64, f64) {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    (0.5 * (tr - disc), 0.5 * (tr + disc))
}

fn frob2(m: &[[f64; 2]; 2]) -> f64 {
    m.iter()
        .flatten()
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt()
}

/// A (1,1)-tensor field `T^i_j` with scalar-field components.
#[derive(Clone, Debug)]
pub struct Tensor11Field {
    /// `comp[i][j] = T^i_j`.
    pub comp: [[ScalarField; 2]; 2],
}

impl Tensor11Field {
    pub fn constant(m: [[f64; 2]; 2]) -> Tensor11Field {
        Tensor11Field {
            comp: m.map(|row| row.map(ScalarField::constant)),
        }
    }

    pub fn from_exprs(m: [[Expr; 2]; 2]) -> Tensor11Field {
        Tensor11Field {
            comp: m.map(|row| row.map(ScalarField::Expr)),
        }
    }

    pub fn eval(&self, p: &[f64; 2]) -> Result<[[f64; 2]; 2], EvalError> {
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = self.comp[i][j].eval(p)?;
            }
        }
        Ok(out)
    }

    pub fn jets(&self, p: &[f64; 2], order: usize) -> Result<[[Jet; 2]; 2], EvalError> {
        Ok([
            [
                self.comp[0][0].jet(p, order)?,
                self.comp[0][1].jet(p, order)?,
            ],
            [
                self.comp[1][0].jet(p, order)?,
                self.comp[1][1].jet(p, order)?,
            ],
        ])
    }

    pub fn scale(&self, s: f64) -> Tensor11Field {
        Tensor11Field {
            comp: self.comp.clone().map(|row| row.map(|c| c.scale(s))),
        }
    }
}

/// A symmetric bilinear field: stores `b₁₁, b₁₂, b₂₂`, reads `b₂₁ = b₁₂`.
#[derive(Clone, Debug)]
pub struct SymBilinField {
    pub comp: [ScalarField; 3],
}

impl SymBilinField {
    pub fn constant(b11: f64, b12: f64, b22: f64) -> SymBilinField {
        SymBilinField {
            comp: [b11, b12, b22].map(ScalarField::constant),
        }
    }

    pub fn zero() -> SymBilinField {
        SymBilinField::constant(0.0, 0.0, 0.0)
    }

    pub fn get(&self, i: usize, j: usize) -> &ScalarField {
        &self.comp[i + j]
    }

    pub fn eval(&self, p: &[f64; 2]) -> Result<[[f64; 2]; 2], EvalError> {
        let b11 = self.comp[0].eval(p)?;
        let b12 = self.comp[1].eval(p)?;
        let b22 = self.comp[2].eval(p)?;
        Ok([[b11, b12], [b12, b22]])
    }
}

/// A 1-form field `ω = ω₁ dx¹ + ω₂ dx²`.
#[derive(Clone, Debug)]
pub struct OneFormField {
    pub comp: [ScalarField; 2],
}

impl OneFormField {
    pub fn eval(&self, p: &[f64; 2]) -> Result<[f64; 2], EvalError> {
        Ok([self.comp[0].eval(p)?, self.comp[1].eval(p)?])
    }
}

/// Map symmetric lower indices `(i,j)` and upper `k` to the storage slot.
pub fn gamma_slot(i: usize, j: usize, k: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    (a + b) * 2 + k
}

impl AffineSurface {
    pub fn type_a(g: [f64; 6], domain: Box2) -> AffineSurface {
        AffineSurface {
            kind: SurfaceKind::TypeA,
            gamma: g.map(Expr::Num),
            constants: Some(g),
            domain,
        }
    }

    /// Type B: `Γ_{ij}^k = C_{ij}^k / x¹` on `x¹ > 0`.
    pub fn type_b(c: [f64; 6], domain: Box2) -> AffineSurface {
        assert!(domain.x1[0] > 0.0, "Type B domain requires x¹ > 0");
        AffineSurface {
            kind: SurfaceKind::TypeB,
            gamma: c.map(|v| Expr::div(Expr::Num(v), Expr::Var(Var::X1))),
            constants: Some(c),
            domain,
        }
    }

    pub fn general(gamma: [Expr; 6], domain: Box2) -> AffineSurface {
        AffineSurface {
            kind: SurfaceKind::General,
            gamma,
            constants: None,
            domain,
        }
    }

    /// `Γ_{ij}^k` (indices 0-based, lower pair symmetric).
    pub fn gamma(&self, i: usize, j: usize, k: usize) -> &Expr {
        &self.gamma[gamma_slot(i, j, k)]
    }

    /// Jets of all six Christoffel components at `p`.
    pub fn gamma_jets(&self, p: &[f64; 2], order: usize) -> Result<[Jet; 6], EvalError> {
        Ok([
            eval_jet(&self.gamma[0], p, order)?,
            eval_jet(&self.gamma[1], p, order)?,
            eval_jet(&self.gamma[2], p, order)?,
            eval_jet(&self.gamma[3], p, order)?,
            eval_jet(&self.gamma[4], p, order)?,
            eval_jet(&self.gamma[5], p, order)?,
        ])
    }

    /// Christoffel values `Γ_{ij}^k` at `p` as `[i][j][k]`.
    pub fn gamma_at(&self, p: &[f64; 2]) -> Result<[[[f64; 2]; 2]; 2], EvalError> {
        let j = self.gamma_jets(p, 0)?;
        let mut out = [[[0.0; 2]; 2]; 2];
        for i in 0..2 {
            for jj in 0..2 {
                for k in 0..2 {
                    out[i][jj][k] = j[gamma_slot(i, jj, k)].value();
                }
            }
        }
        Ok(out)
    }

    /// The Ricci tensor as symbolic expressions `rho[j][k]`.
    pub fn ricci_expr(&self) -> [[Expr; 2]; 2] {
        let g = |i: usize, j: usize, k: usize| self.gamma(i, j, k).clone();
        let d = |e: Expr, v: usize| e.derivative(if v == 0 { Var::X1 } else { Var::X2 });
        let mut rho: [[Expr; 2]; 2] = [
            [Expr::Num(0.0), Expr::Num(0.0)],
            [Expr::Num(0.0), Expr::Num(0.0)],
        ];
        for j in 0..2 {
            for k in 0..2 {
                let mut acc = Expr::Num(0.0);
                for i in 0..2 {
                    acc = Expr::add(acc, d(g(j, k, i), i));
                    acc = Expr::sub(acc, d(g(i, k, i), j));
                    for s in 0..2 {
                        acc = Expr::add(acc, Expr::mul(g(i, s, i), g(j, k, s)));
                        acc = Expr::sub(acc, Expr::mul(g(j, s, i), g(i, k, s)));
                    }
                }
                rho[j][k] = acc;
            }
        }
        rho
    }

    /// Symbolic `ρ_s` components `(ρ_{s,11}, ρ_{s,12}, ρ_{s,22})`.
    pub fn ricci_s_expr(&self) -> [Expr; 3] {
        let r = self.ricci_expr();
        [
            r[0][0].clone(),
            Expr::mul(
                Expr::Num(0.5),
                Expr::add(r[0][1].clone(), r[1][0].clone()),
            ),
            r[1][1].clone(),
        ]
    }

    /// `ρ_s` as a symmetric bilinear field.
    pub fn ricci_s_field(&self) -> SymBilinField {
        SymBilinField {
            comp: self.ricci_s_expr().map(ScalarField::Expr),
        }
    }

    /// Ricci tensor and its split at `p`, from order-1 Christoffel jets.
    pub fn ricci_at(&self, p: &[f64; 2]) -> Result<RicciData, EvalError> {
        let jets = self.gamma_jets(p, 1)?;
        let g = |i: usize, j: usize, k: usize| jets[gamma_slot(i, j, k)].value();
        let dg = |v: usize, i: usize, j: usize, k: usize| jets[gamma_slot(i, j, k)].d(v);
        let mut rho = [[0.0; 2]; 2];
        for j in 0..2 {
            for k in 0..2 {
                let mut acc = 0.0;
                for i in 0..2 {
                    acc += dg(i, j, k, i) - dg(j, i, k, i);
                    for s in 0..2 {
                        acc += g(i, s, i) * g(j, k, s) - g(j, s, i) * g(i, k, s);
                    }
                }
                rho[j][k] = acc;
            }
        }
        let mut rho_s = [[0.0; 2]; 2];
        let mut rho_a = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                rho_s[i][j] = 0.5 * (rho[i][j] + rho[j][i]);
                rho_a[i][j] = 0.5 * (rho[i][j] - rho[j][i]);
            }
        }
        let det_s = rho_s[0][0] * rho_s[1][1] - rho_s[0][1] * rho_s[1][0];
        Ok(RicciData {
            rho,
            rho_s,
            rho_a,
            det_s,
        })
    }

    /// Maximal numerical rank of `ρ_s` over the grid, plus the sign of
    /// `det ρ_s` (required consistent over the grid).
    pub fn ricci_rank(
        &self,
        grid: &[[f64; 2]],
        tol: f64,
    ) -> Result<(usize, i8), GeomError> {
        if grid.is_empty() {
            return Err(GeomError::Degenerate("empty grid"));
        }
        let mut rank = 0usize;
        let mut sign: i8 = 0;
        let mut sign_witness = grid[0];
        for p in grid {
            let r = self.ricci_at(p)?;
            rank = rank.max(r.rank_s(tol));
            let s = r.det_sign(tol);
            if s != 0 {
                if sign != 0 && s != sign {
                    let (plus, minus) = if s > 0 {
                        (*p, sign_witness)
                    } else {
                        (sign_witness, *p)
                    };
                    return Err(GeomError::InconsistentSign { plus, minus });
                }
                sign = s;
                sign_witness = *p;
            }
        }
        Ok((rank, sign))
    }

    /// Covariant derivative of a (1,1)-tensor field:
    /// `T^i_{j;k} = ∂_k T^i_j + Γ_{ks}^i T^s_j − Γ_{kj}^s T^i_s`,
    /// returned as `[i][j][k]`.
    pub fn covariant_derivative_11(
        &self,
        t: &Tensor11Field,
        p: &[f64; 2],
    ) -> Result<[[[f64; 2]; 2]; 2], EvalError> {
        let tj = t.jets(p, 1)?;
        let gam = self.gamma_at(p)?;
        let mut out = [[[0.0; 2]; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let mut acc = tj[i][j].d(k);
                    for s in 0..2 {
                        acc += gam[k][s][i] * tj[s][j].value() - gam[k][j][s] * tj[i][s].value();
                    }
                    out[i][j][k] = acc;
                }
            }
        }
        Ok(out)
    }

    /// Covariant derivative of a (possibly non-symmetric) bilinear field
    /// given by its order-1 component jets `b[i][j]` at `p`:
    /// `b_{ij;k} = ∂_k b_{ij} − Γ_{ki}^s b_{sj} − Γ_{kj}^s b_{is}`,
    /// returned as `[i][j][k]`.
    pub fn covariant_derivative_bilin_jets(
        &self,
        b: &[[Jet; 2]; 2],
        p: &[f64; 2],
    ) -> Result<[[[f64; 2]; 2]; 2], EvalError> {
        let gam = self.gamma_at(p)?;
        let mut out = [[[0.0; 2]; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let mut acc = b[i][j].d(k);
                    for s in 0..2 {
                        acc -= gam[k][i][s] * b[s][j].value() + gam[k][j][s] * b[i][s].value();
                    }
                    out[i][j][k] = acc;
                }
            }
        }
        Ok(out)
    }

    /// Covariant derivative of a symmetric bilinear field at `p`.
    pub fn covariant_derivative_02(
        &self,
        b: &SymBilinField,
        p: &[f64; 2],
    ) -> Result<[[[f64; 2]; 2]; 2], EvalError> {
        let b11 = b.comp[0].jet(p, 1)?;
        let b12 = b.comp[1].jet(p, 1)?;
        let b22 = b.comp[2].jet(p, 1)?;
        let jets = [[b11.clone(), b12.clone()], [b12, b22]];
        self.covariant_derivative_bilin_jets(&jets, p)
    }

    /// Pointwise recurrence form: least-squares `ω_k` with
    /// `b_{ij;k} = ω_k b_{ij}`. Returns `None` when the relative residual
    /// exceeds `tol` (not recurrent at `p`); errors when `b(p) ≈ 0`.
    pub fn recurrence_form(
        &self,
        b: &SymBilinField,
        p: &[f64; 2],
        tol: f64,
    ) -> Result<Option<[f64; 2]>, GeomError> {
        let bv = b.eval(p)?;
        let nb2: f64 = bv.iter().flatten().map(|v| v * v).sum();
        if nb2.sqrt() <= tol {
            return Err(GeomError::Degenerate(
                "recurrence form undefined where the tensor vanishes",
            ));
        }
        let db = self.covariant_derivative_02(b, p)?;
        let mut omega = [0.0; 2];
        let mut worst: f64 = 0.0;
        for k in 0..2 {
            let mut dot = 0.0;
            for i in 0..2 {
                for j in 0..2 {
                    dot += db[i][j][k] * bv[i][j];
                }
            }
            omega[k] = dot / nb2;
        }
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    worst = worst.max((db[i][j][k] - omega[k] * bv[i][j]).abs());
                }
            }
        }
        let scale = nb2.sqrt().max(1.0) * (1.0 + omega[0].abs().max(omega[1].abs()));
        if worst <= tol * scale {
            Ok(Some(omega))
        } else {
            Ok(None)
        }
    }

    /// Projective flatness: `ρ` symmetric and `∇ρ` totally symmetric on
    /// the grid. Returns the verdict and the worst symmetry residual.
    pub fn is_projectively_flat(
        &self,
        grid: &[[f64; 2]],
        tol: f64,
    ) -> Result<(bool, f64), GeomError> {
        if grid.is_empty() {
            return Err(GeomError::Degenerate("empty grid"));
        }
        let rho_expr = self.ricci_expr();
        let mut worst: f64 = 0.0;
        for p in grid {
            let r = self.ricci_at(p)?;
            for i in 0..2 {
                for j in 0..2 {
                    worst = worst.max(r.rho_a[i][j].abs());
                }
            }
            let jets = [
                [
                    eval_jet(&rho_expr[0][0], p, 1)?,
                    eval_jet(&rho_expr[0][1], p, 1)?,
                ],
                [
                    eval_jet(&rho_expr[1][0], p, 1)?,
                    eval_jet(&rho_expr[1][1], p, 1)?,
                ],
            ];
            let dr = self.covariant_derivative_bilin_jets(&jets, p)?;
            // total symmetry in (i, j, k)
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        worst = worst.max((dr[i][j][k] - dr[j][i][k]).abs());
                        worst = worst.max((dr[i][j][k] - dr[k][j][i]).abs());
                    }
                }
            }
        }
        Ok((worst <= tol, worst))
    }

    /// `Hess(f)_{ij} = ∂_i∂_j f − Γ_{ij}^k ∂_k f` at `p`.
    pub fn hessian(&self, f: &ScalarField, p: &[f64; 2]) -> Result<[[f64; 2]; 2], EvalError> {
        let fj = f.jet(p, 2)?;
        let gam = self.gamma_at(p)?;
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = fj.d2(i, j);
                for k in 0..2 {
                    acc -= gam[i][j][k] * fj.d(k);
                }
                out[i][j] = acc;
            }
        }
        Ok(out)
    }

    /// Affine gradient-soliton residual `Hess(f) + 2ρ_s` at `p`.
    pub fn affine_soliton_residual(
        &self,
        f: &ScalarField,
        p: &[f64; 2],
    ) -> Result<[[f64; 2]; 2], EvalError> {
        let h = self.hessian(f, p)?;
        let r = self.ricci_at(p)?;
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = h[i][j] + 2.0 * r.rho_s[i][j];
            }
        }
        Ok(out)
    }

    /// Affine quasi-Einstein residual `Hess(f) + 2ρ_s − μ df⊗df` at `p`.
    pub fn affine_qe_residual(
        &self,
        f: &ScalarField,
        mu: f64,
        p: &[f64; 2],
    ) -> Result<[[f64; 2]; 2], EvalError> {
        let mut out = self.affine_soliton_residual(f, p)?;
        let fj = f.jet(p, 1)?;
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] -= mu * fj.d(i) * fj.d(j);
            }
        }
        Ok(out)
    }

    /// Three equivalent conditions for a rank-one `ρ_s` with kernel along
    /// `∂₁` (coordinates pre-aligned): (a) `ρ_s` recurrent, (b) the kernel
    /// line is preserved by `∇`, (c) the kernel is spanned by a field `X`
    /// with `∇X = η⊗X`. Each is evaluated independently.
    pub fn observation_checks(
        &self,
        grid: &[[f64; 2]],
        tol: f64,
    ) -> Result<(bool, bool, bool), GeomError> {
        if grid.is_empty() {
            return Err(GeomError::Degenerate("empty grid"));
        }
        // precondition: rank-1 ρ_s with ρ_{s,11} ≈ ρ_{s,12} ≈ 0
        for p in grid {
            let r = self.ricci_at(p)?;
            if r.rank_s(1e-8) != 1 {
                return Err(GeomError::Degenerate("ρ_s must have rank 1 on the grid"));
            }
            let scale = frob2(&r.rho_s).max(1.0);
            if r.rho_s[0][0].abs() > 1e-7 * scale || r.rho_s[0][1].abs() > 1e-7 * scale {
                return Err(GeomError::Degenerate(
                    "kernel of ρ_s must be aligned with ∂₁ (ρ_{s,11} = ρ_{s,12} = 0)",
                ));
            }
        }
        let rho_s = self.ricci_s_field();
        let mut recurrent = true;
        let mut kernel_preserved = true;
        let mut kernel_recurrent_field = true;
        for p in grid {
            // (a): numeric recurrence solve
            if self.recurrence_form(&rho_s, p, tol)?.is_none() {
                recurrent = false;
            }
            let gam = self.gamma_at(p)?;
            // (b): ∇_k ∂₁ = Γ_{k1}^s ∂_s stays in span{∂₁} ⇔ Γ_{k1}^2 = 0
            if gam[0][0][1].abs() > tol || gam[1][0][1].abs() > tol {
                kernel_preserved = false;
            }
            // (c): X = ∂₁, candidate η_k = Γ_{k1}^1; residual is the
            // off-line component of ∇_k X
            let res = gam[0][0][1].hypot(gam[1][0][1]);
            if res > tol * (1.0 + gam[0][0][0].abs().max(gam[1][0][0].abs())) {
                kernel_recurrent_field = false;
            }
        }
        Ok((recurrent, kernel_preserved, kernel_recurrent_field))
    }

    /// Pull the surface through the constant linear change `x = L x̃`
    /// (old coordinates as functions of the new ones). The caller supplies
    /// the new sampling box.
    pub fn linear_change(&self, l: [[f64; 2]; 2], new_domain: Box2) -> AffineSurface {
        let det = l[0][0] * l[1][1] - l[0][1] * l[1][0];
        assert!(det.abs() > 1e-14, "singular coordinate change");
        let linv = [
            [l[1][1] / det, -l[0][1] / det],
            [-l[1][0] / det, l[0][0] / det],
        ];
        // substitution x_i = Σ_a L^i_a x̃_a
        let lin = |i: usize| {
            Expr::add(
                Expr::mul(Expr::Num(l[i][0]), Expr::Var(Var::X1)),
                Expr::mul(Expr::Num(l[i][1]), Expr::Var(Var::X2)),
            )
        };
        let subs = [lin(0), lin(1), Expr::Var(Var::Y1), Expr::Var(Var::Y2)];
        let mut gamma_new: [Expr; 6] = core::array::from_fn(|_| Expr::Num(0.0));
        for a in 0..2 {
            for b in a..2 {
                for c in 0..2 {
                    let mut acc = Expr::Num(0.0);
                    for i in 0..2 {
                        for j in 0..2 {
                            for k in 0..2 {
                                let coeff = linv[c][k] * l[i][a] * l[j][b];
                                if coeff != 0.0 {
                                    acc = Expr::add(
                                        acc,
                                        Expr::mul(
                                            Expr::Num(coeff),
                                            self.gamma(i, j, k).substitute(&subs),
                                        ),
                                    );
                                }
                            }
                        }
                    }
                    gamma_new[gamma_slot(a, b, c)] = acc;
                }
            }
        }
        let kind = if self.kind == SurfaceKind::TypeA {
            SurfaceKind::TypeA
        } else {
            SurfaceKind::General
        };
        AffineSurface {
            kind,
            gamma: gamma_new,
            constants: None,
            domain: new_domain,
        }
    }

    /// The same surface with the roles of `x¹` and `x²` exchanged.
    pub fn swap_coordinates(&self) -> AffineSurface {
        let subs = [
            Expr::Var(Var::X2),
            Expr::Var(Var::X1),
            Expr::Var(Var::Y1),
            Expr::Var(Var::Y2),
        ];
        let mut gamma_new: [Expr; 6] = core::array::from_fn(|_| Expr::Num(0.0));
        for a in 0..2 {
            for b in a..2 {
                for c in 0..2 {
                    gamma_new[gamma_slot(a, b, c)] =
                        self.gamma(1 - a, 1 - b, 1 - c).substitute(&subs);
                }
            }
        }
        AffineSurface {
            kind: SurfaceKind::General,
            gamma: gamma_new,
            constants: None,
            domain: Box2 {
                x1: self.domain.x2,
                x2: self.domain.x1,
            },
        }
    }
}
