//! The modified Riemannian extension: a neutral-signature (2,2) Walker
//! metric on the cotangent bundle of an affine surface.
//!
//! In canonical coordinates `(x¹, x², y₁, y₂)` the metric is
//!
//! ```text
//! g = 2 dxⁱ∘dy_i + { y_r y_s Tʳ_i Tˢ_j − 2 y_r Γ_ij^r + φ_ij } dxⁱ∘dxʲ
//! ```
//!
//! with `dxⁱ∘dy_i` the symmetric product normalized so that
//! `g(∂_{xⁱ}, ∂_{y_j}) = δ_ij`. The block form `[[B, I], [I, 0]]` gives
//! `det g = 1` and the exact inverse `[[0, I], [I, −B]]`.
//!
//! Everything downstream of the metric — Christoffel symbols, curvature,
//! Ricci, Weyl, the self-dual/anti-self-dual split, the Bach tensor, and
//! the soliton / quasi-Einstein residuals — is computed through exact jets
//! of the metric components, never by numeric differencing.

use alloc::vec::Vec;

use crate::expr::{Expr, Var};
use crate::field::ScalarField;
use crate::jet::Jet;
use crate::parallel::KernelAxis;
use crate::surface::{gamma_slot, AffineSurface, GeomError, SymBilinField, Tensor11Field};

/// Default orientation sign for the volume form
/// `ε(∂_{x¹}, ∂_{x²}, ∂_{y₁}, ∂_{y₂})`, calibrated so that extensions of
/// `T = c·id` are self-dual (`W⁻ = 0`).
pub const DEFAULT_ORIENTATION: i8 = 1;

/// The modified Riemannian extension metric.
#[derive(Clone, Debug)]
pub struct WalkerMetric {
    pub surface: AffineSurface,
    pub t: Tensor11Field,
    pub phi: SymBilinField,
    /// +1 or −1; flips the Hodge star and thus swaps `W⁺ ↔ W⁻`.
    pub orientation: i8,
}

/// Pointwise curvature data of a [`WalkerMetric`].
#[derive(Clone, Debug)]
pub struct CurvaturePacket {
    /// `Γ^a_{bc}` of the Levi-Civita connection, `gamma[a][b][c]`.
    pub gamma: [[[f64; 4]; 4]; 4],
    /// Fully lowered curvature `R_{abcd} = g(R(∂_c, ∂_d)∂_b, ∂_a)`.
    pub riemann: [[[[f64; 4]; 4]; 4]; 4],
    pub ricci: [[f64; 4]; 4],
    /// Scalar curvature.
    pub tau: f64,
    /// Weyl conformal tensor, same index layout as `riemann`.
    pub weyl: [[[[f64; 4]; 4]; 4]; 4],
    /// Bach tensor `B_ij = ∇^k∇^ℓ W_{kijℓ} + ½ ρ^{kℓ} W_{kijℓ}`.
    pub bach: [[f64; 4]; 4],
    pub metric: [[f64; 4]; 4],
    pub metric_inv: [[f64; 4]; 4],
}

/// Result of splitting the Weyl tensor into Hodge-star eigenparts.
#[derive(Clone, Copy, Debug)]
pub struct WeylSplit {
    /// Sum of squared components of `W⁺`.
    pub plus_comp2: f64,
    /// Sum of squared components of `W⁻`.
    pub minus_comp2: f64,
    /// Indefinite norm `W⁺_{abcd} W⁺^{abcd}`.
    pub plus_norm: f64,
    /// Indefinite norm `W⁻_{abcd} W⁻^{abcd}`.
    pub minus_norm: f64,
}

/// Assemble the extension metric. `phi` and `t` default to zero.
pub fn build_extension(
    surface: &AffineSurface,
    phi: Option<SymBilinField>,
    t: Option<Tensor11Field>,
) -> WalkerMetric {
    WalkerMetric {
        surface: surface.clone(),
        t: t.unwrap_or_else(|| Tensor11Field::constant([[0.0; 2]; 2])),
        phi: phi.unwrap_or_else(SymBilinField::zero),
        orientation: DEFAULT_ORIENTATION,
    }
}

fn idx(a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * 4 + b) * 4 + c) * 4 + d
}

impl WalkerMetric {
    pub fn with_orientation(mut self, orientation: i8) -> WalkerMetric {
        assert!(orientation == 1 || orientation == -1);
        self.orientation = orientation;
        self
    }

    /// Does the base of the 4-point lie in the surface domain? Fiber
    /// coordinates are unrestricted.
    pub fn contains(&self, q: &[f64; 4]) -> bool {
        self.surface.domain.contains(&[q[0], q[1]])
    }

    /// Exact jets (in all 4 variables) of every metric component.
    pub fn metric_jets(&self, q: &[f64; 4], order: usize) -> Result<[[Jet; 4]; 4], GeomError> {
        let p = [q[0], q[1]];
        let tj2 = self.t.jets(&p, order)?;
        let gj2 = self.surface.gamma_jets(&p, order)?;
        // embed base jets into the 4-variable context (zero y-partials)
        let tj: [[Jet; 2]; 2] = core::array::from_fn(|i| core::array::from_fn(|j| tj2[i][j].embed(4)));
        let gj: Vec<Jet> = gj2.iter().map(|j| j.embed(4)).collect();
        let y: [Jet; 2] =
            core::array::from_fn(|r| Jet::variable(q[2 + r], 2 + r, 4, order));
        let mut out: [[Jet; 4]; 4] =
            core::array::from_fn(|_| core::array::from_fn(|_| Jet::constant(0.0, 4, order)));
        for i in 0..2 {
            for j in i..2 {
                let mut acc = self.phi.get(i, j).jet(&p, order)?.embed(4);
                for r in 0..2 {
                    for s in 0..2 {
                        // y_r y_s T^r_i T^s_j
                        acc = acc.add(&y[r].mul(&y[s]).mul(&tj[r][i].mul(&tj[s][j])));
                    }
                    // −2 y_r Γ_ij^r
                    acc = acc.add(&y[r].mul(&gj[gamma_slot(i, j, r)]).scale(-2.0));
                }
                out[i][j] = acc.clone();
                out[j][i] = acc;
            }
        }
        for i in 0..2 {
            out[i][2 + i] = Jet::constant(1.0, 4, order);
            out[2 + i][i] = Jet::constant(1.0, 4, order);
        }
        Ok(out)
    }

    /// Metric values at a point.
    pub fn metric_at(&self, q: &[f64; 4]) -> Result<[[f64; 4]; 4], GeomError> {
        let g = self.metric_jets(q, 0)?;
        Ok(core::array::from_fn(|a| core::array::from_fn(|b| g[a][b].value())))
    }

    /// Exact inverse-metric jets via the Walker block formula
    /// `[[B, I], [I, 0]]⁻¹ = [[0, I], [I, −B]]`.
    fn inverse_jets(g: &[[Jet; 4]; 4]) -> [[Jet; 4]; 4] {
        let order = g[0][0].order();
        let mut out: [[Jet; 4]; 4] =
            core::array::from_fn(|_| core::array::from_fn(|_| Jet::constant(0.0, 4, order)));
        for i in 0..2 {
            out[i][2 + i] = Jet::constant(1.0, 4, order);
            out[2 + i][i] = Jet::constant(1.0, 4, order);
            for j in 0..2 {
                out[2 + i][2 + j] = g[i][j].neg();
            }
        }
        out
    }

    /// Levi-Civita Christoffel jets, one order below the metric jets.
    fn christoffel_jets(g: &[[Jet; 4]; 4], ginv: &[[Jet; 4]; 4]) -> Vec<Jet> {
        let order = g[0][0].order() - 1;
        let mut dg: Vec<Jet> = Vec::with_capacity(64);
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    dg.push(g[a][b].partial_jet(c)); // ∂_c g_ab
                }
            }
        }
        let dgi = |a: usize, b: usize, c: usize| &dg[(a * 4 + b) * 4 + c];
        let mut out: Vec<Jet> = Vec::with_capacity(64);
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let mut acc = Jet::constant(0.0, 4, order);
                    for d in 0..4 {
                        let inner = dgi(d, c, b).add(dgi(b, d, c)).sub(dgi(b, c, d));
                        acc = acc.add(&ginv[a][d].truncate(order).mul(&inner));
                    }
                    out.push(acc.scale(0.5));
                }
            }
        }
        out
    }

    /// Full curvature packet at a 4-point, including the Bach tensor.
    pub fn curvature_packet(&self, q: &[f64; 4]) -> Result<CurvaturePacket, GeomError> {
        if !self.contains(q) {
            return Err(GeomError::Degenerate("base point outside the surface domain"));
        }
        let g = self.metric_jets(q, 4)?;
        let ginv = Self::inverse_jets(&g);
        let gam = Self::christoffel_jets(&g, &ginv); // order 3
        let gi = |a: usize, b: usize, c: usize| &gam[(a * 4 + b) * 4 + c];

        // R^a_{bcd} = ∂_c Γ^a_{db} − ∂_d Γ^a_{cb} + Γ^a_{ce}Γ^e_{db} − Γ^a_{de}Γ^e_{cb}
        let mut riem_up: Vec<Jet> = Vec::with_capacity(256);
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let mut acc = gi(a, d, b).partial_jet(c).sub(&gi(a, c, b).partial_jet(d));
                        for e in 0..4 {
                            acc = acc
                                .add(&gi(a, c, e).truncate(2).mul(&gi(e, d, b).truncate(2)))
                                .sub(&gi(a, d, e).truncate(2).mul(&gi(e, c, b).truncate(2)));
                        }
                        riem_up.push(acc);
                    }
                }
            }
        }
        // lower the first index: R_{abcd} = g_{ae} R^e_{bcd}
        let mut riem: Vec<Jet> = Vec::with_capacity(256);
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let mut acc = Jet::constant(0.0, 4, 2);
                        for e in 0..4 {
                            acc = acc.add(&g[a][e].truncate(2).mul(&riem_up[idx(e, b, c, d)]));
                        }
                        riem.push(acc);
                    }
                }
            }
        }
        // Ric_{bd} = R^a_{bad}
        let mut ric: [[Jet; 4]; 4] =
            core::array::from_fn(|_| core::array::from_fn(|_| Jet::constant(0.0, 4, 2)));
        for b in 0..4 {
            for d in 0..4 {
                let mut acc = Jet::constant(0.0, 4, 2);
                for a in 0..4 {
                    acc = acc.add(&riem_up[idx(a, b, a, d)]);
                }
                ric[b][d] = acc;
            }
        }
        // τ = g^{bd} Ric_{bd}
        let mut tau = Jet::constant(0.0, 4, 2);
        for b in 0..4 {
            for d in 0..4 {
                tau = tau.add(&ginv[b][d].truncate(2).mul(&ric[b][d]));
            }
        }
        // Schouten S = ½(Ric − (τ/6) g)
        let schouten: [[Jet; 4]; 4] = core::array::from_fn(|a| {
            core::array::from_fn(|b| {
                ric[a][b]
                    .sub(&tau.mul(&g[a][b].truncate(2)).scale(1.0 / 6.0))
                    .scale(0.5)
            })
        });
        // W = R − g∧S (Kulkarni–Nomizu pairing on index pairs (ab),(cd))
        let mut weyl: Vec<Jet> = Vec::with_capacity(256);
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let g2 = |x: usize, y: usize| g[x][y].truncate(2);
                        let kn = g2(a, c)
                            .mul(&schouten[b][d])
                            .add(&g2(b, d).mul(&schouten[a][c]))
                            .sub(&g2(a, d).mul(&schouten[b][c]))
                            .sub(&g2(b, c).mul(&schouten[a][d]));
                        weyl.push(riem[idx(a, b, c, d)].sub(&kn));
                    }
                }
            }
        }

        // first covariant derivative of W as order-1 jets:
        // (∇_m W)_{kijl} = ∂_m W − Γ^e_{mk}W_{eijl} − Γ^e_{mi}W_{kejl}
        //                 − Γ^e_{mj}W_{kiel} − Γ^e_{ml}W_{kije}
        let mut dweyl: Vec<Jet> = Vec::with_capacity(1024);
        for m in 0..4 {
            for k in 0..4 {
                for i in 0..4 {
                    for j in 0..4 {
                        for l in 0..4 {
                            let mut acc = weyl[idx(k, i, j, l)].partial_jet(m);
                            for e in 0..4 {
                                let gme = |x: usize| gi(e, m, x).truncate(1);
                                acc = acc
                                    .sub(&gme(k).mul(&weyl[idx(e, i, j, l)].truncate(1)))
                                    .sub(&gme(i).mul(&weyl[idx(k, e, j, l)].truncate(1)))
                                    .sub(&gme(j).mul(&weyl[idx(k, i, e, l)].truncate(1)))
                                    .sub(&gme(l).mul(&weyl[idx(k, i, j, e)].truncate(1)));
                            }
                            dweyl.push(acc);
                        }
                    }
                }
            }
        }
        let dw = |m: usize, k: usize, i: usize, j: usize, l: usize| {
            &dweyl[(((m * 4 + k) * 4 + i) * 4 + j) * 4 + l]
        };

        // Bach: B_ij = g^{ak} g^{bl} (∇_a ∇_b W)_{kijl} + ½ ρ^{kl} W_{kijl}
        let gv = |a: usize, b: usize| ginv[a][b].value();
        let gamv = |a: usize, b: usize, c: usize| gi(a, b, c).value();
        let mut bach = [[0.0f64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = 0.0;
                for a in 0..4 {
                    for b in 0..4 {
                        for k in 0..4 {
                            for l in 0..4 {
                                // (∇_a ∇_b W)_{kijl} value
                                let mut d2 = dw(b, k, i, j, l).d(a);
                                for e in 0..4 {
                                    d2 -= gamv(e, a, b) * dw(e, k, i, j, l).value()
                                        + gamv(e, a, k) * dw(b, e, i, j, l).value()
                                        + gamv(e, a, i) * dw(b, k, e, j, l).value()
                                        + gamv(e, a, j) * dw(b, k, i, e, l).value()
                                        + gamv(e, a, l) * dw(b, k, i, j, e).value();
                                }
                                acc += gv(a, k) * gv(b, l) * d2;
                            }
                        }
                    }
                }
                // + ½ ρ^{kl} W_{kijl}
                for k in 0..4 {
                    for l in 0..4 {
                        let mut rho_up = 0.0;
                        for a in 0..4 {
                            for b in 0..4 {
                                rho_up += gv(k, a) * gv(l, b) * ric[a][b].value();
                            }
                        }
                        acc += 0.5 * rho_up * weyl[idx(k, i, j, l)].value();
                    }
                }
                bach[i][j] = acc;
            }
        }

        let val4 = |v: &Vec<Jet>| -> [[[[f64; 4]; 4]; 4]; 4] {
            core::array::from_fn(|a| {
                core::array::from_fn(|b| {
                    core::array::from_fn(|c| core::array::from_fn(|d| v[idx(a, b, c, d)].value()))
                })
            })
        };
        Ok(CurvaturePacket {
            gamma: core::array::from_fn(|a| {
                core::array::from_fn(|b| core::array::from_fn(|c| gamv(a, b, c)))
            }),
            riemann: val4(&riem),
            ricci: core::array::from_fn(|a| core::array::from_fn(|b| ric[a][b].value())),
            tau: tau.value(),
            weyl: val4(&weyl),
            bach,
            metric: core::array::from_fn(|a| core::array::from_fn(|b| g[a][b].value())),
            metric_inv: core::array::from_fn(|a| core::array::from_fn(|b| gv(a, b))),
        })
    }

    /// Split the Weyl tensor at `q` into self-dual and anti-self-dual
    /// parts with respect to the Hodge star of the given orientation.
    pub fn weyl_split(&self, q: &[f64; 4]) -> Result<WeylSplit, GeomError> {
        let packet = self.curvature_packet(q)?;
        Ok(weyl_split_packet(&packet, self.orientation))
    }

    /// `Hess_g(h) + Ric − λ g` at `q`, for `h = π*f` with `f` on the base.
    pub fn soliton_residual(
        &self,
        f: &ScalarField,
        lambda: f64,
        q: &[f64; 4],
    ) -> Result<[[f64; 4]; 4], GeomError> {
        self.qe_residual(f, 0.0, lambda, q)
    }

    /// `Hess_g(h) + Ric − μ dh⊗dh − λ g` at `q`.
    pub fn qe_residual(
        &self,
        f: &ScalarField,
        mu: f64,
        lambda: f64,
        q: &[f64; 4],
    ) -> Result<[[f64; 4]; 4], GeomError> {
        let packet = self.curvature_packet(q)?;
        let h = self.pullback_jet(f, q, 2)?;
        let mut out = [[0.0f64; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                let mut hess = h.d2(a, b);
                for c in 0..4 {
                    hess -= packet.gamma[c][a][b] * h.d(c);
                }
                out[a][b] = hess + packet.ricci[a][b]
                    - mu * h.d(a) * h.d(b)
                    - lambda * packet.metric[a][b];
            }
        }
        Ok(out)
    }

    /// `‖dh‖² = g^{ab} ∂_a h ∂_b h` at `q` for `h = π*f`.
    pub fn isotropy(&self, f: &ScalarField, q: &[f64; 4]) -> Result<f64, GeomError> {
        let g = self.metric_jets(q, 0)?;
        let ginv = Self::inverse_jets(&g);
        let h = self.pullback_jet(f, q, 1)?;
        let mut acc = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                acc += ginv[a][b].value() * h.d(a) * h.d(b);
            }
        }
        Ok(acc)
    }

    fn pullback_jet(&self, f: &ScalarField, q: &[f64; 4], order: usize) -> Result<Jet, GeomError> {
        Ok(f.jet(&[q[0], q[1]], order)?.embed(4))
    }
}

/// Levi-Civita antisymmetric symbol times the orientation sign; nonzero
/// only on permutations of `(0,1,2,3)`.
fn epsilon(orientation: i8) -> [[[[f64; 4]; 4]; 4]; 4] {
    let mut eps = [[[[0.0f64; 4]; 4]; 4]; 4];
    let perms = [
        [0usize, 1, 2, 3],
    ];
    let _ = perms;
    // generate all permutations of 0..4 with their signs
    fn visit(arr: &mut [usize; 4], k: usize, eps: &mut [[[[f64; 4]; 4]; 4]; 4], sign_base: f64) {
        if k == 4 {
            // compute permutation parity
            let mut sign = sign_base;
            let mut a = *arr;
            for i in 0..4 {
                for j in (i + 1)..4 {
                    if a[i] > a[j] {
                        a.swap(i, j);
                        sign = -sign;
                    }
                }
            }
            eps[arr[0]][arr[1]][arr[2]][arr[3]] = sign;
            return;
        }
        for i in k..4 {
            arr.swap(k, i);
            visit(arr, k + 1, eps, sign_base);
            arr.swap(k, i);
        }
    }
    let mut arr = [0usize, 1, 2, 3];
    visit(&mut arr, 0, &mut eps, orientation as f64);
    eps
}

/// Split an already computed packet; exposed so callers can reuse a packet
/// for both the Bach check and the duality check.
pub fn weyl_split_packet(packet: &CurvaturePacket, orientation: i8) -> WeylSplit {
    let eps = epsilon(orientation);
    let gv = &packet.metric_inv;
    let w = &packet.weyl;
    // (*W)_{abcd} = ½ ε_{ab}^{ef} W_{efcd}, indices raised with g⁻¹
    let mut star = [[[[0.0f64; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut acc = 0.0;
                    for m in 0..4 {
                        for n in 0..4 {
                            if eps[a][b][m][n] == 0.0 {
                                continue;
                            }
                            for e in 0..4 {
                                for f in 0..4 {
                                    acc += 0.5
                                        * eps[a][b][m][n]
                                        * gv[m][e]
                                        * gv[n][f]
                                        * w[e][f][c][d];
                                }
                            }
                        }
                    }
                    star[a][b][c][d] = acc;
                }
            }
        }
    }
    let mut split = WeylSplit {
        plus_comp2: 0.0,
        minus_comp2: 0.0,
        plus_norm: 0.0,
        minus_norm: 0.0,
    };
    let mut wp = [[[[0.0f64; 4]; 4]; 4]; 4];
    let mut wm = [[[[0.0f64; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    wp[a][b][c][d] = 0.5 * (w[a][b][c][d] + star[a][b][c][d]);
                    wm[a][b][c][d] = 0.5 * (w[a][b][c][d] - star[a][b][c][d]);
                    split.plus_comp2 += wp[a][b][c][d] * wp[a][b][c][d];
                    split.minus_comp2 += wm[a][b][c][d] * wm[a][b][c][d];
                }
            }
        }
    }
    // indefinite norms: contract all four indices with g⁻¹
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut up_p = 0.0;
                    let mut up_m = 0.0;
                    for e in 0..4 {
                        for f in 0..4 {
                            for m in 0..4 {
                                for n in 0..4 {
                                    let raise = gv[a][e] * gv[b][f] * gv[c][m] * gv[d][n];
                                    up_p += raise * wp[e][f][m][n];
                                    up_m += raise * wm[e][f][m][n];
                                }
                            }
                        }
                    }
                    split.plus_norm += wp[a][b][c][d] * up_p;
                    split.minus_norm += wm[a][b][c][d] * up_m;
                }
            }
        }
    }
    split
}

/// Build the deformation tensor `φ` that makes the extension of a
/// kernel-aligned nilpotent `T` a gradient Ricci soliton (`μ = 0`) or a
/// quasi-Einstein metric (`μ ≠ 0`):
///
/// ```text
/// φ(TX, TY) = −{ Hess(f) + 2ρ_s − μ df⊗df }(X, Y)
/// ```
///
/// For `T = t ∂₁⊗dx²` (kernel along `∂₁`) this pins `φ₁₁`; the mirror
/// `T = t ∂₂⊗dx¹` pins `φ₂₂`. The unconstrained components are taken from
/// `free` (defaults to zero). The potential `f` must satisfy
/// `df(ker T) = 0`; this is the caller's responsibility and is visible in
/// the residual if violated.
pub fn nilpotent_phi(
    s: &AffineSurface,
    f: &Expr,
    mu: f64,
    t_entry: &ScalarField,
    axis: KernelAxis,
    free: Option<[ScalarField; 2]>,
) -> SymBilinField {
    // Hess(f)_{ab} = ∂_a∂_b f − Γ_ab^c ∂_c f, as expressions
    let f1 = f.derivative(Var::X1);
    let f2 = f.derivative(Var::X2);
    let gam = |i: usize, j: usize, k: usize| s.gamma[gamma_slot(i, j, k)].clone();
    let (a, b) = match axis {
        KernelAxis::D1 => (1usize, Var::X2), // constrain the (2,2) slot
        KernelAxis::D2 => (0usize, Var::X1), // constrain the (1,1) slot
    };
    let fa = if a == 0 { f1.clone() } else { f2.clone() };
    let hess_aa = Expr::sub(
        fa.derivative(b),
        Expr::add(
            Expr::mul(gam(a, a, 0), f1.clone()),
            Expr::mul(gam(a, a, 1), f2.clone()),
        ),
    );
    let rho_s = s.ricci_s_expr(); // [ρ_s11, ρ_s12, ρ_s22]
    let rs_aa = if a == 0 { rho_s[0].clone() } else { rho_s[2].clone() };
    let bracket = Expr::sub(
        Expr::add(hess_aa, Expr::mul(Expr::Num(2.0), rs_aa)),
        Expr::mul(Expr::Num(mu), Expr::mul(fa.clone(), fa)),
    );
    let pinned = ScalarField::Expr(bracket)
        .div(&t_entry.mul(t_entry))
        .neg();
    let [free1, free2] = free.unwrap_or([ScalarField::constant(0.0), ScalarField::constant(0.0)]);
    let comp = match axis {
        // φ₁₁ pinned; φ₁₂, φ₂₂ free
        KernelAxis::D1 => [pinned, free1, free2],
        // φ₂₂ pinned; φ₁₁, φ₁₂ free
        KernelAxis::D2 => [free2, free1, pinned],
    };
    SymBilinField { comp }
}
