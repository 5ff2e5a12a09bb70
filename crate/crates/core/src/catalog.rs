//! Built-in model surfaces with machine-checkable expected data.
//!
//! Each entry packages a surface construction together with the closed-form
//! data it is supposed to exhibit: the Ricci tensor and its symmetrization,
//! the dimension of the trace-free parallel space, explicit generators, and
//! structure classes. `check_entry` replays every expectation against the
//! live solvers and is the master regression hook used by the test suite
//! and the CLI.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::expr::{Expr, Func, Var};
use crate::field::ScalarField;
use crate::jet::eval_jet;
use crate::parallel::{
    is_parallel, recognize_normal_form, type_a_solve, type_b_solve, StructureClass,
};
use crate::surface::{AffineSurface, Box2, GeomError, SurfaceKind, Tensor11Field};

/// Expected data attached to a catalog surface.
#[derive(Clone, Debug)]
pub struct Expected {
    /// Closed-form Ricci components `rho[i][j]`, when printed.
    pub rho: Option<[[Expr; 2]; 2]>,
    /// Closed-form symmetric Ricci `[ρ_s11, ρ_s12, ρ_s22]`, when printed.
    pub rho_s: Option<[Expr; 3]>,
    /// Dimension of the trace-free parallel space.
    pub dim_p0: usize,
    /// Explicit generators expected to be parallel (possibly fewer than
    /// `dim_p0` when only some are printed in closed form).
    pub generators: Vec<Tensor11Field>,
    /// Structure classes, index-matched with `generators`.
    pub classes: Vec<StructureClass>,
    /// Whether `ρ_s` is recurrent (`None` when not asserted).
    pub recurrent_rho_s: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub params: Vec<(&'static str, f64)>,
    pub surface: AffineSurface,
    pub expected: Expected,
}

/// One verified expectation: label, observed residual, tolerance used.
#[derive(Clone, Debug)]
pub struct CheckItem {
    pub label: String,
    pub residual: f64,
    pub tol: f64,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct EntryCheck {
    pub name: String,
    pub items: Vec<CheckItem>,
    pub passed: bool,
}

fn num(v: f64) -> Expr {
    Expr::Num(v)
}

fn x1() -> Expr {
    Expr::Var(Var::X1)
}

fn x2() -> Expr {
    Expr::Var(Var::X2)
}

fn zero_rho() -> [[Expr; 2]; 2] {
    [[num(0.0), num(0.0)], [num(0.0), num(0.0)]]
}

/// `w·(x¹)⁻²` — the common prefactor of half-plane curvature data.
fn invsq(w: f64) -> Expr {
    Expr::mul(num(w), Expr::pow(x1(), -2.0))
}

fn power_tensor(alpha: f64, m: [[f64; 2]; 2]) -> Tensor11Field {
    let comp = core::array::from_fn(|i| {
        core::array::from_fn(|j| {
            if alpha.abs() < 1e-12 {
                ScalarField::constant(m[i][j])
            } else {
                ScalarField::Expr(Expr::mul(Expr::pow(x1(), alpha), num(m[i][j])))
            }
        })
    });
    Tensor11Field { comp }
}

fn exp_linear_tensor(a1: f64, a2: f64, m: [[f64; 2]; 2]) -> Tensor11Field {
    let pre = Expr::func(
        Func::Exp,
        Expr::add(Expr::mul(num(a1), x1()), Expr::mul(num(a2), x2())),
    );
    let comp = core::array::from_fn(|i| {
        core::array::from_fn(|j| ScalarField::Expr(Expr::mul(pre.clone(), num(m[i][j]))))
    });
    Tensor11Field { comp }
}

fn class_of(m: &[[f64; 2]; 2]) -> StructureClass {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det > 1e-12 {
        StructureClass::Kahler
    } else if det < -1e-12 {
        StructureClass::ParaKahler
    } else {
        StructureClass::NilpotentKahler
    }
}

fn box_a() -> Box2 {
    Box2::new([-1.0, 1.0], [-1.0, 1.0])
}

fn box_b() -> Box2 {
    Box2::new([0.5, 3.0], [-1.0, 1.0])
}

/// Names accepted by [`make`], with parameter arities and constraints.
pub fn list() -> Vec<(&'static str, &'static str)> {
    vec![
        ("flat", "flat plane, no parameters; full 3-dimensional solution space"),
        ("M2half", "constant-symbol surface with rank-one Ricci, no parameters"),
        ("M5", "constant-symbol rank-one family; params: [c]"),
        ("A-rank-one", "constant-symbol rank-one normal form; params: [g111, g121, g221, g222]"),
        ("A-rank-two", "constant-symbol surface with rank-two Ricci, no parameters; empty solution space"),
        ("Q", "half-plane family with skew Ricci; params: [c]; 3-dimensional solution space"),
        ("P+", "half-plane family, positive branch; params: [c], c != 0; 3-dimensional solution space"),
        ("P-", "half-plane family, negative branch; params: [c], c != 0; 3-dimensional solution space"),
        ("R52", "half-plane surface with rank-one non-recurrent symmetric Ricci; no parameters; empty solution space"),
        ("B-alpha0-upper", "half-plane family, constant unit-upper generator; params: [t11, t21, c221 != 0, c222]"),
        ("B-alpha0-lower", "half-plane family, constant lower generator; params: [t11, c112, c122 != 0]"),
        ("B-alpha0-diagonal", "half-plane family, diagonal generator; params: [c111, c222 != 0]"),
        ("B-power-upper", "half-plane family, power-law nilpotent generator; params: [t11, c111, c221 != 0, c222], exponent not in {0, -1}"),
        ("B-power-lower", "half-plane family, power-law lower nilpotent generator; params: [c111, c112, c122 != 0], exponent not in {0, -1}"),
        ("surface-3a", "gradient surface with vanishing symmetric Ricci; no parameters; full basis"),
        ("surface-3b", "kernel-aligned nilpotent sample; no parameters"),
        ("surface-3d", "rotation-compatible sample with rank-two Ricci; no parameters"),
        ("surface-3e", "rotation gradient sample with vanishing symmetric Ricci; no parameters"),
        ("surface-3f", "diagonal-compatible sample with rank-two Ricci; no parameters"),
        ("surface-3g", "diagonal gradient sample with vanishing symmetric Ricci; no parameters"),
    ]
}

fn expect_params(name: &str, params: &[f64], n: usize) -> Result<(), GeomError> {
    if params.len() != n {
        let _ = name;
        return Err(GeomError::Degenerate("wrong number of parameters"));
    }
    Ok(())
}

/// Construct a named catalog surface with its expectations.
pub fn make(name: &str, params: &[f64]) -> Result<CatalogEntry, GeomError> {
    match name {
        "flat" => {
            expect_params(name, params, 0)?;
            let surface = AffineSurface::type_a([0.0; 6], box_a());
            Ok(CatalogEntry {
                name: String::from("flat"),
                description: String::from("flat affine plane"),
                params: vec![],
                surface,
                expected: Expected {
                    rho: Some(zero_rho()),
                    rho_s: Some([num(0.0), num(0.0), num(0.0)]),
                    dim_p0: 3,
                    generators: vec![
                        Tensor11Field::constant([[1.0, 0.0], [0.0, -1.0]]),
                        Tensor11Field::constant([[0.0, 1.0], [0.0, 0.0]]),
                        Tensor11Field::constant([[0.0, 0.0], [1.0, 0.0]]),
                    ],
                    classes: vec![
                        StructureClass::ParaKahler,
                        StructureClass::NilpotentKahler,
                        StructureClass::NilpotentKahler,
                    ],
                    recurrent_rho_s: None,
                },
            })
        }
        "M2half" => {
            expect_params(name, params, 0)?;
            let surface = AffineSurface::type_a([-1.0, 0.0, -0.5, 0.0, 0.0, 0.0], box_a());
            Ok(CatalogEntry {
                name: String::from("M2half"),
                description: String::from("constant-symbol surface with rank-one Ricci"),
                params: vec![],
                surface,
                expected: Expected {
                    rho: Some([[num(0.0), num(0.0)], [num(0.0), num(-0.25)]]),
                    rho_s: Some([num(0.0), num(0.0), num(-0.25)]),
                    dim_p0: 1,
                    generators: vec![exp_linear_tensor(1.0, 0.5, [[0.0, 1.0], [0.0, 0.0]])],
                    classes: vec![StructureClass::NilpotentKahler],
                    recurrent_rho_s: Some(true),
                },
            })
        }
        "M5" => {
            expect_params(name, params, 1)?;
            let c = params[0];
            let surface =
                AffineSurface::type_a([-1.0, 0.0, c, 0.0, -1.0, 2.0 * c], box_a());
            Ok(CatalogEntry {
                name: format!("M5(c={})", fmt_param(c)),
                description: String::from("constant-symbol rank-one family"),
                params: vec![("c", c)],
                surface,
                expected: Expected {
                    rho: Some([[num(0.0), num(0.0)], [num(0.0), num(1.0 + c * c)]]),
                    rho_s: Some([num(0.0), num(0.0), num(1.0 + c * c)]),
                    dim_p0: 1,
                    generators: vec![exp_linear_tensor(1.0, c, [[0.0, 1.0], [0.0, 0.0]])],
                    classes: vec![StructureClass::NilpotentKahler],
                    recurrent_rho_s: Some(true),
                },
            })
        }
        "A-rank-one" => {
            expect_params(name, params, 4)?;
            let [g111, g121, g221, g222] = [params[0], params[1], params[2], params[3]];
            let surface =
                AffineSurface::type_a([g111, 0.0, g121, 0.0, g221, g222], box_a());
            // non-flat requirement: the two symbol matrices must not commute
            let p = surface.domain.center();
            let r = surface.ricci_at(&p)?;
            let rnorm = r.rho.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
            if rnorm < 1e-12 {
                return Err(GeomError::Degenerate(
                    "rank-one normal form requires a non-flat connection",
                ));
            }
            Ok(CatalogEntry {
                name: format!(
                    "A-rank-one({},{},{},{})",
                    fmt_param(g111),
                    fmt_param(g121),
                    fmt_param(g221),
                    fmt_param(g222)
                ),
                description: String::from("constant-symbol rank-one normal form"),
                params: vec![("g111", g111), ("g121", g121), ("g221", g221), ("g222", g222)],
                surface,
                expected: Expected {
                    rho: None,
                    rho_s: None,
                    dim_p0: 1,
                    generators: vec![exp_linear_tensor(
                        -g111,
                        g222 - g121,
                        [[0.0, 1.0], [0.0, 0.0]],
                    )],
                    classes: vec![StructureClass::NilpotentKahler],
                    recurrent_rho_s: Some(true),
                },
            })
        }
        "A-rank-two" => {
            expect_params(name, params, 0)?;
            let surface = AffineSurface::type_a([0.0, 1.0, 0.0, 0.0, 1.0, 0.0], box_a());
            Ok(CatalogEntry {
                name: String::from("A-rank-two"),
                description: String::from("constant-symbol surface with rank-two Ricci"),
                params: vec![],
                surface,
                expected: Expected {
                    rho: Some([[num(0.0), num(-1.0)], [num(-1.0), num(0.0)]]),
                    rho_s: Some([num(0.0), num(-1.0), num(0.0)]),
                    dim_p0: 0,
                    generators: vec![],
                    classes: vec![],
                    recurrent_rho_s: None,
                },
            })
        }
        "Q" => {
            expect_params(name, params, 1)?;
            let c = params[0];
            let surface = AffineSurface::type_b([0.0, c, 1.0, 0.0, 0.0, 1.0], box_b());
            let mut generators = vec![Tensor11Field::constant([[0.0, 1.0], [c, 0.0]])];
            let mut classes = vec![class_of(&[[0.0, 1.0], [c, 0.0]])];
            if c > 1e-12 {
                let r = c.sqrt();
                generators.push(power_tensor(2.0 * r, [[r, 1.0], [-c, -r]]));
                generators.push(power_tensor(-2.0 * r, [[-r, 1.0], [-c, r]]));
                classes.push(StructureClass::NilpotentKahler);
                classes.push(StructureClass::NilpotentKahler);
            }
            Ok(CatalogEntry {
                name: format!("Q(c={})", fmt_param(c)),
                description: String::from("half-plane family with skew Ricci"),
                params: vec![("c", c)],
                surface,
                expected: Expected {
                    rho: Some([[num(0.0), invsq(1.0)], [invsq(-1.0), num(0.0)]]),
                    rho_s: Some([num(0.0), num(0.0), num(0.0)]),
                    dim_p0: 3,
                    generators,
                    classes,
                    recurrent_rho_s: None,
                },
            })
        }
        "P+" | "P-" => {
            expect_params(name, params, 1)?;
            let c = params[0];
            if c.abs() < 1e-12 {
                return Err(GeomError::Degenerate("parameter c must be nonzero"));
            }
            let e = if name == "P+" { 1.0 } else { -1.0 };
            let surface = AffineSurface::type_b(
                [-e * c * c + 1.0, c, 0.0, -e * c * c, e, 2.0 * e * c],
                box_b(),
            );
            let g1 = [[-c, 1.0], [-c * c, c]];
            Ok(CatalogEntry {
                name: format!("{}(c={})", name, fmt_param(c)),
                description: String::from("half-plane family with nilpotent power generator"),
                params: vec![("c", c)],
                surface,
                expected: Expected {
                    rho: None,
                    rho_s: Some([num(0.0), num(0.0), num(0.0)]),
                    dim_p0: 3,
                    generators: vec![power_tensor(-1.0, g1)],
                    classes: vec![StructureClass::NilpotentKahler],
                    recurrent_rho_s: None,
                },
            })
        }
        "R52" => {
            expect_params(name, params, 0)?;
            let c222 = (3.0 + 2.0 * 3.0f64.sqrt()) / 3.0;
            let surface = AffineSurface::type_b([1.0, 1.0, 1.0, 1.0, 1.0, c222], box_b());
            let s3 = 3.0f64.sqrt();
            Ok(CatalogEntry {
                name: String::from("R52"),
                description: String::from(
                    "half-plane surface with rank-one non-recurrent symmetric Ricci",
                ),
                params: vec![],
                surface,
                expected: Expected {
                    rho: None,
                    rho_s: Some([
                        invsq(1.0 + 2.0 / s3),
                        invsq(1.0 / s3),
                        invsq(2.0 / s3 - 1.0),
                    ]),
                    dim_p0: 0,
                    generators: vec![],
                    classes: vec![],
                    recurrent_rho_s: Some(false),
                },
            })
        }
        "B-alpha0-upper" => {
            expect_params(name, params, 4)?;
            let [t11, t21, c221, c222] = [params[0], params[1], params[2], params[3]];
            if c221.abs() < 1e-12 {
                return Err(GeomError::Degenerate("c221 must be nonzero"));
            }
            let c121 = c222 + 2.0 * c221 * t11;
            let consts = [
                c221 * t21 + 2.0 * c121 * t11,
                c121 * t21,
                c121,
                c221 * t21,
                c221,
                c222,
            ];
            let surface = AffineSurface::type_b(consts, box_b());
            let gen = [[t11, 1.0], [t21, -t11]];
            Ok(CatalogEntry {
                name: format!(
                    "B-alpha0-upper({},{},{},{})",
                    fmt_param(t11),
                    fmt_param(t21),
                    fmt_param(c221),
                    fmt_param(c222)
                ),
                description: String::from("half-plane family, constant unit-upper generator"),
                params: vec![("t11", t11), ("t21", t21), ("c221", c221), ("c222", c222)],
                surface,
                expected: Expected {
                    rho: None,
                    rho_s: Some([
                        invsq(c221 * t21),
                        invsq(-c221 * t11),
                        invsq(-c221),
                    ]),
                    dim_p0: 1,
                    generators: vec![Tensor11Field::constant(gen)],
                    classes: vec![class_of(&gen)],
                    recurrent_rho_s: Some(true),
                },
            })
        }
        "B-alpha0-lower" => {
            expect_params(name, params, 3)?;
            let [t11, c112, c122] = [params[0], params[1], params[2]];
            if c122.abs() < 1e-12 {
                return Err(GeomError::Degenerate("c122 must be nonzero"));
            }
            let consts = [
                c122 + 2.0 * c112 * t11,
                c112,
                0.0,
                c122,
                0.0,
                -2.0 * c122 * t11,
            ];
            let surface = AffineSurface::type_b(consts, box_b());
            let gen = [[t11, 0.0], [1.0, -t11]];
            Ok(CatalogEntry {
                name: format!(
                    "B-alpha0-lower({},{},{})",
                    fmt_param(t11),
                    fmt_param(c112),
                    fmt_param(c122)
                ),
                description: String::from("half-plane family, constant lower generator"),
                params: vec![("t11", t11), ("c112", c112), ("c122", c122)],
                surface,
                expected: Expected {
                    rho: Some([
                        [invsq(c122), invsq(-2.0 * c122 * t11)],
                        [num(0.0), num(0.0)],
                    ]),
                    rho_s: Some([invsq(c122), invsq(-c122 * t11), num(0.0)]),
                    dim_p0: 1,
                    generators: vec![Tensor11Field::constant(gen)],
                    classes: vec![class_of(&gen)],
                    recurrent_rho_s: Some(true),
                },
            })
        }
        "B-alpha0-diagonal" => {
            expect_params(name, params, 2)?;
            let [c111, c222] = [params[0], params[1]];
            if c222.abs() < 1e-12 {
                return Err(GeomError::Degenerate("c222 must be nonzero"));
            }
            let surface =
                AffineSurface::type_b([c111, 0.0, 0.0, 0.0, 0.0, c222], box_b());
            Ok(CatalogEntry {
                name: format!(
                    "B-alpha0-diagonal({},{})",
                    fmt_param(c111),
                    fmt_param(c222)
                ),
                description: String::from("half-plane family, diagonal generator"),
                params: vec![("c111", c111), ("c222", c222)],
                surface,
                expected: Expected {
                    rho: Some([[num(0.0), invsq(c222)], [num(0.0), num(0.0)]]),
                    rho_s: Some([num(0.0), invsq(0.5 * c222), num(0.0)]),
                    dim_p0: 1,
                    generators: vec![Tensor11Field::constant([[1.0, 0.0], [0.0, -1.0]])],
                    classes: vec![StructureClass::ParaKahler],
                    recurrent_rho_s: Some(true),
                },
            })
        }
        "B-power-upper" => {
            expect_params(name, params, 4)?;
            let [t11, c111, c221, c222] = [params[0], params[1], params[2], params[3]];
            if c221.abs() < 1e-12 {
                return Err(GeomError::Degenerate("c221 must be nonzero"));
            }
            let alpha = -c111 + t11 * (2.0 * c222 + 3.0 * c221 * t11);
            if alpha.abs() < 1e-9 || (alpha + 1.0).abs() < 1e-9 {
                return Err(GeomError::Degenerate("exponent must avoid 0 and -1"));
            }
            let consts = [
                c111,
                t11 * (-c111 + t11 * (c222 + c221 * t11)),
                c222 + 2.0 * c221 * t11,
                -c221 * t11 * t11,
                c221,
                c222,
            ];
            let surface = AffineSurface::type_b(consts, box_b());
            let w = -c221 * (1.0 + alpha);
            Ok(CatalogEntry {
                name: format!(
                    "B-power-upper({},{},{},{})",
                    fmt_param(t11),
                    fmt_param(c111),
                    fmt_param(c221),
                    fmt_param(c222)
                ),
                description: String::from("half-plane family, power-law nilpotent generator"),
                params: vec![("t11", t11), ("c111", c111), ("c221", c221), ("c222", c222)],
                surface,
                expected: Expected {
                    rho: None,
                    rho_s: Some([
                        invsq(w * t11 * t11),
                        invsq(w * t11),
                        invsq(w),
                    ]),
                    dim_p0: 1,
                    generators: vec![power_tensor(
                        alpha,
                        [[t11, 1.0], [-t11 * t11, -t11]],
                    )],
                    classes: vec![StructureClass::NilpotentKahler],
                    recurrent_rho_s: Some(true),
                },
            })
        }
        "B-power-lower" => {
            expect_params(name, params, 3)?;
            let [c111, c112, c122] = [params[0], params[1], params[2]];
            if c122.abs() < 1e-12 {
                return Err(GeomError::Degenerate("c122 must be nonzero"));
            }
            let alpha = c111 - c122;
            if alpha.abs() < 1e-9 || (alpha + 1.0).abs() < 1e-9 {
                return Err(GeomError::Degenerate("exponent must avoid 0 and -1"));
            }
            let surface =
                AffineSurface::type_b([c111, c112, 0.0, c122, 0.0, 0.0], box_b());
            Ok(CatalogEntry {
                name: format!(
                    "B-power-lower({},{},{})",
                    fmt_param(c111),
                    fmt_param(c112),
                    fmt_param(c122)
                ),
                description: String::from(
                    "half-plane family, power-law lower nilpotent generator",
                ),
                params: vec![("c111", c111), ("c112", c112), ("c122", c122)],
                surface,
                expected: Expected {
                    rho: Some([
                        [invsq((1.0 + alpha) * c122), num(0.0)],
                        [num(0.0), num(0.0)],
                    ]),
                    rho_s: Some([invsq((1.0 + alpha) * c122), num(0.0), num(0.0)]),
                    dim_p0: 1,
                    generators: vec![power_tensor(alpha, [[0.0, 0.0], [1.0, 0.0]])],
                    classes: vec![StructureClass::NilpotentKahler],
                    recurrent_rho_s: Some(true),
                },
            })
        }
        "surface-3a" => {
            expect_params(name, params, 0)?;
            // gradient potential (x¹)²: symmetric Ricci vanishes
            let surface = AffineSurface::general(
                [
                    num(0.0),
                    num(0.0),
                    Expr::mul(num(2.0), x1()),
                    num(0.0),
                    num(0.0),
                    Expr::mul(num(2.0), x1()),
                ],
                box_a(),
            );
            let phi = Expr::mul(x1(), x1());
            let t2 = Tensor11Field {
                comp: [
                    [
                        ScalarField::constant(1.0),
                        ScalarField::Expr(Expr::mul(num(2.0), phi.clone())),
                    ],
                    [ScalarField::constant(0.0), ScalarField::constant(-1.0)],
                ],
            };
            let t3 = Tensor11Field {
                comp: [
                    [
                        ScalarField::Expr(Expr::neg(phi.clone())),
                        ScalarField::Expr(Expr::neg(Expr::mul(phi.clone(), phi.clone()))),
                    ],
                    [ScalarField::constant(1.0), ScalarField::Expr(phi)],
                ],
            };
            Ok(CatalogEntry {
                name: String::from("surface-3a"),
                description: String::from("gradient surface with vanishing symmetric Ricci"),
                params: vec![],
                surface,
                expected: Expected {
                    rho: Some([[num(0.0), num(-2.0)], [num(2.0), num(0.0)]]),
                    rho_s: Some([num(0.0), num(0.0), num(0.0)]),
                    dim_p0: 3,
                    generators: vec![
                        Tensor11Field::constant([[0.0, 1.0], [0.0, 0.0]]),
                        t2,
                        t3,
                    ],
                    classes: vec![
                        StructureClass::NilpotentKahler,
                        StructureClass::ParaKahler,
                        StructureClass::NilpotentKahler,
                    ],
                    recurrent_rho_s: None,
                },
            })
        }
        "surface-3b" => {
            expect_params(name, params, 0)?;
            let surface = AffineSurface::general(
                [
                    num(0.0),
                    num(0.0),
                    x1(),
                    num(0.0),
                    Expr::mul(x1(), x2()),
                    x1(),
                ],
                Box2::new([0.25, 1.25], [0.25, 1.25]),
            );
            Ok(CatalogEntry {
                name: String::from("surface-3b"),
                description: String::from("kernel-aligned nilpotent sample"),
                params: vec![],
                surface,
                expected: Expected {
                    rho: None,
                    rho_s: Some([num(0.0), num(0.0), x2()]),
                    dim_p0: 1,
                    generators: vec![Tensor11Field::constant([[0.0, 1.0], [0.0, 0.0]])],
                    classes: vec![StructureClass::NilpotentKahler],
                    recurrent_rho_s: Some(true),
                },
            })
        }
        "surface-3d" => {
            expect_params(name, params, 0)?;
            // rotation-compatible relations with a = 0, b = x²
            let surface = AffineSurface::general(
                [
                    num(0.0),
                    x2(),
                    Expr::neg(x2()),
                    num(0.0),
                    num(0.0),
                    Expr::neg(x2()),
                ],
                box_a(),
            );
            Ok(CatalogEntry {
                name: String::from("surface-3d"),
                description: String::from("rotation-compatible sample with rank-two Ricci"),
                params: vec![],
                surface,
                expected: Expected {
                    rho: None,
                    rho_s: Some([num(1.0), num(0.0), num(1.0)]),
                    dim_p0: 1,
                    generators: vec![Tensor11Field::constant([[0.0, -1.0], [1.0, 0.0]])],
                    classes: vec![StructureClass::Kahler],
                    recurrent_rho_s: Some(true),
                },
            })
        }
        "surface-3e" => {
            expect_params(name, params, 0)?;
            // rotation gradient potential x¹x²
            let half = |e: Expr| Expr::mul(num(0.5), e);
            let surface = AffineSurface::general(
                [
                    half(x1()),
                    half(x2()),
                    Expr::neg(half(x2())),
                    half(x1()),
                    Expr::neg(half(x1())),
                    Expr::neg(half(x2())),
                ],
                box_a(),
            );
            Ok(CatalogEntry {
                name: String::from("surface-3e"),
                description: String::from(
                    "rotation gradient sample with vanishing symmetric Ricci",
                ),
                params: vec![],
                surface,
                expected: Expected {
                    rho: None,
                    rho_s: Some([num(0.0), num(0.0), num(0.0)]),
                    dim_p0: 3,
                    generators: vec![Tensor11Field::constant([[0.0, -1.0], [1.0, 0.0]])],
                    classes: vec![StructureClass::Kahler],
                    recurrent_rho_s: None,
                },
            })
        }
        "surface-3f" => {
            expect_params(name, params, 0)?;
            // diagonal-compatible with Γ₁₁¹ = x², Γ₂₂² = x²
            let surface = AffineSurface::general(
                [x2(), num(0.0), num(0.0), num(0.0), num(0.0), x2()],
                box_a(),
            );
            Ok(CatalogEntry {
                name: String::from("surface-3f"),
                description: String::from("diagonal-compatible sample with rank-two Ricci"),
                params: vec![],
                surface,
                expected: Expected {
                    rho: None,
                    rho_s: Some([num(0.0), num(-0.5), num(0.0)]),
                    dim_p0: 1,
                    generators: vec![Tensor11Field::constant([[1.0, 0.0], [0.0, -1.0]])],
                    classes: vec![StructureClass::ParaKahler],
                    recurrent_rho_s: Some(true),
                },
            })
        }
        "surface-3g" => {
            expect_params(name, params, 0)?;
            // diagonal gradient potential x¹x²
            let surface = AffineSurface::general(
                [
                    x2(),
                    num(0.0),
                    num(0.0),
                    num(0.0),
                    num(0.0),
                    Expr::neg(x1()),
                ],
                box_a(),
            );
            Ok(CatalogEntry {
                name: String::from("surface-3g"),
                description: String::from(
                    "diagonal gradient sample with vanishing symmetric Ricci",
                ),
                params: vec![],
                surface,
                expected: Expected {
                    rho: Some([[num(0.0), num(1.0)], [num(-1.0), num(0.0)]]),
                    rho_s: Some([num(0.0), num(0.0), num(0.0)]),
                    dim_p0: 3,
                    generators: vec![Tensor11Field::constant([[1.0, 0.0], [0.0, -1.0]])],
                    classes: vec![StructureClass::ParaKahler],
                    recurrent_rho_s: None,
                },
            })
        }
        _ => Err(GeomError::Degenerate("unknown catalog name")),
    }
}

fn fmt_param(v: f64) -> String {
    if v == v.floor() && v.abs() < 1e6 {
        format!("{}", v as i64)
    } else {
        format!("{}", v)
    }
}

/// Default parameter choices for names that need them.
pub fn default_params(name: &str) -> Vec<f64> {
    match name {
        "M5" => vec![0.7],
        "A-rank-one" => vec![1.0, 2.0, 3.0, 5.0],
        "Q" => vec![1.0],
        "P+" | "P-" => vec![2.0],
        "B-alpha0-upper" => vec![0.0, -1.0, 1.0, 0.0],
        "B-alpha0-lower" => vec![0.5, 1.0, 2.0],
        "B-alpha0-diagonal" => vec![2.0, 3.0],
        "B-power-upper" => vec![1.0, -1.0, 1.0, 1.0],
        "B-power-lower" => vec![2.0, 5.0, -1.0],
        _ => vec![],
    }
}

/// All entries at their default parameters, in listing order.
pub fn all_default_entries() -> Vec<CatalogEntry> {
    list()
        .iter()
        .map(|(name, _)| make(name, &default_params(name)).expect("default params are valid"))
        .collect()
}

/// Small deterministic parameter sweeps over every half-plane family,
/// honoring each family's constraints.
pub fn families_grid() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    // constant unit-upper generator family: pairs chosen to hit all three
    // structure classes (generator determinant −t11² − t21)
    for &(t11, t21) in &[(0.0, -1.0), (0.0, 1.0), (0.5, -0.25)] {
        for &c221 in &[1.0, -0.7] {
            for &c222 in &[0.0, 0.8] {
                out.push(
                    make("B-alpha0-upper", &[t11, t21, c221, c222])
                        .expect("constraints honored"),
                );
            }
        }
    }
    for &t11 in &[0.0, 0.5, -1.0] {
        for &c112 in &[0.0, 1.0] {
            for &c122 in &[1.0, -2.0] {
                out.push(make("B-alpha0-lower", &[t11, c112, c122]).expect("constraints honored"));
            }
        }
    }
    for &c111 in &[0.0, 2.0] {
        for &c222 in &[3.0, -1.0] {
            out.push(make("B-alpha0-diagonal", &[c111, c222]).expect("constraints honored"));
        }
    }
    for &t11 in &[0.0, 1.0] {
        for &c111 in &[-1.0, 2.0] {
            for &c221 in &[1.0, -1.0] {
                let c222 = 1.0f64;
                let alpha: f64 = -c111 + t11 * (2.0 * c222 + 3.0 * c221 * t11);
                if alpha.abs() < 1e-9 || (alpha + 1.0).abs() < 1e-9 {
                    continue;
                }
                out.push(
                    make("B-power-upper", &[t11, c111, c221, c222]).expect("constraints honored"),
                );
            }
        }
    }
    for &c111 in &[2.0, 0.0] {
        for &c122 in &[-1.0, 1.0] {
            let alpha: f64 = c111 - c122;
            if alpha.abs() < 1e-9 || (alpha + 1.0).abs() < 1e-9 {
                continue;
            }
            for &c112 in &[0.0, 5.0] {
                out.push(make("B-power-lower", &[c111, c112, c122]).expect("constraints honored"));
            }
        }
    }
    out
}

fn eval_expr_grid(e: &Expr, grid: &[[f64; 2]]) -> Result<Vec<f64>, GeomError> {
    grid.iter()
        .map(|p| Ok(eval_jet(e, p, 0)?.value()))
        .collect()
}

/// Replay every expectation of an entry against the live solvers.
pub fn check_entry(entry: &CatalogEntry, tol: f64) -> Result<EntryCheck, GeomError> {
    let s = &entry.surface;
    let grid = s.domain.grid(4);
    let mut items: Vec<CheckItem> = Vec::new();
    let mut push = |label: String, residual: f64, tol: f64| {
        items.push(CheckItem {
            label,
            residual,
            tol,
            passed: residual <= tol,
        });
    };

    // printed curvature data
    if let Some(rho) = &entry.expected.rho {
        let mut worst = 0.0f64;
        let mut scale = 1.0f64;
        for p in &grid {
            let r = s.ricci_at(p)?;
            for i in 0..2 {
                for j in 0..2 {
                    let want = eval_jet(&rho[i][j], p, 0)?.value();
                    scale = scale.max(want.abs());
                    worst = worst.max((r.rho[i][j] - want).abs());
                }
            }
        }
        push(String::from("ricci matches printed form"), worst / scale, tol);
    }
    if let Some(rho_s) = &entry.expected.rho_s {
        let mut worst = 0.0f64;
        let mut scale = 1.0f64;
        for p in &grid {
            let r = s.ricci_at(p)?;
            let got = [r.rho_s[0][0], r.rho_s[0][1], r.rho_s[1][1]];
            for k in 0..3 {
                let want = eval_expr_grid(&rho_s[k], &[*p])?[0];
                scale = scale.max(want.abs());
                worst = worst.max((got[k] - want).abs());
            }
        }
        push(
            String::from("symmetric ricci matches printed form"),
            worst / scale,
            tol,
        );
    }

    // solver dimension and generator cross-check
    let report = match s.kind {
        SurfaceKind::TypeA => Some(type_a_solve(s, tol)?),
        SurfaceKind::TypeB => Some(type_b_solve(s, tol)?),
        SurfaceKind::General => None,
    };
    let (dim, solver_gens): (usize, Vec<Tensor11Field>) = match (&report, s.kind) {
        (Some(r), _) => (r.dim, r.generators.iter().map(|g| g.field.clone()).collect()),
        (None, _) => match recognize_normal_form(s, &grid, tol)? {
            Some(m) => {
                let dim = if m.complete_basis { m.generators.len() } else { entry.expected.dim_p0 };
                (dim, m.generators.iter().map(|g| g.field.clone()).collect())
            }
            None => (0, Vec::new()),
        },
    };
    push(
        format!(
            "solution-space dimension {} matches expected {}",
            dim, entry.expected.dim_p0
        ),
        (dim as f64 - entry.expected.dim_p0 as f64).abs(),
        0.5,
    );

    // printed generators are parallel and classified as printed
    for (k, (g, class)) in entry
        .expected
        .generators
        .iter()
        .zip(&entry.expected.classes)
        .enumerate()
    {
        let (_, res) = is_parallel(s, g, &grid, tol)?;
        push(format!("printed generator {} is parallel", k + 1), res, tol);
        let observed = crate::parallel::classify_generator(g, &grid, tol)?.class;
        push(
            format!(
                "printed generator {} classifies as {}",
                k + 1,
                class.name()
            ),
            if observed == *class { 0.0 } else { 1.0 },
            0.5,
        );
    }

    // for one-dimensional spaces, the solver generator must span the same
    // line as the printed one
    if entry.expected.dim_p0 == 1 && solver_gens.len() == 1 && !entry.expected.generators.is_empty()
    {
        let a = &solver_gens[0];
        let b = &entry.expected.generators[0];
        let (mut dot, mut na, mut nb) = (0.0f64, 0.0f64, 0.0f64);
        for p in &grid {
            let ma = a.eval(p)?;
            let mb = b.eval(p)?;
            for i in 0..2 {
                for j in 0..2 {
                    dot += ma[i][j] * mb[i][j];
                    na += ma[i][j] * ma[i][j];
                    nb += mb[i][j] * mb[i][j];
                }
            }
        }
        let sim = 1.0 - dot.abs() / (na.sqrt() * nb.sqrt());
        push(String::from("solver generator spans the printed line"), sim, 1e-8);
    }

    // recurrence verdict on ρ_s
    if let Some(want) = entry.expected.recurrent_rho_s {
        let field = s.ricci_s_field();
        let mut all = true;
        for p in &grid {
            if s.recurrence_form(&field, p, tol)?.is_none() {
                all = false;
                break;
            }
        }
        push(
            format!(
                "symmetric ricci recurrence verdict matches (expected {})",
                want
            ),
            if all == want { 0.0 } else { 1.0 },
            0.5,
        );
    }

    let passed = items.iter().all(|i| i.passed);
    Ok(EntryCheck {
        name: entry.name.clone(),
        items,
        passed,
    })
}
