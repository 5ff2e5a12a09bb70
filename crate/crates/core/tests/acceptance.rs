//! Acceptance suite: one pass/fail line per criterion, each with its pinned
//! tolerance. Every check replays a published closed-form statement against
//! the numeric pipeline; failures print the worst observed residual.

use affine_walker::catalog::{all_default_entries, families_grid, make};
use affine_walker::expr::{expr, Expr};
use affine_walker::extension::{build_extension, nilpotent_phi};
use affine_walker::field::ScalarField;
use affine_walker::parallel::{
    construct_nilpotent_from_recurrence, holonomy_fixed_space, is_parallel, parallel_transport,
    recognize_normal_form, standard_loops, type_a_solve, type_b_solve, KernelAxis,
    StructureClass,
};
use affine_walker::surface::{
    AffineSurface, Box2, SurfaceKind, SymBilinField, Tensor11Field,
};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Tally {
    lines: Vec<(usize, bool, String)>,
}

impl Tally {
    fn record(&mut self, n: usize, result: Result<String, String>) {
        match result {
            Ok(msg) => {
                println!("criterion {:2}: PASS — {}", n, msg);
                self.lines.push((n, true, msg));
            }
            Err(msg) => {
                println!("criterion {:2}: FAIL — {}", n, msg);
                self.lines.push((n, false, msg));
            }
        }
    }
}

fn box_a() -> Box2 {
    Box2::new([-1.0, 1.0], [-1.0, 1.0])
}

fn mat_abs_max(m: &[[f64; 4]; 4]) -> f64 {
    m.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max)
}

/// `1 − |⟨a, b⟩| / (‖a‖‖b‖)` over sampled field values (0 when the fields
/// span the same line).
fn line_distance(
    s: &AffineSurface,
    a: &Tensor11Field,
    b: &Tensor11Field,
    grid: &[[f64; 2]],
) -> f64 {
    let (mut dot, mut na, mut nb) = (0.0f64, 0.0f64, 0.0f64);
    for p in grid {
        let ma = a.eval(p).unwrap();
        let mb = b.eval(p).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                dot += ma[i][j] * mb[i][j];
                na += ma[i][j] * ma[i][j];
                nb += mb[i][j] * mb[i][j];
            }
        }
    }
    let _ = s;
    1.0 - dot.abs() / (na.sqrt() * nb.sqrt())
}

/// The kernel-aligned sample surface: Γ₁₂¹ = x¹, Γ₂₂¹ = x², Γ₂₂² = x¹.
fn kernel_aligned_sample() -> AffineSurface {
    AffineSurface::general(
        [
            Expr::Num(0.0),
            Expr::Num(0.0),
            expr("x1"),
            Expr::Num(0.0),
            expr("x2"),
            expr("x1"),
        ],
        box_a(),
    )
}

fn criterion_1() -> Result<String, String> {
    // kernel-aligned family: ρ_s = (∂₁Γ₂₂¹ − ∂₂Γ₁₂¹) dx²⊗dx²
    let s = kernel_aligned_sample();
    let mut worst = 0.0f64;
    for p in s.domain.grid(5) {
        let r = s.ricci_at(&p).map_err(|e| format!("{:?}", e))?;
        // ∂₁Γ₂₂¹ = 0, ∂₂Γ₁₂¹ = 0 for this instance
        let want = [[0.0, 0.0], [0.0, 0.0]];
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((r.rho_s[i][j] - want[i][j]).abs());
            }
        }
    }
    if worst > 1e-9 {
        return Err(format!("ρ_s display residual {:.2e} > 1e-9", worst));
    }
    // Q with c = 1: ρ₁₂ = (x¹)⁻²
    let q = make("Q", &[1.0]).map_err(|e| format!("{:?}", e))?;
    let mut worst_q = 0.0f64;
    for p in q.surface.domain.grid(5) {
        let r = q.surface.ricci_at(&p).map_err(|e| format!("{:?}", e))?;
        worst_q = worst_q.max((r.rho[0][1] - p[0].powi(-2)).abs());
    }
    if worst_q > 1e-12 {
        return Err(format!("ρ₁₂ residual {:.2e} > 1e-12", worst_q));
    }
    Ok(format!(
        "convention calibration: ρ_s display residual {:.1e} (tol 1e-9), ρ₁₂ residual {:.1e} (tol 1e-12)",
        worst, worst_q
    ))
}

fn criterion_2() -> Result<String, String> {
    let tol = 1e-8;
    let mut worst = 0.0f64;
    let mut count = 0usize;
    let mut check_fields =
        |s: &AffineSurface, fields: &[Tensor11Field], label: &str| -> Result<(), String> {
            let grid = s.domain.grid(5);
            for (k, t) in fields.iter().enumerate() {
                let (ok, res) = is_parallel(s, t, &grid, tol).map_err(|e| format!("{:?}", e))?;
                worst = worst.max(res);
                count += 1;
                if !ok {
                    return Err(format!(
                        "{} basis element {} residual {:.2e} > {:.0e}",
                        label,
                        k + 1,
                        res,
                        tol
                    ));
                }
            }
            Ok(())
        };

    // printed gradient-case bases (constant-coefficient and kernel-aligned)
    let e3a = make("surface-3a", &[]).map_err(|e| format!("{:?}", e))?;
    check_fields(&e3a.surface, &e3a.expected.generators, "gradient nilpotent")?;

    // kernel-aligned sample with integrable gradient pair: full recognized basis
    let s3b = kernel_aligned_sample();
    let grid = s3b.domain.grid(5);
    let m = recognize_normal_form(&s3b, &grid, tol)
        .map_err(|e| format!("{:?}", e))?
        .ok_or("kernel-aligned sample not recognized")?;
    if !m.complete_basis || m.generators.len() != 3 {
        return Err(format!(
            "kernel-aligned sample expected a full basis, got tag {} with {} generators",
            m.tag,
            m.generators.len()
        ));
    }
    let fields: Vec<Tensor11Field> = m.generators.iter().map(|g| g.field.clone()).collect();
    check_fields(&s3b, &fields, "kernel-aligned gradient")?;

    // rotation and diagonal gradient bases
    for name in ["surface-3e", "surface-3g"] {
        let e = make(name, &[]).map_err(|e| format!("{:?}", e))?;
        let grid = e.surface.domain.grid(5);
        let m = recognize_normal_form(&e.surface, &grid, tol)
            .map_err(|e| format!("{:?}", e))?
            .ok_or("gradient sample not recognized")?;
        if !m.complete_basis {
            return Err(format!("{}: expected full basis", name));
        }
        let fields: Vec<Tensor11Field> = m.generators.iter().map(|g| g.field.clone()).collect();
        check_fields(&e.surface, &fields, name)?;
    }

    // half-plane bases for all three sign regimes of Q and both P branches
    for (name, params) in [
        ("Q", vec![1.0]),
        ("Q", vec![-1.0]),
        ("Q", vec![0.0]),
        ("P+", vec![2.0]),
        ("P-", vec![2.0]),
    ] {
        let e = make(name, &params).map_err(|e| format!("{:?}", e))?;
        let report = type_b_solve(&e.surface, tol).map_err(|e| format!("{:?}", e))?;
        if report.dim != 3 || report.generators.len() != 3 {
            return Err(format!(
                "{}({}): expected 3 generators, got dim {} with {}",
                name,
                params[0],
                report.dim,
                report.generators.len()
            ));
        }
        let fields: Vec<Tensor11Field> =
            report.generators.iter().map(|g| g.field.clone()).collect();
        check_fields(&e.surface, &fields, name)?;
    }

    Ok(format!(
        "printed bases: {} basis elements parallel, worst ∇T residual {:.1e} (tol 1e-8)",
        count, worst
    ))
}

fn criterion_3() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA1);
    let domain = box_a();
    let grid = domain.grid(4);
    let mut worst_sim = 0.0f64;
    // rank-one family: Γ₁₁² = Γ₁₂² = 0, nonzero curvature
    let mut done = 0;
    while done < 20 {
        let g: [f64; 4] = core::array::from_fn(|_| rng.gen_range(-1.5..1.5));
        let s = AffineSurface::type_a([g[0], 0.0, g[1], 0.0, g[2], g[3]], domain.clone());
        let r = s.ricci_at(&domain.center()).map_err(|e| format!("{:?}", e))?;
        let rnorm = r.rho.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
        if rnorm < 0.05 {
            continue;
        }
        let report = type_a_solve(&s, 1e-8).map_err(|e| format!("{:?}", e))?;
        if report.dim != 1 {
            return Err(format!(
                "rank-one surface {:?}: expected dim 1, got {}",
                g, report.dim
            ));
        }
        // closed form e^{−Γ₁₁¹x¹ + (Γ₂₂² − Γ₁₂¹)x²} ∂₁⊗dx²
        let pre = Expr::func(
            affine_walker::expr::Func::Exp,
            Expr::add(
                Expr::mul(Expr::Num(-g[0]), Expr::Var(affine_walker::expr::Var::X1)),
                Expr::mul(Expr::Num(g[3] - g[1]), Expr::Var(affine_walker::expr::Var::X2)),
            ),
        );
        let closed = Tensor11Field::from_exprs([
            [Expr::Num(0.0), pre],
            [Expr::Num(0.0), Expr::Num(0.0)],
        ]);
        let d = line_distance(&s, &report.generators[0].field, &closed, &grid);
        worst_sim = worst_sim.max(d);
        if d > 1e-10 {
            return Err(format!(
                "rank-one surface {:?}: generator line distance {:.2e} > 1e-10",
                g, d
            ));
        }
        done += 1;
    }
    // rank-two surfaces: empty trace-free parallel space
    let mut done2 = 0;
    while done2 < 20 {
        let g: [f64; 6] = core::array::from_fn(|_| rng.gen_range(-1.5..1.5));
        let s = AffineSurface::type_a(g, domain.clone());
        let r = s.ricci_at(&domain.center()).map_err(|e| format!("{:?}", e))?;
        if r.det_s.abs() < 0.05 {
            continue;
        }
        let report = type_a_solve(&s, 1e-8).map_err(|e| format!("{:?}", e))?;
        if report.dim != 0 {
            return Err(format!(
                "rank-two surface {:?}: expected dim 0, got {}",
                g, report.dim
            ));
        }
        done2 += 1;
    }
    Ok(format!(
        "rank-one normal form: 20 surfaces dim 1, worst generator line distance {:.1e} (tol 1e-10); 20 rank-two surfaces dim 0",
        worst_sim
    ))
}

fn criterion_4() -> Result<String, String> {
    let e = make("R52", &[]).map_err(|e| format!("{:?}", e))?;
    let s = &e.surface;
    let grid = s.domain.grid(3);
    let mut worst = 0.0f64;
    let rho_s_expected = e.expected.rho_s.as_ref().unwrap();
    for p in &grid {
        let r = s.ricci_at(p).map_err(|e| format!("{:?}", e))?;
        let got = [r.rho_s[0][0], r.rho_s[0][1], r.rho_s[1][1]];
        for k in 0..3 {
            let want = affine_walker::jet::eval_jet(&rho_s_expected[k], p, 0)
                .map_err(|e| format!("{:?}", e))?
                .value();
            worst = worst.max((got[k] - want).abs());
        }
    }
    if worst > 1e-9 {
        return Err(format!("ρ_s residual {:.2e} > 1e-9", worst));
    }
    let report = type_b_solve(s, 1e-8).map_err(|e| format!("{:?}", e))?;
    if report.dim != 0 {
        return Err(format!("expected dim 0, got {}", report.dim));
    }
    let field = s.ricci_s_field();
    let mut none_count = 0usize;
    for p in &grid {
        if s
            .recurrence_form(&field, p, 1e-6)
            .map_err(|e| format!("{:?}", e))?
            .is_none()
        {
            none_count += 1;
        }
    }
    if none_count != grid.len() {
        return Err(format!(
            "recurrence_form returned a fit at {}/{} points",
            grid.len() - none_count,
            grid.len()
        ));
    }
    Ok(format!(
        "rank-one non-recurrent model: ρ_s residual {:.1e} (tol 1e-9), dim 0, recurrence_form None at all {} points (tol 1e-6)",
        worst,
        grid.len()
    ))
}

fn criterion_5() -> Result<String, String> {
    let entries = families_grid();
    let mut worst_rho = 0.0f64;
    let mut worst_line = 0.0f64;
    for e in &entries {
        let s = &e.surface;
        let grid = s.domain.grid(4);
        // printed ρ and/or ρ_s
        for p in &grid {
            let r = s.ricci_at(p).map_err(|er| format!("{:?}", er))?;
            let mut scale = 1.0f64;
            let mut res = 0.0f64;
            if let Some(rho) = &e.expected.rho {
                for i in 0..2 {
                    for j in 0..2 {
                        let want = affine_walker::jet::eval_jet(&rho[i][j], p, 0)
                            .map_err(|er| format!("{:?}", er))?
                            .value();
                        scale = scale.max(want.abs());
                        res = res.max((r.rho[i][j] - want).abs());
                    }
                }
            }
            if let Some(rho_s) = &e.expected.rho_s {
                let got = [r.rho_s[0][0], r.rho_s[0][1], r.rho_s[1][1]];
                for k in 0..3 {
                    let want = affine_walker::jet::eval_jet(&rho_s[k], p, 0)
                        .map_err(|er| format!("{:?}", er))?
                        .value();
                    scale = scale.max(want.abs());
                    res = res.max((got[k] - want).abs());
                }
            }
            let rel = res / scale;
            worst_rho = worst_rho.max(rel);
            if rel > 1e-9 {
                return Err(format!("{}: curvature residual {:.2e} > 1e-9", e.name, rel));
            }
        }
        let report = type_b_solve(s, 1e-8).map_err(|er| format!("{:?}", er))?;
        if report.dim != 1 {
            return Err(format!("{}: expected dim 1, got {}", e.name, report.dim));
        }
        let d = line_distance(s, &report.generators[0].field, &e.expected.generators[0], &grid);
        worst_line = worst_line.max(d);
        if d > 1e-8 {
            return Err(format!(
                "{}: generator line distance {:.2e} > 1e-8",
                e.name, d
            ));
        }
    }
    Ok(format!(
        "{} family grid points: dim 1 everywhere (never 2), worst curvature residual {:.1e} (tol 1e-9), worst generator line distance {:.1e} (tol 1e-8)",
        entries.len(),
        worst_rho,
        worst_line
    ))
}

fn criterion_6() -> Result<String, String> {
    let mut entries = all_default_entries();
    entries.extend(families_grid());
    let mut checked = 0usize;
    let mut worst_omega = 0.0f64;
    for e in &entries {
        let s = &e.surface;
        let grid = s.domain.grid(3);
        let center = s.domain.center();
        let r = s.ricci_at(&center).map_err(|er| format!("{:?}", er))?;
        let rs_norm = r
            .rho_s
            .iter()
            .flatten()
            .map(|v| v.abs())
            .fold(0.0, f64::max);
        let scale = r.rho.iter().flatten().map(|v| v.abs()).fold(1.0, f64::max);
        if rs_norm <= 1e-8 * scale {
            continue; // trichotomy only constrains ρ_s ≠ 0
        }
        checked += 1;
        let rank = r.rank_s(1e-8);
        let det_sign = if rank == 2 {
            if r.det_s > 0.0 { 1i8 } else { -1i8 }
        } else {
            0
        };
        let field = s.ricci_s_field();
        let mut recurrent = true;
        for p in &grid {
            if s
                .recurrence_form(&field, p, 1e-6)
                .map_err(|er| format!("{:?}", er))?
                .is_none()
            {
                recurrent = false;
                break;
            }
        }
        let has = |class: StructureClass| e.expected.classes.contains(&class);
        let want_kahler = det_sign == 1 && recurrent;
        let want_para = det_sign == -1 && recurrent;
        let want_nil = rank == 1 && recurrent;
        if has(StructureClass::Kahler) != want_kahler
            || has(StructureClass::ParaKahler) != want_para
            || has(StructureClass::NilpotentKahler) != want_nil
        {
            return Err(format!(
                "{}: classes {:?} vs (det sign {}, rank {}, recurrent {})",
                e.name, e.expected.classes, det_sign, rank, recurrent
            ));
        }
        // recurrence 1-form proof displays, checked on the entries whose
        // coordinates are in the corresponding normal-form gauge:
        //   kernel-aligned rank one:  ω = ∂₁log ρ₂₂ dx¹ + (∂₂log ρ₂₂ − 2Γ₂₂²) dx²
        //   rotation gauge (det > 0): ω = (∂₁log ρ₁₁ − 2Γ₁₁¹) dx¹ + (∂₂log ρ₂₂ + 2Γ₁₁²) dx²
        //   diagonal gauge (det < 0): ω = (∂₁log ρ₁₂ − Γ₁₁¹) dx¹ + (∂₂log ρ₁₂ − Γ₂₂²) dx²
        // (the sign of the Γ₁₁² term in the rotation gauge is fixed by the
        // defining equation ∇ρ_s = ω⊗ρ_s). Half-plane family entries are not
        // in these gauges; for them only the recurrence verdict is asserted.
        if recurrent {
            let expected_omega: Option<Box<dyn Fn(&[f64; 2]) -> [f64; 2]>> = match s.kind {
                SurfaceKind::TypeA => {
                    let c = s.constants.unwrap();
                    if c[1] == 0.0 && c[3] == 0.0 {
                        // constant ρ₂₂, so the log-derivative terms vanish
                        Some(Box::new(move |_: &[f64; 2]| [0.0, -2.0 * c[5]]))
                    } else {
                        None
                    }
                }
                SurfaceKind::General => {
                    if e.name == "surface-3b" {
                        // ρ₂₂ = x², Γ₂₂² = x¹
                        Some(Box::new(|p: &[f64; 2]| [0.0, 1.0 / p[1] - 2.0 * p[0]]))
                    } else if e.name == "surface-3d" {
                        // ρ₁₁ = ρ₂₂ = 1, Γ₁₁¹ = 0, Γ₁₁² = x²
                        Some(Box::new(|p: &[f64; 2]| [0.0, 2.0 * p[1]]))
                    } else if e.name == "surface-3f" {
                        // ρ₁₂ = −½, Γ₁₁¹ = Γ₂₂² = x²
                        Some(Box::new(|p: &[f64; 2]| [-p[1], -p[1]]))
                    } else {
                        None
                    }
                }
                SurfaceKind::TypeB => None,
            };
            if let Some(want) = expected_omega {
                for p in &grid {
                    let om = s
                        .recurrence_form(&field, p, 1e-6)
                        .map_err(|er| format!("{:?}", er))?
                        .unwrap();
                    let w = want(p);
                    let res = (om[0] - w[0]).abs().max((om[1] - w[1]).abs());
                    worst_omega = worst_omega.max(res);
                    if res > 1e-7 {
                        return Err(format!(
                            "{}: recurrence form {:?} vs display {:?} at {:?} (res {:.2e} > 1e-7)",
                            e.name, om, w, p, res
                        ));
                    }
                }
            }
        }
    }
    Ok(format!(
        "trichotomy holds on all {} catalog entries with ρ_s ≠ 0; recurrence forms match displays, worst residual {:.1e} (tol 1e-7)",
        checked, worst_omega
    ))
}

fn sample_points(
    s: &AffineSurface,
    rng: &mut ChaCha8Rng,
    n_base: usize,
    n_fiber: usize,
) -> Vec<[f64; 4]> {
    let mut out = Vec::new();
    for _ in 0..n_base {
        let x1 = rng.gen_range(s.domain.x1[0]..s.domain.x1[1]);
        let x2 = rng.gen_range(s.domain.x2[0]..s.domain.x2[1]);
        for _ in 0..n_fiber {
            let y1 = rng.gen_range(-1.0..1.0);
            let y2 = rng.gen_range(-1.0..1.0);
            out.push([x1, x2, y1, y2]);
        }
    }
    out
}

fn phi_choices() -> Vec<(&'static str, SymBilinField)> {
    vec![
        ("zero", SymBilinField::zero()),
        (
            "polynomial",
            SymBilinField {
                comp: [
                    ScalarField::Expr(expr("x1^2")),
                    ScalarField::Expr(expr("x1*x2")),
                    ScalarField::Expr(expr("x2^2 - 1")),
                ],
            },
        ),
        (
            "trigonometric",
            SymBilinField {
                comp: [
                    ScalarField::Expr(expr("sin(x1)")),
                    ScalarField::Expr(expr("cos(x2)")),
                    ScalarField::Expr(expr("sin(x1 + x2)")),
                ],
            },
        ),
    ]
}

fn criterion_7() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB7);
    let mut worst_nil = 0.0f64;
    // nilpotent T on a half-plane family instance and the kernel-aligned sample
    let upper = make("B-alpha0-upper", &[0.5, -0.25, 1.0, 0.8]).map_err(|e| format!("{:?}", e))?;
    let s3b = make("surface-3b", &[]).map_err(|e| format!("{:?}", e))?;
    for (entry, t) in [
        (&upper, upper.expected.generators[0].clone()),
        (&s3b, Tensor11Field::constant([[0.0, 1.0], [0.0, 0.0]])),
    ] {
        for (phi_name, phi) in phi_choices() {
            let g = build_extension(&entry.surface, Some(phi), Some(t.clone()));
            for q in sample_points(&entry.surface, &mut rng, 5, 3) {
                let packet = g.curvature_packet(&q).map_err(|e| format!("{:?}", e))?;
                let b = mat_abs_max(&packet.bach);
                worst_nil = worst_nil.max(b);
                if b > 1e-7 {
                    return Err(format!(
                        "{} with {} φ: ‖B‖ = {:.2e} > 1e-7 at {:?}",
                        entry.name, phi_name, b, q
                    ));
                }
            }
        }
    }
    // T = 2·id: Bach flat and self-dual
    let tid = Tensor11Field::constant([[2.0, 0.0], [0.0, 2.0]]);
    let g = build_extension(&s3b.surface, None, Some(tid));
    let mut worst_id = 0.0f64;
    let mut worst_wminus = 0.0f64;
    for q in sample_points(&s3b.surface, &mut rng, 5, 3) {
        let packet = g.curvature_packet(&q).map_err(|e| format!("{:?}", e))?;
        worst_id = worst_id.max(mat_abs_max(&packet.bach));
        let split = affine_walker::extension::weyl_split_packet(&packet, g.orientation);
        let wm = split.minus_comp2.sqrt();
        let scale = 1.0 + split.plus_comp2.sqrt();
        worst_wminus = worst_wminus.max(wm / scale);
    }
    if worst_id > 1e-7 {
        return Err(format!("T = 2·id: ‖B‖ = {:.2e} > 1e-7", worst_id));
    }
    if worst_wminus > 1e-9 {
        return Err(format!("T = 2·id: W⁻ = {:.2e} > 1e-9", worst_wminus));
    }
    // para-Kähler T: not Bach flat
    let diag = make("B-alpha0-diagonal", &[2.0, 3.0]).map_err(|e| format!("{:?}", e))?;
    let g = build_extension(
        &diag.surface,
        None,
        Some(Tensor11Field::constant([[1.0, 0.0], [0.0, -1.0]])),
    );
    let mut max_para = 0.0f64;
    for q in sample_points(&diag.surface, &mut rng, 5, 3) {
        let packet = g.curvature_packet(&q).map_err(|e| format!("{:?}", e))?;
        max_para = max_para.max(mat_abs_max(&packet.bach));
    }
    if max_para <= 1e-3 {
        return Err(format!(
            "para-Kähler T: max ‖B‖ = {:.2e} did not exceed 1e-3",
            max_para
        ));
    }
    Ok(format!(
        "Bach dichotomy: nilpotent/c·id worst ‖B‖ {:.1e} (tol 1e-7), c·id worst W⁻ {:.1e} (tol 1e-9), para-Kähler max ‖B‖ {:.1e} (> 1e-3)",
        worst_nil.max(worst_id),
        worst_wminus,
        max_para
    ))
}

fn criterion_8() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC8);
    // constant-coefficient rank-one surface with its nilpotent generator,
    // φ = 0: anti-self-dual under the shipped orientation
    let e = make("A-rank-one", &[1.0, 2.0, 3.0, 5.0]).map_err(|e| format!("{:?}", e))?;
    let g = build_extension(&e.surface, None, Some(e.expected.generators[0].clone()));
    let mut worst_plus = 0.0f64;
    for q in sample_points(&e.surface, &mut rng, 5, 2) {
        let split = g.weyl_split(&q).map_err(|e| format!("{:?}", e))?;
        let wp = split.plus_comp2.sqrt();
        let scale = 1.0 + split.minus_comp2.sqrt();
        worst_plus = worst_plus.max(wp / scale);
    }
    if worst_plus > 1e-8 {
        return Err(format!(
            "nilpotent rank-one extension: W⁺ = {:.2e} > 1e-8",
            worst_plus
        ));
    }
    // ρ_s ≠ 0 instance with its Kähler generator: neither half vanishes
    let upper = make("B-alpha0-upper", &[0.0, -1.0, 1.0, 0.8]).map_err(|e| format!("{:?}", e))?;
    let g = build_extension(
        &upper.surface,
        None,
        Some(upper.expected.generators[0].clone()),
    );
    let mut max_half = 0.0f64;
    for q in sample_points(&upper.surface, &mut rng, 5, 2) {
        let split = g.weyl_split(&q).map_err(|e| format!("{:?}", e))?;
        max_half = max_half.max(split.plus_comp2.sqrt().max(split.minus_comp2.sqrt()));
    }
    if max_half <= 1e-3 {
        return Err(format!(
            "ρ_s ≠ 0 Kähler extension: max(W⁺, W⁻) = {:.2e} did not exceed 1e-3",
            max_half
        ));
    }
    Ok(format!(
        "duality: rank-one nilpotent extension anti-self-dual, worst W⁺ {:.1e} (tol 1e-8, same orientation as the self-dual c·id case); ρ_s ≠ 0 instance max(W⁺, W⁻) {:.1e} (> 1e-3)",
        worst_plus, max_half
    ))
}

fn criterion_9() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD9);
    let e = make("surface-3b", &[]).map_err(|e| format!("{:?}", e))?;
    let s = &e.surface;
    let grid = s.domain.grid(4);
    let t = construct_nilpotent_from_recurrence(s, &grid, 1e-8, KernelAxis::D1)
        .map_err(|e| format!("{:?}", e))?;
    let f_expr = expr("x2^2");
    let f = ScalarField::Expr(f_expr.clone());
    let points = sample_points(s, &mut rng, 5, 2);
    let mut worst_res = 0.0f64;
    let mut worst_iso = 0.0f64;
    // soliton (λ = 0) and quasi-Einstein (μ ∈ {1, 2})
    for mu in [0.0, 1.0, 2.0] {
        let phi = nilpotent_phi(s, &f_expr, mu, &t.comp[0][1], KernelAxis::D1, None);
        let g = build_extension(s, Some(phi), Some(t.clone()));
        for q in &points {
            let r = g
                .qe_residual(&f, mu, 0.0, q)
                .map_err(|e| format!("{:?}", e))?;
            worst_res = worst_res.max(mat_abs_max(&r));
            worst_iso = worst_iso.max(g.isotropy(&f, q).map_err(|e| format!("{:?}", e))?.abs());
        }
    }
    if worst_res > 1e-7 {
        return Err(format!("residual {:.2e} > 1e-7", worst_res));
    }
    if worst_iso > 1e-10 {
        return Err(format!("isotropy {:.2e} > 1e-10", worst_iso));
    }
    // perturbing the pinned φ₁₁ must break the soliton equation
    let phi = nilpotent_phi(s, &f_expr, 0.0, &t.comp[0][1], KernelAxis::D1, None);
    let phi_bad = SymBilinField {
        comp: [
            phi.comp[0].add(&ScalarField::constant(1.0)),
            phi.comp[1].clone(),
            phi.comp[2].clone(),
        ],
    };
    let g = build_extension(s, Some(phi_bad), Some(t));
    let mut max_bad = 0.0f64;
    for q in &points {
        let r = g
            .soliton_residual(&f, 0.0, q)
            .map_err(|e| format!("{:?}", e))?;
        max_bad = max_bad.max(mat_abs_max(&r));
    }
    if max_bad <= 1e-2 {
        return Err(format!(
            "perturbed φ₁₁ residual {:.2e} did not exceed 1e-2",
            max_bad
        ));
    }
    Ok(format!(
        "soliton/quasi-Einstein constructions: worst residual {:.1e} (tol 1e-7), isotropy {:.1e} (tol 1e-10), perturbed φ₁₁ residual {:.1e} (> 1e-2)",
        worst_res, worst_iso, max_bad
    ))
}

fn criterion_10() -> Result<String, String> {
    let mut surfaces: Vec<(String, AffineSurface, usize)> = Vec::new();
    for e in all_default_entries() {
        surfaces.push((e.name.clone(), e.surface.clone(), e.expected.dim_p0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xEA);
    for k in 0..20 {
        let g: [f64; 6] = core::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let (name, s) = if k % 2 == 0 {
            (
                format!("random-A-{}", k),
                AffineSurface::type_a(g, box_a()),
            )
        } else {
            (
                format!("random-B-{}", k),
                AffineSurface::type_b(g, Box2::new([0.5, 3.0], [-1.0, 1.0])),
            )
        };
        let dim = match s.kind {
            SurfaceKind::TypeA => type_a_solve(&s, 1e-7).map_err(|e| format!("{:?}", e))?.dim,
            _ => type_b_solve(&s, 1e-7).map_err(|e| format!("{:?}", e))?.dim,
        };
        surfaces.push((name, s, dim));
    }
    let mut worst_transport = 0.0f64;
    for (name, s, dim) in &surfaces {
        let loops = standard_loops(&s.domain);
        let (hol, _) =
            holonomy_fixed_space(s, &loops, 1e-6).map_err(|e| format!("{:?}", e))?;
        if hol != dim + 1 {
            return Err(format!(
                "{}: holonomy fixed space {} ≠ 1 + solver dim {}",
                name,
                hol,
                dim
            ));
        }
        // transport the solved generators around the loops
        let report = match s.kind {
            SurfaceKind::TypeA => Some(type_a_solve(s, 1e-7).map_err(|e| format!("{:?}", e))?),
            SurfaceKind::TypeB => Some(type_b_solve(s, 1e-7).map_err(|e| format!("{:?}", e))?),
            SurfaceKind::General => None,
        };
        if let Some(report) = report {
            for lp in &loops {
                for gen in &report.generators {
                    let t0 = gen.field.eval(&lp[0]).map_err(|e| format!("{:?}", e))?;
                    let t1 =
                        parallel_transport(s, t0, lp).map_err(|e| format!("{:?}", e))?;
                    let scale = t0.iter().flatten().map(|v| v.abs()).fold(1.0, f64::max);
                    let mut d = 0.0f64;
                    for i in 0..2 {
                        for j in 0..2 {
                            d = d.max((t1[i][j] - t0[i][j]).abs());
                        }
                    }
                    worst_transport = worst_transport.max(d / scale);
                    if d / scale > 1e-6 {
                        return Err(format!(
                            "{}: transported generator deviates by {:.2e} > 1e-6",
                            name,
                            d / scale
                        ));
                    }
                }
            }
        }
    }
    Ok(format!(
        "oracle equivalence on {} surfaces: holonomy dim = 1 + solver dim everywhere, worst loop-transport deviation {:.1e} (tol 1e-6)",
        surfaces.len(),
        worst_transport
    ))
}

fn inverse4(m: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut a = *m;
    let mut inv = [[0.0f64; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for col in 0..4 {
        let mut piv = col;
        for r in col + 1..4 {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let d = a[col][col];
        for j in 0..4 {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for r in 0..4 {
            if r != col {
                let f = a[r][col];
                for j in 0..4 {
                    a[r][j] -= f * a[col][j];
                    inv[r][j] -= f * inv[col][j];
                }
            }
        }
    }
    inv
}

fn criterion_11() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF1);
    let s3b = make("surface-3b", &[]).map_err(|e| format!("{:?}", e))?;
    let upper = make("B-alpha0-upper", &[0.5, -0.25, 1.0, 0.8]).map_err(|e| format!("{:?}", e))?;
    let rank1 = make("A-rank-one", &[1.0, 2.0, 3.0, 5.0]).map_err(|e| format!("{:?}", e))?;
    let q1 = make("Q", &[1.0]).map_err(|e| format!("{:?}", e))?;
    let phis = phi_choices();
    let extensions = vec![
        (
            "kernel-aligned + e₁₂ + polynomial φ",
            build_extension(
                &s3b.surface,
                Some(phis[1].1.clone()),
                Some(Tensor11Field::constant([[0.0, 1.0], [0.0, 0.0]])),
            ),
        ),
        (
            "half-plane nilpotent + trigonometric φ",
            build_extension(
                &upper.surface,
                Some(phis[2].1.clone()),
                Some(upper.expected.generators[0].clone()),
            ),
        ),
        (
            "rank-one + exponential generator",
            build_extension(&rank1.surface, None, Some(rank1.expected.generators[0].clone())),
        ),
        ("skew-Ricci half-plane, bare extension", build_extension(&q1.surface, None, None)),
    ];
    let h = 1e-3;
    let mut worst = 0.0f64;
    for (name, g) in &extensions {
        let s = &g.surface;
        let metric = |q: &[f64; 4]| g.metric_at(q).unwrap();
        let gamma_fd = |q: &[f64; 4]| -> [[[f64; 4]; 4]; 4] {
            let ginv = inverse4(&metric(q));
            let mut dg = [[[0.0f64; 4]; 4]; 4]; // dg[c][a][b] = ∂_c g_ab
            for c in 0..4 {
                let mut qp = *q;
                let mut qm = *q;
                qp[c] += h;
                qm[c] -= h;
                let gp = metric(&qp);
                let gm = metric(&qm);
                for a in 0..4 {
                    for b in 0..4 {
                        dg[c][a][b] = (gp[a][b] - gm[a][b]) / (2.0 * h);
                    }
                }
            }
            let mut out = [[[0.0f64; 4]; 4]; 4];
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        let mut acc = 0.0;
                        for d in 0..4 {
                            acc += ginv[a][d] * (dg[b][d][c] + dg[c][d][b] - dg[d][b][c]);
                        }
                        out[a][b][c] = 0.5 * acc;
                    }
                }
            }
            out
        };
        for _ in 0..20 {
            let margin = 0.2;
            let x1 = rng.gen_range(s.domain.x1[0] + margin..s.domain.x1[1] - margin);
            let x2 = rng.gen_range(s.domain.x2[0] + margin..s.domain.x2[1] - margin);
            let q = [x1, x2, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let packet = g.curvature_packet(&q).map_err(|e| format!("{:?}", e))?;
            let gfd = gamma_fd(&q);
            let mut scale = 1.0f64;
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        scale = scale.max(packet.gamma[a][b][c].abs());
                    }
                }
            }
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        let d = (packet.gamma[a][b][c] - gfd[a][b][c]).abs() / scale;
                        worst = worst.max(d);
                        if d > 1e-4 {
                            return Err(format!(
                                "{}: Christoffel Γ^{}_{}{} jet-vs-fd deviation {:.2e} > 1e-4",
                                name, a, b, c, d
                            ));
                        }
                    }
                }
            }
            // Riemann: R^a_{bcd} = ∂_cΓ^a_{db} − ∂_dΓ^a_{cb} + Γ^a_{ce}Γ^e_{db} − Γ^a_{de}Γ^e_{cb}
            let g0 = metric(&q);
            let gam0 = gamma_fd(&q);
            let mut dgam = [[[[0.0f64; 4]; 4]; 4]; 4]; // dgam[v][a][b][c]
            for v in 0..4 {
                let mut qp = q;
                let mut qm = q;
                qp[v] += h;
                qm[v] -= h;
                let gp = gamma_fd(&qp);
                let gm = gamma_fd(&qm);
                for a in 0..4 {
                    for b in 0..4 {
                        for c in 0..4 {
                            dgam[v][a][b][c] = (gp[a][b][c] - gm[a][b][c]) / (2.0 * h);
                        }
                    }
                }
            }
            let mut rscale = 1.0f64;
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        for d in 0..4 {
                            rscale = rscale.max(packet.riemann[a][b][c][d].abs());
                        }
                    }
                }
            }
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        for low in 0..4 {
                            let mut up = [0.0f64; 4];
                            for (a, v) in up.iter_mut().enumerate() {
                                let mut acc = dgam[c][a][d][b] - dgam[d][a][c][b];
                                for e in 0..4 {
                                    acc += gam0[a][c][e] * gam0[e][d][b]
                                        - gam0[a][d][e] * gam0[e][c][b];
                                }
                                *v = acc;
                            }
                            let mut lowered = 0.0;
                            for (a, v) in up.iter().enumerate() {
                                lowered += g0[low][a] * v;
                            }
                            let dev =
                                (lowered - packet.riemann[low][b][c][d]).abs() / rscale;
                            worst = worst.max(dev);
                            if dev > 1e-4 {
                                return Err(format!(
                                    "{}: Riemann R_{}{}{}{} jet-vs-fd deviation {:.2e} > 1e-4",
                                    name, low, b, c, d, dev
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!(
        "jet-vs-finite-difference agreement over {} extensions × 20 points: worst relative deviation {:.1e} (tol 1e-4)",
        extensions.len(),
        worst
    ))
}

#[test]
fn acceptance_criteria() {
    let mut tally = Tally { lines: Vec::new() };
    tally.record(1, criterion_1());
    tally.record(2, criterion_2());
    tally.record(3, criterion_3());
    tally.record(4, criterion_4());
    tally.record(5, criterion_5());
    tally.record(6, criterion_6());
    tally.record(7, criterion_7());
    tally.record(8, criterion_8());
    tally.record(9, criterion_9());
    tally.record(10, criterion_10());
    tally.record(11, criterion_11());
    let failures: Vec<_> = tally.lines.iter().filter(|(_, ok, _)| !ok).collect();
    assert!(
        failures.is_empty(),
        "acceptance failures: {:?}",
        failures
            .iter()
            .map(|(n, _, msg)| format!("criterion {}: {}", n, msg))
            .collect::<Vec<_>>()
    );
}
