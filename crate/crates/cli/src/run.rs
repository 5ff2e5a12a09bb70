//! Command implementations: each consumes a parsed job specification and
//! produces a structured [`Report`].

use affine_walker::catalog;
use affine_walker::expr::parse_expr;
use affine_walker::extension::{build_extension, weyl_split_packet};
use affine_walker::field::ScalarField;
use affine_walker::parallel::{
    classify_generator, holonomy_fixed_space, recognize_normal_form, standard_loops, type_a_solve,
    type_b_solve, Generator, ParallelReport,
};
use affine_walker::surface::{AffineSurface, GeomError, SurfaceKind, Tensor11Field};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{build_surface, parse_axis, resolve_phi, resolve_tensor, CliError, JobSpec};
use crate::report::{
    AssertionResult, CatalogEntryResult, CatalogListEntry, CatalogSection, CheckLine,
    CurvatureSection, ExtensionSample, ExtensionSection, GeneratorInfo, OmegaSample,
    ParallelSection, Report, RicciSample, SolitonSample, SolitonSection, SurfaceInfo, fnum, ftol,
};

fn surface_info(
    surface: &AffineSurface,
    entry: Option<&catalog::CatalogEntry>,
) -> SurfaceInfo {
    let kind = match surface.kind {
        SurfaceKind::TypeA => "typeA",
        SurfaceKind::TypeB => "typeB",
        SurfaceKind::General => "general",
    };
    SurfaceInfo {
        kind: kind.to_string(),
        catalog: entry.map(|e| e.name.clone()),
        params: entry
            .map(|e| e.params.iter().map(|(_, v)| *v).collect())
            .unwrap_or_default(),
        domain: [surface.domain.x1, surface.domain.x2],
        gamma: core::array::from_fn(|n| surface.gamma[n].to_string()),
    }
}

fn mat_max(m: &[[f64; 4]; 4]) -> f64 {
    m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()))
}

fn generator_info(grid: &[[f64; 2]], tol: f64, g: &Generator) -> GeneratorInfo {
    let det = classify_generator(&g.field, grid, tol)
        .map(|c| c.det)
        .unwrap_or(0.0);
    GeneratorInfo {
        matrix: core::array::from_fn(|i| {
            core::array::from_fn(|j| g.field.comp[i][j].to_string())
        }),
        class: g.class.name().to_string(),
        det,
    }
}

fn parallel_section(
    surface: &AffineSurface,
    grid: &[[f64; 2]],
    tol: f64,
) -> Result<ParallelSection, CliError> {
    let solved: Option<ParallelReport> = match surface.kind {
        SurfaceKind::TypeA => Some(type_a_solve(surface, tol)?),
        SurfaceKind::TypeB => Some(type_b_solve(surface, tol)?),
        SurfaceKind::General => None,
    };
    let mut section = match solved {
        Some(r) => ParallelSection {
            dim: Some(r.dim),
            complete_basis: r.complete_basis,
            tag: r.tag.map(|t| t.to_string()),
            generators: r
                .generators
                .iter()
                .map(|g| generator_info(grid, tol, g))
                .collect(),
            max_residual: r.max_residual,
            tol,
            holonomy_estimate: None,
            notes: r.notes.clone(),
        },
        None => match recognize_normal_form(surface, grid, tol)? {
            Some(m) => ParallelSection {
                dim: if m.complete_basis {
                    Some(m.generators.len())
                } else {
                    None
                },
                complete_basis: m.complete_basis,
                tag: Some(m.tag.to_string()),
                generators: m
                    .generators
                    .iter()
                    .map(|g| generator_info(grid, tol, g))
                    .collect(),
                max_residual: m.max_residual,
                tol,
                holonomy_estimate: None,
                notes: Vec::new(),
            },
            None => ParallelSection {
                dim: None,
                complete_basis: false,
                tag: None,
                generators: Vec::new(),
                max_residual: 0.0,
                tol,
                holonomy_estimate: None,
                notes: vec![
                    "no analytic solver applies and no normal form was recognized".to_string(),
                ],
            },
        },
    };
    if section.dim.is_none() {
        // numeric fallback: holonomy-fixed 2x2 tensors include the identity
        let loops = standard_loops(&surface.domain);
        let (fixed, _) = holonomy_fixed_space(surface, &loops, tol.max(1e-6))?;
        section.holonomy_estimate = Some(fixed.saturating_sub(1));
        section
            .notes
            .push("dimension estimated numerically from the holonomy-fixed space".to_string());
    }
    Ok(section)
}

fn curvature_section(
    surface: &AffineSurface,
    grid: &[[f64; 2]],
    tol: f64,
) -> Result<CurvatureSection, CliError> {
    let sample_pts = surface.domain.grid(3);
    let mut samples = Vec::new();
    for p in &sample_pts {
        let r = surface.ricci_at(p).map_err(GeomError::from)?;
        samples.push(RicciSample {
            point: *p,
            rho: r.rho,
            rho_s: r.rho_s,
            rho_a12: r.rho_a[0][1],
        });
    }
    let mut rank = 0usize;
    let (mut has_plus, mut has_minus) = (false, false);
    let mut rho_scale = 0.0f64;
    for p in grid {
        let r = surface.ricci_at(p).map_err(GeomError::from)?;
        rank = rank.max(r.rank_s(tol));
        match r.det_sign(tol) {
            1 => has_plus = true,
            -1 => has_minus = true,
            _ => {}
        }
        rho_scale = rho_scale.max(
            r.rho_s
                .iter()
                .flatten()
                .fold(0.0f64, |a, v| a.max(v.abs())),
        );
    }
    let det_sign = match (has_plus, has_minus) {
        (true, true) => "mixed",
        (true, false) => "+",
        (false, true) => "-",
        (false, false) => "0",
    };
    let (pf, pf_res) = surface.is_projectively_flat(grid, tol)?;
    let (recurrent, omega_samples) = if rho_scale <= tol {
        (None, Vec::new())
    } else {
        let rho_s = surface.ricci_s_field();
        let mut all = true;
        let mut any = false;
        let mut omegas = Vec::new();
        for p in grid {
            let r = surface.ricci_at(p).map_err(GeomError::from)?;
            let scale = r
                .rho_s
                .iter()
                .flatten()
                .fold(0.0f64, |a, v| a.max(v.abs()));
            if scale <= tol * rho_scale.max(1.0) {
                continue; // recurrence undefined where rho_s vanishes
            }
            any = true;
            let w = surface.recurrence_form(&rho_s, p, tol)?;
            if w.is_none() {
                all = false;
            }
            if omegas.len() < 9 {
                omegas.push(OmegaSample { point: *p, omega: w });
            }
        }
        (if any { Some(all) } else { None }, omegas)
    };
    Ok(CurvatureSection {
        samples,
        rank_s: rank,
        det_sign: det_sign.to_string(),
        rank_tol: tol,
        projectively_flat: pf,
        projective_residual: pf_res,
        recurrent,
        omega_samples,
        tol,
    })
}

fn eval_assertion(report: &Report, a: &str) -> Result<(bool, String), CliError> {
    let need = |msg: &str| CliError::Spec(format!("assertion '{}' needs {}", a, msg));
    if let Some(n) = a.strip_prefix("dim=") {
        let n: usize = n
            .parse()
            .map_err(|_| CliError::Spec(format!("bad assertion '{}'", a)))?;
        let p = report.parallel.as_ref().ok_or_else(|| need("a classify run"))?;
        let have = p.dim.or(p.holonomy_estimate);
        return Ok((
            have == Some(n),
            match have {
                Some(d) => format!("dimension is {}", d),
                None => "dimension undetermined".to_string(),
            },
        ));
    }
    if let Some(n) = a.strip_prefix("rank=") {
        let n: usize = n
            .parse()
            .map_err(|_| CliError::Spec(format!("bad assertion '{}'", a)))?;
        let c = report.curvature.as_ref().ok_or_else(|| need("a classify run"))?;
        return Ok((c.rank_s == n, format!("rank(rho_s) is {}", c.rank_s)));
    }
    if let Some(cls) = a.strip_prefix("class=") {
        let p = report.parallel.as_ref().ok_or_else(|| need("a classify run"))?;
        let found = p.generators.iter().any(|g| g.class == cls);
        return Ok((
            found,
            format!(
                "generator classes: [{}]",
                p.generators
                    .iter()
                    .map(|g| g.class.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        ));
    }
    let curv = |want: Option<bool>,
                field: &str|
     -> Result<(bool, String), CliError> {
        let c = report.curvature.as_ref().ok_or_else(|| need("a classify run"))?;
        match field {
            "recurrent" => Ok((
                c.recurrent == want,
                format!("recurrent verdict is {:?} (tol {})", c.recurrent, ftol(c.tol)),
            )),
            _ => Ok((
                Some(c.projectively_flat) == want,
                format!(
                    "projectively flat is {} (residual {}, tol {})",
                    c.projectively_flat,
                    fnum(c.projective_residual),
                    ftol(c.tol)
                ),
            )),
        }
    };
    match a {
        "recurrent" => return curv(Some(true), "recurrent"),
        "not-recurrent" => return curv(Some(false), "recurrent"),
        "projectively-flat" => return curv(Some(true), "pf"),
        "not-projectively-flat" => return curv(Some(false), "pf"),
        _ => {}
    }
    let ext = |f: fn(&ExtensionSection) -> bool, want: bool| -> Result<(bool, String), CliError> {
        let e = report.extension.as_ref().ok_or_else(|| need("an extend run"))?;
        Ok((
            f(e) == want,
            format!(
                "max |Bach| = {}, max ||W+|| = {}, max ||W-|| = {} (tol {})",
                fnum(e.bach_max),
                fnum(e.weyl_plus_max),
                fnum(e.weyl_minus_max),
                ftol(e.tol)
            ),
        ))
    };
    match a {
        "bach-flat" => return ext(|e| e.bach_flat, true),
        "not-bach-flat" => return ext(|e| e.bach_flat, false),
        "self-dual" => return ext(|e| e.self_dual, true),
        "not-self-dual" => return ext(|e| e.self_dual, false),
        "anti-self-dual" => return ext(|e| e.anti_self_dual, true),
        "not-anti-self-dual" => return ext(|e| e.anti_self_dual, false),
        _ => {}
    }
    let sol = |want_holds: Option<bool>, want_iso: Option<bool>| -> Result<(bool, String), CliError> {
        let s = report
            .soliton
            .as_ref()
            .ok_or_else(|| need("a soliton or qe run"))?;
        let ok = want_holds.map_or(true, |w| s.holds == w)
            && want_iso.map_or(true, |w| s.isotropic_gradient == w);
        Ok((
            ok,
            format!(
                "max residual {}, max ||grad f||^2 = {} (tol {})",
                fnum(s.residual_max),
                fnum(s.gradient_norm2_max),
                ftol(s.tol)
            ),
        ))
    };
    match a {
        "holds" => sol(Some(true), None),
        "fails" => sol(Some(false), None),
        "isotropic" => sol(None, Some(true)),
        _ => Err(CliError::Spec(format!("unknown assertion '{}'", a))),
    }
}

fn apply_assertions(report: &mut Report, asserts: &[String]) -> Result<(), CliError> {
    for a in asserts {
        let (passed, detail) = eval_assertion(report, a)?;
        report.assertions.push(AssertionResult {
            assertion: a.clone(),
            passed,
            detail,
        });
    }
    Ok(())
}

pub fn classify(job: &JobSpec) -> Result<Report, CliError> {
    let opts = &job.options;
    let (surface, entry) = build_surface(&job.surface)?;
    let grid = surface.domain.grid(opts.grid);
    let mut report = Report::new("classify", opts.seed, opts.tol, opts.grid);
    report.surface = Some(surface_info(&surface, entry.as_ref()));
    report.curvature = Some(curvature_section(&surface, &grid, opts.tol)?);
    report.parallel = Some(parallel_section(&surface, &grid, opts.tol)?);
    apply_assertions(&mut report, &opts.assert)?;
    Ok(report)
}

/// Seeded sample points on the cotangent bundle: `base_samples` base points
/// uniform in the domain times `fiber_samples` fiber points in `[-1, 1]²`.
fn bundle_samples(surface: &AffineSurface, opts: &crate::config::Options) -> Vec<[f64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let d = &surface.domain;
    let mut pts = Vec::new();
    for _ in 0..opts.base_samples.max(1) {
        let x1 = rng.gen_range(d.x1[0]..d.x1[1]);
        let x2 = rng.gen_range(d.x2[0]..d.x2[1]);
        for _ in 0..opts.fiber_samples.max(1) {
            let y1 = rng.gen_range(-1.0..1.0);
            let y2 = rng.gen_range(-1.0..1.0);
            pts.push([x1, x2, y1, y2]);
        }
    }
    pts
}

struct BundleSetup {
    surface: AffineSurface,
    entry: Option<catalog::CatalogEntry>,
    tensor: Option<Tensor11Field>,
}

fn build_bundle(job: &JobSpec) -> Result<(BundleSetup, affine_walker::extension::WalkerMetric), CliError> {
    let opts = &job.options;
    let (surface, entry) = build_surface(&job.surface)?;
    let grid = surface.domain.grid(opts.grid);
    let tensor = match &job.tensor_t {
        Some(ts) => Some(resolve_tensor(&surface, ts, opts.tol, &grid)?),
        None => None,
    };
    let phi = resolve_phi(
        &surface,
        job.phi.as_ref(),
        job.tensor_t.as_ref(),
        tensor.as_ref(),
        job.potential.as_ref(),
    )?;
    let metric = build_extension(&surface, Some(phi), tensor.clone())
        .with_orientation(opts.orientation);
    Ok((
        BundleSetup {
            surface,
            entry,
            tensor,
        },
        metric,
    ))
}

pub fn extend(job: &JobSpec) -> Result<Report, CliError> {
    let opts = &job.options;
    let (setup, metric) = build_bundle(job)?;
    let mut report = Report::new("extend", opts.seed, opts.tol, opts.grid);
    report.surface = Some(surface_info(&setup.surface, setup.entry.as_ref()));
    let mut samples = Vec::new();
    let (mut bach_max, mut wp_max, mut wm_max) = (0.0f64, 0.0f64, 0.0f64);
    for q in bundle_samples(&setup.surface, opts) {
        let packet = metric.curvature_packet(&q)?;
        let split = weyl_split_packet(&packet, opts.orientation);
        let b = mat_max(&packet.bach);
        let wp = split.plus_comp2.max(0.0).sqrt();
        let wm = split.minus_comp2.max(0.0).sqrt();
        bach_max = bach_max.max(b);
        wp_max = wp_max.max(wp);
        wm_max = wm_max.max(wm);
        samples.push(ExtensionSample {
            point: q,
            bach_max: b,
            weyl_plus: wp,
            weyl_minus: wm,
        });
    }
    report.extension = Some(ExtensionSection {
        orientation: opts.orientation,
        samples,
        bach_max,
        weyl_plus_max: wp_max,
        weyl_minus_max: wm_max,
        bach_flat: bach_max <= opts.tol,
        self_dual: wm_max <= opts.tol * (1.0 + wp_max),
        anti_self_dual: wp_max <= opts.tol * (1.0 + wm_max),
        tol: opts.tol,
    });
    apply_assertions(&mut report, &opts.assert)?;
    Ok(report)
}

fn soliton_like(job: &JobSpec, quasi_einstein: bool) -> Result<Report, CliError> {
    let opts = &job.options;
    let potential = job.potential.as_ref().ok_or_else(|| {
        CliError::Spec("soliton/qe runs require a [potential] block with f".into())
    })?;
    let f_expr = parse_expr(&potential.f)
        .map_err(|e| CliError::Spec(format!("cannot parse potential.f: {}", e)))?;
    if f_expr.max_var_index().map_or(false, |i| i > 1) {
        return Err(CliError::Spec(
            "potential.f may only use the surface coordinates x1, x2".into(),
        ));
    }
    let f = ScalarField::Expr(f_expr.clone());
    let (setup, metric) = build_bundle(job)?;
    let mu = if quasi_einstein { potential.mu } else { 0.0 };
    let command = if quasi_einstein { "qe" } else { "soliton" };
    let mut report = Report::new(command, opts.seed, opts.tol, opts.grid);
    report.surface = Some(surface_info(&setup.surface, setup.entry.as_ref()));

    let mut warnings = Vec::new();
    if let (Some(t), Some(ts)) = (&setup.tensor, &job.tensor_t) {
        // df must annihilate the kernel of a nilpotent kernel-aligned T,
        // otherwise a nonzero residual is structural, not numeric
        if ts.mode.as_deref() == Some("from-recurrence")
            || ts.mode.as_deref() == Some("explicit")
        {
            let c = setup.surface.domain.center();
            if let (Ok(tv), Ok(fj)) = (t.eval(&c), f.jet(&c, 1)) {
                let axis = parse_axis(ts)?;
                let scale = tv.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
                let (kernel_dir, off) = match axis {
                    affine_walker::parallel::KernelAxis::D1 => {
                        (0usize, tv[0][0].abs().max(tv[1][0].abs()).max(tv[1][1].abs()))
                    }
                    affine_walker::parallel::KernelAxis::D2 => {
                        (1usize, tv[0][0].abs().max(tv[0][1].abs()).max(tv[1][1].abs()))
                    }
                };
                if scale > opts.tol && off <= 1e-9 * scale.max(1.0) && fj.d(kernel_dir).abs() > opts.tol
                {
                    warnings.push(format!(
                        "df does not annihilate the kernel of T (|df(kernel)| = {} at the domain center); a nonzero residual is expected",
                        fnum(fj.d(kernel_dir).abs())
                    ));
                }
            }
        }
    }

    let mut samples = Vec::new();
    let (mut res_max, mut iso_max) = (0.0f64, 0.0f64);
    for q in bundle_samples(&setup.surface, opts) {
        let r = metric.qe_residual(&f, mu, potential.lambda, &q)?;
        let res = mat_max(&r);
        let iso = metric.isotropy(&f, &q)?;
        res_max = res_max.max(res);
        iso_max = iso_max.max(iso.abs());
        samples.push(SolitonSample {
            point: q,
            residual: res,
            gradient_norm2: iso,
        });
    }
    report.soliton = Some(SolitonSection {
        condition: if quasi_einstein {
            "quasi-einstein".to_string()
        } else {
            "gradient ricci soliton".to_string()
        },
        lambda: potential.lambda,
        mu: if quasi_einstein { Some(potential.mu) } else { None },
        samples,
        residual_max: res_max,
        gradient_norm2_max: iso_max,
        holds: res_max <= opts.tol,
        isotropic_gradient: iso_max <= opts.tol,
        tol: opts.tol,
        warnings,
    });
    apply_assertions(&mut report, &opts.assert)?;
    Ok(report)
}

pub fn soliton(job: &JobSpec) -> Result<Report, CliError> {
    soliton_like(job, false)
}

pub fn qe(job: &JobSpec) -> Result<Report, CliError> {
    soliton_like(job, true)
}

pub fn catalog_list(opts: &crate::config::Options) -> Report {
    let mut report = Report::new("catalog list", opts.seed, opts.tol, opts.grid);
    report.catalog = Some(CatalogSection {
        listing: catalog::list()
            .into_iter()
            .map(|(n, d)| CatalogListEntry {
                name: n.to_string(),
                description: d.to_string(),
            })
            .collect(),
        description: None,
        params: Vec::new(),
        results: Vec::new(),
        all_passed: None,
    });
    report
}

pub fn catalog_show(
    opts: &crate::config::Options,
    name: &str,
    params: &[f64],
) -> Result<Report, CliError> {
    let params = if params.is_empty() {
        catalog::default_params(name)
    } else {
        params.to_vec()
    };
    let entry = catalog::make(name, &params)
        .map_err(|e| CliError::Spec(format!("catalog entry '{}': {}", name, e)))?;
    let mut report = Report::new("catalog show", opts.seed, opts.tol, opts.grid);
    report.surface = Some(surface_info(&entry.surface, Some(&entry)));
    let grid = entry.surface.domain.grid(opts.grid);
    report.curvature = Some(curvature_section(&entry.surface, &grid, opts.tol)?);
    report.parallel = Some(parallel_section(&entry.surface, &grid, opts.tol)?);
    let check = catalog::check_entry(&entry, opts.tol.max(1e-7))?;
    let worst = check
        .items
        .iter()
        .fold(0.0f64, |a, i| a.max(i.residual));
    report.catalog = Some(CatalogSection {
        listing: Vec::new(),
        description: Some(entry.description.clone()),
        params: entry
            .params
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect(),
        results: vec![CatalogEntryResult {
            name: check.name.clone(),
            passed: check.passed,
            worst_residual: worst,
            items: check
                .items
                .iter()
                .map(|i| CheckLine {
                    label: i.label.clone(),
                    residual: i.residual,
                    tol: i.tol,
                    passed: i.passed,
                })
                .collect(),
        }],
        all_passed: Some(check.passed),
    });
    apply_assertions(&mut report, &opts.assert)?;
    Ok(report)
}

pub fn catalog_run_all(opts: &crate::config::Options) -> Result<Report, CliError> {
    let mut report = Report::new("catalog run-all", opts.seed, opts.tol, opts.grid);
    let mut results = Vec::new();
    let mut all = true;
    let tol = opts.tol.max(1e-7);
    let entries = catalog::all_default_entries()
        .into_iter()
        .chain(catalog::families_grid());
    for entry in entries {
        let check = catalog::check_entry(&entry, tol)?;
        let worst = check
            .items
            .iter()
            .fold(0.0f64, |a, i| a.max(i.residual));
        all = all && check.passed;
        let items = if check.passed {
            Vec::new()
        } else {
            check
                .items
                .iter()
                .map(|i| CheckLine {
                    label: i.label.clone(),
                    residual: i.residual,
                    tol: i.tol,
                    passed: i.passed,
                })
                .collect()
        };
        results.push(CatalogEntryResult {
            name: check.name.clone(),
            passed: check.passed,
            worst_residual: worst,
            items,
        });
    }
    report.catalog = Some(CatalogSection {
        listing: Vec::new(),
        description: Some("master regression sweep over every catalog entry and parameter family".to_string()),
        params: Vec::new(),
        results,
        all_passed: Some(all),
    });
    if !all {
        // surfaced via exit code by the caller
        report.assertions.push(AssertionResult {
            assertion: "catalog-regression".to_string(),
            passed: false,
            detail: "at least one catalog entry failed its checks".to_string(),
        });
    }
    Ok(report)
}
