//! Structured reports with two renderers: deterministic markdown (default)
//! and JSON (`--json`). Every reported number carries the tolerance it was
//! tested against.

use serde::Serialize;

/// Fixed-width scientific rendering so reports are byte-identical across
/// runs with the same specification and seed.
pub fn fnum(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{:.6e}", v)
    }
}

pub fn ftol(v: f64) -> String {
    format!("{:.1e}", v)
}

fn fpoint2(p: &[f64; 2]) -> String {
    format!("({}, {})", fnum(p[0]), fnum(p[1]))
}

fn fpoint4(q: &[f64; 4]) -> String {
    format!(
        "({}, {}, {}, {})",
        fnum(q[0]),
        fnum(q[1]),
        fnum(q[2]),
        fnum(q[3])
    )
}

#[derive(Serialize)]
pub struct SurfaceInfo {
    pub kind: String,
    pub catalog: Option<String>,
    pub params: Vec<f64>,
    pub domain: [[f64; 2]; 2],
    /// Christoffel components, printed in the expression grammar, in the
    /// order G11_1, G11_2, G12_1, G12_2, G22_1, G22_2.
    pub gamma: [String; 6],
}

#[derive(Serialize)]
pub struct RicciSample {
    pub point: [f64; 2],
    pub rho: [[f64; 2]; 2],
    pub rho_s: [[f64; 2]; 2],
    pub rho_a12: f64,
}

#[derive(Serialize)]
pub struct OmegaSample {
    pub point: [f64; 2],
    /// `None` when `ρ_s` is not recurrent at the point.
    pub omega: Option<[f64; 2]>,
}

#[derive(Serialize)]
pub struct CurvatureSection {
    pub samples: Vec<RicciSample>,
    /// Maximal numerical rank of `ρ_s` over the verification grid.
    pub rank_s: usize,
    /// "+", "-", "0", or "mixed".
    pub det_sign: String,
    pub rank_tol: f64,
    pub projectively_flat: bool,
    pub projective_residual: f64,
    /// `None` when `ρ_s` vanishes on the grid (recurrence undefined).
    pub recurrent: Option<bool>,
    pub omega_samples: Vec<OmegaSample>,
    pub tol: f64,
}

#[derive(Serialize)]
pub struct GeneratorInfo {
    /// Component expressions `T^i_j`, row-major.
    pub matrix: [[String; 2]; 2],
    pub class: String,
    pub det: f64,
}

#[derive(Serialize)]
pub struct ParallelSection {
    /// Dimension of the trace-free parallel space (0, 1, or 3); `None`
    /// when no analytic solver applies and recognition failed.
    pub dim: Option<usize>,
    pub complete_basis: bool,
    pub tag: Option<String>,
    pub generators: Vec<GeneratorInfo>,
    /// Worst `∇T` residual across generators over the verification grid.
    pub max_residual: f64,
    pub tol: f64,
    /// Numeric fallback: dimension of the holonomy-fixed space of full
    /// 2×2 tensors minus the identity direction.
    pub holonomy_estimate: Option<usize>,
    pub notes: Vec<String>,
}

#[derive(Serialize)]
pub struct ExtensionSample {
    pub point: [f64; 4],
    pub bach_max: f64,
    pub weyl_plus: f64,
    pub weyl_minus: f64,
}

#[derive(Serialize)]
pub struct ExtensionSection {
    pub orientation: i8,
    pub samples: Vec<ExtensionSample>,
    pub bach_max: f64,
    pub weyl_plus_max: f64,
    pub weyl_minus_max: f64,
    pub bach_flat: bool,
    pub self_dual: bool,
    pub anti_self_dual: bool,
    pub tol: f64,
}

#[derive(Serialize)]
pub struct SolitonSample {
    pub point: [f64; 4],
    pub residual: f64,
    pub gradient_norm2: f64,
}

#[derive(Serialize)]
pub struct SolitonSection {
    /// "soliton" or "quasi-einstein".
    pub condition: String,
    pub lambda: f64,
    pub mu: Option<f64>,
    pub samples: Vec<SolitonSample>,
    pub residual_max: f64,
    pub gradient_norm2_max: f64,
    pub holds: bool,
    pub isotropic_gradient: bool,
    pub tol: f64,
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
pub struct CatalogListEntry {
    pub name: String,
    pub description: String,
}

#[derive(Serialize)]
pub struct CheckLine {
    pub label: String,
    pub residual: f64,
    pub tol: f64,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct CatalogEntryResult {
    pub name: String,
    pub passed: bool,
    pub worst_residual: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub items: Vec<CheckLine>,
}

#[derive(Serialize)]
pub struct CatalogSection {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub listing: Vec<CatalogListEntry>,
    pub description: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<(String, f64)>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub results: Vec<CatalogEntryResult>,
    pub all_passed: Option<bool>,
}

#[derive(Serialize)]
pub struct AssertionResult {
    pub assertion: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub tol: f64,
    pub grid: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curvature: Option<CurvatureSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parallel: Option<ParallelSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub soliton: Option<SolitonSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub catalog: Option<CatalogSection>,
    pub assertions: Vec<AssertionResult>,
}

impl Report {
    pub fn new(command: &str, seed: u64, tol: f64, grid: usize) -> Report {
        Report {
            command: command.to_string(),
            seed,
            tol,
            grid,
            surface: None,
            curvature: None,
            parallel: None,
            extension: None,
            soliton: None,
            catalog: None,
            assertions: Vec::new(),
        }
    }

    pub fn assertions_passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let push = |out: &mut String, line: &str| {
            out.push_str(line);
            out.push('\n');
        };
        push(&mut out, &format!("# awalker {} report", self.command));
        push(&mut out, "");
        push(
            &mut out,
            &format!(
                "- seed: {} | tolerance: {} | verification grid: {}x{}",
                self.seed,
                ftol(self.tol),
                self.grid,
                self.grid
            ),
        );

        if let Some(s) = &self.surface {
            push(&mut out, "");
            push(&mut out, "## Surface");
            push(&mut out, "");
            if let Some(c) = &s.catalog {
                let params = s
                    .params
                    .iter()
                    .map(|v| fnum(*v))
                    .collect::<Vec<_>>()
                    .join(", ");
                push(&mut out, &format!("- catalog entry: {} [{}]", c, params));
            }
            push(&mut out, &format!("- kind: {}", s.kind));
            push(
                &mut out,
                &format!(
                    "- domain: [{}, {}] x [{}, {}]",
                    fnum(s.domain[0][0]),
                    fnum(s.domain[0][1]),
                    fnum(s.domain[1][0]),
                    fnum(s.domain[1][1])
                ),
            );
            let names = ["G11_1", "G11_2", "G12_1", "G12_2", "G22_1", "G22_2"];
            for (n, g) in names.iter().zip(s.gamma.iter()) {
                push(&mut out, &format!("- {} = {}", n, g));
            }
        }

        if let Some(c) = &self.curvature {
            push(&mut out, "");
            push(&mut out, "## Curvature");
            push(&mut out, "");
            push(
                &mut out,
                &format!(
                    "Ricci samples (each entry computed from exact jets; verdicts at tol {}):",
                    ftol(c.tol)
                ),
            );
            push(&mut out, "");
            push(
                &mut out,
                "| point | rho_11 | rho_12 | rho_21 | rho_22 | rho_s11 | rho_s12 | rho_s22 | rho_a12 |",
            );
            push(
                &mut out,
                "|---|---|---|---|---|---|---|---|---|",
            );
            for s in &c.samples {
                push(
                    &mut out,
                    &format!(
                        "| {} | {} | {} | {} | {} | {} | {} | {} | {} |",
                        fpoint2(&s.point),
                        fnum(s.rho[0][0]),
                        fnum(s.rho[0][1]),
                        fnum(s.rho[1][0]),
                        fnum(s.rho[1][1]),
                        fnum(s.rho_s[0][0]),
                        fnum(s.rho_s[0][1]),
                        fnum(s.rho_s[1][1]),
                        fnum(s.rho_a12)
                    ),
                );
            }
            push(&mut out, "");
            push(
                &mut out,
                &format!(
                    "- rank(rho_s) = {} with det sign '{}' over the grid (tol {})",
                    c.rank_s,
                    c.det_sign,
                    ftol(c.rank_tol)
                ),
            );
            push(
                &mut out,
                &format!(
                    "- projectively flat: {} (worst symmetry residual {}, tol {})",
                    c.projectively_flat,
                    fnum(c.projective_residual),
                    ftol(c.tol)
                ),
            );
            match c.recurrent {
                None => push(
                    &mut out,
                    &format!(
                        "- recurrence of rho_s: not applicable, rho_s vanishes on the grid (tol {})",
                        ftol(c.tol)
                    ),
                ),
                Some(r) => {
                    push(
                        &mut out,
                        &format!("- rho_s recurrent on the grid: {} (tol {})", r, ftol(c.tol)),
                    );
                    for s in &c.omega_samples {
                        match &s.omega {
                            Some(w) => push(
                                &mut out,
                                &format!(
                                    "  - omega at {} = [{}, {}] (tol {})",
                                    fpoint2(&s.point),
                                    fnum(w[0]),
                                    fnum(w[1]),
                                    ftol(c.tol)
                                ),
                            ),
                            None => push(
                                &mut out,
                                &format!(
                                    "  - no recurrence form at {} (tol {})",
                                    fpoint2(&s.point),
                                    ftol(c.tol)
                                ),
                            ),
                        }
                    }
                }
            }
        }

        if let Some(p) = &self.parallel {
            push(&mut out, "");
            push(&mut out, "## Parallel trace-free tensors");
            push(&mut out, "");
            match p.dim {
                Some(d) => push(
                    &mut out,
                    &format!(
                        "- solution space dimension: {} (worst nabla-T residual {}, tol {})",
                        d,
                        fnum(p.max_residual),
                        ftol(p.tol)
                    ),
                ),
                None => push(
                    &mut out,
                    "- solution space dimension: not determined analytically",
                ),
            }
            if let Some(tag) = &p.tag {
                push(&mut out, &format!("- matched normal form: {}", tag));
            }
            if !p.complete_basis {
                push(
                    &mut out,
                    "- note: listed generators do not span the full solution space",
                );
            }
            if let Some(h) = p.holonomy_estimate {
                push(
                    &mut out,
                    &format!(
                        "- numeric holonomy estimate of the dimension: {} (tol {})",
                        h,
                        ftol(p.tol)
                    ),
                );
            }
            for (n, g) in p.generators.iter().enumerate() {
                push(
                    &mut out,
                    &format!(
                        "- generator {}: class {} (det = {}, tol {})",
                        n + 1,
                        g.class,
                        fnum(g.det),
                        ftol(p.tol)
                    ),
                );
                push(&mut out, &format!("  - T^1_1 = {}", g.matrix[0][0]));
                push(&mut out, &format!("  - T^1_2 = {}", g.matrix[0][1]));
                push(&mut out, &format!("  - T^2_1 = {}", g.matrix[1][0]));
                push(&mut out, &format!("  - T^2_2 = {}", g.matrix[1][1]));
            }
            for note in &p.notes {
                push(&mut out, &format!("- note: {}", note));
            }
        }

        if let Some(e) = &self.extension {
            push(&mut out, "");
            push(&mut out, "## Cotangent-bundle extension");
            push(&mut out, "");
            push(
                &mut out,
                &format!("- orientation: {:+}", e.orientation),
            );
            push(
                &mut out,
                &format!(
                    "Curvature samples (seeded; tolerance {} for every verdict):",
                    ftol(e.tol)
                ),
            );
            push(&mut out, "");
            push(&mut out, "| point | max |Bach| | ||W+|| | ||W-|| |");
            push(&mut out, "|---|---|---|---|");
            for s in &e.samples {
                push(
                    &mut out,
                    &format!(
                        "| {} | {} | {} | {} |",
                        fpoint4(&s.point),
                        fnum(s.bach_max),
                        fnum(s.weyl_plus),
                        fnum(s.weyl_minus)
                    ),
                );
            }
            push(&mut out, "");
            push(
                &mut out,
                &format!(
                    "- Bach flat: {} (max |Bach| = {}, tol {})",
                    e.bach_flat,
                    fnum(e.bach_max),
                    ftol(e.tol)
                ),
            );
            push(
                &mut out,
                &format!(
                    "- self-dual: {} (max ||W-|| = {} against max ||W+|| = {}, tol {})",
                    e.self_dual,
                    fnum(e.weyl_minus_max),
                    fnum(e.weyl_plus_max),
                    ftol(e.tol)
                ),
            );
            push(
                &mut out,
                &format!(
                    "- anti-self-dual: {} (max ||W+|| = {} against max ||W-|| = {}, tol {})",
                    e.anti_self_dual,
                    fnum(e.weyl_plus_max),
                    fnum(e.weyl_minus_max),
                    ftol(e.tol)
                ),
            );
        }

        if let Some(s) = &self.soliton {
            push(&mut out, "");
            push(&mut out, "## Ricci soliton / quasi-Einstein check");
            push(&mut out, "");
            match s.mu {
                Some(mu) => push(
                    &mut out,
                    &format!(
                        "- condition: {} with mu = {}, lambda = {}",
                        s.condition,
                        fnum(mu),
                        fnum(s.lambda)
                    ),
                ),
                None => push(
                    &mut out,
                    &format!("- condition: {} with lambda = {}", s.condition, fnum(s.lambda)),
                ),
            }
            push(
                &mut out,
                &format!("Residual samples (seeded; tolerance {}):", ftol(s.tol)),
            );
            push(&mut out, "");
            push(&mut out, "| point | max residual | ||grad f||^2 |");
            push(&mut out, "|---|---|---|");
            for p in &s.samples {
                push(
                    &mut out,
                    &format!(
                        "| {} | {} | {} |",
                        fpoint4(&p.point),
                        fnum(p.residual),
                        fnum(p.gradient_norm2)
                    ),
                );
            }
            push(&mut out, "");
            push(
                &mut out,
                &format!(
                    "- condition holds: {} (max residual {}, tol {})",
                    s.holds,
                    fnum(s.residual_max),
                    ftol(s.tol)
                ),
            );
            push(
                &mut out,
                &format!(
                    "- gradient isotropic: {} (max ||grad f||^2 = {}, tol {})",
                    s.isotropic_gradient,
                    fnum(s.gradient_norm2_max),
                    ftol(s.tol)
                ),
            );
            for w in &s.warnings {
                push(&mut out, &format!("- warning: {}", w));
            }
        }

        if let Some(c) = &self.catalog {
            push(&mut out, "");
            push(&mut out, "## Catalog");
            push(&mut out, "");
            if let Some(d) = &c.description {
                push(&mut out, &format!("- {}", d));
            }
            if !c.params.is_empty() {
                let params = c
                    .params
                    .iter()
                    .map(|(k, v)| format!("{} = {}", k, fnum(*v)))
                    .collect::<Vec<_>>()
                    .join(", ");
                push(&mut out, &format!("- parameters: {}", params));
            }
            if !c.listing.is_empty() {
                push(&mut out, "| name | description |");
                push(&mut out, "|---|---|");
                for e in &c.listing {
                    push(&mut out, &format!("| {} | {} |", e.name, e.description));
                }
            }
            for r in &c.results {
                let verdict = if r.passed { "PASS" } else { "FAIL" };
                push(
                    &mut out,
                    &format!(
                        "- {}: {} (worst residual {})",
                        r.name,
                        verdict,
                        fnum(r.worst_residual)
                    ),
                );
                for item in &r.items {
                    let v = if item.passed { "ok" } else { "FAILED" };
                    push(
                        &mut out,
                        &format!(
                            "  - {}: {} (residual {}, tol {})",
                            item.label,
                            v,
                            fnum(item.residual),
                            ftol(item.tol)
                        ),
                    );
                }
            }
            if let Some(all) = c.all_passed {
                push(
                    &mut out,
                    &format!(
                        "- overall: {} ({} entries)",
                        if all { "PASS" } else { "FAIL" },
                        c.results.len()
                    ),
                );
            }
        }

        if !self.assertions.is_empty() {
            push(&mut out, "");
            push(&mut out, "## Assertions");
            push(&mut out, "");
            for a in &self.assertions {
                let v = if a.passed { "PASS" } else { "FAIL" };
                push(
                    &mut out,
                    &format!("- {}: {} ({})", a.assertion, v, a.detail),
                );
            }
        }
        out
    }
}
