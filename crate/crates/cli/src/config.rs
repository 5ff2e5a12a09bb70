//! TOML job specifications and their translation into library objects.

use std::collections::BTreeMap;

use affine_walker::catalog;
use affine_walker::expr::{parse_expr, Expr};
use affine_walker::field::ScalarField;
use affine_walker::parallel::{
    construct_nilpotent_from_recurrence, recognize_normal_form, type_a_solve, type_b_solve,
    KernelAxis,
};
use affine_walker::surface::{
    AffineSurface, Box2, GeomError, SurfaceKind, SymBilinField, Tensor11Field,
};
use serde::Deserialize;

/// Error category mapped directly to the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: the specification or command line is invalid.
    Spec(String),
    /// Exit 3: a numeric computation failed.
    Numeric(String),
    /// Exit 1: an asserted verdict was false.
    Check(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Check(_) => 1,
            CliError::Spec(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Spec(m) | CliError::Numeric(m) | CliError::Check(m) => m,
        }
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> CliError {
        CliError::Numeric(format!("{:?}", e))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub surface: SurfaceSpec,
    #[serde(rename = "tensorT")]
    pub tensor_t: Option<TensorSpec>,
    pub phi: Option<PhiSpec>,
    pub potential: Option<PotentialSpec>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Deserialize)]
pub struct SurfaceSpec {
    pub kind: Option<String>,
    pub catalog: Option<String>,
    #[serde(default)]
    pub params: Vec<f64>,
    pub domain: Option<[[f64; 2]; 2]>,
    #[serde(flatten)]
    pub coeffs: BTreeMap<String, toml::Value>,
}

#[derive(Debug, Deserialize)]
pub struct TensorSpec {
    pub mode: Option<String>,
    pub c: Option<f64>,
    pub axis: Option<String>,
    #[serde(flatten)]
    pub comps: BTreeMap<String, toml::Value>,
}

#[derive(Debug, Deserialize)]
pub struct PhiSpec {
    pub mode: Option<String>,
    #[serde(flatten)]
    pub comps: BTreeMap<String, toml::Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    pub f: String,
    #[serde(default)]
    pub mu: f64,
    #[serde(default)]
    pub lambda: f64,
}

fn default_tol() -> f64 {
    1e-8
}
fn default_grid() -> usize {
    4
}
fn default_seed() -> u64 {
    7
}
fn default_orientation() -> i8 {
    1
}
fn default_base_samples() -> usize {
    5
}
fn default_fiber_samples() -> usize {
    3
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_orientation")]
    pub orientation: i8,
    #[serde(default = "default_base_samples")]
    pub base_samples: usize,
    #[serde(default = "default_fiber_samples")]
    pub fiber_samples: usize,
    #[serde(default)]
    pub assert: Vec<String>,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            tol: default_tol(),
            grid: default_grid(),
            seed: default_seed(),
            orientation: default_orientation(),
            base_samples: default_base_samples(),
            fiber_samples: default_fiber_samples(),
            assert: Vec::new(),
        }
    }
}

pub fn parse_job(text: &str) -> Result<JobSpec, CliError> {
    let spec: JobSpec =
        toml::from_str(text).map_err(|e| CliError::Spec(format!("invalid job spec: {}", e)))?;
    if spec.options.grid < 2 {
        return Err(CliError::Spec("options.grid must be at least 2".into()));
    }
    if !(spec.options.tol > 0.0) {
        return Err(CliError::Spec("options.tol must be positive".into()));
    }
    if spec.options.orientation != 1 && spec.options.orientation != -1 {
        return Err(CliError::Spec("options.orientation must be 1 or -1".into()));
    }
    Ok(spec)
}

const SLOT_NAMES: [&str; 6] = ["111", "112", "121", "122", "221", "222"];

fn value_to_expr(key: &str, v: &toml::Value) -> Result<Expr, CliError> {
    match v {
        toml::Value::Float(f) => Ok(Expr::Num(*f)),
        toml::Value::Integer(i) => Ok(Expr::Num(*i as f64)),
        toml::Value::String(s) => parse_expr(s)
            .map_err(|e| CliError::Spec(format!("cannot parse expression for {}: {}", key, e))),
        _ => Err(CliError::Spec(format!(
            "{} must be a number or an expression string",
            key
        ))),
    }
}

fn value_to_f64(key: &str, v: &toml::Value) -> Result<f64, CliError> {
    match v {
        toml::Value::Float(f) => Ok(*f),
        toml::Value::Integer(i) => Ok(*i as f64),
        _ => Err(CliError::Spec(format!("{} must be a number", key))),
    }
}

fn check_surface_expr(key: &str, e: &Expr) -> Result<(), CliError> {
    if e.max_var_index().map_or(false, |i| i > 1) {
        return Err(CliError::Spec(format!(
            "{} may only use the surface coordinates x1, x2",
            key
        )));
    }
    Ok(())
}

/// Build the surface (returns the catalog entry as well when one was named).
pub fn build_surface(
    s: &SurfaceSpec,
) -> Result<(AffineSurface, Option<catalog::CatalogEntry>), CliError> {
    if let Some(name) = &s.catalog {
        if s.kind.is_some() || !s.coeffs.is_empty() {
            return Err(CliError::Spec(
                "surface.catalog cannot be combined with kind/coefficient keys".into(),
            ));
        }
        let params = if s.params.is_empty() {
            catalog::default_params(name)
        } else {
            s.params.clone()
        };
        let entry = catalog::make(name, &params)
            .map_err(|e| CliError::Spec(format!("catalog entry '{}': {:?}", name, e)))?;
        return Ok((entry.surface.clone(), Some(entry)));
    }
    let kind = s
        .kind
        .as_deref()
        .ok_or_else(|| CliError::Spec("surface.kind (or surface.catalog) is required".into()))?;
    let prefix = match kind {
        "typeA" | "general" => "g",
        "typeB" => "c",
        other => {
            return Err(CliError::Spec(format!(
                "unknown surface.kind '{}' (expected typeA, typeB, or general)",
                other
            )))
        }
    };
    for key in s.coeffs.keys() {
        let ok = key.len() == 4
            && key.starts_with(prefix)
            && SLOT_NAMES.contains(&&key[1..]);
        if !ok {
            return Err(CliError::Spec(format!(
                "unknown surface key '{}' for kind {} (expected {}111 ... {}222)",
                key, kind, prefix, prefix
            )));
        }
    }
    let domain = match s.domain {
        Some(d) => {
            if d[0][0] >= d[0][1] || d[1][0] >= d[1][1] {
                return Err(CliError::Spec("surface.domain intervals must be increasing".into()));
            }
            Box2::new(d[0], d[1])
        }
        None => match kind {
            "typeB" => Box2::new([0.5, 3.0], [-1.0, 1.0]),
            _ => Box2::new([-1.0, 1.0], [-1.0, 1.0]),
        },
    };
    if kind == "typeB" && domain.x1[0] <= 0.0 {
        return Err(CliError::Spec(
            "typeB surfaces require a domain with x1 > 0".into(),
        ));
    }
    let slot_value = |n: usize| -> Option<&toml::Value> {
        s.coeffs.get(&format!("{}{}", prefix, SLOT_NAMES[n]))
    };
    let surface = match kind {
        "typeA" | "typeB" => {
            let mut c = [0.0f64; 6];
            for (n, v) in c.iter_mut().enumerate() {
                if let Some(raw) = slot_value(n) {
                    *v = value_to_f64(&format!("{}{}", prefix, SLOT_NAMES[n]), raw)?;
                }
            }
            if kind == "typeA" {
                AffineSurface::type_a(c, domain)
            } else {
                AffineSurface::type_b(c, domain)
            }
        }
        _ => {
            let mut gamma: [Expr; 6] = core::array::from_fn(|_| Expr::Num(0.0));
            for (n, g) in gamma.iter_mut().enumerate() {
                if let Some(raw) = slot_value(n) {
                    let key = format!("g{}", SLOT_NAMES[n]);
                    let e = value_to_expr(&key, raw)?;
                    check_surface_expr(&key, &e)?;
                    *g = e;
                }
            }
            AffineSurface::general(gamma, domain)
        }
    };
    Ok((surface, None))
}

pub fn parse_axis(spec: &TensorSpec) -> Result<KernelAxis, CliError> {
    match spec.axis.as_deref() {
        None | Some("d1") => Ok(KernelAxis::D1),
        Some("d2") => Ok(KernelAxis::D2),
        Some(other) => Err(CliError::Spec(format!(
            "tensorT.axis must be d1 or d2, got '{}'",
            other
        ))),
    }
}

/// Resolve the deformation tensor T from its spec block.
pub fn resolve_tensor(
    surface: &AffineSurface,
    spec: &TensorSpec,
    tol: f64,
    grid: &[[f64; 2]],
) -> Result<Tensor11Field, CliError> {
    let mode = spec.mode.as_deref().unwrap_or("explicit");
    match mode {
        "explicit" => {
            let slots = ["t11", "t12", "t21", "t22"];
            for key in spec.comps.keys() {
                if !slots.contains(&key.as_str()) {
                    return Err(CliError::Spec(format!("unknown tensorT key '{}'", key)));
                }
            }
            let mut m: [[Expr; 2]; 2] =
                core::array::from_fn(|_| core::array::from_fn(|_| Expr::Num(0.0)));
            for (n, key) in slots.iter().enumerate() {
                if let Some(raw) = spec.comps.get(*key) {
                    let e = value_to_expr(key, raw)?;
                    check_surface_expr(key, &e)?;
                    m[n / 2][n % 2] = e;
                }
            }
            Ok(Tensor11Field::from_exprs(m))
        }
        "scalar-id" => {
            let c = spec
                .c
                .ok_or_else(|| CliError::Spec("tensorT.c is required for mode scalar-id".into()))?;
            Ok(Tensor11Field::constant([[c, 0.0], [0.0, c]]))
        }
        "use-solved-generator" => {
            let report = match surface.kind {
                SurfaceKind::TypeA => Some(type_a_solve(surface, tol)?),
                SurfaceKind::TypeB => Some(type_b_solve(surface, tol)?),
                SurfaceKind::General => None,
            };
            let generators: Vec<Tensor11Field> = match report {
                Some(r) => r.generators.iter().map(|g| g.field.clone()).collect(),
                None => match recognize_normal_form(surface, grid, tol)? {
                    Some(m) => m.generators.iter().map(|g| g.field.clone()).collect(),
                    None => Vec::new(),
                },
            };
            generators.into_iter().next().ok_or_else(|| {
                CliError::Check(
                    "tensorT mode use-solved-generator: the surface admits no parallel trace-free tensor".into(),
                )
            })
        }
        "from-recurrence" => {
            let axis = parse_axis(spec)?;
            construct_nilpotent_from_recurrence(surface, grid, tol, axis).map_err(CliError::from)
        }
        other => Err(CliError::Spec(format!(
            "unknown tensorT.mode '{}' (expected explicit, scalar-id, use-solved-generator, or from-recurrence)",
            other
        ))),
    }
}

/// Resolve φ. `auto-nilpotent` pins the display-determined component from
/// the potential block; it requires T in a nilpotent kernel-aligned form.
pub fn resolve_phi(
    surface: &AffineSurface,
    spec: Option<&PhiSpec>,
    tensor_spec: Option<&TensorSpec>,
    t: Option<&Tensor11Field>,
    potential: Option<&PotentialSpec>,
) -> Result<SymBilinField, CliError> {
    let Some(spec) = spec else {
        return Ok(SymBilinField::zero());
    };
    let mode = spec.mode.as_deref().unwrap_or("explicit");
    match mode {
        "explicit" => {
            let slots = ["phi11", "phi12", "phi22"];
            for key in spec.comps.keys() {
                if !slots.contains(&key.as_str()) {
                    return Err(CliError::Spec(format!("unknown phi key '{}'", key)));
                }
            }
            let mut comp: [ScalarField; 3] =
                core::array::from_fn(|_| ScalarField::constant(0.0));
            for (n, key) in slots.iter().enumerate() {
                if let Some(raw) = spec.comps.get(*key) {
                    let e = value_to_expr(key, raw)?;
                    check_surface_expr(key, &e)?;
                    comp[n] = ScalarField::Expr(e);
                }
            }
            Ok(SymBilinField { comp })
        }
        "auto-nilpotent" => {
            let potential = potential.ok_or_else(|| {
                CliError::Spec("phi mode auto-nilpotent requires a [potential] block".into())
            })?;
            let f = parse_expr(&potential.f)
                .map_err(|e| CliError::Spec(format!("cannot parse potential.f: {}", e)))?;
            check_surface_expr("potential.f", &f)?;
            let t = t.ok_or_else(|| {
                CliError::Spec("phi mode auto-nilpotent requires a [tensorT] block".into())
            })?;
            let axis = match tensor_spec {
                Some(ts) => parse_axis(ts)?,
                None => KernelAxis::D1,
            };
            let entry = match axis {
                KernelAxis::D1 => t.comp[0][1].clone(),
                KernelAxis::D2 => t.comp[1][0].clone(),
            };
            Ok(affine_walker::extension::nilpotent_phi(
                surface,
                &f,
                potential.mu,
                &entry,
                axis,
                None,
            ))
        }
        other => Err(CliError::Spec(format!(
            "unknown phi.mode '{}' (expected explicit or auto-nilpotent)",
            other
        ))),
    }
}
