//! Problem configuration files.

use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context};
use num_complex::Complex64;
use serde::Deserialize;

use cliff_rbvp::expr::parse;
use cliff_rbvp::{CliffordRbvp, ConformalMaps, Contour, Expr, FamilyKind, HatData, SolveOptions};

pub const DEFAULT_NODES: usize = 512;

/// A complex number written as a real, an `[re, im]` pair or a constant
/// expression such as `"1 - 0.5*i"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Real(f64),
    Pair([f64; 2]),
    Text(String),
}

impl ComplexValue {
    pub fn value(&self) -> anyhow::Result<Complex64> {
        match self {
            ComplexValue::Real(x) => Ok(Complex64::new(*x, 0.0)),
            ComplexValue::Pair([re, im]) => Ok(Complex64::new(*re, *im)),
            ComplexValue::Text(s) => {
                let e = parse(s)?;
                if let Some(v) = e.free_var() {
                    bail!("constant {s:?} must not mention {}", v.name());
                }
                Ok(e.eval_any(Complex64::new(0.0, 0.0))?)
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ContourConfig {
    Circle {
        #[serde(default = "origin")]
        center: ComplexValue,
        radius: f64,
    },
    /// `γ(θ) = Σ c_k e^{ikθ}` with entries `[k, coefficient]`.
    Fourier { modes: Vec<(i64, ComplexValue)> },
}

fn origin() -> ComplexValue {
    ComplexValue::Real(0.0)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExprPair {
    pub g0_expr: String,
    pub g1_expr: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstPair {
    pub a: ComplexValue,
    pub b: ComplexValue,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConformalConfig {
    pub chi_plus: String,
    pub chi_minus: String,
    pub phi_plus: String,
    pub phi_minus: String,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKindConfig {
    Interior,
    Exterior,
    Paired,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub contour: ContourConfig,
    #[serde(rename = "G")]
    pub coefficient: Option<ExprPair>,
    #[serde(rename = "G_const")]
    pub coefficient_const: Option<ConstPair>,
    pub g: ExprPair,
    #[serde(default = "yes")]
    pub vanish_at_infinity: bool,
    pub conformal: Option<ConformalConfig>,
    pub nodes: Option<usize>,
    /// Solvability-condition tolerance.
    pub tol: Option<f64>,
    pub family_count: Option<usize>,
    pub family_kind: Option<FamilyKindConfig>,
}

fn yes() -> bool {
    true
}

/// Everything needed to run the solver.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub problem: CliffordRbvp,
    pub maps: Option<ConformalMaps>,
    pub options: SolveOptions,
}

impl ProblemConfig {
    /// Parses JSON, naming the offending field and position on failure.
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            anyhow::anyhow!(
                "at field `{path}` (line {}, column {}): {inner}",
                inner.line(),
                inner.column()
            )
        })?;
        if config.coefficient.is_some() == config.coefficient_const.is_some() {
            bail!("exactly one of `G` and `G_const` must be given");
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Command-line values win over the file, which wins over defaults.
    pub fn prepare(&self, nodes: Option<usize>, tol: Option<f64>) -> anyhow::Result<Prepared> {
        let n = nodes.or(self.nodes).unwrap_or(DEFAULT_NODES);
        let contour = Arc::new(match &self.contour {
            ContourConfig::Circle { center, radius } => {
                Contour::circle(center.value()?, *radius, n)?
            }
            ContourConfig::Fourier { modes } => {
                let modes = modes
                    .iter()
                    .map(|(k, c)| Ok((*k, c.value()?)))
                    .collect::<anyhow::Result<Vec<_>>>()?;
                Contour::from_fourier(&modes, n)?
            }
        });
        let coefficient = match (&self.coefficient, &self.coefficient_const) {
            (Some(p), _) => HatData::from_exprs(
                &contour,
                &expr(&p.g0_expr, "G.g0_expr")?,
                &expr(&p.g1_expr, "G.g1_expr")?,
            )?,
            (None, Some(c)) => HatData::constant(&contour, c.a.value()?, c.b.value()?),
            (None, None) => unreachable!("checked on load"),
        };
        let data = HatData::from_exprs(
            &contour,
            &expr(&self.g.g0_expr, "g.g0_expr")?,
            &expr(&self.g.g1_expr, "g.g1_expr")?,
        )?;
        let problem = CliffordRbvp::new(contour, coefficient, data, self.vanish_at_infinity)?;
        let maps = match &self.conformal {
            Some(c) => Some(ConformalMaps {
                chi_plus: expr(&c.chi_plus, "conformal.chi_plus")?,
                chi_minus: expr(&c.chi_minus, "conformal.chi_minus")?,
                phi_plus: expr(&c.phi_plus, "conformal.phi_plus")?,
                phi_minus: expr(&c.phi_minus, "conformal.phi_minus")?,
            }),
            None => None,
        };
        let mut options = SolveOptions::default();
        if let Some(t) = tol.or(self.tol) {
            if !(t > 0.0) {
                bail!("tolerance must be positive, got {t}");
            }
            options.condition_tol = t;
        }
        if let Some(k) = self.family_count {
            options.family_count = k;
        }
        if let Some(kind) = self.family_kind {
            options.family_kind = match kind {
                FamilyKindConfig::Interior => FamilyKind::Interior,
                FamilyKindConfig::Exterior => FamilyKind::Exterior,
                FamilyKindConfig::Paired => FamilyKind::Paired,
            };
        }
        Ok(Prepared {
            problem,
            maps,
            options,
        })
    }
}

fn expr(src: &str, field: &str) -> anyhow::Result<Expr> {
    parse(src).with_context(|| format!("in `{field}` = {src:?}"))
}
