//! Job files.
//!
//! A job is one TOML document:
//!
//! ```toml
//! name = "fermat-quartic"
//!
//! [ring]
//! prime = 5            # optional for Stienstra log/fgl over Q
//! precision = 1        # laws are reduced modulo prime^precision
//! parameters = []      # e.g. ["a", "b"]
//!
//! [surface]
//! kind = "complete_intersection"   # or "double_plane", "elliptic_weierstrass"
//! coordinates = ["x0", "x1", "x2", "x3"]
//! equations = ["x0^4 + x1^4 + x2^4 + x3^4"]
//! # double_plane:          sextic = "..."
//! # elliptic_weierstrass:  t = "t", a1 = "...", a2, a3, a4, a6 (missing ones are 0)
//!
//! [outputs]
//! want = ["height"]    # any of log, fgl, p_series, height, landweber
//! order = 26           # optional, default p^hmax + 1 (or 11)
//! hmax = 2
//! ```

use std::fmt;

use brauerkit::algebra::{parse_poly, MultiPoly, Ring};
use brauerkit::elliptic::WeierstrassModel;
use brauerkit::stienstra::{CompleteIntersectionK3, DoublePlaneK3, StienstraSurface};
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    CompleteIntersection,
    DoublePlane,
    EllipticWeierstrass,
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurfaceKind::CompleteIntersection => "complete_intersection",
            SurfaceKind::DoublePlane => "double_plane",
            SurfaceKind::EllipticWeierstrass => "elliptic_weierstrass",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Log,
    Fgl,
    PSeries,
    Height,
    Landweber,
}

impl Output {
    pub fn key(self) -> &'static str {
        match self {
            Output::Log => "log",
            Output::Fgl => "fgl",
            Output::PSeries => "p_series",
            Output::Height => "height",
            Output::Landweber => "landweber",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJob {
    name: Option<String>,
    ring: RawRing,
    surface: RawSurface,
    outputs: RawOutputs,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRing {
    prime: Option<u64>,
    precision: Option<u32>,
    #[serde(default)]
    parameters: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSurface {
    kind: SurfaceKind,
    coordinates: Option<Vec<String>>,
    equations: Option<Vec<String>>,
    sextic: Option<String>,
    t: Option<String>,
    a1: Option<String>,
    a2: Option<String>,
    a3: Option<String>,
    a4: Option<String>,
    a6: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutputs {
    want: Vec<Output>,
    order: Option<u32>,
    hmax: Option<u32>,
}

/// The surface of a job, built over its declared ring.
#[derive(Clone, Debug)]
pub enum Surface {
    Stienstra(StienstraSurface),
    Elliptic(WeierstrassModel),
}

/// Command-line overrides of the document's values.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub prime: Option<u64>,
    pub order: Option<u32>,
    pub hmax: Option<u32>,
    /// Replaces `outputs.want` (the `height` and `landweber` subcommands).
    pub outputs: Option<&'static [Output]>,
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub name: String,
    pub kind: SurfaceKind,
    pub prime: Option<u64>,
    pub precision: u32,
    pub parameters: Vec<String>,
    pub surface: Surface,
    pub outputs: Vec<Output>,
    pub order: u32,
    pub hmax: u32,
}

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

fn poly(ring: &Ring, field: &str, src: &str) -> Result<MultiPoly, CliError> {
    parse_poly(ring, src).map_err(|e| {
        parse_err(format!(
            "{field}: parse error at position {} (line {}, column {}): {}",
            e.pos, e.line, e.column, e.message
        ))
    })
}

fn check_prime(p: u64) -> Result<(), CliError> {
    if brauerkit::algebra::is_prime(p) {
        Ok(())
    } else {
        Err(parse_err(format!("ring.prime: {p} is not prime")))
    }
}

impl JobSpec {
    /// Parse a job document and apply overrides.
    pub fn parse(src: &str, overrides: Overrides) -> Result<JobSpec, CliError> {
        let raw: RawJob = toml::from_str(src).map_err(|e| {
            let at = e
                .span()
                .map(|s| {
                    let before = &src[..s.start.min(src.len())];
                    let line = before.matches('\n').count() + 1;
                    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
                    format!(" at line {line}, column {column}")
                })
                .unwrap_or_default();
            parse_err(format!("job document{at}: {}", e.message()))
        })?;
        let prime = overrides.prime.or(raw.ring.prime);
        if let Some(p) = prime {
            check_prime(p)?;
        }
        let precision = raw.ring.precision.unwrap_or(1);
        if precision == 0 {
            return Err(parse_err("ring.precision must be at least 1"));
        }
        let mut outputs = overrides.outputs.map_or_else(|| raw.outputs.want.clone(), |o| o.to_vec());
        outputs.sort();
        outputs.dedup();
        if outputs.is_empty() {
            return Err(parse_err("outputs.want is empty"));
        }
        let hmax = overrides.hmax.or(raw.outputs.hmax).unwrap_or(1);
        let params: Vec<String> = raw.ring.parameters.clone();
        let surface = build_surface(&raw.surface, prime, &params)?;
        let needs_p = outputs.iter().any(|o| matches!(o, Output::PSeries | Output::Height | Output::Landweber));
        if prime.is_none() && (needs_p || raw.surface.kind == SurfaceKind::EllipticWeierstrass) {
            return Err(parse_err("ring.prime is required for these outputs"));
        }
        let default_order = match prime {
            Some(p) if needs_p => p.checked_pow(hmax).and_then(|q| u32::try_from(q + 1).ok()).unwrap_or(u32::MAX),
            _ => 11,
        };
        let order = overrides.order.or(raw.outputs.order).unwrap_or(default_order);
        if outputs.contains(&Output::Landweber) && hmax < 2 {
            return Err(parse_err("landweber reports need outputs.hmax >= 2"));
        }
        if order < 2 {
            return Err(parse_err("outputs.order must be at least 2"));
        }
        if let Some(p) = prime {
            let wants_height = outputs.iter().any(|o| matches!(o, Output::Height | Output::Landweber));
            let needed = p.checked_pow(hmax).unwrap_or(u64::MAX);
            if wants_height && (order as u64) <= needed {
                return Err(parse_err(format!("outputs.order {order} must exceed p^hmax = {needed}")));
            }
        }
        Ok(JobSpec {
            name: raw.name.unwrap_or_else(|| "job".into()),
            kind: raw.surface.kind,
            prime,
            precision,
            parameters: params,
            surface,
            outputs,
            order,
            hmax,
        })
    }
}

fn build_surface(s: &RawSurface, prime: Option<u64>, params: &[String]) -> Result<Surface, CliError> {
    match s.kind {
        SurfaceKind::CompleteIntersection | SurfaceKind::DoublePlane => {
            let coords = s.coordinates.clone().ok_or_else(|| parse_err("surface.coordinates is required"))?;
            let mut vars: Vec<&str> = params.iter().map(|v| v.as_str()).collect();
            vars.extend(coords.iter().map(|v| v.as_str()));
            let ring = Ring::poly(&Ring::integers(), &vars).map_err(|e| parse_err(format!("ring: {e}")))?;
            let crefs: Vec<&str> = coords.iter().map(|c| c.as_str()).collect();
            let built = if s.kind == SurfaceKind::CompleteIntersection {
                let eqs = s.equations.clone().ok_or_else(|| parse_err("surface.equations is required"))?;
                let polys = eqs
                    .iter()
                    .enumerate()
                    .map(|(i, e)| poly(&ring, &format!("surface.equations[{i}]"), e))
                    .collect::<Result<Vec<_>, _>>()?;
                CompleteIntersectionK3::new(&ring, &crefs, polys).map(StienstraSurface::from)
            } else {
                let src = s.sextic.clone().ok_or_else(|| parse_err("surface.sextic is required"))?;
                let f = poly(&ring, "surface.sextic", &src)?;
                DoublePlaneK3::new(&ring, &crefs, f).map(StienstraSurface::from)
            };
            built.map(Surface::Stienstra).map_err(|e| parse_err(format!("surface: {e}")))
        }
        SurfaceKind::EllipticWeierstrass => {
            let p = prime.ok_or_else(|| parse_err("ring.prime is required for Weierstrass models"))?;
            let field = Ring::prime_field(p).map_err(|e| parse_err(format!("ring: {e}")))?;
            let prefs: Vec<&str> = params.iter().map(|v| v.as_str()).collect();
            let base = if prefs.is_empty() {
                field
            } else {
                Ring::poly(&field, &prefs).map_err(|e| parse_err(format!("ring: {e}")))?
            };
            let t = s.t.clone().unwrap_or_else(|| "t".into());
            let ring = Ring::poly(&base, &[t.as_str()]).map_err(|e| parse_err(format!("ring: {e}")))?;
            let fields = [("a1", &s.a1), ("a2", &s.a2), ("a3", &s.a3), ("a4", &s.a4), ("a6", &s.a6)];
            let mut coeffs = Vec::with_capacity(5);
            for (name, src) in fields {
                coeffs.push(match src {
                    Some(src) => poly(&ring, &format!("surface.{name}"), src)?,
                    None => MultiPoly::zero(&ring),
                });
            }
            let coeffs: [MultiPoly; 5] = coeffs.try_into().expect("five coefficients");
            WeierstrassModel::new(&ring, &t, coeffs).map(Surface::Elliptic).map_err(|e| parse_err(format!("surface: {e}")))
        }
    }
}
