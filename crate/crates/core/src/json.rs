//! Wire format for the CLI and for fixtures: serde DTOs mirroring the
//! library types, with every rational carried as a string "a/b" and every
//! coefficient as its coordinate vector over the prime field. Nothing in
//! the interface is floating point.
//!
//! Documents may omit p, e, the window, and the box; `Defaults` carries the
//! command-line fallbacks. Values inside a document always win over the
//! fallbacks, so echoed outputs re-parse to the same objects regardless of
//! flags.

use serde::{Deserialize, Serialize};

use crate::cone::{Cone, Halfspace, LinearFunctional};
use crate::error::{validation, Result};
use crate::fq::FqElem;
use crate::herbrand::{BreakValue, PhiPsi};
use crate::laurent::LaurentSeries;
use crate::rat::{format_rat, parse_rat, Rat};
use crate::toric::{Diagram, RingMap, ToricDatum};

/// Command-line fallbacks for fields a document may omit.
#[derive(Debug, Clone, Default)]
pub struct Defaults {
    pub p: Option<u64>,
    pub e: Option<u32>,
    pub window: Option<(i64, i64)>,
    pub box_bound: Option<i64>,
}

impl Defaults {
    pub fn resolve_p(&self, doc: Option<u64>) -> Result<u64> {
        doc.or(self.p)
            .ok_or_else(|| crate::error::Error::Validation(
                "characteristic p is required: set \"p\" in the document or pass --p".into(),
            ))
    }

    pub fn resolve_e(&self, doc: Option<u32>) -> u32 {
        doc.or(self.e).unwrap_or(1)
    }
}

fn parse_functional(coords: &[String]) -> Result<LinearFunctional> {
    let parsed: Result<Vec<Rat>> = coords.iter().map(|s| parse_rat(s)).collect();
    Ok(LinearFunctional::new(parsed?))
}

fn format_functional(f: &LinearFunctional) -> Vec<String> {
    f.coords().iter().map(format_rat).collect()
}

/// Windowed Laurent series document:
/// {"p":2,"e":1,"terms":[[-2,[1]]],"window":[-64,64],"exact":true}.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SeriesDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
    pub terms: Vec<(i64, Vec<u64>)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(i64, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
}

impl SeriesDto {
    pub fn resolve(&self, defaults: &Defaults) -> Result<LaurentSeries> {
        let p = defaults.resolve_p(self.p)?;
        let e = defaults.resolve_e(self.e);
        let terms: Result<Vec<(i64, FqElem)>> = self
            .terms
            .iter()
            .map(|(k, coords)| Ok((*k, FqElem::new(p, e, coords.clone())?)))
            .collect();
        let terms = terms?;
        let window = self.window.or(defaults.window);
        match (self.exact, window) {
            // A bare list of terms is an exact Laurent polynomial.
            (Some(true), None) | (None, None) => LaurentSeries::polynomial(p, e, terms),
            (Some(exact), Some(w)) => LaurentSeries::new(p, e, terms, w, exact),
            // A window without an exactness claim means truncated data.
            (None, Some(w)) => LaurentSeries::new(p, e, terms, w, false),
            (Some(false), None) => {
                validation("a non-exact series needs a window: set \"window\" or pass --window")
            }
        }
    }

    pub fn from_series(s: &LaurentSeries) -> SeriesDto {
        SeriesDto {
            p: Some(s.p()),
            e: Some(s.e()),
            terms: s
                .terms()
                .iter()
                .map(|(k, c)| (*k, c.coords().to_vec()))
                .collect(),
            window: Some(s.window()),
            exact: Some(s.is_exact()),
        }
    }
}

/// Degree-p tower document: the base parameter plus the p coefficient
/// series of an element of the extension.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tower2Dto {
    pub a: SeriesDto,
    pub coeffs: Vec<SeriesDto>,
}

/// Halfspace document: {"normal":["1","0"],"strict":false}.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfspaceDto {
    pub normal: Vec<String>,
    #[serde(default)]
    pub strict: bool,
}

/// Cone document:
/// {"n":2,"halfspaces":[{"normal":["1","0"],"strict":false}],"rays":[["1","0"]]}.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeDto {
    pub n: usize,
    pub halfspaces: Vec<HalfspaceDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<Vec<Vec<String>>>,
}

impl ConeDto {
    pub fn resolve(&self) -> Result<Cone> {
        let halfspaces: Result<Vec<Halfspace>> = self
            .halfspaces
            .iter()
            .map(|h| {
                Ok(Halfspace { normal: parse_functional(&h.normal)?, strict: h.strict })
            })
            .collect();
        let rays: Result<Option<Vec<Vec<Rat>>>> = match &self.rays {
            None => Ok(None),
            Some(rays) => rays
                .iter()
                .map(|r| r.iter().map(|s| parse_rat(s)).collect::<Result<Vec<Rat>>>())
                .collect::<Result<Vec<Vec<Rat>>>>()
                .map(Some),
        };
        Cone::new(self.n, halfspaces?, rays?)
    }

    pub fn from_cone(c: &Cone) -> ConeDto {
        ConeDto {
            n: c.dim(),
            halfspaces: c
                .halfspaces()
                .iter()
                .map(|h| HalfspaceDto {
                    normal: format_functional(&h.normal),
                    strict: h.strict,
                })
                .collect(),
            rays: c
                .rays()
                .map(|rays| rays.iter().map(|r| r.iter().map(format_rat).collect()).collect()),
        }
    }
}

/// Toric datum document:
/// {"p":2,"e":1,"cone":{...},"terms":[[[1,0],[1]]],"box":8}.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToricDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
    pub cone: ConeDto,
    pub terms: Vec<(Vec<i64>, Vec<u64>)>,
    #[serde(rename = "box", default, skip_serializing_if = "Option::is_none")]
    pub box_bound: Option<i64>,
}

impl ToricDto {
    pub fn resolve(&self, defaults: &Defaults) -> Result<ToricDatum> {
        let p = defaults.resolve_p(self.p)?;
        let e = defaults.resolve_e(self.e);
        let cone = self.cone.resolve()?;
        let terms: Result<Vec<(Vec<i64>, FqElem)>> = self
            .terms
            .iter()
            .map(|(v, coords)| Ok((v.clone(), FqElem::new(p, e, coords.clone())?)))
            .collect();
        let terms = terms?;
        // An omitted box defaults to the tightest box holding the support.
        let box_bound = self
            .box_bound
            .or(defaults.box_bound)
            .unwrap_or_else(|| {
                terms
                    .iter()
                    .flat_map(|(v, _)| v.iter().map(|c| c.abs()))
                    .max()
                    .unwrap_or(0)
            });
        ToricDatum::new(p, e, cone, terms, box_bound)
    }

    pub fn from_datum(x: &ToricDatum) -> ToricDto {
        ToricDto {
            p: Some(x.p()),
            e: Some(x.e()),
            cone: ConeDto::from_cone(x.cone()),
            terms: x
                .terms()
                .iter()
                .map(|(v, c)| (v.clone(), c.coords().to_vec()))
                .collect(),
            box_bound: Some(x.box_bound()),
        }
    }
}

/// Diagram document: {"cones":[...],"arrows":[[i,j]],"target":...}.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDto {
    pub cones: Vec<ConeDto>,
    pub arrows: Vec<(usize, usize)>,
    pub target: ConeDto,
}

impl DiagramDto {
    pub fn resolve(&self) -> Result<(Diagram, Cone)> {
        let cones: Result<Vec<Cone>> = self.cones.iter().map(|c| c.resolve()).collect();
        let target = self.target.resolve()?;
        Ok((Diagram { cones: cones?, arrows: self.arrows.clone() }, target))
    }
}

/// Ring map document, tagged by kind.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MapDto {
    Inclusion { source: ConeDto, target: ConeDto },
    Completion { cone: ConeDto, lambda: Vec<String> },
    Katz,
}

impl MapDto {
    pub fn resolve(&self) -> Result<RingMap> {
        match self {
            MapDto::Inclusion { source, target } => Ok(RingMap::Inclusion {
                source: source.resolve()?,
                target: target.resolve()?,
            }),
            MapDto::Completion { cone, lambda } => Ok(RingMap::Completion {
                cone: cone.resolve()?,
                lambda: parse_functional(lambda)?,
            }),
            MapDto::Katz => Ok(RingMap::katz()),
        }
    }
}

/// Height query document: a datum, a functional, optionally polytope
/// vertices, optionally rays for the split comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeightQueryDto {
    pub datum: ToricDto,
    pub lambda: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<Vec<ConeDto>>,
}

impl HeightQueryDto {
    pub fn lambda_functional(&self) -> Result<LinearFunctional> {
        parse_functional(&self.lambda)
    }

    pub fn vertex_functionals(&self) -> Result<Option<Vec<LinearFunctional>>> {
        match &self.vertices {
            None => Ok(None),
            Some(vs) => vs
                .iter()
                .map(|v| parse_functional(v))
                .collect::<Result<Vec<_>>>()
                .map(Some),
        }
    }
}

/// Restriction request: a datum and the subcone to keep.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictDto {
    pub datum: ToricDto,
    pub tau: ConeDto,
}

/// Direction query: a datum and a functional.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VLambdaDto {
    pub datum: ToricDto,
    pub lambda: Vec<String>,
}

/// Torsor decomposition check: a datum and candidate rays.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Splits2Dto {
    pub datum: ToricDto,
    pub rays: Vec<ConeDto>,
}

/// Herbrand function document: {"breakpoints":["1"],"p":2}; breakpoints
/// repeat according to multiplicity.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PhiPsiDto {
    pub breakpoints: Vec<String>,
    pub p: u64,
}

impl PhiPsiDto {
    pub fn from_phipsi(phi: &PhiPsi) -> PhiPsiDto {
        PhiPsiDto {
            breakpoints: phi
                .breakpoints_with_multiplicity()
                .iter()
                .map(format_rat)
                .collect(),
            p: phi.p(),
        }
    }
}

/// Break values serialize as a rational string, or null for the split
/// (no-break) case.
pub fn break_to_string(b: &BreakValue) -> Option<String> {
    match b {
        BreakValue::NegInfinity => None,
        BreakValue::Finite(r) => Some(format_rat(r)),
    }
}
