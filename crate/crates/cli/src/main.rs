//! Command-line front end: every library operation as a subcommand with
//! JSON in and JSON (or CSV, for the census) out.
//!
//! Documents arrive inline, from a file path, or from stdin ("-"). Fields a
//! document omits (p, e, window, box) fall back to flags, and the window
//! and box flags fall back to WILDBREAK_WINDOW / WILDBREAK_BOX. Outputs
//! echo the normalized input, so feeding an echoed document back
//! reproduces the output byte for byte.
//!
//! Exit codes: 0 success, 2 validation or malformed input, 3 precision
//! exhausted, 64 unknown subcommand.

use std::io::Read;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use wildbreak::artin_schreier::{as_break, as_reduce};
use wildbreak::census::{enumerate_as_classes, verify_splits2_torsor};
use wildbreak::cone::{Cone, LinearFunctional};
use wildbreak::error::Error;
use wildbreak::extension::tower2_break;
use wildbreak::heights::{c_lambda_linear, h_lambda_as, h_u_as, height_splits_check, ray_break};
use wildbreak::herbrand::{BreakValue, PhiPsi};
use wildbreak::json::{
    break_to_string, ConeDto, Defaults, DiagramDto, HeightQueryDto, MapDto, PhiPsiDto,
    RestrictDto, SeriesDto, Splits2Dto, ToricDto, Tower2Dto, VLambdaDto,
};
use wildbreak::rat::{format_rat, gcd_i64, parse_rat, to_i64};
use wildbreak::toric::{
    check_map_p_properties, check_p_limit_bounded, coker_basis_bounded, coker_normal_form,
    restrict_as, v_lambda, RingMap, ToricDatum,
};

#[derive(Parser)]
#[command(
    name = "wildbreak",
    version,
    about = "Artin-Schreier covers, breaks, and toric torsor censuses",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct CommonArgs {
    /// Inline JSON, a path to a JSON file, or "-" for stdin.
    input: Option<String>,
    /// Field characteristic, used when the document omits "p".
    #[arg(long)]
    p: Option<u64>,
    /// Field degree over F_p, used when the document omits "e".
    #[arg(long)]
    e: Option<u32>,
    /// Default series window "lo,hi" for documents that omit it.
    #[arg(long, env = "WILDBREAK_WINDOW", allow_hyphen_values = true)]
    window: Option<String>,
    /// Default box bound for documents that omit it.
    #[arg(long = "box", env = "WILDBREAK_BOX")]
    box_bound: Option<i64>,
    /// Output format: "json", or "csv" for the census.
    #[arg(long, default_value = "json")]
    format: String,
}

impl CommonArgs {
    fn defaults(&self) -> Result<Defaults, Error> {
        let window = match &self.window {
            None => None,
            Some(s) => Some(parse_window(s)?),
        };
        Ok(Defaults { p: self.p, e: self.e, window, box_bound: self.box_bound })
    }

    fn require_json_format(&self) -> Result<(), Error> {
        if self.format != "json" {
            return Err(Error::Validation(format!(
                "format {:?} is not available here; only the census emits csv",
                self.format
            )));
        }
        Ok(())
    }

    fn read_document(&self) -> Result<String, Error> {
        let Some(arg) = &self.input else {
            return Err(Error::Validation(
                "an input document is required: inline JSON, a file path, or -".into(),
            ));
        };
        if arg == "-" {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Validation(format!("reading stdin: {e}")))?;
            return Ok(buf);
        }
        let trimmed = arg.trim_start();
        if trimmed.starts_with('{') || trimmed.starts_with('[') {
            return Ok(arg.clone());
        }
        std::fs::read_to_string(arg)
            .map_err(|e| Error::Validation(format!("reading {arg}: {e}")))
    }

    fn parse<T: serde::de::DeserializeOwned>(&self) -> Result<T, Error> {
        let doc = self.read_document()?;
        serde_json::from_str(&doc)
            .map_err(|e| Error::Validation(format!("malformed document: {e}")))
    }
}

fn parse_window(s: &str) -> Result<(i64, i64), Error> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Validation(format!(
            "window must be \"lo,hi\", got {s:?}"
        )));
    }
    let lo = parts[0]
        .trim()
        .parse::<i64>()
        .map_err(|e| Error::Validation(format!("window lower end: {e}")))?;
    let hi = parts[1]
        .trim()
        .parse::<i64>()
        .map_err(|e| Error::Validation(format!("window upper end: {e}")))?;
    Ok((lo, hi))
}

fn parse_lambda_flag(s: &str) -> Result<LinearFunctional, Error> {
    let coords: Result<Vec<_>, Error> = s.split(',').map(|c| parse_rat(c.trim())).collect();
    Ok(LinearFunctional::new(coords?))
}

#[derive(Args)]
struct PhiArgs {
    /// Break of the single-break extension.
    #[arg(long)]
    m: i64,
    /// Evaluation point, a rational "a/b".
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Residue characteristic.
    #[arg(long)]
    p: u64,
}

#[derive(Args)]
struct CensusArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Functional "c1,c2,..." for a height column.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Maximum number of classes to list (the count is always exact).
    #[arg(long, default_value_t = 512)]
    limit: u64,
}

#[derive(Args)]
struct IsoArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reduce a series parameter to its canonical Artin-Schreier form.
    ReduceAs(CommonArgs),
    /// Highest break of the cover cut out by a series parameter.
    Break(CommonArgs),
    /// Break of a depth-2 tower given the base parameter and an element
    /// of the extension.
    Tower2Break(CommonArgs),
    /// Evaluate the upper-numbering transition function of a single-break
    /// extension at a rational point.
    Phi(PhiArgs),
    /// Cokernel normal form of a toric datum, with witness.
    CokerNf(CommonArgs),
    /// Bounded cokernel basis of a chart.
    CokerBasis(CommonArgs),
    /// Restrict a datum to a subcone.
    Restrict(CommonArgs),
    /// Minimum of a functional over a datum's support.
    Vlambda(CommonArgs),
    /// Heights of a reduced datum: directional, polytope, and the break
    /// constant on linear charts.
    Heights(CommonArgs),
    /// Check that a chart is the p-limit of a cone diagram, inside a box.
    CheckPlimit(CommonArgs),
    /// Torsor-level injectivity and surjectivity of a ring map.
    CheckMap(CommonArgs),
    /// Enumerate the reduced classes on a chart.
    Census(CensusArgs),
    /// Verify that a reduced datum is the sum of its ray restrictions.
    Splits2Check(CommonArgs),
}

#[derive(Serialize)]
struct ReduceAsOut {
    input: SeriesDto,
    reduced: SeriesDto,
    witness: SeriesDto,
    split: bool,
    #[serde(rename = "break")]
    break_value: Option<String>,
}

#[derive(Serialize)]
struct BreakOut {
    input: SeriesDto,
    split: bool,
    #[serde(rename = "break")]
    break_value: Option<String>,
}

#[derive(Serialize)]
struct Tower2In {
    a: SeriesDto,
    coeffs: Vec<SeriesDto>,
}

#[derive(Serialize)]
struct Tower2Out {
    input: Tower2In,
    base_break: Option<String>,
    phi: Option<PhiPsiDto>,
    split: bool,
    #[serde(rename = "break")]
    break_value: Option<String>,
}

#[derive(Serialize)]
struct PhiOut {
    m: i64,
    p: u64,
    x: String,
    phi: String,
}

#[derive(Serialize)]
struct CokerNfOut {
    input: ToricDto,
    reduced: ToricDto,
    witness: ToricDto,
}

#[derive(Serialize)]
struct CokerBasisOut {
    cone: ConeDto,
    #[serde(rename = "box")]
    box_bound: i64,
    p: u64,
    e: u32,
    points: Vec<Vec<i64>>,
    constants: Vec<Vec<u64>>,
}

#[derive(Serialize)]
struct RestrictIn {
    datum: ToricDto,
    tau: ConeDto,
}

#[derive(Serialize)]
struct RestrictOut {
    input: RestrictIn,
    restricted: ToricDto,
}

#[derive(Serialize)]
struct VLambdaIn {
    datum: ToricDto,
    lambda: Vec<String>,
}

#[derive(Serialize)]
struct VLambdaOut {
    input: VLambdaIn,
    /// Null is the +infinity sentinel of the zero datum.
    v_lambda: Option<String>,
}

#[derive(Serialize)]
struct HeightsIn {
    datum: ToricDto,
    lambda: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rays: Option<Vec<ConeDto>>,
}

#[derive(Serialize)]
struct SplitsOut {
    holds: bool,
    lhs: String,
    rhs: String,
}

#[derive(Serialize)]
struct HeightsOut {
    input: HeightsIn,
    h_lambda: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    h_u: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c_lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    splits: Option<SplitsOut>,
}

#[derive(Serialize)]
struct PlimitIn {
    cones: Vec<ConeDto>,
    arrows: Vec<(usize, usize)>,
    target: ConeDto,
}

#[derive(Serialize)]
struct PlimitOut {
    input: PlimitIn,
    #[serde(rename = "box")]
    box_bound: i64,
    p: u64,
    holds: bool,
    missing: Vec<Vec<i64>>,
    duplicated: Vec<Vec<i64>>,
    extra: Vec<Vec<i64>>,
    split_constants: bool,
}

#[derive(Serialize)]
struct CheckMapOut {
    input: MapDto,
    #[serde(rename = "box")]
    box_bound: i64,
    p: u64,
    p_injective: bool,
    p_surjective: bool,
    p_faithful: bool,
    uncovered: Vec<Vec<i64>>,
    collapsed: Vec<Vec<i64>>,
}

#[derive(Serialize)]
struct RayBreakOut {
    ray: Vec<i64>,
    #[serde(rename = "break")]
    break_value: Option<String>,
}

#[derive(Serialize)]
struct ClassOut {
    index: u64,
    terms: Vec<(Vec<i64>, Vec<u64>)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    h_lambda: Option<String>,
    ray_breaks: Vec<RayBreakOut>,
}

#[derive(Serialize)]
struct CensusOut {
    cone: ConeDto,
    #[serde(rename = "box")]
    box_bound: i64,
    p: u64,
    e: u32,
    count: String,
    truncated: bool,
    classes: Vec<ClassOut>,
}

#[derive(Serialize)]
struct Splits2In {
    datum: ToricDto,
    rays: Vec<ConeDto>,
}

#[derive(Serialize)]
struct Splits2Out {
    input: Splits2In,
    holds: bool,
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output structs serialize")
}

fn run_reduce_as(args: &CommonArgs) -> Result<String, Error> {
    args.require_json_format()?;
    let dto: SeriesDto = args.parse()?;
    let series = dto.resolve(&args.defaults()?)?;
    let nf = as_reduce(&series)?;
    Ok(to_json(&ReduceAsOut {
        input: SeriesDto::from_series(&series),
        reduced: SeriesDto::from_series(&nf.reduced),
        witness: SeriesDto::from_series(&nf.witness),
        split: nf.split,
        break_value: break_to_string(&nf.break_value),
    }))
}

fn run_break(args: &CommonArgs) -> Result<String, Error> {
    args.require_json_format()?;
    let dto: SeriesDto = args.parse()?;
    let series = dto.resolve(&args.defaults()?)?;
    let b = as_break(&series)?;
    Ok(to_json(&BreakOut {
        input: SeriesDto::from_series(&series),
        split: matches!(b, BreakValue::NegInfinity),
        break_value: break_to_string(&b),
    }))
}

fn run_tower2_break(args: &CommonArgs) -> Result<String, Error> {
    args.require_json_format()?;
    let dto: Tower2Dto = args.parse()?;
    let defaults = args.defaults()?;
    let a = dto.a.resolve(&defaults)?;
    let coeffs: Result<Vec<_>, Error> =
        dto.coeffs.iter().map(|c| c.resolve(&defaults)).collect();
    let coeffs = coeffs?;
    let base = as_break(&a)?;
    let (base_break, phi) = match &base {
        BreakValue::NegInfinity => (None, None),
        BreakValue::Finite(m) => {
            let m_int = to_i64(m)?;
            (
                Some(format_rat(m)),
                Some(PhiPsiDto::from_phipsi(&PhiPsi::single_break(m_int, a.p())?)),
            )
        }
    };
    let b = tower2_break(&a, &coeffs)?;
    Ok(to_json(&Tower2Out {
        input: Tower2In {
            a: SeriesDto::from_series(&a),
            coeffs: coeffs.iter().map(SeriesDto::from_series).collect(),
        },
        base_break,
        phi,
        split: matches!(b, BreakValue::NegInfinity),
        break_value: break_to_string(&b),
    }))
}

fn run_phi(args: &PhiArgs) -> Result<String, Error> {
    let x = parse_rat(&args.x)?;
    let phi = PhiPsi::single_break(args.m, args.p)?;
    let value = phi.eval(&x);
    Ok(to_json(&PhiOut {
        m: args.m,
        p: args.p,
        x: format_rat(&x),
        phi: format_rat(&value),
    }))
}

fn run_coker_nf(args: &CommonArgs) -> Result<String, Error> {
    args.require_json_format()?;
    let dto: ToricDto = args.parse()?;
    let datum = dto.resolve(&args.defaults()?)?;
    let (reduced, witness) = coker_normal_form(&datum);
    Ok(to_json(&CokerNfOut {
        input: ToricDto::from_datum(&datum),
        reduced: ToricDto::from_datum(&reduced),
        witness: ToricDto::from_datum(&witness),
    }))
}

fn run_coker_basis(args: &CommonArgs) -> Result<String, Error> {
    args.require_json_format()?;
    let dto: ConeDto = args.parse()?;
    let cone = dto.resolve()?;
    let defaults = args.defaults()?;
    let p = defaults.resolve_p(None)?;
    let e = defaults.resolve_e(None);
    let box_bound = defaults
        .box_bound
        .ok_or_else(|| Error::Validation("a box bound is required: pass --box".into()))?;
    let basis = coker_basis_bounded(&cone, box_bound, p, e)?;
    Ok(to_json(&CokerBasisOut {
        cone: ConeDto::from_cone(&basis.cone),
        box_bound,
        p,
        e,
        points: basis.points,
        constants: basis
            .constant_reps
            .iter()
            .map(|c| c.coords().to_vec())
            .collect(),
    }))
}

fn run_restrict(args: &CommonArgs) -> Result<String, Error> {
    args.require_json_format()?;
    let dto: RestrictDto = args.parse()?;
    let datum = dto.datum.resolve(&args.defaults()?)?;
    let tau = dto.tau.resolve()?;
    let restricted = restrict_as(&datum, &tau)?;
    Ok(to_json(&RestrictOut {
        input: RestrictIn {
            datum: ToricDto::from_datum(&datum),
            tau: ConeDto::from_cone(&tau),
        },
        restricted: ToricDto::from_datum(&restricted),
    }))
}

fn run_vlambda(args: &CommonArgs) -> Result<String, Error> {
    args.require_json_format()?;
    let dto: VLambdaDto = args.parse()?;
    let datum = dto.datum.resolve(&args.defaults()?)?;
    let coords: Result<Vec<_>, Error> = dto.lambda.iter().map(|s| parse_rat(s)).collect();
    let lambda = LinearFunctional::new(coords?);
    if lambda.dim() != datum.cone().dim() {
        return Err(Error::Validation(
            "functional dimension does not match the chart".into(),
        ));
    }
    let value = v_lambda(&datum, &lambda);
    Ok(to_json(&VLambdaOut {
        input: VLambdaIn {
            datum: ToricDto::from_datum(&datum),
            lambda: lambda.coords().iter().map(format_rat).collect(),
        },
        v_lambda: value.map(|r| format_rat(&r)),
    }))
}

fn run_heights(args: &CommonArgs) -> Result<String, Error> {
    args.require_json_format()?;
    let dto: HeightQueryDto = args.parse()?;
    let datum = dto.datum.resolve(&args.defaults()?)?;
    let lambda = dto.lambda_functional()?;
    let vertices = dto.vertex_functionals()?;
    let rays = match &dto.rays {
        None => None,
        Some(rs) => Some(
            rs.iter()
                .map(|c| c.resolve())
                .collect::<Result<Vec<_>, Error>>()?,
        ),
    };

    let h_lambda = h_lambda_as(&datum, &lambda)?;
    let h_u = match &vertices {
        None => None,
        Some(vs) => Some(format_rat(&h_u_as(&datum, vs)?)),
    };
    let c_lambda = if datum.cone().is_linear() {
        Some(format_rat(&c_lambda_linear(&datum, &lambda)?))
    } else {
        None
    };
    let splits = match &rays {
        None => None,
        Some(rs) => {
            let report = height_splits_check(&datum, &lambda, rs)?;
            Some(SplitsOut {
                holds: report.holds,
                lhs: format_rat(&report.lhs),
                rhs: format_rat(&report.rhs),
            })
        }
    };
    Ok(to_json(&HeightsOut {
        input: HeightsIn {
            datum: ToricDto::from_datum(&datum),
            lambda: lambda.coords().iter().map(format_rat).collect(),
            vertices: vertices
                .map(|vs| vs.iter().map(|v| v.coords().iter().map(format_rat).collect()).collect()),
            rays: rays.map(|rs| rs.iter().map(ConeDto::from_cone).collect()),
        },
        h_lambda: format_rat(&h_lambda),
        h_u,
        c_lambda,
        splits,
    }))
}

fn run_check_plimit(args: &CommonArgs) -> Result<String, Error> {
    args.require_json_format()?;
    let dto: DiagramDto = args.parse()?;
    let (diagram, target) = dto.resolve()?;
    let defaults = args.defaults()?;
    let p = defaults.resolve_p(None)?;
    let box_bound = defaults
        .box_bound
        .ok_or_else(|| Error::Validation("a box bound is required: pass --box".into()))?;
    let report = check_p_limit_bounded(&diagram, &target, box_bound, p)?;
    Ok(to_json(&PlimitOut {
        input: PlimitIn {
            cones: diagram.cones.iter().map(ConeDto::from_cone).collect(),
            arrows: diagram.arrows.clone(),
            target: ConeDto::from_cone(&target),
        },
        box_bound,
        p,
        holds: report.holds,
        missing: report.missing,
        duplicated: report.duplicated,
        extra: report.extra,
        split_constants: report.split_constants,
    }))
}

fn map_to_dto(map: &RingMap) -> MapDto {
    match map {
        RingMap::Inclusion { source, target } => MapDto::Inclusion {
            source: ConeDto::from_cone(source),
            target: ConeDto::from_cone(target),
        },
        RingMap::Completion { cone, lambda } => MapDto::Completion {
            cone: ConeDto::from_cone(cone),
            lambda: lambda.coords().iter().map(format_rat).collect(),
        },
    }
}

fn run_check_map(args: &CommonArgs) -> Result<String, Error> {
    args.require_json_format()?;
    let dto: MapDto = args.parse()?;
    let map = dto.resolve()?;
    let defaults = args.defaults()?;
    let p = defaults.resolve_p(None)?;
    let box_bound = defaults
        .box_bound
        .ok_or_else(|| Error::Validation("a box bound is required: pass --box".into()))?;
    let props = check_map_p_properties(&map, box_bound, p)?;
    Ok(to_json(&CheckMapOut {
        input: map_to_dto(&map),
        box_bound,
        p,
        p_injective: props.p_injective,
        p_surjective: props.p_surjective,
        p_faithful: props.p_faithful,
        uncovered: props.uncovered,
        collapsed: props.collapsed,
    }))
}

/// Distinct primitive ray directions through the nonzero support points.
fn support_rays(x: &ToricDatum) -> Vec<Vec<i64>> {
    let mut dirs: Vec<Vec<i64>> = Vec::new();
    for v in x.terms().keys() {
        if v.iter().all(|&c| c == 0) {
            continue;
        }
        let g = v.iter().fold(0i64, |acc, &c| gcd_i64(acc, c));
        let dir: Vec<i64> = v.iter().map(|&c| c / g).collect();
        if !dirs.contains(&dir) {
            dirs.push(dir);
        }
    }
    dirs.sort();
    dirs
}

fn class_report(index: u64, x: &ToricDatum, lambda: &Option<LinearFunctional>) -> Result<ClassOut, Error> {
    let h_lambda = match lambda {
        None => None,
        Some(l) => Some(format_rat(&h_lambda_as(x, l)?)),
    };
    let mut ray_breaks = Vec::new();
    for dir in support_rays(x) {
        let ray = Cone::ray_lattice(&dir)?;
        let piece = restrict_as(x, &ray)?;
        let b = ray_break(&piece)?;
        ray_breaks.push(RayBreakOut { ray: dir, break_value: break_to_string(&b) });
    }
    Ok(ClassOut {
        index,
        terms: x
            .terms()
            .iter()
            .map(|(v, c)| (v.clone(), c.coords().to_vec()))
            .collect(),
        h_lambda,
        ray_breaks,
    })
}

fn run_census(args: &CensusArgs) -> Result<String, Error> {
    let common = &args.common;
    if common.format != "json" && common.format != "csv" {
        return Err(Error::Validation(format!(
            "unknown format {:?}; census emits json or csv",
            common.format
        )));
    }
    let dto: ConeDto = common.parse()?;
    let cone = dto.resolve()?;
    let defaults = common.defaults()?;
    let p = defaults.resolve_p(None)?;
    let e = defaults.resolve_e(None);
    let box_bound = defaults
        .box_bound
        .ok_or_else(|| Error::Validation("a box bound is required: pass --box".into()))?;
    let lambda = match &args.lambda {
        None => None,
        Some(s) => {
            let l = parse_lambda_flag(s)?;
            if l.dim() != cone.dim() {
                return Err(Error::Validation(
                    "functional dimension does not match the chart".into(),
                ));
            }
            Some(l)
        }
    };

    let census = enumerate_as_classes(&cone, box_bound, p, e)?;
    let mut classes = Vec::new();
    let mut truncated = false;
    for (i, x) in census.iter().enumerate() {
        if (i as u64) >= args.limit {
            truncated = true;
            break;
        }
        classes.push(class_report(i as u64, &x, &lambda)?);
    }

    if common.format == "csv" {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["index", "terms", "h_lambda", "ray_breaks"])
            .map_err(|e| Error::Validation(format!("csv: {e}")))?;
        for c in &classes {
            w.write_record([
                c.index.to_string(),
                to_json(&c.terms),
                c.h_lambda.clone().unwrap_or_default(),
                to_json(&c.ray_breaks),
            ])
            .map_err(|e| Error::Validation(format!("csv: {e}")))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Validation(format!("csv: {e}")))?;
        let mut text = String::from_utf8(bytes).expect("csv output is utf-8");
        while text.ends_with('\n') || text.ends_with('\r') {
            text.pop();
        }
        return Ok(text);
    }

    Ok(to_json(&CensusOut {
        cone: ConeDto::from_cone(&cone),
        box_bound,
        p,
        e,
        count: census.count().to_string(),
        truncated,
        classes,
    }))
}

fn run_splits2_check(args: &CommonArgs) -> Result<String, Error> {
    args.require_json_format()?;
    let dto: Splits2Dto = args.parse()?;
    let datum = dto.datum.resolve(&args.defaults()?)?;
    let rays: Result<Vec<_>, Error> = dto.rays.iter().map(|c| c.resolve()).collect();
    let rays = rays?;
    let holds = verify_splits2_torsor(&datum, &rays)?;
    Ok(to_json(&Splits2Out {
        input: Splits2In {
            datum: ToricDto::from_datum(&datum),
            rays: rays.iter().map(ConeDto::from_cone).collect(),
        },
        holds,
    }))
}

fn run(cmd: &Cmd) -> Result<String, Error> {
    match cmd {
        Cmd::ReduceAs(a) => run_reduce_as(a),
        Cmd::Break(a) => run_break(a),
        Cmd::Tower2Break(a) => run_tower2_break(a),
        Cmd::Phi(a) => run_phi(a),
        Cmd::CokerNf(a) => run_coker_nf(a),
        Cmd::CokerBasis(a) => run_coker_basis(a),
        Cmd::Restrict(a) => run_restrict(a),
        Cmd::Vlambda(a) => run_vlambda(a),
        Cmd::Heights(a) => run_heights(a),
        Cmd::CheckPlimit(a) => run_check_plimit(a),
        Cmd::CheckMap(a) => run_check_map(a),
        Cmd::Census(a) => run_census(a),
        Cmd::Splits2Check(a) => run_splits2_check(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    return ExitCode::SUCCESS;
                }
                ErrorKind::InvalidSubcommand => 64u8,
                _ => 2u8,
            };
            eprint!("{err}");
            return ExitCode::from(code);
        }
    };
    match run(&cli.cmd) {
        Ok(output) => {
            println!("{output}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Validation(_) => ExitCode::from(2),
                Error::PrecisionExhausted(_) => ExitCode::from(3),
            }
        }
    }
}

