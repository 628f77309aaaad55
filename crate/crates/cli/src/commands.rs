use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use hodgeext::exact::{Matrix, Scalar};
use hodgeext::filtration::NilpotentOp;
use hodgeext::mhs::{self, Polarization, SplitMHS};
use hodgeext::ncext::{self, PolarizedInput};
use hodgeext::neron::{self, ClosureConvention, NilpotentOrbit, SectionFamily};
use hodgeext::singularity::{self, BPSingularity};
use hodgeext::{logext, quiver, verify};
use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::report::Verdict;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("input does not match the expected schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Module(#[from] hodgeext::Error),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "Io",
            CliError::Schema(_) => "Schema",
            CliError::Module(e) => module_kind(e),
            CliError::Internal(_) => "Internal",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 3,
            _ => 2,
        }
    }
}

fn module_kind(e: &hodgeext::Error) -> &'static str {
    use hodgeext::Error::*;
    match e {
        Parse(_) => "Parse",
        DimensionMismatch(_) => "DimensionMismatch",
        Inconsistent => "Inconsistent",
        NotSquare { .. } => "NotSquare",
        NotSymmetric(_) => "NotSymmetric",
        Singular => "Singular",
        NotQuasiUnipotent { .. } => "NotQuasiUnipotent",
        NotNilpotent => "NotNilpotent",
        NPreservesWViolated(_) => "NPreservesWViolated",
        FiltrationNotAdapted(_) => "FiltrationNotAdapted",
        WeightMismatch { .. } => "WeightMismatch",
        NonHermitianGram(_) => "NonHermitianGram",
        InvalidStructure(_) => "InvalidStructure",
        InvertibilityFailed => "InvertibilityFailed",
        NotUnipotent => "NotUnipotent",
        IndexMismatch(_) => "IndexMismatch",
        TruncationTooShort { .. } => "TruncationTooShort",
        ROutOfRange(_) => "ROutOfRange",
        NonCommutingNilpotents(_) => "NonCommutingNilpotents",
        HypothesisWViolated(_) => "HypothesisWViolated",
        DegreeBoundTooSmall { .. } => "DegreeBoundTooSmall",
        OddBoundedRank(_) => "OddBoundedRank",
        Invalid(_) => "Invalid",
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub struct Settings {
    pub seed: u64,
    pub degree_bound: usize,
    pub cyclotomic_bound: u32,
}

/// What a command produced, before the report envelope is added.
pub struct Outcome {
    pub inputs: Vec<Value>,
    pub results: Value,
    pub verdicts: Vec<Verdict>,
}

pub fn load(path: &Path) -> CliResult<Value> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    Ok(unwrap_report(v))
}

/// A previous report can be fed back in; its `results` are the document.
fn unwrap_report(v: Value) -> Value {
    match v {
        Value::Object(mut m) if m.contains_key("command") && m.contains_key("verdicts") => {
            m.remove("results").unwrap_or(Value::Null)
        }
        v => v,
    }
}

fn parse<T: DeserializeOwned>(v: &Value) -> CliResult<T> {
    serde_json::from_value(v.clone()).map_err(|e| CliError::Schema(e.to_string()))
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

fn hodge_numbers(h: &SplitMHS) -> Value {
    let m: BTreeMap<String, usize> = h
        .hodge_numbers()
        .into_iter()
        .map(|((p, q), d)| (format!("{p},{q}"), d))
        .collect();
    to_json(&m)
}

#[derive(Deserialize)]
struct ExponentsRequest {
    exponents: Vec<u32>,
}

fn singularity_input(exponents: &[u32], input: Option<&Path>) -> CliResult<(BPSingularity, Vec<Value>)> {
    match (exponents.is_empty(), input) {
        (false, _) => Ok((BPSingularity::new(exponents.to_vec())?, vec![json!({ "exponents": exponents })])),
        (true, Some(p)) => {
            let v = load(p)?;
            let r: ExponentsRequest = parse(&v)?;
            Ok((BPSingularity::new(r.exponents)?, vec![v]))
        }
        (true, None) => Err(CliError::Schema("give exponents as arguments or via --input".into())),
    }
}

pub fn spectrum(exponents: &[u32], input: Option<&Path>) -> CliResult<Outcome> {
    let (sing, inputs) = singularity_input(exponents, input)?;
    let omega = singularity::bigrading(&sing)?;
    let spec = &omega.spectrum;
    let monomials: Vec<Value> = spec
        .monomials
        .iter()
        .zip(&omega.types)
        .map(|(m, t)| {
            json!({
                "monomial": m.exponents,
                "l": m.l.to_string(),
                "alpha": m.alpha.to_string(),
                "type": [t.0, t.1],
            })
        })
        .collect();
    let mu = singularity::milnor_number(&sing);
    let results = json!({
        "exponents": sing.exponents,
        "n": sing.n(),
        "milnor_number": mu,
        "spectrum": spec.degrees().iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        "monomials": monomials,
        "hodge_numbers": hodge_numbers(&omega.mhs),
    });
    let verdicts = vec![
        Verdict::new("milnor_count", spec.len() as u64 == mu, || json!({ "monomials": spec.len(), "mu": mu })),
        Verdict::new("spectrum_symmetric", spec.is_symmetric(sing.n()), || {
            json!({ "spectrum": spec.degrees().iter().map(|l| l.to_string()).collect::<Vec<_>>() })
        }),
    ];
    Ok(Outcome {
        inputs,
        results,
        verdicts,
    })
}

pub fn residue(exponents: &[u32], input: Option<&Path>) -> CliResult<Outcome> {
    let (sing, inputs) = singularity_input(exponents, input)?;
    let res = singularity::residue_pairing(&sing);
    let modified = singularity::modified_residue(&sing)?;
    let good = singularity::good_basis_check(&sing);
    let rh = singularity::riemann_hodge_check(&sing)?;
    let opposite = singularity::opposite_filtration_check(&sing)?;
    let verdicts = vec![
        Verdict::new("good_basis_antidiagonal", good.antidiagonal, || json!({ "residue": res })),
        Verdict::new("good_basis_involution", good.involution, || json!({ "kappa": good.kappa })),
        Verdict::new("residue_orthogonality", rh.orthogonal, || json!({ "modified_residue": modified })),
        Verdict::new("riemann_hodge", rh.passes, || to_json(&rh)),
        Verdict::new("opposite_filtrations", opposite.opposite, || json!({ "witnesses": opposite.witnesses })),
    ];
    let results = json!({
        "exponents": sing.exponents,
        "residue": res,
        "modified_residue": modified,
        "good_basis": good,
        "riemann_hodge": rh,
    });
    Ok(Outcome {
        inputs,
        results,
        verdicts,
    })
}

#[derive(Deserialize)]
struct MhsRequest {
    mhs: SplitMHS,
    #[serde(rename = "N", default)]
    n: Option<Matrix>,
    #[serde(default)]
    polarization: Option<Polarization>,
    #[serde(default)]
    graded_polarizations: Option<BTreeMap<i64, Polarization>>,
}

pub fn mhs_of(input: &Path) -> CliResult<Outcome> {
    let v = load(input)?;
    let req: MhsRequest = parse(&v)?;
    let h = &req.mhs;
    let n = match &req.n {
        Some(m) => NilpotentOp::new(m.clone())?,
        None => NilpotentOp::zero(h.dim()),
    };
    let mut verdicts = vec![Verdict::new("filtrations_compatible", h.filtrations_compatible(), || {
        json!({ "mhs": h })
    })];
    let type_ok = h.has_type(n.matrix(), -1, -1);
    if req.n.is_some() {
        verdicts.push(Verdict::new("n_type_minus_one", type_ok, || json!({ "N": n.matrix() })));
    }
    let mut results = json!({
        "dim": h.dim(),
        "hodge_numbers": hodge_numbers(h),
        "weights": h.weights(),
        "pure_weight": h.pure_weight(),
        "weight_filtration": h.weight_filtration(),
        "hodge_filtration": h.hodge_filtration(),
    });
    if let Some(pol) = &req.polarization {
        let first = mhs::check_first_bilinear_relation(h, pol)?;
        verdicts.push(Verdict::new("first_bilinear_relation", first.holds, || to_json(&first.witness)));
        if type_ok {
            let pos = mhs::check_positivity(h, pol, &n)?;
            verdicts.push(Verdict::new("positivity", pos.all_definite, || to_json(&pos.pieces)));
            results["positivity"] = to_json(&pos);
        }
    }
    if let Some(graded) = &req.graded_polarizations {
        let adm = mhs::check_admissibility(h, &n, graded)?;
        verdicts.push(Verdict::new("admissible", adm.admissible, || {
            json!({ "reason": adm.reason, "graded": adm.graded })
        }));
        results["admissibility"] = to_json(&adm);
    }
    Ok(Outcome {
        inputs: vec![v],
        results,
        verdicts,
    })
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum QuiverOp {
    /// Dual quiver of one quiver file.
    Dual,
    /// `T = 1 + vc` of one quiver file.
    Monodromy,
    /// `φ = im c ⊕ ker v` for one quiver file.
    Vanishing,
    /// `c` surjective, `v` injective, no origin-supported pieces.
    Minimality,
    /// Entrywise comparison of two quiver files.
    Equal,
    /// `j_!` extension of a monodromy matrix file.
    Shriek,
    /// `j_*` extension of a monodromy matrix file.
    Star,
    /// `j_!*` extension of a monodromy matrix file.
    Intermediate,
    /// `j_!*` is the image of `j_! → j_*` (monodromy matrix file).
    Image,
    /// Limit behaviour of `j_! → j_*` after tensoring with `J^{0,n}`.
    LimitIso,
    /// Gluing functor and its round trip on a gluing diagram file.
    Glue,
}

fn one_file(files: &[PathBuf], count: usize) -> CliResult<Vec<Value>> {
    if files.len() != count {
        return Err(CliError::Schema(format!("expected {count} input file(s), got {}", files.len())));
    }
    files.iter().map(|p| load(p)).collect()
}

pub fn quiver(op: QuiverOp, files: &[PathBuf]) -> CliResult<Outcome> {
    let two = matches!(op, QuiverOp::Equal);
    let inputs = one_file(files, if two { 2 } else { 1 })?;
    let first = &inputs[0];
    let mut verdicts = Vec::new();
    let results = match op {
        QuiverOp::Dual | QuiverOp::Monodromy | QuiverOp::Vanishing | QuiverOp::Minimality | QuiverOp::Equal => {
            let q: quiver::DiskQuiver = parse(first)?;
            match op {
                QuiverOp::Dual => to_json(&q.dual()),
                QuiverOp::Monodromy => json!({ "T": q.monodromy() }),
                QuiverOp::Vanishing => {
                    let d = q.vanishing_decomposition();
                    verdicts.push(Verdict::new("direct_sum", d.direct_sum, || to_json(&d)));
                    to_json(&d)
                }
                QuiverOp::Minimality => {
                    let m = q.minimality();
                    verdicts.push(Verdict::new("minimal", m.minimal, || to_json(&m)));
                    to_json(&m)
                }
                _ => {
                    let other: quiver::DiskQuiver = parse(&inputs[1])?;
                    let equal = q == other;
                    verdicts.push(Verdict::new("equal", equal, || json!({ "left": q, "right": other })));
                    json!({ "equal": equal })
                }
            }
        }
        QuiverOp::Shriek | QuiverOp::Star | QuiverOp::Intermediate => {
            let t: Matrix = parse(first)?;
            let q = match op {
                QuiverOp::Shriek => quiver::extend_shriek(&t)?,
                QuiverOp::Star => quiver::extend_star(&t)?,
                _ => quiver::intermediate_extension(&t)?,
            };
            verdicts.push(Verdict::new("monodromy_preserved", q.monodromy() == t, || {
                json!({ "T": t, "got": q.monodromy() })
            }));
            to_json(&q)
        }
        QuiverOp::Image => {
            let t: Matrix = parse(first)?;
            let ok = quiver::intermediate_is_image(&t)?;
            verdicts.push(Verdict::new("intermediate_is_image", ok, || json!({ "T": t })));
            json!({ "intermediate_is_image": ok })
        }
        QuiverOp::LimitIso => {
            let t: Matrix = parse(first)?;
            let r = quiver::limit_isomorphism(&t, t.rows())?;
            verdicts.push(Verdict::new("limit_isomorphism", r.holds, || to_json(&r)));
            to_json(&r)
        }
        QuiverOp::Glue => {
            let d: quiver::GluingDiagram = parse(first)?;
            let functor = quiver::gluing_functor(&d)?;
            let round = quiver::gluing_round_trip(&d)?;
            verdicts.push(Verdict::new("round_trip", round.is_some(), || json!({ "diagram": d })));
            json!({
                "functor": functor,
                "isomorphism": round.map(|(f0, f1)| json!({ "V0": f0, "V1": f1 })),
            })
        }
    };
    Ok(Outcome {
        inputs,
        results,
        verdicts,
    })
}

#[derive(Deserialize)]
struct VfiltRequest {
    #[serde(default, with = "hodgeext::exact::ratstr::opt")]
    r: Option<BigRational>,
    #[serde(default)]
    window: Option<(i64, i64)>,
    #[serde(default)]
    t_dt: Option<Matrix>,
    #[serde(default, with = "hodgeext::exact::ratstr::opt")]
    alpha: Option<BigRational>,
    #[serde(default)]
    p: Option<usize>,
}

pub fn vfilt(input: &Path) -> CliResult<Outcome> {
    let v = load(input)?;
    let req: VfiltRequest = parse(&v)?;
    if req.r.is_none() && req.t_dt.is_none() {
        return Err(CliError::Schema("need \"r\" (toy model) or \"t_dt\" with \"alpha\"".into()));
    }
    let mut results = json!({});
    let mut verdicts = Vec::new();
    if let Some(r) = &req.r {
        let (lo, hi) = req.window.unwrap_or((-5, 5));
        let jumps = logext::toy_jumps(r, lo, hi)?;
        let mut table = Vec::new();
        for a in &jumps {
            let g = logext::toy_gr(r, a)?;
            table.push(json!({
                "alpha": a.to_string(),
                "dim": g.dim,
                "eigenvalue": g.eigenvalue.map(|e| e.to_string()),
            }));
        }
        let discrete = jumps.iter().all(|a| (a - r).is_integer());
        verdicts.push(Verdict::new("jumps_in_r_plus_z", discrete, || json!({ "r": r.to_string() })));
        results["toy"] = json!({ "r": r.to_string(), "window": [lo, hi], "jumps": table });
    }
    if let Some(t_dt) = &req.t_dt {
        let alpha = req
            .alpha
            .clone()
            .ok_or_else(|| CliError::Schema("\"t_dt\" needs \"alpha\"".into()))?;
        let p = req.p.unwrap_or(t_dt.rows());
        let iso = logext::nearby_iso(t_dt, &alpha, p)?;
        verdicts.push(Verdict::new("kernel_iso", iso.kernel_iso, || json!({ "into_kernel": iso.into_kernel })));
        verdicts.push(Verdict::new("cokernel_iso", iso.cokernel_iso, || {
            json!({ "from_cokernel": iso.from_cokernel })
        }));
        results["nearby"] = to_json(&iso);
    }
    Ok(Outcome {
        inputs: vec![v],
        results,
        verdicts,
    })
}

#[derive(Deserialize)]
struct ExtendRequest {
    #[serde(flatten)]
    input: PolarizedInput,
    #[serde(rename = "I", default)]
    index_set: Option<Vec<usize>>,
}

pub fn extend(input: &Path) -> CliResult<Outcome> {
    let v = load(input)?;
    let req: ExtendRequest = parse(&v)?;
    let input = req.input;
    let idx = req.index_set.unwrap_or_else(|| (0..input.n_list.len()).collect());
    let ext = ncext::extend(&input, &idx)?;
    let wc = ncext::weight_check(&ext, input.weight, ext.l)?;
    let mut verdicts = vec![
        Verdict::new("s_tilde_nondegenerate", ext.s_tilde.is_invertible(), || json!({ "S_tilde": ext.s_tilde })),
        Verdict::new("weight_check", wc.passes, || json!({ "expected": wc.expected, "got": ext.w_filt })),
        Verdict::new("operators_commute", ncext::extended_operators_commute(&ext), || {
            json!({ "N_tilde": ext.n_tilde, "s": ext.s_action })
        }),
        Verdict::new("f_shift", ncext::f_shift_consistent(&ext, &input), || json!({ "F": ext.f })),
    ];
    let mut results = json!({ "extension": ext, "weight": wc.weight });
    if input.dim <= 3 {
        let t = ncext::tensor_check(&input, &ext)?;
        verdicts.push(Verdict::new("tensor_congruence", t.congruent && t.exact != Some(false), || {
            json!({ "S_tilde": ext.s_tilde, "exact": t.exact })
        }));
        results["tensor"] = to_json(&t);
    }
    if ext.index_set.len() >= 2 {
        let mut checks = Vec::new();
        for &i in &ext.index_set {
            let cv = ncext::can_var_compatibility(&input, &ext.index_set, i)?;
            verdicts.push(Verdict::new(format!("can_var_{i}"), cv.compatible, || {
                json!({ "can": cv.can, "var": cv.var })
            }));
            checks.push(cv);
        }
        results["can_var"] = to_json(&checks);
    }
    Ok(Outcome {
        inputs: vec![v],
        results,
        verdicts,
    })
}

#[derive(Deserialize, Default)]
struct NeronRequest {
    #[serde(default)]
    omega: Option<Scalar>,
    #[serde(default)]
    orbit: Option<NilpotentOrbit>,
    #[serde(default)]
    frame: Option<SectionFamily>,
    #[serde(default)]
    convention: Option<ClosureConvention>,
    #[serde(default)]
    monodromy: Option<Matrix>,
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0..1usize << n)
        .map(|mask| (0..n).filter(|j| mask >> j & 1 == 1).collect())
        .collect()
}

pub fn neron(input: Option<&Path>, settings: &Settings) -> CliResult<Outcome> {
    let (req, inputs) = match input {
        Some(p) => {
            let v = load(p)?;
            (parse::<NeronRequest>(&v)?, vec![v])
        }
        None => (NeronRequest::default(), vec![]),
    };
    if let Some(t) = &req.monodromy {
        let frame = neron::canonical_extension_frame(t, settings.cyclotomic_bound)?;
        return Ok(Outcome {
            inputs,
            results: json!({ "residue_frame": frame }),
            verdicts: vec![],
        });
    }
    let (orbit, frame) = match (req.orbit, req.frame) {
        (Some(o), Some(f)) => (o, f),
        (None, None) => {
            let o = neron::rank_four_orbit(req.omega.unwrap_or_else(Scalar::i))?;
            let f = neron::rank_four_frame(&o.omega);
            (o, f)
        }
        _ => return Err(CliError::Schema("\"orbit\" and \"frame\" must be given together".into())),
    };
    orbit.validate()?;
    let conv = req.convention.unwrap_or_default();
    let check = neron::orbit_check(&orbit);
    let mut verdicts = vec![Verdict::new("nilpotents_commute", check.commuting, || json!({ "N": orbit.n_list }))];
    for op in &check.operators {
        verdicts.push(Verdict::new(
            format!("n{}_nilpotent_type_minus_one", op.index + 1),
            op.nilpotent && op.type_minus_one,
            || to_json(op),
        ));
    }
    let pres = neron::presentation(&frame, settings.degree_bound)?;
    let fibers: Vec<Value> = subsets(frame.vars)
        .into_iter()
        .map(|v| json!({ "vanishing": v, "fiber_dim": pres.stratum_fiber_dim(&v) }))
        .collect();
    let closure = neron::integral_closure(&orbit, &frame, conv)?;
    let strata = neron::fiber_classification(&orbit, &frame, settings.degree_bound, conv)?;
    let results = json!({
        "orbit": check,
        "presentation": { "bound": pres.bound, "relations": pres.render() },
        "fiber_dims": fibers,
        "closure": closure.iter().map(|e| e.render()).collect::<Vec<_>>(),
        "strata": strata,
    });
    Ok(Outcome {
        inputs,
        results,
        verdicts,
    })
}

pub fn run_verify(suites: &[String], settings: &Settings) -> CliResult<Outcome> {
    let names: Vec<String> = if suites.is_empty() || suites.iter().any(|s| s == "all") {
        verify::SUITES.iter().map(|s| s.to_string()).collect()
    } else {
        suites.to_vec()
    };
    for n in &names {
        if !verify::SUITES.contains(&n.as_str()) {
            return Err(CliError::Schema(format!("unknown suite {n:?}; known: {}", verify::SUITES.join(", "))));
        }
    }
    let seed = settings.seed;
    let reports = std::thread::scope(|s| {
        let handles: Vec<_> = names
            .iter()
            .map(|n| s.spawn(move || verify::run_suite(n, seed)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().map_err(|_| CliError::Internal("suite worker panicked".into())))
            .collect::<CliResult<Vec<_>>>()
    })?;
    let reports = reports.into_iter().collect::<hodgeext::Result<Vec<_>>>()?;
    let verdicts = reports
        .iter()
        .map(|r| {
            Verdict::new(r.name.clone(), r.passed(), || {
                json!({ "failures": r.failures.len(), "first": r.failures.iter().take(5).collect::<Vec<_>>() })
            })
        })
        .collect();
    let summary: Vec<Value> = reports
        .iter()
        .map(|r| json!({ "suite": r.name, "cases": r.cases, "checks": r.checks, "failures": r.failures.len() }))
        .collect();
    Ok(Outcome {
        inputs: vec![json!({ "suites": names, "seed": seed })],
        results: json!({ "seed": seed, "suites": summary }),
        verdicts,
    })
}
