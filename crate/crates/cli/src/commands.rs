use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use vaisman_core::biholo::{check_j_compatibility, Family, FamilyChart, FiniteDifference};
use vaisman_core::catalog::{
    self, complex_structure, lck_form, make_gh, make_gh_psi, metric_matrix, AlgebraId, Branch, DeltaParam,
    EpsilonVector, LckCoefficients,
};
use vaisman_core::forms::KForm;
use vaisman_core::hermitian::{
    classify_hermitian, covariant_derivative_form, fundamental_form, lee_form, levi_civita, sasaki_check,
    vaisman_from_sasaki, BilinearForm, ComplexStructure, HermitianClass,
};
use vaisman_core::io;
use vaisman_core::modification::{
    check_preservation, decompose_gh_modification, modify as apply_modification, reductive_modification_iso,
    validate_modification, vaisman_modification_check,
};
use vaisman_core::scalar::{fmt_q, parse_q, qi};
use vaisman_core::search::{verify_classification, SearchConfig};
use vaisman_core::suite::{run_criterion, SuiteConfig, CRITERIA};
use vaisman_core::{LieAlgebra, Matrix, Q};

use num_complex::Complex64;

use crate::report::Report;
use crate::{AlgebraArgs, ModifyArgs, PushforwardArgs, SearchArgs, StructureArgs, SuiteArgs, VerifyArgs};

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn qs(v: &[Q]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(fmt_q(x))).collect())
}

fn parse_list(s: &str) -> Result<Vec<Q>> {
    s.split(',').map(|t| parse_q(t).map_err(|e| anyhow!(e))).collect()
}

fn parse_delta(s: &str) -> Result<DeltaParam<Q>> {
    let v = parse_list(s)?;
    if v.len() != 2 {
        bail!("expected k,l but got {s:?}");
    }
    Ok(DeltaParam::new(v[0].clone(), v[1].clone())?)
}

fn parse_eps(s: &str) -> Result<EpsilonVector> {
    let signs: Vec<i8> = s
        .split(',')
        .map(|t| t.trim().parse::<i8>().map_err(|_| anyhow!("bad sign {t:?} in --eps")))
        .collect::<Result<_>>()?;
    Ok(EpsilonVector::new(signs)?)
}

fn parse_branch(s: &str) -> Result<Branch> {
    match s.to_ascii_lowercase().as_str() {
        "v" => Ok(Branch::V),
        "w" => Ok(Branch::W),
        _ => bail!("branch must be v or w, got {s:?}"),
    }
}

struct Loaded {
    id: Option<AlgebraId>,
    g: LieAlgebra<Q>,
}

fn load_algebra(a: &AlgebraArgs) -> Result<Loaded> {
    if let Some(path) = &a.algebra_file {
        let g = io::algebra_from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
        return Ok(Loaded { id: None, g });
    }
    let name = a.algebra.as_deref().ok_or_else(|| anyhow!("one of --algebra or --algebra-file is required"))?;
    let id: AlgebraId = name.parse()?;
    let g = match &id {
        AlgebraId::GhPsi { p, q } => {
            let path = a.weights.as_ref().ok_or_else(|| anyhow!("ghpsi needs --weights"))?;
            let w = io::weights_from_json(&read(path)?, *p, *q).with_context(|| format!("parsing {}", path.display()))?;
            make_gh_psi(*p, *q, &w)?
        }
        other => other.build()?,
    };
    Ok(Loaded { id: Some(id), g })
}

fn load_structure(l: &Loaded, s: &StructureArgs) -> Result<(ComplexStructure<Q>, KForm<Q>)> {
    let n = l.g.dim();
    let j = if let Some(path) = &s.j_file {
        let m = io::matrix_from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
        if m.rows() != n {
            bail!("complex structure is {}x{0}, algebra has dimension {n}", m.rows());
        }
        ComplexStructure::new(m)?
    } else {
        let id = l.id.as_ref().ok_or_else(|| anyhow!("a JSON algebra needs --j-file"))?;
        let delta = parse_delta(s.j.as_deref().unwrap_or("1,0"))?;
        let branch = match &s.branch {
            Some(b) => parse_branch(b)?,
            None => Branch::canonical_for(id),
        };
        let eps = if id.is_reductive() {
            None
        } else {
            Some(match &s.eps {
                Some(e) => parse_eps(e)?,
                None => EpsilonVector::all_positive(id.planes()),
            })
        };
        complex_structure(id, &delta, eps.as_ref(), branch)?
    };
    let omega = if let Some(path) = &s.omega {
        let f = io::kform_from_json(&read(path)?, l.g.basis_names()).with_context(|| format!("parsing {}", path.display()))?;
        if f.degree() != 2 {
            bail!("omega must be a 2-form");
        }
        f
    } else {
        let id = l.id.as_ref().ok_or_else(|| anyhow!("a JSON algebra needs --omega"))?;
        let layout = id.layout()?;
        let coeffs = match &s.lck {
            Some(c) => LckCoefficients::parse(id, c)?,
            None if id.is_reductive() => LckCoefficients::Reductive { a: qi(0), b: qi(0), c: qi(1) },
            None => {
                let zeros = vec![qi(0); id.planes()];
                LckCoefficients::Heisenberg { a: zeros.clone(), b: zeros, c0: qi(1) }
            }
        };
        lck_form(&l.g, layout, &coeffs)?
    };
    Ok((j, omega))
}

fn matrix_json(m: &Matrix<Q>) -> Value {
    io::matrix_to_json(m)
}

pub fn verify(echo: Vec<String>, a: &VerifyArgs) -> Result<Report> {
    if let Some(name) = &a.sasaki {
        return verify_sasaki(echo, name, a.structure.j.as_deref());
    }
    let mut r = Report::new(echo);
    let l = load_algebra(&a.algebra)?;
    let (j, omega) = load_structure(&l, &a.structure)?;
    let m = metric_matrix(&omega, &j);
    r.info("metric", matrix_json(&m));
    r.check("metric_symmetric", m.is_symmetric(), None);
    if !m.is_symmetric() {
        r.finish();
        return Ok(r);
    }
    let metric = BilinearForm::new(m)?;
    let rep = classify_hermitian(&l.g, &j, &metric)?;
    r.check(
        "integrable",
        rep.integrability.integrable,
        Some(json!({"nijenhuis_max_entry": rep.integrability.max_entry, "witness": rep.integrability.witness})),
    );
    if let HermitianClass::NotCompatible { reason } = &rep.class {
        r.check("compatible", false, Some(json!(reason)));
    } else if rep.integrability.integrable {
        r.check("compatible", true, None);
    }
    r.info("class", serde_json::to_value(&rep.class)?);
    r.info("signature", serde_json::to_value(rep.signature)?);
    r.info("positive_definite", json!(rep.positive_definite));
    if matches!(rep.class, HermitianClass::Lck { .. } | HermitianClass::Kahler) {
        let fund = fundamental_form(&metric, &j)?;
        if let Some(lee) = lee_form(&l.g, &fund)? {
            let theta = lee.theta.to_covector();
            r.info("lee_form", qs(&theta));
            r.info("lee_field", qs(&metric.raise(&theta)?));
            let nabla = covariant_derivative_form(&levi_civita(&l.g, &metric)?, &lee.theta)?;
            r.info("nabla_lee", matrix_json(&nabla));
        }
    }
    if let HermitianClass::Lck { vaisman } = rep.class {
        r.info("vaisman", json!(vaisman));
    }
    // Without --expect, the structure must be lcK.
    let (label, ok) = match a.expect.as_deref() {
        None | Some("lck") => ("lck", matches!(rep.class, HermitianClass::Lck { .. })),
        Some("kahler") => ("expect_kahler", rep.class == HermitianClass::Kahler),
        Some("vaisman") => ("expect_vaisman", rep.class == HermitianClass::Lck { vaisman: true }),
        Some("non-vaisman") => ("expect_non_vaisman", rep.class == HermitianClass::Lck { vaisman: false }),
        Some(other) => bail!("unknown --expect value {other:?}"),
    };
    r.check(label, ok, None);
    r.data = json!({ "algebra": io::algebra_to_json(&l.g), "report": rep });
    r.finish();
    Ok(r)
}

fn verify_sasaki(echo: Vec<String>, name: &str, delta: Option<&str>) -> Result<Report> {
    let mut r = Report::new(echo);
    let (g, data) = match name {
        "su2" => catalog::sasaki_su2(),
        "sl2" => catalog::sasaki_sl2(),
        "affine" => catalog::sasaki_affine(),
        other => match other.parse::<AlgebraId>() {
            Ok(AlgebraId::Heisenberg(m)) => catalog::sasaki_heisenberg(m)?,
            _ => bail!("unknown Sasaki example {other:?}; expected su2, sl2, affine or h:<m>"),
        },
    };
    let rep = sasaki_check(&g, &data)?;
    r.check("reeb", rep.reeb, None);
    r.check("contact_tensor", rep.tensor, None);
    r.check("metric_identity", rep.metric_identity, None);
    r.check("killing_reeb", rep.killing, None);
    r.check("cr_integrable", rep.cr_integrable, None);
    if rep.passes() {
        let d = parse_delta(delta.unwrap_or("1,0"))?;
        let v = vaisman_from_sasaki(&g, &data, &d.k, &d.l)?;
        let class = classify_hermitian(&v.algebra, &v.j, &v.metric)?.class;
        r.check("product_is_vaisman", class == HermitianClass::Lck { vaisman: true }, Some(serde_json::to_value(&class)?));
        r.data = json!({ "product": io::algebra_to_json(&v.algebra), "metric": matrix_json(v.metric.matrix()) });
    }
    r.finish();
    Ok(r)
}

pub fn modify(echo: Vec<String>, a: &ModifyArgs) -> Result<Report> {
    let mut r = Report::new(echo);
    let l = load_algebra(&a.algebra)?;
    let (j, omega) = load_structure(&l, &a.structure)?;
    let m = metric_matrix(&omega, &j);
    if !m.is_symmetric() {
        bail!("the structure does not define a symmetric metric");
    }
    let metric = BilinearForm::new(m)?;
    let text = read(&a.phi)?;
    let phi = io::modification_from_json(&text, l.g.basis_names()).with_context(|| format!("parsing {}", a.phi.display()))?;
    let valid = validate_modification(&l.g, &metric, Some(&j), &phi)?;
    r.check("modification_valid", valid.is_valid(), Some(serde_json::to_value(&valid)?));
    if !valid.is_valid() {
        r.finish();
        return Ok(r);
    }
    let gp = apply_modification(&l.g, &phi)?;
    let pres = check_preservation(&l.g, &metric, &j, &phi)?;
    r.check("jacobi", pres.jacobi, None);
    r.check("nijenhuis_preserved", pres.nijenhuis_equal, None);
    r.check("domega_preserved", pres.domega_equal, None);
    r.check("unimodularity_preserved", pres.unimodular_equal, None);
    let base = classify_hermitian(&l.g, &j, &metric)?.class;
    if base == (HermitianClass::Lck { vaisman: true }) {
        let v = vaisman_modification_check(&l.g, &metric, &j, &phi)?;
        r.check(
            "vaisman_criterion",
            v.agree,
            Some(json!({"lee_kills_image": v.lee_kills_image, "modified_class": v.modified_class})),
        );
    } else {
        r.info("base_class", serde_json::to_value(&base)?);
    }
    let mut data = serde_json::Map::new();
    data.insert("modified".into(), io::algebra_to_json(&gp));
    match &l.id {
        Some(AlgebraId::Gh(mm)) => match decompose_gh_modification(&l.g, &metric, &j, &phi) {
            Ok(d) => {
                let model = if d.q == 0 { make_gh(*mm)? } else { make_gh_psi(d.p, d.q, &d.weights)? };
                let iso = gp.change_basis(&d.basis_change)?.structure_tensor() == model.structure_tensor();
                r.check("gh_psi_isomorphism", iso, Some(json!({"p": d.p, "q": d.q})));
                data.insert("weights".into(), matrix_json(&d.weights));
                data.insert("basis_change".into(), matrix_json(&d.basis_change));
            }
            Err(e) => r.info("gh_psi_isomorphism", json!(format!("not decomposed: {e}"))),
        },
        Some(id) if id.is_reductive() => match reductive_modification_iso(&l.g, &phi) {
            Ok(f) => {
                r.check("reductive_isomorphism", true, None);
                data.insert("isomorphism".into(), matrix_json(&f));
            }
            Err(e) => r.check("reductive_isomorphism", false, Some(json!(e.to_string()))),
        },
        _ => {}
    }
    r.data = Value::Object(data);
    r.finish();
    Ok(r)
}

pub fn search(echo: Vec<String>, a: &SearchArgs) -> Result<Report> {
    let mut r = Report::new(echo);
    let id: AlgebraId = a.algebra.parse()?;
    if matches!(id, AlgebraId::Heisenberg(_) | AlgebraId::GhPsi { .. }) {
        bail!("search supports gl2r, u2 and gh:<m>");
    }
    let cfg = SearchConfig {
        seeds: a.seeds,
        newton_max_iter: a.max_iter,
        residual_tol: a.residual_tol,
        match_tol: a.match_tol,
        rng_seed: a.seed,
        dedup_tol: a.dedup_tol,
    };
    cfg.validate()?;
    let rep = verify_classification(&id, &cfg)?;
    r.info("solutions", json!(rep.solutions));
    r.info("matched", json!(rep.matched.len()));
    r.check("unmatched", rep.unmatched.is_empty(), Some(json!(rep.unmatched.len())));
    if !rep.flagged_k_zero.is_empty() {
        r.info("flagged_k_zero", json!(rep.flagged_k_zero.len()));
    }
    r.data = json!({
        "solutions": rep.solutions,
        "params": rep.matched,
        "residuals": rep.matched.iter().map(|m| m.residual).collect::<Vec<_>>(),
        "unmatched": rep.unmatched,
        "flagged_k_zero": rep.flagged_k_zero,
    });
    r.finish();
    Ok(r)
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| anyhow!("not a number: {t:?}"))).collect()
}

pub fn pushforward(echo: Vec<String>, a: &PushforwardArgs) -> Result<Report> {
    let mut r = Report::new(echo);
    let d = parse_f64_list(&a.delta)?;
    if d.len() != 2 {
        bail!("--delta expects k,l");
    }
    let delta = Complex64::new(d[0], d[1]);
    let family = match a.family.as_str() {
        "gl2" => Family::Gl2,
        "sl2" => Family::Sl2,
        "su2" => Family::Su2,
        "gh" => {
            let eps = a.eps.as_deref().ok_or_else(|| anyhow!("gh needs --eps"))?;
            Family::Gh { eps: parse_eps(eps)?.signs().to_vec() }
        }
        other => bail!("unknown family {other:?}; expected gl2, sl2, su2 or gh"),
    };
    if a.samples == 0 || a.step.is_nan() || a.step <= 0.0 {
        bail!("--samples and --step must be positive");
    }
    let mut chart = FamilyChart::new(family, delta)?;
    if let Family::Gh { eps } = &chart.family {
        chart.unsigned_gh_map = a.unsigned_map || eps.iter().all(|e| *e == 1);
    }
    let fd = FiniteDifference { step: a.step, richardson: a.richardson };
    let rep = check_j_compatibility(&chart, a.samples, a.seed, fd)?;
    r.check("j_relations", rep.max_residual < a.tol, Some(json!(rep.max_residual)));
    r.check("closed_form_fields", rep.max_field_residual < a.tol, Some(json!(rep.max_field_residual)));
    r.data = json!({ "report": rep, "fields": chart.family.field_names(), "unsigned_gh_map": chart.unsigned_gh_map });
    r.finish();
    Ok(r)
}

pub fn paper_suite(echo: Vec<String>, a: &SuiteArgs, timings: bool) -> Result<Report> {
    let mut r = Report::new(echo);
    let ids: Vec<u8> = match &a.only {
        Some(list) => list
            .split(',')
            .map(|t| t.trim().parse::<u8>().map_err(|_| anyhow!("bad criterion id {t:?}")))
            .collect::<Result<_>>()?,
        None => CRITERIA.iter().map(|(i, _)| *i).collect(),
    };
    let cfg = SuiteConfig { quick: a.quick, seed: a.seed };
    let mut times = BTreeMap::new();
    let mut results = Vec::new();
    for id in ids {
        let start = Instant::now();
        let c = run_criterion(id, &cfg)?;
        times.insert(format!("criterion-{id}"), start.elapsed().as_secs_f64());
        let failures: Vec<&String> = c.failures.iter().take(5).collect();
        r.check(
            format!("criterion-{id}"),
            c.passed,
            Some(json!({"name": c.name, "checks": c.checks, "failures": c.failures.len(), "first_failures": failures})),
        );
        results.push(c);
    }
    r.data = json!({ "criteria": results, "quick": a.quick, "seed": a.seed });
    if timings {
        r.timings = Some(times);
    }
    r.finish();
    Ok(r)
}
