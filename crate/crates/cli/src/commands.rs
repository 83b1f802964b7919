use std::fs;

use serde_json::{json, Value};

use jumploci_core::arrangements::{find_3nets, os_algebra, r1_arrangement, rank2_flats, ArrangementJson, HyperplaneArrangement};
use jumploci_core::cdga::{CdgaSpec, FiniteCdga};
use jumploci_core::elliptic::{
    elliptic_model, conf_e_pipeline, conf_e_star_2, unimodularity_check, EllipticArrangement, EllipticJson,
};
use jumploci_core::fixtures;
use jumploci_core::fox::{
    alexander_matrix, linear_names, linearized_alexander_matrix, linearized_r1_ideal, v1_generators, v1_ideal,
    GroupPresentation,
};
use jumploci_core::jump_loci::{
    compare_res_supports, resonance_locus, resonance_of_cohomology, support_locus, AffineLocus, SupportVariant,
};
use jumploci_core::tcone::{
    classical_tcone, classical_tcone_tori, exp_tcone_ideal, exp_tcone_tori, rational_quadric_test,
    tangent_cone_formula_check, tangent_cone_formula_check_ideal, z_names, FormalityReport, TorusLocus, TorusLocusJson,
    Verdict,
};
use jumploci_core::CoreError;
use jumploci_symbolic::{Ideal, LaurentPoly};

use crate::report::{sha256, InputInfo};
use crate::{ArrangementAction, CdgaAction, Common, EllipticAction, FoxAction, TconeAction, Variant};

pub struct Output {
    pub command: String,
    pub input: InputInfo,
    pub data: Value,
    pub verdict: Option<String>,
    pub status: u8,
}

type Res<T> = Result<T, String>;

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn ok(command: &str, input: InputInfo, data: Value) -> Res<Output> {
    Ok(Output { command: command.into(), input, data, verdict: None, status: 0 })
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

/// Raw input text and its provenance.
enum Source {
    Fixture(String),
    File(String, String),
}

impl Source {
    fn info(&self) -> InputInfo {
        match self {
            Source::Fixture(name) => InputInfo {
                source: format!("fixture:{name}"),
                digest: sha256(fixtures::source(name).unwrap_or(name).as_bytes()),
            },
            Source::File(path, text) => InputInfo { source: format!("file:{path}"), digest: sha256(text.as_bytes()) },
        }
    }
}

fn source(c: &Common) -> Res<Source> {
    match (&c.fixture, &c.input) {
        (Some(f), _) => Ok(Source::Fixture(f.clone())),
        (None, Some(p)) => {
            let text = fs::read_to_string(p).map_err(|err| format!("cannot read {}: {err}", p.display()))?;
            Ok(Source::File(p.display().to_string(), text))
        }
        (None, None) => Err("one of --fixture or --input is required".into()),
    }
}

fn load_cdga(src: &Source) -> Res<FiniteCdga> {
    match src {
        Source::Fixture(name) => fixtures::cdga(name).map_err(e),
        Source::File(_, text) => match FiniteCdga::from_json(text) {
            Err(CoreError::InvalidCdga(v)) => Err(format!(
                "CDGA fails validation: {}",
                v.iter().map(|v| format!("[{}] {}", v.kind, v.detail)).collect::<Vec<_>>().join("; ")
            )),
            other => other.map_err(e),
        },
    }
}

/// Locus as JSON, with each piece labelled when its zero set is empty or the origin.
fn locus_json(l: &AffineLocus) -> Value {
    let origin = Ideal::point(l.names().to_vec(), &vec![jumploci_symbolic::Rational::zero(); l.nvars()]);
    let sets: Vec<Value> = l
        .pieces()
        .iter()
        .map(|p| {
            if p.is_unit() {
                json!("empty")
            } else if p.variety_eq(&origin) {
                json!("{0}")
            } else {
                Value::Null
            }
        })
        .collect();
    // reduced Gröbner bases: canonical, and far shorter than raw minor lists
    let pieces: Vec<Vec<String>> = l.pieces().iter().map(|p| p.minimalized().to_strings()).collect();
    let mut v = to_value(&l.to_json());
    if let Value::Object(o) = &mut v {
        o.insert("pieces".into(), to_value(&pieces));
        if sets.iter().any(|s| !s.is_null()) {
            o.insert("zero_sets".into(), Value::Array(sets));
        }
    }
    v
}

pub fn cdga(action: CdgaAction, c: &Common) -> Res<Output> {
    let src = source(c)?;
    let info = src.info();
    let i = c.degree;
    match action {
        CdgaAction::Validate => {
            let (violations, dims) = match &src {
                Source::File(_, text) => {
                    let spec = CdgaSpec::from_json(text).map_err(e)?;
                    let v = FiniteCdga::validate_spec(&spec);
                    if v.is_empty() {
                        let a = FiniteCdga::from_spec(&spec).map_err(e)?;
                        let mut v = a.validate();
                        v.extend(a.validate_weights().map_err(e)?);
                        (v, Some(a.dims()))
                    } else {
                        (v, None)
                    }
                }
                Source::Fixture(_) => {
                    let a = load_cdga(&src)?;
                    let mut v = a.validate();
                    v.extend(a.validate_weights().map_err(e)?);
                    (v, Some(a.dims()))
                }
            };
            let status = if violations.is_empty() { 0 } else { 1 };
            let data = json!({ "valid": violations.is_empty(), "dims": dims, "violations": violations });
            Ok(Output { command: "cdga validate".into(), input: info, data, verdict: None, status })
        }
        CdgaAction::Cohomology => {
            let a = load_cdga(&src)?;
            let degrees: Vec<Value> = (0..=a.top_degree())
                .map(|k| {
                    let h = a.cohomology(k);
                    let reps: Vec<String> = h.reps.iter().map(|r| render_vector(a.names(k), r)).collect();
                    json!({ "degree": k, "dim": a.dim(k), "betti": h.dim(), "representatives": reps })
                })
                .collect();
            ok("cdga cohomology", info, json!({ "dims": a.dims(), "degrees": degrees, "h1_variables": a.h1_names() }))
        }
        CdgaAction::Resonance { of_cohomology } => {
            let a = load_cdga(&src)?;
            let l = if of_cohomology { resonance_of_cohomology(&a, i) } else { resonance_locus(&a, i) }.map_err(e)?;
            let command = if of_cohomology { "cdga resonance --of-cohomology" } else { "cdga resonance" };
            ok(command, info, json!({ "degree": i, "locus": locus_json(&l), "empty": l.is_empty(), "whole": l.is_whole() }))
        }
        CdgaAction::Support { variant } => {
            let a = load_cdga(&src)?;
            let (v, name) = match variant {
                Variant::Homological => (SupportVariant::Homological, "homological"),
                Variant::Cohomological => (SupportVariant::Cohomological, "cohomological"),
            };
            let l = support_locus(&a, i, v).map_err(e)?;
            ok("cdga support", info, json!({ "degree": i, "variant": name, "locus": locus_json(&l), "empty": l.is_empty() }))
        }
        CdgaAction::Compare => {
            let a = load_cdga(&src)?;
            ok("cdga compare", info, to_value(&compare_res_supports(&a, i).map_err(e)?))
        }
    }
}

fn render_vector(names: &[String], v: &[jumploci_symbolic::Rational]) -> String {
    let terms: Vec<String> = v
        .iter()
        .zip(names)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, n)| if *c == jumploci_symbolic::Rational::one() { n.clone() } else { format!("{c}*{n}") })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Equations for a tangent-cone computation: a torus locus or Laurent polynomials.
enum Equations {
    Tori(TorusLocus),
    Polys(Vec<LaurentPoly>, usize),
}

fn t_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("t{i}")).collect()
}

fn equations(c: &Common, polys: &crate::PolyArgs) -> Res<(Equations, InputInfo)> {
    if !polys.polys.is_empty() {
        let n = polys.nvars.ok_or("--poly requires --nvars")?;
        let names = t_names(n);
        let gens = polys.polys.iter().map(|p| LaurentPoly::parse(p, &names).map_err(e)).collect::<Res<Vec<_>>>()?;
        let text = polys.polys.join("; ");
        let info = InputInfo { source: format!("polys:{text}"), digest: sha256(text.as_bytes()) };
        return Ok((Equations::Polys(gens, n), info));
    }
    let src = source(c)?;
    let info = src.info();
    let eqs = match &src {
        Source::Fixture(name) if fixtures::tori_names().contains(&name.as_str()) => {
            Equations::Tori(fixtures::tori(name).map_err(e)?)
        }
        Source::Fixture(name) => {
            let g = fixtures::group(name).map_err(e)?;
            let n = g.betti1().map_err(e)?;
            Equations::Polys(v1_generators(&g).map_err(e)?, n)
        }
        Source::File(_, text) => {
            let v: Value = serde_json::from_str(text).map_err(|err| format!("invalid JSON: {err}"))?;
            if v.get("tori").is_some() || v.get("points").is_some() {
                let j: TorusLocusJson = serde_json::from_value(v).map_err(e)?;
                Equations::Tori(TorusLocus::from_json(&j).map_err(e)?)
            } else {
                let n = v.get("n").and_then(Value::as_u64).ok_or("expected {\"n\": .., \"polynomials\": [..]}")? as usize;
                let names = t_names(n);
                let ps = v.get("polynomials").and_then(Value::as_array).ok_or("missing \"polynomials\"")?;
                let gens = ps
                    .iter()
                    .map(|p| LaurentPoly::parse(p.as_str().unwrap_or_default(), &names).map_err(e))
                    .collect::<Res<Vec<_>>>()?;
                Equations::Polys(gens, n)
            }
        }
    };
    Ok((eqs, info))
}

pub fn tcone(action: &TconeAction, c: &Common) -> Res<Output> {
    match action {
        TconeAction::Exp { polys } => {
            let (eqs, info) = equations(c, polys)?;
            let (subspaces, n) = match &eqs {
                Equations::Tori(l) => (exp_tcone_tori(l), l.ambient()),
                Equations::Polys(g, n) => (exp_tcone_ideal(g, *n, c.max_partition_support).map_err(e)?, *n),
            };
            let names = z_names(n);
            let comps: Vec<Value> =
                subspaces.iter().map(|s| json!({ "forms": s.to_strings(&names), "dim": s.dim() })).collect();
            ok("tcone exp", info, json!({ "variables": names, "components": comps }))
        }
        TconeAction::Classical { polys } => {
            let (eqs, info) = equations(c, polys)?;
            let l = match &eqs {
                Equations::Tori(l) => classical_tcone_tori(l, &z_names(l.ambient())),
                Equations::Polys(g, n) => classical_tcone(g, &z_names(*n)).map_err(e)?,
            };
            ok("tcone classical", info, json!({ "locus": locus_json(&l), "empty": l.is_empty() }))
        }
    }
}

fn verdict_output(command: &str, info: InputInfo, data: Value, verdict: Verdict) -> Output {
    let v = to_value(&verdict).as_str().unwrap_or_default().to_string();
    let status = if verdict == Verdict::NonFormal { 2 } else { 0 };
    Output { command: command.into(), input: info, data, verdict: Some(v), status }
}

fn load_tori(spec: &str) -> Res<TorusLocus> {
    if fixtures::tori_names().contains(&spec) {
        return fixtures::tori(spec).map_err(e);
    }
    let text = fs::read_to_string(spec).map_err(|err| format!("'{spec}' is neither a torus fixture nor a readable file: {err}"))?;
    let j: TorusLocusJson = serde_json::from_str(&text).map_err(|err| format!("invalid JSON in {spec}: {err}"))?;
    TorusLocus::from_json(&j).map_err(e)
}

fn renamed(l: &AffineLocus, names: &[String]) -> AffineLocus {
    AffineLocus::new(
        names.to_vec(),
        l.pieces().iter().map(|p| Ideal::new(names.to_vec(), p.gens().to_vec())).collect(),
    )
}

fn formality_report_value(r: &FormalityReport, extra: Value) -> Value {
    let mut v = to_value(r);
    if let (Value::Object(o), Value::Object(x)) = (&mut v, extra) {
        o.extend(x);
    }
    v
}

pub fn formality(tori: Option<&str>, c: &Common) -> Res<Output> {
    let src = source(c)?;
    let info = src.info();
    let group = match &src {
        Source::Fixture(name) if fixtures::group_names().contains(&name.as_str()) => Some(fixtures::group(name).map_err(e)?),
        Source::File(_, text) if serde_json::from_str::<Value>(text).is_err() => {
            Some(GroupPresentation::parse(text.trim()).map_err(e)?)
        }
        _ => None,
    };
    if let Some(g) = group {
        // characteristic variety from Fox calculus, resonance from the linearized matrix
        let n = g.betti1().map_err(e)?;
        let names = linear_names(n);
        let r = AffineLocus::new(names.clone(), vec![linearized_r1_ideal(&g).map_err(e)?]);
        let report = match tori {
            Some(t) => tangent_cone_formula_check(&load_tori(t)?, None, &r).map_err(e)?,
            None => tangent_cone_formula_check_ideal(&v1_generators(&g).map_err(e)?, None, &r, c.max_partition_support)
                .map_err(e)?,
        };
        let data = formality_report_value(&report, json!({ "resonance": locus_json(&r) }));
        return Ok(verdict_output("formality", info, data, report.verdict));
    }
    let a = load_cdga(&src)?;
    let tori_name = match (tori, &src) {
        (Some(t), _) => t.to_string(),
        (None, Source::Fixture(name)) if fixtures::tori_names().contains(&format!("{name}_v1").as_str()) => format!("{name}_v1"),
        _ => return Err("--tori is required for a CDGA model".into()),
    };
    let v = load_tori(&tori_name)?;
    let names = z_names(v.ambient());
    let r_model = renamed(&resonance_locus(&a, 1).map_err(e)?, &names);
    let r_coh = renamed(&resonance_of_cohomology(&a, 1).map_err(e)?, &names);
    let report = tangent_cone_formula_check(&v, Some(&r_model), &r_coh).map_err(e)?;
    let data = formality_report_value(
        &report,
        json!({ "tori": tori_name, "resonance_model": locus_json(&r_model), "resonance_cohomology": locus_json(&r_coh) }),
    );
    Ok(verdict_output("formality", info, data, report.verdict))
}

pub fn fox(action: FoxAction, presentation: Option<&str>, c: &Common) -> Res<Output> {
    let (g, info) = match presentation {
        Some(p) => (
            GroupPresentation::parse(p).map_err(e)?,
            InputInfo { source: format!("presentation:{p}"), digest: sha256(p.as_bytes()) },
        ),
        None => {
            let src = source(c)?;
            let g = match &src {
                Source::Fixture(name) => fixtures::group(name).map_err(e)?,
                Source::File(_, text) => GroupPresentation::parse(text.trim()).map_err(e)?,
            };
            (g, src.info())
        }
    };
    let t = g.torus_names().map_err(e)?;
    match action {
        FoxAction::Alexander => {
            let m = alexander_matrix(&g).map_err(e)?;
            let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(|p| p.display(&t).to_string()).collect()).collect();
            ok("fox alexander", info, json!({ "variables": t, "matrix": rows }))
        }
        FoxAction::Linearized => {
            let m = linearized_alexander_matrix(&g).map_err(e)?;
            let z = linear_names(g.ngens());
            ok("fox linearized", info, json!({ "variables": z, "matrix": m.to_strings(&z) }))
        }
        FoxAction::V1 => {
            let i = v1_ideal(&g).map_err(e)?;
            ok(
                "fox v1",
                info,
                json!({ "variables": t, "ideal": i.minimalized().to_strings(), "unit": i.is_unit(), "zero": i.is_zero_ideal() }),
            )
        }
        FoxAction::R1 => {
            let i = linearized_r1_ideal(&g).map_err(e)?;
            let min = i.minimalized();
            let quadric = min
                .gens()
                .iter()
                .find(|p| p.is_homogeneous() && p.total_degree() == Some(2))
                .map(|p| rational_quadric_test(p, min.names()))
                .transpose()
                .map_err(e)?;
            ok(
                "fox r1",
                info,
                json!({ "variables": min.names(), "ideal": min.to_strings(), "zero": i.is_zero_ideal(), "quadric": quadric }),
            )
        }
    }
}

fn load_arrangement(src: &Source) -> Res<HyperplaneArrangement> {
    match src {
        Source::Fixture(name) => fixtures::arrangement(name).map_err(e),
        Source::File(_, text) => {
            let j: ArrangementJson = serde_json::from_str(text).map_err(|err| format!("invalid JSON: {err}"))?;
            HyperplaneArrangement::from_json(&j).map_err(e)
        }
    }
}

pub fn arrangement(action: ArrangementAction, c: &Common) -> Res<Output> {
    let src = source(c)?;
    let info = src.info();
    let a = load_arrangement(&src)?;
    let label = |hs: &[usize]| -> Vec<String> { hs.iter().map(|&i| a.labels()[i].clone()).collect() };
    match action {
        ArrangementAction::Flats => {
            let flats: Vec<Value> = rank2_flats(&a)
                .iter()
                .map(|f| json!({ "hyperplanes": label(&f.hyperplanes), "multiplicity": f.multiplicity() }))
                .collect();
            ok("arrangement flats", info, json!({ "size": a.len(), "flats": flats }))
        }
        ArrangementAction::Os => {
            let os = os_algebra(&a, 2).map_err(e)?;
            let degrees: Vec<Value> =
                (0..=os.top_degree()).map(|k| json!({ "degree": k, "dim": os.dim(k), "basis": os.names(k) })).collect();
            ok("arrangement os", info, json!({ "dims": os.dims(), "degrees": degrees }))
        }
        ArrangementAction::R1 => {
            let r = r1_arrangement(&a, c.max_arrangement_size).map_err(e)?;
            let nets: Vec<Value> = find_3nets(&a, c.max_arrangement_size)
                .map_err(e)?
                .iter()
                .map(|n| json!({ "net": n.display(a.labels()), "essential": n.essential }))
                .collect();
            ok(
                "arrangement r1",
                info,
                json!({
                    "components": r.components,
                    "nets": nets,
                    "certificate": r.certificate,
                    "samples": r.samples,
                    "locus": r.locus.as_ref().map(locus_json),
                }),
            )
        }
    }
}

fn load_elliptic(spec: &Source) -> Res<EllipticArrangement> {
    match spec {
        Source::Fixture(name) => fixtures::elliptic(name).map_err(e),
        Source::File(_, text) => {
            let j: EllipticJson = serde_json::from_str(text).map_err(|err| format!("invalid JSON: {err}"))?;
            EllipticArrangement::from_json(&j).map_err(e)
        }
    }
}

fn elliptic_from_name(spec: &str) -> Res<EllipticArrangement> {
    if fixtures::elliptic_names().contains(&spec) {
        return fixtures::elliptic(spec).map_err(e);
    }
    let text = fs::read_to_string(spec).map_err(|err| format!("'{spec}' is neither a fixture nor a readable file: {err}"))?;
    load_elliptic(&Source::File(spec.into(), text))
}

/// Rank of every subset of rows, as a bitmask-indexed table.
fn lattice_ranks(a: &EllipticArrangement) -> Vec<usize> {
    let m = a.len();
    (0u32..(1 << m))
        .map(|s| {
            let rows: Vec<Vec<i64>> = (0..m).filter(|i| s & (1 << i) != 0).map(|i| a.rows()[i].clone()).collect();
            if rows.is_empty() {
                0
            } else {
                jumploci_symbolic::smith_normal_form_i64(&rows).rank()
            }
        })
        .collect()
}

pub fn elliptic(action: &EllipticAction, c: &Common) -> Res<Output> {
    let src = source(c)?;
    let info = src.info();
    let a = load_elliptic(&src)?;
    match action {
        EllipticAction::Check => {
            let u = unimodularity_check(&a).map_err(e)?;
            ok("elliptic check", info, json!({ "n": a.n(), "rows": a.rows(), "unimodularity": u }))
        }
        EllipticAction::Model => {
            let m = elliptic_model(&a).map_err(e)?;
            let degrees: Vec<Value> =
                (0..=m.top_degree()).map(|k| json!({ "degree": k, "dim": m.dim(k), "basis": m.names(k) })).collect();
            let weights_ok = m.validate().is_empty() && m.validate_weights().map_err(e)?.is_empty();
            ok(
                "elliptic model",
                info,
                json!({
                    "dims": m.dims(),
                    "degrees": degrees,
                    "betti": (0..=m.top_degree()).map(|k| m.betti(k)).collect::<Vec<_>>(),
                    "variables": m.variables(),
                    "valid_with_weights": weights_ok,
                    "translations_ignored": a.translations_ignored(),
                }),
            )
        }
        EllipticAction::Pipeline { tori } => {
            if a.rows() != conf_e_star_2().rows() {
                return Err("the pipeline is defined for the Conf(E*,2) arrangement (rows (1,0), (0,1), (1,-1))".into());
            }
            let v = load_tori(tori.as_deref().unwrap_or("conf_e_star_2_v1"))?;
            let r = conf_e_pipeline(&v).map_err(e)?;
            let verdict = r.verdict();
            Ok(verdict_output("elliptic pipeline", info, to_value(&r), verdict))
        }
        EllipticAction::Compare { other } => {
            let b = elliptic_from_name(other)?;
            let same_lattice = a.n() == b.n() && a.len() == b.len() && lattice_ranks(&a) == lattice_ranks(&b);
            let ra = resonance_locus(&elliptic_model(&a).map_err(e)?, 1).map_err(e)?;
            let rb = resonance_locus(&elliptic_model(&b).map_err(e)?, 1).map_err(e)?;
            let equal = (ra.nvars() == rb.nvars()).then(|| ra.variety_eq(&rb));
            ok(
                "elliptic compare",
                info,
                json!({
                    "other": other,
                    "same_lattice": same_lattice,
                    "r1": locus_json(&ra),
                    "r1_other": locus_json(&rb),
                    "r1_equal": equal,
                    "note": "observation for this pair only",
                }),
            )
        }
    }
}
