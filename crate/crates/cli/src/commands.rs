//! One function per subcommand. Each returns both renderings; `main`
//! picks one.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Result};
use serde_json::{json, Value};

use toric_core::collapse::collapse;
use toric_core::cox::MAX_SUBSET_RAYS;
use toric_core::delta::{base_divisor, is_nondegenerate, is_nonvanishing, CollectionFile};
use toric_core::fan::{is_complete, is_smooth, prime_divisors_nef, validate_fan};
use toric_core::glsm::{kempf_ness_solve, semistable, unstable_supports, SolveStatus};
use toric_core::moduli::{sample_seeded, summarize};
use toric_core::{cox_presentation, Multidegree, WeakDeltaCollection};

use crate::input;

pub struct Report {
    pub json: Value,
    pub text: String,
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn int_rows(m: &toric_core::IntMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(ToString::to_string).collect()).collect()
}

fn set_text(s: &[usize]) -> String {
    let items: Vec<String> = s.iter().map(ToString::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn yes_no(b: bool, yes: &str, no: &str) -> String {
    if b { yes } else { no }.to_string()
}

fn collection_text(c: &WeakDeltaCollection) -> String {
    let mut out = String::new();
    writeln!(out, "fan      {}", c.fan().name).unwrap();
    writeln!(out, "degree   {:?}", c.degree().0).unwrap();
    writeln!(out, "ray  section").unwrap();
    for (i, u) in c.sections().iter().enumerate() {
        writeln!(out, "{i:<4} {u}").unwrap();
    }
    out
}

pub fn fan_check(fan_arg: &str) -> Result<Report> {
    let fan = input::load_fan(fan_arg)?;
    let report = validate_fan(&fan);
    if !report.is_valid() {
        bail!("{fan_arg}: invalid fan: {report}");
    }
    let smooth = is_smooth(&fan)?;
    let complete = is_complete(&fan)?;
    let nef = if smooth && complete { Some(prime_divisors_nef(&fan)?) } else { None };
    let verdict = match &nef {
        Some(r) => yes_no(r.all_nef, "pass", "fail"),
        None => "n/a".to_string(),
    };
    let mut text = format!(
        "valid, {}, {}, nef-proxy: {verdict}\n",
        yes_no(smooth, "smooth", "not smooth"),
        yes_no(complete, "complete", "not complete")
    );
    if let Some(r) = &nef {
        writeln!(text, "convexity proxy (every prime divisor nef):").unwrap();
        writeln!(text, "ray  min wall degree  nef").unwrap();
        for d in &r.divisors {
            writeln!(text, "{:<4} {:<16} {}", d.ray, d.min_wall_degree, d.nef).unwrap();
        }
    }
    let json = json!({
        "name": fan.name,
        "valid": true,
        "smooth": smooth,
        "complete": complete,
        "convexity_proxy": nef.as_ref().map(to_value),
    });
    Ok(Report { json, text })
}

pub fn cox(fan_arg: &str) -> Result<Report> {
    let fan = input::load_fan(fan_arg)?;
    let pres = cox_presentation(&fan).map_err(|e| anyhow!("{fan_arg}: {e}"))?;
    let q = int_rows(&pres.charge_matrix);
    let mut text = format!("pic rank  {}\ncharge matrix\n", pres.pic_rank);
    for row in &q {
        writeln!(text, "  [{}]", row.join(", ")).unwrap();
    }
    writeln!(text, "irrelevant generators").unwrap();
    for g in &pres.irrelevant_generators {
        let monomial: Vec<String> = g.iter().map(|i| format!("x{i}")).collect();
        writeln!(text, "  {}", if monomial.is_empty() { "1".into() } else { monomial.join("*") }).unwrap();
    }
    writeln!(text, "primitive collections").unwrap();
    for p in &pres.primitive_collections {
        writeln!(text, "  {}", set_text(p)).unwrap();
    }
    let charge_matrix: Vec<Vec<Value>> = (0..pres.charge_matrix.rows())
        .map(|i| pres.charge_matrix.row(i).iter().map(toric_core::json::int_value).collect())
        .collect();
    let json = json!({
        "pic_rank": pres.pic_rank,
        "charge_matrix": charge_matrix,
        "irrelevant_generators": pres.irrelevant_generators,
        "primitive_collections": pres.primitive_collections,
    });
    Ok(Report { json, text })
}

pub fn moduli_dim(fan_arg: &str, degree: &[i64], sampling: Option<(u64, i64)>) -> Result<Report> {
    let fan = Arc::new(input::load_fan(fan_arg)?);
    let d = Multidegree(degree.to_vec());
    let summary = summarize(&fan, &d).map_err(|e| anyhow!("--degree: {e}"))?;
    let mut text = format!(
        "degree  {:?}\ny_dim   {}\ng_dim   {}\nw_dim   {}\n",
        summary.degree.0, summary.y_dim, summary.g_dim, summary.w_dim
    );
    if summary.assumes_trivial_generic_stabilizer {
        writeln!(text, "note    w_dim assumes a trivial generic stabilizer").unwrap();
    }
    let mut json = to_value(&summary);
    if let Some((seed, bound)) = sampling {
        let c = sample_seeded(&fan, &d, seed, bound).map_err(|e| anyhow!("--seed {seed}: {e}"))?;
        writeln!(text, "sample (seed {seed}, bound {bound})").unwrap();
        text.push_str(&collection_text(&c));
        json["sample"] = to_value(&CollectionFile::from_collection(&c));
    }
    Ok(Report { json, text })
}

pub fn delta_check(path: &Path) -> Result<Report> {
    let c = input::load_collection(path)?;
    let nonvanishing = is_nonvanishing(&c);
    let nondegenerate = is_nondegenerate(&c);
    let base = base_divisor(&c).ok().map(|g| g.to_string());
    let text = format!(
        "nonvanishing={nonvanishing} nondegenerate={nondegenerate} base_divisor={}\n",
        base.as_deref().map_or("none".to_string(), |g| format!("\"{g}\""))
    );
    let json = json!({
        "nonvanishing": nonvanishing,
        "nondegenerate": nondegenerate,
        "base_divisor": base,
    });
    Ok(Report { json, text })
}

pub fn collapse_cmd(path: &Path) -> Result<Report> {
    let data = input::load_stable_map(path)?;
    let out = collapse(&data).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let base = base_divisor(&out.collection)?.to_string();
    let mut text = collection_text(&out.collection);
    writeln!(text, "total degree  {:?}", out.total_degree.0).unwrap();
    writeln!(text, "base divisor  {base}").unwrap();
    let json = json!({
        "collection": to_value(&CollectionFile::from_collection(&out.collection)),
        "total_degree": out.total_degree.0,
        "base_divisor": base,
    });
    Ok(Report { json, text })
}

pub fn glsm_solve(path: &Path, tol: f64, max_iter: usize) -> Result<Report> {
    let p = input::load_glsm(path)?;
    let rep = kempf_ness_solve(&p, tol, max_iter).map_err(|e| anyhow!("--tol: {e}"))?;
    let mut text = String::new();
    match &rep.status {
        SolveStatus::Converged { t } => writeln!(text, "status      converged\nt           {t:?}").unwrap(),
        SolveStatus::IterationLimit { t } => {
            writeln!(text, "status      iteration limit\nt           {t:?}").unwrap()
        }
        SolveStatus::Unstable { direction, boundary } => {
            let dir: Vec<String> = direction.iter().map(ToString::to_string).collect();
            writeln!(
                text,
                "status      unstable{}\ndirection   [{}]",
                if *boundary { " (boundary)" } else { "" },
                dir.join(", ")
            )
            .unwrap()
        }
    }
    writeln!(text, "|grad|      {:e}\niterations  {}", rep.gradient_norm, rep.iterations).unwrap();
    Ok(Report { json: to_value(&rep), text })
}

pub fn glsm_phase(path: &Path) -> Result<Report> {
    let (q, fi) = input::load_charges(path)?;
    let all: BTreeSet<usize> = (0..q.cols()).collect();
    let stability = semistable(&q, &all, &fi).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let sets = unstable_supports(&q, &fi, MAX_SUBSET_RAYS).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let mut text = format!("all fields nonzero  {}\nminimal unstable sets\n", to_value(&stability).as_str().unwrap_or(""));
    for s in &sets {
        writeln!(text, "  {}", set_text(s)).unwrap();
    }
    let json = json!({
        "stability": to_value(&stability),
        "minimal_unstable_sets": sets,
    });
    Ok(Report { json, text })
}
