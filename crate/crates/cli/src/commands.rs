use std::fmt::Write as _;
use std::process::ExitCode;

use serde_json::json;
use sha2::{Digest, Sha256};

use hilbstab::basiskit::{verify_certificate, verify_multibasis, Certificate, MbExpr};
use hilbstab::constructions::{
    acurve, ribbon, rosary,
    rosary::{Rosary1Outcome, Rosary2Family},
    wiman,
};
use hilbstab::engine::{self, Budget};
use hilbstab::models::{build_model, verify_model, CurveModel, ModelKind};
use hilbstab::ratlin::Rat;

use crate::{Common, OutputOpts};

pub type CmdResult = Result<ExitCode, String>;

fn parse_kind(name: &str) -> Result<ModelKind, String> {
    Ok(match name {
        "ribbon" => ModelKind::Ribbon,
        "doubleA" | "doublea" => ModelKind::DoubleA,
        "rosary1" => ModelKind::RosaryCanonical,
        "rosary2" => ModelKind::RosaryBicanonical,
        "wiman" => ModelKind::Wiman,
        other => return Err(format!("unknown model {other:?}")),
    })
}

fn make_model(name: &str, g: u32) -> Result<CurveModel, String> {
    build_model(parse_kind(name)?, g).map_err(|e| e.to_string())
}

/// Writes to `--out` (content-addressed inside a directory) or stdout.
fn emit(output: &OutputOpts, text: &str) -> Result<(), String> {
    match &output.out {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => {
            let target = if path.is_dir() {
                let hash = Sha256::digest(text.as_bytes());
                let mut name = String::new();
                for b in hash.iter().take(8) {
                    let _ = write!(name, "{b:02x}");
                }
                path.join(format!("{name}.json"))
            } else {
                path.clone()
            };
            std::fs::write(&target, text).map_err(|e| format!("writing {target:?}: {e}"))?;
            eprintln!("wrote {}", target.display());
            Ok(())
        }
    }
}

fn approx(r: &Rat) -> serde_json::Value {
    json!(r.to_f64())
}

pub fn cmd_verify(common: &Common, mmax: u32, output: &OutputOpts) -> CmdResult {
    if mmax < 2 {
        return Err("--mmax must be at least 2".into());
    }
    let model = make_model(&common.model, common.g)?;
    let report = verify_model(&model, mmax);
    let text = serde_json::to_string_pretty(&report).expect("serializable report");
    emit(output, &text)?;
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn family_json(
    model: &CurveModel,
    m: u32,
    name: &str,
    expr: &MbExpr,
    check: bool,
    budget: usize,
    seed: u64,
) -> (serde_json::Value, bool) {
    let ctx = model.mb_ctx();
    let mut value = json!({
        "family": name,
        "g": model.genus(),
        "m": m,
        "member_len": expr.member_len(),
        "member_count": expr.member_count(&ctx).to_string(),
        "weight_form": expr.weight_form(&ctx),
    });
    if let MbExpr::Leaf(cand) = expr {
        value["monomials"] = json!(cand
            .monomials()
            .iter()
            .map(|mn| model.format_monomial(mn))
            .collect::<Vec<_>>());
    }
    let mut ok = true;
    if check {
        let report = verify_multibasis(model, m, expr, budget, seed);
        ok = report.passed();
        value["members"] = serde_json::to_value(&report).expect("serializable");
    }
    (value, ok)
}

fn build_family(model: &CurveModel, m: u32, family: &str) -> Result<MbExpr, String> {
    let (prefix, name) = family
        .split_once(':')
        .ok_or_else(|| format!("family {family:?} is not of the form model:Name"))?;
    let err = |e: hilbstab::constructions::ConstructionError| e.to_string();
    match prefix {
        "ribbon" => {
            let fam = ribbon::RibbonFamily::parse(name)
                .ok_or_else(|| format!("unknown ribbon family {name:?}"))?;
            ribbon::ribbon_family(model, m, fam).map_err(err)
        }
        "rosary1" => {
            let fam = rosary::Rosary1Family::parse(name)
                .ok_or_else(|| format!("unknown rosary1 family {name:?}"))?;
            rosary::rosary1_family(model, m, fam).map_err(err)
        }
        "rosary2" => {
            let fam = Rosary2Family::parse(name)
                .ok_or_else(|| format!("unknown rosary2 family {name:?}"))?;
            rosary::rosary2_family(model, m, fam).map_err(err)
        }
        "doubleA" => match name {
            "B1" => Ok(MbExpr::Leaf(acurve::chi_b1(model).map_err(err)?)),
            "B2" => Ok(MbExpr::Leaf(acurve::chi_b2(model).map_err(err)?)),
            "plusAggregate" => acurve::chi_plus_aggregate(model, m).map_err(err),
            "minusAggregate" => acurve::chi_minus_aggregate(model, m).map_err(err),
            _ => Err(format!("unknown doubleA family {name:?}")),
        },
        "wiman" => match name {
            "TypeI" => wiman::type1(model, m).map_err(err),
            "TypeII" | "M2TypeII" => wiman::type2(model, m, None).map_err(err),
            _ => Err(format!("unknown wiman family {name:?}")),
        },
        other => Err(format!("unknown family prefix {other:?}")),
    }
}

fn cert_json(cert: &Certificate) -> serde_json::Value {
    let verdict = verify_certificate(cert).expect("well-formed certificate");
    json!({
        "certificate": cert,
        "verdict": verdict,
    })
}

fn deep_check(
    model: &CurveModel,
    m: u32,
    cert: &Certificate,
    budget: usize,
    seed: u64,
) -> (serde_json::Value, bool) {
    let identity_ok = verify_certificate(cert).map(|v| v.ok).unwrap_or(false);
    let mut members_ok = true;
    let mut reports = Vec::new();
    for entry in &cert.entries {
        if let Some(expr) = &entry.expr {
            let report = verify_multibasis(model, m, expr, budget, seed);
            members_ok &= report.passed();
            reports.push(json!({"family": entry.family, "members": report}));
        }
    }
    (
        json!({"identity_ok": identity_ok, "entry_reports": reports}),
        identity_ok && members_ok,
    )
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_cert(
    which: &str,
    g: u32,
    m: u32,
    family: Option<&str>,
    check: bool,
    budget_members: usize,
    seed: u64,
    output: &OutputOpts,
) -> CmdResult {
    let model_name = family
        .and_then(|f| f.split(':').next())
        .unwrap_or(which)
        .to_string();
    let model = make_model(&model_name, g)?;
    if let Some(fam) = family {
        let expr = build_family(&model, m, fam)?;
        let (value, ok) = family_json(&model, m, fam, &expr, check, budget_members, seed);
        emit(output, &serde_json::to_string_pretty(&value).unwrap())?;
        return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) });
    }
    let cerr = |e: hilbstab::constructions::ConstructionError| e.to_string();
    // a mathematically impossible certificate is a failed verification, not
    // a usage error
    if which == "wiman" && m == 2 && g == 3 {
        let msg = wiman::wiman_certificate(&model, m)
            .err()
            .map(|e| e.to_string())
            .unwrap_or_default();
        emit(
            output,
            &serde_json::to_string_pretty(&json!({"refused": msg})).unwrap(),
        )?;
        return Ok(ExitCode::from(1));
    }
    let (mut value, mut ok): (serde_json::Value, bool) = match which {
        "ribbon" => {
            let cert = ribbon::ribbon_certificate(&model, m).map_err(cerr)?;
            let (extra, deep_ok) = if check {
                deep_check(&model, m, &cert, budget_members, seed)
            } else {
                (serde_json::Value::Null, true)
            };
            let mut v = cert_json(&cert);
            let identity = verify_certificate(&cert).unwrap().ok;
            if check {
                v["check"] = extra;
            }
            (v, identity && deep_ok)
        }
        "rosary2" => {
            let cert = rosary::rosary2_certificate(&model, m).map_err(cerr)?;
            let (extra, deep_ok) = if check {
                deep_check(&model, m, &cert, budget_members, seed)
            } else {
                (serde_json::Value::Null, true)
            };
            let mut v = cert_json(&cert);
            let identity = verify_certificate(&cert).unwrap().ok;
            if check {
                v["check"] = extra;
            }
            (v, identity && deep_ok)
        }
        "rosary1" => match rosary::rosary1_decide(&model, m).map_err(cerr)? {
            Rosary1Outcome::Certificate(cert) => {
                let (extra, deep_ok) = if check {
                    deep_check(&model, m, &cert, budget_members, seed)
                } else {
                    (serde_json::Value::Null, true)
                };
                let mut v = cert_json(&cert);
                let identity = verify_certificate(&cert).unwrap().ok;
                v["outcome"] = json!("certificate");
                if check {
                    v["check"] = extra;
                }
                (v, identity && deep_ok)
            }
            Rosary1Outcome::EngineCertificate(verdict) => (
                json!({"outcome": "engine-certificate", "verdict": verdict}),
                verdict_ok(&verdict),
            ),
            Rosary1Outcome::Destabilizer {
                rho,
                min_weight,
                bound,
            } => (
                json!({
                    "outcome": "destabilizer",
                    "rho": rho,
                    "min_weight": min_weight,
                    "bound": bound,
                }),
                true,
            ),
        },
        "wiman" => match wiman::wiman_certificate(&model, m).map_err(cerr)? {
            wiman::WimanCertificate::Semistable(cert) => {
                let (extra, deep_ok) = if check {
                    deep_check(&model, m, &cert, budget_members, seed)
                } else {
                    (serde_json::Value::Null, true)
                };
                let mut v = cert_json(&cert);
                let identity = verify_certificate(&cert).unwrap().ok;
                if check {
                    v["check"] = extra;
                }
                (v, identity && deep_ok)
            }
            wiman::WimanCertificate::Pointed(certs) => {
                let mut all_ok = true;
                let mut items = Vec::new();
                for cert in &certs {
                    let verdict = verify_certificate(cert).map_err(|e| e.to_string())?;
                    all_ok &= verdict.ok;
                    let mut item = json!({"certificate": cert, "verdict": verdict});
                    if check {
                        let (extra, deep_ok) = deep_check(&model, m, cert, budget_members, seed);
                        all_ok &= deep_ok;
                        item["check"] = extra;
                    }
                    items.push(item);
                }
                (json!({"mode": "stable-pointed", "certificates": items}), all_ok)
            }
        },
        other => return Err(format!("unknown certificate id {other:?}")),
    };
    if output.approx {
        value["note"] = json!("rational values are exact; see weight forms");
    }
    if !check {
        ok = true; // without --check emitting the certificate always succeeds
        // (the identity itself is still reported in the verdict field)
    }
    emit(output, &serde_json::to_string_pretty(&value).unwrap())?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn verdict_ok(v: &engine::Verdict) -> bool {
    matches!(
        v.status,
        engine::Status::Stable | engine::Status::StrictlySemistable
    )
}

fn verdict_json(v: &engine::Verdict, output: &OutputOpts) -> serde_json::Value {
    let mut out = serde_json::to_value(v).expect("serializable verdict");
    if !output.timing {
        out["runtime_ms"] = json!(0);
    }
    if output.approx {
        out["margin_approx"] = approx(&v.margin);
    }
    out
}

pub fn cmd_decide(common: &Common, m: u32, budget_cuts: usize, output: &OutputOpts) -> CmdResult {
    let model = make_model(&common.model, common.g)?;
    let budget = Budget {
        max_cuts: budget_cuts,
        ..Budget::default()
    };
    match engine::decide(&model, m, &budget) {
        Ok(verdict) => {
            emit(
                output,
                &serde_json::to_string_pretty(&verdict_json(&verdict, output)).unwrap(),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Err(e @ engine::EngineError::Budget(_)) => {
            emit(
                output,
                &serde_json::to_string_pretty(&json!({"status": "undecided", "reason": e.to_string()}))
                    .unwrap(),
            )?;
            Ok(ExitCode::from(3))
        }
        Err(e) => Err(e.to_string()),
    }
}

fn parse_rho(s: &str, n: usize) -> Result<Vec<Rat>, String> {
    let parts: Result<Vec<Rat>, _> = s.split(',').map(|p| p.trim().parse::<Rat>()).collect();
    let rho = parts.map_err(|e| e.to_string())?;
    if rho.len() != n {
        return Err(format!("rho has {} entries, model has {n} variables", rho.len()));
    }
    Ok(rho)
}

pub fn cmd_destab(common: &Common, m: u32, rho: &str, output: &OutputOpts) -> CmdResult {
    let model = make_model(&common.model, common.g)?;
    let rho = parse_rho(rho, model.num_vars())?;
    let report = engine::check_destabilizer(&model, m, &rho).map_err(|e| e.to_string())?;
    let mut value = serde_json::to_value(&report).expect("serializable");
    if output.approx {
        value["min_weight_approx"] = approx(&report.min_weight);
    }
    emit(output, &serde_json::to_string_pretty(&value).unwrap())?;
    Ok(ExitCode::SUCCESS)
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("range {s:?} is not of the form lo:hi"))?;
    let lo: u32 = lo.parse().map_err(|_| format!("bad range bound in {s:?}"))?;
    let hi: u32 = hi.parse().map_err(|_| format!("bad range bound in {s:?}"))?;
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

pub fn cmd_scan(
    model_name: &str,
    g_range: &str,
    m_range: &str,
    budget_cuts: usize,
    output: &OutputOpts,
) -> CmdResult {
    let kind = parse_kind(model_name)?;
    let (g_lo, g_hi) = parse_range(g_range)?;
    let (m_lo, m_hi) = parse_range(m_range)?;
    let budget = Budget {
        max_cuts: budget_cuts,
        ..Budget::default()
    };
    let mut csv = String::from("model,g,m,status,margin,cuts,slope,bielliptic_bound");
    if output.approx {
        csv.push_str(",margin_approx");
    }
    csv.push('\n');
    let mut budget_hit = false;
    for g in g_lo..=g_hi {
        let Ok(model) = build_model(kind, g) else {
            continue; // parity/range constraint: not a cell
        };
        for m in m_lo..=m_hi {
            let (status, margin, cuts) = match engine::decide(&model, m, &budget) {
                Ok(v) => (
                    format!("{:?}", v.status),
                    v.margin.to_string(),
                    v.cuts_used.to_string(),
                ),
                Err(engine::EngineError::Budget(_)) => {
                    budget_hit = true;
                    ("Undecided(budget)".into(), String::new(), String::new())
                }
                Err(e) => return Err(e.to_string()),
            };
            let slope = engine::slope(g, m);
            let bound = engine::bielliptic_weight_bound(g, m);
            let _ = write!(
                csv,
                "{model_name},{g},{m},{status},{margin},{cuts},{slope},{bound}"
            );
            if output.approx {
                let approx_margin = margin
                    .parse::<Rat>()
                    .map(|r| r.to_f64().to_string())
                    .unwrap_or_default();
                let _ = write!(csv, ",{approx_margin}");
            }
            csv.push('\n');
        }
    }
    emit(output, csv.trim_end())?;
    Ok(if budget_hit {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}

pub fn cmd_report(common: &Common, m: Option<u32>, output: &OutputOpts) -> CmdResult {
    let model = make_model(&common.model, common.g)?;
    let mut value = serde_json::to_value(model.descriptor()).expect("serializable");
    if let Some(m) = m {
        if m < 1 {
            return Err("--m must be at least 1".into());
        }
        let count = model.monomial_count(m);
        if count.to_string().len() > 6 || count.to_string().parse::<u64>().unwrap_or(u64::MAX) > 100_000 {
            return Err(format!(
                "degree-{m} image table has {count} monomials; too large to export"
            ));
        }
        let ctx = model.degree_ctx(m);
        let images: Vec<serde_json::Value> = model
            .monomials(m)
            .iter()
            .map(|mono| {
                json!({
                    "monomial": model.format_monomial(mono),
                    "exponents": mono.exps(),
                    "coords": model.image(mono).coords,
                })
            })
            .collect();
        value["degree"] = json!(m);
        value["axes"] = serde_json::to_value(&ctx.axes).unwrap();
        value["images"] = json!(images);
        value["hilbert_dim"] = json!(model.hilbert_dim(m));
    }
    emit(output, &serde_json::to_string_pretty(&value).unwrap())?;
    Ok(ExitCode::SUCCESS)
}
