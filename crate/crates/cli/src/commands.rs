use std::collections::BTreeMap;

use kirillov::ncdl::report::patches;
use kirillov::ncdl::{ncdl_report, Case, ReportConfig};
use kirillov::orbits::{
    canonical_orbit, classify_layer, is_subordinate, orbit_dim, orbit_invariants, orbit_sample, stabilizer, sweeping_axes,
    vergne_polarization, write_csv, Layer,
};
use kirillov::reps::export::export;
use kirillov::reps::{boundary_mass, induced_kernel, TestFunction};
use kirillov::scalar::{parse_rational, to_f64, Rational};
use kirillov::topology::{limit_set, verify_limit, LimitKind, LimitSet, OrbitSequence, Reading};
use kirillov::{Algebra, Error};
use serde_json::{json, Value};

use crate::output::{csv_string, write_text, Sink};
use crate::{
    parse_functional, parse_functional_f64, CaseArg, CmdResult, Failure, LimitsArgs, NcdlArgs, OrbitArgs, Report,
    RepNormArgs, SeqLayer,
};

/// Largest boundary-to-peak kernel ratio accepted by `rep-norm`.
const BOUNDARY_TOL: f64 = 1e-6;
/// Relative slack on `|pi(F)| <= |F|_L1`.
const L1_SLACK: f64 = 1e-3;

fn render(v: &[Rational]) -> Vec<String> {
    v.iter().map(|r| r.to_string()).collect()
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    format!("({})", parts.join(", "))
}

pub fn orbit(a: &OrbitArgs, sink: &mut Sink) -> CmdResult {
    let alg = Algebra::n7();
    let f = parse_functional(&a.f)?;
    let range = parse_rational(&a.range).ok_or_else(|| Failure::Usage(format!("cannot parse --range {:?}", a.range)))?;
    if a.sample_n == 0 {
        return Err(Failure::Usage("--sample-n must be positive".into()));
    }
    let layer = classify_layer(&f)?;
    let desc = canonical_orbit(&f)?;
    let (i1, i2) = orbit_invariants(&f);
    let stab = stabilizer(&alg, &f)?;
    let dim = orbit_dim(&alg, &f)?;
    let pol = vergne_polarization(&alg, &f, None)?;
    let subordinate = is_subordinate(&alg, &f, &pol);
    let pass = subordinate && dim + stab.dim() == alg.dim();

    sink.say(&format!("layer {}, orbit dim {dim}, stabilizer dim {}", layer.name(), stab.dim()));
    sink.say(&format!("invariants I1 = {i1}, I2 = {i2}"));
    sink.say(&format!("canonical parameters ({})", render(&desc.params).join(", ")));
    let pol_json = match pol.coordinate_indices() {
        Some(idx) => {
            let names: Vec<String> = idx.iter().map(|i| format!("X{}", i + 1)).collect();
            sink.say(&format!("polarization span {{{}}}, dim {}, subordinate {subordinate}", names.join(", "), pol.dim()));
            json!({ "dim": pol.dim(), "span": names })
        }
        None => {
            let basis: Vec<Vec<String>> = pol.basis().iter().map(|v| render(v)).collect();
            sink.say(&format!("polarization dim {}, subordinate {subordinate}", pol.dim()));
            json!({ "dim": pol.dim(), "basis": basis })
        }
    };

    let f64f: Vec<f64> = f.iter().map(to_f64).collect();
    let r = to_f64(&range);
    let values: Vec<f64> = if a.sample_n == 1 {
        vec![0.0]
    } else {
        (0..a.sample_n).map(|i| -r + 2.0 * r * i as f64 / (a.sample_n - 1) as f64).collect()
    };
    let axes = sweeping_axes(layer);
    let points = orbit_sample(&alg, &f64f, &axes, &values);
    if let Some(path) = &a.csv {
        let mut buf = Vec::new();
        write_csv(&mut buf, &points)?;
        write_text(path, &String::from_utf8(buf).expect("csv is ascii")).map_err(Error::from)?;
        sink.say(&format!("{} orbit points written to {}", points.len(), path.display()));
    }

    let json = json!({
        "config": { "f": render(&f), "sample_n": a.sample_n, "range": range.to_string() },
        "layer": layer.name(),
        "canonical": render(&desc.params),
        "invariants": { "I1": i1.to_string(), "I2": i2.to_string() },
        "orbit_dim": dim,
        "stabilizer_dim": stab.dim(),
        "polarization": pol_json,
        "subordinate": subordinate,
        "sample": { "axes": axes.iter().map(|i| format!("X{}", i + 1)).collect::<Vec<_>>(), "points": points.len() },
        "pass": pass,
    });
    Ok(Report { json, pass })
}

fn sequence(a: &LimitsArgs) -> Result<OrbitSequence, Failure> {
    Ok(match a.layer {
        SeqLayer::Gamma2 => OrbitSequence::gamma2(&a.rule_f3, &a.rule_f4, &a.rule_f7, a.horizon)?,
        SeqLayer::Gamma1 => OrbitSequence::gamma1(&a.rule_f5, &a.rule_f6, a.horizon)?,
    })
}

/// A few points of the limit set when no candidates are given.
fn default_candidates(ls: &LimitSet) -> Vec<Vec<f64>> {
    match ls.kind {
        LimitKind::CurveC1 => {
            let c1 = ls.c1.unwrap_or(0.0);
            [1.0, -1.0, 2.0, 0.5].iter().map(|&f5| vec![0.5, -0.5, 0.25, 1.0, f5, -c1 / f5, 0.0]).collect()
        }
        LimitKind::AxesUnionCharacters => vec![
            vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0],
            vec![1.0, 2.0, 3.0, 4.0, 0.0, 0.0, 0.0],
        ],
        LimitKind::AllCharacters => vec![vec![1.0, -2.0, 0.5, 3.0, 0.0, 0.0, 0.0], vec![0.0, 0.5, 0.0, -1.0, 0.0, 0.0, 0.0]],
        LimitKind::PointInLayer => vec![ls.point.as_ref().map(|p| p.representative()).unwrap_or_default()],
    }
}

pub fn limits(a: &LimitsArgs, sink: &mut Sink) -> CmdResult {
    let seq = sequence(a)?;
    let ls = limit_set(&seq, a.tol)?;
    let reading = if a.constrained { Reading::Constrained } else { Reading::Stated };
    let candidates = if a.candidates.is_empty() {
        default_candidates(&ls)
    } else {
        a.candidates.iter().map(|s| parse_functional_f64(s)).collect::<Result<_, _>>()?
    };
    sink.say(&format!(
        "limit set: {} (c1 = {}, c2 = {})",
        ls.kind.name(),
        ls.c1.map_or("-".into(), |c| format!("{c}")),
        ls.c2.map_or("-".into(), |c| format!("{c}"))
    ));
    let mut witnesses = Vec::new();
    let mut distances = Vec::new();
    let mut pass = true;
    for c in &candidates {
        match verify_limit(&seq, c, a.tol, reading) {
            Ok(rep) => {
                sink.say(&format!(
                    "{} {}: distance {:.3e} (scaled {:.3e}) over k = {}..{}",
                    if rep.pass { "PASS" } else { "FAIL" },
                    fmt_vec(c),
                    rep.max_distance,
                    rep.scaled_distance,
                    seq.horizon,
                    2 * seq.horizon
                ));
                pass &= rep.pass;
                distances.push(json!(rep.scaled_distance));
                witnesses.push(json!({
                    "candidate": c,
                    "in_limit_set": true,
                    "pass": rep.pass,
                    "max_distance": rep.max_distance,
                    "scaled_distance": rep.scaled_distance,
                    "max_orbit_residual": rep.max_orbit_residual,
                    "first": { "k": rep.ks[0], "point": rep.witnesses[0] },
                    "last": { "k": *rep.ks.last().unwrap(), "point": rep.witnesses.last().unwrap() },
                }));
            }
            Err(Error::NotInLimitSet(msg)) => {
                sink.say(&format!("FAIL {}: not in the limit set", fmt_vec(c)));
                pass = false;
                distances.push(Value::Null);
                witnesses.push(json!({ "candidate": c, "in_limit_set": false, "pass": false, "reason": msg }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let json = json!({
        "config": {
            "layer": match a.layer { SeqLayer::Gamma2 => "gamma2", SeqLayer::Gamma1 => "gamma1" },
            "rules": seq.rules.iter().map(|r| r.source().to_string()).collect::<Vec<_>>(),
            "K": a.horizon,
            "tol": a.tol,
            "reading": reading,
        },
        "c1": ls.c1,
        "c2": ls.c2,
        "kind": ls.kind.name(),
        "limit_set": ls,
        "witnesses": witnesses,
        "distances": distances,
        "pass": pass,
    });
    Ok(Report { json, pass })
}

pub fn rep_norm(a: &RepNormArgs, sink: &mut Sink) -> CmdResult {
    let f = parse_functional_f64(&a.f)?;
    if !(a.alpha > 0.0 && a.beta > 0.0) {
        return Err(Failure::Usage("--alpha and --beta must be positive".into()));
    }
    let test = TestFunction::gaussian(a.alpha, a.beta);
    let l1 = test.l1_bound();
    let layer = kirillov::orbits::classify_layer_f64(&f)?;
    let mut out = json!({
        "config": { "atom": "gauss", "alpha": a.alpha, "beta": a.beta, "f": f, "grid_n": a.grid_n, "window": a.window },
        "layer": layer.name(),
        "l1_bound": l1,
    });
    let pass;
    if layer == Layer::Gamma0 {
        let v = test.character_transform(&[f[0], f[1], f[2], f[3]]).norm();
        pass = v <= l1 * (1.0 + L1_SLACK);
        sink.say(&format!("character: |F^(f1..f4)| = {v:.6e}, |F|_1 = {l1:.6e}"));
        out["norm"] = json!(v);
    } else {
        let grids = patches(&f, a.window, a.grid_n, a.window / 2.0)?;
        let mut norm = 0.0f64;
        let mut herm = 0.0f64;
        let mut mass = 0.0f64;
        for (i, g) in grids.iter().enumerate() {
            let op = induced_kernel(&test, &f, g)?;
            norm = norm.max(op.norm());
            let scale = op.max_abs();
            if scale > 0.0 {
                herm = herm.max(op.hermiticity_defect() / scale);
            }
            mass = mass.max(boundary_mass(&op));
            if let Some(stem) = &a.export {
                let stem = if grids.len() == 1 { stem.clone() } else { stem.with_file_name(format!("{}_{i}", file_stem(stem))) };
                export(&op, &stem)?;
                sink.say(&format!("operator written to {}.bin", stem.display()));
            }
        }
        pass = norm <= l1 * (1.0 + L1_SLACK) && mass <= BOUNDARY_TOL;
        sink.say(&format!("|pi_f(F)| = {norm:.6e} over {} patch(es), |F|_1 = {l1:.6e}", grids.len()));
        sink.say(&format!("hermiticity defect {herm:.2e} |K|, boundary mass {mass:.2e}"));
        if mass > BOUNDARY_TOL {
            sink.say("window too small for this functional: enlarge --window");
        }
        out["norm"] = json!(norm);
        out["patches"] = json!(grids.len());
        out["hermiticity_defect"] = json!(herm);
        out["boundary_mass"] = json!(mass);
    }
    out["pass"] = json!(pass);
    Ok(Report { json: out, pass })
}

fn file_stem(p: &std::path::Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn rule_or(over: &Option<String>, default: &str) -> String {
    over.clone().unwrap_or_else(|| default.to_string())
}

pub fn ncdl_verify(a: &NcdlArgs, sink: &mut Sink) -> CmdResult {
    if a.k_list.is_empty() || a.k_list.contains(&0) {
        return Err(Failure::Usage("--k-list needs positive integers".into()));
    }
    let kmax = *a.k_list.iter().max().unwrap();
    let (case, seq) = match a.case {
        CaseArg::Generic => {
            let f4 = format!("{}*k^2", a.c1);
            let horizon = kmax.max(200);
            let seq = OrbitSequence::gamma2(
                &rule_or(&a.rule_f3, "0"),
                &rule_or(&a.rule_f4, &f4),
                &rule_or(&a.rule_f7, "1/k^2"),
                horizon,
            )?;
            (Case::Generic { c1: a.c1 }, seq)
        }
        CaseArg::Degenerate => {
            let horizon = kmax.max(64);
            let seq = OrbitSequence::gamma2(
                &rule_or(&a.rule_f3, "k^3/2"),
                &rule_or(&a.rule_f4, "k"),
                &rule_or(&a.rule_f7, "1/k^3"),
                horizon,
            )?;
            (Case::Degenerate, seq)
        }
        CaseArg::Gamma0 => {
            let horizon = kmax.max(64);
            let seq = OrbitSequence::gamma1(&rule_or(&a.rule_f5, "1/(4*k)"), &rule_or(&a.rule_f6, "1/(4*k)"), horizon)?;
            (Case::Gamma0, seq)
        }
    };
    if !(a.alpha > 0.0 && a.beta > 0.0) {
        return Err(Failure::Usage("--alpha and --beta must be positive".into()));
    }
    let test = TestFunction::gaussian(a.alpha, a.beta);
    let cfg = ReportConfig::new(case, seq.clone(), a.k_list.clone(), a.grid_n, a.window);
    let rep = ncdl_report(&test, &cfg)?;

    for r in &rep.rows {
        sink.say(&format!(
            "k = {:>4}  |pi_k| = {:.4e}  |sigma_k| = {:.4e}  diff = {:.4e}",
            r.k, r.norm_pi, r.norm_sigma, r.diff
        ));
    }
    sink.say(&format!(
        "{} {}: decreasing {}, final diff {:.4e}{}, slope {:.3}",
        if rep.pass { "PASS" } else { "FAIL" },
        case.name(),
        rep.decreasing,
        rep.final_diff,
        rep.final_bound.map_or(String::new(), |b| format!(" (bound {b:.4e})")),
        rep.slope
    ));
    if let Some(path) = &a.csv {
        let text = csv_string(&rep.header(), &rep.records()).map_err(Error::from)?;
        write_text(path, &text).map_err(Error::from)?;
    }

    let rules: BTreeMap<&str, String> = match a.case {
        CaseArg::Gamma0 => [("f5", 0), ("f6", 1)].into_iter().map(|(n, i)| (n, seq.rules[i].source().to_string())).collect(),
        _ => [("f3", 0), ("f4", 1), ("f7", 2)].into_iter().map(|(n, i)| (n, seq.rules[i].source().to_string())).collect(),
    };
    let json = json!({
        "config": {
            "case": case.name(),
            "c1": a.c1,
            "k_list": a.k_list,
            "grid_n": a.grid_n,
            "window": a.window,
            "profile": "gauss",
            "alpha": a.alpha,
            "beta": a.beta,
            "rules": rules,
            "horizon": seq.horizon,
        },
        "pass": rep.pass,
        "decreasing": rep.decreasing,
        "final_diff": rep.final_diff,
        "final_bound": rep.final_bound,
        "slope": rep.slope,
        "rows": rep.rows,
    });
    Ok(Report { json, pass: rep.pass })
}
