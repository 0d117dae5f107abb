use std::fmt::Write as _;

use anyhow::{bail, Result};
use serde_json::{json, Value};
use torushom_core::graph_model::{pattern_classes, PatternView};
use torushom_core::{
    count_via_hom, delta, dominant_patterns, enumerate_bk, format_rational, kbounded_asymptotic,
    l_terms, measures_table, partition_function, partition_function_transfer, qcolor_ck, qcolor_f,
    qcolor_l2, z_formula, Caps, Rational, TorusSpec, WeightedGraph,
};

use crate::{PatternSelector, Report};

fn to_json<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report types serialize")
}

pub fn patterns(graph: &WeightedGraph) -> Result<Report> {
    let set = dominant_patterns(graph)?;
    let mut text = format!(
        "eta = {}\npatterns = {}\n",
        show(&set.eta),
        set.patterns.len()
    );
    let mut rows = Vec::new();
    for (i, p) in set.patterns.iter().enumerate() {
        let d = delta(graph, p)?;
        writeln!(text, "{:>4}  {p}  delta = {}", i + 1, show(&d))?;
        rows.push(json!({
            "index": i + 1,
            "pattern": to_json(&PatternView::from(p)),
            "delta": format_rational(&d),
        }));
    }
    let json = json!({ "eta": format_rational(&set.eta), "patterns": rows });
    Ok(Report {
        text,
        json,
        ok: true,
    })
}

pub fn lk(graph: &WeightedGraph, m: u32, k: usize, selector: PatternSelector) -> Result<Report> {
    let set = dominant_patterns(graph)?;
    let groups: Vec<(usize, usize)> = match selector {
        PatternSelector::All => pattern_classes(graph, &set.patterns)
            .into_iter()
            .map(|class| (class[0], class.len()))
            .collect(),
        PatternSelector::Index(i) => {
            if i > set.patterns.len() {
                bail!("pattern index {i} out of range 1..={}", set.patterns.len());
            }
            vec![(i - 1, 1)]
        }
    };
    let mut text = format!("m = {m}, k = {k}\n");
    let mut rows = Vec::new();
    for (index, multiplicity) in groups {
        let p = &set.patterns[index];
        let terms = l_terms(graph, p, m, k)?;
        writeln!(
            text,
            "pattern {} {p} (class size {multiplicity})",
            index + 1
        )?;
        for (j, t) in terms.iter().enumerate() {
            writeln!(text, "  L{} = {t}", j + 1)?;
        }
        rows.push(json!({
            "index": index + 1,
            "pattern": to_json(&PatternView::from(p)),
            "multiplicity": multiplicity,
            "terms": to_json(&terms),
        }));
    }
    let json = json!({ "m": m, "k": k, "classes": rows });
    Ok(Report {
        text,
        json,
        ok: true,
    })
}

pub fn zformula(
    graph: &WeightedGraph,
    m: u32,
    k: usize,
    n: Option<u32>,
    rel_tol: f64,
) -> Result<Report> {
    let z = z_formula(graph, m, k)?;
    let report = z.report(n);
    let mut text = format!(
        "eta = {}, patterns = {}, m = {m}, k_order = {k}\n",
        report.eta, report.patterns
    );
    let mut ok = true;
    let mut precision = Vec::new();
    for (i, class) in report.classes.iter().enumerate() {
        writeln!(
            text,
            "class {} rep ({:?},{:?}) x{}\n  exponent = {}\n  truncation ~ {}",
            i + 1,
            class.representative.a,
            class.representative.b,
            class.multiplicity,
            class.exponent_terms,
            class.truncation_heuristic
        )?;
        if let Some(n) = n {
            let eval = z.classes[i].exponent.eval_float(n, rel_tol);
            ok &= eval.meets();
            precision.push(json!({ "value": eval.value, "abs_error": eval.abs_error, "meets_rel_tol": eval.meets() }));
        }
    }
    if let (Some(n), Some(ln_z), Some(trunc)) =
        (n, &report.ln_z_at_n, &report.truncation_heuristic_at_n)
    {
        writeln!(text, "n = {n}: ln Z ~ {ln_z} (truncation ~ {trunc})")?;
        writeln!(
            text,
            "float precision at rel_tol {rel_tol:e}: {}",
            if ok { "PASS" } else { "FAIL" }
        )?;
    }
    let mut json = to_json(&report);
    json["exponent_precision"] = Value::Array(precision);
    Ok(Report { text, json, ok })
}

pub fn brute(graph: &WeightedGraph, m: u32, n: u32, caps: Caps) -> Result<Report> {
    let spec = TorusSpec::new(m, n)?;
    let z = partition_function(spec, graph, caps)?;
    let mut text = format!("Z = {}\n", show(&z));
    let mut json = json!({ "m": m, "n": n, "Z": format_rational(&z) });
    let mut ok = true;
    if n == 1 {
        let transfer = partition_function_transfer(m, graph)?;
        ok = transfer == z;
        writeln!(text, "transfer-matrix cross-check: {}", pass(ok))?;
        json["Z_transfer"] = json!(format_rational(&transfer));
    }
    Ok(Report { text, json, ok })
}

pub fn verify(
    graph: &WeightedGraph,
    m: u32,
    n: u32,
    alpha: &Rational,
    caps: Caps,
) -> Result<Report> {
    let table = measures_table(TorusSpec::new(m, n)?, graph, alpha, caps)?;
    let ok = table.identity_holds();
    let report = table.report();
    let mut text = format!("tilde-identity: {} (exact)\n", pass(ok));
    writeln!(
        text,
        "Z = {}\nZ_tilde = {}\ntv = {}",
        report.z, report.z_tilde, report.tv
    )?;
    for (p, xi) in &report.xi {
        writeln!(text, "Xi{p} = {xi}")?;
    }
    for (p, count) in &report.p_histogram {
        writeln!(text, "colourings captured by {p} patterns: {count}")?;
    }
    let mut json = to_json(&report);
    json["tilde_identity"] = json!(ok);
    Ok(Report { text, json, ok })
}

pub fn kbounded(k: u32, n: Option<u32>, exact: bool, caps: Caps) -> Result<Report> {
    let asymptotic = kbounded_asymptotic(k)?;
    let mut text = format!(
        "|B_{k}(n)| ~ {} * ({})^(2^(n-1)) * exp({})\n",
        show(&asymptotic.prefactor),
        show(&asymptotic.base),
        asymptotic.exponent
    );
    let mut json = json!({ "k": k, "asymptotic": to_json(&asymptotic) });
    let mut ok = true;
    if exact {
        let Some(n) = n else {
            bail!("--exact needs --n");
        };
        let direct = enumerate_bk(n, k)?;
        let via_hom = count_via_hom(n, k, caps)?;
        ok = direct == via_hom;
        text = format!(
            "{direct}\n{text}homomorphism cross-check: {} ({via_hom})\n",
            pass(ok)
        );
        json["n"] = json!(n);
        json["count"] = json!(direct);
        json["count_via_hom"] = json!(via_hom);
    }
    Ok(Report { text, json, ok })
}

pub fn qcolor(q: usize, m: u32, k: usize) -> Result<Report> {
    let graph = WeightedGraph::complete(q);
    let set = dominant_patterns(&graph)?;
    let terms = l_terms(&graph, &set.patterns[0], m, k.max(2))?;
    let mut ok = true;
    let mut text = format!("q = {q}, m = {m}\n");
    let mut checks = Vec::new();
    let mut record = |name: String, engine: String, closed: String| -> Result<()> {
        let same = engine == closed;
        ok &= same;
        writeln!(
            text,
            "{name}: {}\n  engine = {engine}\n  closed = {closed}",
            pass(same)
        )?;
        checks
            .push(json!({ "check": name, "pass": same, "engine": engine, "closed_form": closed }));
        Ok(())
    };
    if m == 2 {
        record(
            "L1 = f(n)".into(),
            terms[0].to_string(),
            qcolor_f(q)?.to_string(),
        )?;
        if q >= 4 {
            record("L2".into(), terms[1].to_string(), qcolor_l2(q)?.to_string())?;
        }
    }
    if q >= 4 {
        for j in 1..=k {
            let base = torushom_core::formulas::qcolor_leading_base(q, m, j);
            let engine = terms[j - 1].coefficient(2 * j as u32 - 2, &base);
            record(
                format!("c_{j} (n^{} * ({})^n)", 2 * j - 2, format_rational(&base)),
                format_rational(&engine),
                format_rational(&qcolor_ck(q, m, j)?),
            )?;
        }
    }
    let json = json!({ "q": q, "m": m, "k": k, "checks": checks });
    Ok(Report { text, json, ok })
}

/// Integers without the `/1` suffix; JSON keeps the canonical `p/q` form.
fn show(value: &Rational) -> String {
    if value.is_integer() {
        value.to_integer().to_string()
    } else {
        format_rational(value)
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
