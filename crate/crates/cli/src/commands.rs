use std::fmt::Write as _;

use serde_json::{json, Value};

use prepro_core::flag_euler::{euler_characteristic, fingerprint, CountProfile, DeltaFingerprint};
use prepro_core::hom_ext::{dimension_checks, ext_presentation, Derivation, DerivationFile, DimensionReport};
use prepro_core::module::io::AnyModule;
use prepro_core::mult_verify::{
    render_expansion, reproduce_d4, verify_thm_1_1, verify_thm_1_2, D4Report, NamedModule, VerificationReport,
};
use prepro_core::{Error, Field, LambdaModule, Word};

use crate::error::CliError;
use crate::refs::{load_any, load_rational, parse_lambda};
use crate::{Cli, Command};

pub struct Outcome {
    pub json: Value,
    pub table: String,
    pub ok: bool,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Validate { module } => validate(module),
        Command::Ext { left, right } => ext(left, right),
        Command::Euler { module, word } => euler(module, word),
        Command::Fingerprint { module } => fingerprint_cmd(module),
        Command::Verify { thm, left, right, d, g, fwd, bwd } => match thm.as_str() {
            "1.2" => verify_12(left, right, d.as_deref(), g.as_deref()),
            _ => verify_11(left, right, fwd, bwd),
        },
        Command::ExampleD4 { lambda } => example_d4(lambda),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn validate_generic<F: Field>(name: &str, m: &LambdaModule<F>) -> Outcome {
    let f = m.field();
    let rep = m.validate(true);
    let failures: Vec<Value> = rep
        .residuals
        .iter()
        .map(|(v, r)| {
            let rows: Vec<Vec<String>> = (0..r.rows()).map(|i| r.row(i).iter().map(|e| f.format_elem(e)).collect()).collect();
            json!({ "vertex": v, "residual": rows })
        })
        .collect();
    let mut table = format!("module      {name}\nfield       {}\ndim         {:?}\n", f.spec(), m.dim().0);
    for (v, _) in &rep.residuals {
        let _ = writeln!(table, "relation    fails at vertex {v}");
    }
    let _ = writeln!(table, "nilpotent   {}", rep.nilpotent.unwrap_or(false));
    let _ = writeln!(table, "valid       {}", rep.is_valid());
    Outcome {
        json: json!({
            "module": name,
            "field": f.spec().to_string(),
            "valid": rep.is_valid(),
            "nilpotent": rep.nilpotent,
            "relation_failures": failures,
        }),
        table,
        ok: rep.is_valid(),
    }
}

fn validate(arg: &str) -> Result<Outcome, CliError> {
    let (name, m) = load_any(arg)?;
    Ok(match &m {
        AnyModule::Rational(m) => validate_generic(&name, m),
        AnyModule::Modular(m) => validate_generic(&name, m),
    })
}

fn ext_generic<F: Field>(l: &str, r: &str, m: &LambdaModule<F>, n: &LambdaModule<F>) -> Result<Outcome, CliError> {
    let rep: DimensionReport = dimension_checks(m, n)?;
    let mn = ext_presentation(m, n)?;
    let nm = ext_presentation(n, m)?;
    let mut table = String::new();
    let _ = writeln!(table, "{:<28}{:>6}{:>6}{:>8}", "", "Hom", "Ext1", "Ext2cok");
    let _ = writeln!(table, "{:<28}{:>6}{:>6}{:>8}", format!("({l}, {r})"), mn.hom_dim, mn.ext1_dim, mn.ext2_cokernel);
    let _ = writeln!(table, "{:<28}{:>6}{:>6}{:>8}", format!("({r}, {l})"), nm.hom_dim, nm.ext1_dim, nm.ext2_cokernel);
    let _ = writeln!(table, "symmetric form        {}", rep.form);
    let _ = writeln!(table, "Ext1 symmetric        {}", rep.ext_symmetric);
    let _ = writeln!(table, "Ext1 = Hom+Hom-form   {}", rep.crawley_boevey);
    match rep.euler_form {
        Some(b) => {
            let _ = writeln!(table, "Hom-Ext1+Ext2 = form  {b}");
        }
        None => {
            let _ = writeln!(table, "Hom-Ext1+Ext2 = form  not asserted (Dynkin)");
        }
    }
    Ok(Outcome {
        json: json!({
            "left": l,
            "right": r,
            "hom": mn.hom_dim,
            "ext1": mn.ext1_dim,
            "ext2_cokernel": mn.ext2_cokernel,
            "hom_reverse": nm.hom_dim,
            "ext1_reverse": nm.ext1_dim,
            "ext2_cokernel_reverse": nm.ext2_cokernel,
            "checks": to_json(&rep),
        }),
        table,
        ok: rep.passed(),
    })
}

fn ext(left: &str, right: &str) -> Result<Outcome, CliError> {
    let (l, a) = load_any(left)?;
    let (r, b) = load_any(right)?;
    match (&a, &b) {
        (AnyModule::Rational(m), AnyModule::Rational(n)) => ext_generic(&l, &r, m, n),
        (AnyModule::Modular(m), AnyModule::Modular(n)) => ext_generic(&l, &r, m, n),
        _ => Err(Error::FieldMismatch.into()),
    }
}

fn profile_rows(table: &mut String, p: &CountProfile) {
    let samples: Vec<String> = p.samples.iter().map(|(q, c)| format!("{q}:{c}")).collect();
    let _ = writeln!(table, "{:<16}{:>6}   {:<28} {}", p.word, p.euler, p.polynomial.to_string(), samples.join(" "));
}

fn euler(arg: &str, word: &str) -> Result<Outcome, CliError> {
    let m = load_rational(arg)?;
    let w = Word::parse(word, m.module.quiver().base())?;
    let p = euler_characteristic(&m.module, &w)?;
    let mut table = format!("{:<16}{:>6}   {:<28} counts\n", "word", "chi", "polynomial");
    profile_rows(&mut table, &p);
    Ok(Outcome { json: to_json(&p), table, ok: true })
}

pub fn fingerprint_json(m: &NamedModule, fp: &DeltaFingerprint) -> Value {
    let q = m.module.quiver().base();
    let dim: serde_json::Map<String, Value> =
        q.vertices().iter().zip(&fp.dim.0).map(|(v, &d)| (v.clone(), json!(d))).collect();
    json!({
        "module": m.name,
        "dim": dim,
        "words": fp.words.iter().map(|w| w.display(q)).collect::<Vec<_>>(),
        "euler": fp.euler,
        "profiles": to_json(&fp.profiles),
    })
}

fn fingerprint_cmd(arg: &str) -> Result<Outcome, CliError> {
    let m = load_rational(arg)?;
    let fp = fingerprint(&m.module)?;
    let mut table = format!("{:<16}{:>6}   {:<28} counts\n", "word", "chi", "polynomial");
    for p in &fp.profiles {
        profile_rows(&mut table, p);
    }
    Ok(Outcome { json: fingerprint_json(&m, &fp), table, ok: true })
}

fn report_table(rep: &VerificationReport) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "check       formula {} for ({}, {}), dim Ext1 = {}", rep.formula, rep.left, rep.right, rep.ext_dim);
    for tab in &rep.tables {
        let _ = writeln!(t, "\nstrata of P Ext1({})  primes {:?}", tab.direction, tab.primes);
        for (p, why) in &tab.skipped_primes {
            let _ = writeln!(t, "  skipped p = {p}: {why}");
        }
        for s in &tab.strata {
            let sizes: Vec<String> = s.sizes.iter().map(|(p, c)| format!("{p}:{c}")).collect();
            let _ = writeln!(t, "  {:<12}{:>4}   {}", s.anchor, s.chi_proj, sizes.join(" "));
        }
        let _ = writeln!(t, "  {:<12}{:>4}", "total", tab.chi_total());
    }
    let _ = writeln!(t, "\n{:<20}{:>8}{:>8}", "word", "lhs", "rhs");
    for l in &rep.ledger {
        let mark = if l.holds { "" } else { "  MISMATCH" };
        let _ = writeln!(t, "{:<20}{:>8}{:>8}{mark}", l.word, l.lhs, l.rhs);
    }
    let lhs = if rep.formula == "1.1" { format!("{} δ_{}⊕{}", rep.ext_dim, rep.left, rep.right) } else { format!("δ_{}·δ_{}", rep.left, rep.right) };
    let _ = writeln!(t, "\n{lhs} = {}", render_expansion(&rep.expansion));
    let _ = writeln!(t, "primes used {:?}", rep.primes_used);
    let _ = writeln!(t, "result      {}", if rep.passed { "PASS" } else { "FAIL" });
    t
}

fn load_derivation(
    path: Option<&str>,
    m: &NamedModule,
    n: &NamedModule,
) -> Result<Derivation<num_rational::BigRational>, CliError> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Io { path: p.into(), source: e })?;
            let file: DerivationFile = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{p}: {e}")))?;
            Ok(file.to_derivation(&m.module, &n.module)?)
        }
        None => {
            let pres = ext_presentation(&m.module, &n.module)?;
            if pres.ext1_dim != 1 {
                return Err(Error::ExtDimension(pres.ext1_dim).into());
            }
            Ok(pres.complement[0].clone())
        }
    }
}

fn verify_12(left: &str, right: &str, d: Option<&str>, g: Option<&str>) -> Result<Outcome, CliError> {
    let x1 = load_rational(left)?;
    let x2 = load_rational(right)?;
    let dd = load_derivation(d, &x1, &x2)?;
    let gg = load_derivation(g, &x2, &x1)?;
    let rep = verify_thm_1_2(&x1, &x2, &dd, &gg)?;
    Ok(Outcome { json: to_json(&rep), table: report_table(&rep), ok: rep.passed })
}

fn verify_11(left: &str, right: &str, fwd: &[String], bwd: &[String]) -> Result<Outcome, CliError> {
    let x1 = load_rational(left)?;
    let x2 = load_rational(right)?;
    let fwd = fwd.iter().map(|a| load_rational(a)).collect::<Result<Vec<_>, _>>()?;
    let bwd = bwd.iter().map(|a| load_rational(a)).collect::<Result<Vec<_>, _>>()?;
    let rep = verify_thm_1_1(&x1, &x2, &fwd, &bwd)?;
    Ok(Outcome { json: to_json(&rep), table: report_table(&rep), ok: rep.passed })
}

fn d4_table(rep: &D4Report) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "lambda      {}", rep.lambda);
    let _ = writeln!(t, "dim Ext1(T,S4) = {}, dim Ext1(S4,T) = {}", rep.ext_t_s4, rep.ext_s4_t);
    let _ = writeln!(t, "generic     lambda in {{{}}}; M({}) generic: {}", rep.generic_lambdas.join(", "), rep.lambda, rep.lambda_is_generic);
    let _ = writeln!(t, "\nidentities over all words of content (1,1,1,2)");
    for i in &rep.identities {
        let _ = writeln!(t, "  δ_{} = δ_{} + δ_{}   {}", i.lhs, i.rhs[0], i.rhs[1], if i.holds { "ok" } else { "FAILS" });
    }
    let _ = writeln!(t);
    t.push_str(&report_table(&rep.verification));
    let _ = writeln!(t, "\n{}", rep.expansion_line);
    let _ = writeln!(t, "overall     {}", if rep.passed { "PASS" } else { "FAIL" });
    t
}

fn example_d4(lambda: &str) -> Result<Outcome, CliError> {
    let l = parse_lambda(lambda)?;
    let rep = reproduce_d4(&l)?;
    Ok(Outcome { json: to_json(&rep), table: d4_table(&rep), ok: rep.passed })
}
