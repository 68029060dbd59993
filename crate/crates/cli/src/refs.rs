//! Module arguments: a JSON module file, or `d4:<name>` for the built-in
//! `D_4` modules (`T`, `S4`, `M(<r>)`, `M(0)`, `M(-1)`, `M(inf)`, `R`, `A`,
//! `B`, `C`, `F`, `G`, `H`).

use std::path::Path;

use num_rational::BigRational;
use prepro_core::linalg::field::parse_rational;
use prepro_core::module::d4;
use prepro_core::module::io::{read_module, AnyModule};
use prepro_core::mult_verify::NamedModule;
use prepro_core::{Error, RationalModule};

use crate::error::CliError;

pub fn load_any(arg: &str) -> Result<(String, AnyModule), CliError> {
    if let Some(name) = arg.strip_prefix("d4:") {
        return Ok((name.to_string(), AnyModule::Rational(builtin_d4(name)?)));
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(CliError::Io { path: path.into(), source: std::io::ErrorKind::NotFound.into() });
    }
    let (_, m) = read_module(path)?;
    let name = path.file_stem().map_or_else(|| arg.to_string(), |s| s.to_string_lossy().into_owned());
    Ok((name, m))
}

pub fn load_rational(arg: &str) -> Result<NamedModule, CliError> {
    let (name, m) = load_any(arg)?;
    match m {
        AnyModule::Rational(m) => Ok(NamedModule::new(name, m)),
        AnyModule::Modular(_) => Err(CliError::Usage(format!("{arg}: this command needs a module over Q"))),
    }
}

pub fn builtin_d4(name: &str) -> Result<RationalModule, CliError> {
    let dq = d4::d4_quiver();
    let m = match name {
        "T" => d4::module_t(&dq),
        "S4" => d4::module_s4(&dq),
        "M(0)" => d4::module_m0(&dq),
        "M(-1)" => d4::module_m_minus1(&dq),
        "M(inf)" => d4::module_m_inf(&dq),
        "R" => d4::module_r(&dq),
        "A" => d4::module_a(&dq),
        "B" => d4::module_b(&dq),
        "C" => d4::module_c(&dq),
        "F" => d4::module_f(&dq),
        "G" => d4::module_g(&dq),
        "H" => d4::module_h(&dq),
        _ => match name.strip_prefix("M(").and_then(|s| s.strip_suffix(')')) {
            Some(l) => d4::module_m(&dq, &parse_lambda(l)?)?,
            None => return Err(CliError::Usage(format!("unknown built-in D4 module {name:?}"))),
        },
    };
    Ok(m)
}

pub fn parse_lambda(s: &str) -> Result<BigRational, CliError> {
    Ok(parse_rational(s).map_err(|_| Error::Parse(format!("not a rational number: {s:?}")))?)
}
