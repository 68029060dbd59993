//! JSON module files.
//!
//! ```json
//! {
//!   "quiver": "D4",
//!   "field": "Q",
//!   "dim": { "1": 1, "2": 1, "3": 1, "4": 1 },
//!   "action": { "a": [["1"]], "b": [["1"]], "c": [["1"]], "a*": [["0"]], ... }
//! }
//! ```
//!
//! `quiver` is a built-in name, a path to a quiver file (relative to the
//! module file), or an inline quiver object. Barred arrows are named `<id>*`.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Field, FieldSpec, Matrix, PrimeField, Rationals};
use crate::module::LambdaModule;
use crate::quiver::{build_double, DimVector, DoubleQuiver, Quiver, QuiverFile};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuiverRef {
    Named(String),
    Inline(QuiverFile),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleFile {
    pub quiver: QuiverRef,
    pub field: String,
    pub dim: IndexMap<String, usize>,
    pub action: IndexMap<String, Vec<Vec<String>>>,
}

/// A module over whichever field its file declares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyModule {
    Rational(LambdaModule<Rationals>),
    Modular(LambdaModule<PrimeField>),
}

impl AnyModule {
    pub fn field_spec(&self) -> FieldSpec {
        match self {
            AnyModule::Rational(_) => FieldSpec::Rationals,
            AnyModule::Modular(m) => m.field().spec(),
        }
    }

    pub fn into_rational(self) -> Result<LambdaModule<Rationals>> {
        match self {
            AnyModule::Rational(m) => Ok(m),
            AnyModule::Modular(_) => Err(Error::FieldMismatch),
        }
    }
}

/// Resolves a quiver reference. Names are tried as built-ins first, then as
/// paths relative to `base`.
pub fn resolve_quiver(r: &QuiverRef, base: Option<&Path>) -> Result<Quiver> {
    match r {
        QuiverRef::Inline(file) => Quiver::from_file(file),
        QuiverRef::Named(name) => {
            if let Some(q) = Quiver::builtin(name) {
                return Ok(q);
            }
            let path: PathBuf = match base {
                Some(b) => b.join(name),
                None => PathBuf::from(name),
            };
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Parse(format!("quiver {}: {e}", path.display())))?;
            Quiver::from_json(&text)
        }
    }
}

fn matrix_from_rows<F: Field>(f: &F, rows: &[Vec<String>], shape: (usize, usize), arrow: &str) -> Result<Matrix<F::Elem>> {
    let (r, c) = shape;
    // a matrix with no rows carries no column information in JSON
    if r == 0 && rows.is_empty() {
        return Ok(Matrix::zeros(f, 0, c));
    }
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(Error::DimensionMismatch(format!("arrow {arrow}: expected a {r}x{c} matrix")));
    }
    let data = rows.iter().flatten().map(|s| f.parse_elem(s)).collect::<Result<Vec<_>>>()?;
    Matrix::from_vec(r, c, data)
}

fn build<F: Field>(quiver: Arc<DoubleQuiver>, f: F, file: &ModuleFile) -> Result<LambdaModule<F>> {
    let base = quiver.base();
    let mut dim = vec![0usize; base.vertex_count()];
    for (v, &d) in &file.dim {
        dim[base.vertex_index(v)?] = d;
    }
    let dim = DimVector(dim);
    for id in file.action.keys() {
        quiver.arrow_index(id)?;
    }
    let action = quiver
        .arrows()
        .iter()
        .map(|b| {
            let shape = (dim[b.target], dim[b.source]);
            match file.action.get(&b.id) {
                Some(rows) => matrix_from_rows(&f, rows, shape, &b.id),
                None => Ok(Matrix::zeros(&f, shape.0, shape.1)),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    LambdaModule::new(quiver, f, dim, action)
}

impl ModuleFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Canonical text: pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("module file serializes");
        s.push('\n');
        s
    }

    pub fn load(&self, base: Option<&Path>) -> Result<AnyModule> {
        let quiver = Arc::new(build_double(&resolve_quiver(&self.quiver, base)?)?);
        self.load_with(quiver)
    }

    /// Loads against an already-built double quiver (shared between modules).
    pub fn load_with(&self, quiver: Arc<DoubleQuiver>) -> Result<AnyModule> {
        match FieldSpec::parse(&self.field)? {
            FieldSpec::Rationals => Ok(AnyModule::Rational(build(quiver, Rationals, self)?)),
            FieldSpec::PrimeField(p) => Ok(AnyModule::Modular(build(quiver, PrimeField::new(p)?, self)?)),
        }
    }

    pub fn from_module<F: Field>(quiver: QuiverRef, m: &LambdaModule<F>) -> Self {
        let dq = m.quiver();
        let f = m.field();
        let dim = dq
            .base()
            .vertices()
            .iter()
            .zip(&m.dim().0)
            .map(|(v, &d)| (v.clone(), d))
            .collect();
        let action = dq
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let mat = m.action(k);
                let rows = (0..mat.rows())
                    .map(|r| mat.row(r).iter().map(|e| f.format_elem(e)).collect())
                    .collect();
                (b.id.clone(), rows)
            })
            .collect();
        ModuleFile { quiver, field: f.spec().to_string(), dim, action }
    }
}

/// Reads and loads a module file from disk.
pub fn read_module(path: &Path) -> Result<(ModuleFile, AnyModule)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let file = ModuleFile::parse(&text)?;
    let module = file.load(path.parent())?;
    Ok((file, module))
}
