//! The `D_4` modules around extensions of `T` by the simple `S_4`.
//!
//! Vertex 4 carries the two-dimensional piece in every five-dimensional
//! module; its basis is (top, bottom) in the order the module is drawn.
//! Unlabeled arrows act by 1.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::field::format_rational;
use crate::linalg::{Matrix, Rationals};
use crate::module::{LambdaModule, RationalModule};
use crate::quiver::{build_double, DimVector, DoubleQuiver, Quiver};

pub fn d4_quiver() -> Arc<DoubleQuiver> {
    Arc::new(build_double(&Quiver::d4()).expect("D4 has no loops"))
}

/// Every module of the worked `D_4` example.
#[derive(Debug, Clone)]
pub struct D4Example {
    pub lambda: BigRational,
    pub t: RationalModule,
    pub s4: RationalModule,
    pub m_lambda: RationalModule,
    pub m_0: RationalModule,
    pub m_minus_1: RationalModule,
    pub m_inf: RationalModule,
    pub r: RationalModule,
    pub a: RationalModule,
    pub b: RationalModule,
    pub c: RationalModule,
    pub f: RationalModule,
    pub g: RationalModule,
    pub h: RationalModule,
}

impl D4Example {
    pub fn named(&self) -> Vec<(String, &RationalModule)> {
        vec![
            ("T".into(), &self.t),
            ("S4".into(), &self.s4),
            (format!("M({})", format_rational(&self.lambda)), &self.m_lambda),
            ("M(0)".into(), &self.m_0),
            ("M(-1)".into(), &self.m_minus_1),
            ("M(inf)".into(), &self.m_inf),
            ("R".into(), &self.r),
            ("A".into(), &self.a),
            ("B".into(), &self.b),
            ("C".into(), &self.c),
            ("F".into(), &self.f),
            ("G".into(), &self.g),
            ("H".into(), &self.h),
        ]
    }
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Column `(x, y)^T`: a map from a one-dimensional piece into vertex 4.
fn into4(x: BigRational, y: BigRational) -> Matrix<BigRational> {
    Matrix::from_vec(2, 1, vec![x, y]).expect("2x1")
}

/// Row `(x, y)`: a map out of vertex 4 onto a one-dimensional piece.
fn out4(x: BigRational, y: BigRational) -> Matrix<BigRational> {
    Matrix::from_vec(1, 2, vec![x, y]).expect("1x2")
}

fn five_dim(quiver: &Arc<DoubleQuiver>, maps: Vec<(&str, Matrix<BigRational>)>) -> RationalModule {
    LambdaModule::from_arrow_map(quiver.clone(), Rationals, DimVector(vec![1, 1, 1, 2]), maps)
        .expect("five-dimensional D4 module is well formed")
}

pub fn module_t(quiver: &Arc<DoubleQuiver>) -> RationalModule {
    let one = Matrix::from_i64(&Rationals, 1, 1, &[1]).unwrap();
    LambdaModule::from_arrow_map(
        quiver.clone(),
        Rationals,
        DimVector(vec![1, 1, 1, 1]),
        vec![("a", one.clone()), ("b", one.clone()), ("c", one)],
    )
    .expect("T is well formed")
}

pub fn module_s4(quiver: &Arc<DoubleQuiver>) -> RationalModule {
    LambdaModule::simple(quiver.clone(), Rationals, 3).expect("vertex 4 exists")
}

/// Middle term with top `S_4` acting by `(ā, b̄, c̄) = (u, v, w)` into `T`.
fn m_family(quiver: &Arc<DoubleQuiver>, abar: BigRational, bbar: BigRational, cbar: BigRational) -> RationalModule {
    let bottom = || into4(q(0), q(1));
    five_dim(
        quiver,
        vec![
            ("a", bottom()),
            ("b", bottom()),
            ("c", bottom()),
            ("a*", out4(abar, q(0))),
            ("b*", out4(bbar, q(0))),
            ("c*", out4(cbar, q(0))),
        ],
    )
}

/// `M(λ)` for `λ ∉ {0, -1}`: `ā` acts by `-1-λ`, `b̄` by 1, `c̄` by `λ`.
pub fn module_m(quiver: &Arc<DoubleQuiver>, lambda: &BigRational) -> Result<RationalModule> {
    if lambda.is_zero() || *lambda == -BigRational::one() {
        return Err(Error::InvalidParameter(format!("lambda = {}", format_rational(lambda))));
    }
    Ok(m_family(quiver, -BigRational::one() - lambda, q(1), lambda.clone()))
}

pub fn module_m0(quiver: &Arc<DoubleQuiver>) -> RationalModule {
    m_family(quiver, q(-1), q(1), q(0))
}

pub fn module_m_minus1(quiver: &Arc<DoubleQuiver>) -> RationalModule {
    m_family(quiver, q(0), q(1), q(-1))
}

pub fn module_m_inf(quiver: &Arc<DoubleQuiver>) -> RationalModule {
    m_family(quiver, q(-1), q(0), q(1))
}

/// `1, 2, 3` mapping into a two-dimensional vertex 4 along the given lines.
fn three_lines(quiver: &Arc<DoubleQuiver>, a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> RationalModule {
    five_dim(
        quiver,
        vec![
            ("a", into4(q(a.0), q(a.1))),
            ("b", into4(q(b.0), q(b.1))),
            ("c", into4(q(c.0), q(c.1))),
        ],
    )
}

/// Three pairwise distinct lines: the rigid module `R`.
pub fn module_r(quiver: &Arc<DoubleQuiver>) -> RationalModule {
    three_lines(quiver, (1, 0), (0, 1), (1, 1))
}

/// `(1 -> 4) ⊕ (2, 3 -> 4)`.
pub fn module_a(quiver: &Arc<DoubleQuiver>) -> RationalModule {
    three_lines(quiver, (1, 0), (0, 1), (0, 1))
}

/// `(2 -> 4) ⊕ (1, 3 -> 4)`.
pub fn module_b(quiver: &Arc<DoubleQuiver>) -> RationalModule {
    three_lines(quiver, (0, 1), (1, 0), (0, 1))
}

/// `(3 -> 4) ⊕ (1, 2 -> 4)`.
pub fn module_c(quiver: &Arc<DoubleQuiver>) -> RationalModule {
    three_lines(quiver, (0, 1), (0, 1), (1, 0))
}

/// A uniserial-topped module `i -> 4 -> {j, k} -> 4`, the second leg acting by -1.
fn hook(quiver: &Arc<DoubleQuiver>, top: &str, legs: [&str; 2]) -> RationalModule {
    let bar = |s: &str| format!("{s}*");
    let (l0, l1) = (bar(legs[0]), bar(legs[1]));
    five_dim(
        quiver,
        vec![
            (top, into4(q(1), q(0))),
            (l0.as_str(), out4(q(1), q(0))),
            (l1.as_str(), out4(q(1), q(0))),
            (legs[0], into4(q(0), q(1))),
            (legs[1], into4(q(0), q(-1))),
        ],
    )
}

pub fn module_f(quiver: &Arc<DoubleQuiver>) -> RationalModule {
    hook(quiver, "a", ["b", "c"])
}

pub fn module_g(quiver: &Arc<DoubleQuiver>) -> RationalModule {
    hook(quiver, "b", ["a", "c"])
}

pub fn module_h(quiver: &Arc<DoubleQuiver>) -> RationalModule {
    hook(quiver, "c", ["a", "b"])
}

pub fn build_d4_example(lambda: &BigRational) -> Result<D4Example> {
    let quiver = d4_quiver();
    Ok(D4Example {
        lambda: lambda.clone(),
        t: module_t(&quiver),
        s4: module_s4(&quiver),
        m_lambda: module_m(&quiver, lambda)?,
        m_0: module_m0(&quiver),
        m_minus_1: module_m_minus1(&quiver),
        m_inf: module_m_inf(&quiver),
        r: module_r(&quiver),
        a: module_a(&quiver),
        b: module_b(&quiver),
        c: module_c(&quiver),
        f: module_f(&quiver),
        g: module_g(&quiver),
        h: module_h(&quiver),
    })
}
