//! Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

mod common;

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use prepro_core::flag_euler::{
    count_flags, count_words_fp, euler_characteristic, fingerprint, fit_profile, CountProfile, DeltaFingerprint, VALIDATION_PRIMES,
};
use prepro_core::hom_ext::{
    cy_pairing, dimension_checks, ext_presentation, hom_space, inner_derivation, pairing_gram, pullback, pushout, HomMap,
};
use prepro_core::linalg::{Matrix, Rationals};
use prepro_core::module::d4::{d4_quiver, module_s4, module_t};
use prepro_core::module::{LambdaModule, RationalModule};
use prepro_core::mult_verify::{reproduce_d4, verify_thm_1_2, NamedModule};
use prepro_core::quiver::{enumerate_splittings, enumerate_words, Quiver};
use prepro_core::random::{random_derivation, random_hom, random_module};
use prepro_core::Error;

use common::{double, random_pair, rng};

fn criterion(n: u32, limit: Option<Duration>, body: impl FnOnce() -> String) {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    match outcome {
        Ok(detail) => {
            let in_time = limit.is_none_or(|l| elapsed < l);
            let status = if in_time { "PASS" } else { "FAIL" };
            println!("criterion {n}: {status} ({detail}; {:.2?})", elapsed);
            assert!(in_time, "criterion {n} took {elapsed:?}, limit {limit:?}");
        }
        Err(e) => {
            println!("criterion {n}: FAIL ({:.2?})", elapsed);
            resume_unwind(e);
        }
    }
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn zero_hom(m: &RationalModule, n: &RationalModule) -> HomMap<BigRational> {
    HomMap { maps: (0..m.dim().len()).map(|i| Matrix::zeros(&Rationals, n.dim()[i], m.dim()[i])).collect() }
}

fn assert_profile_certified(p: &CountProfile) {
    assert_eq!(p.validation_primes.len(), VALIDATION_PRIMES, "word {}", p.word);
    assert_eq!(p.samples.len(), p.degree_bound + 1 + VALIDATION_PRIMES);
    for &(prime, count) in &p.samples {
        assert_eq!(p.polynomial.eval_int(prime as i64), q(count as i64), "word {} at {prime}", p.word);
    }
}

#[test]
fn criterion_1_ext_dimension() {
    criterion(1, Some(Duration::from_secs(1)), || {
        let dq = d4_quiver();
        let (t, s4) = (module_t(&dq), module_s4(&dq));
        let a = ext_presentation(&t, &s4).unwrap().ext1_dim;
        let b = ext_presentation(&s4, &t).unwrap().ext1_dim;
        assert_eq!((a, b), (2, 2));
        format!("dim Ext1(T,S4) = {a}, dim Ext1(S4,T) = {b}")
    });
}

#[test]
fn criterion_2_fingerprint_identities() {
    criterion(2, Some(Duration::from_secs(60)), || {
        let rep = reproduce_d4(&q(1)).unwrap();
        assert!(rep.identities.iter().all(|i| i.holds), "{:?}", rep.identities);
        assert!(rep.lambda_is_generic);
        let dq = d4_quiver();
        let m1 = fingerprint(&prepro_core::module::d4::module_m(&dq, &q(1)).unwrap()).unwrap();
        let m2 = fingerprint(&prepro_core::module::d4::module_m(&dq, &q(2)).unwrap()).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(m1.words.len(), 60);
        format!("{} identities over {} words, M(1) and M(2) agree", rep.identities.len(), m1.words.len())
    });
}

#[test]
fn criterion_3_stratified_formula() {
    criterion(3, Some(Duration::from_secs(300)), || {
        let rep = reproduce_d4(&q(1)).unwrap();
        let v = &rep.verification;
        assert_eq!(v.tables.len(), 2);
        assert_eq!(v.tables[0].strata.iter().map(|s| s.anchor.as_str()).collect::<Vec<_>>(), ["M(1)", "M(0)", "M(-1)", "M(inf)"]);
        assert_eq!(v.tables[1].strata.iter().map(|s| s.anchor.as_str()).collect::<Vec<_>>(), ["R", "A", "B", "C"]);
        for t in &v.tables {
            assert_eq!(t.chi_values(), vec![-1, 1, 1, 1]);
            assert_eq!(t.chi_total(), 2);
        }
        assert_eq!(v.ledger.len(), 60);
        assert!(v.ledger.iter().all(|l| l.holds && l.lhs == l.rhs));
        assert!(v.passed);
        assert_eq!(rep.expansion_line, "δ_T·δ_S4 = δ_M(1) + δ_R + δ_F + δ_G + δ_H");
        assert!(rep.passed);
        rep.expansion_line.clone()
    });
}

#[test]
fn criterion_4_a2_simples() {
    criterion(4, Some(Duration::from_secs(1)), || {
        let dq = double(&Quiver::a_n(2));
        let s1 = NamedModule::new("S1", LambdaModule::simple(dq.clone(), Rationals, 0).unwrap());
        let s2 = NamedModule::new("S2", LambdaModule::simple(dq.clone(), Rationals, 1).unwrap());
        let mut d = prepro_core::hom_ext::Derivation::zero(&s1.module, &s2.module);
        d.maps[dq.arrow_index("a1").unwrap()] = Matrix::from_vec(1, 1, vec![q(1)]).unwrap();
        let mut g = prepro_core::hom_ext::Derivation::zero(&s2.module, &s1.module);
        g.maps[dq.arrow_index("a1*").unwrap()] = Matrix::from_vec(1, 1, vec![q(1)]).unwrap();
        let rep = verify_thm_1_2(&s1, &s2, &d, &g).unwrap();
        assert!(rep.passed);
        let l: Vec<_> = rep.ledger.iter().map(|l| l.lhs).collect();
        assert_eq!(l, vec![1, 1]);
        "(1,1) = (1,0) + (0,1)".to_string()
    });
}

#[test]
fn criterion_5_pairing_properties() {
    criterion(5, None, || {
        let f = Rationals;
        let mut rng = rng(5);
        let mut pairs = 0;
        let mut nontrivial = 0;
        for quiver in [Quiver::a_n(3), Quiver::kronecker()] {
            let dq = double(&quiver);
            for _ in 0..60 {
                let (x, y) = random_pair(&mut rng, &dq, 3, 2);
                let xy = ext_presentation(&x, &y).unwrap();
                let yx = ext_presentation(&y, &x).unwrap();
                assert_eq!(xy.ext1_dim, yx.ext1_dim);

                // vanishing on inner derivations, on both sides
                for phi in &hom_space(&y, &x).unwrap().basis {
                    let i = inner_derivation(&y, &x, phi).unwrap();
                    for _ in 0..2 {
                        let d = random_derivation(&mut rng, &x, &y, 3).unwrap();
                        assert!(cy_pairing(&x, &y, &d, &i).unwrap().is_zero());
                    }
                }
                for phi in &hom_space(&x, &y).unwrap().basis {
                    let i = inner_derivation(&x, &y, phi).unwrap();
                    let g = random_derivation(&mut rng, &y, &x, 3).unwrap();
                    assert!(cy_pairing(&x, &y, &i, &g).unwrap().is_zero());
                }

                let gram = pairing_gram(&x, &y, &xy, &yx).unwrap();
                assert_eq!(gram.rank(&f), xy.ext1_dim);
                if xy.ext1_dim > 0 {
                    nontrivial += 1;
                }

                // functoriality with x' = x ⊕ z, y' = y ⊕ w so the Hom spaces are nonzero
                let (sz, sw) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
                let z = random_module(&mut rng, &dq, sz, 2, 2).unwrap();
                let w = random_module(&mut rng, &dq, sw, 2, 2).unwrap();
                let x1 = x.direct_sum(&z).unwrap();
                let y1 = y.direct_sum(&w).unwrap();
                let rho = random_hom(&mut rng, &hom_space(&x1, &x).unwrap(), &zero_hom(&x1, &x), 3);
                let lambda = random_hom(&mut rng, &hom_space(&y, &y1).unwrap(), &zero_hom(&y, &y1), 3);
                let eta = random_derivation(&mut rng, &x, &y, 3).unwrap();
                let eps = random_derivation(&mut rng, &y1, &x1, 3).unwrap();
                let moved_eta = pushout(&x1, &y, &y1, &pullback(&x1, &x, &y, &eta, &rho).unwrap(), &lambda).unwrap();
                let moved_eps = pushout(&y, &x1, &x, &pullback(&y, &y1, &x1, &eps, &lambda).unwrap(), &rho).unwrap();
                assert_eq!(
                    cy_pairing(&x1, &y1, &moved_eta, &eps).unwrap(),
                    cy_pairing(&x, &y, &eta, &moved_eps).unwrap()
                );
                pairs += 1;
            }
        }
        assert!(pairs >= 100);
        format!("{pairs} pairs, {nontrivial} with Ext1 != 0")
    });
}

#[test]
fn criterion_6_dimension_formulas() {
    criterion(6, None, || {
        let mut rng = rng(6);
        let dq = double(&Quiver::kronecker());
        let mut pairs = 0;
        for _ in 0..60 {
            let (m, n) = random_pair(&mut rng, &dq, 4, 2);
            let rep = dimension_checks(&m, &n).unwrap();
            assert!(!rep.dynkin);
            assert_eq!(rep.euler_form, Some(true), "{rep:?}");
            assert!(rep.crawley_boevey, "{rep:?}");
            assert!(rep.passed());
            pairs += 1;
        }
        assert!(pairs >= 50);
        format!("{pairs} Kronecker pairs")
    });
}

fn check_splitting(x1: &RationalModule, x2: &RationalModule) -> usize {
    let split = x1.direct_sum(x2).unwrap();
    let fp: DeltaFingerprint = fingerprint(&split).unwrap();
    let mut cache1 = std::collections::HashMap::new();
    let mut cache2 = std::collections::HashMap::new();
    let chi = |m: &RationalModule, cache: &mut std::collections::HashMap<_, i64>, w: prepro_core::Word| {
        *cache.entry(w.clone()).or_insert_with(|| euler_characteristic(m, &w).unwrap().euler)
    };
    for (w, &value) in fp.words.iter().zip(&fp.euler) {
        let mut sum = 0;
        for (c1, c2) in enumerate_splittings(w, x1.dim(), x2.dim()) {
            sum += chi(x1, &mut cache1, w.subword(&c1)) * chi(x2, &mut cache2, w.subword(&c2));
        }
        assert_eq!(value, sum, "word {w:?}");
    }

    // over F_p the fibres of (U ∩ x'', image in x') are affine spaces, so the
    // split count is Σ p^k over splitting pairs
    for p in [3u64, 5, 7] {
        let (Ok(r1), Ok(r2)) = (x1.reduce_mod_p(p), x2.reduce_mod_p(p)) else { continue };
        let rs = r1.direct_sum(&r2).unwrap();
        let raw = count_words_fp(&rs, &fp.words).unwrap();
        let mut raw1 = std::collections::HashMap::new();
        let mut raw2 = std::collections::HashMap::new();
        let raw_count = |m: &prepro_core::ModularModule, cache: &mut std::collections::HashMap<_, u64>, w: prepro_core::Word| {
            *cache.entry(w.clone()).or_insert_with(|| count_flags(m, &w).unwrap())
        };
        for (w, &total) in fp.words.iter().zip(&raw) {
            let mut sum = 0u64;
            for (c1, c2) in enumerate_splittings(w, x1.dim(), x2.dim()) {
                sum += raw_count(&r1, &mut raw1, w.subword(&c1)) * raw_count(&r2, &mut raw2, w.subword(&c2));
            }
            assert!(total >= sum, "word {w:?} at {p}");
            assert_eq!((total - sum) % (p - 1), 0, "word {w:?} at {p}");
        }
    }
    fp.words.len()
}

#[test]
fn criterion_7_splitting_identity() {
    criterion(7, None, || {
        let mut rng = rng(7);
        let mut pairs = 0;
        let mut words = 0;
        for quiver in [Quiver::a_n(3), Quiver::kronecker(), Quiver::d4()] {
            let dq = double(&quiver);
            for _ in 0..20 {
                // keep the split module at five composition factors or fewer
                let (m, n) = loop {
                    let (m, n) = random_pair(&mut rng, &dq, 3, 2);
                    if m.total_dim() + n.total_dim() <= 5 {
                        break (m, n);
                    }
                };
                words += check_splitting(&m, &n);
                pairs += 1;
            }
        }
        let dq = d4_quiver();
        words += check_splitting(&module_t(&dq), &module_s4(&dq));
        pairs += 1;
        assert!(pairs >= 50);
        format!("{pairs} pairs, {words} words")
    });
}

#[test]
fn criterion_8_interpolation_guard() {
    criterion(8, None, || {
        let rep = reproduce_d4(&q(1)).unwrap();
        let mut certified = 0;
        for t in &rep.verification.tables {
            let bound = t.ext_dim - 1;
            assert_eq!(t.primes.len(), bound + 1 + VALIDATION_PRIMES);
            for s in &t.strata {
                for &(p, size) in &s.sizes {
                    assert_eq!(s.polynomial.eval_int(p as i64), q(size as i64));
                }
                certified += 1;
            }
        }
        let dq = d4_quiver();
        let split = module_t(&dq).direct_sum(&module_s4(&dq)).unwrap();
        let fp = fingerprint(&split).unwrap();
        for p in &fp.profiles {
            assert_profile_certified(p);
            certified += 1;
        }
        let mut rng = rng(8);
        for quiver in [Quiver::a_n(3), Quiver::kronecker()] {
            let dq = double(&quiver);
            for _ in 0..10 {
                let (m, _) = random_pair(&mut rng, &dq, 4, 2);
                for w in enumerate_words(m.dim()) {
                    assert_profile_certified(&euler_characteristic(&m, &w).unwrap());
                    certified += 1;
                }
            }
        }

        // a corrupted count anywhere in the sample list must be caught
        let victim = fp.profiles.iter().max_by_key(|p| p.samples[0].1).unwrap();
        for k in 0..victim.samples.len() {
            let mut bad = victim.samples.clone();
            bad[k].1 += 1;
            match fit_profile(&victim.word, &bad, victim.degree_bound) {
                Err(Error::NonPolynomialCount { word, .. }) => assert_eq!(word, victim.word),
                other => panic!("corruption at sample {k} not detected: {other:?}"),
            }
        }
        let s = &rep.verification.tables[0].strata[0];
        let mut bad = s.sizes.clone();
        bad.last_mut().unwrap().1 += 1;
        assert!(matches!(fit_profile(&s.anchor, &bad, 1), Err(Error::NonPolynomialCount { .. })));
        format!("{certified} profiles certified, corruption detected")
    });
}
