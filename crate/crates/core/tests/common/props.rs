//! Property checks shared by the `properties` suite and the acceptance run.
//! Each takes a case count and reports the first minimal failure.

use std::sync::Arc;

use chowring::cli::parse_expression;
use chowring::polyring::{smith_normal_form, IntMatrix, Polynomial, Substitution};
use chowring::presentations::{normal_form, Presentation};
use chowring::restrictions::{split_isotropic_chern, MuTarget, SplitBundle, TorusTarget};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use super::*;

pub type Property = fn(u32) -> Result<(), String>;

pub const ALL: &[(&str, Property)] = &[
    ("ring axioms over Z and F2", ring_axioms),
    ("substitution is a ring homomorphism", substitution_homomorphism),
    ("product of (1 + a_i) is the sum of e_k", elementary_generating_function),
    ("(1 + a)(1 - a) products equal products of 1 - a^2", isotropic_product),
    ("Smith form divisibility and determinant", smith_divisibility),
    ("Smith form agrees with gcds of minors", smith_minors),
    ("graded components partition a polynomial", graded_components),
    ("normal form is idempotent and a congruence", normal_form_congruence),
    ("normal form preserves degree", normal_form_grading),
    ("torus and mu restrictions are homomorphisms", restriction_homomorphisms),
    ("restrictions preserve degree", restriction_grading),
    ("torsion monomials are exactly the torus kernel", torsion_is_torus_kernel),
    ("half of the split bundles are admissible", split_admissibility),
    ("torus(y)^2 matches torus(c_2m)", y_square_on_torus),
    ("printed normal forms parse back", print_parse_round_trip),
];

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn err(e: chowring::Error) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

pub fn ring_axioms(cases: u32) -> Result<(), String> {
    let rings = prop_oneof![Just(zring(3)), Just(f2ring(3))];
    let triple = rings.prop_flat_map(|r| (poly_in(r.clone(), 4, 3), poly_in(r.clone(), 4, 3), poly_in(r, 4, 3)));
    run(cases, triple, |(a, b, c)| {
        let zero = a.ring().zero();
        let one = a.ring().one();
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &zero, a.clone());
        prop_assert_eq!(&a * &one, a.clone());
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a - &b, &a + &(-&b));
        prop_assert_eq!(a.pow(3), &(&a * &a) * &a);
        Ok(())
    })
}

pub fn substitution_homomorphism(cases: u32) -> Result<(), String> {
    let source = zring(3);
    let target = zring(2);
    let s = (
        poly_in(source.clone(), 4, 3),
        poly_in(source.clone(), 4, 3),
        prop::collection::vec(poly_in(target.clone(), 3, 2), 3),
    );
    run(cases, s, |(a, b, images)| {
        let mut map = Substitution::new(&target);
        for (i, p) in images.into_iter().enumerate() {
            map.set(i, p).map_err(err)?;
        }
        let f = |p: &Polynomial| map.apply(p).map_err(err);
        prop_assert_eq!(f(&(&a + &b))?, &f(&a)? + &f(&b)?);
        prop_assert_eq!(f(&(&a * &b))?, &f(&a)? * &f(&b)?);
        prop_assert_eq!(f(&source.one())?, target.one());
        Ok(())
    })
}

pub fn elementary_generating_function(cases: u32) -> Result<(), String> {
    let s = (prop_oneof![Just(zring(2)), Just(f2ring(2))], 1usize..=6)
        .prop_flat_map(|(r, k)| prop::collection::vec(poly_in(r, 2, 2), k));
    run(cases, s, |args| {
        let ring = args[0].ring().clone();
        let lhs = args.iter().fold(ring.one(), |acc, a| &acc * &(&ring.one() + a));
        let es = ring.elementary_symmetric_all(&args).map_err(err)?;
        prop_assert_eq!(es.len(), args.len() + 1);
        let rhs = es.iter().fold(ring.zero(), |acc, e| &acc + e);
        prop_assert_eq!(lhs, rhs);
        prop_assert!(ring.elementary_symmetric(args.len() + 1, &args).is_err());
        Ok(())
    })
}

pub fn isotropic_product(cases: u32) -> Result<(), String> {
    let s = (1usize..=6).prop_flat_map(|m| prop::collection::vec(poly_in(zring(2), 2, 2), m));
    run(cases, s, |xi| {
        let ring = xi[0].ring().clone();
        let one = ring.one();
        let lhs = xi.iter().fold(one.clone(), |acc, a| &(&acc * &(&one + a)) * &(&one - a));
        let rhs = xi.iter().fold(one.clone(), |acc, a| &acc * &(&one - &a.pow(2)));
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
}

fn small_matrix(max: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| prop::collection::vec(prop::collection::vec(-bound..=bound, c), r))
}

pub fn smith_divisibility(cases: u32) -> Result<(), String> {
    run(cases, small_matrix(4, 9), |rows| {
        let snf = smith_normal_form(&IntMatrix::from_rows(&rows));
        let d = &snf.invariant_factors;
        prop_assert_eq!(d.len(), snf.rank);
        prop_assert!(d.iter().all(|v| *v > BigInt::zero()));
        prop_assert!(d.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        if rows.len() == rows[0].len() {
            let det = determinant(&rows);
            let product = d.iter().fold(BigInt::one(), |acc, v| acc * v);
            if snf.rank == rows.len() {
                prop_assert_eq!(product, det);
            } else {
                prop_assert!(det.is_zero());
            }
        }
        Ok(())
    })
}

pub fn smith_minors(cases: u32) -> Result<(), String> {
    let s = prop::collection::vec(prop::collection::vec(-5i64..=5, 3), 3);
    run(cases, s, |rows| {
        let snf = smith_normal_form(&IntMatrix::from_rows(&rows));
        prop_assert_eq!(snf.invariant_factors, invariant_factors_by_minors(&rows));
        Ok(())
    })
}

pub fn graded_components(cases: u32) -> Result<(), String> {
    run(cases, formal_element(6), |(_, p)| {
        let top = p.terms().map(|(m, _)| p.ring().degree_of(m)).max().unwrap_or(0);
        let mut sum = p.ring().zero();
        for d in 0..=top + 1 {
            let c = p.graded_component(d);
            prop_assert_eq!(c.graded_component(d), c.clone());
            prop_assert!(c.is_zero() || c.degree() == Some(d));
            prop_assert!(c.is_homogeneous());
            sum = &sum + &c;
        }
        prop_assert_eq!(sum, p);
        Ok(())
    })
}

fn nf(p: &Polynomial, pres: &Arc<Presentation>) -> Result<Polynomial, TestCaseError> {
    Ok(normal_form(p, pres).map_err(err)?.as_polynomial().clone())
}

pub fn normal_form_congruence(cases: u32) -> Result<(), String> {
    run(cases, formal_pair(6, 3), |(pres, a, b)| {
        let (na, nb) = (nf(&a, &pres)?, nf(&b, &pres)?);
        prop_assert_eq!(nf(&na, &pres)?, na.clone());
        prop_assert_eq!(nf(&(&a + &b), &pres)?, nf(&(&na + &nb), &pres)?);
        prop_assert_eq!(nf(&(&a * &b), &pres)?, nf(&(&na * &nb), &pres)?);
        // every relation is zero in the quotient, and so is any multiple
        for r in pres.relations() {
            prop_assert!(nf(&(r * &a), &pres)?.is_zero());
        }
        Ok(())
    })
}

pub fn normal_form_grading(cases: u32) -> Result<(), String> {
    run(cases, homogeneous_element(6), |(pres, d, p)| {
        let n = nf(&p, &pres)?;
        prop_assert!(n.is_zero() || (n.is_homogeneous() && n.degree() == Some(d)));
        Ok(())
    })
}

fn without_y(pres: &Presentation, p: &Polynomial) -> Polynomial {
    match pres.formal_ring().var_index("y") {
        Some(y) => p.filter_terms(|m, _| m.exponent(y) == 0),
        None => p.clone(),
    }
}

pub fn restriction_homomorphisms(cases: u32) -> Result<(), String> {
    run(cases, formal_pair(4, 2), |(pres, a, b)| {
        let t = TorusTarget::new(&pres).map_err(err)?;
        let f = |p: &Polynomial| t.image(p).map_err(err);
        prop_assert_eq!(f(&(&a * &b))?, &f(&a)? * &f(&b)?);
        prop_assert_eq!(f(&(&a + &b))?, &f(&a)? + &f(&b)?);
        prop_assert_eq!(f(&nf(&a, &pres)?)?, f(&a)?);
        if let Ok(mu) = MuTarget::new(&pres) {
            let (a, b) = (without_y(&pres, &a), without_y(&pres, &b));
            let g = |p: &Polynomial| mu.image(p).map_err(err);
            prop_assert_eq!(g(&(&a * &b))?, &g(&a)? * &g(&b)?);
            prop_assert_eq!(g(&(&a + &b))?, &g(&a)? + &g(&b)?);
            prop_assert_eq!(g(&nf(&a, &pres)?)?, g(&a)?);
        }
        Ok(())
    })
}

pub fn restriction_grading(cases: u32) -> Result<(), String> {
    run(cases, homogeneous_element(6), |(pres, d, p)| {
        let t = TorusTarget::new(&pres).map_err(err)?.image(&p).map_err(err)?;
        prop_assert!(t.is_zero() || (t.is_homogeneous() && t.degree() == Some(d)));
        if let Ok(mu) = MuTarget::new(&pres) {
            let m = mu.image(&without_y(&pres, &p)).map_err(err)?;
            prop_assert!(m.is_zero() || (m.is_homogeneous() && m.degree() == Some(d)));
        }
        Ok(())
    })
}

pub fn torsion_is_torus_kernel(cases: u32) -> Result<(), String> {
    run(cases, (any_family(5), 0u32..=6), |(f, d)| {
        let pres = build_presentation(f);
        let t = TorusTarget::new(&pres).map_err(err)?;
        for m in pres.reduced_monomials(d) {
            let image = t.image(&pres.formal_ring().monomial_term(m.clone(), 1)).map_err(err)?;
            prop_assert_eq!(pres.torsion_order(&m).is_some(), image.is_zero(), "{:?} in {}", m, pres);
        }
        Ok(())
    })
}

pub fn split_admissibility(cases: u32) -> Result<(), String> {
    run(cases, 1usize..=6, |m| {
        let all = SplitBundle::all(m);
        prop_assert_eq!(all.len(), 1 << m);
        let admissible =
            all.iter().map(split_isotropic_chern).filter(|(ok, _)| *ok).map(|(_, c)| c).collect::<Vec<_>>();
        prop_assert_eq!(admissible.len(), 1 << (m - 1));
        prop_assert!(admissible.windows(2).all(|w| w[0] == w[1]));
        for b in &all {
            let (ok, top) = split_isotropic_chern(b);
            prop_assert_eq!(ok, b.signs().iter().filter(|&&s| s < 0).count() % 2 == 0);
            prop_assert!(ok || top == -&admissible[0]);
        }
        Ok(())
    })
}

pub fn y_square_on_torus(cases: u32) -> Result<(), String> {
    run(cases, 1u32..=3, |m| {
        let pres = super::pres(FamilyTag::SO, 2 * m);
        let t = TorusTarget::new(&pres).map_err(err)?;
        let y = t.image(&pres.generator("y").map_err(err)?).map_err(err)?;
        let top = t.image(&pres.generator(&format!("c{}", 2 * m)).map_err(err)?).map_err(err)?;
        let sign = if m % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let scale = sign * (BigInt::one() << (2 * m - 2));
        prop_assert_eq!(y.pow(2), top.scale(&scale));
        Ok(())
    })
}

pub fn print_parse_round_trip(cases: u32) -> Result<(), String> {
    run(cases, formal_element(5), |(pres, p)| {
        let n = nf(&p, &pres)?;
        let shown = pres.show(&n);
        let parsed = parse_expression(&shown, &pres).map_err(err)?.to_polynomial(&pres);
        prop_assert_eq!(&parsed, &n, "{}", shown);
        prop_assert_eq!(nf(&parsed, &pres)?, n);
        Ok(())
    })
}
