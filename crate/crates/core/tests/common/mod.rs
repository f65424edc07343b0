#![allow(dead_code)]

use std::sync::Arc;

use chowring::polyring::{smith_normal_form, Coefficients, IntMatrix, Monomial, PolyRing, Polynomial};
use chowring::presentations::{build_presentation, normal_form, Family, FamilyTag, Presentation};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

pub mod props;

pub const TAGS: [FamilyTag; 5] = [FamilyTag::GL, FamilyTag::SL, FamilyTag::Sp, FamilyTag::O, FamilyTag::SO];

pub fn family(tag: FamilyTag, n: u32) -> Family {
    Family::new(tag, n).unwrap()
}

pub fn pres(tag: FamilyTag, n: u32) -> Arc<Presentation> {
    Arc::new(build_presentation(family(tag, n)))
}

/// Random polynomial with up to `max_terms` terms, exponents below
/// `max_exp` in each of the ring's variables.
pub fn poly_in(ring: PolyRing, max_terms: usize, max_exp: u32) -> impl Strategy<Value = Polynomial> {
    let nv = ring.num_vars();
    prop::collection::vec((prop::collection::vec(0..max_exp, nv), -6i64..=6), 0..=max_terms).prop_map(move |terms| {
        Polynomial::from_terms(&ring, terms.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), BigInt::from(c))))
    })
}

pub fn zring(n: usize) -> PolyRing {
    PolyRing::with_linear_vars(Coefficients::Integer, "x", n)
}

pub fn f2ring(n: usize) -> PolyRing {
    PolyRing::with_linear_vars(Coefficients::Mod2, "y", n)
}

/// A built-in family with `n <= max_n`.
pub fn any_family(max_n: u32) -> impl Strategy<Value = Family> {
    (0..TAGS.len(), 1..=max_n).prop_map(|(t, n)| family(TAGS[t], n))
}

/// A family together with a random formal polynomial in its generators.
pub fn formal_element(max_n: u32) -> impl Strategy<Value = (Arc<Presentation>, Polynomial)> {
    any_family(max_n).prop_flat_map(|f| {
        let p = Arc::new(build_presentation(f));
        let ring = p.formal_ring().clone();
        (Just(p), poly_in(ring, 4, 3))
    })
}

/// Two random formal polynomials in the generators of one family.
/// Exponents stay below `max_exp`, which keeps torus images of products
/// small enough to expand.
pub fn formal_pair(max_n: u32, max_exp: u32) -> impl Strategy<Value = (Arc<Presentation>, Polynomial, Polynomial)> {
    any_family(max_n).prop_flat_map(move |f| {
        let p = Arc::new(build_presentation(f));
        let ring = p.formal_ring().clone();
        (Just(p), poly_in(ring.clone(), 4, max_exp), poly_in(ring, 4, max_exp))
    })
}

/// A family and a random homogeneous formal polynomial of degree `1..=6`.
pub fn homogeneous_element(max_n: u32) -> impl Strategy<Value = (Arc<Presentation>, u32, Polynomial)> {
    (any_family(max_n), 1u32..=6).prop_flat_map(|(f, d)| {
        let p = Arc::new(build_presentation(f));
        let monos = p.formal_ring().monomials_of_degree(d);
        let k = monos.len();
        let ring = p.formal_ring().clone();
        let pick =
            if k == 0 { Just(Vec::new()).boxed() } else { prop::collection::vec((0..k, -6i64..=6), 0..=4).boxed() };
        (
            Just(p),
            Just(d),
            pick.prop_map(move |picks| {
                Polynomial::from_terms(&ring, picks.into_iter().map(|(i, c)| (monos[i].clone(), BigInt::from(c))))
            }),
        )
    })
}

/// Dense exponent vectors of weighted degree `d`, enumerated independently
/// of the library.
pub fn exponent_vectors(degrees: &[u32], d: u32) -> Vec<Vec<u32>> {
    if degrees.is_empty() {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let w = degrees[0];
    let mut out = Vec::new();
    for e in 0..=d / w {
        for mut rest in exponent_vectors(&degrees[1..], d - e * w) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// Additive structure of the degree `d` piece of `Z[gens]/(relations)`,
/// computed as the cokernel of the matrix whose columns are all products
/// `relation * monomial` landing in degree `d`.
///
/// Returns `(free rank, nontrivial invariant factors, basis, lattice)`.
pub struct DegreeSlice {
    pub basis: Vec<Vec<u32>>,
    pub lattice: Vec<Vec<BigInt>>,
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

pub fn brute_force_slice(pres: &Presentation, d: u32) -> DegreeSlice {
    let degrees = pres.generators().iter().map(|g| g.degree()).collect::<Vec<_>>();
    let nv = degrees.len();
    let basis = exponent_vectors(&degrees, d);
    let index = |e: &[u32]| basis.iter().position(|b| b == e).expect("monomial of degree d");
    let mut lattice = Vec::new();
    for r in pres.relations() {
        let terms = r.terms().map(|(m, c)| (m.to_dense(nv), c.clone())).collect::<Vec<_>>();
        let e: u32 = terms[0].0.iter().zip(&degrees).map(|(a, w)| a * w).sum();
        if e > d {
            continue;
        }
        for u in exponent_vectors(&degrees, d - e) {
            let mut col = vec![BigInt::zero(); basis.len()];
            for (m, c) in &terms {
                let prod = m.iter().zip(&u).map(|(a, b)| a + b).collect::<Vec<_>>();
                col[index(&prod)] += c;
            }
            lattice.push(col);
        }
    }
    let (free_rank, torsion) = cokernel(basis.len(), &lattice);
    DegreeSlice { basis, lattice, free_rank, torsion }
}

/// `Z^rows / span(columns)` as (free rank, nontrivial invariant factors).
pub fn cokernel(rows: usize, columns: &[Vec<BigInt>]) -> (usize, Vec<BigInt>) {
    if columns.is_empty() {
        return (rows, Vec::new());
    }
    let mut m = IntMatrix::zeros(rows, columns.len());
    for (j, col) in columns.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            m.set(i, j, v.clone());
        }
    }
    smith_normal_form(&m).cokernel(rows)
}

/// Whether `v` lies in the lattice spanned by `columns`: adjoining it must
/// not change the cokernel (finitely generated abelian groups are Hopfian).
pub fn in_lattice(rows: usize, columns: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    let mut extended = columns.to_vec();
    extended.push(v.to_vec());
    cokernel(rows, columns) == cokernel(rows, &extended)
}

/// Every monomial of degree `d` is congruent to its normal form modulo the
/// relation slice.
pub fn normal_forms_are_congruent(pres: &Arc<Presentation>, slice: &DegreeSlice) -> bool {
    let nv = pres.generators().len();
    let ring = pres.formal_ring();
    slice.basis.iter().all(|e| {
        let mono = ring.monomial_term(Monomial::from_exponents(e), 1);
        let nf = normal_form(&mono, pres).unwrap();
        let diff = &mono - nf.as_polynomial();
        let mut v = vec![BigInt::zero(); slice.basis.len()];
        for (m, c) in diff.terms() {
            let dense = m.to_dense(nv);
            let i = slice.basis.iter().position(|b| *b == dense).expect("homogeneous");
            v[i] = c.clone();
        }
        in_lattice(slice.basis.len(), &slice.lattice, &v)
    })
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        let minor = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| v.clone()).collect())
            .collect::<Vec<Vec<BigInt>>>();
        let term = &m[0][j] * det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from gcds of k x k minors: `d_k = D_k / D_(k-1)`.
pub fn invariant_factors_by_minors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| BigInt::from(m[i][j])).collect())
                    .collect::<Vec<Vec<BigInt>>>();
                g = g.gcd(&det(&sub));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    let big = m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect::<Vec<Vec<BigInt>>>();
    det(&big).abs()
}

/// Families and degree bound for the brute-force Hilbert comparison.
pub const CONFLUENCE_CASES: &[(FamilyTag, u32)] = &[
    (FamilyTag::O, 1),
    (FamilyTag::O, 2),
    (FamilyTag::O, 3),
    (FamilyTag::SO, 4),
    (FamilyTag::Sp, 1),
    (FamilyTag::Sp, 2),
];
pub const CONFLUENCE_MAX_DEGREE: u32 = 6;

/// Compare the rewriting-based graded data with the brute-force cokernel, and
/// check every monomial is congruent to its normal form.
pub fn check_confluence(tag: FamilyTag, n: u32, max_degree: u32) -> Result<(), String> {
    let p = pres(tag, n);
    for d in 0..=max_degree {
        let slice = brute_force_slice(&p, d);
        let h = chowring::presentations::hilbert_data(&p, d);
        let twos = slice.torsion.iter().filter(|k| **k == BigInt::from(2)).count();
        if slice.torsion.len() != twos || !h.other_torsion.is_empty() {
            return Err(format!("{tag}({n}) degree {d}: torsion other than Z/2: {:?}", slice.torsion));
        }
        if (h.free_rank, h.torsion2_count) != (slice.free_rank, twos) {
            return Err(format!(
                "{tag}({n}) degree {d}: rewriting gives ({}, {}), cokernel gives ({}, {twos})",
                h.free_rank, h.torsion2_count, slice.free_rank
            ));
        }
        if !normal_forms_are_congruent(&p, &slice) {
            return Err(format!("{tag}({n}) degree {d}: a normal form leaves the residue class"));
        }
    }
    Ok(())
}
