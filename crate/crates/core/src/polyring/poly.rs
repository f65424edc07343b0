use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficient ring of a polynomial ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Integer,
    Mod2,
}

impl Coefficients {
    fn normalize(self, c: BigInt) -> BigInt {
        match self {
            Coefficients::Integer => c,
            Coefficients::Mod2 => c.mod_floor(&BigInt::from(2)),
        }
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integer => write!(f, "Z"),
            Coefficients::Mod2 => write!(f, "F2"),
        }
    }
}

/// A named variable together with its cohomological degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarSpec {
    name: String,
    degree: u32,
}

impl VarSpec {
    pub fn new(name: impl Into<String>, degree: u32) -> Result<Self> {
        let name = name.into();
        if degree == 0 {
            return Err(Error::Range(format!("variable `{name}` must have positive degree")));
        }
        Ok(VarSpec { name, degree })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }
}

/// A polynomial ring: coefficient ring plus an ordered list of graded
/// variables. Cheap to clone.
#[derive(Clone, Debug)]
pub struct PolyRing {
    coeffs: Coefficients,
    vars: Arc<[VarSpec]>,
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && (Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars)
    }
}

impl Eq for PolyRing {}

impl PolyRing {
    pub fn new(coeffs: Coefficients, vars: Vec<VarSpec>) -> Result<Self> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(Error::Context(format!("duplicate variable name `{}`", v.name)));
            }
        }
        Ok(PolyRing { coeffs, vars: vars.into() })
    }

    /// `Z[prefix1, ..., prefixN]` or `F2[...]` with all variables of degree 1.
    pub fn with_linear_vars(coeffs: Coefficients, prefix: &str, count: usize) -> Self {
        let vars = (1..=count).map(|i| VarSpec { name: format!("{prefix}{i}"), degree: 1 }).collect::<Vec<_>>();
        PolyRing { coeffs, vars: vars.into() }
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coeffs
    }

    pub fn vars(&self) -> &[VarSpec] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial { ring: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> Polynomial {
        self.constant(1)
    }

    pub fn constant(&self, c: impl Into<BigInt>) -> Polynomial {
        self.monomial_term(Monomial::one(), c)
    }

    pub fn var(&self, index: usize) -> Result<Polynomial> {
        if index >= self.vars.len() {
            return Err(Error::Range(format!("variable index {index} in a ring with {} variables", self.vars.len())));
        }
        Ok(self.monomial_term(Monomial::var(index), 1))
    }

    pub fn var_named(&self, name: &str) -> Result<Polynomial> {
        let i = self.var_index(name).ok_or_else(|| Error::Generator(name.to_string()))?;
        self.var(i)
    }

    /// All variables as polynomials, in order.
    pub fn gens(&self) -> Vec<Polynomial> {
        (0..self.vars.len()).map(|i| self.monomial_term(Monomial::var(i), 1)).collect()
    }

    pub fn monomial_term(&self, m: Monomial, c: impl Into<BigInt>) -> Polynomial {
        Polynomial::from_terms(self, std::iter::once((m, c.into())))
    }

    /// Weighted degree of a monomial in this ring.
    pub fn degree_of(&self, m: &Monomial) -> u32 {
        m.iter().map(|(v, e)| self.vars[v].degree * e).sum()
    }

    /// `e_k(args)`, the k-th elementary symmetric polynomial evaluated at
    /// the given elements of this ring.
    pub fn elementary_symmetric(&self, k: usize, args: &[Polynomial]) -> Result<Polynomial> {
        if k > args.len() {
            return Err(Error::Range(format!("e_{k} of {} arguments", args.len())));
        }
        let all = self.elementary_symmetric_all(args)?;
        Ok(all.into_iter().nth(k).unwrap())
    }

    /// `[e_0, e_1, ..., e_len]` of the arguments.
    pub fn elementary_symmetric_all(&self, args: &[Polynomial]) -> Result<Vec<Polynomial>> {
        let mut e = vec![self.one()];
        for x in args {
            self.check(x)?;
            e.push(self.zero());
            for j in (1..e.len()).rev() {
                let t = &e[j - 1] * x;
                e[j] = &e[j] + &t;
            }
        }
        Ok(e)
    }

    /// All monomials of weighted degree exactly `d`.
    pub fn monomials_of_degree(&self, d: u32) -> Vec<Monomial> {
        let degrees = self.vars.iter().map(|v| v.degree).collect::<Vec<_>>();
        monomials_of_weighted_degree(&degrees, d)
    }

    fn check(&self, p: &Polynomial) -> Result<()> {
        if p.ring != *self {
            return Err(Error::Context(format!("polynomial over {} used in {}", p.ring, self)));
        }
        Ok(())
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.coeffs)?;
        for (i, v) in self.vars.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v.name)?;
        }
        write!(f, "]")
    }
}

/// Enumerate exponent vectors (as monomials) of weighted degree `d` for the
/// given variable degrees.
pub fn monomials_of_weighted_degree(degrees: &[u32], d: u32) -> Vec<Monomial> {
    fn rec(degrees: &[u32], idx: usize, left: u32, cur: &mut Vec<(u32, u32)>, out: &mut Vec<Monomial>) {
        if idx == degrees.len() {
            if left == 0 {
                out.push(Monomial { exps: cur.clone() });
            }
            return;
        }
        let w = degrees[idx];
        for e in 0..=left / w {
            if e > 0 {
                cur.push((idx as u32, e));
            }
            rec(degrees, idx + 1, left - e * w, cur, out);
            if e > 0 {
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(degrees, 0, d, &mut Vec::new(), &mut out);
    out
}

/// A monomial: sparse exponent map from variable index to positive exponent,
/// sorted by variable index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<(u32, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(index: usize) -> Self {
        Monomial { exps: vec![(index as u32, 1)] }
    }

    /// From a dense exponent vector.
    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial { exps: exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i as u32, e)).collect() }
    }

    /// From `(variable, exponent)` pairs in any order; repeated variables add.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v as u32).or_insert(0) += e;
        }
        Monomial { exps: map.into_iter().filter(|&(_, e)| e > 0).collect() }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.exps.binary_search_by_key(&(var as u32), |&(v, _)| v).map(|i| self.exps[i].1).unwrap_or(0)
    }

    /// `(variable, exponent)` pairs with positive exponent.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.exps.iter().map(|&(v, e)| (v as usize, e))
    }

    pub fn to_dense(&self, num_vars: usize) -> Vec<u32> {
        let mut out = vec![0; num_vars];
        for (v, e) in self.iter() {
            out[v] = e;
        }
        out
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.exps, &other.exps);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { exps: out }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.iter().all(|(v, e)| other.exponent(v) >= e)
    }

    /// `other / self` if `self` divides `other`.
    pub fn divide_into(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let exps = other.iter().map(|(v, e)| (v as u32, e - self.exponent(v))).filter(|&(_, e)| e > 0).collect();
        Some(Monomial { exps })
    }

    /// Remove the variable `var` entirely.
    pub fn without(&self, var: usize) -> Monomial {
        Monomial { exps: self.exps.iter().copied().filter(|&(v, _)| v as usize != var).collect() }
    }

    /// Re-index variables; `map[v]` is the new index of `v`.
    pub fn reindex(&self, map: &[usize]) -> Monomial {
        Monomial::from_pairs(self.iter().map(|(v, e)| (map[v], e)))
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, vars: &[VarSpec], order: &[usize]) -> fmt::Result {
        let mut first = true;
        for &v in order {
            let e = self.exponent(v);
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", vars[v].name)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial with exact coefficients. Zero coefficients are never
/// stored; over `F2` every stored coefficient is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    ring: PolyRing,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn from_terms(ring: &PolyRing, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut map: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            *map.entry(m).or_insert_with(BigInt::zero) += c;
        }
        let coeffs = ring.coeffs;
        let terms = map.into_iter().map(|(m, c)| (m, coeffs.normalize(c))).filter(|(_, c)| !c.is_zero()).collect();
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Largest weighted degree of a term; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.ring.degree_of(m)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| self.ring.degree_of(m));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ring.check(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(a) => {
                    *a = self.ring.coeffs.normalize(&*a + c);
                    if a.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ring.check(other)?;
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        Ok(Polynomial::from_terms(&self.ring, acc))
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        Polynomial::from_terms(&self.ring, self.terms.iter().map(|(m, a)| (m.clone(), a * c)))
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Sum of the terms of weighted degree exactly `d`.
    pub fn graded_component(&self, d: u32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| self.ring.degree_of(m) == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// Apply a ring homomorphism given by images of the variables.
    pub fn substitute(&self, map: &Substitution) -> Result<Polynomial> {
        map.apply(self)
    }

    /// Same terms with coefficients reduced into another coefficient ring over
    /// the same variables (`Z -> F2` only).
    pub fn reduce_mod2(&self) -> Polynomial {
        let ring = PolyRing { coeffs: Coefficients::Mod2, vars: self.ring.vars.clone() };
        Polynomial::from_terms(&ring, self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    /// Keep only the terms whose monomial satisfies `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial, &BigInt) -> bool) -> Polynomial {
        let terms = self.terms.iter().filter(|(m, c)| keep(m, c)).map(|(m, c)| (m.clone(), c.clone())).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// Move to another ring with the same coefficients, re-indexing variables
    /// by `map`.
    pub fn reindex(&self, target: &PolyRing, map: &[usize]) -> Polynomial {
        Polynomial::from_terms(target, self.terms.iter().map(|(m, c)| (m.reindex(map), c.clone())))
    }

    /// Render with the variables ranked by `order` (first = most significant,
    /// printed first). Terms are listed by descending degree, then
    /// lexicographically in that ranking.
    pub fn display_with<'a>(&'a self, order: &'a [usize]) -> impl fmt::Display + 'a {
        OrderedDisplay { poly: self, order }
    }

    fn sorted_terms(&self, order: &[usize]) -> Vec<(&Monomial, &BigInt)> {
        let mut terms = self.terms.iter().collect::<Vec<_>>();
        terms.sort_by(|(a, _), (b, _)| {
            let da = self.ring.degree_of(a);
            let db = self.ring.degree_of(b);
            db.cmp(&da).then_with(|| {
                for &v in order {
                    match b.exponent(v).cmp(&a.exponent(v)) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            })
        });
        terms
    }

    fn write_ordered(&self, f: &mut fmt::Formatter<'_>, order: &[usize]) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.sorted_terms(order).into_iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                m.write(f, &self.ring.vars, order)?;
            }
        }
        Ok(())
    }
}

struct OrderedDisplay<'a> {
    poly: &'a Polynomial,
    order: &'a [usize],
}

impl fmt::Display for OrderedDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.write_ordered(f, self.order)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order = (0..self.ring.num_vars()).collect::<Vec<_>>();
        self.write_ordered(f, &order)
    }
}

// Operator forms panic on a context mismatch; use the `try_*` methods where
// operands may come from different rings.

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial addition across rings")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial subtraction across rings")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial multiplication across rings")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::from_terms(&self.ring, self.terms.iter().map(|(m, c)| (m.clone(), -c)))
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// A ring homomorphism out of a polynomial ring, given by the images of the
/// variables in a common target ring.
#[derive(Clone, Debug)]
pub struct Substitution {
    target: PolyRing,
    images: BTreeMap<usize, Polynomial>,
}

impl Substitution {
    pub fn new(target: &PolyRing) -> Self {
        Substitution { target: target.clone(), images: BTreeMap::new() }
    }

    pub fn target(&self) -> &PolyRing {
        &self.target
    }

    pub fn set(&mut self, var: usize, image: Polynomial) -> Result<&mut Self> {
        self.target.check(&image)?;
        self.images.insert(var, image);
        Ok(self)
    }

    pub fn with(mut self, var: usize, image: Polynomial) -> Result<Self> {
        self.set(var, image)?;
        Ok(self)
    }

    pub fn image(&self, var: usize) -> Option<&Polynomial> {
        self.images.get(&var)
    }

    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        if p.ring.coeffs == Coefficients::Mod2 && self.target.coeffs == Coefficients::Integer {
            return Err(Error::Context("cannot map an F2 polynomial into a Z polynomial ring".into()));
        }
        let mut powers: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut acc = self.target.zero();
        for (m, c) in &p.terms {
            let mut term = self.target.constant(c.clone());
            for (v, e) in m.iter() {
                let image = self.images.get(&v).ok_or_else(|| Error::IncompleteMap(p.ring.vars[v].name.clone()))?;
                let power = powers.entry((v, e)).or_insert_with(|| image.pow(e));
                term = &term * power;
                if term.is_zero() {
                    break;
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }
}
