//! Presentations of the Chow rings `A*(BG)` by generators and relations, and
//! canonical normal forms in them.
//!
//! Every relation is oriented into a rewrite rule by its leading term (graded
//! lexicographic, with the non-Chern generators `y`, `xi` ranked above the
//! Chern classes):
//!
//! * leading coefficient `+-1`: the leading monomial is replaced by the rest
//!   of the relation (`y^2 -> (-1)^m 2^(n-2) c_n`, `y*c_odd -> 0`);
//! * leading coefficient `k > 1` and no other terms: any monomial divisible by
//!   the leading monomial is `k`-torsion and its coefficient is reduced into
//!   `[0, k)` (`2*c_odd`, `k*xi`).
//!
//! For the built-in families these rules are compatible with monomial
//! divisibility and the system is confluent.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyring::{Coefficients, Monomial, PolyRing, Polynomial, Substitution, VarSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FamilyTag {
    GL,
    SL,
    Sp,
    O,
    SO,
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "GL" => Ok(FamilyTag::GL),
            "SL" => Ok(FamilyTag::SL),
            "SP" => Ok(FamilyTag::Sp),
            "O" => Ok(FamilyTag::O),
            "SO" => Ok(FamilyTag::SO),
            _ => Err(Error::Family(format!("unknown family `{s}` (expected GL, SL, Sp, O or SO)"))),
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyTag::GL => "GL",
            FamilyTag::SL => "SL",
            FamilyTag::Sp => "Sp",
            FamilyTag::O => "O",
            FamilyTag::SO => "SO",
        };
        f.write_str(s)
    }
}

/// A classical group. For `Sp` the tautological representation has
/// dimension `2n`; for `O` and `SO`, `n` is the dimension of the quadratic
/// space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Family {
    tag: FamilyTag,
    n: u32,
}

impl Family {
    pub fn new(tag: FamilyTag, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Family(format!("{tag}(0): n must be at least 1")));
        }
        Ok(Family { tag, n })
    }

    pub fn tag(&self) -> FamilyTag {
        self.tag
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `floor(n/2)`, the rank of a maximal torus of `O_n` and `SO_n`.
    pub fn m(&self) -> u32 {
        self.n / 2
    }

    /// `SO_{2m}`, the only family with the extra class `y`.
    pub fn has_y(&self) -> bool {
        self.tag == FamilyTag::SO && self.n.is_multiple_of(2)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.tag, self.n)
    }
}

#[derive(Clone, Debug)]
struct Rewrite {
    pattern: Monomial,
    replacement: Polynomial,
}

#[derive(Clone, Debug)]
struct Torsion {
    pattern: Monomial,
    order: BigInt,
}

/// A graded ring `Z[g1,...,gk]/(r1,...,rj)`.
#[derive(Clone, Debug)]
pub struct Presentation {
    family: Option<Family>,
    ring: PolyRing,
    relations: Vec<Polynomial>,
    display_order: Vec<usize>,
    rewrites: Vec<Rewrite>,
    torsion: Vec<Torsion>,
}

/// Two presentations are equal when they have the same generators and the
/// same relation list; the family they were built from is not compared.
impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.relations == other.relations
    }
}

impl Eq for Presentation {}

fn is_chern_name(name: &str) -> bool {
    name.strip_prefix('c').is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
}

impl Presentation {
    /// The ring `Z`, with no generators.
    pub fn trivial() -> Self {
        Self::new(Vec::new(), Vec::new()).expect("trivial presentation")
    }

    /// Build from generators `(name, degree)` and relations written as
    /// polynomials over `Z[generators]` (see [`Presentation::formal_ring`]).
    pub fn new(generators: Vec<VarSpec>, relations: Vec<Polynomial>) -> Result<Self> {
        let ring = PolyRing::new(Coefficients::Integer, generators)?;
        Self::from_ring(None, ring, relations)
    }

    fn from_ring(family: Option<Family>, ring: PolyRing, relations: Vec<Polynomial>) -> Result<Self> {
        let display_order = {
            let vars = ring.vars();
            let mut order = (0..vars.len()).filter(|&i| !is_chern_name(vars[i].name())).collect::<Vec<_>>();
            order.extend((0..vars.len()).filter(|&i| is_chern_name(vars[i].name())));
            order
        };
        let mut pres = Presentation {
            family,
            ring,
            relations: Vec::new(),
            display_order,
            rewrites: Vec::new(),
            torsion: Vec::new(),
        };
        for r in relations {
            if r.ring() != &pres.ring {
                return Err(Error::Context(format!("relation over {} in {}", r.ring(), pres.ring)));
            }
            if r.is_zero() {
                continue;
            }
            let r = pres.orient(r)?;
            pres.relations.push(r);
        }
        Ok(pres)
    }

    /// Turn a relation into a rewrite rule or a torsion rule. Returns the
    /// relation with a positive leading coefficient.
    fn orient(&mut self, r: Polynomial) -> Result<Polynomial> {
        let (lead, coeff) = self.leading_term(&r);
        let r = if coeff.is_negative() { -&r } else { r };
        let coeff = coeff.abs();
        let lead_poly = self.ring.monomial_term(lead.clone(), coeff.clone());
        let rest = &r - &lead_poly;
        if coeff.is_one() {
            self.rewrites.push(Rewrite { pattern: lead, replacement: -&rest });
        } else if rest.is_zero() {
            self.torsion.push(Torsion { pattern: lead, order: coeff });
        } else {
            return Err(Error::UnsupportedRelation(r.display_with(&self.display_order).to_string()));
        }
        Ok(r)
    }

    fn leading_term(&self, r: &Polynomial) -> (Monomial, BigInt) {
        let key = |m: &Monomial| {
            let d = self.ring.degree_of(m);
            let exps = self.display_order.iter().map(|&v| m.exponent(v)).collect::<Vec<_>>();
            (d, exps)
        };
        let (m, c) = r.terms().max_by(|a, b| key(a.0).cmp(&key(b.0))).expect("nonzero relation");
        (m.clone(), c.clone())
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    /// `Z[generators]`, the ring formal polynomials and relations live in.
    pub fn formal_ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn generators(&self) -> &[VarSpec] {
        self.ring.vars()
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    /// Variable ranking used for printing and for choosing leading terms.
    pub fn display_order(&self) -> &[usize] {
        &self.display_order
    }

    pub fn generator(&self, name: &str) -> Result<Polynomial> {
        self.ring.var_named(name)
    }

    /// Printable form of a polynomial over [`Presentation::formal_ring`].
    pub fn show(&self, p: &Polynomial) -> String {
        p.display_with(&self.display_order).to_string()
    }

    /// The order of the cyclic group a reduced monomial spans, or `None` when
    /// it spans a free summand. `Some(1)` means the monomial is zero.
    pub fn torsion_order(&self, m: &Monomial) -> Option<BigInt> {
        self.torsion.iter().filter(|t| t.pattern.divides(m)).map(|t| t.order.clone()).reduce(|a, b| a.gcd(&b))
    }

    fn is_reducible(&self, m: &Monomial) -> bool {
        self.rewrites.iter().any(|r| r.pattern.divides(m))
    }

    /// Monomials of degree `d` that are in normal form and nonzero.
    pub fn reduced_monomials(&self, d: u32) -> Vec<Monomial> {
        self.ring
            .monomials_of_degree(d)
            .into_iter()
            .filter(|m| !self.is_reducible(m))
            .filter(|m| self.torsion_order(m).is_none_or(|k| !k.is_one()))
            .collect()
    }

    fn reduce(&self, p: &Polynomial) -> Polynomial {
        let mut out: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        let mut work: Vec<(Monomial, BigInt)> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        while let Some((m, c)) = work.pop() {
            match self.rewrites.iter().find(|r| r.pattern.divides(&m)) {
                Some(rule) => {
                    let q = rule.pattern.divide_into(&m).unwrap();
                    for (rm, rc) in rule.replacement.terms() {
                        work.push((q.mul(rm), &c * rc));
                    }
                }
                None => *out.entry(m).or_insert_with(BigInt::zero) += c,
            }
        }
        let terms = out.into_iter().map(|(m, c)| {
            let c = match self.torsion_order(&m) {
                Some(k) => c.mod_floor(&k),
                None => c,
            };
            (m, c)
        });
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Move a polynomial whose variables are named like generators of this
    /// presentation into [`Presentation::formal_ring`].
    fn import(&self, p: &Polynomial) -> Result<Polynomial> {
        if p.ring() == &self.ring {
            return Ok(p.clone());
        }
        if p.ring().coefficients() != Coefficients::Integer {
            return Err(Error::Context("formal polynomials must have integer coefficients".into()));
        }
        let mut map = Substitution::new(&self.ring);
        let mut used = vec![false; p.ring().num_vars()];
        for (m, _) in p.terms() {
            for (v, _) in m.iter() {
                used[v] = true;
            }
        }
        for (v, spec) in p.ring().vars().iter().enumerate() {
            match self.ring.var_index(spec.name()) {
                Some(i) if self.ring.vars()[i].degree() == spec.degree() => {
                    map.set(v, self.ring.var(i)?)?;
                }
                _ if used[v] => return Err(Error::Generator(spec.name().to_string())),
                _ => {}
            }
        }
        map.apply(p)
    }

    /// Same generators and family with a replaced relation list.
    pub fn with_relations(&self, relations: Vec<Polynomial>) -> Result<Presentation> {
        Self::from_ring(self.family, self.ring.clone(), relations)
    }

    /// Presentation of `A / (g)`: drop the generator and set it to zero in
    /// every relation.
    pub fn quotient_by_element(&self, name: &str) -> Result<Presentation> {
        let g = self.ring.var_index(name).ok_or_else(|| Error::Generator(name.to_string()))?;
        let vars = self.ring.vars().iter().enumerate().filter(|&(i, _)| i != g).map(|(_, v)| v.clone()).collect();
        let ring = PolyRing::new(Coefficients::Integer, vars)?;
        let mut map = Substitution::new(&ring);
        for i in 0..self.ring.num_vars() {
            let image = match i.cmp(&g) {
                std::cmp::Ordering::Less => ring.var(i)?,
                std::cmp::Ordering::Equal => ring.zero(),
                std::cmp::Ordering::Greater => ring.var(i - 1)?,
            };
            map.set(i, image)?;
        }
        let relations = self.relations.iter().map(|r| map.apply(r)).collect::<Result<Vec<_>>>()?;
        Self::from_ring(None, ring, relations)
    }

    /// Presentation of `A[xi]/(k*xi)`, the Chow ring of `G x mu_k` when this
    /// is the Chow ring of `G`.
    pub fn adjoin_cyclic(&self, k: u32) -> Result<Presentation> {
        if k == 0 {
            return Err(Error::Range("adjoin_cyclic needs k >= 1".into()));
        }
        let name = std::iter::once("xi".to_string())
            .chain((2..).map(|i| format!("xi{i}")))
            .find(|s| self.ring.var_index(s).is_none())
            .unwrap();
        let mut vars = self.ring.vars().to_vec();
        vars.push(VarSpec::new(name, 1)?);
        let ring = PolyRing::new(Coefficients::Integer, vars)?;
        let lift = (0..self.ring.num_vars()).map(|i| ring.var(i)).collect::<Result<Vec<_>>>()?;
        let mut map = Substitution::new(&ring);
        for (i, g) in lift.into_iter().enumerate() {
            map.set(i, g)?;
        }
        let mut relations = self.relations.iter().map(|r| map.apply(r)).collect::<Result<Vec<_>>>()?;
        let xi = ring.var(ring.num_vars() - 1)?;
        relations.push(xi.scale(&BigInt::from(k)));
        Self::from_ring(None, ring, relations)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z")?;
        if self.ring.num_vars() > 0 {
            let names = self.ring.vars().iter().map(VarSpec::name).collect::<Vec<_>>();
            write!(f, "[{}]", names.join(","))?;
        }
        if !self.relations.is_empty() {
            let rels = self.relations.iter().map(|r| self.show(r)).collect::<Vec<_>>();
            write!(f, "/({})", rels.join(", "))?;
        }
        Ok(())
    }
}

fn chern(i: u32) -> VarSpec {
    VarSpec::new(format!("c{i}"), i).expect("positive degree")
}

/// The presentations of `A*(BG)` for the classical families:
///
/// * `GL_n`: `Z[c1,...,cn]`
/// * `SL_n`: `Z[c2,...,cn]`
/// * `Sp_n`: `Z[c2,c4,...,c2n]`
/// * `O_n`: `Z[c1,...,cn]/(2c_odd)`
/// * `SO_n`, `n` odd: `Z[c2,...,cn]/(2c_odd)`
/// * `SO_n`, `n = 2m`: `Z[c2,...,cn,y]/(y^2 - (-1)^m 2^(n-2) cn, 2c_odd, y c_odd)`
///   with `y` of degree `m`.
pub fn build_presentation(family: Family) -> Presentation {
    let n = family.n();
    let mut gens: Vec<VarSpec> = match family.tag() {
        FamilyTag::GL | FamilyTag::O => (1..=n).map(chern).collect(),
        FamilyTag::SL | FamilyTag::SO => (2..=n).map(chern).collect(),
        FamilyTag::Sp => (1..=n).map(|i| chern(2 * i)).collect(),
    };
    if family.has_y() {
        gens.push(VarSpec::new("y", family.m()).expect("positive degree"));
    }
    let ring = PolyRing::new(Coefficients::Integer, gens).expect("distinct generator names");

    let mut relations = Vec::new();
    if matches!(family.tag(), FamilyTag::O | FamilyTag::SO) {
        let c = |i: u32| ring.var_named(&format!("c{i}")).expect("generator");
        let odd = (1..=n).filter(|i| i % 2 == 1).filter(|&i| ring.var_index(&format!("c{i}")).is_some());
        let two_torsion = odd.clone().map(|i| c(i).scale(&BigInt::from(2)));
        if family.has_y() {
            let m = family.m();
            let y = ring.var_named("y").expect("generator");
            let sign = if m.is_multiple_of(2) { 1 } else { -1 };
            let d = BigInt::from(sign) * (BigInt::one() << (n - 2));
            relations.push(&y.pow(2) - &c(n).scale(&d));
            relations.extend(two_torsion);
            relations.extend(odd.map(|i| &y * &c(i)));
        } else {
            relations.extend(two_torsion);
        }
    }
    Presentation::from_ring(Some(family), ring, relations).expect("built-in relations are orientable")
}

/// An element of a presented ring, stored as its normal form.
#[derive(Clone, Debug)]
pub struct ChowElement {
    pres: Arc<Presentation>,
    poly: Polynomial,
}

impl PartialEq for ChowElement {
    fn eq(&self, other: &Self) -> bool {
        same_presentation(&self.pres, &other.pres) && self.poly == other.poly
    }
}

impl Eq for ChowElement {}

fn same_presentation(a: &Arc<Presentation>, b: &Arc<Presentation>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Canonical representative of `p` in the ring presented by `pres`.
/// Polynomials congruent modulo the relations have equal normal forms.
pub fn normal_form(p: &Polynomial, pres: &Arc<Presentation>) -> Result<ChowElement> {
    let p = pres.import(p)?;
    Ok(ChowElement { pres: pres.clone(), poly: pres.reduce(&p) })
}

impl ChowElement {
    pub fn zero(pres: &Arc<Presentation>) -> Self {
        ChowElement { pres: pres.clone(), poly: pres.ring.zero() }
    }

    pub fn one(pres: &Arc<Presentation>) -> Self {
        normal_form(&pres.ring.one(), pres).expect("constant")
    }

    pub fn generator(pres: &Arc<Presentation>, name: &str) -> Result<Self> {
        normal_form(&pres.generator(name)?, pres)
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    /// The reduced polynomial over the presentation's formal ring.
    pub fn as_polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.poly.terms()
    }

    fn check(&self, other: &ChowElement) -> Result<()> {
        if !same_presentation(&self.pres, &other.pres) {
            return Err(Error::Context(format!("elements of {} and {}", self.pres, other.pres)));
        }
        Ok(())
    }

    pub fn add(&self, other: &ChowElement) -> Result<ChowElement> {
        self.check(other)?;
        Ok(ChowElement { pres: self.pres.clone(), poly: self.pres.reduce(&(&self.poly + &other.poly)) })
    }

    pub fn sub(&self, other: &ChowElement) -> Result<ChowElement> {
        self.check(other)?;
        Ok(ChowElement { pres: self.pres.clone(), poly: self.pres.reduce(&(&self.poly - &other.poly)) })
    }

    pub fn mul(&self, other: &ChowElement) -> Result<ChowElement> {
        self.check(other)?;
        Ok(ChowElement { pres: self.pres.clone(), poly: self.pres.reduce(&(&self.poly * &other.poly)) })
    }

    pub fn neg(&self) -> ChowElement {
        ChowElement { pres: self.pres.clone(), poly: self.pres.reduce(&-&self.poly) }
    }

    pub fn pow(&self, e: u32) -> ChowElement {
        let mut acc = ChowElement::one(&self.pres);
        for _ in 0..e {
            acc = acc.mul(self).expect("same presentation");
        }
        acc
    }
}

impl fmt::Display for ChowElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly.display_with(&self.pres.display_order))
    }
}

pub fn chow_add(a: &ChowElement, b: &ChowElement) -> Result<ChowElement> {
    a.add(b)
}

pub fn chow_mul(a: &ChowElement, b: &ChowElement) -> Result<ChowElement> {
    a.mul(b)
}

/// Additive structure of one graded piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedGroup {
    pub degree: u32,
    pub free_rank: usize,
    pub torsion2_count: usize,
    /// Cyclic summands of order other than 2, as `(order, count)`; empty for
    /// the built-in families.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub other_torsion: Vec<(String, usize)>,
}

/// Count reduced monomials of degree `d` by the cyclic group they span.
pub fn hilbert_data(pres: &Presentation, d: u32) -> GradedGroup {
    let mut free_rank = 0;
    let mut torsion2_count = 0;
    let mut other: BTreeMap<BigInt, usize> = BTreeMap::new();
    for m in pres.reduced_monomials(d) {
        match pres.torsion_order(&m) {
            None => free_rank += 1,
            Some(k) if k == BigInt::from(2) => torsion2_count += 1,
            Some(k) => *other.entry(k).or_default() += 1,
        }
    }
    GradedGroup {
        degree: d,
        free_rank,
        torsion2_count,
        other_torsion: other.into_iter().map(|(k, c)| (k.to_string(), c)).collect(),
    }
}
