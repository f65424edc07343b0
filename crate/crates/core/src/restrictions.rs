//! Restriction homomorphisms out of the presented Chow rings, and the checks
//! built on them.
//!
//! * Torus: `A_G -> Z[x1,...,xr]` for a maximal torus of rank `r`. Chern
//!   classes go to elementary symmetric polynomials in the Chern roots of the
//!   tautological representation; `y` on `SO_{2m}` goes to
//!   `2^(m-1) x1...xm`.
//! * mu: `A_O(n) -> F2[e1,...,en]` through `mu_2^n`, and
//!   `A_SO(n) -> F2[e1,...,e(n-1)]` through `Gamma_n`, with
//!   `e_n = e1 + ... + e(n-1)` eliminated. Only valid in positive degree.
//!
//! The torus map kills every 2-torsion monomial (each contains an odd Chern
//! class), so a degree is faithfully detected exactly when the torus map is
//! injective on the free reduced monomials over `Z` and the mu map is
//! injective on the 2-torsion reduced monomials over `F2`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyring::{kernel_is_zero, Coefficients, IntMatrix, Modulus, Monomial, PolyRing, Polynomial, Substitution};
use crate::presentations::{build_presentation, ChowElement, Family, FamilyTag, Presentation};

fn family_of(pres: &Presentation) -> Result<Family> {
    pres.family().ok_or_else(|| Error::UndefinedRestriction(format!("{pres} is not one of the built-in families")))
}

fn chern_index(name: &str) -> Option<u32> {
    name.strip_prefix('c')?.parse().ok()
}

/// The restriction to a maximal torus.
#[derive(Clone, Debug)]
pub struct TorusTarget {
    family: Family,
    ring: PolyRing,
    map: Substitution,
}

impl TorusTarget {
    pub fn new(pres: &Presentation) -> Result<Self> {
        let family = family_of(pres)?;
        let rank = match family.tag() {
            FamilyTag::GL | FamilyTag::Sp => family.n(),
            FamilyTag::SL => family.n() - 1,
            FamilyTag::O | FamilyTag::SO => family.m(),
        } as usize;
        let ring = PolyRing::with_linear_vars(Coefficients::Integer, "x", rank);
        let x = ring.gens();
        // Chern roots of the tautological representation (for Sp/O/SO the
        // roots come in pairs +-x_i; e_i(-x^2) handles that below)
        let chern = match family.tag() {
            FamilyTag::GL => ring.elementary_symmetric_all(&x)?,
            FamilyTag::SL => {
                let last = -x.iter().fold(ring.zero(), |acc, v| &acc + v);
                let mut roots = x.clone();
                roots.push(last);
                ring.elementary_symmetric_all(&roots)?
            }
            FamilyTag::Sp | FamilyTag::O | FamilyTag::SO => {
                let squares = x.iter().map(|v| -v.pow(2)).collect::<Vec<_>>();
                let e = ring.elementary_symmetric_all(&squares)?;
                // c_{2i} = e_i(-x^2), odd classes vanish
                (0..=2 * e.len())
                    .map(
                        |i| if i % 2 == 0 { e.get(i / 2).cloned().unwrap_or_else(|| ring.zero()) } else { ring.zero() },
                    )
                    .collect()
            }
        };
        let mut map = Substitution::new(&ring);
        for (g, spec) in pres.generators().iter().enumerate() {
            let image = if spec.name() == "y" {
                split_eg_class(family.m())?
            } else {
                let i = chern_index(spec.name()).ok_or_else(|| Error::Generator(spec.name().to_string()))?;
                chern.get(i as usize).cloned().unwrap_or_else(|| ring.zero())
            };
            map.set(g, image)?;
        }
        Ok(TorusTarget { family, ring, map })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.ring.num_vars()
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    /// Image of a generator, by index in the presentation.
    pub fn generator_image(&self, g: usize) -> &Polynomial {
        self.map.image(g).expect("every generator has an image")
    }

    /// Image of a formal polynomial in the generators.
    pub fn image(&self, p: &Polynomial) -> Result<Polynomial> {
        self.map.apply(p)
    }
}

/// The restriction to `mu_2^n` (for `O_n`) or `Gamma_n` (for `SO_n`),
/// reduced mod 2.
#[derive(Clone, Debug)]
pub struct MuTarget {
    family: Family,
    ring: PolyRing,
    map: Substitution,
    y_index: Option<usize>,
}

impl MuTarget {
    pub fn new(pres: &Presentation) -> Result<Self> {
        let family = family_of(pres)?;
        let n = family.n() as usize;
        let (ring, args) = match family.tag() {
            FamilyTag::O => {
                let ring = PolyRing::with_linear_vars(Coefficients::Mod2, "e", n);
                let args = ring.gens();
                (ring, args)
            }
            FamilyTag::SO => {
                let ring = PolyRing::with_linear_vars(Coefficients::Mod2, "e", n - 1);
                let mut args = ring.gens();
                let last = args.iter().fold(ring.zero(), |acc, v| &acc + v);
                args.push(last);
                (ring, args)
            }
            _ => {
                return Err(Error::UndefinedRestriction(format!(
                    "{family} has no 2-torsion; the mu restriction is defined for O and SO only"
                )))
            }
        };
        let e = ring.elementary_symmetric_all(&args)?;
        let mut map = Substitution::new(&ring);
        let mut y_index = None;
        for (g, spec) in pres.generators().iter().enumerate() {
            if spec.name() == "y" {
                y_index = Some(g);
                continue;
            }
            let i = chern_index(spec.name()).ok_or_else(|| Error::Generator(spec.name().to_string()))?;
            map.set(g, e.get(i as usize).cloned().unwrap_or_else(|| ring.zero()))?;
        }
        Ok(MuTarget { family, ring, map, y_index })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn generator_image(&self, g: usize) -> Option<&Polynomial> {
        self.map.image(g)
    }

    /// Image of a formal polynomial in the Chern classes. Fails on any
    /// monomial containing `y`.
    pub fn image(&self, p: &Polynomial) -> Result<Polynomial> {
        if let Some(y) = self.y_index {
            if p.terms().any(|(m, _)| m.exponent(y) > 0) {
                return Err(Error::UndefinedRestriction(format!(
                    "y has no image in the mod 2 target of {}",
                    self.family
                )));
            }
        }
        self.map.apply(p)
    }
}

pub fn torus_image(x: &ChowElement) -> Result<Polynomial> {
    TorusTarget::new(x.presentation())?.image(x.as_polynomial())
}

pub fn mu_image(x: &ChowElement) -> Result<Polynomial> {
    MuTarget::new(x.presentation())?.image(x.as_polynomial())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub torus_image: String,
    pub mu_image: Option<String>,
    pub vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub degree: u32,
    pub free_basis: usize,
    pub torsion_basis: usize,
    #[serde(skip)]
    pub free_injective: bool,
    #[serde(skip)]
    pub torsion_injective: bool,
    pub injective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub family: String,
    pub n: u32,
    pub relations: Vec<RelationCheck>,
    pub faithfulness: Vec<DegreeCheck>,
}

impl VerificationReport {
    fn empty(family: Family) -> Self {
        VerificationReport {
            family: family.tag().to_string(),
            n: family.n(),
            relations: Vec::new(),
            faithfulness: Vec::new(),
        }
    }

    /// Every relation vanishes and every checked degree is injective.
    pub fn passed(&self) -> bool {
        self.relations.iter().all(|r| r.vanishes) && self.faithfulness.iter().all(|d| d.injective)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = format!("{}({})", self.family, self.n);
        if !self.relations.is_empty() {
            writeln!(f, "{name}: relations")?;
            for r in &self.relations {
                let mu = r.mu_image.as_deref().unwrap_or("-");
                let status = if r.vanishes { "ok" } else { "FAIL" };
                writeln!(f, "  {}  torus: {}  mu: {}  {}", r.relation, r.torus_image, mu, status)?;
            }
        }
        if !self.faithfulness.is_empty() {
            writeln!(f, "{name}: faithfulness")?;
            for d in &self.faithfulness {
                let status = if d.injective { "injective" } else { "NOT injective" };
                writeln!(f, "  degree {}: free {}, torsion {}, {}", d.degree, d.free_basis, d.torsion_basis, status)?;
            }
        }
        write!(f, "{}", if self.passed() { "passed" } else { "FAILED" })
    }
}

/// Restrict each defining relation of the family's presentation to the
/// torus and, where defined, to the mod 2 target.
pub fn verify_relations(family: Family) -> VerificationReport {
    verify_presentation(&build_presentation(family)).expect("built-in presentations have restriction maps")
}

/// Like [`verify_relations`] for an arbitrary relation list over a built-in
/// family's generators.
pub fn verify_presentation(pres: &Presentation) -> Result<VerificationReport> {
    let family = family_of(pres)?;
    let torus = TorusTarget::new(pres)?;
    let mu = MuTarget::new(pres).ok();
    let mut report = VerificationReport::empty(family);
    for r in pres.relations() {
        let t = torus.image(r)?;
        let m = match &mu {
            Some(mu) => mu.image(r).ok(),
            None => None,
        };
        report.relations.push(RelationCheck {
            relation: pres.show(r),
            torus_image: t.to_string(),
            mu_image: m.as_ref().map(ToString::to_string),
            vanishes: t.is_zero() && m.as_ref().is_none_or(Polynomial::is_zero),
        });
    }
    Ok(report)
}

/// Memoized images of monomials under a substitution: the image of `m` is the
/// image of `m / g` times the image of `g`.
struct ImageCache<'a> {
    image_of_generator: Box<dyn Fn(usize) -> Option<&'a Polynomial> + Sync + 'a>,
    one: Polynomial,
    cache: HashMap<Monomial, Option<Polynomial>>,
}

impl<'a> ImageCache<'a> {
    fn get(&mut self, m: &Monomial) -> Option<Polynomial> {
        if m.is_one() {
            return Some(self.one.clone());
        }
        if let Some(p) = self.cache.get(m) {
            return p.clone();
        }
        let (g, _) = m.iter().last().unwrap();
        let rest = Monomial::var(g).divide_into(m).unwrap();
        let image = match ((self.image_of_generator)(g), self.get(&rest)) {
            (Some(gi), Some(r)) => Some(&r * gi),
            _ => None,
        };
        self.cache.insert(m.clone(), image.clone());
        image
    }
}

fn int_matrix(images: &[Polynomial]) -> IntMatrix {
    let mut rows: BTreeMap<&Monomial, usize> = BTreeMap::new();
    for p in images {
        for (m, _) in p.terms() {
            let next = rows.len();
            rows.entry(m).or_insert(next);
        }
    }
    let mut mat = IntMatrix::zeros(rows.len(), images.len());
    for (j, p) in images.iter().enumerate() {
        for (m, c) in p.terms() {
            mat.set(rows[m], j, c.clone());
        }
    }
    mat
}

/// Degree-wise injectivity of the restriction maps on reduced monomials, for
/// degrees `1..=max_degree`. Degree 0 is excluded: the mod 2 targets agree
/// with the Chow ring of the finite subgroup only in positive degree.
pub fn faithfulness_check(family: Family, max_degree: u32) -> VerificationReport {
    check_faithfulness(&build_presentation(family), max_degree).expect("built-in presentations have restriction maps")
}

/// [`faithfulness_check`] for a presentation over a built-in family's
/// generators, e.g. one with a relation removed.
pub fn check_faithfulness(pres: &Presentation, max_degree: u32) -> Result<VerificationReport> {
    let family = family_of(pres)?;
    let torus = TorusTarget::new(pres)?;
    let mu = MuTarget::new(pres).ok();

    let bases = (1..=max_degree)
        .map(|d| {
            let (free, torsion): (Vec<_>, Vec<_>) =
                pres.reduced_monomials(d).into_iter().partition(|m| pres.torsion_order(m).is_none());
            (d, free, torsion)
        })
        .collect::<Vec<_>>();

    let mut torus_cache = ImageCache {
        image_of_generator: Box::new(|g| Some(torus.generator_image(g))),
        one: torus.ring().one(),
        cache: HashMap::new(),
    };
    let mut mu_cache = mu.as_ref().map(|mu| ImageCache {
        image_of_generator: Box::new(move |g| mu.generator_image(g)),
        one: mu.ring().one(),
        cache: HashMap::new(),
    });

    let matrices = bases
        .iter()
        .map(|(d, free, torsion)| {
            let free_images = free.iter().map(|m| torus_cache.get(m).expect("torus image")).collect::<Vec<_>>();
            let torsion_images = match mu_cache.as_mut() {
                Some(cache) => torsion.iter().map(|m| cache.get(m).expect("torsion monomials avoid y")).collect(),
                None if torsion.is_empty() => Vec::new(),
                None => return Err(Error::UndefinedRestriction(format!("{family} has torsion but no mod 2 target"))),
            };
            Ok((*d, free.len(), torsion.len(), int_matrix(&free_images), int_matrix(&torsion_images)))
        })
        .collect::<Result<Vec<_>>>()?;

    let faithfulness = matrices
        .into_par_iter()
        .map(|(degree, free_basis, torsion_basis, free_mat, torsion_mat)| {
            let free_injective = kernel_is_zero(&free_mat, Modulus::None);
            let torsion_injective = kernel_is_zero(&torsion_mat, Modulus::Two);
            DegreeCheck {
                degree,
                free_basis,
                torsion_basis,
                free_injective,
                torsion_injective,
                injective: free_injective && torsion_injective,
            }
        })
        .collect();

    Ok(VerificationReport { faithfulness, ..VerificationReport::empty(family) })
}

/// A maximal totally isotropic subbundle of `L1 + ... + Lm + L1^v + ... + Lm^v`
/// built from one line of each pair: `+1` picks `Li`, `-1` picks `Li^v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitBundle {
    signs: Vec<i8>,
}

impl SplitBundle {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Range("signs must be +1 or -1".into()));
        }
        Ok(SplitBundle { signs })
    }

    pub fn m(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// All `2^m` sign vectors, all-plus first.
    pub fn all(m: usize) -> Vec<SplitBundle> {
        (0..1u64 << m)
            .map(|bits| SplitBundle { signs: (0..m).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect() })
            .collect()
    }
}

/// Admissibility and top Chern class of a split isotropic subbundle.
/// Admissible subbundles are those in the component of the all-plus one,
/// i.e. with an even number of dual lines.
pub fn split_isotropic_chern(b: &SplitBundle) -> (bool, Polynomial) {
    let ring = PolyRing::with_linear_vars(Coefficients::Integer, "x", b.m());
    let sign: i64 = b.signs.iter().map(|&s| i64::from(s)).product();
    let product = ring.gens().iter().fold(ring.one(), |acc, v| &acc * v);
    (sign == 1, product.scale(&BigInt::from(sign)))
}

/// The torus image `2^(m-1) x1...xm` of `y_m` in the split model.
pub fn split_eg_class(m: u32) -> Result<Polynomial> {
    if m == 0 {
        return Err(Error::Range("split_eg_class needs m >= 1".into()));
    }
    let all_plus = SplitBundle { signs: vec![1; m as usize] };
    let (_, top) = split_isotropic_chern(&all_plus);
    Ok(top.scale(&(BigInt::one() << (m - 1))))
}

/// Drop every term divisible by `x1^2...xm^2`.
pub fn reduce_mod_top_square(p: &Polynomial) -> Polynomial {
    let m = p.ring().num_vars();
    let top = Monomial::from_exponents(&vec![2; m]);
    p.filter_terms(|mono, _| !top.divides(mono))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentifyClass {
    /// The divisor pushforward of `y_(m-1)`.
    pub lhs: Polynomial,
    /// The torus image of `y_m`.
    pub rhs: Polynomial,
    /// `lhs = sign * rhs`; 0 if they are not proportional by a sign.
    pub sign: i32,
}

/// Pushforward of `y_(m-1)` along the split divisor `Y = Y1 + Y2`, computed in
/// `Z[x1,...,xm]/(x1^2...xm^2)` and compared with the torus image of `y_m`.
///
/// On `Y1` the isotropic subbundle `L2 + ... + Lm` of the rank `2m-2` bundle
/// `F` lifts to an admissible subbundle of `E`, on `Y2` it does not; the class
/// `[Y1] = -x1`, `[Y2] = x1`.
pub fn verify_identify_class(m: u32) -> Result<IdentifyClass> {
    if m < 2 {
        return Err(Error::Range("verify_identify_class needs m >= 2".into()));
    }
    let ring = PolyRing::with_linear_vars(Coefficients::Integer, "x", m as usize);
    let x = ring.gens();
    let tail = x[1..].iter().fold(ring.one(), |acc, v| &acc * v);
    let scale = BigInt::one() << (m - 2);
    // y_(m-1)(F_l) = 2^(m-2) * top Chern class of an admissible subbundle,
    // which is -(top Chern class of L2 + ... + Lm) when that one is not
    // admissible
    let y_on = |admissible: bool| tail.scale(&if admissible { scale.clone() } else { -scale.clone() });
    let divisor_y1 = -&x[0];
    let divisor_y2 = x[0].clone();
    let lhs = reduce_mod_top_square(&(&(&divisor_y1 * &y_on(true)) + &(&divisor_y2 * &y_on(false))));
    let rhs = reduce_mod_top_square(&split_eg_class(m)?);
    let sign = if lhs == rhs {
        1
    } else if lhs == -&rhs {
        -1
    } else {
        0
    };
    Ok(IdentifyClass { lhs, rhs, sign })
}
