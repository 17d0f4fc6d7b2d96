//! Bivariate skew polynomials over a finite ring with the multiplication rule
//! `a x^i y^j ⋆ b x^r y^s = a ρ^i θ^j(b) x^(i+r) y^(j+s)`.
//!
//! Exponents range over ℤ² so that the anti-isomorphism ψ into the
//! localization at the monomials lives in the same type; the rule above is
//! used verbatim for negative exponents.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::ring::{Automorphism, AutomorphismPair, Element, Ring};

/// An exponent pair (i, j) for the monomial x^i y^j.
///
/// The derived `Ord` is the total order ⇒: compare the y-exponent first,
/// then the x-exponent. The componentwise partial order is [`QuasiDegree::geq`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct QuasiDegree {
    pub i: i64,
    pub j: i64,
}

impl QuasiDegree {
    pub const ZERO: QuasiDegree = QuasiDegree { i: 0, j: 0 };

    pub fn new(i: i64, j: i64) -> Self {
        QuasiDegree { i, j }
    }

    /// Componentwise order: i ≥ k and j ≥ l.
    pub fn geq(self, other: QuasiDegree) -> bool {
        self.i >= other.i && self.j >= other.j
    }

    /// (i,j) ⇒ (k,l): j > l, or j = l and i ≥ k.
    pub fn lex_geq(self, other: QuasiDegree) -> bool {
        self >= other
    }

    /// (i,j) → (k,l): j > l, or j = l and i > k.
    pub fn lex_gt(self, other: QuasiDegree) -> bool {
        self > other
    }

    pub fn is_ordinary(self) -> bool {
        self.i >= 0 && self.j >= 0
    }
}

impl PartialOrd for QuasiDegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuasiDegree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.j.cmp(&other.j).then(self.i.cmp(&other.i))
    }
}

impl Add for QuasiDegree {
    type Output = QuasiDegree;
    fn add(self, o: QuasiDegree) -> QuasiDegree {
        QuasiDegree::new(self.i + o.i, self.j + o.j)
    }
}

impl Sub for QuasiDegree {
    type Output = QuasiDegree;
    fn sub(self, o: QuasiDegree) -> QuasiDegree {
        QuasiDegree::new(self.i - o.i, self.j - o.j)
    }
}

impl fmt::Display for QuasiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

#[derive(Debug, PartialEq, Eq)]
struct SkewRingData {
    ring: Ring,
    autos: AutomorphismPair,
}

/// The ring R[x,y;ρ,θ]: a coefficient ring together with its automorphism pair.
#[derive(Debug, Clone)]
pub struct SkewRing(Arc<SkewRingData>);

impl PartialEq for SkewRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for SkewRing {}

impl SkewRing {
    pub fn new(ring: Ring, autos: AutomorphismPair) -> Self {
        let autos = autos.normalized(&ring);
        SkewRing(Arc::new(SkewRingData { ring, autos }))
    }

    pub fn ring(&self) -> &Ring {
        &self.0.ring
    }

    pub fn autos(&self) -> AutomorphismPair {
        self.0.autos
    }

    /// ρ^i θ^j (a).
    #[inline]
    pub fn twist(&self, i: i64, j: i64, a: Element) -> Element {
        self.0.autos.apply_powers(&self.0.ring, i, j, a)
    }

    pub fn apply(&self, auto: Automorphism, a: Element) -> Element {
        self.0.autos.apply(&self.0.ring, auto, a)
    }

    pub fn zero(&self) -> SkewPoly {
        SkewPoly {
            ctx: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> SkewPoly {
        self.constant(self.ring().one())
    }

    pub fn constant(&self, c: Element) -> SkewPoly {
        self.monomial(c, 0, 0)
    }

    /// c·x^i y^j.
    pub fn monomial(&self, c: Element, i: i64, j: i64) -> SkewPoly {
        self.from_terms([(QuasiDegree::new(i, j), c)])
    }

    pub fn x(&self) -> SkewPoly {
        self.monomial(self.ring().one(), 1, 0)
    }

    pub fn y(&self) -> SkewPoly {
        self.monomial(self.ring().one(), 0, 1)
    }

    /// Sums the given terms; repeated exponents accumulate.
    pub fn from_terms<I>(&self, terms: I) -> SkewPoly
    where
        I: IntoIterator<Item = (QuasiDegree, Element)>,
    {
        let ring = self.ring();
        let mut map: BTreeMap<QuasiDegree, Element> = BTreeMap::new();
        for (d, c) in terms {
            let e = map.entry(d).or_insert_with(|| ring.zero());
            *e = ring.add(*e, c);
        }
        map.retain(|_, c| !ring.is_zero(*c));
        SkewPoly {
            ctx: self.clone(),
            terms: map,
        }
    }

    /// Uniformly random polynomial with support inside [0..=max_i]×[0..=max_j].
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, max_i: i64, max_j: i64) -> SkewPoly {
        let q = self.ring().size();
        let ring = self.ring();
        let mut terms = Vec::new();
        for j in 0..=max_j {
            for i in 0..=max_i {
                let c = ring.element(rng.gen_range(0..q)).expect("index in range");
                terms.push((QuasiDegree::new(i, j), c));
            }
        }
        self.from_terms(terms)
    }

    /// Random nonzero polynomial whose leading coefficient is then set to 1.
    pub fn random_monic<R: Rng + ?Sized>(&self, rng: &mut R, max_i: i64, max_j: i64) -> SkewPoly {
        loop {
            let mut f = self.random(rng, max_i, max_j);
            if let Ok(d) = f.quasi_degree() {
                f.terms.insert(d, self.ring().one());
                return f;
            }
        }
    }
}

/// A finitely supported map ℤ² → R with no stored zero coefficients.
#[derive(Clone)]
pub struct SkewPoly {
    ctx: SkewRing,
    terms: BTreeMap<QuasiDegree, Element>,
}

impl PartialEq for SkewPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.terms == other.terms
    }
}

impl Eq for SkewPoly {}

impl fmt::Debug for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SkewPoly({self})")
    }
}

impl SkewPoly {
    pub fn context(&self) -> &SkewRing {
        &self.ctx
    }

    pub fn ring(&self) -> &Ring {
        self.ctx.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in ascending ⇒ order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (QuasiDegree, Element)> + '_ {
        self.terms.iter().map(|(d, c)| (*d, *c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, i: i64, j: i64) -> Element {
        self.terms
            .get(&QuasiDegree::new(i, j))
            .copied()
            .unwrap_or_else(|| self.ring().zero())
    }

    /// All exponents are nonnegative.
    pub fn is_ordinary(&self) -> bool {
        self.terms.keys().all(|d| d.is_ordinary())
    }

    fn require_ordinary(&self) -> Result<()> {
        if self.is_ordinary() {
            Ok(())
        } else {
            Err(Error::NotOrdinary(self.to_string()))
        }
    }

    /// Largest x-exponent in the support.
    pub fn x_degree(&self) -> Option<i64> {
        self.terms.keys().map(|d| d.i).max()
    }

    /// Largest y-exponent in the support.
    pub fn y_degree(&self) -> Option<i64> {
        self.terms.keys().map(|d| d.j).max()
    }

    /// The ⇒-maximal exponent pair of the support.
    pub fn quasi_degree(&self) -> Result<QuasiDegree> {
        self.terms
            .keys()
            .next_back()
            .copied()
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn leading_coefficient(&self) -> Result<Element> {
        self.terms
            .values()
            .next_back()
            .copied()
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coefficient()
            .map(|c| self.ring().is_one(c))
            .unwrap_or(false)
    }

    fn same_ring(&self, other: &SkewPoly) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &SkewPoly) -> Result<SkewPoly> {
        self.same_ring(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &SkewPoly) -> Result<SkewPoly> {
        self.same_ring(other)?;
        Ok(self.add_unchecked(&other.negate()))
    }

    /// The product f ⋆ g.
    pub fn try_star(&self, other: &SkewPoly) -> Result<SkewPoly> {
        self.same_ring(other)?;
        Ok(self.star_unchecked(other))
    }

    fn add_unchecked(&self, other: &SkewPoly) -> SkewPoly {
        let ring = self.ring();
        let mut terms = self.terms.clone();
        for (d, c) in &other.terms {
            match terms.get_mut(d) {
                Some(e) => {
                    *e = ring.add(*e, *c);
                    if ring.is_zero(*e) {
                        terms.remove(d);
                    }
                }
                None => {
                    terms.insert(*d, *c);
                }
            }
        }
        SkewPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    fn star_unchecked(&self, other: &SkewPoly) -> SkewPoly {
        let ring = self.ring();
        let mut acc: BTreeMap<QuasiDegree, Element> = BTreeMap::new();
        for (da, a) in &self.terms {
            for (db, b) in &other.terms {
                let c = ring.mul(*a, self.ctx.twist(da.i, da.j, *b));
                let e = acc.entry(*da + *db).or_insert_with(|| ring.zero());
                *e = ring.add(*e, c);
            }
        }
        acc.retain(|_, c| !ring.is_zero(*c));
        SkewPoly {
            ctx: self.ctx.clone(),
            terms: acc,
        }
    }

    pub fn negate(&self) -> SkewPoly {
        let ring = self.ring();
        SkewPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(d, c)| (*d, ring.neg(*c))).collect(),
        }
    }

    /// Left scalar multiple c·f (coefficientwise).
    pub fn scale(&self, c: Element) -> SkewPoly {
        let ring = self.ring();
        let mut terms: BTreeMap<_, _> = self.terms.iter().map(|(d, a)| (*d, ring.mul(c, *a))).collect();
        terms.retain(|_, a| !ring.is_zero(*a));
        SkewPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    /// Applies ρ^i θ^j to every coefficient.
    pub fn twist_coefficients(&self, i: i64, j: i64) -> SkewPoly {
        SkewPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(d, c)| (*d, self.ctx.twist(i, j, *c)))
                .collect(),
        }
    }

    /// Multiplies every monomial by x^di y^dj on the right (exponent shift).
    pub fn shift_exponents(&self, di: i64, dj: i64) -> SkewPoly {
        SkewPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(d, c)| (*d + QuasiDegree::new(di, dj), *c))
                .collect(),
        }
    }

    /// Right division f1 = h ⋆ f2 + g by a monic f2.
    ///
    /// Repeatedly cancels the ⇒-greatest remaining term whose exponent is
    /// componentwise ≥ deg(f2), so the remainder has no such term at all.
    pub fn right_divide(&self, divisor: &SkewPoly) -> Result<(SkewPoly, SkewPoly)> {
        self.same_ring(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !divisor.is_monic() {
            return Err(Error::NonMonicDivisor);
        }
        self.require_ordinary()?;
        divisor.require_ordinary()?;
        let ring = self.ring();
        let d = divisor.quasi_degree()?;
        let mut rem = self.terms.clone();
        let mut quot: BTreeMap<QuasiDegree, Element> = BTreeMap::new();
        while let Some((&k, &c)) = rem.iter().rev().find(|(k, _)| k.geq(d)) {
            let shift = k - d;
            quot.insert(shift, c);
            for (db, b) in &divisor.terms {
                let prod = ring.mul(c, self.ctx.twist(shift.i, shift.j, *b));
                let key = shift + *db;
                let e = rem.entry(key).or_insert_with(|| ring.zero());
                *e = ring.sub(*e, prod);
                if ring.is_zero(*e) {
                    rem.remove(&key);
                }
            }
        }
        Ok((
            SkewPoly {
                ctx: self.ctx.clone(),
                terms: quot,
            },
            SkewPoly {
                ctx: self.ctx.clone(),
                terms: rem,
            },
        ))
    }

    /// Whether `self` (monic) right-divides `f` with zero remainder.
    pub fn right_divides(&self, f: &SkewPoly) -> Result<bool> {
        let (_, r) = f.right_divide(self)?;
        Ok(r.is_zero())
    }

    /// Commutes with every constant and with x and y.
    pub fn is_central(&self) -> Result<bool> {
        let ctx = &self.ctx;
        for c in ctx.ring().elements()? {
            let cp = ctx.constant(c);
            if self.star_unchecked(&cp) != cp.star_unchecked(self) {
                return Ok(false);
            }
        }
        let (x, y) = (ctx.x(), ctx.y());
        Ok(self.star_unchecked(&x) == x.star_unchecked(self)
            && self.star_unchecked(&y) == y.star_unchecked(self))
    }

    /// ψ(Σ a_ij x^i y^j) = Σ x^-i y^-j a_ij, written with left coefficients as
    /// Σ ρ^-i θ^-j(a_ij) x^-i y^-j.
    pub fn psi(&self) -> SkewPoly {
        SkewPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(d, c)| (QuasiDegree::new(-d.i, -d.j), self.ctx.twist(-d.i, -d.j, *c)))
                .collect(),
        }
    }

    /// Every coefficient is fixed by each listed automorphism.
    pub fn coefficients_fixed_by(&self, autos: &[Automorphism]) -> bool {
        let pair = self.ctx.autos();
        self.terms.values().all(|&c| pair.is_fixed(self.ring(), c, autos))
    }
}

impl Add for &SkewPoly {
    type Output = SkewPoly;
    fn add(self, rhs: &SkewPoly) -> SkewPoly {
        self.try_add(rhs).expect("skew polynomials from different rings")
    }
}

impl Sub for &SkewPoly {
    type Output = SkewPoly;
    fn sub(self, rhs: &SkewPoly) -> SkewPoly {
        self.try_sub(rhs).expect("skew polynomials from different rings")
    }
}

/// `*` is the star product.
impl Mul for &SkewPoly {
    type Output = SkewPoly;
    fn mul(self, rhs: &SkewPoly) -> SkewPoly {
        self.try_star(rhs).expect("skew polynomials from different rings")
    }
}

impl Neg for &SkewPoly {
    type Output = SkewPoly;
    fn neg(self) -> SkewPoly {
        self.negate()
    }
}

/// Finds a nonzero r with f ⋆ r = 0, given a witness g ≠ 0 with f ⋆ g = 0 and
/// f having all coefficients fixed by ρ and θ.
///
/// Elements are tried in enumeration order, so the smallest annihilator is
/// returned.
pub fn mccoy_annihilator(f: &SkewPoly, g: &SkewPoly) -> Result<Element> {
    f.same_ring(g)?;
    let ctx = f.context();
    let ring = ctx.ring();
    if ring.is_field() {
        return Err(Error::Usage(format!(
            "{} has no zero divisors; a zero product forces f = 0",
            ring.name()
        )));
    }
    if !f.coefficients_fixed_by(&[Automorphism::RHO, Automorphism::THETA]) {
        return Err(Error::Usage("f must have coefficients fixed by ρ and θ".into()));
    }
    if g.is_zero() {
        return Err(Error::Usage("witness g must be nonzero".into()));
    }
    if !f.star_unchecked(g).is_zero() {
        return Err(Error::Usage("f ⋆ g is not zero".into()));
    }
    ring.elements()?
        .into_iter()
        .filter(|&r| !ring.is_zero(r))
        .find(|&r| f.star_unchecked(&ctx.constant(r)).is_zero())
        .ok_or_else(|| {
            Error::TheoremViolation(format!("no nonzero r annihilates {f} although {f} ⋆ {g} = 0"))
        })
}
