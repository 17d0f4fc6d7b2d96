//! The quotient R° = R[x,y;ρ,θ]/⟨x^l−λ1, y^s−λ2⟩ with its l×s array form,
//! and remainders in R◇ = R[x,y;ρ,θ]/⟨(x^l−λ1)⋆(y^s−λ2)⟩.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Automorphism, AutomorphismPair, Element, Ring, RingSpec};
use crate::skew_poly::{QuasiDegree, SkewPoly, SkewRing};

/// An l×s array over a ring; entry (i, j) is the coefficient of x^i y^j.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Codeword {
    rows: usize,
    cols: usize,
    data: Vec<Element>,
}

impl Codeword {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Self {
        Codeword {
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    /// Row-major entries.
    pub fn from_flat(rows: usize, cols: usize, data: Vec<Element>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Usage(format!(
                "{} entries cannot fill a {rows}×{cols} array",
                data.len()
            )));
        }
        Ok(Codeword { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Element>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Usage("ragged array".into()));
        }
        Codeword::from_flat(r, c, rows.into_iter().flatten().collect())
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_flat(&self) -> &[Element] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Element>> {
        self.data
            .chunks(self.cols.max(1))
            .map(<[Element]>::to_vec)
            .collect()
    }

    /// Number of nonzero entries.
    pub fn weight(&self, ring: &Ring) -> usize {
        self.data.iter().filter(|&&e| !ring.is_zero(e)).count()
    }

    pub fn is_zero(&self, ring: &Ring) -> bool {
        self.weight(ring) == 0
    }

    pub fn map(&self, f: impl Fn(Element) -> Element) -> Codeword {
        Codeword {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&e| f(e)).collect(),
        }
    }

    pub fn format(&self, ring: &Ring) -> Vec<Vec<String>> {
        self.to_rows()
            .into_iter()
            .map(|row| row.into_iter().map(|e| ring.format_element(e)).collect())
            .collect()
    }

    pub fn parse(ring: &Ring, rows: &[Vec<String>]) -> Result<Codeword> {
        Codeword::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|s| ring.parse_element(s)).collect())
                .collect::<Result<_>>()?,
        )
    }
}

impl Index<(usize, usize)> for Codeword {
    type Output = Element;
    fn index(&self, (i, j): (usize, usize)) -> &Element {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Codeword {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Element {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// A ring given either by short name (`"gf4"`) or by full spec.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RingRef {
    Name(String),
    Spec(RingSpec),
}

impl RingRef {
    pub fn build(&self) -> Result<Ring> {
        match self {
            RingRef::Name(n) => Ring::from_name(n),
            RingRef::Spec(s) => Ring::new(s.clone()),
        }
    }
}

/// JSON form of a quotient context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextSpec {
    pub ring: RingRef,
    #[serde(default)]
    pub rho_power: u32,
    #[serde(default)]
    pub theta_power: u32,
    pub l: usize,
    pub s: usize,
    pub lambda1: String,
    pub lambda2: String,
}

#[derive(Debug)]
struct ContextData {
    skew: SkewRing,
    l: usize,
    s: usize,
    lambda1: Element,
    lambda2: Element,
    checked: bool,
}

/// Parameters (l, s, λ1, λ2) over a skew polynomial ring.
#[derive(Debug, Clone)]
pub struct QuotientContext(Arc<ContextData>);

impl PartialEq for QuotientContext {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0)
            || (self.0.skew == o.0.skew
                && self.0.l == o.0.l
                && self.0.s == o.0.s
                && self.0.lambda1 == o.0.lambda1
                && self.0.lambda2 == o.0.lambda2)
    }
}

impl Eq for QuotientContext {}

/// Which relation the stepwise reduction applies first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionOrder {
    XFirst,
    YFirst,
}

impl QuotientContext {
    /// Builds a context satisfying the standing assumptions: λ1, λ2 fixed by
    /// ρ and θ, |⟨ρ⟩| divides l, |⟨θ⟩| divides s, and λ1, λ2 units.
    pub fn new(skew: SkewRing, l: usize, s: usize, lambda1: Element, lambda2: Element) -> Result<Self> {
        let ctx = Self::new_unchecked(skew, l, s, lambda1, lambda2)?;
        let skew = ctx.skew();
        let ring = skew.ring();
        let pair = skew.autos();
        let both = [Automorphism::RHO, Automorphism::THETA];
        for (name, lam) in [("lambda1", lambda1), ("lambda2", lambda2)] {
            if !pair.is_fixed(ring, lam, &both) {
                return Err(Error::InvalidContext(format!(
                    "{name} = {} is not fixed by rho and theta",
                    ring.format_element(lam)
                )));
            }
            if !ring.is_unit(lam) {
                return Err(Error::InvalidContext(format!(
                    "{name} = {} is not a unit",
                    ring.format_element(lam)
                )));
            }
        }
        let rho_order = pair.order(ring, Automorphism::RHO) as usize;
        if !l.is_multiple_of(rho_order) {
            return Err(Error::InvalidContext(format!(
                "order {rho_order} of rho does not divide l = {l}"
            )));
        }
        let theta_order = pair.order(ring, Automorphism::THETA) as usize;
        if !s.is_multiple_of(theta_order) {
            return Err(Error::InvalidContext(format!(
                "order {theta_order} of theta does not divide s = {s}"
            )));
        }
        Ok(QuotientContext(Arc::new(ContextData {
            checked: true,
            ..Arc::try_unwrap(ctx.0).expect("fresh context")
        })))
    }

    /// Skips the standing-assumption checks. The relations are then only
    /// left-ideal relations and reduction may depend on the order of steps.
    pub fn new_unchecked(
        skew: SkewRing,
        l: usize,
        s: usize,
        lambda1: Element,
        lambda2: Element,
    ) -> Result<Self> {
        if l == 0 || s == 0 {
            return Err(Error::InvalidContext("l and s must be at least 1".into()));
        }
        let ring = skew.ring();
        if !ring.owns(lambda1) || !ring.owns(lambda2) {
            return Err(Error::RingMismatch);
        }
        Ok(QuotientContext(Arc::new(ContextData {
            skew,
            l,
            s,
            lambda1,
            lambda2,
            checked: false,
        })))
    }

    pub fn from_spec(spec: &ContextSpec) -> Result<Self> {
        let ring = spec.ring.build()?;
        let lambda1 = ring.parse_element(&spec.lambda1)?;
        let lambda2 = ring.parse_element(&spec.lambda2)?;
        let skew = SkewRing::new(ring, AutomorphismPair::new(spec.rho_power, spec.theta_power));
        QuotientContext::new(skew, spec.l, spec.s, lambda1, lambda2)
    }

    pub fn to_spec(&self) -> ContextSpec {
        let ring = self.ring();
        let pair = self.skew().autos();
        ContextSpec {
            ring: RingRef::Spec(ring.spec().clone()),
            rho_power: pair.rho_power,
            theta_power: pair.theta_power,
            l: self.l(),
            s: self.s(),
            lambda1: ring.format_element(self.lambda1()),
            lambda2: ring.format_element(self.lambda2()),
        }
    }

    /// Same data with (λ1, λ2) replaced, keeping the checked/unchecked mode.
    pub fn with_lambdas(&self, lambda1: Element, lambda2: Element) -> Result<Self> {
        let skew = self.skew().clone();
        if self.0.checked {
            QuotientContext::new(skew, self.l(), self.s(), lambda1, lambda2)
        } else {
            QuotientContext::new_unchecked(skew, self.l(), self.s(), lambda1, lambda2)
        }
    }

    pub fn skew(&self) -> &SkewRing {
        &self.0.skew
    }

    pub fn ring(&self) -> &Ring {
        self.0.skew.ring()
    }

    pub fn l(&self) -> usize {
        self.0.l
    }

    pub fn s(&self) -> usize {
        self.0.s
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.0.l, self.0.s)
    }

    pub fn lambda1(&self) -> Element {
        self.0.lambda1
    }

    pub fn lambda2(&self) -> Element {
        self.0.lambda2
    }

    pub fn is_checked(&self) -> bool {
        self.0.checked
    }

    /// Number of elements of R°, or None if it overflows.
    pub fn size(&self) -> Option<u64> {
        self.ring().size().checked_pow((self.l() * self.s()) as u32)
    }

    pub fn describe(&self) -> String {
        let ring = self.ring();
        let pair = self.skew().autos();
        format!(
            "{} rho=F^{} theta=F^{} l={} s={} lambda1={} lambda2={}",
            ring.name(),
            pair.rho_power,
            pair.theta_power,
            self.l(),
            self.s(),
            ring.format_element(self.lambda1()),
            ring.format_element(self.lambda2())
        )
    }

    /// x^l − λ1.
    pub fn x_modulus(&self) -> SkewPoly {
        let ring = self.ring();
        self.skew().from_terms([
            (QuasiDegree::new(self.l() as i64, 0), ring.one()),
            (QuasiDegree::ZERO, ring.neg(self.lambda1())),
        ])
    }

    /// y^s − λ2.
    pub fn y_modulus(&self) -> SkewPoly {
        let ring = self.ring();
        self.skew().from_terms([
            (QuasiDegree::new(0, self.s() as i64), ring.one()),
            (QuasiDegree::ZERO, ring.neg(self.lambda2())),
        ])
    }

    /// (x^l − λ1) ⋆ (y^s − λ2).
    pub fn modulus_product(&self) -> SkewPoly {
        &self.x_modulus() * &self.y_modulus()
    }

    pub fn zero_class(&self) -> ResidueClass {
        ResidueClass {
            ctx: self.clone(),
            coeffs: Codeword::zeros(self.ring(), self.l(), self.s()),
        }
    }

    pub fn from_array(&self, arr: &Codeword) -> Result<ResidueClass> {
        self.check_shape(arr)?;
        if arr.as_flat().iter().any(|&e| !self.ring().owns(e)) {
            return Err(Error::RingMismatch);
        }
        Ok(ResidueClass {
            ctx: self.clone(),
            coeffs: arr.clone(),
        })
    }

    pub fn check_shape(&self, arr: &Codeword) -> Result<()> {
        if arr.shape() != self.shape() {
            return Err(Error::ShapeMismatch {
                expected: self.shape(),
                got: arr.shape(),
            });
        }
        Ok(())
    }

    /// Canonical class of f, applying x-relations first.
    pub fn reduce(&self, f: &SkewPoly) -> Result<ResidueClass> {
        self.reduce_with_order(f, ReductionOrder::XFirst)
    }

    /// Rewrites c·x^i y^j with i ≥ l as c·ρ^(i−l)θ^j(λ1)·x^(i−l) y^j and with
    /// j ≥ s as c·ρ^iθ^(j−s)(λ2)·x^i y^(j−s) until every exponent is below
    /// (l, s). The twists are trivial when λ1, λ2 are fixed.
    pub fn reduce_with_order(&self, f: &SkewPoly, order: ReductionOrder) -> Result<ResidueClass> {
        if f.context() != self.skew() {
            return Err(Error::ContextMismatch);
        }
        if !f.is_ordinary() {
            return Err(Error::NotOrdinary(f.to_string()));
        }
        let ring = self.ring();
        let skew = self.skew();
        let (l, s) = (self.l() as i64, self.s() as i64);
        let mut out = Codeword::zeros(ring, self.l(), self.s());
        for (d, c) in f.terms() {
            let (mut i, mut j, mut c) = (d.i, d.j, c);
            loop {
                let x_step = i >= l;
                let y_step = j >= s;
                match (x_step, y_step, order) {
                    (false, false, _) => break,
                    (true, false, _) | (true, true, ReductionOrder::XFirst) => {
                        i -= l;
                        c = ring.mul(c, skew.twist(i, j, self.lambda1()));
                    }
                    _ => {
                        j -= s;
                        c = ring.mul(c, skew.twist(i, j, self.lambda2()));
                    }
                }
            }
            let slot = &mut out[(i as usize, j as usize)];
            *slot = ring.add(*slot, c);
        }
        Ok(ResidueClass {
            ctx: self.clone(),
            coeffs: out,
        })
    }

    /// The remainder of f on right division by (x^l − λ1) ⋆ (y^s − λ2).
    pub fn reduce_diamond(&self, f: &SkewPoly) -> Result<SkewPoly> {
        Ok(f.right_divide(&self.modulus_product())?.1)
    }

    /// Array with enumeration index `n` (base-q digits, entry (0,0) least
    /// significant).
    pub fn array_from_index(&self, mut n: u64) -> Codeword {
        let ring = self.ring();
        let q = ring.size();
        let data = (0..self.l() * self.s())
            .map(|_| {
                let e = ring.element(n % q).expect("digit below q");
                n /= q;
                e
            })
            .collect();
        Codeword {
            rows: self.l(),
            cols: self.s(),
            data,
        }
    }

    /// Every element of R° in index order, subject to `cap`.
    pub fn all_classes(&self, cap: u64) -> Result<Vec<ResidueClass>> {
        let size = self.size().unwrap_or(u64::MAX);
        if size > cap {
            return Err(Error::EnumerationCap { size, cap });
        }
        Ok((0..size)
            .map(|n| ResidueClass {
                ctx: self.clone(),
                coeffs: self.array_from_index(n),
            })
            .collect())
    }

    pub fn random_class<R: Rng + ?Sized>(&self, rng: &mut R) -> ResidueClass {
        let f = self.skew().random(rng, self.l() as i64 - 1, self.s() as i64 - 1);
        self.reduce(&f).expect("ordinary and in context")
    }
}

/// An element of R° in canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct ResidueClass {
    ctx: QuotientContext,
    coeffs: Codeword,
}

impl fmt::Debug for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ResidueClass({})", self.lift())
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lift())
    }
}

impl ResidueClass {
    pub fn context(&self) -> &QuotientContext {
        &self.ctx
    }

    pub fn to_array(&self) -> Codeword {
        self.coeffs.clone()
    }

    pub fn array(&self) -> &Codeword {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero(self.ctx.ring())
    }

    /// The canonical representative Σ c_ij x^i y^j.
    pub fn lift(&self) -> SkewPoly {
        let (l, s) = self.ctx.shape();
        self.ctx.skew().from_terms(
            (0..l).flat_map(|i| {
                (0..s).map(move |j| (QuasiDegree::new(i as i64, j as i64), self.coeffs[(i, j)]))
            }),
        )
    }

    fn same_ctx(&self, other: &ResidueClass) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &ResidueClass) -> Result<ResidueClass> {
        self.same_ctx(other)?;
        let ring = self.ctx.ring();
        let data = self
            .coeffs
            .as_flat()
            .iter()
            .zip(other.coeffs.as_flat())
            .map(|(&a, &b)| ring.add(a, b))
            .collect();
        Ok(ResidueClass {
            ctx: self.ctx.clone(),
            coeffs: Codeword::from_flat(self.coeffs.rows, self.coeffs.cols, data)?,
        })
    }

    /// Product in R°: reduce(lift(A) ⋆ lift(B)).
    pub fn star_mul_mod(&self, other: &ResidueClass) -> Result<ResidueClass> {
        self.same_ctx(other)?;
        self.ctx.reduce(&(&self.lift() * &other.lift()))
    }

    /// Left multiplication by an arbitrary polynomial, then reduction.
    pub fn left_mul(&self, f: &SkewPoly) -> Result<ResidueClass> {
        self.ctx.reduce(&f.try_star(&self.lift())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx(q: &str, rho: u32, theta: u32, l: usize, s: usize, l1: &str, l2: &str) -> QuotientContext {
        QuotientContext::from_spec(&ContextSpec {
            ring: RingRef::Name(q.into()),
            rho_power: rho,
            theta_power: theta,
            l,
            s,
            lambda1: l1.into(),
            lambda2: l2.into(),
        })
        .unwrap()
    }

    fn poly(c: &QuotientContext, s: &str) -> SkewPoly {
        SkewPoly::parse(c.skew(), s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let c = ctx("gf9", 1, 1, 2, 2, "2", "1");
        assert_eq!(c.reduce(&poly(&c, "x^3")).unwrap().lift(), poly(&c, "2*x"));
        let f = poly(&c, "a*x*y + 2*y + 1");
        assert_eq!(c.reduce(&f).unwrap().lift(), f);
        let c1 = ctx("gf4", 1, 1, 2, 2, "1", "1");
        assert_eq!(c1.reduce(&poly(&c1, "x^2*y^2")).unwrap().lift(), poly(&c1, "1"));
        assert!(matches!(
            c.reduce(&c.skew().monomial(c.ring().one(), -1, 0)),
            Err(Error::NotOrdinary(_))
        ));
    }

    #[test]
    fn star_mul_mod_examples() {
        let c = ctx("gf4", 1, 1, 2, 2, "1", "1");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let one = c.reduce(&c.skew().one()).unwrap();
        for _ in 0..20 {
            let a = c.random_class(&mut rng);
            assert_eq!(a.star_mul_mod(&one).unwrap(), a);
        }
        let x = c.reduce(&poly(&c, "x")).unwrap();
        assert_eq!(x.star_mul_mod(&x).unwrap().lift(), poly(&c, "1"));
        let ax = c.reduce(&poly(&c, "a*x")).unwrap();
        assert_eq!(ax.star_mul_mod(&ax).unwrap().lift(), poly(&c, "1"));
    }

    #[test]
    fn array_isomorphism() {
        let c = ctx("gf4", 1, 1, 2, 2, "1", "1");
        let ring = c.ring().clone();
        let (o, z) = (ring.one(), ring.zero());
        let arr = Codeword::from_rows(vec![vec![z, o], vec![z, z]]).unwrap();
        assert_eq!(c.from_array(&arr).unwrap().lift(), c.skew().y());
        assert!(c.from_array(&Codeword::zeros(&ring, 2, 2)).unwrap().is_zero());
        let bad = Codeword::zeros(&ring, 3, 2);
        assert_eq!(
            c.from_array(&bad).unwrap_err(),
            Error::ShapeMismatch {
                expected: (2, 2),
                got: (3, 2)
            }
        );
        for n in 0..256 {
            let m = c.array_from_index(n);
            assert_eq!(c.from_array(&m).unwrap().to_array(), m);
        }
    }

    #[test]
    fn reduce_diamond_examples() {
        let c = ctx("gf9", 1, 1, 2, 2, "2", "2");
        let small = poly(&c, "a*x*y + x + 2");
        assert_eq!(c.reduce_diamond(&small).unwrap(), small);
        assert!(c.reduce_diamond(&c.modulus_product()).unwrap().is_zero());
        let f = poly(&c, "x^2*y^2");
        let r = c.reduce_diamond(&f).unwrap();
        let (q, r2) = f.right_divide(&c.modulus_product()).unwrap();
        assert_eq!(r, r2);
        assert_eq!(&(&q * &c.modulus_product()) + &r, f);
        assert!(r.terms().all(|(d, _)| !d.geq(QuasiDegree::new(2, 2))));
    }

    #[test]
    fn context_validation() {
        let gf4 = Ring::gf(2, 2).unwrap();
        let skew = SkewRing::new(gf4.clone(), AutomorphismPair::new(1, 1));
        let one = gf4.one();
        assert!(QuotientContext::new(skew.clone(), 3, 2, one, one).is_err());
        assert!(QuotientContext::new(skew.clone(), 2, 3, one, one).is_err());
        assert!(QuotientContext::new(skew.clone(), 2, 2, gf4.generator(), one).is_err());
        assert!(QuotientContext::new(skew.clone(), 2, 2, gf4.zero(), one).is_err());
        assert!(QuotientContext::new(skew.clone(), 0, 2, one, one).is_err());
        let unchecked = QuotientContext::new_unchecked(skew, 3, 2, gf4.generator(), one).unwrap();
        assert!(!unchecked.is_checked());
    }

    #[test]
    fn context_json() {
        let json = r#"{"ring":{"kind":"gf","p":3,"m":2},"rho_power":1,"theta_power":1,"l":2,"s":2,"lambda1":"2","lambda2":"2"}"#;
        let spec: ContextSpec = serde_json::from_str(json).unwrap();
        let c = QuotientContext::from_spec(&spec).unwrap();
        assert_eq!(c.lambda1(), c.ring().from_int(2));
        let back = QuotientContext::from_spec(&c.to_spec()).unwrap();
        assert_eq!(back, c);
        let named: ContextSpec = serde_json::from_str(
            r#"{"ring":"gf4","rho_power":1,"theta_power":1,"l":2,"s":2,"lambda1":"1","lambda2":"1"}"#,
        )
        .unwrap();
        assert!(QuotientContext::from_spec(&named).is_ok());
    }
}
