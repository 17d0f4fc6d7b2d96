//! Finite coefficient rings: prime-power fields GF(p^m) in polynomial basis and
//! the modular integers Z_n, together with the Frobenius automorphism pair
//! (ρ, θ) acting on them.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of elements any exhaustive enumeration may visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 16;

/// Largest field extension degree accepted at construction.
pub const MAX_EXTENSION_DEGREE: u32 = 8;

/// Rings at or below this size get precomputed operation tables.
const TABLE_LIMIT: u64 = 256;

/// Upper bound on |R| so every element index fits comfortably in a `u32`.
const MAX_RING_SIZE: u64 = 1 << 24;

/// Description of a finite commutative coefficient ring.
///
/// For fields the modulus lists the coefficients of a monic irreducible
/// polynomial over Z_p from the constant term upwards. An empty modulus
/// selects the shipped default (see [`default_modulus`]).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RingSpec {
    Gf {
        p: u32,
        m: u32,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        modulus: Vec<u32>,
    },
    Zn {
        n: u32,
    },
}

impl RingSpec {
    pub fn gf(p: u32, m: u32) -> Self {
        RingSpec::Gf {
            p,
            m,
            modulus: Vec::new(),
        }
    }

    pub fn zn(n: u32) -> Self {
        RingSpec::Zn { n }
    }

    /// Parses the short names used on the command line: `gf4`, `gf9`,
    /// `gf16`, `z4`, `zn6`, ...
    pub fn from_name(name: &str) -> Result<Self> {
        let lower = name.trim().to_ascii_lowercase();
        let bad = || Error::InvalidRing(format!("unrecognised ring name `{name}`"));
        if let Some(q) = lower.strip_prefix("gf") {
            let q: u64 = q.parse().map_err(|_| bad())?;
            let (p, m) =
                prime_power(q).ok_or_else(|| Error::InvalidRing(format!("{q} is not a prime power")))?;
            Ok(RingSpec::gf(p, m))
        } else if let Some(n) = lower.strip_prefix("zn").or_else(|| lower.strip_prefix('z')) {
            let n: u32 = n.parse().map_err(|_| bad())?;
            Ok(RingSpec::zn(n))
        } else {
            Err(bad())
        }
    }
}

/// Shipped default moduli. Each is the Conway polynomial for its field, so the
/// class `a` of the indeterminate generates the multiplicative group.
const DEFAULT_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (7, 2, &[3, 6, 1]),
];

/// The modulus used when a field spec leaves it empty.
///
/// For m = 1 this is `t - g` with g the least primitive root mod p; for the
/// small fields in [`DEFAULT_MODULI`] it is the tabulated Conway polynomial;
/// otherwise the first monic irreducible (in lexicographic order of
/// coefficient vectors) whose root is primitive.
pub fn default_modulus(p: u32, m: u32) -> Result<Vec<u32>> {
    if !is_prime(p) {
        return Err(Error::InvalidRing(format!("{p} is not prime")));
    }
    if m == 0 || m > MAX_EXTENSION_DEGREE {
        return Err(Error::InvalidRing(format!(
            "extension degree {m} outside 1..={MAX_EXTENSION_DEGREE}"
        )));
    }
    if let Some((_, _, f)) = DEFAULT_MODULI.iter().find(|(pp, mm, _)| *pp == p && *mm == m) {
        return Ok(f.to_vec());
    }
    if m == 1 {
        let g = (1..p.max(2))
            .find(|&g| multiplicative_order_mod(g as u64, p as u64) == (p - 1) as u64)
            .unwrap_or(1);
        return Ok(vec![(p - g % p) % p, 1]);
    }
    let q = (p as u64).pow(m);
    let mut coeffs = vec![0u32; m as usize + 1];
    coeffs[m as usize] = 1;
    for low in 0..(p as u64).pow(m) {
        let mut v = low;
        for c in coeffs.iter_mut().take(m as usize) {
            *c = (v % p as u64) as u32;
            v /= p as u64;
        }
        if coeffs[0] == 0 || !is_irreducible(&coeffs, p) {
            continue;
        }
        let data = RingData::field(p, m, coeffs.clone(), q)?;
        if data.generator_is_primitive() {
            return Ok(coeffs);
        }
    }
    Err(Error::InvalidRing(format!(
        "no primitive modulus found for GF({p}^{m})"
    )))
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut m = 0u32;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        m += 1;
    }
    (r == 1 && p <= u32::MAX as u64).then_some((p as u32, m))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn multiplicative_order_mod(g: u64, p: u64) -> u64 {
    if p <= 1 || g.is_multiple_of(p) {
        return 0;
    }
    let mut x = g % p;
    let mut k = 1;
    while x != 1 {
        x = x * g % p;
        k += 1;
    }
    k
}

// Dense polynomials over Z_p, coefficients from the constant term upwards.

fn poly_trim(f: &mut Vec<u32>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r = f.to_vec();
    poly_trim(&mut r);
    let mut g = g.to_vec();
    poly_trim(&mut g);
    let dg = g.len() - 1;
    let lead_inv = mod_inverse(g[dg] as i64, p as i64).expect("nonzero mod prime") as u64;
    let p64 = p as u64;
    while r.len() > dg {
        let dr = r.len() - 1;
        let factor = r[dr] as u64 * lead_inv % p64;
        for (k, &gk) in g.iter().enumerate() {
            let idx = dr - dg + k;
            let sub = factor * gk as u64 % p64;
            r[idx] = ((r[idx] as u64 + p64 - sub) % p64) as u32;
        }
        poly_trim(&mut r);
    }
    r
}

/// Exhaustive irreducibility test: no monic factor of degree 1..=deg/2.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        let mut cand = vec![0u32; d + 1];
        cand[d] = 1;
        for low in 0..count {
            let mut v = low;
            for c in cand.iter_mut().take(d) {
                *c = (v % p as u64) as u32;
                v /= p as u64;
            }
            if poly_rem(f, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn mod_inverse(a: i64, n: i64) -> Option<i64> {
    let a = a.rem_euclid(n);
    let eg = a.extended_gcd(&n);
    (eg.gcd == 1).then(|| eg.x.rem_euclid(n))
}

fn fingerprint(spec: &RingSpec) -> u32 {
    // FNV-1a over a canonical byte encoding of the spec.
    let mut bytes = Vec::new();
    match spec {
        RingSpec::Gf { p, m, modulus } => {
            bytes.push(1u8);
            bytes.extend_from_slice(&p.to_le_bytes());
            bytes.extend_from_slice(&m.to_le_bytes());
            for c in modulus {
                bytes.extend_from_slice(&c.to_le_bytes());
            }
        }
        RingSpec::Zn { n } => {
            bytes.push(2u8);
            bytes.extend_from_slice(&n.to_le_bytes());
        }
    }
    let mut h: u32 = 0x811c_9dc5;
    for b in bytes {
        h ^= b as u32;
        h = h.wrapping_mul(0x0100_0193);
    }
    h
}

/// An element of a [`Ring`].
///
/// Field elements are stored as the base-p integer whose digits are the
/// coefficients in the polynomial basis 1, a, a², ...; residues mod n are
/// stored directly. The tag identifies the owning ring, so mixing elements
/// of different rings is detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    tag: u32,
    value: u32,
}

impl Element {
    /// Index of this element in the ring's enumeration order.
    pub fn index(self) -> u32 {
        self.value
    }
}

#[derive(Debug)]
enum Kind {
    Field { p: u32, m: u32, modulus: Vec<u32> },
    Modular { n: u32 },
}

#[derive(Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<Option<u32>>,
}

#[derive(Debug)]
struct RingData {
    spec: RingSpec,
    tag: u32,
    size: u64,
    kind: Kind,
    tables: Option<Tables>,
    /// `frobenius[e][v]` is the image of element v under a ↦ a^(p^e).
    frobenius: Option<Vec<Vec<u32>>>,
}

impl RingData {
    fn field(p: u32, m: u32, modulus: Vec<u32>, size: u64) -> Result<RingData> {
        let spec = RingSpec::Gf {
            p,
            m,
            modulus: modulus.clone(),
        };
        Ok(RingData {
            tag: fingerprint(&spec),
            spec,
            size,
            kind: Kind::Field { p, m, modulus },
            tables: None,
            frobenius: None,
        })
    }

    fn digits(&self, v: u32) -> Vec<u32> {
        match &self.kind {
            Kind::Field { p, m, .. } => {
                let mut v = v;
                (0..*m)
                    .map(|_| {
                        let d = v % p;
                        v /= p;
                        d
                    })
                    .collect()
            }
            Kind::Modular { .. } => vec![v],
        }
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        match &self.kind {
            Kind::Field { p, .. } => d.iter().rev().fold(0u32, |acc, &c| acc * p + c),
            Kind::Modular { .. } => d[0],
        }
    }

    fn raw_add(&self, a: u32, b: u32) -> u32 {
        if let Some(t) = &self.tables {
            return t.add[(a as u64 * self.size + b as u64) as usize];
        }
        match &self.kind {
            Kind::Field { p, .. } => {
                let (da, db) = (self.digits(a), self.digits(b));
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                self.undigits(&sum)
            }
            Kind::Modular { n } => ((a as u64 + b as u64) % *n as u64) as u32,
        }
    }

    fn raw_neg(&self, a: u32) -> u32 {
        if let Some(t) = &self.tables {
            return t.neg[a as usize];
        }
        match &self.kind {
            Kind::Field { p, .. } => {
                let d: Vec<u32> = self.digits(a).iter().map(|x| (p - x) % p).collect();
                self.undigits(&d)
            }
            Kind::Modular { n } => (n - a) % n,
        }
    }

    fn raw_mul(&self, a: u32, b: u32) -> u32 {
        if let Some(t) = &self.tables {
            return t.mul[(a as u64 * self.size + b as u64) as usize];
        }
        match &self.kind {
            Kind::Field { p, m, modulus } => {
                let (da, db) = (self.digits(a), self.digits(b));
                let mut prod = vec![0u32; 2 * *m as usize];
                let p64 = *p as u64;
                for (i, &x) in da.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p64) as u32;
                    }
                }
                let mut r = poly_rem(&prod, modulus, *p);
                r.resize(*m as usize, 0);
                self.undigits(&r)
            }
            Kind::Modular { n } => ((a as u64 * b as u64) % *n as u64) as u32,
        }
    }

    fn raw_pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = self.one_value();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.raw_mul(acc, base);
            }
            base = self.raw_mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn raw_inverse(&self, a: u32) -> Option<u32> {
        if let Some(t) = &self.tables {
            return t.inv[a as usize];
        }
        match &self.kind {
            Kind::Field { .. } => (a != 0).then(|| self.raw_pow(a, self.size - 2)),
            Kind::Modular { n } => mod_inverse(a as i64, *n as i64).map(|x| x as u32),
        }
    }

    fn one_value(&self) -> u32 {
        match &self.kind {
            Kind::Modular { n: 1 } => 0,
            _ => 1,
        }
    }

    /// a ↦ a^(p^e) with e already reduced into 0..m.
    fn raw_frobenius(&self, a: u32, e: u32) -> u32 {
        if e == 0 {
            return a;
        }
        if let Some(f) = &self.frobenius {
            return f[e as usize][a as usize];
        }
        match &self.kind {
            Kind::Field { p, .. } => {
                let mut x = a;
                for _ in 0..e {
                    x = self.raw_pow(x, *p as u64);
                }
                x
            }
            Kind::Modular { .. } => a,
        }
    }

    fn generator_is_primitive(&self) -> bool {
        let order = self.size - 1;
        let a = match &self.kind {
            Kind::Field { p, m, .. } if *m == 1 => {
                let Kind::Field { modulus, .. } = &self.kind else {
                    unreachable!()
                };
                (p - modulus[0]) % p
            }
            Kind::Field { p, .. } => *p,
            Kind::Modular { .. } => return false,
        };
        if a == 0 {
            return false;
        }
        prime_factors(order)
            .into_iter()
            .all(|r| self.raw_pow(a, order / r) != 1)
    }

    fn build_tables(&mut self) {
        if self.size > TABLE_LIMIT {
            if let Kind::Field { m, .. } = self.kind {
                if self.size <= 1 << 12 {
                    let f = (0..m)
                        .map(|e| (0..self.size as u32).map(|v| self.raw_frobenius(v, e)).collect())
                        .collect();
                    self.frobenius = Some(f);
                }
            }
            return;
        }
        let q = self.size as u32;
        let mut add = Vec::with_capacity((q * q) as usize);
        let mut mul = Vec::with_capacity((q * q) as usize);
        for a in 0..q {
            for b in 0..q {
                add.push(self.raw_add(a, b));
                mul.push(self.raw_mul(a, b));
            }
        }
        let neg = (0..q).map(|a| self.raw_neg(a)).collect();
        let one = self.one_value();
        let inv = (0..q)
            .map(|a| (0..q).find(|&b| mul[(a * q + b) as usize] == one))
            .collect();
        self.tables = Some(Tables { add, mul, neg, inv });
        if let Kind::Field { m, .. } = self.kind {
            let f = (0..m)
                .map(|e| (0..q).map(|v| self.raw_frobenius(v, e)).collect())
                .collect();
            self.frobenius = Some(f);
        }
    }
}

/// Handle to a finite coefficient ring. Cloning is cheap.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.name())
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Ring {}

impl Ring {
    /// Validates the spec and builds the ring. Field moduli are checked for
    /// monicity, degree and irreducibility.
    pub fn new(spec: RingSpec) -> Result<Ring> {
        let mut data = match spec {
            RingSpec::Gf { p, m, modulus } => {
                if !is_prime(p) {
                    return Err(Error::InvalidRing(format!("{p} is not prime")));
                }
                if m == 0 || m > MAX_EXTENSION_DEGREE {
                    return Err(Error::InvalidRing(format!(
                        "extension degree {m} outside 1..={MAX_EXTENSION_DEGREE}"
                    )));
                }
                let size = (p as u64)
                    .checked_pow(m)
                    .filter(|&q| q <= MAX_RING_SIZE)
                    .ok_or_else(|| Error::InvalidRing(format!("GF({p}^{m}) is too large")))?;
                let modulus = if modulus.is_empty() {
                    default_modulus(p, m)?
                } else {
                    modulus
                };
                if modulus.len() != m as usize + 1 {
                    return Err(Error::InvalidRing(format!(
                        "modulus must have {} coefficients, got {}",
                        m + 1,
                        modulus.len()
                    )));
                }
                if let Some(c) = modulus.iter().find(|&&c| c >= p) {
                    return Err(Error::InvalidRing(format!(
                        "modulus coefficient {c} is not reduced mod {p}"
                    )));
                }
                if modulus[m as usize] != 1 {
                    return Err(Error::InvalidRing("modulus must be monic".into()));
                }
                if !is_irreducible(&modulus, p) {
                    return Err(Error::InvalidRing(format!(
                        "modulus {modulus:?} is reducible over Z_{p}"
                    )));
                }
                RingData::field(p, m, modulus, size)?
            }
            RingSpec::Zn { n } => {
                if n < 2 {
                    return Err(Error::InvalidRing(format!("modulus n = {n} must be at least 2")));
                }
                if n as u64 > MAX_RING_SIZE {
                    return Err(Error::InvalidRing(format!("Z_{n} is too large")));
                }
                let spec = RingSpec::Zn { n };
                RingData {
                    tag: fingerprint(&spec),
                    spec,
                    size: n as u64,
                    kind: Kind::Modular { n },
                    tables: None,
                    frobenius: None,
                }
            }
        };
        data.build_tables();
        Ok(Ring(Arc::new(data)))
    }

    pub fn gf(p: u32, m: u32) -> Result<Ring> {
        Ring::new(RingSpec::gf(p, m))
    }

    pub fn zn(n: u32) -> Result<Ring> {
        Ring::new(RingSpec::zn(n))
    }

    pub fn from_name(name: &str) -> Result<Ring> {
        Ring::new(RingSpec::from_name(name)?)
    }

    /// The canonical spec, with the modulus filled in.
    pub fn spec(&self) -> &RingSpec {
        &self.0.spec
    }

    /// Short human-readable name such as `GF(9)` or `Z_4`.
    pub fn name(&self) -> String {
        match &self.0.kind {
            Kind::Field { .. } => format!("GF({})", self.0.size),
            Kind::Modular { n } => format!("Z_{n}"),
        }
    }

    pub fn size(&self) -> u64 {
        self.0.size
    }

    pub fn is_field(&self) -> bool {
        matches!(self.0.kind, Kind::Field { .. })
    }

    pub fn characteristic(&self) -> u32 {
        match &self.0.kind {
            Kind::Field { p, .. } => *p,
            Kind::Modular { n } => *n,
        }
    }

    /// Extension degree m over the prime field; 1 for Z_n.
    pub fn degree(&self) -> u32 {
        match &self.0.kind {
            Kind::Field { m, .. } => *m,
            Kind::Modular { .. } => 1,
        }
    }

    fn wrap(&self, value: u32) -> Element {
        Element {
            tag: self.0.tag,
            value,
        }
    }

    #[inline]
    fn check(&self, a: Element) {
        assert_eq!(a.tag, self.0.tag, "element does not belong to {}", self.name());
    }

    pub fn owns(&self, a: Element) -> bool {
        a.tag == self.0.tag && (a.value as u64) < self.0.size
    }

    pub fn zero(&self) -> Element {
        self.wrap(0)
    }

    pub fn one(&self) -> Element {
        self.wrap(self.0.one_value())
    }

    /// The class `a` of the indeterminate (field case) or 1 (Z_n).
    pub fn generator(&self) -> Element {
        match &self.0.kind {
            Kind::Field { p, m, modulus } if *m == 1 => self.wrap((p - modulus[0]) % p),
            Kind::Field { p, .. } => self.wrap(*p),
            Kind::Modular { .. } => self.one(),
        }
    }

    /// Image of an integer: the prime-subfield element for fields, the
    /// residue for Z_n.
    pub fn from_int(&self, k: i64) -> Element {
        let c = self.characteristic() as i64;
        self.wrap(k.rem_euclid(c) as u32)
    }

    /// Element with the given enumeration index.
    pub fn element(&self, index: u64) -> Result<Element> {
        if index >= self.0.size {
            return Err(Error::Usage(format!(
                "index {index} out of range for {}",
                self.name()
            )));
        }
        Ok(self.wrap(index as u32))
    }

    /// Field element from polynomial-basis coefficients (constant term first).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Element> {
        match &self.0.kind {
            Kind::Field { p, m, .. } => {
                if coeffs.len() > *m as usize {
                    return Err(Error::Parse(format!(
                        "coefficient vector longer than extension degree {m}"
                    )));
                }
                let mut d = coeffs.iter().map(|c| c % p).collect::<Vec<_>>();
                d.resize(*m as usize, 0);
                Ok(self.wrap(self.0.undigits(&d)))
            }
            Kind::Modular { n } => match coeffs {
                [c] => Ok(self.wrap(c % n)),
                _ => Err(Error::Parse("Z_n elements are single residues".into())),
            },
        }
    }

    /// Polynomial-basis coefficients of a field element; the residue for Z_n.
    pub fn coeffs(&self, a: Element) -> Vec<u32> {
        self.check(a);
        self.0.digits(a.value)
    }

    pub fn is_zero(&self, a: Element) -> bool {
        self.check(a);
        a.value == 0
    }

    pub fn is_one(&self, a: Element) -> bool {
        self.check(a);
        a.value == self.0.one_value()
    }

    pub fn add(&self, a: Element, b: Element) -> Element {
        self.check(a);
        self.check(b);
        self.wrap(self.0.raw_add(a.value, b.value))
    }

    pub fn neg(&self, a: Element) -> Element {
        self.check(a);
        self.wrap(self.0.raw_neg(a.value))
    }

    pub fn sub(&self, a: Element, b: Element) -> Element {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.check(a);
        self.check(b);
        self.wrap(self.0.raw_mul(a.value, b.value))
    }

    pub fn pow(&self, a: Element, e: u64) -> Element {
        self.check(a);
        self.wrap(self.0.raw_pow(a.value, e))
    }

    fn try_check(&self, a: Element) -> Result<()> {
        if self.owns(a) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn try_add(&self, a: Element, b: Element) -> Result<Element> {
        self.try_check(a)?;
        self.try_check(b)?;
        Ok(self.add(a, b))
    }

    pub fn try_mul(&self, a: Element, b: Element) -> Result<Element> {
        self.try_check(a)?;
        self.try_check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn try_neg(&self, a: Element) -> Result<Element> {
        self.try_check(a)?;
        Ok(self.neg(a))
    }

    pub fn inverse(&self, a: Element) -> Result<Element> {
        self.try_check(a)?;
        self.0
            .raw_inverse(a.value)
            .map(|v| self.wrap(v))
            .ok_or_else(|| Error::NotAUnit(self.format_element(a)))
    }

    pub fn is_unit(&self, a: Element) -> bool {
        self.check(a);
        self.0.raw_inverse(a.value).is_some()
    }

    /// a ↦ a^(p^e) for any integer e (reduced mod m); identity on Z_n.
    pub fn frobenius(&self, a: Element, e: i64) -> Element {
        self.check(a);
        match &self.0.kind {
            Kind::Field { m, .. } => {
                let e = e.rem_euclid(*m as i64) as u32;
                self.wrap(self.0.raw_frobenius(a.value, e))
            }
            Kind::Modular { .. } => a,
        }
    }

    /// Every element exactly once, in index order, subject to the default cap.
    pub fn elements(&self) -> Result<Vec<Element>> {
        self.elements_with_cap(DEFAULT_ENUMERATION_CAP)
    }

    pub fn elements_with_cap(&self, cap: u64) -> Result<Vec<Element>> {
        if self.0.size > cap {
            return Err(Error::EnumerationCap {
                size: self.0.size,
                cap,
            });
        }
        Ok((0..self.0.size as u32).map(|v| self.wrap(v)).collect())
    }

    pub fn units(&self) -> Result<Vec<Element>> {
        Ok(self
            .elements()?
            .into_iter()
            .filter(|&a| self.is_unit(a))
            .collect())
    }
}

/// A word ρ^rho θ^theta in the two automorphisms; negative powers denote
/// inverses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Automorphism {
    pub rho: i64,
    pub theta: i64,
}

impl Automorphism {
    pub const IDENTITY: Automorphism = Automorphism { rho: 0, theta: 0 };
    pub const RHO: Automorphism = Automorphism { rho: 1, theta: 0 };
    pub const THETA: Automorphism = Automorphism { rho: 0, theta: 1 };
    pub const RHO_THETA: Automorphism = Automorphism { rho: 1, theta: 1 };

    pub fn new(rho: i64, theta: i64) -> Self {
        Automorphism { rho, theta }
    }

    pub fn inverse(self) -> Self {
        Automorphism {
            rho: -self.rho,
            theta: -self.theta,
        }
    }

    pub fn compose(self, other: Automorphism) -> Self {
        Automorphism {
            rho: self.rho + other.rho,
            theta: self.theta + other.theta,
        }
    }
}

/// The pair (ρ, θ) as powers of the Frobenius a ↦ a^p. Both are identity
/// on Z_n regardless of the stored powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AutomorphismPair {
    pub rho_power: u32,
    pub theta_power: u32,
}

impl AutomorphismPair {
    pub fn new(rho_power: u32, theta_power: u32) -> Self {
        AutomorphismPair {
            rho_power,
            theta_power,
        }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    /// Forces the identity pair on Z_n and reduces powers modulo m on fields.
    pub fn normalized(self, ring: &Ring) -> Self {
        if ring.is_field() {
            let m = ring.degree();
            AutomorphismPair::new(self.rho_power % m, self.theta_power % m)
        } else {
            AutomorphismPair::identity()
        }
    }

    /// Frobenius exponent e with auto = (a ↦ a^p)^e.
    pub fn frobenius_exponent(&self, auto: Automorphism) -> i64 {
        auto.rho * self.rho_power as i64 + auto.theta * self.theta_power as i64
    }

    pub fn apply(&self, ring: &Ring, auto: Automorphism, a: Element) -> Element {
        ring.frobenius(a, self.frobenius_exponent(auto))
    }

    /// ρ^i θ^j applied to a.
    #[inline]
    pub fn apply_powers(&self, ring: &Ring, i: i64, j: i64, a: Element) -> Element {
        ring.frobenius(a, i * self.rho_power as i64 + j * self.theta_power as i64)
    }

    /// Least d ≥ 1 with auto^d = id.
    pub fn order(&self, ring: &Ring, auto: Automorphism) -> u32 {
        if !ring.is_field() {
            return 1;
        }
        let m = ring.degree() as i64;
        let e = self.frobenius_exponent(auto).rem_euclid(m);
        (m / e.gcd(&m)) as u32
    }

    pub fn is_fixed(&self, ring: &Ring, a: Element, autos: &[Automorphism]) -> bool {
        autos.iter().all(|&t| self.apply(ring, t, a) == a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> Ring {
        Ring::gf(2, 2).unwrap()
    }

    #[test]
    fn gf4_generator_squares_to_a_plus_one() {
        let r = gf4();
        let a = r.generator();
        let a_plus_1 = r.add(a, r.one());
        assert_eq!(r.mul(a, a), a_plus_1);
    }

    #[test]
    fn z4_arithmetic() {
        let r = Ring::zn(4).unwrap();
        assert_eq!(r.mul(r.from_int(2), r.from_int(2)), r.zero());
        assert_eq!(r.inverse(r.from_int(3)).unwrap(), r.from_int(3));
        assert!(matches!(r.inverse(r.from_int(2)), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn additive_inverse_everywhere() {
        for r in [gf4(), Ring::gf(3, 2).unwrap(), Ring::zn(6).unwrap()] {
            for x in r.elements().unwrap() {
                assert_eq!(r.add(x, r.neg(x)), r.zero());
            }
        }
    }

    #[test]
    fn gf4_inverse_of_generator() {
        let r = gf4();
        let a = r.generator();
        assert_eq!(r.inverse(a).unwrap(), r.add(a, r.one()));
        assert!(r.inverse(r.zero()).is_err());
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let r4 = gf4();
        let r9 = Ring::gf(3, 2).unwrap();
        assert_eq!(r4.try_add(r4.one(), r9.one()), Err(Error::RingMismatch));
        assert_eq!(r4.try_mul(r9.one(), r4.one()), Err(Error::RingMismatch));
        assert_eq!(r4.try_neg(r9.one()), Err(Error::RingMismatch));
    }

    #[test]
    fn frobenius_examples() {
        let r = gf4();
        let pair = AutomorphismPair::new(1, 1);
        let a = r.generator();
        assert_eq!(pair.apply(&r, Automorphism::RHO, a), r.add(a, r.one()));
        assert_eq!(pair.apply(&r, Automorphism::IDENTITY, a), a);
        let r9 = Ring::gf(3, 2).unwrap();
        for x in r9.elements().unwrap() {
            assert_eq!(pair.apply(&r9, Automorphism::new(2, 0), x), x);
        }
    }

    #[test]
    fn automorphism_orders() {
        let pair = AutomorphismPair::new(1, 0);
        assert_eq!(pair.order(&gf4(), Automorphism::RHO), 2);
        assert_eq!(pair.order(&gf4(), Automorphism::THETA), 1);
        let r64 = Ring::gf(2, 6).unwrap();
        assert_eq!(AutomorphismPair::new(2, 0).order(&r64, Automorphism::RHO), 3);
        assert_eq!(pair.order(&Ring::zn(6).unwrap(), Automorphism::RHO), 1);
    }

    #[test]
    fn fixed_elements() {
        let pair = AutomorphismPair::new(1, 1);
        let r = gf4();
        assert!(!pair.is_fixed(&r, r.generator(), &[Automorphism::RHO]));
        assert!(pair.is_fixed(&r, r.one(), &[Automorphism::RHO, Automorphism::THETA]));
        let r9 = Ring::gf(3, 2).unwrap();
        assert!(pair.is_fixed(&r9, r9.from_int(2), &[Automorphism::RHO]));
    }

    #[test]
    fn enumeration() {
        assert_eq!(gf4().elements().unwrap().len(), 4);
        let z4 = Ring::zn(4).unwrap();
        let idx: Vec<u32> = z4.elements().unwrap().iter().map(|e| e.index()).collect();
        assert_eq!(idx, vec![0, 1, 2, 3]);
        assert_eq!(Ring::gf(3, 2).unwrap().elements().unwrap().len(), 9);
        let big = Ring::gf(2, 8).unwrap();
        assert!(matches!(
            big.elements_with_cap(100),
            Err(Error::EnumerationCap { size: 256, cap: 100 })
        ));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(Ring::new(RingSpec::Gf {
            p: 2,
            m: 2,
            modulus: vec![1, 0, 1]
        })
        .is_err());
        assert!(Ring::new(RingSpec::Gf {
            p: 4,
            m: 1,
            modulus: vec![]
        })
        .is_err());
        assert!(Ring::new(RingSpec::Gf {
            p: 2,
            m: 2,
            modulus: vec![1, 1, 0]
        })
        .is_err());
        assert!(Ring::zn(1).is_err());
        assert!(Ring::gf(2, 9).is_err());
    }

    #[test]
    fn default_moduli_are_irreducible_and_primitive() {
        for (p, m) in [
            (2, 1),
            (3, 1),
            (5, 1),
            (2, 2),
            (2, 3),
            (2, 4),
            (3, 2),
            (3, 3),
            (5, 2),
            (11, 2),
            (2, 8),
        ] {
            let r = Ring::gf(p, m).unwrap();
            let g = r.generator();
            let q = r.size();
            let mut x = g;
            let mut order = 1;
            while !r.is_one(x) {
                x = r.mul(x, g);
                order += 1;
            }
            assert_eq!(order, q - 1, "GF({p}^{m})");
        }
    }

    #[test]
    fn spec_names_and_json() {
        assert_eq!(RingSpec::from_name("gf9").unwrap(), RingSpec::gf(3, 2));
        assert_eq!(RingSpec::from_name("z4").unwrap(), RingSpec::zn(4));
        assert_eq!(RingSpec::from_name("zn6").unwrap(), RingSpec::zn(6));
        assert!(RingSpec::from_name("gf6").is_err());
        let spec: RingSpec = serde_json::from_str(r#"{"kind":"gf","p":2,"m":2,"modulus":[1,1,1]}"#).unwrap();
        assert_eq!(Ring::new(spec).unwrap(), gf4());
        let zn: RingSpec = serde_json::from_str(r#"{"kind":"zn","n":4}"#).unwrap();
        assert_eq!(zn, RingSpec::zn(4));
        assert_eq!(
            serde_json::to_string(gf4().spec()).unwrap(),
            r#"{"kind":"gf","p":2,"m":2,"modulus":[1,1,1]}"#
        );
    }

    #[test]
    fn untabled_field_matches_definition() {
        // GF(2^10) is past the table limit; check a few identities directly.
        let r = Ring::new(RingSpec::Gf {
            p: 2,
            m: 8,
            modulus: vec![1, 0, 1, 1, 1, 0, 0, 0, 1],
        })
        .unwrap();
        let a = r.generator();
        let inv = r.inverse(a).unwrap();
        assert!(r.is_one(r.mul(a, inv)));
        assert_eq!(r.frobenius(a, 8), a);
        let r3 = Ring::gf(3, 6).unwrap();
        let b = r3.add(r3.generator(), r3.one());
        assert!(r3.is_one(r3.mul(b, r3.inverse(b).unwrap())));
        assert_eq!(r3.frobenius(b, 1), r3.pow(b, 3));
        assert_eq!(r3.frobenius(r3.frobenius(b, 5), 1), b);
    }
}
