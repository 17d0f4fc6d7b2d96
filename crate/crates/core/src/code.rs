//! 2-D skew (λ1,λ2)-constacyclic codes over finite fields: the two skew
//! shifts, codes generated by a monic right divisor of
//! (x^l − λ1) ⋆ (y^s − λ2), membership tests and the generator search.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quotient::{Codeword, QuotientContext, ResidueClass};
use crate::ring::{Automorphism, Element, DEFAULT_ENUMERATION_CAP};
use crate::skew_poly::{QuasiDegree, SkewPoly, SkewRing};

/// Default number of candidate divisibility checks the generator search may
/// spend per context.
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

/// Column skew shift with an explicit constant: row i of the result is ρ of
/// row i−1, and row 0 is λ·ρ(last row).
pub fn column_shift_with(skew: &SkewRing, lambda: Element, c: &Codeword) -> Codeword {
    let ring = skew.ring();
    let (l, s) = c.shape();
    let mut out = Codeword::zeros(ring, l, s);
    for i in 0..l {
        for j in 0..s {
            let v = if i == 0 {
                ring.mul(lambda, skew.apply(Automorphism::RHO, c[(l - 1, j)]))
            } else {
                skew.apply(Automorphism::RHO, c[(i - 1, j)])
            };
            out[(i, j)] = v;
        }
    }
    out
}

/// Row skew shift with an explicit constant: column j of the result is θ of
/// column j−1, and column 0 is λ·θ(last column).
pub fn row_shift_with(skew: &SkewRing, lambda: Element, c: &Codeword) -> Codeword {
    let ring = skew.ring();
    let (l, s) = c.shape();
    let mut out = Codeword::zeros(ring, l, s);
    for i in 0..l {
        for j in 0..s {
            let v = if j == 0 {
                ring.mul(lambda, skew.apply(Automorphism::THETA, c[(i, s - 1)]))
            } else {
                skew.apply(Automorphism::THETA, c[(i, j - 1)])
            };
            out[(i, j)] = v;
        }
    }
    out
}

pub fn column_shift(ctx: &QuotientContext, c: &Codeword) -> Result<Codeword> {
    ctx.check_shape(c)?;
    Ok(column_shift_with(ctx.skew(), ctx.lambda1(), c))
}

pub fn row_shift(ctx: &QuotientContext, c: &Codeword) -> Result<Codeword> {
    ctx.check_shape(c)?;
    Ok(row_shift_with(ctx.skew(), ctx.lambda2(), c))
}

fn require_field(ctx: &QuotientContext) -> Result<()> {
    if ctx.ring().is_field() {
        Ok(())
    } else {
        Err(Error::NotApplicable(format!(
            "codes are only supported over fields, not {}",
            ctx.ring().name()
        )))
    }
}

/// Matrix whose rows are the given arrays flattened row-major.
pub fn arrays_to_matrix(ctx: &QuotientContext, arrays: &[Codeword]) -> Result<Matrix> {
    for a in arrays {
        ctx.check_shape(a)?;
    }
    Matrix::from_rows(
        ctx.ring(),
        ctx.l() * ctx.s(),
        arrays.iter().map(|a| a.as_flat().to_vec()).collect(),
    )
}

pub fn row_to_array(ctx: &QuotientContext, row: &[Element]) -> Codeword {
    Codeword::from_flat(ctx.l(), ctx.s(), row.to_vec()).expect("row length l·s")
}

/// Whether the span of `spanning_set` is closed under both skew shifts,
/// i.e. is a left submodule of R°. Checking the images of a basis suffices
/// because each shift is additive and semilinear.
pub fn is_2d_skew_constacyclic(ctx: &QuotientContext, spanning_set: &[Codeword]) -> Result<bool> {
    require_field(ctx)?;
    let m = arrays_to_matrix(ctx, spanning_set)?;
    span_closed_under(ctx, &m, ctx.lambda1(), ctx.lambda2())
}

/// Closure of a row space under the column shift with `lambda1` and the row
/// shift with `lambda2`.
pub fn span_closed_under(
    ctx: &QuotientContext,
    span: &Matrix,
    lambda1: Element,
    lambda2: Element,
) -> Result<bool> {
    let basis = span.row_space_basis()?;
    for row in basis.rows() {
        let c = row_to_array(ctx, row);
        let col = column_shift_with(ctx.skew(), lambda1, &c);
        let rw = row_shift_with(ctx.skew(), lambda2, &c);
        if !basis.row_space_contains(col.as_flat())? || !basis.row_space_contains(rw.as_flat())? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Row space spanned by the reductions of x^i y^j ⋆ g for all i < l, j < s:
/// the left ideal generated by g in R°.
pub fn left_ideal_span(ctx: &QuotientContext, g: &SkewPoly) -> Result<Matrix> {
    let skew = ctx.skew();
    let one = ctx.ring().one();
    let mut rows = Vec::with_capacity(ctx.l() * ctx.s());
    for j in 0..ctx.s() {
        for i in 0..ctx.l() {
            let m = skew.monomial(one, i as i64, j as i64);
            rows.push(ctx.reduce(&(&m * g))?.to_array());
        }
    }
    arrays_to_matrix(ctx, &rows)
}

/// A code generated by a monic right divisor g of (x^l − λ1) ⋆ (y^s − λ2).
#[derive(Debug, Clone)]
pub struct Code {
    ctx: QuotientContext,
    generator: SkewPoly,
    cofactor: SkewPoly,
    k: usize,
    t: usize,
    basis: Vec<ResidueClass>,
    gen_matrix: Matrix,
}

impl Code {
    /// Builds the code generated by g: its cofactor h with
    /// h ⋆ g = (x^l−λ1)⋆(y^s−λ2), the basis {x^i y^j ⋆ g : i < k, j < t}
    /// (j outer, i inner) and the generator matrix whose rows are those basis
    /// words flattened row-major.
    ///
    /// Some right divisors are not of minimal degree in the left ideal they
    /// generate; the ideal is then larger than the span of the basis and
    /// `NotMinimalGenerator` is returned. [`Code::from_divisor`] skips that
    /// check.
    pub fn build(ctx: &QuotientContext, g: &SkewPoly) -> Result<Code> {
        let code = Code::from_divisor(ctx, g)?;
        if code.is_left_ideal()? {
            return Ok(code);
        }
        let ideal = left_ideal_span(ctx, g)?;
        let rows: Vec<Codeword> = ideal.rows().map(|r| row_to_array(ctx, r)).collect();
        let minimal = match minimal_degree_generator(ctx, &rows) {
            Ok(MinimalGenerator {
                generator: Some(m), ..
            }) => m.to_string(),
            _ => "unknown".to_string(),
        };
        Err(Error::NotMinimalGenerator {
            generator: g.to_string(),
            ideal_dim: ideal.rank()?,
            expected_dim: code.dimension(),
            minimal,
        })
    }

    /// The span of {x^i y^j ⋆ g : i < k, j < t} for any monic right divisor g
    /// of the modulus, whether or not that span is closed under the shifts.
    pub fn from_divisor(ctx: &QuotientContext, g: &SkewPoly) -> Result<Code> {
        require_field(ctx)?;
        if g.context() != ctx.skew() {
            return Err(Error::ContextMismatch);
        }
        if !g.is_monic() {
            return Err(Error::NonMonicDivisor);
        }
        if !g.is_ordinary() {
            return Err(Error::NotOrdinary(g.to_string()));
        }
        let d = g.quasi_degree()?;
        let (l, s) = (ctx.l() as i64, ctx.s() as i64);
        if !QuasiDegree::new(l, s).geq(d) {
            return Err(Error::NotAGenerator {
                generator: g.to_string(),
                remainder: format!("quasi-degree {d} exceeds ({l},{s})"),
            });
        }
        let (h, r) = ctx.modulus_product().right_divide(g)?;
        if !r.is_zero() {
            return Err(Error::NotAGenerator {
                generator: g.to_string(),
                remainder: r.to_string(),
            });
        }
        let k = (l - d.i) as usize;
        let t = (s - d.j) as usize;
        let one = ctx.ring().one();
        let mut basis = Vec::with_capacity(k * t);
        for j in 0..t {
            for i in 0..k {
                let m = ctx.skew().monomial(one, i as i64, j as i64);
                basis.push(ctx.reduce(&(&m * g))?);
            }
        }
        let arrays: Vec<Codeword> = basis.iter().map(ResidueClass::to_array).collect();
        let gen_matrix = arrays_to_matrix(ctx, &arrays)?;
        Ok(Code {
            ctx: ctx.clone(),
            generator: g.clone(),
            cofactor: h,
            k,
            t,
            basis,
            gen_matrix,
        })
    }

    pub fn context(&self) -> &QuotientContext {
        &self.ctx
    }

    /// Whether the span of the basis is closed under both skew shifts, which
    /// makes it the left ideal generated by g.
    pub fn is_left_ideal(&self) -> Result<bool> {
        span_closed_under(
            &self.ctx,
            &self.gen_matrix,
            self.ctx.lambda1(),
            self.ctx.lambda2(),
        )
    }

    pub fn generator(&self) -> &SkewPoly {
        &self.generator
    }

    /// h with h ⋆ g = (x^l − λ1) ⋆ (y^s − λ2).
    pub fn cofactor(&self) -> &SkewPoly {
        &self.cofactor
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn dimension(&self) -> usize {
        self.k * self.t
    }

    /// q^(kt), or None on overflow.
    pub fn cardinality(&self) -> Option<u64> {
        self.ctx.ring().size().checked_pow(self.dimension() as u32)
    }

    pub fn basis(&self) -> &[ResidueClass] {
        &self.basis
    }

    pub fn gen_matrix(&self) -> &Matrix {
        &self.gen_matrix
    }

    pub fn contains(&self, c: &Codeword) -> Result<bool> {
        self.ctx.check_shape(c)?;
        self.gen_matrix.row_space_contains(c.as_flat())
    }

    /// f ∈ C iff f ⋆ h vanishes in R◇. The equivalence with [`Code::contains`]
    /// is for f given by its canonical representative (support below (l, s)).
    pub fn membership_via_h(&self, f: &SkewPoly) -> Result<bool> {
        Ok(self.ctx.reduce_diamond(&f.try_star(&self.cofactor)?)?.is_zero())
    }

    /// Every codeword; refuses when q^(kt) exceeds `cap`.
    pub fn codewords(&self, cap: u64) -> Result<Vec<Codeword>> {
        Ok(self
            .gen_matrix
            .enumerate_row_space(cap)?
            .into_iter()
            .map(|row| row_to_array(&self.ctx, &row))
            .collect())
    }

    /// Minimum Hamming weight of a nonzero codeword, by enumeration.
    pub fn min_distance(&self) -> Result<usize> {
        self.min_distance_with_cap(DEFAULT_ENUMERATION_CAP)
    }

    pub fn min_distance_with_cap(&self, cap: u64) -> Result<usize> {
        if self.dimension() == 0 {
            return Err(Error::Usage("the zero code has no minimum distance".into()));
        }
        let words = self.codewords(cap).map_err(|e| match e {
            Error::EnumerationCap { size, cap } => Error::Usage(format!(
                "code has {size} codewords, above the enumeration cap {cap}; \
                 use the bound-only report (omit min_distance) instead"
            )),
            other => other,
        })?;
        let ring = self.ctx.ring();
        Ok(words
            .iter()
            .map(|w| w.weight(ring))
            .filter(|&w| w > 0)
            .min()
            .expect("nonzero code has a nonzero word"))
    }

    /// [`check_gxy_criterion`] for this code's generator.
    pub fn check_gxy_criterion(&self) -> Result<GxyCheck> {
        check_gxy_criterion(&self.ctx, &self.generator)
    }
}

/// Checks the generator-times-xy criterion for C = ⟨g⟩ (the left ideal of
/// R° generated by g, minimal or not): whether g ⋆ xy lies in C, and whether
/// every coefficient of g is fixed by ρθ. Requires g in staircase form:
/// support inside its degree rectangle, coefficient 1 along the top row and
/// right column, unit constant term.
pub fn check_gxy_criterion(ctx: &QuotientContext, g: &SkewPoly) -> Result<GxyCheck> {
    require_field(ctx)?;
    let ring = ctx.ring();
    let d = g.quasi_degree()?;
    let not_applicable = |why: &str| Err(Error::NotApplicable(format!("{g}: {why}")));
    if g.terms().any(|(e, _)| !d.geq(e)) {
        return not_applicable("support leaves the degree rectangle");
    }
    for i in 0..=d.i {
        if !ring.is_one(g.coefficient(i, d.j)) {
            return not_applicable("top row is not all ones");
        }
    }
    for j in 0..=d.j {
        if !ring.is_one(g.coefficient(d.i, j)) {
            return not_applicable("right column is not all ones");
        }
    }
    if !ring.is_unit(g.coefficient(0, 0)) {
        return not_applicable("constant term is not a unit");
    }
    let xy = ctx.skew().monomial(ring.one(), 1, 1);
    let shifted = ctx.reduce(&g.try_star(&xy)?)?;
    Ok(GxyCheck {
        lhs: left_ideal_span(ctx, g)?.row_space_contains(shifted.array().as_flat())?,
        rhs: g.coefficients_fixed_by(&[Automorphism::RHO_THETA]),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GxyCheck {
    /// g ⋆ xy ∈ C.
    pub lhs: bool,
    /// All coefficients of g are fixed by ρθ.
    pub rhs: bool,
}

/// Outcome of [`minimal_degree_generator`].
#[derive(Debug, Clone)]
pub struct MinimalGenerator {
    pub generator: Option<SkewPoly>,
    /// ≤-minimal quasi-degrees among monic codewords, ascending in ⇒.
    pub minimal_degrees: Vec<QuasiDegree>,
    /// Monic codewords of minimal degree that were tested for generation.
    pub candidates_tried: usize,
    pub note: Option<String>,
}

/// Searches the span for a monic codeword of componentwise-minimal degree
/// that generates the whole span as a left ideal of R°.
pub fn minimal_degree_generator(
    ctx: &QuotientContext,
    spanning_set: &[Codeword],
) -> Result<MinimalGenerator> {
    minimal_degree_generator_with_cap(ctx, spanning_set, DEFAULT_ENUMERATION_CAP)
}

pub fn minimal_degree_generator_with_cap(
    ctx: &QuotientContext,
    spanning_set: &[Codeword],
    cap: u64,
) -> Result<MinimalGenerator> {
    require_field(ctx)?;
    let span = arrays_to_matrix(ctx, spanning_set)?;
    let words = span.enumerate_row_space(cap)?;
    let ring = ctx.ring();
    let (l, s) = ctx.shape();
    // Leading position in ⇒ order: largest j, then largest i.
    let lead = |w: &[Element]| {
        (0..s)
            .rev()
            .flat_map(|j| (0..l).rev().map(move |i| (i, j)))
            .find(|&(i, j)| !ring.is_zero(w[i * s + j]))
    };
    let mut monic: Vec<(QuasiDegree, SkewPoly)> = Vec::new();
    for w in &words {
        if let Some((i, j)) = lead(w) {
            if ring.is_one(w[i * s + j]) {
                let f = ctx.from_array(&row_to_array(ctx, w))?.lift();
                monic.push((QuasiDegree::new(i as i64, j as i64), f));
            }
        }
    }
    if monic.is_empty() {
        return Ok(MinimalGenerator {
            generator: None,
            minimal_degrees: Vec::new(),
            candidates_tried: 0,
            note: Some("the span has no monic element".into()),
        });
    }
    let degrees: BTreeSet<QuasiDegree> = monic.iter().map(|(d, _)| *d).collect();
    let minimal: Vec<QuasiDegree> = degrees
        .iter()
        .copied()
        .filter(|&d| !degrees.iter().any(|&e| e != d && d.geq(e)))
        .collect();
    let mut tried = 0;
    for &d in &minimal {
        for (_, f) in monic.iter().filter(|(e, _)| *e == d) {
            tried += 1;
            if left_ideal_span(ctx, f)?.row_space_eq(&span)? {
                let note = (minimal.len() > 1).then(|| {
                    format!(
                        "{} incomparable minimal degrees; returned the first generating one",
                        minimal.len()
                    )
                });
                return Ok(MinimalGenerator {
                    generator: Some(f.clone()),
                    minimal_degrees: minimal,
                    candidates_tried: tried,
                    note,
                });
            }
        }
    }
    Ok(MinimalGenerator {
        generator: None,
        minimal_degrees: minimal,
        candidates_tried: tried,
        note: Some("no monic codeword of minimal degree generates the span".into()),
    })
}

/// Monic right divisors of (x^l − λ1) ⋆ (y^s − λ2) found by exhaustive search.
#[derive(Debug, Clone)]
pub struct GeneratorSearch {
    /// Divisors that generate a code of dimension kt, sorted by quasi-degree
    /// (⇒) and then by coefficients.
    pub generators: Vec<SkewPoly>,
    /// Divisors whose left ideal is larger than the span of their kt basis
    /// words, in the same order.
    pub non_minimal: Vec<SkewPoly>,
    /// Degrees whose candidate count would have exceeded the budget.
    pub skipped: Vec<(QuasiDegree, u64)>,
    pub evaluated: u64,
}

/// Monic univariate (in x when `in_x`, else in y) polynomials of degree `e`
/// that right-divide `target`, as coefficient vectors of length e+1.
fn univariate_divisors(
    skew: &SkewRing,
    target: &SkewPoly,
    e: usize,
    in_x: bool,
) -> Result<Vec<Vec<Element>>> {
    let ring = skew.ring();
    let elems = ring.elements()?;
    let q = elems.len() as u64;
    let count = q.checked_pow(e as u32).unwrap_or(u64::MAX);
    let mut out = Vec::new();
    for mut n in 0..count {
        let mut coeffs: Vec<Element> = (0..e)
            .map(|_| {
                let c = elems[(n % q) as usize];
                n /= q;
                c
            })
            .collect();
        coeffs.push(ring.one());
        let f = skew.from_terms(coeffs.iter().enumerate().map(|(k, &c)| {
            let d = if in_x {
                QuasiDegree::new(k as i64, 0)
            } else {
                QuasiDegree::new(0, k as i64)
            };
            (d, c)
        }));
        if f.right_divides(target)? {
            out.push(coeffs);
        }
    }
    Ok(out)
}

/// Nonzero scalar multiples of monic divisors of degree ≤ e, padded to e+1.
fn scaled_divisors(skew: &SkewRing, target: &SkewPoly, e: usize, in_x: bool) -> Result<Vec<Vec<Element>>> {
    let ring = skew.ring();
    let units: Vec<Element> = ring
        .elements()?
        .into_iter()
        .filter(|&c| ring.is_unit(c))
        .collect();
    let mut out = Vec::new();
    for deg in 0..=e {
        for d in univariate_divisors(skew, target, deg, in_x)? {
            for &u in &units {
                let mut v: Vec<Element> = d.iter().map(|&c| ring.mul(u, c)).collect();
                v.resize(e + 1, ring.zero());
                out.push(v);
            }
        }
    }
    Ok(out)
}

/// Enumerates every monic right divisor g of (x^l−λ1)⋆(y^s−λ2) over a field.
///
/// Over a field x- and y-degrees add under ⋆, so a divisor of quasi-degree
/// (d1, d2) has support in [0..=d1]×[0..=d2]. Its four border lines are
/// pinned down by univariate divisibility: the top row (twisted by θ^t) is a
/// monic right divisor of x^l − λ1, the bottom row a scalar multiple of one,
/// the right column (twisted by ρ^k) a monic right divisor of y^s − λ2 and
/// the left column a scalar multiple of one. Only interior coefficients are
/// enumerated freely; every candidate is confirmed by exact division.
pub fn find_generators(ctx: &QuotientContext, budget: u64) -> Result<GeneratorSearch> {
    require_field(ctx)?;
    let skew = ctx.skew();
    let ring = ctx.ring();
    let elems = ring.elements()?;
    let q = elems.len() as u64;
    let modulus = ctx.modulus_product();
    let xmod = ctx.x_modulus();
    let ymod = ctx.y_modulus();
    let (l, s) = ctx.shape();
    let mut generators: Vec<SkewPoly> = Vec::new();
    let mut skipped = Vec::new();
    let mut evaluated = 0u64;

    for d2 in 0..=s {
        for d1 in 0..=l {
            let (k, t) = ((l - d1) as i64, (s - d2) as i64);
            let untwist_row =
                |v: &[Element]| -> Vec<Element> { v.iter().map(|&c| skew.twist(0, -t, c)).collect() };
            let untwist_col =
                |v: &[Element]| -> Vec<Element> { v.iter().map(|&c| skew.twist(-k, 0, c)).collect() };
            let tops: Vec<Vec<Element>> = univariate_divisors(skew, &xmod, d1, true)?
                .iter()
                .map(|v| untwist_row(v))
                .collect();
            let rights: Vec<Vec<Element>> = univariate_divisors(skew, &ymod, d2, false)?
                .iter()
                .map(|v| untwist_col(v))
                .collect();
            let bottoms = if d2 == 0 {
                tops.clone()
            } else {
                scaled_divisors(skew, &xmod, d1, true)?
            };
            let lefts = if d1 == 0 {
                rights.clone()
            } else {
                scaled_divisors(skew, &ymod, d2, false)?
            };
            let interior = if d1 >= 1 && d2 >= 1 {
                (d1 - 1) * (d2 - 1)
            } else {
                0
            };
            let interior_count = q.checked_pow(interior as u32).unwrap_or(u64::MAX);

            // Border assignments consistent at the four corners.
            let mut borders: Vec<(usize, usize, usize, usize)> = Vec::new();
            for (ti, top) in tops.iter().enumerate() {
                for (bi, bottom) in bottoms.iter().enumerate() {
                    if d2 == 0 && ti != bi {
                        continue;
                    }
                    for (li, left) in lefts.iter().enumerate() {
                        if left[0] != bottom[0] || left[d2] != top[0] {
                            continue;
                        }
                        for (ri, right) in rights.iter().enumerate() {
                            if d1 == 0 && ri != li {
                                continue;
                            }
                            if right[0] != bottom[d1] || right[d2] != top[d1] {
                                continue;
                            }
                            borders.push((ti, bi, li, ri));
                        }
                    }
                }
            }
            let total = (borders.len() as u64).saturating_mul(interior_count);
            if total > budget.saturating_sub(evaluated) {
                skipped.push((QuasiDegree::new(d1 as i64, d2 as i64), total));
                continue;
            }
            for &(ti, bi, li, ri) in &borders {
                for mut n in 0..interior_count {
                    let mut terms = Vec::new();
                    for (u, &c) in tops[ti].iter().enumerate() {
                        terms.push(((u, d2), c));
                    }
                    if d2 > 0 {
                        for (u, &c) in bottoms[bi].iter().enumerate() {
                            terms.push(((u, 0), c));
                        }
                    }
                    for (v, &c) in lefts[li].iter().enumerate().take(d2).skip(1) {
                        terms.push(((0, v), c));
                    }
                    if d1 > 0 {
                        for (v, &c) in rights[ri].iter().enumerate().take(d2).skip(1) {
                            terms.push(((d1, v), c));
                        }
                    }
                    for v in 1..d2 {
                        for u in 1..d1 {
                            terms.push(((u, v), elems[(n % q) as usize]));
                            n /= q;
                        }
                    }
                    // Corners are written twice by rows and columns; keep one copy.
                    let mut seen = BTreeSet::new();
                    let g = skew.from_terms(
                        terms
                            .into_iter()
                            .filter(|&(uv, _)| seen.insert(uv))
                            .map(|((u, v), c)| (QuasiDegree::new(u as i64, v as i64), c)),
                    );
                    evaluated += 1;
                    if g.right_divides(&modulus)? {
                        generators.push(g);
                    }
                }
            }
        }
    }
    generators.sort_by_cached_key(|g| {
        (
            g.quasi_degree().expect("monic"),
            g.terms().map(|(d, c)| (d, c.index())).collect::<Vec<_>>(),
        )
    });
    generators.dedup();
    let mut non_minimal = Vec::new();
    let mut minimal = Vec::new();
    for g in generators {
        if Code::from_divisor(ctx, &g)?.is_left_ideal()? {
            minimal.push(g);
        } else {
            non_minimal.push(g);
        }
    }
    Ok(GeneratorSearch {
        generators: minimal,
        non_minimal,
        skipped,
        evaluated,
    })
}

/// JSON report for a built code.
#[derive(Debug, Clone, Serialize)]
pub struct CodeReport {
    pub k: usize,
    pub t: usize,
    pub cardinality: String,
    pub generator: String,
    pub cofactor: String,
    pub basis: Vec<String>,
    pub gen_matrix: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_distance: Option<usize>,
}

impl Code {
    pub fn report(&self, with_min_distance: bool) -> Result<CodeReport> {
        let ring = self.ctx.ring();
        let cardinality = match self.cardinality() {
            Some(n) => n.to_string(),
            None => format!("{}^{}", ring.size(), self.dimension()),
        };
        Ok(CodeReport {
            k: self.k,
            t: self.t,
            cardinality,
            generator: self.generator.to_string(),
            cofactor: self.cofactor.to_string(),
            basis: self.basis.iter().map(|b| b.to_string()).collect(),
            gen_matrix: self
                .gen_matrix
                .rows()
                .map(|r| r.iter().map(|&e| ring.format_element(e)).collect())
                .collect(),
            min_distance: if with_min_distance {
                Some(self.min_distance()?)
            } else {
                None
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::{ContextSpec, RingRef};

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

    fn arr(c: &QuotientContext, rows: &[&[&str]]) -> Codeword {
        let rows: Vec<Vec<String>> = rows
            .iter()
            .map(|r| r.iter().map(|s| s.to_string()).collect())
            .collect();
        Codeword::parse(c.ring(), &rows).unwrap()
    }

    #[test]
    fn plain_cyclic_column_shift() {
        let c = ctx("gf9", 0, 0, 2, 2, "1", "1");
        let w = arr(&c, &[&["1", "2"], &["a", "a^2"]]);
        assert_eq!(
            column_shift(&c, &w).unwrap(),
            arr(&c, &[&["a", "a^2"], &["1", "2"]])
        );
    }

    #[test]
    fn frobenius_column_shift() {
        let c = ctx("gf4", 1, 1, 2, 2, "1", "1");
        let w = arr(&c, &[&["a", "0"], &["0", "0"]]);
        assert_eq!(
            column_shift(&c, &w).unwrap(),
            arr(&c, &[&["0", "0"], &["a^2", "0"]])
        );
        let bad = Codeword::zeros(c.ring(), 1, 2);
        assert!(matches!(column_shift(&c, &bad), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn column_shift_wraps_with_lambda() {
        // ρ of order 2 = l, λ1 = 2 in GF(9): l shifts multiply by λ1.
        let c = ctx("gf9", 1, 1, 2, 2, "2", "1");
        for n in (0..6561).step_by(37) {
            let w = c.array_from_index(n);
            let twice = column_shift(&c, &column_shift(&c, &w).unwrap()).unwrap();
            assert_eq!(twice, w.map(|e| c.ring().mul(c.lambda1(), e)));
        }
    }

    #[test]
    fn shifts_are_left_multiplication() {
        let c = ctx("gf4", 1, 1, 2, 2, "1", "1");
        let (x, y) = (c.skew().x(), c.skew().y());
        for n in 0..256 {
            let w = c.array_from_index(n);
            let cls = c.from_array(&w).unwrap();
            assert_eq!(
                column_shift(&c, &w).unwrap(),
                cls.left_mul(&x).unwrap().to_array()
            );
            assert_eq!(row_shift(&c, &w).unwrap(), cls.left_mul(&y).unwrap().to_array());
        }
    }

    #[test]
    fn build_y_minus_one_over_gf9() {
        let c = ctx("gf9", 1, 1, 2, 2, "1", "1");
        let code = Code::build(&c, &poly(&c, "y - 1")).unwrap();
        assert_eq!((code.k(), code.t()), (2, 1));
        assert_eq!(code.cardinality(), Some(81));
        let basis: Vec<SkewPoly> = code.basis().iter().map(ResidueClass::lift).collect();
        assert_eq!(basis, vec![poly(&c, "y - 1"), poly(&c, "x*y - x")]);
        assert_eq!(code.gen_matrix().rank().unwrap(), 2);
        assert_eq!(code.codewords(1000).unwrap().len(), 81);
        assert_eq!(code.cofactor(), &(&poly(&c, "x^2 - 1") * &poly(&c, "y + 1")));
    }

    #[test]
    fn boundary_codes() {
        let c = ctx("gf4", 1, 1, 2, 2, "1", "1");
        let full = Code::build(&c, &c.skew().one()).unwrap();
        assert_eq!(full.cardinality(), Some(256));
        assert_eq!(full.min_distance().unwrap(), 1);
        let zero = Code::build(&c, &c.modulus_product()).unwrap();
        assert_eq!((zero.k(), zero.t(), zero.cardinality()), (0, 0, Some(1)));
        assert!(zero.min_distance().is_err());
        assert!(zero.contains(&Codeword::zeros(c.ring(), 2, 2)).unwrap());
    }

    #[test]
    fn build_rejects_non_divisors() {
        let c = ctx("gf9", 1, 1, 2, 2, "1", "1");
        assert!(matches!(
            Code::build(&c, &poly(&c, "y - a")),
            Err(Error::NotAGenerator { .. })
        ));
        assert_eq!(
            Code::build(&c, &poly(&c, "2*y")).unwrap_err(),
            Error::NonMonicDivisor
        );
        assert!(matches!(
            Code::build(&c, &poly(&c, "y^3")),
            Err(Error::NotAGenerator { .. })
        ));
    }

    #[test]
    fn membership_examples() {
        let c = ctx("gf9", 1, 1, 2, 2, "1", "1");
        let code = Code::build(&c, &poly(&c, "y - 1")).unwrap();
        for b in code.basis() {
            assert!(code.contains(b.array()).unwrap());
        }
        assert!(code.contains(&Codeword::zeros(c.ring(), 2, 2)).unwrap());
        let y1 = c.reduce(&poly(&c, "y + 1")).unwrap();
        assert!(!code.contains(y1.array()).unwrap());
        assert!(code.membership_via_h(code.generator()).unwrap());
        assert!(!code.membership_via_h(&c.skew().one()).unwrap());
        assert!(!code.membership_via_h(&poly(&c, "y + 1")).unwrap());
    }

    #[test]
    fn submodule_detection() {
        let c = ctx("gf4", 1, 1, 2, 2, "1", "1");
        let code = Code::build(&c, &poly(&c, "y + 1")).unwrap();
        let arrays: Vec<Codeword> = code.basis().iter().map(ResidueClass::to_array).collect();
        assert!(is_2d_skew_constacyclic(&c, &arrays).unwrap());
        let single = arr(&c, &[&["1", "0"], &["0", "0"]]);
        assert!(!is_2d_skew_constacyclic(&c, &[single]).unwrap());
        assert!(is_2d_skew_constacyclic(&c, &[]).unwrap());
    }

    #[test]
    fn minimal_generator_examples() {
        let c = ctx("gf9", 1, 1, 2, 2, "1", "1");
        let code = Code::build(&c, &poly(&c, "y - 1")).unwrap();
        let arrays: Vec<Codeword> = code.basis().iter().map(ResidueClass::to_array).collect();
        let found = minimal_degree_generator(&c, &arrays).unwrap();
        assert_eq!(found.generator, Some(poly(&c, "y - 1")));
        let full: Vec<Codeword> = (0..4)
            .map(|k| {
                let mut w = Codeword::zeros(c.ring(), 2, 2);
                w[(k / 2, k % 2)] = c.ring().one();
                w
            })
            .collect();
        assert_eq!(
            minimal_degree_generator(&c, &full).unwrap().generator,
            Some(c.skew().one())
        );
        let none = minimal_degree_generator(&c, &[]).unwrap();
        assert!(none.generator.is_none());
    }

    #[test]
    fn min_distance_of_y_minus_one() {
        // Brute force: the 81 words (c0 + c1 x)(y − 1) have weights 0, 2, 4.
        let c = ctx("gf9", 1, 1, 2, 2, "1", "1");
        let code = Code::build(&c, &poly(&c, "y - 1")).unwrap();
        let weights: Vec<usize> = code
            .codewords(100)
            .unwrap()
            .iter()
            .map(|w| w.weight(c.ring()))
            .collect();
        let brute = weights.iter().copied().filter(|&w| w > 0).min().unwrap();
        assert_eq!(code.min_distance().unwrap(), brute);
        assert_eq!(brute, 2);
        assert!(matches!(code.min_distance_with_cap(10), Err(Error::Usage(_))));
    }

    #[test]
    fn generator_search_matches_brute_force_gf4() {
        // Brute force over every monic polynomial with support in the 3×3 box.
        let c = ctx("gf4", 1, 1, 2, 2, "1", "1");
        let modulus = c.modulus_product();
        let ring = c.ring().clone();
        let elems = ring.elements().unwrap();
        let mut brute = Vec::new();
        for n in 0..4u64.pow(9) {
            let mut m = n;
            let g = c.skew().from_terms((0..9).map(|k| {
                let e = elems[(m % 4) as usize];
                m /= 4;
                (QuasiDegree::new(k % 3, k / 3), e)
            }));
            if g.is_monic() && g.right_divides(&modulus).unwrap() {
                brute.push(g);
            }
        }
        let found = find_generators(&c, DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(found.skipped.is_empty());
        let mut a: Vec<String> = found
            .generators
            .iter()
            .chain(&found.non_minimal)
            .map(|g| g.to_string())
            .collect();
        let mut b: Vec<String> = brute.iter().map(|g| g.to_string()).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn gxy_criterion_identity_composite() {
        // ρθ = Frobenius² = id on GF(4): rhs holds, so lhs must too.
        let c = ctx("gf4", 1, 1, 2, 2, "1", "1");
        let code = Code::build(&c, &poly(&c, "x*y + x + y + 1")).unwrap();
        assert_eq!(
            code.check_gxy_criterion().unwrap(),
            GxyCheck { lhs: true, rhs: true }
        );
        let not_stair = Code::build(&c, &poly(&c, "y + 1")).unwrap();
        assert!(not_stair.check_gxy_criterion().is_ok());
        let c9 = ctx("gf9", 1, 1, 2, 2, "1", "1");
        for g in find_generators(&c9, DEFAULT_SEARCH_BUDGET).unwrap().generators {
            let code = Code::build(&c9, &g).unwrap();
            if let Ok(chk) = code.check_gxy_criterion() {
                assert!(chk.rhs && chk.lhs, "{g}");
            }
        }
    }

    #[test]
    fn non_minimal_divisor_is_rejected() {
        // A right divisor of degree (1,1) whose left ideal also holds y + 2a+1.
        let c = ctx("gf9", 1, 1, 2, 2, "2", "2");
        let g = poly(&c, "x*y + (a+2)*y + a*x + a+1");
        assert!(g.right_divides(&c.modulus_product()).unwrap());
        let raw = Code::from_divisor(&c, &g).unwrap();
        assert_eq!(raw.dimension(), 1);
        assert!(!raw.is_left_ideal().unwrap());
        match Code::build(&c, &g) {
            Err(Error::NotMinimalGenerator {
                ideal_dim,
                expected_dim,
                minimal,
                ..
            }) => {
                assert_eq!((ideal_dim, expected_dim), (2, 1));
                assert_eq!(minimal, "y + 2*a+1");
            }
            other => panic!("{other:?}"),
        }
        let search = find_generators(&c, DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(search.non_minimal.contains(&g));
        assert!(!search.generators.contains(&g));
    }

    #[test]
    fn gxy_criterion_both_false() {
        // Over GF(8) with ρθ = Frobenius², a staircase divisor whose interior
        // coefficient is not fixed: g ⋆ xy leaves ⟨g⟩.
        let c = ctx("gf8", 1, 1, 3, 3, "1", "1");
        let search = find_generators(&c, DEFAULT_SEARCH_BUDGET).unwrap();
        let mut both_false = 0;
        for g in search.generators.iter().chain(&search.non_minimal) {
            if let Ok(chk) = check_gxy_criterion(&c, g) {
                assert_eq!(chk.lhs, chk.rhs, "{g}");
                both_false += usize::from(!chk.lhs);
            }
        }
        assert!(both_false > 0);
    }
}
