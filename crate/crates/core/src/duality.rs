//! The ⊙ product, dual codes, the 𝒜 transform, the dual-generator candidate
//! x^k y^t ⋆ ψ(h) and the probe asking whether that candidate generates C⊥.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::code::{
    column_shift_with, left_ideal_span, row_shift_with, row_to_array, span_closed_under, Code,
};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::quotient::{Codeword, QuotientContext, ResidueClass};
use crate::ring::{Element, Ring};
use crate::skew_poly::SkewPoly;

/// c ⊙ d = Σ c_ij d_ij.
pub fn dot(ring: &Ring, c: &Codeword, d: &Codeword) -> Result<Element> {
    if c.shape() != d.shape() {
        return Err(Error::ShapeMismatch {
            expected: c.shape(),
            got: d.shape(),
        });
    }
    Ok(linalg::dot(ring, c.as_flat(), d.as_flat()))
}

/// Rows spanning C⊥, the arrays orthogonal to every codeword.
pub fn dual_code(code: &Code) -> Result<Matrix> {
    code.gen_matrix().nullspace()
}

/// Whether the span of C⊥ is closed under the column shift with λ1⁻¹ and the
/// row shift with λ2⁻¹.
pub fn dual_shift_closure(code: &Code) -> Result<bool> {
    let ctx = code.context();
    let ring = ctx.ring();
    let (i1, i2) = (ring.inverse(ctx.lambda1())?, ring.inverse(ctx.lambda2())?);
    span_closed_under(ctx, &dual_code(code)?, i1, i2)
}

/// (C⊥)⊥ = C as row spaces.
pub fn double_dual_is_code(code: &Code) -> Result<bool> {
    dual_code(code)?.nullspace()?.row_space_eq(code.gen_matrix())
}

/// Entry (r, c) is ρ^r θ^c (b_{l−1−r, s−1−c}).
pub fn a_matrix(b: &ResidueClass) -> Codeword {
    let ctx = b.context();
    let (l, s) = ctx.shape();
    let arr = b.array();
    let mut out = Codeword::zeros(ctx.ring(), l, s);
    for r in 0..l {
        for c in 0..s {
            out[(r, c)] = ctx.skew().twist(r as i64, c as i64, arr[(l - 1 - r, s - 1 - c)]);
        }
    }
    out
}

/// The coefficient array of x^(l−1) y^(s−1) ⋆ ψ(b), computed through ψ.
pub fn a_matrix_via_psi(b: &ResidueClass) -> Result<Codeword> {
    let ctx = b.context();
    let corner = ctx
        .skew()
        .monomial(ctx.ring().one(), ctx.l() as i64 - 1, ctx.s() as i64 - 1);
    Ok(ctx.reduce(&corner.try_star(&b.lift().psi())?)?.to_array())
}

/// All arrays reachable from `start` by the two skew shifts of the context.
pub fn shift_orbit(ctx: &QuotientContext, start: &Codeword) -> Vec<Codeword> {
    let mut seen = BTreeSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(c) = queue.pop_front() {
        let key: Vec<u32> = c.as_flat().iter().map(|e| e.index()).collect();
        if !seen.insert(key) {
            continue;
        }
        queue.push_back(column_shift_with(ctx.skew(), ctx.lambda1(), &c));
        queue.push_back(row_shift_with(ctx.skew(), ctx.lambda2(), &c));
        order.push(c);
    }
    order
}

fn require_square_one(ctx: &QuotientContext) -> Result<()> {
    let ring = ctx.ring();
    for (name, lam) in [("lambda1", ctx.lambda1()), ("lambda2", ctx.lambda2())] {
        if !ring.is_one(ring.mul(lam, lam)) {
            return Err(Error::NotApplicable(format!(
                "{name} = {} does not square to 1",
                ring.format_element(lam)
            )));
        }
    }
    Ok(())
}

/// Both sides of the annihilation criterion: a ⋆ b = 0 in R°, and a ⊙ M = 0
/// for M ranging over the shift orbit of 𝒜(b).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrthogonalityCheck {
    pub product_zero: bool,
    pub orthogonal_to_all_shifts: bool,
}

pub fn annihilator_orthogonality_check(a: &ResidueClass, b: &ResidueClass) -> Result<OrthogonalityCheck> {
    let ctx = b.context();
    require_square_one(ctx)?;
    let orbit = shift_orbit(ctx, &a_matrix(b));
    orthogonality_with_orbit(a, b, &orbit)
}

/// As [`annihilator_orthogonality_check`] with a precomputed orbit of 𝒜(b),
/// for sweeps over many a.
pub fn orthogonality_with_orbit(
    a: &ResidueClass,
    b: &ResidueClass,
    orbit: &[Codeword],
) -> Result<OrthogonalityCheck> {
    let ring = b.context().ring();
    let product_zero = a.star_mul_mod(b)?.is_zero();
    let mut orthogonal_to_all_shifts = true;
    for m in orbit {
        if !ring.is_zero(dot(ring, a.array(), m)?) {
            orthogonal_to_all_shifts = false;
            break;
        }
    }
    Ok(OrthogonalityCheck {
        product_zero,
        orthogonal_to_all_shifts,
    })
}

/// x^k y^t ⋆ ψ(h) for the cofactor h of the code.
pub fn dual_candidate(code: &Code) -> Result<SkewPoly> {
    let ctx = code.context();
    require_square_one(ctx)?;
    let shift = ctx
        .skew()
        .monomial(ctx.ring().one(), code.k() as i64, code.t() as i64);
    let cand = shift.try_star(&code.cofactor().psi())?;
    if !cand.is_ordinary() {
        return Err(Error::TheoremViolation(format!(
            "dual candidate {cand} has negative exponents"
        )));
    }
    Ok(cand)
}

/// Whether the reduction of `f` in R° is orthogonal to every codeword.
pub fn in_dual(code: &Code, f: &SkewPoly) -> Result<bool> {
    let ctx = code.context();
    let arr = ctx.reduce(f)?.to_array();
    let ring = ctx.ring();
    for row in code.gen_matrix().rows() {
        if !ring.is_zero(linalg::dot(ring, row, arr.as_flat())) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether f, made monic by a unit on the left, right-divides the modulus.
pub fn divides_modulus_up_to_unit(ctx: &QuotientContext, f: &SkewPoly) -> Result<bool> {
    let lead = f.leading_coefficient()?;
    let monic = f.scale(ctx.ring().inverse(lead)?);
    monic.right_divides(&ctx.modulus_product())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeOutcome {
    pub generates: bool,
    pub dual_dim: usize,
    pub candidate_span_dim: usize,
    /// ρ and θ are both the identity.
    pub classical: bool,
    /// Classical case where the candidate fails to generate C⊥.
    pub flagged_for_review: bool,
}

/// Does the left ideal of R° generated by the candidate equal C⊥? Recorded,
/// never asserted.
pub fn open_problem_probe(code: &Code) -> Result<ProbeOutcome> {
    let ctx = code.context();
    let cand = dual_candidate(code)?;
    let dual = dual_code(code)?;
    let span = left_ideal_span(ctx, &cand)?;
    let generates = span.row_space_eq(&dual)?;
    let autos = ctx.skew().autos().normalized(ctx.ring());
    let classical = autos.rho_power == 0 && autos.theta_power == 0;
    Ok(ProbeOutcome {
        generates,
        dual_dim: dual.rank()?,
        candidate_span_dim: span.rank()?,
        classical,
        flagged_for_review: classical && !generates,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DualReport {
    pub dual_dim: usize,
    pub dual_is_constacyclic: bool,
    pub dual_lambda1: String,
    pub dual_lambda2: String,
    pub dual_basis: Vec<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidate: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidate_in_dual: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidate_divides: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidate_generates_dual: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn dual_report(code: &Code) -> Result<DualReport> {
    let ctx = code.context();
    let ring = ctx.ring();
    let dual = dual_code(code)?.row_space_basis()?;
    let mut report = DualReport {
        dual_dim: dual.num_rows(),
        dual_is_constacyclic: dual_shift_closure(code)?,
        dual_lambda1: ring.format_element(ring.inverse(ctx.lambda1())?),
        dual_lambda2: ring.format_element(ring.inverse(ctx.lambda2())?),
        dual_basis: dual.rows().map(|r| row_to_array(ctx, r).format(ring)).collect(),
        candidate: None,
        candidate_in_dual: None,
        candidate_divides: None,
        candidate_generates_dual: None,
        note: None,
    };
    match dual_candidate(code) {
        Ok(cand) => {
            report.candidate_in_dual = Some(in_dual(code, &cand)?);
            report.candidate_divides = Some(divides_modulus_up_to_unit(ctx, &cand)?);
            report.candidate_generates_dual = Some(open_problem_probe(code)?.generates);
            report.candidate = Some(cand.to_string());
        }
        Err(Error::NotApplicable(why)) => report.note = Some(why),
        Err(e) => return Err(e),
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::find_generators;
    use crate::quotient::{ContextSpec, RingRef};
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

    fn arr(ring: &Ring, rows: &[&[&str]]) -> Codeword {
        let rows: Vec<Vec<String>> = rows
            .iter()
            .map(|r| r.iter().map(|s| s.to_string()).collect())
            .collect();
        Codeword::parse(ring, &rows).unwrap()
    }

    fn poly(c: &QuotientContext, s: &str) -> SkewPoly {
        SkewPoly::parse(c.skew(), s).unwrap()
    }

    #[test]
    fn dot_examples() {
        let gf2 = Ring::gf(2, 1).unwrap();
        let id = arr(&gf2, &[&["1", "0"], &["0", "1"]]);
        assert!(gf2.is_zero(dot(&gf2, &id, &id).unwrap()));
        assert!(gf2.is_zero(dot(&gf2, &id, &Codeword::zeros(&gf2, 2, 2)).unwrap()));
        let gf9 = Ring::gf(3, 2).unwrap();
        let c = arr(&gf9, &[&["1", "2"], &["0", "1"]]);
        let d = arr(&gf9, &[&["2", "1"], &["1", "2"]]);
        assert!(gf9.is_zero(dot(&gf9, &c, &d).unwrap()));
        assert!(matches!(
            dot(&gf9, &c, &Codeword::zeros(&gf9, 1, 2)),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn boundary_duals() {
        let c = ctx("gf4", 1, 1, 2, 2, "1", "1");
        let full = Code::build(&c, &c.skew().one()).unwrap();
        assert_eq!(dual_code(&full).unwrap().rank().unwrap(), 0);
        let zero = Code::build(&c, &c.modulus_product()).unwrap();
        assert_eq!(dual_code(&zero).unwrap().rank().unwrap(), 4);
        let probe = open_problem_probe(&full).unwrap();
        assert!(probe.generates);
        assert_eq!(probe.candidate_span_dim, 0);
    }

    #[test]
    fn dual_of_y_minus_one() {
        let c = ctx("gf9", 1, 1, 2, 2, "1", "1");
        let code = Code::build(&c, &poly(&c, "y - 1")).unwrap();
        let dual = dual_code(&code).unwrap();
        assert_eq!(dual.rank().unwrap(), 2);
        let ring = c.ring();
        for u in code.codewords(100).unwrap() {
            for v in dual.enumerate_row_space(100).unwrap() {
                assert!(ring.is_zero(linalg::dot(ring, u.as_flat(), &v)));
            }
        }
        assert!(dual_shift_closure(&code).unwrap());
        assert!(double_dual_is_code(&code).unwrap());
        let cand = dual_candidate(&code).unwrap();
        assert_eq!(cand, &poly(&c, "x^2*y") * &code.cofactor().psi());
        assert!(in_dual(&code, &cand).unwrap());
        assert!(divides_modulus_up_to_unit(&c, &cand).unwrap());
    }

    #[test]
    fn a_matrix_examples() {
        let c = ctx("gf4", 1, 1, 2, 2, "1", "1");
        let b = c.reduce(&poly(&c, "a*x*y")).unwrap();
        assert_eq!(a_matrix(&b), arr(c.ring(), &[&["a", "0"], &["0", "0"]]));
        let one = c.reduce(&c.skew().one()).unwrap();
        assert_eq!(a_matrix(&one), arr(c.ring(), &[&["0", "0"], &["0", "1"]]));
        let b = c.reduce(&poly(&c, "1 + a*x + a^2*y + x*y")).unwrap();
        // [[b11, θ(b10)], [ρ(b01), ρθ(b00)]] with θ = ρ = squaring.
        assert_eq!(a_matrix(&b), arr(c.ring(), &[&["1", "a^2"], &["a", "1"]]));
    }

    #[test]
    fn a_matrix_matches_psi_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for c in [ctx("gf9", 1, 1, 2, 2, "2", "1"), ctx("gf4", 1, 0, 2, 3, "1", "1")] {
            for _ in 0..200 {
                let b = c.random_class(&mut rng);
                assert_eq!(a_matrix(&b), a_matrix_via_psi(&b).unwrap());
            }
        }
    }

    #[test]
    fn orthogonality_examples() {
        let c = ctx("gf4", 1, 1, 2, 2, "1", "1");
        let zero = c.zero_class();
        let one = c.reduce(&c.skew().one()).unwrap();
        let chk = annihilator_orthogonality_check(&one, &zero).unwrap();
        assert_eq!((chk.product_zero, chk.orthogonal_to_all_shifts), (true, true));
        let b = c.reduce(&poly(&c, "x + a")).unwrap();
        let chk = annihilator_orthogonality_check(&one, &b).unwrap();
        assert_eq!((chk.product_zero, chk.orthogonal_to_all_shifts), (false, false));
        let c9 = ctx("gf9", 0, 0, 2, 2, "a^2", "1");
        let one9 = c9.reduce(&c9.skew().one()).unwrap();
        assert!(matches!(
            annihilator_orthogonality_check(&one9, &one9),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn orbit_is_bounded() {
        let c = ctx("gf9", 1, 1, 2, 2, "2", "2");
        for n in (0..6561).step_by(101) {
            let orbit = shift_orbit(&c, &c.array_from_index(n));
            assert!(orbit.len() <= 2 * c.l() * c.s());
        }
    }

    #[test]
    fn sweep_duality_gf9_lambda_two() {
        let c = ctx("gf9", 1, 1, 2, 2, "2", "2");
        for g in find_generators(&c, 1_000_000).unwrap().generators {
            let code = Code::build(&c, &g).unwrap();
            let report = dual_report(&code).unwrap();
            assert_eq!(report.dual_dim, 4 - code.dimension());
            assert!(report.dual_is_constacyclic);
            assert_eq!(report.candidate_in_dual, Some(true), "{g}");
            assert_eq!(report.candidate_divides, Some(true), "{g}");
            // λ² = 1 makes C⊥ constacyclic for the original constants too.
            let dual = dual_code(&code).unwrap();
            assert!(span_closed_under(&c, &dual, c.lambda1(), c.lambda2()).unwrap());
        }
    }

    #[test]
    fn classical_candidate_is_reciprocal() {
        // With ρ = θ = id and λ = 1, x^k y^t ψ(h) is the reciprocal of h.
        let c = ctx("gf4", 0, 0, 2, 2, "1", "1");
        let code = Code::build(&c, &poly(&c, "x + 1")).unwrap();
        let h = code.cofactor();
        let cand = dual_candidate(&code).unwrap();
        let (k, t) = (code.k() as i64, code.t() as i64);
        for (d, coef) in h.terms() {
            assert_eq!(cand.coefficient(k - d.i, t - d.j), coef);
        }
        assert_eq!(cand.num_terms(), h.num_terms());
        assert!(in_dual(&code, &cand).unwrap());
    }

    #[test]
    fn report_serializes() {
        let c = ctx("gf9", 1, 1, 2, 2, "1", "1");
        let code = Code::build(&c, &poly(&c, "y - 1")).unwrap();
        let json = serde_json::to_value(dual_report(&code).unwrap()).unwrap();
        assert_eq!(json["dual_dim"], 2);
        assert_eq!(json["candidate_in_dual"], true);
    }
}
