use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skewcode::code::{
    arrays_to_matrix, column_shift, find_generators, is_2d_skew_constacyclic, left_ideal_span,
    minimal_degree_generator, row_shift, row_to_array, Code,
};
use skewcode::duality::{annihilator_orthogonality_check, dot, dual_code};
use skewcode::quotient::{Codeword, ContextSpec, QuotientContext, ReductionOrder, RingRef};
use skewcode::{QuasiDegree, SkewPoly};

fn context(ring: &str, l: usize, s: usize, l1: &str, l2: &str) -> QuotientContext {
    QuotientContext::from_spec(&ContextSpec {
        ring: RingRef::Name(ring.into()),
        rho_power: 1,
        theta_power: 1,
        l,
        s,
        lambda1: l1.into(),
        lambda2: l2.into(),
    })
    .unwrap()
}

fn contexts() -> Vec<QuotientContext> {
    vec![
        context("gf4", 2, 2, "1", "1"),
        context("gf4", 2, 4, "1", "1"),
        context("gf9", 2, 2, "2", "2"),
        context("gf9", 4, 2, "1", "2"),
    ]
}

type Terms = Vec<(i64, i64, u64)>;

fn terms() -> impl Strategy<Value = Terms> {
    prop::collection::vec((0i64..7, 0i64..7, 0u64..1000), 0..8)
}

fn poly(ctx: &QuotientContext, t: &Terms) -> SkewPoly {
    let ring = ctx.ring();
    ctx.skew().from_terms(
        t.iter()
            .map(|&(i, j, c)| (QuasiDegree::new(i, j), ring.element(c % ring.size()).unwrap())),
    )
}

fn array(ctx: &QuotientContext, cells: &[u64]) -> Codeword {
    let ring = ctx.ring();
    let data = (0..ctx.l() * ctx.s())
        .map(|n| {
            ring.element(cells.get(n).copied().unwrap_or(0) % ring.size())
                .unwrap()
        })
        .collect();
    Codeword::from_flat(ctx.l(), ctx.s(), data).unwrap()
}

/// Product of canonical classes computed term by term: c x^i y^j ⋆ b x^r y^s
/// wraps each exponent once, picking up λ1 or λ2 (both central).
fn product_by_terms(ctx: &QuotientContext, a: &Codeword, b: &Codeword) -> Codeword {
    let ring = ctx.ring();
    let skew = ctx.skew();
    let (l, s) = ctx.shape();
    let mut out = vec![ring.zero(); l * s];
    for i in 0..l {
        for j in 0..s {
            let c = a.as_flat()[i * s + j];
            for r in 0..l {
                for t in 0..s {
                    let mut v = ring.mul(c, skew.twist(i as i64, j as i64, b.as_flat()[r * s + t]));
                    if i + r >= l {
                        v = ring.mul(v, ctx.lambda1());
                    }
                    if j + t >= s {
                        v = ring.mul(v, ctx.lambda2());
                    }
                    let k = ((i + r) % l) * s + (j + t) % s;
                    out[k] = ring.add(out[k], v);
                }
            }
        }
    }
    Codeword::from_flat(l, s, out).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn reduce_is_additive_and_multiplicative(k in 0usize..4, a in terms(), b in terms()) {
        let ctx = &contexts()[k];
        let (f, g) = (poly(ctx, &a), poly(ctx, &b));
        let (rf, rg) = (ctx.reduce(&f).unwrap(), ctx.reduce(&g).unwrap());
        prop_assert_eq!(ctx.reduce(&(&f + &g)).unwrap(), rf.add(&rg).unwrap());
        prop_assert_eq!(ctx.reduce(&(&f * &g)).unwrap(), rf.star_mul_mod(&rg).unwrap());
    }

    #[test]
    fn reduction_order_does_not_matter(k in 0usize..4, a in terms()) {
        let ctx = &contexts()[k];
        let f = poly(ctx, &a);
        prop_assert_eq!(
            ctx.reduce_with_order(&f, ReductionOrder::XFirst).unwrap(),
            ctx.reduce_with_order(&f, ReductionOrder::YFirst).unwrap()
        );
    }

    #[test]
    fn star_mul_mod_matches_termwise_product(k in 0usize..4, a in prop::collection::vec(0u64..1000, 16), b in prop::collection::vec(0u64..1000, 16)) {
        let ctx = &contexts()[k];
        let (x, y) = (array(ctx, &a), array(ctx, &b));
        let p = ctx.from_array(&x).unwrap().star_mul_mod(&ctx.from_array(&y).unwrap()).unwrap();
        prop_assert_eq!(p.to_array(), product_by_terms(ctx, &x, &y));
    }

    #[test]
    fn dot_is_symmetric_and_bilinear(k in 0usize..4, a in prop::collection::vec(0u64..1000, 16), b in prop::collection::vec(0u64..1000, 16), c in prop::collection::vec(0u64..1000, 16), s in 0u64..1000) {
        let ctx = &contexts()[k];
        let ring = ctx.ring();
        let (x, y, z) = (array(ctx, &a), array(ctx, &b), array(ctx, &c));
        let lam = ring.element(s % ring.size()).unwrap();
        prop_assert_eq!(dot(ring, &x, &y).unwrap(), dot(ring, &y, &x).unwrap());
        let sum = Codeword::from_flat(
            ctx.l(),
            ctx.s(),
            x.as_flat().iter().zip(z.as_flat()).map(|(&p, &q)| ring.add(ring.mul(lam, p), q)).collect(),
        )
        .unwrap();
        prop_assert_eq!(
            dot(ring, &sum, &y).unwrap(),
            ring.add(ring.mul(lam, dot(ring, &x, &y).unwrap()), dot(ring, &z, &y).unwrap())
        );
    }

    /// A single array spans a submodule iff both shifts send it to a multiple of itself.
    #[test]
    fn one_dimensional_spans(k in 0usize..4, a in prop::collection::vec(0u64..1000, 16)) {
        let ctx = &contexts()[k];
        let v = array(ctx, &a);
        prop_assume!(!v.is_zero(ctx.ring()));
        let rank_with = |w: Codeword| arrays_to_matrix(ctx, &[v.clone(), w]).unwrap().rank().unwrap();
        let expected = rank_with(column_shift(ctx, &v).unwrap()) == 1 && rank_with(row_shift(ctx, &v).unwrap()) == 1;
        prop_assert_eq!(is_2d_skew_constacyclic(ctx, std::slice::from_ref(&v)).unwrap(), expected);
    }

    #[test]
    fn minimal_generator_generates(k in 0usize..3, a in terms()) {
        let ctx = &contexts()[[0, 2, 0][k]];
        let f = poly(ctx, &a);
        let span = left_ideal_span(ctx, &f).unwrap();
        let rows: Vec<Codeword> = span.rows().map(|r| row_to_array(ctx, r)).collect();
        let found = minimal_degree_generator(ctx, &rows).unwrap();
        if let Some(m) = found.generator {
            prop_assert!(m.is_monic());
            prop_assert!(left_ideal_span(ctx, &m).unwrap().row_space_eq(&span).unwrap());
        } else {
            prop_assert!(span.rank().unwrap() == 0 || found.minimal_degrees.len() > 1);
        }
    }
}

/// Left multiplication by x and y agrees with the shifts. Both sides are
/// additive, so checking every c·e_ij covers all arrays.
#[test]
fn shifts_are_left_multiplication() {
    for ring in ["gf4", "gf9"] {
        for l in [2, 4] {
            for s in [2, 4] {
                let lambdas: &[&str] = if ring == "gf4" { &["1"] } else { &["1", "2"] };
                for l1 in lambdas {
                    for l2 in lambdas {
                        let ctx = context(ring, l, s, l1, l2);
                        let r = ctx.skew();
                        for c in ctx.ring().elements().unwrap() {
                            for i in 0..l {
                                for j in 0..s {
                                    let cls = ctx.reduce(&r.monomial(c, i as i64, j as i64)).unwrap();
                                    let arr = cls.to_array();
                                    let by_x = ctx.reduce(&(&r.x() * &cls.lift())).unwrap().to_array();
                                    let by_y = ctx.reduce(&(&r.y() * &cls.lift())).unwrap().to_array();
                                    assert_eq!(column_shift(&ctx, &arr).unwrap(), by_x, "{}", ctx.describe());
                                    assert_eq!(row_shift(&ctx, &arr).unwrap(), by_y, "{}", ctx.describe());
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn codes_over_larger_shapes() {
    for ctx in [
        context("gf4", 2, 4, "1", "1"),
        context("gf4", 4, 2, "1", "1"),
        context("gf9", 2, 4, "2", "1"),
    ] {
        let search = find_generators(&ctx, 10_000_000).unwrap();
        assert!(search.skipped.is_empty());
        let q = ctx.ring().size() as u128;
        for g in &search.generators {
            let code = Code::build(&ctx, g).unwrap();
            let kt = code.k() * code.t();
            assert_eq!(code.gen_matrix().rank().unwrap(), kt);
            assert_eq!(code.cardinality().map(u128::from), Some(q.pow(kt as u32)));
            let basis: Vec<Codeword> = code.basis().iter().map(|b| b.to_array()).collect();
            assert!(is_2d_skew_constacyclic(&ctx, &basis).unwrap());
            assert_eq!(dual_code(&code).unwrap().rank().unwrap(), ctx.l() * ctx.s() - kt);
        }
    }
}

#[test]
fn membership_equivalence_sampled() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for ctx in [context("gf4", 2, 4, "1", "1"), context("gf9", 2, 2, "2", "1")] {
        for g in find_generators(&ctx, 10_000_000).unwrap().generators {
            let code = Code::build(&ctx, &g).unwrap();
            for _ in 0..1000 {
                let f = ctx.random_class(&mut rng);
                assert_eq!(
                    code.contains(&f.to_array()).unwrap(),
                    code.membership_via_h(&f.lift()).unwrap()
                );
            }
        }
    }
}

#[test]
fn orthogonality_sampled_gf9() {
    let ctx = context("gf9", 2, 2, "2", "2");
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut zero_products = 0;
    for n in 0..10_000 {
        let b = ctx.random_class(&mut rng);
        // Half the pairs are built to annihilate: a in the left annihilator of b.
        let a = if n % 2 == 0 {
            ctx.random_class(&mut rng)
        } else {
            let ann = left_annihilator(&ctx, &b);
            if ann.is_empty() {
                ctx.random_class(&mut rng)
            } else {
                ann[n % ann.len()].clone()
            }
        };
        let c = annihilator_orthogonality_check(&a, &b).unwrap();
        assert_eq!(c.product_zero, c.orthogonal_to_all_shifts, "a={a} b={b}");
        zero_products += c.product_zero as u32;
    }
    assert!(zero_products > 100);
}

/// Nonzero classes a with a ⋆ b = 0, from the nullspace of right multiplication by b.
fn left_annihilator(
    ctx: &QuotientContext,
    b: &skewcode::quotient::ResidueClass,
) -> Vec<skewcode::quotient::ResidueClass> {
    let (l, s) = ctx.shape();
    let ring = ctx.ring();
    let images: Vec<Codeword> = (0..l * s)
        .map(|n| {
            let e = ctx
                .reduce(&ctx.skew().monomial(ring.one(), (n / s) as i64, (n % s) as i64))
                .unwrap();
            e.star_mul_mod(b).unwrap().to_array()
        })
        .collect();
    // Right multiplication by b is linear, so its kernel is the nullspace of
    // the transposed image matrix.
    let m = arrays_to_matrix(ctx, &images).unwrap();
    let transposed: Vec<Codeword> = (0..l * s)
        .map(|c| row_to_array(ctx, &(0..l * s).map(|r| m.get(r, c)).collect::<Vec<_>>()))
        .collect();
    let kernel = arrays_to_matrix(ctx, &transposed).unwrap().nullspace().unwrap();
    kernel
        .rows()
        .map(|r| ctx.from_array(&row_to_array(ctx, r)).unwrap())
        .collect()
}

/// For central g the left ideal ⟨g⟩ is also closed under right multiplication.
#[test]
fn central_generators_give_two_sided_ideals() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for ctx in [context("gf4", 4, 4, "1", "1"), context("gf9", 4, 2, "2", "1")] {
        let r = ctx.skew();
        let ring = ctx.ring();
        let prime: Vec<_> = ring
            .elements()
            .unwrap()
            .into_iter()
            .filter(|&c| ring.frobenius(c, 1) == c)
            .collect();
        for _ in 0..50 {
            let g = r.from_terms((0..4).map(|_| {
                let (i, j) = (2 * rng.gen_range(0..3i64), 2 * rng.gen_range(0..3i64));
                (QuasiDegree::new(i, j), prime[rng.gen_range(0..prime.len())])
            }));
            assert!(g.is_central().unwrap());
            let span = left_ideal_span(&ctx, &g).unwrap();
            let mut right = vec![r.x(), r.y()];
            right.extend(ring.elements().unwrap().into_iter().map(|c| r.constant(c)));
            for row in span.rows() {
                let f = ctx.from_array(&row_to_array(&ctx, row)).unwrap().lift();
                for m in &right {
                    let img = ctx.reduce(&(&f * m)).unwrap().to_array();
                    assert!(span.row_space_contains(img.as_flat()).unwrap(), "g={g}");
                }
            }
        }
    }
}
