use std::sync::Arc;

use proptest::prelude::*;
use uqsl21::braid::{braiding, yang_baxter_residual};
use uqsl21::catops::{decompose, hom_space, hom_space_parity, negligible_rank, negligible_rank_parity, Morphism};
use uqsl21::charb::{chi_prefactor, chi_q, lift_block_sum, verify_multiplicativity, verify_tensor_reduction, ModuleCache};
use uqsl21::linalg::SparseMat;
use uqsl21::mtrace::{mdim, mtrace, partial_trace_right, qtrace, s_prime_between};
use uqsl21::repmod::{build_typical_rep, nilpotency_check, tensor, verify_relations, Gen, SimpleLabel, WeightModule};
use uqsl21::scalar::{int, rat, CycScalar, Rational, RootConfig};
use uqsl21::verify::braiding_config;

fn typical(cfg: &RootConfig, n: u32, a: &Rational) -> Arc<WeightModule> {
    Arc::new(build_typical_rep(cfg, n, a).unwrap())
}

fn product(a: &Arc<WeightModule>, b: &Arc<WeightModule>) -> Arc<WeightModule> {
    Arc::new(tensor(a, b).unwrap())
}

/// k/d with k not divisible by the odd denominator d, so alpha avoids (1/2)Z.
fn generic_alpha() -> impl Strategy<Value = Rational> {
    (prop::sample::select(vec![3i64, 5, 7]), 1i64..7, -1i64..2)
        .prop_filter_map("numerator divisible by denominator", |(d, k, s)| {
            (k % d != 0).then(|| rat(k + s * d, d))
        })
}

/// Two alphas over a common odd denominator whose sum stays generic.
fn generic_pair() -> impl Strategy<Value = (Rational, Rational)> {
    (prop::sample::select(vec![3i64, 5, 7]), 1i64..7, 1i64..7).prop_filter_map("non-generic sum", |(d, a, b)| {
        (a % d != 0 && b % d != 0 && (a + b) % d != 0).then(|| (rat(a, d), rat(b, d)))
    })
}

/// Three alphas over a common odd denominator with generic pairwise sums.
fn generic_triple() -> impl Strategy<Value = (Rational, Rational, Rational)> {
    (prop::sample::select(vec![5i64, 7]), 1i64..7, 1i64..7, 1i64..7).prop_filter_map("non-generic sum", |(d, a, b, c)| {
        let ok = [a, b, c].iter().all(|x| x % d != 0) && [a + b, b + c, a + c].iter().all(|x| x % d != 0);
        ok.then(|| (rat(a, d), rat(b, d), rat(c, d)))
    })
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..10, 1i64..5).prop_map(|(a, b)| rat(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn scalar_json_round_trip(
        l in 3u32..8,
        bound in prop::sample::select(vec![1u64, 3, 5]),
        coeffs in prop::collection::vec(small_rational(), 0..12),
    ) {
        let cfg = RootConfig::new(l, bound).unwrap();
        let field = cfg.field();
        let big: Vec<_> = coeffs.iter().cloned().collect();
        let x = CycScalar::from_coeffs(field, &big);
        let back = CycScalar::from_json(&x.to_json()).unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert_eq!(CycScalar::from_json_in(field, &x.to_json()).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn q_power_is_a_homomorphism(l in 3u32..8, a in -40i64..40, b in -40i64..40, den in prop::sample::select(vec![1i64, 3, 5, 15])) {
        let cfg = RootConfig::new(l, 15).unwrap();
        let (x, y) = (rat(a, den), rat(b, den));
        let lhs = cfg.q_power(&x).unwrap() * cfg.q_power(&y).unwrap();
        prop_assert_eq!(lhs, cfg.q_power(&(&x + &y)).unwrap());
        prop_assert!((cfg.q_power(&x).unwrap() * cfg.q_power(&-&x).unwrap()).is_one());
    }

    #[test]
    fn quantum_integer_product_expands(l in 3u32..8, m in 1i64..9, n in 1i64..9) {
        // [m][n] = sum_{k=0}^{min-1} [m+n-1-2k]
        let cfg = RootConfig::new(l, 1).unwrap();
        let lhs = cfg.qint_int(m) * cfg.qint_int(n);
        let rhs = (0..m.min(n)).fold(cfg.zero(), |acc, k| acc + cfg.qint_int(m + n - 1 - 2 * k));
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn lift_block_sum_is_minus_two_l_prime() {
    for l in 3..=7 {
        let cfg = RootConfig::new(l, 1).unwrap();
        assert_eq!(lift_block_sum(&cfg), cfg.int(-2 * cfg.l_prime() as i64), "l = {l}");
    }
}

#[test]
fn character_squares_over_lift_block() {
    // sum_{m=0}^{l'-1} chi_q(m)^2 = -2 l' c^2 / (q - q^{-1})^2
    for l in 3..=8 {
        let cfg = RootConfig::new(l, 1).unwrap();
        let sum = (0..cfg.l_prime()).fold(cfg.zero(), |acc, m| {
            let c = chi_q(&cfg, m).unwrap();
            acc + &c * &c
        });
        let c = chi_prefactor(&cfg);
        let inv = cfg.inv_brace_one();
        let want = (&c * &c * inv * inv).scale_int(-2 * cfg.l_prime() as i64);
        assert_eq!(sum, want, "l = {l}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relations_hold_on_random_modules(l in 3u32..6, n in 0u32..3, alpha in generic_alpha()) {
        let l_prime = if l % 2 == 0 { l / 2 } else { l };
        let n = n.min(l_prime - 1);
        let cfg = RootConfig::covering(l, [&alpha]).unwrap();
        let m = typical(&cfg, n, &alpha);
        let rep = verify_relations(&m);
        prop_assert!(rep.passed(), "{:?}", rep.failures());
        prop_assert!(nilpotency_check(&m).passed());
        prop_assert_eq!(m.dim(), 4 * (n as usize + 1));
    }

    #[test]
    fn quantum_dimension_vanishes(l in 3u32..8, n in 0u32..4, alpha in generic_alpha()) {
        let l_prime = if l % 2 == 0 { l / 2 } else { l };
        let n = n.min(l_prime - 1);
        let cfg = RootConfig::covering(l, [&alpha]).unwrap();
        let m = typical(&cfg, n, &alpha);
        prop_assert!(qtrace(&Morphism::identity(&m)).unwrap().is_zero());
    }

    #[test]
    fn tensor_is_strictly_associative(l in 3u32..5, a in generic_alpha(), b in generic_alpha(), c in generic_alpha()) {
        let cfg = RootConfig::covering(l, [&a, &b, &c]).unwrap();
        let (x, y, z) = (typical(&cfg, 0, &a), typical(&cfg, 0, &b), typical(&cfg, 0, &c));
        let left = tensor(&product(&x, &y), &z).unwrap();
        let right = tensor(&x, &product(&y, &z)).unwrap();
        prop_assert_eq!(left.parities(), right.parities());
        prop_assert_eq!(left.h_weights(), right.h_weights());
        for g in Gen::ALL {
            prop_assert_eq!(left.action(g), right.action(g), "{}", g.name());
        }
    }

    #[test]
    fn k2_power_l_is_additive_in_grading(l in 3u32..6, a in generic_alpha(), b in generic_alpha(), na in 0u32..2, nb in 0u32..2) {
        let cfg = RootConfig::covering(l, [&a, &b]).unwrap();
        let (x, y) = (typical(&cfg, na, &a), typical(&cfg, nb, &b));
        let xy = product(&x, &y);
        let scalar_of = |m: &WeightModule| {
            let k = m.action(Gen::K2);
            let mut p = SparseMat::identity(m.dim(), cfg.field());
            for _ in 0..l {
                p = p.mul(k);
            }
            let s = p.get(0, 0);
            assert_eq!(p, SparseMat::identity(m.dim(), cfg.field()).scale(&s));
            s
        };
        let want = scalar_of(&x) * scalar_of(&y);
        prop_assert_eq!(scalar_of(&xy), want.clone());
        let g = x.grading().unwrap() + y.grading().unwrap();
        prop_assert_eq!(cfg.q_power(&(&g * int(l as i64))).unwrap(), want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn decompositions_resolve_the_identity(l in 3u32..6, (a, b) in generic_pair(), n in 0u32..3) {
        let l_prime = if l % 2 == 0 { l / 2 } else { l };
        let n = n.min(l_prime - 2);
        let cfg = RootConfig::covering(l, [&a, &b]).unwrap();
        let m = product(&typical(&cfg, 0, &a), &typical(&cfg, n, &b));
        let rec = decompose(&m).unwrap();
        prop_assert!(rec.is_complete());
        prop_assert!(rec.verify().unwrap());
        for s in &rec.summands {
            for (i, p) in s.injections.iter().zip(&s.projections) {
                prop_assert!(i.is_intertwiner() && p.is_intertwiner());
            }
        }
        let covered: usize = rec.summands.iter().map(|s| s.multiplicity() * s.module.dim()).sum();
        prop_assert_eq!(covered, m.dim());
    }

    #[test]
    fn cancellation_of_label_multisets((a, b, c) in generic_triple()) {
        // A (+) B and A (+) C agree as label multisets exactly when B and C do.
        let cfg = RootConfig::covering(3, [&a, &b, &c]).unwrap();
        let (x, y, z) = (typical(&cfg, 0, &a), typical(&cfg, 0, &b), typical(&cfg, 0, &c));
        let nonzero = |m: &Arc<WeightModule>| -> Vec<SimpleLabel> {
            let rec = decompose(m).unwrap();
            let mut out = Vec::new();
            for (label, k) in rec.label_multiset() {
                if !mdim(&cfg, &label).unwrap().is_zero() {
                    out.extend(std::iter::repeat(label).take(k));
                }
            }
            out
        };
        let common = nonzero(&product(&x, &z));
        let lhs_b = nonzero(&product(&x, &y));
        let rhs_c = nonzero(&product(&y, &x));
        let other = nonzero(&product(&y, &z));
        let sum = |p: &[SimpleLabel], q: &[SimpleLabel]| {
            let mut v: Vec<SimpleLabel> = p.iter().chain(q).cloned().collect();
            v.sort();
            v
        };
        let minus = |mut total: Vec<SimpleLabel>, part: &[SimpleLabel]| {
            for x in part {
                let at = total.iter().position(|y| y == x).expect("part of the multiset");
                total.remove(at);
            }
            total
        };
        let left = sum(&common, &lhs_b);
        prop_assert_eq!(&left, &sum(&common, &rhs_c));
        let mut sorted_b = lhs_b.clone();
        sorted_b.sort();
        let mut reduced = minus(left.clone(), &common);
        reduced.sort();
        prop_assert_eq!(&reduced, &sorted_b);
        let mut sorted_other = other.clone();
        sorted_other.sort();
        prop_assert_eq!(sum(&common, &other) == left, sorted_other == sorted_b);
    }
}

#[test]
fn boundary_product_contains_negligible_summand() {
    for (l, a, b) in [(3, rat(1, 3), rat(1, 5)), (4, rat(1, 5), rat(2, 7)), (5, rat(2, 3), rat(1, 7))] {
        let cfg = RootConfig::covering(l, [&a, &b]).unwrap();
        let l_prime = cfg.l_prime();
        let m = product(&typical(&cfg, 0, &a), &typical(&cfg, l_prime - 2, &b));
        let rec = decompose(&m).unwrap();
        let top = rec
            .summands
            .iter()
            .find(|s| s.label.n == l_prime - 1)
            .unwrap_or_else(|| panic!("no V({}, .) summand at l = {l}", l_prime - 1));
        assert!(mdim(&cfg, &top.label).unwrap().is_zero());
        assert_eq!(negligible_rank(&top.module, &top.module).unwrap(), (1, 1), "l = {l}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn trace_pairing_has_full_rank(l in 3u32..5, (a, b) in generic_pair()) {
        let cfg = RootConfig::covering(l, [&a, &b]).unwrap();
        let (x, y) = (typical(&cfg, 0, &a), typical(&cfg, 0, &b));
        let xy = product(&x, &y);
        let rec = decompose(&xy).unwrap();
        for s in rec.summands.iter().filter(|s| s.label.n + 2 <= cfg.l_prime()) {
            let mut total = 0;
            for p in [0u8, 1] {
                let (dim, negligible) = negligible_rank_parity(&s.module, &xy, p).unwrap();
                prop_assert_eq!(negligible, 0, "{} parity {}", s.label, p);
                total += dim;
            }
            let copies: usize = rec.summands.iter().filter(|t| t.label == s.label).map(|t| t.multiplicity()).sum();
            prop_assert_eq!(total, copies);
        }
    }

    #[test]
    fn theta_graph_cuts_agree(l in 3u32..5, (a, b) in generic_pair()) {
        // d(k) <g o f> = (-1)^{|f||g|} d(i) <ptr_j(f o g)> for f: V_k -> V_i (x) V_j, g back.
        let cfg = RootConfig::covering(l, [&a, &b]).unwrap();
        let (vi, vj) = (typical(&cfg, 0, &a), typical(&cfg, 0, &b));
        let (li, _) = vi.typical_label().unwrap();
        let vij = product(&vi, &vj);
        let rec = decompose(&vij).unwrap();
        for s in &rec.summands {
            let vk = &s.module;
            let dk = mdim(&cfg, &s.label).unwrap();
            let di = mdim(&cfg, li).unwrap();
            for p in [0u8, 1] {
                let fwd = hom_space_parity(vk, &vij, p).unwrap();
                let back = hom_space_parity(&vij, vk, p).unwrap();
                for f in &fwd.morphisms {
                    for g in &back.morphisms {
                        let cut_k = &dk * &g.compose(f).unwrap().scalar().unwrap();
                        let cut_i = &di * &partial_trace_right(&f.compose(g).unwrap()).unwrap().scalar().unwrap();
                        let cut_i = if p == 1 { -cut_i } else { cut_i };
                        prop_assert_eq!(cut_k, cut_i);
                    }
                }
            }
        }
    }

    #[test]
    fn modified_trace_commutes_with_partial_trace(l in 3u32..6, (a, b) in generic_pair(), coeffs in prop::collection::vec(-3i64..4, 8)) {
        let cfg = RootConfig::covering(l, [&a, &b]).unwrap();
        let uw = product(&typical(&cfg, 0, &a), &typical(&cfg, 1.min(cfg.l_prime() - 2), &b));
        let basis = hom_space(&uw, &uw).unwrap();
        let mut f = Morphism::zero(&uw, &uw, 0);
        for (b, k) in basis.morphisms.iter().zip(&coeffs) {
            f = f.axpy(&cfg.int(*k), b).unwrap();
        }
        prop_assert_eq!(mtrace(&f).unwrap(), mtrace(&partial_trace_right(&f).unwrap()).unwrap());
    }
}

/// d(A) S'_{B,A} = d(B) S'_{A,B}, 20 random pairs for each l in {3, 4, 5}.
#[test]
fn s_prime_symmetry() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for l in [3u32, 4, 5] {
        let mut done = 0;
        while done < 20 {
            let d = [3i64, 5][rng.gen_range(0..2)];
            let (x, y) = (rng.gen_range(1..d), rng.gen_range(1..d));
            let (a, b) = (rat(x + d * rng.gen_range(0..2), d), rat(y, d));
            if (x + y) % d == 0 {
                continue;
            }
            let l_prime = if l % 2 == 0 { l / 2 } else { l };
            let (na, nb) = (rng.gen_range(0..l_prime.min(2)), 0);
            let cfg = braiding_config(l, &[&a, &b]).unwrap();
            let (s_ba, s_ab) = s_prime_between(&cfg, (na, &a), (nb, &b)).unwrap();
            let da = mdim(&cfg, &SimpleLabel::new(na, a.clone(), l)).unwrap();
            let db = mdim(&cfg, &SimpleLabel::new(nb, b.clone(), l)).unwrap();
            assert_eq!(da * s_ba, db * s_ab, "l = {l}, A = V({na},{a}), B = V({nb},{b})");
            done += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn braiding_is_invertible_and_satisfies_yang_baxter(l in 3u32..6, (a, b) in generic_pair()) {
        let cfg = braiding_config(l, &[&a, &b]).unwrap();
        let (x, y) = (typical(&cfg, 0, &a), typical(&cfg, 0, &b));
        for (m1, m2) in [(&x, &y), (&y, &x)] {
            let c = braiding(m1, m2).unwrap();
            prop_assert!(c.morphism.is_intertwiner());
            prop_assert!(c.inverse().unwrap().compose(&c.morphism).unwrap().matrix().is_identity());
        }
        prop_assert!(yang_baxter_residual(&x).unwrap().is_zero());
    }

    #[test]
    fn braiding_is_natural((a, b, c) in generic_triple(), coeffs in prop::collection::vec(-3i64..4, 4)) {
        let cfg = braiding_config(3, &[&a, &b, &c, &(&a + &b)]).unwrap();
        let (x, y, z) = (typical(&cfg, 0, &a), typical(&cfg, 0, &b), typical(&cfg, 0, &c));
        let xy = product(&x, &y);
        let basis = hom_space(&xy, &xy).unwrap();
        let mut f = Morphism::zero(&xy, &xy, 0);
        for (h, k) in basis.morphisms.iter().zip(&coeffs) {
            f = f.axpy(&cfg.int(*k), h).unwrap();
        }
        let c = braiding(&xy, &z).unwrap();
        let id = SparseMat::identity(z.dim(), cfg.field());
        let lhs = c.matrix().mul(&SparseMat::kron(f.matrix(), &id));
        let rhs = SparseMat::kron(&id, f.matrix()).mul(c.matrix());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn representative_change_differs_by_block_scalars(l in 3u32..5, (a, b) in generic_pair()) {
        let shifted = &a + int(l as i64);
        let cfg = braiding_config(l, &[&a, &b, &shifted]).unwrap();
        let (x, x2, y) = (typical(&cfg, 0, &a), typical(&cfg, 0, &shifted), typical(&cfg, 0, &b));
        prop_assert_eq!(x.action(Gen::E1), x2.action(Gen::E1));
        let c = braiding(&x, &y).unwrap();
        let c2 = braiding(&x2, &y).unwrap();
        let yx = c.morphism.target().clone();
        let phi = Morphism::even(yx.clone(), yx.clone(), c2.matrix().mul(&c.inverse().unwrap().matrix().clone())).unwrap();
        prop_assert!(phi.is_intertwiner());
        let rec = decompose(&yx).unwrap();
        for s in &rec.summands {
            for (i, p) in s.injections.iter().zip(&s.projections) {
                let block = p.compose(&phi.compose(i).unwrap()).unwrap();
                let k = block.scalar().unwrap();
                prop_assert!(!k.is_zero());
            }
        }
    }
}

#[test]
fn character_multiplicativity_at_l3() {
    let cfg = RootConfig::covering(3, [&rat(1, 5), &rat(2, 5), &rat(1, 7), &rat(3, 7)]).unwrap();
    let mut cache = ModuleCache::new(&cfg);
    for (a, b) in [(rat(1, 5), rat(2, 5)), (rat(1, 7), rat(3, 7)), (rat(2, 5), rat(2, 5))] {
        for m in 0..=1 {
            for n in 0..=1 {
                let left = SimpleLabel::new(m, a.clone(), 3);
                let right = SimpleLabel::new(n, b.clone(), 3);
                let rep = verify_multiplicativity(&mut cache, &left, &right).unwrap();
                assert!(rep.passed(), "{:?}", rep.failures());
            }
        }
    }
}

#[test]
fn tensor_reduction_at_l3_and_l5() {
    for l in [3u32, 5] {
        let (a, b) = (rat(1, 5), rat(2, 5));
        let cfg = RootConfig::covering(l, [&a, &b]).unwrap();
        let mut cache = ModuleCache::new(&cfg);
        for (m, n) in [(0, 0), (0, 1), (1, 1)] {
            let rep =
                verify_tensor_reduction(&mut cache, &SimpleLabel::new(m, a.clone(), l), &SimpleLabel::new(n, b.clone(), l))
                    .unwrap();
            assert!(rep.passed(), "l = {l}: {:?}", rep.failures());
        }
    }
}
