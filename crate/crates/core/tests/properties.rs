use lmo_core::diagram::{canonicalize, rat, standard_corpus, DiagramSum};
use lmo_core::freelie::{bracket, is_lie_element, NcPoly};
use lmo_core::homology::{
    apply_move, lens_torsion_data, mod1, mat_mul, smith_normal_form, torsion_data_from_matrix, IntMatrix, KirbyMove,
    LinkingMatrix,
};
use lmo_core::weights::{theta_eval, theta_eval_float, w_cyclic};
use num_integer::gcd;
use num_rational::{BigRational, Rational64};
use proptest::prelude::*;

fn arb_sum() -> impl Strategy<Value = DiagramSum> {
    let n = standard_corpus().len();
    prop::collection::vec((0..n, -5i64..=5, 1i64..=4), 0..5).prop_map(|terms| {
        let mut s = DiagramSum::zero();
        for (i, num, den) in terms {
            s.add_graph(&standard_corpus()[i], &rat(num, den)).unwrap();
        }
        s
    })
}

fn arb_q() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn arb_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(m, n)| prop::collection::vec(prop::collection::vec(-9i64..=9, n), m))
}

fn arb_symmetric() -> impl Strategy<Value = LinkingMatrix> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec(-5i64..=5, n * n).prop_map(move |v| {
            let mut e = vec![vec![0; n]; n];
            for i in 0..n {
                for j in i..n {
                    e[i][j] = v[i * n + j];
                    e[j][i] = v[i * n + j];
                }
            }
            LinkingMatrix { n, entries: e }
        })
    })
}

fn arb_poly() -> impl Strategy<Value = NcPoly> {
    prop::collection::vec((prop::collection::vec(0u8..=1, 0..=2), -3i64..=3), 0..4).prop_map(|terms| {
        let mut p = NcPoly::zero();
        for (w, c) in terms {
            p.add_term(w, rat(c, 1));
        }
        p
    })
}

fn arb_lie() -> impl Strategy<Value = NcPoly> {
    let (x, y) = (NcPoly::x(), NcPoly::y());
    let xy = bracket(&x, &y);
    let basis = [x.clone(), y.clone(), xy.clone(), bracket(&x, &xy), bracket(&y, &xy)];
    prop::collection::vec(-3i64..=3, basis.len()).prop_map(move |cs| {
        basis.iter().zip(cs).fold(NcPoly::zero(), |acc, (b, c)| &acc + &b.scale(&rat(c, 1)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn sums_form_a_vector_space(a in arb_sum(), b in arb_sum(), c in arb_sum(), r in arb_q(), s in arb_q()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!((&a + &b).scale(&r), &a.scale(&r) + &b.scale(&r));
        prop_assert_eq!(a.scale(&(&r + &s)), &a.scale(&r) + &a.scale(&s));
        prop_assert_eq!(a.scale(&(&r * &s)), a.scale(&r).scale(&s));
        prop_assert_eq!(a.scale(&rat(1, 1)), a.clone());
        prop_assert!(a.scale(&rat(0, 1)).is_zero());
    }

    #[test]
    fn canonical_form_is_idempotent(i in 0..standard_corpus().len()) {
        let c = canonicalize(&standard_corpus()[i]).unwrap();
        let d = canonicalize(&c.graph).unwrap();
        prop_assert_eq!(&d.graph, &c.graph);
        prop_assert_eq!(d.sign, 1);
    }

    #[test]
    fn transposition_flips_sign(i in 0..standard_corpus().len(), v in 0usize..4, k in 0usize..3) {
        let g = &standard_corpus()[i];
        prop_assume!(g.num_vertices() > 0);
        let mut h = g.clone();
        let v = v % h.num_vertices();
        h.vertices[v].swap(k, (k + 1) % 3);
        let (a, b) = (canonicalize(g).unwrap(), canonicalize(&h).unwrap());
        prop_assert_eq!(&a.graph, &b.graph);
        prop_assert_eq!(a.sign, -b.sign);
        let ds = DiagramSum::from_graph(&h).unwrap();
        prop_assert_eq!(ds, DiagramSum::from_graph(g).unwrap().scale(&rat(-1, 1)));
    }

    #[test]
    fn rotation_keeps_sign(i in 0..standard_corpus().len(), v in 0usize..4) {
        let g = &standard_corpus()[i];
        prop_assume!(g.num_vertices() > 0);
        let mut h = g.clone();
        let v = v % h.num_vertices();
        h.vertices[v].rotate_left(1);
        prop_assert_eq!(canonicalize(&h).unwrap(), canonicalize(g).unwrap());
    }

    #[test]
    fn smith_normal_form_postcondition(b in arb_matrix()) {
        let s = smith_normal_form(&b);
        prop_assert_eq!(mat_mul(&mat_mul(&s.u, &b), &s.v), s.d.clone());
        let m = b.len();
        let eye: IntMatrix = (0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect();
        prop_assert_eq!(mat_mul(&s.u, &s.u_inv), eye);
        let diag: Vec<i64> = (0..m.min(b[0].len())).map(|i| s.d[i][i]).collect();
        for (i, row) in s.d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if i != j {
                    prop_assert_eq!(x, 0);
                }
            }
        }
        prop_assert!(diag.iter().all(|&x| x >= 0));
        for w in diag.windows(2) {
            if w[0] == 0 {
                prop_assert_eq!(w[1], 0);
            } else {
                prop_assert_eq!(w[1] % w[0], 0);
            }
        }
    }

    #[test]
    fn kirby_moves_keep_the_group(b in arb_symmetric(), seq in prop::collection::vec((0usize..8, 0usize..8, any::<bool>(), any::<bool>()), 0..8)) {
        let before = torsion_data_from_matrix(&b).unwrap();
        let mut m = b.clone();
        for (i, j, stab, pos) in seq {
            let sign = if pos { 1 } else { -1 };
            let mv = if stab || m.n < 2 {
                KirbyMove::Stabilize { sign }
            } else {
                let i = i % m.n;
                let j = (i + 1 + j % (m.n - 1)) % m.n;
                KirbyMove::Slide { i, j, sign }
            };
            m = apply_move(&m, mv).unwrap();
        }
        let after = torsion_data_from_matrix(&m).unwrap();
        prop_assert_eq!(&after.invariant_factors, &before.invariant_factors);
        prop_assert_eq!(after.free_rank, before.free_rank);
        let (dm, db) = (m.determinant(), b.determinant());
        prop_assert_eq!(dm.magnitude(), db.magnitude());
    }

    #[test]
    fn lens_refinement_polarizes(p in 2u64..=50, q in 1i64..100) {
        prop_assume!(gcd(p as i64, q) == 1 && (p % 2 == 0 || q % 2 == 0));
        let t = lens_torsion_data(p, q).unwrap();
        for a in 0..p {
            prop_assert_eq!(t.qform(&[a]), t.qform(&[(p - a) % p]));
            for b in 0..p {
                let lhs = t.qform(&[(a + b) % p]).unwrap() - t.qform(&[a]).unwrap() - t.qform(&[b]).unwrap();
                prop_assert_eq!(mod1(lhs), t.bilinear(&[a], &[b]).unwrap());
            }
        }
    }

    #[test]
    fn w_is_symmetric_and_odd(p in 1u64..=20, a in 0u64..20, b in 0u64..20, c in 0u64..20) {
        let (a, b, c) = (a % p, b % p, c % p);
        let w = w_cyclic(p, a, b, c);
        for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            prop_assert_eq!(w_cyclic(p, x, y, z), w);
        }
        let neg = |g: u64| (p - g) % p;
        prop_assert_eq!(w_cyclic(p, neg(a), neg(b), neg(c)), -w);
    }

    #[test]
    fn theta_conjugates_with_q(p in 1u64..=40, q in 1i64..80) {
        prop_assume!(gcd(p as i64, q) == 1);
        let a = theta_eval(&lens_torsion_data(p, q).unwrap()).unwrap();
        let b = theta_eval(&lens_torsion_data(p, -q).unwrap()).unwrap();
        prop_assert!(a.dist(&b.conj()) < 1e-15);
        let c = theta_eval(&lens_torsion_data(p, q + 2 * p as i64).unwrap()).unwrap();
        prop_assert_eq!(a.exact, c.exact);
        let (re, im) = theta_eval_float(&lens_torsion_data(p, q).unwrap()).unwrap();
        prop_assert!((a.re - re).abs() < 1e-12 && (a.im - im).abs() < 1e-12);
    }

    #[test]
    fn bracket_is_antisymmetric_and_jacobi(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert!((&bracket(&a, &b) + &bracket(&b, &a)).is_zero());
        let j = &(&bracket(&a, &bracket(&b, &c)) + &bracket(&b, &bracket(&c, &a))) + &bracket(&c, &bracket(&a, &b));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn brackets_of_lie_elements_are_lie(a in arb_lie(), b in arb_lie()) {
        prop_assert!(is_lie_element(&a));
        prop_assert!(is_lie_element(&bracket(&a, &b)));
    }
}

#[test]
fn odd_lens_refinement_is_not_even() {
    // on least residues qg²/(2p) and q(p-g)²/(2p) differ by 1/2 when p·q is odd
    for (p, q) in [(3u64, 1i64), (5, 3), (25, 9), (7, 1)] {
        let t = lens_torsion_data(p, q).unwrap();
        for g in 1..p {
            let d = mod1(t.qform(&[g]).unwrap() - t.qform(&[p - g]).unwrap());
            assert_eq!(d, Rational64::new(1, 2));
        }
    }
}
