//! Property tests for the algebraic and order invariants.

use std::collections::BTreeSet;

use proptest::prelude::*;

use bernstein_core::analyzer::{baire_witness, cover, jump_set};
use bernstein_core::bv::{helly_select, jordan_decompose, riemann_sum, variation_profile, Exactness, TagRule};
use bernstein_core::engine::{bernstein_eval, bernstein_eval_float, bernstein_eval_summed, bernstein_polynomial};
use bernstein_core::gallery::{GalleryFn, HeightedSet, PiecewiseFn, Polynomial, ThomaeFn, WeightRule};
use bernstein_core::scalar::{pmf_row, second_moment, Point, QuadraticSurd};
use bernstein_core::ExactScalar;

fn q(n: i64, d: i64) -> ExactScalar {
    ExactScalar::new(n, d)
}

fn unit() -> impl Strategy<Value = ExactScalar> {
    (1i64..=60).prop_flat_map(|d| (0..=d).prop_map(move |n| q(n, d)))
}

fn interior() -> impl Strategy<Value = ExactScalar> {
    (2i64..=60).prop_flat_map(|d| (1..d).prop_map(move |n| q(n, d)))
}

fn small() -> impl Strategy<Value = ExactScalar> {
    (-8i64..=8, 1i64..=8).prop_map(|(n, d)| q(n, d))
}

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(small(), 1..=4).prop_map(Polynomial::new)
}

/// Jump locations on a 1/97 lattice with small rational sizes.
fn steps() -> impl Strategy<Value = PiecewiseFn> {
    (small(), prop::collection::btree_set(1i64..97, 0..8), prop::collection::vec(small(), 8)).prop_map(
        |(initial, locs, sizes): (ExactScalar, BTreeSet<i64>, Vec<ExactScalar>)| {
            let jumps: Vec<_> = locs.into_iter().zip(sizes).map(|(l, s)| (q(l, 97), s)).collect();
            PiecewiseFn::step(initial, &jumps).unwrap()
        },
    )
}

/// Steps plus a polynomial whose turning points are rational: `c (x - a)^2 + b x`.
fn bv_fixture() -> impl Strategy<Value = PiecewiseFn> {
    (steps(), unit(), small(), small()).prop_map(|(s, a, c, b)| {
        let p = Polynomial::new(vec![&c * &a * &a, -(q(2, 1) * &c * &a) + &b, c]);
        s.add(&PiecewiseFn::polynomial(p))
    })
}

fn point() -> impl Strategy<Value = Point> {
    prop_oneof![
        unit().prop_map(Point::Rational),
        (unit(), 1i64..=5, prop::sample::select(vec![2u64, 3, 5, 7])).prop_map(|(r, c, d)| {
            Point::Surd(QuadraticSurd::new(r, q(c, 17), d).unwrap())
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn pmf_sums_to_one_with_known_variance(n in 1u64..=60, x in unit()) {
        prop_assert_eq!(pmf_row(n, &x).unwrap().sum(), ExactScalar::one());
        let expected = &x * (ExactScalar::one() - &x) / ExactScalar::from_integer(n);
        prop_assert_eq!(second_moment(n, &x).unwrap(), expected);
    }

    #[test]
    fn bernstein_is_linear(a in steps(), b in bv_fixture(), c in small(), n in 1u64..=40, x in unit()) {
        let (fa, fb) = (GalleryFn::Piecewise(a.clone()), GalleryFn::Piecewise(b.clone()));
        let combo = GalleryFn::Piecewise(a.scale(&c).add(&b));
        let lhs = bernstein_eval(&combo, n, &x).unwrap();
        let rhs = &c * bernstein_eval(&fa, n, &x).unwrap() + bernstein_eval(&fb, n, &x).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bernstein_is_monotone_and_fixes_affine(a in steps(), shift in 0i64..=4, n in 1u64..=40, x in unit(), p in poly()) {
        let f = GalleryFn::Piecewise(a.clone());
        let g = GalleryFn::Piecewise(a.add(&PiecewiseFn::constant(q(shift, 1))));
        prop_assert!(bernstein_eval(&f, n, &x).unwrap() <= bernstein_eval(&g, n, &x).unwrap());
        let affine = Polynomial::new(p.coeffs().iter().take(2).cloned().collect());
        let fa = GalleryFn::Piecewise(PiecewiseFn::polynomial(affine.clone()));
        prop_assert_eq!(bernstein_eval(&fa, n, &x).unwrap(), affine.eval(&x));
    }

    #[test]
    fn closed_form_matches_summed(p in poly(), n in 1u64..=50, x in unit()) {
        let f = GalleryFn::Piecewise(PiecewiseFn::polynomial(p.clone()));
        prop_assert_eq!(bernstein_polynomial(&p, n, &x), bernstein_eval_summed(&f, n, &x).unwrap());
    }

    #[test]
    fn float_mode_tracks_exact(f in bv_fixture(), n in 1u64..=200, x in unit()) {
        let f = GalleryFn::Piecewise(f);
        let exact = bernstein_eval(&f, n, &x).unwrap().to_f64();
        let float = bernstein_eval_float(&f, n, &x).unwrap();
        prop_assert!((exact - float).abs() <= 1e-9 * (1.0 + exact.abs()), "{exact} vs {float}");
    }

    #[test]
    fn variation_refinement_never_decreases(f in bv_fixture(), grid in prop::collection::btree_set(1i64..120, 1..10), extra in 1i64..120) {
        let f = GalleryFn::Piecewise(f);
        let mut nodes: Vec<ExactScalar> = std::iter::once(0).chain(grid.iter().copied()).map(|i| q(i, 120)).collect();
        let coarse = variation_profile(&f, &nodes).unwrap();
        prop_assert!(coarse.entries.windows(2).all(|w| w[0].cumulative <= w[1].cumulative));
        let e = q(extra, 120);
        if let Err(pos) = nodes.binary_search(&e) {
            nodes.insert(pos, e);
        }
        let fine = variation_profile(&f, &nodes).unwrap();
        for c in &coarse.entries {
            let r = fine.entries.iter().find(|r| r.node == c.node).unwrap();
            prop_assert!(r.cumulative >= c.cumulative);
        }
        let p = f.as_piecewise().unwrap();
        let (total, _) = p.total_variation();
        for r in &fine.entries {
            prop_assert!(r.cumulative <= total);
            if r.flag == Exactness::Exact {
                prop_assert_eq!(&r.cumulative, &p.variation_to(&r.node).0);
            }
        }
    }

    #[test]
    fn jordan_parts_are_monotone_and_recombine(f in bv_fixture(), probes in prop::collection::btree_set(0i64..=200, 2..30)) {
        let gf = GalleryFn::Piecewise(f.clone());
        let (g, h) = jordan_decompose(&gf).unwrap();
        let xs: Vec<ExactScalar> = probes.into_iter().map(|i| q(i, 200)).collect();
        for w in xs.windows(2) {
            prop_assert!(g.eval(&w[0]).unwrap() <= g.eval(&w[1]).unwrap());
            prop_assert!(h.eval(&w[0]).unwrap() <= h.eval(&w[1]).unwrap());
        }
        for x in &xs {
            prop_assert_eq!(g.eval(x).unwrap() - h.eval(x).unwrap(), f.eval(x));
        }
        prop_assert!(g.eval(&ExactScalar::zero()).unwrap().is_zero());
    }

    #[test]
    fn jump_count_is_bounded_by_variation(f in steps(), k in 0u32..=10) {
        let (v, _) = f.total_variation();
        let scaled = if v > ExactScalar::one() { f.scale(&v.recip().unwrap()) } else { f };
        let d = jump_set(&GalleryFn::Piecewise(scaled), k).unwrap();
        prop_assert!(d.points.len() <= 1 << k);
    }

    #[test]
    fn helly_survivors_agree_within_tol(fs in prop::collection::vec(steps(), 3..10), grid in prop::collection::vec(unit(), 1..4)) {
        let fs: Vec<GalleryFn> = fs.into_iter().map(GalleryFn::Piecewise).collect();
        let tol = q(1, 4);
        if let Ok(sel) = helly_select(&fs, &grid, &tol) {
            prop_assert!(sel.indices.windows(2).all(|w| w[0] < w[1]));
            for x in &grid {
                let vals: Vec<ExactScalar> = sel.indices.iter().map(|&i| fs[i].eval(x).unwrap()).collect();
                let spread = vals.iter().max().unwrap() - vals.iter().min().unwrap();
                prop_assert!(spread < tol);
            }
        }
    }

    #[test]
    fn covers_stay_within_budget(points in prop::collection::vec(point(), 0..25), den in 1i64..=1_000_000) {
        let eps = q(1, den);
        let c = cover(&points, &eps).unwrap();
        prop_assert!(c.total_length < eps);
        prop_assert!(points.iter().all(|p| c.covers(p)));
    }

    #[test]
    fn baire_witness_avoids_every_set(sets in prop::collection::vec(prop::collection::vec(point(), 0..6), 0..5)) {
        let w = baire_witness(&sets);
        prop_assert!(w.is_positive() && w < ExactScalar::one());
        let wp = Point::Rational(w);
        prop_assert!(sets.iter().flatten().all(|p| p != &wp));
    }

    #[test]
    fn thomae_values_only_depend_on_rational_support(points in prop::collection::vec(point(), 1..10), n in 1u64..=64, x in unit()) {
        let mut pts = points;
        pts.retain(|p| p.in_closed(&ExactScalar::zero(), &ExactScalar::one()));
        pts.sort();
        pts.dedup();
        let heights = (0..pts.len() as u64).collect();
        let t = ThomaeFn::new(HeightedSet::new(pts, heights, None).unwrap(), WeightRule::Dyadic).unwrap();
        let r = GalleryFn::Thomae(t.rational_restriction());
        let t = GalleryFn::Thomae(t);
        prop_assert_eq!(bernstein_eval(&t, n, &x).unwrap(), bernstein_eval(&r, n, &x).unwrap());
    }

    #[test]
    fn riemann_sums_of_constants_are_exact(c in small(), den in 1i64..=40) {
        let f = GalleryFn::Piecewise(PiecewiseFn::constant(c.clone()));
        for rule in [TagRule::LeftEndpoint, TagRule::Midpoint, TagRule::AdversarialMaxOsc] {
            prop_assert_eq!(&riemann_sum(&f, &q(1, den), rule).unwrap(), &c);
        }
    }

    #[test]
    fn gallery_json_round_trips(f in bv_fixture(), x in interior()) {
        let g = GalleryFn::Piecewise(f);
        let back: GalleryFn = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        prop_assert_eq!(back.eval(&x).unwrap(), g.eval(&x).unwrap());
        prop_assert_eq!(back, g);
    }

    #[test]
    fn scalar_text_round_trips(n in -1_000_000i64..=1_000_000, d in 1i64..=1_000_000) {
        let x = q(n, d);
        prop_assert_eq!(x.to_string().parse::<ExactScalar>().unwrap(), x);
    }

    #[test]
    fn surd_order_agrees_with_floats(a in point(), b in point()) {
        let (fa, fb) = (a.to_f64(), b.to_f64());
        if (fa - fb).abs() > 1e-9 {
            prop_assert_eq!(a < b, fa < fb);
        }
    }
}
