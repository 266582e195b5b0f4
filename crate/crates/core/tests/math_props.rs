//! Property tests for the projection and the distribution primitives.

use proptest::prelude::*;
use qde_core::{laplace_cdf, laplace_pdf, laplace_quantile, BoxConstraint};

fn arb_box_and_points() -> impl Strategy<Value = (BoxConstraint, Vec<f64>, Vec<f64>)> {
    (1usize..=6).prop_flat_map(|n| {
        let coords = proptest::collection::vec((-5.0f64..5.0, 0.0f64..4.0), n);
        let xs = proptest::collection::vec(-20.0f64..20.0, n);
        let ys = proptest::collection::vec(-20.0f64..20.0, n);
        (coords, xs, ys).prop_map(|(coords, xs, ys)| {
            let lo: Vec<f64> = coords.iter().map(|&(l, _)| l).collect();
            let hi: Vec<f64> = coords.iter().map(|&(l, w)| l + w).collect();
            (BoxConstraint::new(lo, hi).unwrap(), xs, ys)
        })
    })
}

proptest! {
    #[test]
    fn projection_is_idempotent_and_feasible((b, x, _y) in arb_box_and_points()) {
        let p = b.project(&x);
        prop_assert!(b.contains(&p));
        prop_assert_eq!(b.project(&p), p);
    }

    #[test]
    fn projection_is_nonexpansive((b, x, y) in arb_box_and_points()) {
        let px = b.project(&x);
        let py = b.project(&y);
        let d_proj: f64 = px.iter().zip(&py).map(|(a, c)| (a - c) * (a - c)).sum();
        let d_orig: f64 = x.iter().zip(&y).map(|(a, c)| (a - c) * (a - c)).sum();
        prop_assert!(d_proj <= d_orig + 1e-12);
    }

    #[test]
    fn projection_minimizes_distance((b, x, y) in arb_box_and_points()) {
        // The clamp is at least as close to x as any other feasible point.
        let px = b.project(&x);
        let other = b.project(&y);
        let d_p: f64 = px.iter().zip(&x).map(|(a, c)| (a - c) * (a - c)).sum();
        let d_o: f64 = other.iter().zip(&x).map(|(a, c)| (a - c) * (a - c)).sum();
        prop_assert!(d_p <= d_o + 1e-12);
    }

    #[test]
    fn laplace_cdf_is_monotone_and_bounded(a in -40.0f64..40.0, b in -40.0f64..40.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (fa, fb) = (laplace_cdf(lo), laplace_cdf(hi));
        prop_assert!((0.0..=1.0).contains(&fa));
        prop_assert!((0.0..=1.0).contains(&fb));
        prop_assert!(fa <= fb);
    }

    #[test]
    fn laplace_quantile_roundtrip(u in 1e-9f64..1.0) {
        prop_assume!(u < 1.0 - 1e-12);
        prop_assert!((laplace_cdf(laplace_quantile(u)) - u).abs() < 1e-9);
    }

    #[test]
    fn laplace_pdf_is_symmetric(x in -40.0f64..40.0) {
        prop_assert_eq!(laplace_pdf(x), laplace_pdf(-x));
    }
}
