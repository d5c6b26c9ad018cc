//! Randomized invariants across modules.

use proptest::prelude::*;

use fracgs::ccdiag::{ball_mass, concentration_function, recenter, split_sequence};
use fracgs::energy::{energy, lagrange_multiplier};
use fracgs::field::{frac_kinetic, translate};
use fracgs::{minimize, normalize_mass, Field, FlowConfig, Grid, NonlinearitySpec};

fn grid() -> Grid {
    Grid::line(40.0, 256, 0.5).unwrap()
}

// bumps stay resolved and decay before the box edge, so the Nyquist bin,
// which a fractional shift cannot carry, holds no measurable mass
prop_compose! {
    fn bumpy()(bumps in prop::collection::vec((-2.0..2.0f64, -8.0..8.0f64, 0.8..2.5f64), 1..5))
        -> Field {
        Field::from_fn(grid(), |x| {
            bumps.iter().map(|(a, c, w)| a * (-((x[0] - c) / w).powi(2)).exp()).sum::<f64>() + 1e-3
        })
        .unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn concentration_is_monotone_and_bounded(u in bumpy(), r1 in 0.1..19.0f64, dr in 0.0..1.0f64) {
        let r2 = (r1 + dr).min(20.0);
        let (q1, _) = concentration_function(&u, r1).unwrap();
        let (q2, y) = concentration_function(&u, r2).unwrap();
        prop_assert!(q1 <= q2 + 1e-12 * u.mass());
        prop_assert!(q2 >= 0.0 && q2 <= u.mass());
        prop_assert!((ball_mass(&u, &y, r2) - q2).abs() <= 1e-9 * u.mass());
    }

    #[test]
    fn splitting_never_creates_mass(u in bumpy(), y in -20.0..20.0f64, r0 in 0.5..3.0f64, extra in 0.1..4.0f64) {
        let rn = 2.0 * r0 + extra;
        let (v, w) = split_sequence(&u, &[y, 0.0], r0, rn).unwrap();
        let lost = u.mass() - v.mass() - w.mass();
        let annulus = ball_mass(&u, &[y, 0.0], 2.0 * rn) - ball_mass(&u, &[y, 0.0], r0);
        prop_assert!(lost >= -1e-12 && lost <= annulus + 1e-12);
        for j in 0..u.grid().len() {
            prop_assert!(v.values()[j] == 0.0 || w.values()[j] == 0.0);
        }
    }

    #[test]
    fn translation_preserves_mass_kinetic_and_energy(u in bumpy(), shift in -30.0..30.0f64) {
        let t = translate(&u, [shift, 0.0]);
        let spec = NonlinearitySpec::pure_power(1.0);
        prop_assert!((t.mass() - u.mass()).abs() <= 1e-12 * u.mass());
        prop_assert!((frac_kinetic(&t) - frac_kinetic(&u)).abs() <= 1e-11 * frac_kinetic(&u));
        let r = recenter(&u, &[shift, 0.0]);
        prop_assert!((frac_kinetic(&r) - frac_kinetic(&u)).abs() <= 1e-11 * frac_kinetic(&u));
        // J is exactly invariant only under shifts by whole cells
        let cells = (shift / u.grid().spacing()).round();
        let g = translate(&u, [cells * u.grid().spacing(), 0.0]);
        let (a, b) = (energy(&u, &spec).unwrap().total, energy(&g, &spec).unwrap().total);
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn projected_gradient_is_orthogonal(u in bumpy()) {
        let spec = NonlinearitySpec::pure_power(1.0);
        let lambda = lagrange_multiplier(&u, &spec).unwrap();
        let g = fracgs::energy::gradient(&u, &spec).unwrap().add_scaled(-lambda, &u);
        prop_assert!(g.inner(&u).abs() <= 1e-10 * (g.l2_norm() * u.l2_norm() + 1e-300));
    }

    #[test]
    fn normalization_hits_the_mass(u in bumpy(), c2 in 0.01..50.0f64) {
        let v = normalize_mass(&u, c2).unwrap();
        prop_assert!((v.mass() - c2).abs() <= 1e-12 * c2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn flow_traces_are_monotone_and_on_the_sphere(c2 in 1.0..8.0f64, seed in 0u64..100) {
        let cfg = FlowConfig {
            max_iters: 300,
            restarts: 2,
            seed,
            snapshot_every: Some(10),
            ..FlowConfig::with_mass(c2)
        };
        let run = minimize(&NonlinearitySpec::pure_power(1.0), Grid::line(40.0, 256, 0.5).unwrap(), &cfg).unwrap();
        prop_assert!(run.energy_trace.windows(2).all(|w| w[1] <= w[0]));
        for u in &run.snapshots {
            prop_assert!((u.mass() - c2).abs() <= 1e-10 * c2);
        }
        let h0 = run.hs_trace[0];
        prop_assert!(run.hs_trace.iter().all(|h| *h <= 10.0 * h0));
    }
}
