mod common;

use std::sync::OnceLock;

use common::{disc_f64, invert_f64, DISCRIMINANT_TABLE, JACOBIAN_TABLE};
use k3dyn::ball::{Ball, Precision};
use k3dyn::shadowing::{
    certify, coordinate_range_bound, error_model, maximize_on_real_locus, recheck, third_partials,
    Certification, CertifyConfig, ShadowingCertificate, ShadowingError,
};
use k3dyn::surface::PseudoOrbit;
use proptest::prelude::*;

fn run() -> &'static Certification {
    static RUN: OnceLock<Certification> = OnceLock::new();
    RUN.get_or_init(|| {
        let orbit = PseudoOrbit::default_orbit(Precision::DEFAULT);
        Certification::run(&orbit, &CertifyConfig::default()).expect("certification runs")
    })
}

#[test]
fn discriminant_rows_match_printed_table() {
    let ledger = &run().ledger;
    for (i, (row, printed)) in ledger.rows.iter().zip(DISCRIMINANT_TABLE).enumerate() {
        let got = [
            &row.value, &row.grad[0], &row.grad[1], &row.hess[0], &row.hess[1], &row.hess[2],
        ];
        for (k, (g, p)) in got.iter().zip(printed).enumerate() {
            assert!((g.mid_f64() - p).abs() <= 0.01, "row {i} column {k}: {} vs {p}", g.mid_f64());
        }
    }
    assert!((ledger.rows[5].value.mid_f64() - 10.43).abs() < 0.01);
}

#[test]
fn ledger_maxima_against_float_table() {
    let ledger = &run().ledger;
    let col_max = |cols: &[usize]| {
        DISCRIMINANT_TABLE
            .iter()
            .flat_map(|r| cols.iter().map(move |&c| r[c].abs()))
            .fold(0.0, f64::max)
    };
    assert!((ledger.k.mid_f64() - col_max(&[0])).abs() < 0.01);
    assert!((ledger.r.mid_f64() - col_max(&[1, 2])).abs() < 0.01);
    assert!((ledger.m.mid_f64() - col_max(&[3, 4, 5])).abs() < 0.01);
    assert!(ledger.r.upper_f64() < 163.0);
}

#[test]
fn inflated_bounds_dominate_sampled_values() {
    let c = run();
    let orbit = PseudoOrbit::default_orbit(Precision::DEFAULT);
    let eps = 1e-5;
    let a = 10.0;
    for chart in &orbit.charts {
        let (x0, y0) = (chart.base[0].mid_f64(), chart.base[1].mid_f64());
        for k in 0..16 {
            let t = k as f64 * std::f64::consts::TAU / 16.0;
            let (x, y) = (x0 + eps * t.cos(), y0 + eps * t.sin());
            let d = disc_f64(a, x, y);
            assert!(d.abs() <= c.ledger.inflated.value.upper_f64());
            assert!(d >= c.ledger.inflated.lower.lower_f64());
            assert!(d > 1.0);
        }
    }
    assert!(c.ledger.domain_min.is_positive());
}

#[test]
fn third_partial_supremum_brackets_grid_maximum() {
    let third = run().ledger.third;
    let mut best: f64 = 0.0;
    let n = 600;
    for i in 0..=n {
        for j in 0..=n {
            let x = -2.5 + 5.0 * i as f64 / n as f64;
            let y = -2.5 + 5.0 * j as f64 / n as f64;
            if disc_f64(10.0, x, y) >= 0.0 {
                let t = third_partials(&10.0, &x, &y);
                best = t.iter().fold(best, |m, v| m.max(v.abs()));
            }
        }
    }
    assert!(best <= third.upper, "{best} > {}", third.upper);
    assert!(best >= third.lower - 25.0, "grid {best} far below {}", third.lower);
}

#[test]
fn chart_and_chain_bounds() {
    let c = run();
    assert!(c.charts.d2p_formula.upper_f64() <= 2.5e4);
    assert!(c.charts.dp().upper_f64() <= 120.0);
    assert!(c.charts.dp_direct.upper_f64() <= c.charts.dp_formula.lower_f64());
    assert!(c.chain.chain.upper_f64() < 1.4e14);
    assert!(c.chain.chart_jet.upper_f64() < 7e4);
    assert!(c.chain.chart_entry.upper_f64() <= 3e4);
    assert!(c.chain.certified().upper_f64() < 1.4e14);
    assert!(c.chain.direct.upper_f64() <= c.chain.chain_sound.upper_f64());
}

#[test]
fn jacobians_match_printed_table() {
    for (i, (l, printed)) in run().hyperbolicity.jacobians.iter().zip(JACOBIAN_TABLE).enumerate() {
        for r in 0..2 {
            for c in 0..2 {
                let v = l.get(r, c).mid_f64();
                assert!((v - printed[r][c]).abs() <= 5e-5 + 1e-12, "L_{i}[{r}][{c}] = {v}");
            }
        }
    }
}

#[test]
fn frobenius_norm_against_float_inverse() {
    let h = &run().hyperbolicity;
    let n = h.jacobians.len();
    let mut m = vec![vec![0.0; 2 * n]; 2 * n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = -1.0;
    }
    for (i, l) in h.jacobians.iter().enumerate() {
        let j = (i + 1) % n;
        for r in 0..2 {
            for c in 0..2 {
                m[2 * i + r][2 * j + c] += l.get(r, c).mid_f64();
            }
        }
    }
    let inv = invert_f64(&m);
    let frob = inv.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    assert!((frob - 19.8966).abs() < 1e-3);
    assert!((h.frobenius.mid_f64() - frob).abs() < 1e-9);
    assert!(h.c_bound.upper_f64() < 21.0);
    assert!(h.sigma_bounds_consistent());
    assert!((h.det_product.mid_f64() - 1.0).abs() < 1e-6);
    assert!(h.det_product.rad().to_f64_up() < 1e-6);
}

#[test]
fn block_sup_bound_dominates_float_norm() {
    // ‖X‖ for the block-sup norm is max over block rows i and unit e of Σ_j ‖X_ijᵀ e‖
    let h = &run().hyperbolicity;
    let x = |r: usize, c: usize| h.inverse.get(r, c).mid_f64();
    let mut best: f64 = 0.0;
    for i in 0..10 {
        for k in 0..20_000 {
            let t = k as f64 * std::f64::consts::PI / 20_000.0;
            let (e0, e1) = (t.cos(), t.sin());
            let s: f64 = (0..10)
                .map(|j| {
                    let a = x(2 * i, 2 * j) * e0 + x(2 * i + 1, 2 * j) * e1;
                    let b = x(2 * i, 2 * j + 1) * e0 + x(2 * i + 1, 2 * j + 1) * e1;
                    a.hypot(b)
                })
                .sum();
            best = best.max(s);
        }
    }
    assert!(best <= h.block_sup.upper_f64());
    assert!(h.block_sup.upper_f64() - best < 1.0, "{best} vs {}", h.block_sup.upper_f64());
    assert!(best > 21.0, "block-sup norm {best}");
}

#[test]
fn certificate_passes_with_published_constants() {
    let cert = &run().certificate;
    assert!(cert.pass);
    cert.verdict().unwrap();
    let expected = f64::min(1e-18 / (12.0 * 21.0), 1.0 / (12.0 * 21.0 * 16.0 * 21.0 * 1.4e14));
    let threshold = cert.declared.threshold.ball(Precision::DEFAULT).unwrap().mid_f64();
    assert!((threshold - expected).abs() / expected < 1e-12);
    assert!((threshold - 3.97e-21).abs() / 3.97e-21 < 0.02);
    let radius = cert.declared.localization_radius.ball(Precision::DEFAULT).unwrap();
    assert!(radius.upper_f64() < 1e-26);
    assert!(cert.max_residual().unwrap().upper_f64() < 1e-29);
}

#[test]
fn certificate_json_roundtrip_and_recheck() {
    let cert = &run().certificate;
    let back = ShadowingCertificate::from_json(&cert.to_json()).unwrap();
    assert_eq!(&back, cert);
    let report = recheck(&back).unwrap();
    assert!(report.pass, "{:?}", report.mismatches);

    let mut tampered = back.clone();
    tampered.residuals[3] = k3dyn::shadowing::BallRecord::new(&Ball::from_decimal("1e-20", Precision::DEFAULT).unwrap());
    let report = recheck(&tampered).unwrap();
    assert!(!report.pass);
    assert!(report.mismatches.iter().any(|m| m.contains("hypothesis (3)")));
}

#[test]
fn perturbed_orbit_fails_residual_hypothesis() {
    let mut orbit = PseudoOrbit::default_orbit(Precision::DEFAULT);
    let shift = Ball::from_decimal("1e-3", orbit.prec()).unwrap();
    orbit.charts[0].base[0] = orbit.charts[0].base[0].add(&shift);
    let cert = certify(&orbit, &CertifyConfig::default()).unwrap();
    assert!(!cert.pass);
    assert!(!cert.declared.h3.pass);
    match cert.verdict() {
        Err(ShadowingError::CertificationFailure { check, .. }) => assert!(check.starts_with("hypothesis (3)")),
        other => panic!("unexpected verdict {other:?}"),
    }
}

#[test]
fn higher_precision_keeps_the_certificate() {
    let orbit = PseudoOrbit::default_orbit(Precision::new(768).unwrap());
    let cert = certify(&orbit, &CertifyConfig::default()).unwrap();
    assert!(cert.pass);
}

#[test]
fn low_precision_is_rejected() {
    let orbit = PseudoOrbit::default_orbit(Precision::new(32).unwrap());
    assert!(matches!(
        certify(&orbit, &CertifyConfig::default()),
        Err(ShadowingError::InsufficientPrecision { bits: 32, .. })
    ));
}

#[test]
fn coordinate_range_is_near_two_point_three() {
    let a = Ball::from_i64(10, Precision::DEFAULT);
    let sup = coordinate_range_bound(&a, 0.05).unwrap();
    assert!(sup.lower >= 2.25 && sup.upper <= 2.35, "{sup:?}");
    // grid oracle: largest |x| with a feasible y
    let mut best: f64 = 0.0;
    for i in 0..=4000 {
        let x = 2.0 + 0.5 * i as f64 / 4000.0;
        if (0..=4000).any(|j| disc_f64(10.0, x, -3.0 + 6.0 * j as f64 / 4000.0) >= 0.0) {
            best = best.max(x);
        }
    }
    assert!(best >= sup.lower && best <= sup.upper, "{best} outside {sup:?}");
    let coarse = coordinate_range_bound(&a, 0.2).unwrap();
    assert!(coarse.upper <= 2.5);
}

#[test]
fn residual_radii_within_error_model() {
    for bits in [64, 128, 256, 512] {
        let model = error_model(bits).unwrap();
        let orbit = PseudoOrbit::default_orbit(Precision::new(bits).unwrap());
        for r in orbit.residuals().unwrap() {
            assert!(r.rad().to_f64_up() <= model.fc, "{bits} bits: {} > {}", r.rad().to_f64_up(), model.fc);
        }
    }
}

#[test]
fn error_model_closed_form_at_500_bits() {
    let m = error_model(500).unwrap();
    let r = 2f64.powi(-499);
    let expect = (111.0 * (10.0 * 2000.0 + 14.0) + 9000.0 * 1.6e6) * r;
    assert!((m.fc - expect).abs() / expect < 1e-12);
    assert!((m.summary - 4e6 * r).abs() / (4e6 * r) < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sup_enclosure_dominates_random_feasible_points(x in -2.4f64..2.4, y in -2.4f64..2.4) {
        static SUP: OnceLock<f64> = OnceLock::new();
        let upper = *SUP.get_or_init(|| {
            let a = Ball::from_i64(10, Precision::DEFAULT);
            maximize_on_real_locus(&a, |x, y| x.mul(y), 0.01, 1 << 18).unwrap().upper
        });
        prop_assume!(disc_f64(10.0, x, y) >= 0.0);
        prop_assert!(x * y <= upper);
    }

    #[test]
    fn box_enclosures_contain_point_values(k in 0usize..10, s in -1.0f64..1.0, t in -1.0f64..1.0) {
        let c = run();
        let orbit = PseudoOrbit::default_orbit(Precision::DEFAULT);
        let chart = &orbit.charts[k];
        let (x, y) = (chart.base[0].mid_f64() + 1e-5 * s, chart.base[1].mid_f64() + 1e-5 * t);
        let d = disc_f64(10.0, x, y);
        prop_assert!(d <= c.ledger.direct.value.upper_f64() + 1e-9);
        prop_assert!(d >= c.ledger.direct.lower.lower_f64() - 1e-9);
    }
}
