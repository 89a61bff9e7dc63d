use approx::assert_abs_diff_eq;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use reflectode::functional::Atom;
use reflectode::positivity::{certify_positive, empirical_threshold, solution_bound, PositivityOptions};
use reflectode::solver::{uniform_grid, xi, FunctionalParts};
use reflectode::verify::{boundary_residual, manufactured_check, residual};
use reflectode::{solve, BoundaryCondition, Expr, Forcing, Measure, ProblemSpec, QuadConfig};

fn lebesgue_exp(c: f64) -> ProblemSpec {
    ProblemSpec::new(
        1.0,
        0.5,
        Expr::parse("exp(t)").unwrap(),
        BoundaryCondition::Functional {
            measure: Measure::lebesgue(0.5).unwrap(),
            c,
        },
    )
    .unwrap()
}

fn closed_form(c: f64, t: f64) -> f64 {
    let a = (c - 2.0 * 0.5f64.sinh()) / (2.0 * 0.5f64.sin());
    t.cosh() + a * (t.cos() - t.sin())
}

#[test]
fn lebesgue_exp_matches_closed_form() {
    let cfg = QuadConfig::default();
    for c in [-1.0, 0.0, 1.0, 5.0] {
        let u = solve(&lebesgue_exp(c), &cfg).unwrap();
        for (t, v) in u.grid(100).unwrap() {
            assert_abs_diff_eq!(v, closed_form(c, t), epsilon = 1e-9);
        }
    }
}

#[test]
fn lebesgue_exp_residuals() {
    let cfg = QuadConfig::default();
    let spec = lebesgue_exp(1.0);
    let u = solve(&spec, &cfg).unwrap();
    let r = residual(|t| u.evaluate(t), |t| spec.h.eval(t), 1.0, 0.5, 200).unwrap();
    assert!(r < 1e-6, "{r}");
    assert!(boundary_residual(|t| u.evaluate(t), &spec.bc, 0.5, &cfg).unwrap() < 1e-7);
}

#[test]
fn functional_solution_minus_xi_is_homogeneous() {
    let cfg = QuadConfig::default();
    let spec = ProblemSpec::new(
        0.9,
        0.6,
        Expr::parse("t^3 - 2*cos(t)").unwrap(),
        BoundaryCondition::Functional {
            measure: Measure::new(0.6, Some(Expr::parse("1 + t").unwrap()), vec![Atom { t: 0.2, a: 0.7 }]).unwrap(),
            c: 0.4,
        },
    )
    .unwrap();
    let u = solve(&spec, &cfg).unwrap();
    let ratios: Vec<f64> = uniform_grid(0.6, 20)
        .into_iter()
        .map(|t| {
            let diff = u.evaluate(t).unwrap() - xi(&spec.h, t, &spec.params, &cfg).unwrap();
            diff / ((0.9 * t).cos() - (0.9 * t).sin())
        })
        .collect();
    for r in &ratios {
        assert_abs_diff_eq!(*r, ratios[0], epsilon = 1e-8);
    }
}

#[test]
fn threshold_ordering_for_lebesgue_exp() {
    let cfg = QuadConfig::default();
    let opts = PositivityOptions {
        with_threshold: true,
        ..Default::default()
    };
    let report = certify_positive(&lebesgue_exp(1.0), &cfg, &opts).unwrap();
    let c_star = report.empirical_threshold.unwrap();
    let (k1, k2) = (report.k1.unwrap(), report.k2.unwrap());
    assert!(0.0 < c_star && c_star <= k2 && k2 <= k1, "{c_star} {k2} {k1}");
    // the closed form has a zero minimum exactly at c*
    let min = (0..=20_000)
        .map(|i| closed_form(c_star, -0.5 + i as f64 / 20_000.0))
        .fold(f64::INFINITY, f64::min);
    assert!(min.abs() < 1e-7, "{min}");
    let direct = empirical_threshold(&lebesgue_exp(3.0), &cfg, &opts).unwrap();
    assert_abs_diff_eq!(direct, c_star, epsilon = 1e-12);
}

#[test]
fn bound_holds_for_lebesgue_exp() {
    let cfg = QuadConfig::default();
    for c in [0.0, 1.0, 5.0] {
        let spec = lebesgue_exp(c);
        let u = solve(&spec, &cfg).unwrap();
        for t in uniform_grid(0.5, 40) {
            assert!(u.evaluate(t).unwrap().abs() <= solution_bound(t, &spec, &cfg).unwrap());
        }
    }
}

#[test]
fn manufactured_native_and_parsed_forcings_agree() {
    let cfg = QuadConfig::default();
    let spec_expr = ProblemSpec::new(1.0, 0.5, Expr::parse("exp(t)").unwrap(), BoundaryCondition::Periodic).unwrap();
    let spec_native =
        ProblemSpec::new(1.0, 0.5, Forcing::native("e^t", f64::exp), BoundaryCondition::Periodic).unwrap();
    let a = solve(&spec_expr, &cfg).unwrap();
    let b = solve(&spec_native, &cfg).unwrap();
    for t in uniform_grid(0.5, 10) {
        assert_eq!(a.evaluate(t).unwrap(), b.evaluate(t).unwrap());
    }
}

#[test]
fn manufactured_random_periodic() {
    let mut rng = StdRng::seed_from_u64(11);
    let cfg = QuadConfig::default();
    for _ in 0..5 {
        let big_t: f64 = rng.gen_range(0.3..1.2);
        let m: f64 = rng.gen_range(0.2..2.0);
        if (m * big_t).sin().abs() < 0.05 {
            continue;
        }
        let w = std::f64::consts::PI / big_t;
        let v = format!(
            "{:?} + ({:?})*cos({w:?}*t) + ({:?})*sin({:?}*t)",
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            2.0 * w
        );
        let err = manufactured_check(&Expr::parse(&v).unwrap(), &BoundaryCondition::Periodic, m, big_t, &cfg).unwrap();
        assert!(err < 1e-5, "{v}: {err}");
    }
}

#[test]
fn functional_parts_lambda_is_affine() {
    let parts = FunctionalParts {
        gap: 1.0,
        f_delta: 2.0,
        f_xi_h: 0.5,
    };
    assert_eq!(parts.lambda(0.5), 0.0);
    assert_eq!(parts.lambda(2.5), 1.0);
}
