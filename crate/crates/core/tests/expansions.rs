use proptest::prelude::*;
use tailsum_core::asymptotics::*;
use tailsum_core::copulas::{gumbel_pickands, partial_limit_traits, tail_order_traits, Copula};
use tailsum_core::marginals::{Marginal, ParetoMarginal};

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[test]
fn second_order_terms_are_higher_order() {
    for alpha in [0.8, 2.0] {
        let m = ParetoMarginal::new(alpha, 1.0).unwrap();
        let mut expansions = vec![independence_expansion(&m).unwrap()];
        for phi in [1.0, 2.0, 10.0] {
            let e = ev_expansion(&m, &gumbel_pickands(phi).unwrap()).unwrap();
            expansions.extend(e.candidates.iter().map(|c| c.expansion.clone()));
            expansions.push(e);
        }
        for e in &expansions {
            let rel: Vec<f64> = [1e2, 1e3, 1e4, 1e5]
                .iter()
                .map(|&t| {
                    let sf = m.survival(t).unwrap();
                    ((e.value(&m, t).unwrap() - 2.0 * sf) / sf).abs()
                })
                .collect();
            assert!(rel.windows(2).all(|w| w[1] <= w[0]), "{rel:?}");
            assert!(rel[3] < 0.5);
        }
    }
}

#[test]
fn reduction_identity_on_default_grids() {
    let g = gumbel_pickands(1.0).unwrap();
    for alpha in [0.8, 2.0] {
        let m = ParetoMarginal::new(alpha, 1.0).unwrap();
        for p in log_grid(1e-5, 1e-2, 20) {
            let t = m.tail_quantile(p).unwrap();
            let a = tailprob_expansion_ev(&m, &g, t).unwrap().value;
            let b = tailprob_expansion_independence(&m, t).unwrap().value;
            assert!(((a - b) / b).abs() <= 1e-12);
        }
        for q in [0.99, 0.995, 0.999, 0.9995, 0.9999] {
            let a = var_expansion_ev(&m, &g, q, BoundaryPolicy::Combine).unwrap().value;
            let b = var_expansion_independence(&m, q, BoundaryPolicy::Combine).unwrap().value;
            assert!(((a - b) / b).abs() <= 1e-12);
        }
    }
}

#[test]
fn general_path_matches_independence_far_in_the_tail() {
    // For α ≥ 1 the closed form drops Δ₂F̄² (a relative 4F̄) and replaces
    // Δ(t) by its limit αμ(t)/t (off by about 3E[X²; X < t/2]/t²), so
    // agreement to 0.1% needs t ≥ 10³.
    let c = Copula::Independence;
    let tot = tail_order_traits(&c).unwrap();
    let plt = partial_limit_traits(&c).unwrap();
    for alpha in [0.8, 2.0] {
        let m = ParetoMarginal::new(alpha, 1.0).unwrap();
        for p in log_grid(1e-9, 1e-6, 5) {
            let t = m.tail_quantile(p).unwrap();
            let a = tailprob_expansion_general(&m, &tot, Some(&plt), GeneralBranch::Auto, t)
                .unwrap()
                .value;
            let b = tailprob_expansion_independence(&m, t).unwrap().value;
            assert!(((a - b) / b).abs() < 1e-3, "alpha {alpha} p {p}");
        }
    }
}

#[test]
fn d_over_tail_converges() {
    for copula in [Copula::Independence, Copula::gumbel(2.0).unwrap(), Copula::gumbel(10.0).unwrap()] {
        let tot = tail_order_traits(&copula).unwrap();
        for alpha in [0.8, 2.0] {
            let m = ParetoMarginal::new(alpha, 1.0).unwrap();
            for delta in [0.05, 0.1] {
                let target = eta_delta(&tot, alpha, delta).unwrap();
                let devs: Vec<f64> = [1e2, 1e3, 1e4, 1e5]
                    .iter()
                    .map(|&t| {
                        (d_delta(&tot, &m, delta, t).unwrap() / m.survival(t).unwrap() - target)
                            .abs()
                    })
                    .collect();
                assert!(
                    devs.windows(2).all(|w| w[1] < w[0]),
                    "{} alpha {alpha} delta {delta}: {devs:?}",
                    copula.name()
                );
            }
        }
    }
}

#[test]
fn var_tends_to_leading_order() {
    for phi in [1.0, 10.0] {
        let g = gumbel_pickands(phi).unwrap();
        for alpha in [0.8, 2.0] {
            let m = ParetoMarginal::new(alpha, 1.0).unwrap();
            let ratios: Vec<f64> = [0.99, 0.999, 0.9999, 0.99999]
                .iter()
                .map(|&q| {
                    let v = var_expansion_ev(&m, &g, q, BoundaryPolicy::Combine).unwrap();
                    (v.value / v.leading - 1.0).abs()
                })
                .collect();
            assert!(ratios.windows(2).all(|w| w[1] <= w[0]), "{ratios:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn exactly_one_region(alpha in 0.05f64..5.0, phi in 1.0f64..20.0) {
        let g = gumbel_pickands(phi).unwrap();
        let c = classify_case(alpha, &g).unwrap();
        let all = c.c1 && c.c2 && c.c3;
        let some = c.c1 && !(c.c2 && c.c3);
        let none = !c.c1;
        prop_assert_eq!([all, some, none].iter().filter(|&&b| b).count(), 1);
        let want = if all { Region::AllThree } else if some { Region::C1NotBoth } else { Region::NotC1 };
        prop_assert_eq!(c.region, want);
    }
}

#[test]
fn quadrature_is_fast() {
    let start = std::time::Instant::now();
    integral_i(0.8, 0.8).unwrap();
    integral_i(2.0, 0.5).unwrap();
    assert!(start.elapsed().as_millis() < 10);
}
