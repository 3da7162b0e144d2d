//! Full pipeline on instances whose LP optimum is genuinely fractional, so
//! the decomposition and rounding paths beyond the integral case get
//! exercised end to end. The depth-2 gap instance is the canonical source:
//! its LP value (1) is strictly below the integral optimum (5/4), so the
//! optimal vertex cannot be 0/1.

use kacss::arb::{decompose, Direction};
use kacss::flow::is_k_arc_connected;
use kacss::gap::{build_gap_instance, exact_opt, GapParams};
use kacss::lpacss::{fractional_support, solve_lp_acss};
use kacss::rational::{rat, rat_int, Rat};
use kacss::round::{expected_union_size, round_union, RoundMode};
use num_traits::One;

#[test]
fn depth_two_gap_instance_runs_the_fractional_path() {
    let gap = build_gap_instance(&GapParams::new(2, 3).unwrap());
    let inst = &gap.instance;
    let sol = solve_lp_acss(inst, 0).unwrap();

    let frac = fractional_support(&sol);
    assert!(!frac.is_empty(), "gap LP optimum should be fractional");
    assert!(frac.len() <= 4 * inst.n());

    let comb_in = decompose(inst, &sol, 0, 1, Direction::In).unwrap();
    let comb_out = decompose(inst, &sol, 0, 1, Direction::Out).unwrap();
    for comb in [&comb_in, &comb_out] {
        assert!(comb.total_weight().is_one());
        assert!(comb.terms.len() >= 2, "fractional x needs several terms");
        for a in 0..inst.num_arcs() {
            assert!(comb.marginal(a) <= sol.x[a]);
        }
    }

    // Expectation identity against the closed form over the marginals.
    let expectation = expected_union_size(&comb_in, &comb_out);
    let m_in = comb_in.marginals();
    let m_out = comb_out.marginals();
    let direct: Rat = m_in.iter().zip(&m_out).map(|(p, q)| p + q - p * q).sum();
    assert_eq!(expectation, direct);

    let opt = exact_opt(inst, None).unwrap();
    assert_eq!(opt.value, rat(5, 4));

    for mode in [
        RoundMode::Derandomized,
        RoundMode::Sampled { seed: 1 },
        RoundMode::Sampled { seed: 2 },
    ] {
        let report = round_union(inst, &sol, &comb_in, &comb_out, mode).unwrap();
        assert!(is_k_arc_connected(inst, &report.arcs, 1));
        // Any strongly connected output costs at least the exact optimum,
        // and the ratio guarantee is not claimed for non-unit costs.
        assert!(report.size >= opt.value);
        assert!(!report.bound_applies);
    }
}

#[test]
fn depth_one_gap_instance_half_integral_solution() {
    // The depth-1 instance has LP value 1/2 attained by the directed cycle
    // (integral) or by half-integral vertices; either way the pipeline must
    // produce a strongly connected union of cost at least 1/2.
    let gap = build_gap_instance(&GapParams::new(1, 4).unwrap());
    let inst = &gap.instance;
    let sol = solve_lp_acss(inst, 0).unwrap();
    assert_eq!(sol.value, rat(1, 2));

    let comb_in = decompose(inst, &sol, 0, 1, Direction::In).unwrap();
    let comb_out = decompose(inst, &sol, 0, 1, Direction::Out).unwrap();
    let report = round_union(inst, &sol, &comb_in, &comb_out, RoundMode::Derandomized).unwrap();
    assert!(is_k_arc_connected(inst, &report.arcs, 1));
    assert!(report.size >= rat(1, 2));
    assert!(
        report.size <= rat_int(1),
        "derandomized union above total cost"
    );
}
