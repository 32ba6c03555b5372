use num_bigint::BigInt;
use num_rational::Rational64;

use frobcensus_core::asymptotics::{
    chebotarev_error, disc_bounds, exponent_table, li, li_log, optimal_theta, theorem_theta, unconditional_profile,
    ChebotarevProfile, Constants, Regime, UnconditionalExponents,
};
use frobcensus_core::gsp::{group_order, Which};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `Ei(x) = gamma + ln x + sum x^k / (k k!)`.
fn ei(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..400 {
        term *= x / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    EULER_GAMMA + x.ln() + sum
}

fn li_oracle(x: f64) -> f64 {
    ei(x.ln()) - ei(2f64.ln())
}

#[test]
fn logarithmic_integral_against_series() {
    for x in [2.5, 10.0, 100.0, 1e4, 1e6, 1e8] {
        let got = li(x).unwrap();
        let want = li_oracle(x);
        assert!(((got - want) / want).abs() <= 1e-9, "li({x}) = {got}, series {want}");
    }
    let v = li(1e6).unwrap();
    assert!((v - 78_626.504).abs() < 0.01, "{v}");
    let ratio = v / (1e6 / 1e6f64.ln());
    assert!(ratio > 1.0 && ratio < 1.1);
    assert_eq!(li(2.0).unwrap(), 0.0);
    let mut prev = 0.0;
    for k in 1..40 {
        let cur = li(2.0 + k as f64 * 37.5).unwrap();
        assert!(cur > prev);
        prev = cur;
    }
    // the asymptotic branch against direct quadrature
    for l in [600.5, 650.0, 700.0] {
        let direct = li(f64::exp(l)).unwrap().ln();
        assert!((li_log(l) - direct).abs() < 1e-9, "log li(e^{l})");
    }
}

#[test]
fn balanced_exponent_denominators() {
    for g in 1..=6u32 {
        let gi = g as i64;
        assert_eq!(optimal_theta(Regime::Grh, g).unwrap().theta, Rational64::new(1, 8 * gi * gi + 4 * gi + 6));
        assert_eq!(optimal_theta(Regime::GrhAhc, g).unwrap().theta, Rational64::new(1, 4 * gi * gi + 4 * gi + 6));
        assert_eq!(optimal_theta(Regime::GrhAhcPcc, g).unwrap().theta, Rational64::new(1, 2 * gi * gi + 4 * gi + 6));
        for r in [Regime::Grh, Regime::GrhAhc, Regime::GrhAhcPcc] {
            let p = optimal_theta(r, g).unwrap();
            assert_eq!(Some(p.theta), theorem_theta(r, g));
            assert!(p.theta > Rational64::new(0, 1) && p.theta < Rational64::new(1, 2));
            assert_eq!(p.final_exponent + p.theta, Rational64::new(1, 1));
        }
    }
    assert!(optimal_theta(Regime::Unconditional, 2).is_err());
}

#[test]
fn genus_two_table_flags_the_printed_outliers() {
    let rows = exponent_table(2, &Regime::ALL).unwrap();
    let by = |r: Regime| rows.iter().find(|x| x.regime == r).unwrap();
    assert_eq!(by(Regime::Grh).theta, "1/46");
    assert_eq!(by(Regime::Grh).status, "match");
    assert_eq!(by(Regime::GrhAhc).theta, "1/30");
    let pcc = by(Regime::GrhAhcPcc);
    assert_eq!((pcc.theta.as_str(), pcc.paper_value.as_deref()), ("1/22", Some("1/23")));
    assert_eq!(pcc.status, "discrepancy");
    assert_eq!(by(Regime::Unconditional).status, "discrepancy");
}

#[test]
fn unconditional_general_shape() {
    for g in 1..=6u32 {
        let t = UnconditionalExponents::theorem(g);
        let gi = g as i64;
        assert_eq!(t.z_log, Rational64::new(1, 8 * gi * gi + 6 * gi + 4));
        assert_eq!(t.z_loglog, Rational64::new(1, 4 * gi * gi + 3 * gi + 2));
        assert_eq!(t.final_loglog, Rational64::new(1, 1) + Rational64::new(1, 4 * gi * gi + 3 * gi + 2));
        assert_eq!(t.final_log, Rational64::new(1, 1) + Rational64::new(1, 8 * gi * gi + 6 * gi + 4));
    }
    let d = UnconditionalExponents::derived(2);
    assert_eq!((d.z_log, d.z_loglog, d.final_log), (Rational64::new(1, 66), Rational64::new(1, 33), Rational64::new(67, 66)));
}

#[test]
fn unconditional_gate_in_log_space() {
    let c = Constants::default();
    let p = unconditional_profile(2, 1000.0 * 10f64.ln(), &c).unwrap();
    assert!(p.gate);
    for e in 6..40 {
        let p = unconditional_profile(2, 10f64.powi(e), &c).unwrap();
        assert!(p.gate, "log X = 1e{e}");
        if e < 12 {
            assert!(p.log_bound < p.log_x);
        }
    }
    assert!(unconditional_profile(2, 2.0, &c).is_err());
}

fn one() -> BigInt {
    BigInt::from(1)
}

#[test]
fn discriminant_bounds() {
    let trivial = ChebotarevProfile::new(one(), vec![], one(), one(), one()).unwrap();
    assert_eq!(disc_bounds(&trivial), (0.0, 0.0));
    let n = group_order(2, 3, Which::Gsp) * group_order(2, 5, Which::Gsp);
    let p = ChebotarevProfile::new(n.clone(), vec![2, 3, 5, 23], one(), one(), one()).unwrap();
    let (lo, hi) = disc_bounds(&p);
    assert!(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi);
    assert!(ChebotarevProfile::new(n, vec![4], one(), one(), one()).is_err());
}

#[test]
fn grh_error_scales_like_root_x() {
    let c = Constants::default();
    let trivial = ChebotarevProfile::new(one(), vec![], one(), one(), one()).unwrap();
    let r = chebotarev_error(Regime::Grh, &trivial, 10.0, &c).unwrap();
    // 1 * X^{1/2} (0/1 + log X)
    assert!((r.log_value - (5.0 + 10f64.ln())).abs() < 1e-12);
    let prof = ChebotarevProfile::new(BigInt::from(1920), vec![2, 3], BigInt::from(40), BigInt::from(2), BigInt::from(30)).unwrap();
    for log_x in [1e3, 1e5, 1e7] {
        let a = chebotarev_error(Regime::Grh, &prof, log_x, &c).unwrap().log_value;
        let b = chebotarev_error(Regime::Grh, &prof, 2.0 * log_x, &c).unwrap().log_value;
        // log(R(X^2) / (R(X) X^{1/2})) -> log 2
        let ratio = (b - a - 0.5 * log_x).exp();
        assert!((ratio - 2.0).abs() < 0.01, "{ratio}");
    }
    for regime in Regime::ALL {
        let r = chebotarev_error(regime, &prof, 50.0, &c).unwrap();
        assert!(r.log_value.is_finite());
        assert_eq!(r.gate.is_some(), regime == Regime::Unconditional);
    }
    assert!(chebotarev_error(Regime::Grh, &prof, 0.1, &c).is_err());
}
