//! Explicit Chebotarev error terms, discriminant bounds, the logarithmic
//! integral, and exact balancing of the sieve exponents.
//!
//! Very large `X` are handled through `log X` only; all returned magnitudes
//! are natural logarithms of the bound.

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numth::is_prime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    #[serde(rename = "GRH")]
    Grh,
    #[serde(rename = "GRH_AHC")]
    GrhAhc,
    #[serde(rename = "GRH_AHC_PCC")]
    GrhAhcPcc,
    #[serde(rename = "UNCONDITIONAL")]
    Unconditional,
}

impl Regime {
    pub const ALL: [Regime; 4] = [Regime::Grh, Regime::GrhAhc, Regime::GrhAhcPcc, Regime::Unconditional];

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Grh => "GRH",
            Regime::GrhAhc => "GRH_AHC",
            Regime::GrhAhcPcc => "GRH_AHC_PCC",
            Regime::Unconditional => "UNCONDITIONAL",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().replace(['-', '+'], "_").as_str() {
            "GRH" => Ok(Regime::Grh),
            "GRH_AHC" | "AHC" => Ok(Regime::GrhAhc),
            "GRH_AHC_PCC" | "PCC" => Ok(Regime::GrhAhcPcc),
            "UNCONDITIONAL" | "UNCOND" => Ok(Regime::Unconditional),
            _ => Err(Error::invalid(format!("unknown regime {s:?}"))),
        }
    }
}

/// Unspecified absolute constants; all default to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Constants {
    pub a: f64,
    pub b: f64,
    pub b_prime: f64,
    pub c_prime: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants { a: 1.0, b: 1.0, b_prime: 1.0, c_prime: 1.0 }
    }
}

/// Data of a Galois extension `L/Q` with group `G` entering the Chebotarev bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChebotarevProfile {
    /// `n_L = #G`.
    pub n_l: BigInt,
    pub ramified: Vec<u64>,
    /// `#C`, size of the conjugation-stable set.
    pub c_size: BigInt,
    /// Number of conjugacy classes in `C`.
    pub c_classes: BigInt,
    /// Number of conjugacy classes of `G`.
    pub g_classes: BigInt,
}

impl ChebotarevProfile {
    pub fn new(n_l: BigInt, ramified: Vec<u64>, c_size: BigInt, c_classes: BigInt, g_classes: BigInt) -> Result<Self> {
        let one = BigInt::from(1);
        if n_l < one {
            return Err(Error::invalid("n_L must be at least 1"));
        }
        if let Some(&q) = ramified.iter().find(|&&q| !is_prime(q)) {
            return Err(Error::invalid(format!("ramified entry {q} is not prime")));
        }
        if c_size < one || c_size > n_l || c_classes < one || c_classes > c_size || g_classes < c_classes {
            return Err(Error::invalid("need 1 <= #classes(C) <= #C <= n_L and #classes(C) <= #classes(G)"));
        }
        Ok(ChebotarevProfile { n_l, ramified, c_size, c_classes, g_classes })
    }

    fn sum_log_ramified(&self) -> f64 {
        self.ramified.iter().map(|&q| (q as f64).ln()).sum()
    }

    /// `log M(L/Q) = log #G + sum_{p ramified} log p`.
    pub fn log_m(&self) -> f64 {
        big_ln(&self.n_l) + self.sum_log_ramified()
    }
}

/// Natural log of a positive integer of any size.
pub fn big_ln(x: &BigInt) -> f64 {
    assert!(x > &BigInt::zero(), "logarithm of a non-positive integer");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    top.to_f64().expect("64-bit value").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Bounds `(lo, hi)` on `log |d_L|` from the ramified primes:
/// `(n_L/2) sum log p <= log|d_L| <= (n_L - 1) sum log p + n_L log n_L`.
pub fn disc_bounds(profile: &ChebotarevProfile) -> (f64, f64) {
    let n = profile.n_l.to_f64().unwrap_or(f64::INFINITY);
    let s = profile.sum_log_ramified();
    let lo = n / 2.0 * s;
    let hi = (n - 1.0) * s + n * big_ln(&profile.n_l);
    (lo, hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorBound {
    /// Natural log of the bound on `|R_C(X)|`.
    pub log_value: f64,
    /// For the unconditional bound, whether `log X >= B' #G (log|d_L|)^2`.
    pub gate: Option<bool>,
}

fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// The bound on `R_C(X)` for `regime`, with `log|d_L|` taken at its upper bound.
/// `log_x` is `log X`; constants from `constants`, implied constants 1.
pub fn chebotarev_error(regime: Regime, profile: &ChebotarevProfile, log_x: f64, constants: &Constants) -> Result<ErrorBound> {
    if !(log_x >= std::f64::consts::LN_2) {
        return Err(Error::invalid("need X >= 2"));
    }
    let (_, log_d) = disc_bounds(profile);
    let ln_n = big_ln(&profile.n_l);
    let ln_c = big_ln(&profile.c_size);
    let half_x = 0.5 * log_x;
    Ok(match regime {
        Regime::Grh => {
            let inner = log_d / profile.n_l.to_f64().unwrap_or(f64::INFINITY) + log_x;
            ErrorBound { log_value: ln_c + half_x + inner.ln(), gate: None }
        }
        Regime::GrhAhc => {
            ErrorBound { log_value: 0.5 * ln_c + half_x + (profile.log_m() + log_x).ln(), gate: None }
        }
        Regime::GrhAhcPcc => {
            let ratio = 0.25 * (big_ln(&profile.g_classes) - ln_n);
            ErrorBound { log_value: 0.5 * ln_c + half_x + ratio + (profile.log_m() + log_x).ln(), gate: None }
        }
        Regime::Unconditional => {
            // log X >= B' #G (log|d_L|)^2, compared in log space
            let gate = if log_d <= 0.0 {
                true
            } else {
                log_x.ln() >= constants.b_prime.ln() + ln_n + 2.0 * log_d.ln()
            };
            let n = profile.n_l.to_f64().unwrap_or(f64::INFINITY);
            // max(|d_L|^{1/n_L}, log|d_L|), in log space
            let ln_max = (log_d / n).max(if log_d > 0.0 { log_d.ln() } else { f64::NEG_INFINITY });
            let shrink = constants.b * (log_x.ln() - ln_max).exp();
            let log_y = log_x - shrink.min(log_x - std::f64::consts::LN_2);
            let first = ln_c - ln_n + li_log(log_y);
            let second = big_ln(&profile.c_classes) + log_x - constants.a * (log_x / n).sqrt();
            ErrorBound { log_value: log_add(first, second), gate: Some(gate) }
        }
    })
}

/// `li X = int_2^X dt / log t`, by adaptive Simpson in `u = log t`.
pub fn li(x: f64) -> Result<f64> {
    if !(x >= 2.0) {
        return Err(Error::invalid(format!("li needs X >= 2, got {x}")));
    }
    let f = |u: f64| u.exp() / u;
    let (a, b) = (std::f64::consts::LN_2, x.ln());
    if b <= a {
        return Ok(0.0);
    }
    Ok(adaptive_simpson(&f, a, b, 1e-12, 48))
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64, depth: u32) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64, m: f64, fm: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) + rec(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    rec(f, a, fa, b, fb, m, fm, whole, rel_tol * whole.abs(), depth)
}

/// `log li(e^{log_x})`, using the asymptotic series once `X` overflows.
pub fn li_log(log_x: f64) -> f64 {
    if log_x <= std::f64::consts::LN_2 {
        return f64::NEG_INFINITY;
    }
    if log_x < 600.0 {
        return li(log_x.exp()).expect("X >= 2").ln();
    }
    // li X ~ (X / L) sum_k k! / L^k, truncated at the smallest term
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..(log_x as usize) {
        let next = term * k as f64 / log_x;
        if next >= term {
            break;
        }
        term = next;
        sum += term;
    }
    log_x - log_x.ln() + sum.ln()
}

/// Exact sieve exponents for one regime.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentProfile {
    pub g: u32,
    pub regime: Regime,
    /// `R(z, X) << z^E X^{1/2} log X` for sieve primes `l, q <= 2z`.
    #[serde(serialize_with = "ser_rat")]
    pub error_z_exponent: Rational64,
    /// `z = X^theta`.
    #[serde(serialize_with = "ser_rat")]
    pub theta: Rational64,
    /// The bound is `X^{final_exponent} log X`.
    #[serde(serialize_with = "ser_rat")]
    pub final_exponent: Rational64,
}

fn ser_rat<S: serde::Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn rat(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// Exponent of `l q` in `#GSp_{2g}(Z/lq)`: its dimension `2g^2 + g + 1`.
pub fn gsp_dimension(g: u32) -> i64 {
    let g = g as i64;
    2 * g * g + g + 1
}

/// `z`-exponent of the Chebotarev error for `GSp_{2g}(Z/lq)`, `l, q ~ z`.
/// `n_exponent` is the `z`-exponent used for `#G`; from the group order it is `2 (2g^2 + g + 1)`.
pub fn error_z_exponent(regime: Regime, g: u32, n_exponent: i64) -> Rational64 {
    let g = g as i64;
    // #C << #GSp z^{-2g-2} << z^{4g^2}
    let c = 4 * g * g;
    match regime {
        Regime::Grh => rat(c, 1),
        // (#C)^{1/2}
        Regime::GrhAhc => rat(c, 2),
        // (#C)^{1/2} (#G~ / #G)^{1/4} with #G~ ~ z^{2g+2}
        Regime::GrhAhcPcc => rat(c, 2) + rat(2 * g + 2 - n_exponent, 4),
        Regime::Unconditional => rat(0, 1),
    }
}

/// Solves `X / z = z^{2g+2} z^E X^{1/2}` for `z = X^theta`.
pub fn balance(g: u32, e: Rational64) -> Rational64 {
    let w = e + rat(2 * g as i64 + 3, 1);
    (rat(2, 1) * w).recip()
}

/// Balanced exponents for a conditional regime.
pub fn optimal_theta(regime: Regime, g: u32) -> Result<ExponentProfile> {
    optimal_theta_with(regime, g, 2 * gsp_dimension(g))
}

/// As [`optimal_theta`] with an explicit `z`-exponent for `#G`.
pub fn optimal_theta_with(regime: Regime, g: u32, n_exponent: i64) -> Result<ExponentProfile> {
    if g == 0 {
        return Err(Error::invalid("g must be at least 1"));
    }
    if regime == Regime::Unconditional {
        return Err(Error::invalid("the unconditional regime has no power-law theta; use unconditional_profile"));
    }
    let e = error_z_exponent(regime, g, n_exponent);
    let theta = balance(g, e);
    Ok(ExponentProfile { g, regime, error_z_exponent: e, theta, final_exponent: rat(1, 1) - theta })
}

/// The closed form of the general theorem: `1/(8g^2+4g+6)`, `1/(4g^2+4g+6)`, `1/(2g^2+4g+6)`.
pub fn theorem_theta(regime: Regime, g: u32) -> Option<Rational64> {
    let g = g as i64;
    let k = match regime {
        Regime::Grh => 8,
        Regime::GrhAhc => 4,
        Regime::GrhAhcPcc => 2,
        Regime::Unconditional => return None,
    };
    Some(rat(1, k * g * g + 4 * g + 6))
}

/// The values worked out for abelian surfaces: `1/46`, `1/30`, `1/23`.
pub fn genus2_printed_theta(regime: Regime) -> Option<Rational64> {
    match regime {
        Regime::Grh => Some(rat(1, 46)),
        Regime::GrhAhc => Some(rat(1, 30)),
        Regime::GrhAhcPcc => Some(rat(1, 23)),
        Regime::Unconditional => None,
    }
}

/// Exponent shape of the unconditional bound
/// `X (log log X)^{final_loglog} / (log X)^{final_log}` with
/// `z = c' (log X)^{z_log} / (log log X)^{z_loglog}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnconditionalExponents {
    /// `K` in the gate `log X >= B' z^K (log z)^2`.
    pub gate_exponent: i64,
    #[serde(serialize_with = "ser_rat")]
    pub z_log: Rational64,
    #[serde(serialize_with = "ser_rat")]
    pub z_loglog: Rational64,
    #[serde(serialize_with = "ser_rat")]
    pub final_loglog: Rational64,
    #[serde(serialize_with = "ser_rat")]
    pub final_log: Rational64,
}

impl UnconditionalExponents {
    /// Exponents forced by a gate exponent `K`: `z = (log X)^{1/K} / (log log X)^{2/K}`,
    /// bound `X log z / (z log X)`.
    pub fn from_gate(k: i64) -> Self {
        UnconditionalExponents {
            gate_exponent: k,
            z_log: rat(1, k),
            z_loglog: rat(2, k),
            final_loglog: rat(1, 1) + rat(2, k),
            final_log: rat(1, 1) + rat(1, k),
        }
    }

    /// `#G (log|d_L|)^2` with `#G ~ z^{n}` and `log|d_L| ~ z^{n} log z`, `n = 2(2g^2+g+1)`.
    pub fn derived(g: u32) -> Self {
        Self::from_gate(3 * 2 * gsp_dimension(g))
    }

    /// The gate exponent `8g^2 + 6g + 4` stated for general `g`.
    pub fn theorem(g: u32) -> Self {
        let g = g as i64;
        Self::from_gate(8 * g * g + 6 * g + 4)
    }
}

/// Numeric instance of the unconditional bound at one `X`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnconditionalProfile {
    pub g: u32,
    pub exponents: UnconditionalExponents,
    pub log_x: f64,
    pub log_z: f64,
    /// `log X >= B' z^K (log z)^2`.
    pub gate: bool,
    /// Log of `X (log log X)^a / (log X)^b`, without the `1 + nu(d)` factor.
    pub log_bound: f64,
}

/// Evaluates `z(X)`, the gate and the bound for `log X = log_x`.
pub fn unconditional_profile(g: u32, log_x: f64, constants: &Constants) -> Result<UnconditionalProfile> {
    unconditional_profile_with(g, UnconditionalExponents::derived(g), log_x, constants)
}

pub fn unconditional_profile_with(
    g: u32,
    exponents: UnconditionalExponents,
    log_x: f64,
    constants: &Constants,
) -> Result<UnconditionalProfile> {
    if g == 0 {
        return Err(Error::invalid("g must be at least 1"));
    }
    if !(log_x.is_finite() && log_x > std::f64::consts::E) {
        return Err(Error::invalid("X too small: need log log X > 1"));
    }
    let ll = log_x.ln();
    let to_f = |r: Rational64| *r.numer() as f64 / *r.denom() as f64;
    let log_z = constants.c_prime.ln() + to_f(exponents.z_log) * ll - to_f(exponents.z_loglog) * ll.ln();
    let k = exponents.gate_exponent as f64;
    let gate = if log_z <= 0.0 {
        true
    } else {
        ll >= constants.b_prime.ln() + k * log_z + 2.0 * log_z.ln()
    };
    let log_bound = log_x + to_f(exponents.final_loglog) * ll.ln() - to_f(exponents.final_log) * ll;
    Ok(UnconditionalProfile { g, exponents, log_x, log_z, gate, log_bound })
}

/// One row of the exponent table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentRow {
    pub regime: Regime,
    pub theta: String,
    pub final_exponent: String,
    pub paper_value: Option<String>,
    pub general_formula: Option<String>,
    pub status: &'static str,
    pub note: Option<String>,
}

fn status(ok: bool) -> &'static str {
    if ok {
        "match"
    } else {
        "discrepancy"
    }
}

/// Derived exponents against the printed ones, for each regime.
pub fn exponent_table(g: u32, regimes: &[Regime]) -> Result<Vec<ExponentRow>> {
    let mut rows = Vec::new();
    for &regime in regimes {
        if regime == Regime::Unconditional {
            let derived = UnconditionalExponents::derived(g);
            let general = UnconditionalExponents::theorem(g);
            let (paper, paper_ok) = if g == 2 {
                let printed = (rat(1, 66), rat(1, 33), rat(23, 22), rat(67, 66));
                let ok = printed
                    == (derived.z_log, derived.z_loglog, derived.final_loglog, derived.final_log);
                (Some(format!("z ~ (log X)^({})/(log log X)^({}); bound (log log X)^({})/(log X)^({})", printed.0, printed.1, printed.2, printed.3)), ok)
            } else {
                (None, derived == general)
            };
            rows.push(ExponentRow {
                regime,
                theta: format!("z ~ (log X)^({})/(log log X)^({})", derived.z_log, derived.z_loglog),
                final_exponent: format!("(log log X)^({})/(log X)^({})", derived.final_loglog, derived.final_log),
                paper_value: paper,
                general_formula: Some(format!(
                    "z ~ (log X)^({})/(log log X)^({}); bound (log log X)^({})/(log X)^({})",
                    general.z_log, general.z_loglog, general.final_loglog, general.final_log
                )),
                status: status(paper_ok && derived == general),
                note: Some(format!(
                    "gate exponent from #G (log|d_L|)^2 with #G ~ z^{}: {}; general statement uses {}",
                    2 * gsp_dimension(g),
                    derived.gate_exponent,
                    general.gate_exponent
                )),
            });
            continue;
        }
        let p = optimal_theta(regime, g)?;
        let general = theorem_theta(regime, g).expect("conditional regime");
        let printed = if g == 2 { genus2_printed_theta(regime) } else { None };
        let ok = p.theta == general && printed.map_or(true, |v| v == p.theta);
        let note = match (regime, printed) {
            (Regime::GrhAhcPcc, Some(v)) if v != p.theta => {
                let alt = optimal_theta_with(regime, g, 20)?;
                Some(format!(
                    "#GSp_4(Z/lq) ~ (lq)^{} ~ z^{}; with the intermediate z^20 the balance gives {}",
                    gsp_dimension(g),
                    2 * gsp_dimension(g),
                    alt.theta
                ))
            }
            _ => None,
        };
        rows.push(ExponentRow {
            regime,
            theta: p.theta.to_string(),
            final_exponent: p.final_exponent.to_string(),
            paper_value: printed.map(|v| v.to_string()),
            general_formula: Some(general.to_string()),
            status: status(ok),
            note,
        });
    }
    Ok(rows)
}
