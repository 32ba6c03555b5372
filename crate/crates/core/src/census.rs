//! Prime-by-prime census of Frobenius fields for one curve, the counting
//! functions built on it, and JSONL / CSV / summary persistence.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{counts_from_weil, frobenius_coeffs, reduction_type, CurveModel, ReductionType};
use crate::error::{ensure_consistent, Error, Result};
use crate::frobenius::{
    classify, cm_field_key, gamma, gamma_genus2, gamma_via_norm, is_real_subfield, psi_bound, real_subfield,
    same_cm_field, CmFieldKey, ReductionClass,
};
use crate::numth::{primes_up_to, squarefree_part_with_bound, DEFAULT_TRIAL_BOUND};

pub const DEFAULT_MAX_X: u64 = 10_000;
pub const EXTENDED_MAX_X: u64 = 100_000;

/// Field data attached to an ordinary simple prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldData {
    pub delta: i64,
    pub d0: i64,
    pub gamma: i128,
    pub sf_gamma: i128,
    pub cm_key: CmFieldKey,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusRecord {
    pub p: u64,
    pub class: ReductionClass,
    /// `(N1, N2, t1, a2)`; absent at bad primes.
    pub counts: Option<(u64, u64, i64, i64)>,
    pub field: Option<FieldData>,
}

impl FrobeniusRecord {
    pub fn t1(&self) -> Option<i64> {
        self.counts.map(|c| c.2)
    }

    pub fn a2(&self) -> Option<i64> {
        self.counts.map(|c| c.3)
    }
}

/// Computes one census row, asserting every per-record invariant.
pub fn census_record(curve: &CurveModel, p: u64) -> Result<FrobeniusRecord> {
    census_record_with_bound(curve, p, DEFAULT_TRIAL_BOUND)
}

/// As [`census_record`], with `factor_bound` as the trial-division bound for `sf(gamma)`.
pub fn census_record_with_bound(curve: &CurveModel, p: u64, factor_bound: u64) -> Result<FrobeniusRecord> {
    if reduction_type(curve, p) == ReductionType::Bad {
        return Ok(FrobeniusRecord { p, class: ReductionClass::Bad, counts: None, field: None });
    }
    let fc = frobenius_coeffs(curve, p)?;
    let (t1, a2) = (fc.t1, fc.a2);
    let back = counts_from_weil(t1, a2, p, 2)?;
    ensure_consistent!(
        back[0] == BigInt::from(fc.n1) && back[1] == BigInt::from(fc.n2),
        "Weil polynomial at p = {p} does not reproduce (N1, N2) = ({}, {})",
        fc.n1,
        fc.n2
    );
    let class = classify(t1, a2, p);
    let field = if class == ReductionClass::OrdinarySimple { Some(field_data(t1, a2, p, factor_bound)?) } else { None };
    Ok(FrobeniusRecord { p, class, counts: Some((fc.n1, fc.n2, t1, a2)), field })
}

fn field_data(t1: i64, a2: i64, p: u64, factor_bound: u64) -> Result<FieldData> {
    let rs = real_subfield(t1, a2, p)?;
    ensure_consistent!(is_real_subfield(rs.d0, rs.delta), "d0 * Delta is not a square at p = {p}");
    let cm_key = cm_field_key(t1, a2, p)?;
    let g = gamma_genus2(t1, a2, p);
    ensure_consistent!(g > 0, "gamma = {g} is not positive at p = {p}");
    ensure_consistent!(
        gamma_via_norm(&cm_key)? == BigInt::from(g),
        "gamma = {g} differs from N(beta^2 - 4p) at p = {p}"
    );
    ensure_consistent!(
        gamma(&[-t1, a2], p)? == BigInt::from(g),
        "gamma = {g} differs from the characteristic-polynomial route at p = {p}"
    );
    let (sf, _) = squarefree_part_with_bound(g, factor_bound)?;
    Ok(FieldData { delta: rs.delta, d0: rs.d0, gamma: g, sf_gamma: sf, cm_key })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassCounts {
    pub bad: u64,
    pub good: u64,
    pub nonordinary: u64,
    pub notsimple: u64,
    pub ordinarysimple: u64,
}

/// One isomorphism class of CM fields seen in the census.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldClass {
    /// Key of the first prime in the class.
    pub key: CmFieldKey,
    pub sf_gamma: i128,
    pub primes: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct CensusReport {
    pub curve: CurveModel,
    pub x: u64,
    pub records: Vec<FrobeniusRecord>,
    pub counts: ClassCounts,
    /// CM-field classes in order of first occurrence.
    pub fields: Vec<FieldClass>,
    pub d0_multiplicities: BTreeMap<i64, u64>,
}

#[derive(Clone, Copy, Debug)]
pub struct CensusOptions {
    pub threads: usize,
    /// Permit `X` up to [`EXTENDED_MAX_X`].
    pub extended: bool,
    /// Trial-division bound for squarefree parts.
    pub factor_bound: u64,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions { threads: 1, extended: false, factor_bound: DEFAULT_TRIAL_BOUND }
    }
}

pub fn run_census(curve: &CurveModel, x: u64, opts: CensusOptions) -> Result<CensusReport> {
    let cap = if opts.extended { EXTENDED_MAX_X } else { DEFAULT_MAX_X };
    if x > cap {
        return Err(Error::capacity(format!("X = {x} exceeds the census cap {cap}")));
    }
    if opts.threads == 0 {
        return Err(Error::invalid("thread count must be positive"));
    }
    let primes = primes_up_to(x);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| Error::capacity(format!("cannot start worker pool: {e}")))?;
    // Larger primes cost more; hand them out first, then restore order.
    let mut records: Vec<FrobeniusRecord> = pool.install(|| {
        primes.par_iter().rev().map(|&p| census_record_with_bound(curve, p, opts.factor_bound)).collect::<Result<Vec<_>>>()
    })?;
    records.reverse();
    build_report(curve.clone(), x, records)
}

/// Aggregates ordered records into a report, checking the partition invariants.
pub fn build_report(curve: CurveModel, x: u64, records: Vec<FrobeniusRecord>) -> Result<CensusReport> {
    ensure_consistent!(records.windows(2).all(|w| w[0].p < w[1].p), "census records are not strictly increasing");
    let mut counts = ClassCounts::default();
    let mut fields: Vec<FieldClass> = Vec::new();
    let mut d0_multiplicities = BTreeMap::new();
    for r in &records {
        match r.class {
            ReductionClass::Bad => counts.bad += 1,
            ReductionClass::NonOrdinary => counts.nonordinary += 1,
            ReductionClass::NotSimple => counts.notsimple += 1,
            ReductionClass::OrdinarySimple => counts.ordinarysimple += 1,
        }
        if r.class != ReductionClass::Bad {
            counts.good += 1;
        }
        let Some(fd) = &r.field else { continue };
        *d0_multiplicities.entry(fd.d0).or_insert(0) += 1;
        match fields.iter_mut().find(|c| same_cm_field(&c.key, &fd.cm_key)) {
            Some(class) => {
                ensure_consistent!(
                    class.sf_gamma == fd.sf_gamma,
                    "sf(gamma) differs inside one CM-field class ({} vs {} at p = {})",
                    class.sf_gamma,
                    fd.sf_gamma,
                    r.p
                );
                class.primes.push(r.p);
            }
            None => fields.push(FieldClass { key: fd.cm_key.clone(), sf_gamma: fd.sf_gamma, primes: vec![r.p] }),
        }
    }
    ensure_consistent!(
        counts.good == counts.nonordinary + counts.notsimple + counts.ordinarysimple,
        "class counts do not partition the good primes"
    );
    let total: u64 = fields.iter().map(|c| c.primes.len() as u64).sum();
    ensure_consistent!(total == counts.ordinarysimple, "field multiplicities do not sum to the ordinary simple count");
    Ok(CensusReport { curve, x, records, counts, fields, d0_multiplicities })
}

impl CensusReport {
    pub fn ordinary_simple(&self) -> impl Iterator<Item = (&FrobeniusRecord, &FieldData)> {
        self.records.iter().filter_map(|r| r.field.as_ref().map(|f| (r, f)))
    }

    pub fn max_field_multiplicity(&self) -> u64 {
        self.fields.iter().map(|c| c.primes.len() as u64).max().unwrap_or(0)
    }

    /// Fraction of good primes that are ordinary.
    pub fn ordinary_density(&self) -> Option<BigRational> {
        (self.counts.good > 0).then(|| {
            BigRational::new(
                BigInt::from(self.counts.good - self.counts.nonordinary),
                BigInt::from(self.counts.good),
            )
        })
    }
}

/// Number of ordinary simple primes whose Frobenius field contains `Q(sqrt d)`.
pub fn pi_f(report: &CensusReport, d: i64) -> u64 {
    report.ordinary_simple().filter(|(_, f)| is_real_subfield(d, f.delta)).count() as u64
}

/// Number of ordinary simple primes whose Frobenius field is isomorphic to `key`'s.
pub fn pi_k(report: &CensusReport, key: &CmFieldKey) -> u64 {
    report.ordinary_simple().filter(|(_, f)| same_cm_field(&f.cm_key, key)).count() as u64
}

#[derive(Clone, Debug)]
pub struct FieldCensus {
    pub d0_set: Vec<i64>,
    /// Number of CM-field classes.
    pub d_set_len: usize,
    pub sf_gammas: Vec<i128>,
}

pub fn field_census(report: &CensusReport) -> Result<FieldCensus> {
    let x = report.x as i128;
    let psi = psi_bound(2, &BigInt::from(report.x))?;
    for (r, f) in report.ordinary_simple() {
        ensure_consistent!((f.delta as i128) <= 48 * r.p as i128, "Delta exceeds 48p at p = {}", r.p);
        ensure_consistent!((f.d0 as i128) <= 48 * x, "d0 = {} exceeds 48X", f.d0);
    }
    for c in &report.fields {
        ensure_consistent!(
            BigInt::from(c.sf_gamma) <= psi,
            "sf(gamma) = {} exceeds psi_2(sqrt X) = {psi}",
            c.sf_gamma
        );
    }
    let d0_set: Vec<i64> = report.d0_multiplicities.keys().copied().collect();
    ensure_consistent!(report.fields.len() >= d0_set.len(), "fewer CM-field classes than real subfields");
    Ok(FieldCensus {
        d0_set,
        d_set_len: report.fields.len(),
        sf_gammas: report.fields.iter().map(|c| c.sf_gamma).collect(),
    })
}

/// `#ordinary simple / max multiplicity`, a lower bound for the number of distinct fields.
pub fn pigeonhole_bound(report: &CensusReport) -> Result<BigRational> {
    let m = report.max_field_multiplicity();
    if report.counts.ordinarysimple == 0 || m == 0 {
        return Err(Error::invalid("census has no ordinary simple primes"));
    }
    let bound = BigRational::new(BigInt::from(report.counts.ordinarysimple), BigInt::from(m));
    ensure_consistent!(
        BigRational::from_integer(BigInt::from(report.fields.len())) >= bound,
        "pigeonhole bound {bound} exceeds the number of distinct fields {}",
        report.fields.len()
    );
    Ok(bound)
}

#[derive(Serialize)]
struct JsonlRow {
    p: u64,
    class: ReductionClass,
    #[serde(rename = "N1")]
    n1: Option<u64>,
    #[serde(rename = "N2")]
    n2: Option<u64>,
    t1: Option<i64>,
    a2: Option<i64>,
    delta: Option<i64>,
    d0: Option<i64>,
    gamma: Option<i64>,
    sf_gamma: Option<i64>,
    r: Option<[i64; 4]>,
}

fn small(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::capacity(format!("{x} does not fit in 64 bits")))
}

fn narrow(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::capacity(format!("{x} does not fit in 64 bits")))
}

fn jsonl_row(r: &FrobeniusRecord) -> Result<JsonlRow> {
    let f = r.field.as_ref();
    let rkey = match f {
        Some(fd) => {
            let q = &fd.cm_key.r;
            Some([small(q.a().numer())?, small(q.a().denom())?, small(q.b().numer())?, small(q.b().denom())?])
        }
        None => None,
    };
    Ok(JsonlRow {
        p: r.p,
        class: r.class,
        n1: r.counts.map(|c| c.0),
        n2: r.counts.map(|c| c.1),
        t1: r.t1(),
        a2: r.a2(),
        delta: f.map(|f| f.delta),
        d0: f.map(|f| f.d0),
        gamma: f.map(|f| narrow(f.gamma)).transpose()?,
        sf_gamma: f.map(|f| narrow(f.sf_gamma)).transpose()?,
        r: rkey,
    })
}

pub fn write_jsonl(report: &CensusReport, mut out: impl Write) -> Result<()> {
    for r in &report.records {
        let line = serde_json::to_string(&jsonl_row(r)?).map_err(|e| Error::consistency(e.to_string()))?;
        writeln!(out, "{line}").map_err(io_err)?;
    }
    Ok(())
}

pub fn write_csv(report: &CensusReport, mut out: impl Write) -> Result<()> {
    writeln!(out, "p,class,t1,a2,d0,sf_gamma").map_err(io_err)?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for r in &report.records {
        let f = r.field.as_ref();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.p,
            r.class,
            opt(r.t1().map(|v| v.to_string())),
            opt(r.a2().map(|v| v.to_string())),
            opt(f.map(|f| f.d0.to_string())),
            opt(f.map(|f| f.sf_gamma.to_string())),
        )
        .map_err(io_err)?;
    }
    Ok(())
}

fn io_err(e: std::io::Error) -> Error {
    Error::capacity(format!("write failed: {e}"))
}

/// Summary object: counts, extremal multiplicities and the pigeonhole bound.
pub fn summary_json(report: &CensusReport) -> Result<serde_json::Value> {
    let fc = field_census(report)?;
    let bound = if report.counts.ordinarysimple > 0 { Some(pigeonhole_bound(report)?.to_string()) } else { None };
    let density = report.ordinary_density();
    let density_low = density.as_ref().is_some_and(|d| *d < BigRational::new(9.into(), 10.into()));
    let max_d0 = report.d0_multiplicities.values().copied().max().unwrap_or(0);
    Ok(serde_json::json!({
        "schema": 1,
        "curve": {
            "label": report.curve.label(),
            "f": report.curve.coeffs(),
        },
        "X": report.x,
        "primes": report.records.len(),
        "counts": report.counts,
        "ordinary_density": density.map(|d| d.to_string()),
        "ordinary_density_below_0.9": density_low,
        "max_pi_K": report.max_field_multiplicity(),
        "max_pi_F": max_d0,
        "num_D0": fc.d0_set.len(),
        "num_D": fc.d_set_len,
        "pigeonhole_bound": bound,
    }))
}

/// Sum of `pi_f` over the observed `d0` values (partition check).
pub fn pi_f_partition_total(report: &CensusReport) -> u64 {
    report.d0_multiplicities.keys().map(|&d| pi_f(report, d)).sum()
}

impl FieldCensus {
    pub fn is_empty(&self) -> bool {
        self.d0_set.is_empty() && self.d_set_len == 0
    }
}

impl ClassCounts {
    pub fn total(&self) -> u64 {
        self.good + self.bad
    }
}
