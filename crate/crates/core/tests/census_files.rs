use std::collections::HashMap;

use frobcensus_core::census::{
    census_record, field_census, pi_f, pi_f_partition_total, pi_k, pigeonhole_bound, run_census, summary_json,
    write_csv, write_jsonl, CensusOptions, CensusReport,
};
use frobcensus_core::curve::CurveModel;
use frobcensus_core::frobenius::ReductionClass;
use frobcensus_core::numth::primes_up_to;
use frobcensus_core::Error;

fn census(x: u64, threads: usize) -> CensusReport {
    run_census(&CurveModel::lmfdb_3680_a_29440_1(), x, CensusOptions { threads, ..Default::default() }).unwrap()
}

fn render(r: &CensusReport) -> (Vec<u8>, Vec<u8>, String) {
    let mut jsonl = Vec::new();
    write_jsonl(r, &mut jsonl).unwrap();
    let mut csv = Vec::new();
    write_csv(r, &mut csv).unwrap();
    (jsonl, csv, summary_json(r).unwrap().to_string())
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let one = census(1500, 1);
    let three = census(1500, 3);
    assert_eq!(render(&one), render(&three));
}

#[test]
fn records_cover_every_prime_in_order() {
    let r = census(1000, 2);
    let ps: Vec<u64> = r.records.iter().map(|x| x.p).collect();
    assert_eq!(ps, primes_up_to(1000));
    let c = r.counts;
    assert_eq!(c.total(), ps.len() as u64);
    assert_eq!(c.nonordinary + c.notsimple + c.ordinarysimple, c.good);
    assert_eq!(pi_f_partition_total(&r), c.ordinarysimple);
    for rec in &r.records {
        assert_eq!(rec.field.is_some(), rec.class == ReductionClass::OrdinarySimple);
        assert_eq!(rec.counts.is_none(), rec.class == ReductionClass::Bad);
    }
}

#[test]
fn multiplicities_match_a_direct_tally() {
    let r = census(2000, 1);
    let mut by_d0: HashMap<i64, u64> = HashMap::new();
    for (_, f) in r.ordinary_simple() {
        *by_d0.entry(f.d0).or_default() += 1;
    }
    for (&d, &n) in &by_d0 {
        assert_eq!(r.d0_multiplicities[&d], n);
        assert_eq!(pi_f(&r, d), n);
        // a square multiple of d0 names the same real subfield
        assert_eq!(pi_f(&r, 4 * d), n);
    }
    for class in &r.fields {
        assert_eq!(pi_k(&r, &class.key), class.primes.len() as u64);
    }
    let fc = field_census(&r).unwrap();
    assert!(fc.d_set_len >= fc.d0_set.len());
    assert!(pigeonhole_bound(&r).is_ok());
}

#[test]
fn jsonl_rows_have_the_documented_fields() {
    let r = census(200, 1);
    let mut buf = Vec::new();
    write_jsonl(&r, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let keys = ["p", "class", "N1", "N2", "t1", "a2", "delta", "d0", "gamma", "sf_gamma", "r"];
    let mut saw_field = false;
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let obj = v.as_object().unwrap();
        assert_eq!(obj.len(), keys.len());
        for k in keys {
            assert!(obj.contains_key(k), "{k} missing in {line}");
        }
        if obj["class"] == "ordinarysimple" {
            saw_field = true;
            assert_eq!(obj["r"].as_array().unwrap().len(), 4);
        } else {
            assert!(obj["r"].is_null());
        }
    }
    assert!(saw_field);
    let mut csv = Vec::new();
    write_csv(&r, &mut csv).unwrap();
    assert!(String::from_utf8(csv).unwrap().starts_with("p,class,t1,a2,d0,sf_gamma\n"));
}

#[test]
fn census_limits() {
    let c = CurveModel::lmfdb_3680_a_29440_1();
    assert!(matches!(run_census(&c, 200_000, CensusOptions::default()), Err(Error::Capacity(_))));
    assert!(matches!(
        run_census(&c, 100, CensusOptions { threads: 0, ..Default::default() }),
        Err(Error::InvalidInput(_))
    ));
    let small = run_census(&c, 10, CensusOptions::default()).unwrap();
    assert_eq!(small.records.len(), 4);
    assert_eq!(census_record(&c, 2).unwrap().class, ReductionClass::Bad);
}
