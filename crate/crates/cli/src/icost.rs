use bbsim::graph::{exact_good_probability, is_good_partition, sample_partition};
use bbsim::infocost::icost_report;
use bbsim::Seed;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{GoodprobArgs, IcostArgs};
use crate::error::{CliError, CliResult};
use crate::report::{json_text, Outcome};

pub fn icost(a: &IcostArgs) -> CliResult<Outcome> {
    if a.t < 2 || a.k == 0 {
        return Err(CliError::Usage("need --t ≥ 2 and --k ≥ 1".into()));
    }
    let r = icost_report(&a.protocol, a.t, a.k, a.n.filter(|_| a.embed))?;
    let c = &r.compression;
    let passed = r.cost_bound_holds
        && r.tv_bound_holds
        && c.accounting_holds
        && c.error_bound_holds != Some(false)
        && r.direct_sum.as_ref().is_none_or(|d| d.holds && d.error_holds);
    Ok(Outcome {
        text: json_text(&r)?,
        passed,
    })
}

#[derive(Serialize)]
struct GoodprobReport {
    t: usize,
    k: usize,
    trials: usize,
    seed: u64,
    exact: f64,
    empirical: f64,
    std_error: f64,
    z_score: f64,
    within_3_sigma: bool,
}

pub fn goodprob(a: &GoodprobArgs) -> CliResult<Outcome> {
    if a.t == 0 || a.k == 0 || a.trials == 0 {
        return Err(CliError::Usage("--t, --k and --trials must be positive".into()));
    }
    let exact = exact_good_probability(a.t, a.k);
    let good = (0..a.trials)
        .into_par_iter()
        .map(|i| {
            let z = sample_partition(a.t, a.k, &Seed::new(a.seed.wrapping_add(i as u64), "partition"))?;
            Ok(usize::from(is_good_partition(&z)))
        })
        .sum::<bbsim::Result<usize>>()?;
    let empirical = good as f64 / a.trials as f64;
    let std_error = (exact * (1.0 - exact) / a.trials as f64).sqrt();
    let diff = empirical - exact;
    let z_score = if std_error > 0.0 { diff / std_error } else { 0.0 };
    let within_3_sigma = if std_error > 0.0 { z_score.abs() <= 3.0 } else { diff == 0.0 };
    Ok(Outcome {
        text: json_text(&GoodprobReport {
            t: a.t,
            k: a.k,
            trials: a.trials,
            seed: a.seed,
            exact,
            empirical,
            std_error,
            z_score,
            within_3_sigma,
        })?,
        passed: within_3_sigma,
    })
}
