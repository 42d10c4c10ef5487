//! CSV tables: comma-separated, header row, UTF-8, LF line endings.
//!
//! Fields are numbers, bare enum names, or `num/den` rationals, so no
//! quoting is ever needed.

use relapprox_core::numeric::format_rational;
use relapprox_core::verify::ComparisonTable;
use relapprox_core::{FamilyKind, ProfileRow};

use crate::runner::SeedOutcome;

fn push_row(out: &mut String, fields: &[String]) {
    out.push_str(&fields.join(","));
    out.push('\n');
}

/// One row per seed and check (`vs_base`, `vs_ground`, `pnet`): row count is
/// always `seeds x 3`. Seeds that failed in a stage keep their rows, with
/// zero ranges checked and `pass` false.
pub fn violations_csv(seeds: &[SeedOutcome]) -> String {
    let mut out = String::from(
        "seed,check,checked_ranges,violations,max_multiplicative_error,max_additive_error,witness,pass\n",
    );
    for outcome in seeds {
        match outcome {
            SeedOutcome::Completed(r) => {
                for (check, report) in [("vs_base", &r.vs_base), ("vs_ground", &r.vs_ground)] {
                    push_row(
                        &mut out,
                        &[
                            r.seed.to_string(),
                            check.to_string(),
                            report.checked_ranges.to_string(),
                            report.violations.len().to_string(),
                            format_rational(&report.max_multiplicative_error),
                            format_rational(&report.max_additive_error),
                            String::new(),
                            report.pass.to_string(),
                        ],
                    );
                }
                push_row(
                    &mut out,
                    &[
                        r.seed.to_string(),
                        String::from("pnet"),
                        r.pnet.checked_ranges.to_string(),
                        u64::from(!r.pnet.pass).to_string(),
                        String::new(),
                        String::new(),
                        r.pnet.witness.map(|w| w.to_string()).unwrap_or_default(),
                        r.pnet.pass.to_string(),
                    ],
                );
            }
            SeedOutcome::Failed(f) => {
                for check in ["vs_base", "vs_ground", "pnet"] {
                    push_row(
                        &mut out,
                        &[
                            f.seed.to_string(),
                            check.to_string(),
                            String::from("0"),
                            String::from("0"),
                            String::new(),
                            String::new(),
                            String::new(),
                            String::from("false"),
                        ],
                    );
                }
            }
        }
    }
    out
}

/// One row per seed comparing the construction with the classical baseline.
pub fn comparison_csv(seeds: &[SeedOutcome]) -> String {
    let mut out = String::from(
        "seed,mode,baseline_size,baseline_pass,construct_support,construct_pass,resamples\n",
    );
    for outcome in seeds {
        match outcome {
            SeedOutcome::Completed(r) => {
                let resamples = r
                    .construction
                    .resample_stats
                    .as_ref()
                    .map(|s| s.resample_count)
                    .unwrap_or(0);
                push_row(
                    &mut out,
                    &[
                        r.seed.to_string(),
                        r.construction.plan.mode.name().to_string(),
                        r.baseline_size.to_string(),
                        r.baseline_pass.to_string(),
                        r.construction.support_size.to_string(),
                        r.vs_ground.pass.to_string(),
                        resamples.to_string(),
                    ],
                );
            }
            SeedOutcome::Failed(f) => {
                push_row(
                    &mut out,
                    &[
                        f.seed.to_string(),
                        String::from("failed"),
                        String::from("0"),
                        String::from("false"),
                        String::from("0"),
                        String::from("false"),
                        String::from("0"),
                    ],
                );
            }
        }
    }
    out
}

/// One row per seed of a side-by-side comparison table.
pub fn comparison_table_csv(table: &ComparisonTable) -> String {
    let mut out = String::from(
        "seed,mode,baseline_size,baseline_pass,construct_support,construct_pass,resamples\n",
    );
    for row in &table.rows {
        push_row(
            &mut out,
            &[
                row.seed.to_string(),
                row.mode.name().to_string(),
                row.baseline_size.to_string(),
                row.baseline_pass.to_string(),
                row.construct_support.to_string(),
                row.construct_pass.to_string(),
                row.resamples.to_string(),
            ],
        );
    }
    out
}

/// One row per probed depth of a shallow-range growth profile.
pub fn profile_csv(family: FamilyKind, n: u32, rows: &[ProfileRow]) -> String {
    let mut out = String::from("family,n,k,count,bound,exceeds\n");
    for row in rows {
        push_row(
            &mut out,
            &[
                family.name().to_string(),
                n.to_string(),
                row.k.to_string(),
                row.count.to_string(),
                row.bound.to_string(),
                row.exceeds.to_string(),
            ],
        );
    }
    out
}
