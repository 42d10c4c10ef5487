//! Parameter resolution: mode routing, sample sizes, layer scales, heavy
//! thresholds, and the light-object sampling probability.
//!
//! All quantities are exact rationals. Logarithms are base 2 and rounded up
//! to integers, which keeps every later comparison exact and reproduces the
//! worked examples in the tests.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::One;

use crate::construct::ConstructError;
use crate::numeric::{ceil_log2, ceil_rat, in_open_unit_interval, rat, Rat};
use crate::ranges::{ilog2_ceil, FamilyKind};

/// Scale constants of the construction, all positive rationals. Fields left
/// out of a serialized document take their defaults.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct Constants {
    /// Heavy-object threshold scale.
    #[serde(with = "crate::numeric::rat_string")]
    pub heavy_scale: Rat,
    /// Layer size scale (each layer doubles it).
    #[serde(with = "crate::numeric::rat_string")]
    pub layer_scale: Rat,
    /// Intermediate sample size scale.
    #[serde(with = "crate::numeric::rat_string")]
    pub initial_scale: Rat,
    /// Fallback and baseline sample size scale.
    #[serde(with = "crate::numeric::rat_string")]
    pub base_scale: Rat,
    /// Slack on the light sample size event.
    #[serde(with = "crate::numeric::rat_string")]
    pub size_slack: Rat,
    /// Divisor turning the user tolerance into the internal one.
    pub eps_scale: u32,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            heavy_scale: rat(1, 1),
            layer_scale: rat(1, 1),
            initial_scale: rat(4, 1),
            base_scale: rat(4, 1),
            size_slack: rat(1, 1),
            eps_scale: 6,
        }
    }
}

/// Iteration caps guarding the randomized stages. Fields left out of a
/// serialized document take their defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct Caps {
    /// Attempts at drawing a certified intermediate sample.
    pub initial_retries: u32,
    /// Resampling steps before giving up.
    pub mt_max_resamples: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            initial_retries: 64,
            mt_max_resamples: 1_000_000,
        }
    }
}

/// User-facing construction parameters.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ApproxParams {
    /// Measure cutoff, in (0, 1).
    #[serde(with = "crate::numeric::rat_string")]
    pub p: Rat,
    /// Relative tolerance, in (0, 1).
    #[serde(with = "crate::numeric::rat_string")]
    pub eps: Rat,
    /// Scale constants.
    #[serde(default)]
    pub constants: Constants,
    /// Iteration caps.
    #[serde(default)]
    pub caps: Caps,
}

impl ApproxParams {
    /// Parameters with default constants and caps.
    pub fn new(p: Rat, eps: Rat) -> Self {
        ApproxParams {
            p,
            eps,
            constants: Constants::default(),
            caps: Caps::default(),
        }
    }

    fn validate(&self) -> Result<(), ConstructError> {
        use num_traits::Zero;
        if !in_open_unit_interval(&self.p) {
            return Err(ConstructError::BadParams(String::from(
                "p must lie in (0, 1)",
            )));
        }
        if !in_open_unit_interval(&self.eps) {
            return Err(ConstructError::BadParams(String::from(
                "eps must lie in (0, 1)",
            )));
        }
        let c = &self.constants;
        for (value, name) in [
            (&c.heavy_scale, "heavy_scale"),
            (&c.layer_scale, "layer_scale"),
            (&c.initial_scale, "initial_scale"),
            (&c.base_scale, "base_scale"),
            (&c.size_slack, "size_slack"),
        ] {
            if *value <= Rat::zero() {
                return Err(ConstructError::BadParams(alloc::format!(
                    "constant {name} must be positive"
                )));
            }
        }
        if c.eps_scale < 1 {
            return Err(ConstructError::BadParams(String::from(
                "eps_scale must be at least 1",
            )));
        }
        if self.caps.initial_retries < 1 || self.caps.mt_max_resamples < 1 {
            return Err(ConstructError::BadParams(String::from(
                "caps must be at least 1",
            )));
        }
        Ok(())
    }
}

/// Which variant of the pipeline a parameter combination routes to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanMode {
    /// Layered construction with light-object resampling.
    Full,
    /// Plain uniform sample sized for the cutoff regime.
    StandardFallback,
    /// Plain uniform sample sized for an additive guarantee.
    AbsoluteFallback,
    /// The computed sample size reaches n; output the whole ground set.
    DegenerateWholeSet,
}

impl PlanMode {
    /// Stable lowercase name used in reports.
    pub fn name(self) -> &'static str {
        match self {
            PlanMode::Full => "full",
            PlanMode::StandardFallback => "standard_fallback",
            PlanMode::AbsoluteFallback => "absolute_fallback",
            PlanMode::DegenerateWholeSet => "degenerate_whole_set",
        }
    }
}

/// Every resolved quantity the pipeline consumes, with provenance notes.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ResolvedPlan {
    /// Selected pipeline variant.
    pub mode: PlanMode,
    /// Ground set size.
    pub n: u32,
    /// Range family.
    pub family: FamilyKind,
    /// User measure cutoff.
    #[serde(with = "crate::numeric::rat_string")]
    pub p: Rat,
    /// User tolerance.
    #[serde(with = "crate::numeric::rat_string")]
    pub eps: Rat,
    /// Internal measure cutoff (equals `p`).
    #[serde(with = "crate::numeric::rat_string")]
    pub p_int: Rat,
    /// Internal tolerance `eps / eps_scale`.
    #[serde(with = "crate::numeric::rat_string")]
    pub eps_int: Rat,
    /// Intermediate (or fallback) sample size, capped at `n`.
    pub sample_size: u64,
    /// Number of positive layers.
    pub layer_count: u32,
    /// Layer size scales Δ_0..Δ_layer_count.
    #[serde(with = "crate::numeric::rat_vec_string")]
    pub deltas: Vec<Rat>,
    /// Heavy incidence thresholds per layer.
    #[serde(with = "crate::numeric::rat_vec_string")]
    pub heavy_thresholds: Vec<Rat>,
    /// Light-object inclusion probability, clamped to at most 1.
    #[serde(with = "crate::numeric::rat_string")]
    pub keep_prob: Rat,
    /// Whether the probability formula exceeded 1 and was clamped.
    pub pi_clamped: bool,
    /// Slack on the light sample size event.
    #[serde(with = "crate::numeric::rat_string")]
    pub size_slack: Rat,
    /// Iteration caps carried through for the randomized stages.
    pub caps: Caps,
    /// Routing and rounding notes, one per decision.
    pub provenance: Vec<String>,
}

/// Resolves every numeric parameter of the construction for a ground set of
/// size `n`.
pub fn resolve_plan(
    n: u32,
    family: FamilyKind,
    params: &ApproxParams,
) -> Result<ResolvedPlan, ConstructError> {
    params.validate()?;
    if n == 0 {
        return Err(ConstructError::BadParams(String::from(
            "ground set must be non-empty",
        )));
    }
    let p = params.p.clone();
    let eps = params.eps.clone();
    let eps_int = &eps / Rat::from_integer(params.constants.eps_scale as i128);
    let p_int = p.clone();
    let mut provenance = Vec::new();
    provenance.push(alloc::format!(
        "internal tolerance = eps/{} = {}",
        params.constants.eps_scale,
        crate::numeric::format_rational(&eps_int)
    ));

    let eighth = rat(1, 8);
    let one = Rat::one();

    let fallback = |mode: PlanMode, size: u64, note: String, mut provenance: Vec<String>| {
        let capped = (size).min(n as u64).max(1);
        provenance.push(note);
        if capped < size {
            provenance.push(alloc::format!(
                "sample size {size} capped to ground size {capped}"
            ));
        }
        ResolvedPlan {
            mode,
            n,
            family,
            p: p.clone(),
            eps: eps.clone(),
            p_int: p.clone(),
            eps_int: eps_int.clone(),
            sample_size: capped,
            layer_count: 0,
            deltas: Vec::new(),
            heavy_thresholds: Vec::new(),
            keep_prob: Rat::one(),
            pi_clamped: false,
            size_slack: params.constants.size_slack.clone(),
            caps: params.caps,
            provenance,
        }
    };

    if p > eighth {
        let size = ceil_to_u64(&(&params.constants.base_scale / (&eps * &eps)));
        let note = if eps >= eighth {
            alloc::format!(
                "cutoff above 1/8 with coarse tolerance: constant-size absolute sampling, size {size}"
            )
        } else {
            alloc::format!("cutoff above 1/8: absolute sampling, size {size}")
        };
        return Ok(fallback(PlanMode::AbsoluteFallback, size, note, provenance));
    }
    if p > eps {
        let lam = ceil_log2(&(&one / &p))? as i128;
        let size = ceil_to_u64(
            &(&params.constants.base_scale * Rat::from_integer(lam) / (&eps * &eps * &p)),
        );
        let note = alloc::format!("cutoff above tolerance: uniform sampling, size {size}");
        return Ok(fallback(PlanMode::StandardFallback, size, note, provenance));
    }

    let lam = ceil_log2(&(&one / (&p_int * &eps_int)))? as i128;
    let f_size = ceil_to_u64(
        &(&params.constants.initial_scale * Rat::from_integer(lam)
            / (&eps_int * &eps_int * &p_int)),
    );
    provenance.push(alloc::format!(
        "log factor {lam}, intermediate sample target {f_size}"
    ));
    if f_size >= n as u64 {
        let note = alloc::format!(
            "intermediate sample target {f_size} reaches ground size {n}: whole set is exact"
        );
        return Ok(fallback(PlanMode::DegenerateWholeSet, n as u64, note, provenance));
    }
    if p_int > eps_int {
        let lam_b = ceil_log2(&(&one / &p))? as i128;
        let size = ceil_to_u64(
            &(&params.constants.base_scale * Rat::from_integer(lam_b) / (&eps * &eps * &p)),
        );
        let note = alloc::format!(
            "cutoff above internal tolerance {}: uniform sampling, size {size}",
            crate::numeric::format_rational(&eps_int)
        );
        return Ok(fallback(PlanMode::StandardFallback, size, note, provenance));
    }

    let layer_count = ceil_log2(&(&one / &p_int))?;
    let eps_sq = &eps_int * &eps_int;
    let delta_1 = &params.constants.layer_scale * Rat::from_integer(lam) / &eps_sq;
    let mut deltas = Vec::with_capacity(layer_count as usize + 1);
    deltas.push(&delta_1 / Rat::from_integer(2));
    for i in 1..=layer_count {
        deltas.push(&delta_1 * Rat::from_integer(1i128 << (i - 1)));
    }
    let phi = family.phi(f_size);
    let exponent = family.exponent() + 2;
    let heavy_thresholds: Vec<Rat> = deltas
        .iter()
        .map(|d| &params.constants.heavy_scale * Rat::from_integer(phi as i128) * pow_rat(d, exponent))
        .collect();
    provenance.push(alloc::format!(
        "{} layers; thresholds scale as phi({f_size}) = {phi} times delta^{exponent}",
        layer_count + 1
    ));

    let lg_layers = ilog2_ceil(layer_count as u64);
    let lg_phi = ilog2_ceil(phi);
    let lg_eps = ceil_log2(&(&one / &eps_int))?;
    let num = lg_layers.max(lg_phi) + lg_eps;
    let den = layer_count + lg_eps;
    let mut keep_prob = rat(num as i128, den as i128);
    let mut pi_clamped = false;
    provenance.push(alloc::format!(
        "keep probability = (max({lg_layers}, {lg_phi}) + {lg_eps}) / ({layer_count} + {lg_eps})"
    ));
    if keep_prob > one {
        keep_prob = Rat::one();
        pi_clamped = true;
        provenance.push(String::from("keep probability clamped to 1"));
    }

    let plan = ResolvedPlan {
        mode: PlanMode::Full,
        n,
        family,
        p,
        eps,
        p_int,
        eps_int,
        sample_size: f_size,
        layer_count,
        deltas,
        heavy_thresholds,
        keep_prob,
        pi_clamped,
        size_slack: params.constants.size_slack.clone(),
        caps: params.caps,
        provenance,
    };
    debug_assert!(plan.p_int <= eighth && plan.p_int <= plan.eps_int);
    debug_assert!(plan.sample_size < plan.n as u64);
    debug_assert_eq!(&plan.deltas[1], &(&plan.deltas[0] * Rat::from_integer(2)));
    Ok(plan)
}

fn ceil_to_u64(x: &Rat) -> u64 {
    let c = ceil_rat(x);
    if c <= 0 {
        1
    } else {
        c as u64
    }
}

fn pow_rat(x: &Rat, e: u32) -> Rat {
    let mut out = Rat::one();
    for _ in 0..e {
        out = &out * x;
    }
    out
}
