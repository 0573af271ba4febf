//! Command-line wiring: every subcommand is a deterministic, scriptable run
//! emitting JSON (or CSV on the distribution subcommands).
//!
//! Exit codes: 0 on success or match, 1 on mismatch or verification failure,
//! 2 on usage errors (bad parameters, unusable input, exceeded budgets).

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::closed_form::{self, DesignParameters};
use crate::code::{self, CodewordParams, WeightDistribution};
use crate::cyclotomic::CycInt;
use crate::design;
use crate::error::{Error, Result};
use crate::exp_sum::{self, SValueDistribution};
use crate::field::{build_context, FieldContext, FieldParams};
use crate::prng::SplitMix64;

#[derive(Parser)]
#[command(
    name = "kasami-designs",
    version,
    about = "Weight distributions and 2-designs of extended non-binary Kasami codes",
    after_help = "Exit codes: 0 success/match, 1 mismatch or verification failure, 2 usage error.\n\
                  KDF_BUDGET overrides the enumeration cap (nominal symbol evaluations)."
)]
struct Cli {
    /// Worker threads for the scans (default: all cores). Any value yields
    /// byte-identical output.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct ParamArgs {
    /// Odd prime characteristic.
    #[arg(short)]
    p: u32,

    /// Half the field degree: the field is GF(p^(2s)).
    #[arg(short)]
    s: u32,

    /// Exponent selector for the x^(p^l+1) term (0 <= l <= 2s-1, l != s).
    #[arg(short)]
    l: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Print the field context summary.
    Inspect {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Compute the exact value distribution of S(a, b, c).
    ValueDist {
        #[command(flatten)]
        params: ParamArgs,
        /// Emit CSV instead of JSON.
        #[arg(long)]
        csv: bool,
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Compute the weight distribution of the code.
    WeightDist {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        csv: bool,
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Evaluate the closed-form predictions without any scan.
    Predict {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        what: What,
        #[arg(long)]
        csv: bool,
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Run computed against predicted and report a per-entry diff.
    Compare {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        what: What,
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Structural and empirical affine-invariance checks.
    CheckAffine {
        #[command(flatten)]
        params: ParamArgs,
        /// Random (codeword, g, t) permutation-membership trials.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Extract the supports of one weight class into a block file.
    ExtractDesign {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        weight: u32,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Verify the 2-design property of a block file.
    VerifyDesign {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Sample this many point pairs instead of full pair counting.
        #[arg(long, value_name = "N")]
        sampled: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Method {
    Enumerate,
    Sums,
    ClosedForm,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Enumerate => "enumerate",
            Method::Sums => "sums",
            Method::ClosedForm => "closed-form",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum What {
    Values,
    Weights,
    Designs,
}

impl What {
    fn name(self) -> &'static str {
        match self {
            What::Values => "values",
            What::Weights => "weights",
            What::Designs => "designs",
        }
    }
}

/// Provenance block embedded in every JSON artifact.
#[derive(Serialize, Clone, Default)]
struct RunConfig {
    subcommand: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    l: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    what: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    budget: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<String>,
}

impl RunConfig {
    /// The thread count is deliberately not recorded: it cannot affect any
    /// output (merges are associative), and artifacts stay byte-identical
    /// across worker counts.
    fn new(subcommand: &str, params: Option<ParamArgs>) -> Self {
        Self {
            subcommand: subcommand.into(),
            p: params.map(|a| a.p),
            s: params.map(|a| a.s),
            l: params.map(|a| a.l),
            ..Self::default()
        }
    }

    fn with_output(mut self, output: &Option<PathBuf>) -> Self {
        self.output = output.as_ref().map(|p| p.display().to_string());
        self
    }
}

#[derive(Serialize)]
struct ContextJson {
    p: u32,
    s: u32,
    l: u32,
    m: u32,
    q: u32,
    n: u32,
    d: u32,
    dprime: u32,
    case: crate::field::ParamCase,
    primitive_poly: Vec<u8>,
}

#[derive(Serialize)]
struct ValueEntryJson {
    value: CycInt,
    pretty: String,
    count: u64,
}

#[derive(Serialize)]
struct ValueDistJson {
    config: RunConfig,
    primitive_poly: Vec<u8>,
    params: FieldParams,
    method: String,
    total: u64,
    entries: Vec<ValueEntryJson>,
}

#[derive(Serialize)]
struct WeightEntryJson {
    w: u32,
    count: u64,
}

#[derive(Serialize)]
struct WeightDistJson {
    config: RunConfig,
    primitive_poly: Vec<u8>,
    params: FieldParams,
    method: String,
    total: u64,
    weights: Vec<WeightEntryJson>,
}

#[derive(Serialize)]
struct DesignsJson {
    config: RunConfig,
    primitive_poly: Vec<u8>,
    params: FieldParams,
    method: String,
    designs: Vec<DesignParameters>,
}

#[derive(Serialize)]
struct DiffEntryJson {
    key: String,
    computed: String,
    predicted: String,
}

#[derive(Serialize)]
struct CompareJson {
    config: RunConfig,
    primitive_poly: Vec<u8>,
    params: FieldParams,
    what: String,
    #[serde(rename = "match")]
    is_match: bool,
    computed_total: u64,
    predicted_total: u64,
    diffs: Vec<DiffEntryJson>,
}

#[derive(Serialize)]
struct AffineJson {
    config: RunConfig,
    primitive_poly: Vec<u8>,
    params: FieldParams,
    structural: bool,
    witness: Option<(u32, u32)>,
    empirical_trials: usize,
    empirical_pass: usize,
}

#[derive(Serialize)]
struct ExtractJson {
    config: RunConfig,
    primitive_poly: Vec<u8>,
    params: FieldParams,
    weight: u32,
    v: u32,
    k: u32,
    b: u64,
    lambda: u64,
    support_multiplicity: u32,
    out: String,
}

#[derive(Serialize)]
struct VerifyJson {
    config: RunConfig,
    input: String,
    v: u32,
    k: u32,
    b: u64,
    lambda_header: u64,
    mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda_verified: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    replication: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sampled_pairs: Option<Vec<SampledPairJson>>,
    #[serde(rename = "match")]
    is_match: bool,
}

#[derive(Serialize)]
struct SampledPairJson {
    pair: (u32, u32),
    count: u64,
}

/// Run the CLI on the given argv and return the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };

    let threads = cli.threads;
    let outcome = match threads {
        Some(n) if n > 0 => {
            match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(|| dispatch(cli.command)),
                Err(e) => Err(Error::InvalidArgument(format!("thread pool: {e}"))),
            }
        }
        Some(_) => Err(Error::InvalidArgument("--threads must be positive".into())),
        None => dispatch(cli.command),
    };

    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidParams(_)
                | Error::InvalidArgument(_)
                | Error::BudgetExceeded { .. }
                | Error::Io(_)
                | Error::Json(_) => 2,
                Error::NotInSubfield | Error::Internal(_) | Error::Verification(_) => 1,
            }
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Inspect { params, output } => {
            let ctx = build_context(params.p, params.s, params.l)?;
            let fp = *ctx.params();
            let doc = ContextJson {
                p: fp.p,
                s: fp.s,
                l: fp.l,
                m: fp.m,
                q: fp.q,
                n: fp.n,
                d: fp.d,
                dprime: fp.dprime,
                case: fp.case,
                primitive_poly: ctx.primitive_poly().to_vec(),
            };
            emit(&to_json(&doc)?, output.as_deref())?;
            Ok(0)
        }
        Command::ValueDist {
            params,
            csv,
            output,
        } => {
            let ctx = build_context(params.p, params.s, params.l)?;
            let dist = exp_sum::value_distribution(&ctx)?;
            let config = RunConfig::new("value-dist", Some(params)).with_output(&output);
            let text = render_value_dist(&ctx, &dist, "transform", config, csv)?;
            emit(&text, output.as_deref())?;
            Ok(0)
        }
        Command::WeightDist {
            params,
            method,
            csv,
            output,
        } => {
            let ctx = build_context(params.p, params.s, params.l)?;
            let mut config =
                RunConfig::new("weight-dist", Some(params)).with_output(&output);
            config.method = Some(method.name().into());
            let dist = match method {
                Method::Enumerate => {
                    let budget = enumeration_budget()?;
                    config.budget = Some(budget);
                    code::weight_distribution_enumerate(&ctx, budget)?
                }
                Method::Sums => code::weight_distribution_via_sums(&ctx)?,
                Method::ClosedForm => closed_form::predicted_weight_distribution(ctx.params())?,
            };
            let text = render_weight_dist(&ctx, &dist, method.name(), config, csv)?;
            emit(&text, output.as_deref())?;
            Ok(0)
        }
        Command::Predict {
            params,
            what,
            csv,
            output,
        } => {
            let ctx = build_context(params.p, params.s, params.l)?;
            let mut config =
                RunConfig::new("predict", Some(params)).with_output(&output);
            config.what = Some(what.name().into());
            let text = match what {
                What::Values => {
                    let dist = closed_form::predicted_value_distribution(ctx.params())?;
                    render_value_dist(&ctx, &dist, "closed-form", config, csv)?
                }
                What::Weights => {
                    let dist = closed_form::predicted_weight_distribution(ctx.params())?;
                    render_weight_dist(&ctx, &dist, "closed-form", config, csv)?
                }
                What::Designs => {
                    let designs = closed_form::predicted_design_parameters(ctx.params())?;
                    render_designs(&ctx, &designs, config, csv)?
                }
            };
            emit(&text, output.as_deref())?;
            Ok(0)
        }
        Command::Compare {
            params,
            what,
            output,
        } => {
            let ctx = build_context(params.p, params.s, params.l)?;
            let mut config =
                RunConfig::new("compare", Some(params)).with_output(&output);
            config.what = Some(what.name().into());
            let doc = compare(&ctx, what, config)?;
            let code = if doc.is_match { 0 } else { 1 };
            emit(&to_json(&doc)?, output.as_deref())?;
            Ok(code)
        }
        Command::CheckAffine {
            params,
            trials,
            seed,
        } => {
            let ctx = build_context(params.p, params.s, params.l)?;
            let mut config = RunConfig::new("check-affine", Some(params));
            config.trials = Some(trials);
            config.seed = Some(seed);
            let report = code::defining_set_check(&ctx);
            let basis = code::verify_dimension(&ctx)?;
            let mut rng = SplitMix64::new(seed);
            let mut passes = 0usize;
            for _ in 0..trials {
                let cw = CodewordParams {
                    a: ctx.subfield_element(rng.below(ctx.subfield_order() as u64) as u32),
                    b: ctx.element(rng.below(ctx.q() as u64) as u32)?,
                    c: ctx.element(rng.below(ctx.q() as u64) as u32)?,
                    h: rng.below(ctx.p() as u64) as u8,
                };
                let word = code::codeword(&ctx, &cw)?;
                let g = ctx.alpha_pow(rng.below(ctx.n() as u64));
                let t = ctx.element(rng.below(ctx.q() as u64) as u32)?;
                let image = code::affine_image(&ctx, &word, g, t)?;
                if basis.contains(&image)? {
                    passes += 1;
                }
            }
            let doc = AffineJson {
                config,
                primitive_poly: ctx.primitive_poly().to_vec(),
                params: *ctx.params(),
                structural: report.closed,
                witness: report.witness,
                empirical_trials: trials,
                empirical_pass: passes,
            };
            emit(&to_json(&doc)?, None)?;
            Ok(if report.closed && passes == trials { 0 } else { 1 })
        }
        Command::ExtractDesign {
            params,
            weight,
            out,
        } => {
            let ctx = build_context(params.p, params.s, params.l)?;
            let mut config = RunConfig::new("extract-design", Some(params));
            config.weight = Some(weight);
            config.output = Some(out.display().to_string());
            let dist = code::weight_distribution_via_sums(&ctx)?;
            let family = design::extract_supports(&ctx, weight, &dist)?;
            let lambda = design::lambda_from_counts(
                family.v as u64,
                weight as u64,
                family.blocks.len() as u64,
            )?;
            design::write_design_file(&out, family.v, lambda, &family.blocks)?;
            let doc = ExtractJson {
                config,
                primitive_poly: ctx.primitive_poly().to_vec(),
                params: *ctx.params(),
                weight,
                v: family.v,
                k: weight,
                b: family.blocks.len() as u64,
                lambda,
                support_multiplicity: family.support_multiplicity,
                out: out.display().to_string(),
            };
            emit(&to_json(&doc)?, None)?;
            Ok(0)
        }
        Command::VerifyDesign {
            input,
            sampled,
            seed,
        } => {
            let mut config = RunConfig::new("verify-design", None);
            config.seed = Some(seed);
            config.trials = sampled;
            let (v, k, b, lambda_header, blocks) = design::read_design_file(&input)?;
            let (mode, lambda_verified, replication, sampled_pairs, ok) = match sampled {
                None => match design::verify_two_design(&blocks, v) {
                    Ok(check) => (
                        "full",
                        Some(check.lambda),
                        Some(check.r),
                        None,
                        check.lambda == lambda_header && check.b == b,
                    ),
                    Err(Error::Verification(msg)) => {
                        eprintln!("verification: {msg}");
                        ("full", None, None, None, false)
                    }
                    Err(e) => return Err(e),
                },
                Some(trials) => {
                    let report = design::verify_two_design_sampled(&blocks, v, trials, seed)?;
                    let all = report.counts.iter().all(|&c| c == lambda_header);
                    let pairs: Vec<SampledPairJson> = report
                        .pairs
                        .iter()
                        .zip(&report.counts)
                        .map(|(&pair, &count)| SampledPairJson { pair, count })
                        .collect();
                    ("sampled", None, None, Some(pairs), all)
                }
            };
            let doc = VerifyJson {
                config,
                input: input.display().to_string(),
                v,
                k,
                b,
                lambda_header,
                mode: mode.into(),
                lambda_verified,
                replication,
                sampled_pairs,
                is_match: ok,
            };
            emit(&to_json(&doc)?, None)?;
            Ok(if ok { 0 } else { 1 })
        }
    }
}

/// Resolve the enumeration budget, honoring the KDF_BUDGET override.
fn enumeration_budget() -> Result<u128> {
    match std::env::var("KDF_BUDGET") {
        Ok(v) => v.parse::<u128>().map_err(|_| {
            Error::InvalidArgument(format!("KDF_BUDGET must be an integer, got '{v}'"))
        }),
        Err(_) => Ok(code::DEFAULT_ENUM_BUDGET),
    }
}

fn render_value_dist(
    ctx: &FieldContext,
    dist: &SValueDistribution,
    method: &str,
    config: RunConfig,
    csv: bool,
) -> Result<String> {
    // Descending count, then lexicographic coefficients.
    let mut entries: Vec<(&CycInt, u64)> = dist.entries().iter().map(|(v, &c)| (v, c)).collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    if csv {
        let mut out = String::from("coeffs,pretty,count\n");
        for (value, count) in entries {
            let coeffs: Vec<String> = value.coeffs().iter().map(|c| c.to_string()).collect();
            out.push_str(&format!(
                "\"{}\",{},{}\n",
                coeffs.join(" "),
                value.pretty(),
                count
            ));
        }
        return Ok(out);
    }
    let doc = ValueDistJson {
        config,
        primitive_poly: ctx.primitive_poly().to_vec(),
        params: *ctx.params(),
        method: method.into(),
        total: dist.total(),
        entries: entries
            .into_iter()
            .map(|(value, count)| ValueEntryJson {
                value: value.clone(),
                pretty: value.pretty(),
                count,
            })
            .collect(),
    };
    to_json(&doc)
}

fn render_weight_dist(
    ctx: &FieldContext,
    dist: &WeightDistribution,
    method: &str,
    config: RunConfig,
    csv: bool,
) -> Result<String> {
    if csv {
        let mut out = String::from("weight,count\n");
        for (&w, &count) in dist.entries() {
            out.push_str(&format!("{w},{count}\n"));
        }
        return Ok(out);
    }
    let doc = WeightDistJson {
        config,
        primitive_poly: ctx.primitive_poly().to_vec(),
        params: *ctx.params(),
        method: method.into(),
        total: dist.total(),
        weights: dist
            .entries()
            .iter()
            .map(|(&w, &count)| WeightEntryJson { w, count })
            .collect(),
    };
    to_json(&doc)
}

fn render_designs(
    ctx: &FieldContext,
    designs: &[DesignParameters],
    config: RunConfig,
    csv: bool,
) -> Result<String> {
    if csv {
        let mut out = String::from("v,k,b,lambda\n");
        for d in designs {
            out.push_str(&format!("{},{},{},{}\n", d.v, d.k, d.b, d.lambda));
        }
        return Ok(out);
    }
    let doc = DesignsJson {
        config,
        primitive_poly: ctx.primitive_poly().to_vec(),
        params: *ctx.params(),
        method: "closed-form".into(),
        designs: designs.to_vec(),
    };
    to_json(&doc)
}

fn compare(ctx: &FieldContext, what: What, config: RunConfig) -> Result<CompareJson> {
    let mut diffs: Vec<DiffEntryJson> = Vec::new();
    let (computed_total, predicted_total) = match what {
        What::Values => {
            let computed = exp_sum::value_distribution(ctx)?;
            let predicted = closed_form::predicted_value_distribution(ctx.params())?;
            let keys: std::collections::BTreeSet<&CycInt> = computed
                .entries()
                .keys()
                .chain(predicted.entries().keys())
                .collect();
            for value in keys {
                let c = computed.count_of(value);
                let p = predicted.count_of(value);
                if c != p {
                    diffs.push(DiffEntryJson {
                        key: value.pretty(),
                        computed: c.to_string(),
                        predicted: p.to_string(),
                    });
                }
            }
            (computed.total(), predicted.total())
        }
        What::Weights => {
            let computed = code::weight_distribution_via_sums(ctx)?;
            let predicted = closed_form::predicted_weight_distribution(ctx.params())?;
            let keys: std::collections::BTreeSet<u32> = computed
                .entries()
                .keys()
                .chain(predicted.entries().keys())
                .copied()
                .collect();
            for w in keys {
                let c = computed.count_of(w);
                let p = predicted.count_of(w);
                if c != p {
                    diffs.push(DiffEntryJson {
                        key: w.to_string(),
                        computed: c.to_string(),
                        predicted: p.to_string(),
                    });
                }
            }
            (computed.total(), predicted.total())
        }
        What::Designs => {
            let dist = code::weight_distribution_via_sums(ctx)?;
            let params = ctx.params();
            let mut computed: Vec<DesignParameters> = Vec::new();
            for (&w, &count) in dist.entries() {
                if w == 0 || w == params.q {
                    continue;
                }
                let b = count / (params.p as u64 - 1);
                let lambda = design::lambda_from_counts(params.q as u64, w as u64, b)?;
                computed.push(DesignParameters {
                    v: params.q as u64,
                    k: w as u64,
                    b,
                    lambda,
                });
            }
            let predicted = closed_form::predicted_design_parameters(params)?;
            let all_k: std::collections::BTreeSet<u64> = computed
                .iter()
                .map(|d| d.k)
                .chain(predicted.iter().map(|d| d.k))
                .collect();
            for k in all_k {
                let c = computed.iter().find(|d| d.k == k);
                let p = predicted.iter().find(|d| d.k == k);
                let show = |d: Option<&DesignParameters>| match d {
                    Some(d) => format!("b={} lambda={}", d.b, d.lambda),
                    None => "absent".into(),
                };
                if show(c) != show(p) {
                    diffs.push(DiffEntryJson {
                        key: k.to_string(),
                        computed: show(c),
                        predicted: show(p),
                    });
                }
            }
            (computed.len() as u64, predicted.len() as u64)
        }
    };
    Ok(CompareJson {
        primitive_poly: ctx.primitive_poly().to_vec(),
        params: *ctx.params(),
        what: config.what.clone().unwrap_or_default(),
        is_match: diffs.is_empty(),
        computed_total,
        predicted_total,
        diffs,
        config,
    })
}

fn to_json<T: Serialize>(doc: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(doc)?;
    text.push('\n');
    Ok(text)
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
