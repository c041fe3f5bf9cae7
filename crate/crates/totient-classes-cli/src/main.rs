//! Command-line surface over the totient-classes library.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure (a sieve
//! contradiction or a violated lemma invariant).

mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use totient_classes::classifier::{
    lemma1_lift, witness_prime, Classifier, ClassVerdict, FactoredModulus, ResidueClass,
    ScanFilter, Verdict, Witness,
};
use totient_classes::constructions::{self, Theorem2Instance, DEFAULT_LIST_CAP, DEFAULT_THETA};
use totient_classes::goodness::{self, DEFAULT_IE_BRUTE_CAP};
use totient_classes::modmath::{self, mod_pow};
use totient_classes::oracle::{self, TotientSieve, DEFAULT_INVERSE_PHI_CAP, DEFAULT_SIEVE_LIMIT};
use totient_classes::valueset::{collision_count, TableStore, DEFAULT_ENUMERATION_CAP};

use output::{Format, Printer, Record, Val};

#[derive(Parser)]
#[command(name = "totient-classes", version, about = "Classify residue classes by the totients they contain")]
struct Cli {
    /// Output format for records on stdout
    #[arg(long, global = true, value_enum, default_value_t = Format::Text, env = "TOTIENT_CLASSES_FORMAT")]
    format: Format,

    /// Shorthand for --format json
    #[arg(long, global = true)]
    json: bool,

    /// Totient sieve limit for verification commands
    #[arg(long, global = true, default_value_t = DEFAULT_SIEVE_LIMIT, env = "TOTIENT_CLASSES_SIEVE_LIMIT")]
    sieve_limit: u64,

    /// Cap on the number of residue classes a scan may enumerate
    #[arg(long, global = true, default_value_t = 1_000_000, env = "TOTIENT_CLASSES_CLASS_SCAN_CAP")]
    class_scan_cap: u64,

    /// Cap on directly enumerated prime powers
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP, env = "TOTIENT_CLASSES_ENUMERATION_CAP")]
    enumeration_cap: u64,

    /// Worker threads for scans (0 = available parallelism)
    #[arg(long, global = true, default_value_t = 0, env = "TOTIENT_CLASSES_WORKERS")]
    workers: usize,

    /// Directory for the on-disk value-set table cache
    #[arg(long, global = true, env = "TOTIENT_CLASSES_CACHE")]
    cache: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FilterArg {
    All,
    TwoModFour,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a single residue class a (mod M)
    Classify {
        /// Residue a, decimal (arbitrary precision)
        #[arg(long)]
        residue: String,
        /// Modulus as a plain decimal (must fit in 64 bits)
        #[arg(long)]
        modulus: Option<u64>,
        /// Modulus in factored form, e.g. "2^2 * 3*7*13"
        #[arg(long)]
        factored: Option<String>,
        /// Also search for a witness prime in the arithmetic progression
        #[arg(long)]
        witness_prime: bool,
        /// Candidate cap for the witness-prime search
        #[arg(long, default_value_t = 100_000_000)]
        search_bound: u64,
    },
    /// Classify every class of a modulus
    Scan {
        #[arg(long)]
        modulus: Option<u64>,
        #[arg(long)]
        factored: Option<String>,
        #[arg(long, value_enum, default_value_t = FilterArg::All)]
        filter: FilterArg,
    },
    /// Cross-validate classifier verdicts against the totient sieve
    SieveVerify {
        #[arg(long)]
        modulus: Option<u64>,
        #[arg(long)]
        factored: Option<String>,
        /// Sieve limit (defaults to --sieve-limit)
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Assemble a Theorem-2 instance and optionally verify its mechanism
    ConstructT2 {
        /// Target epsilon for the greedy prime lists
        #[arg(long)]
        epsilon: Option<f64>,
        /// Search bound for the r primes
        #[arg(long)]
        y: Option<u64>,
        /// Smoothness exponent in (0, 1/2)
        #[arg(long, default_value_t = DEFAULT_THETA)]
        theta: f64,
        /// Explicit p list (comma-separated) instead of the greedy choice
        #[arg(long, value_delimiter = ',')]
        p_primes: Vec<u64>,
        #[arg(long, value_delimiter = ',')]
        q_primes: Vec<u64>,
        #[arg(long, value_delimiter = ',')]
        r_primes: Vec<u64>,
        /// Exhaustively check the k-exclusion mechanism
        #[arg(long)]
        exclusion_check: bool,
        /// Measure the totient-free fraction of a ≡ 2 (mod 4) classes mod 4m
        #[arg(long)]
        measure_fraction: bool,
        /// Scan cap for the exclusion check
        #[arg(long, default_value_t = 100_000)]
        exclusion_cap: u64,
    },
    /// Scan odd moduli for goodness
    GoodScan {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// Count forbidden numbers in (x, 2x]
    ForbiddenScan {
        #[arg(long)]
        x: u64,
    },
    /// Run a lemma's property suite over configured ranges
    LemmaCheck {
        /// Which lemma: 1, 2, 4 or 8
        #[arg(value_parser = clap::value_parser!(u8))]
        lemma: u8,
        /// Max power-of-two exponent (lemma 1)
        #[arg(long, default_value_t = 8)]
        max_s: u64,
        /// Max exponent k (lemma 1)
        #[arg(long, default_value_t = 12)]
        max_k: u64,
        /// Max prime (lemma 4 default 199, lemma 8 default 61)
        #[arg(long)]
        max_prime: Option<u64>,
        /// Primes for the lemma 2 suite
        #[arg(long, value_delimiter = ',', default_values_t = vec![3u64, 7, 11, 19])]
        primes: Vec<u64>,
    },
    /// List a ≡ 2 (mod 4) that are nontotients or have preimages {p, 2p}
    QuestionScan {
        #[arg(long)]
        limit: u64,
        #[arg(long, default_value_t = DEFAULT_INVERSE_PHI_CAP)]
        cap: u64,
    },
    /// Complete preimage set of a value under Euler's function
    InversePhi {
        #[arg(long)]
        value: u64,
        #[arg(long, default_value_t = DEFAULT_INVERSE_PHI_CAP)]
        cap: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own exit code conventions differ; pin usage errors to 1
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(clean) => {
            if clean {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn parse_modulus(modulus: Option<u64>, factored: Option<String>) -> anyhow::Result<FactoredModulus> {
    match (modulus, factored) {
        (Some(m), None) => {
            if m < 2 {
                bail!("modulus must be at least 2");
            }
            Ok(FactoredModulus::from_u64(m)?)
        }
        (None, Some(s)) => {
            let m: FactoredModulus = s.parse()?;
            if m.value() < &BigUint::from(2u32) {
                bail!("modulus must be at least 2");
            }
            Ok(m)
        }
        (Some(_), Some(_)) => bail!("give either --modulus or --factored, not both"),
        (None, None) => bail!(
            "a modulus is required: --modulus for decimal values up to 64 bits, \
             --factored \"2^s * p1*p2*...\" beyond that"
        ),
    }
}

// true = clean run (exit 0), false = verification failure (exit 2)
fn run(cli: Cli) -> anyhow::Result<bool> {
    let format = if cli.json { Format::Json } else { cli.format };
    if format == Format::Text {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).unwrap_or_default();
        eprintln!("# run-started {}", now.as_secs());
    }
    if cli.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global()
            .context("initializing the worker pool")?;
    }
    let store = Arc::new(match &cli.cache {
        Some(dir) => TableStore::with_cache_dir(cli.enumeration_cap, dir),
        None => TableStore::new(cli.enumeration_cap),
    });
    let classifier = Classifier::new(Arc::clone(&store));
    let mut printer = Printer::new(format);

    let clean = match cli.command {
        Command::Classify { residue, modulus, factored, witness_prime: want_p, search_bound } => {
            let modulus = parse_modulus(modulus, factored)?;
            let a: BigUint = residue
                .parse()
                .map_err(|_| anyhow!("residue must be a decimal integer"))?;
            let rc = ResidueClass::new(a, modulus);
            let classification = classifier.classify(&rc)?;
            let mut record = classification_record("classification", &rc, &classification);
            if want_p {
                if let Verdict::InfinitelyMany(Some(w)) = &classification.verdict {
                    match witness_prime(&rc, w, search_bound)? {
                        Some(found) => {
                            record = record
                                .field("witness_prime", Val::S(found.p.to_string()))
                                .field("witness_prime_candidates", Val::U(found.candidates_tried));
                        }
                        None => {
                            record = record.field("witness_prime", Val::S("not-found".into()));
                        }
                    }
                }
            }
            printer.emit(&record);
            true
        }

        Command::Scan { modulus, factored, filter } => {
            let modulus = parse_modulus(modulus, factored)?;
            let filter = match filter {
                FilterArg::All => ScanFilter::All,
                FilterArg::TwoModFour => ScanFilter::TwoModFour,
            };
            let outcome = classifier.scan_classes(&modulus, filter, cli.class_scan_cap)?;
            for v in &outcome.verdicts {
                printer.emit(&class_record(v));
            }
            let s = outcome.summary;
            printer.emit(
                &Record::new("summary")
                    .field("M", Val::S(modulus.value().to_string()))
                    .field("classes", Val::U(s.classes))
                    .field("infinitely_many", Val::U(s.infinitely_many))
                    .field("exactly_one", Val::U(s.exactly_one))
                    .field("totient_free", Val::U(s.totient_free))
                    .field("totient_free_fraction", Val::F(s.totient_free_fraction())),
            );
            true
        }

        Command::SieveVerify { modulus, factored, limit } => {
            let modulus = parse_modulus(modulus, factored)?;
            let limit = limit.unwrap_or(cli.sieve_limit);
            let sieve = TotientSieve::build(limit)?;
            let report = oracle::cross_validate(&classifier, &modulus, &sieve, cli.class_scan_cap)?;
            for c in &report.per_class {
                let evidence = match &c.evidence {
                    oracle::ClassEvidence::Confirmed => "confirmed".to_string(),
                    oracle::ClassEvidence::UnconfirmedBelowLimit => {
                        "unconfirmed-bound-too-small".to_string()
                    }
                    oracle::ClassEvidence::Contradiction(why) => format!("CONTRADICTION: {why}"),
                };
                printer.emit(
                    &Record::new("class-evidence")
                        .field("a", Val::U(c.a))
                        .field("verdict", Val::S(c.verdict_kind.to_string()))
                        .field("rationale", Val::S(c.rationale.as_str().to_string()))
                        .field("sieve_hits", Val::U(c.sieve_hits))
                        .field("evidence", Val::S(evidence)),
                );
            }
            printer.emit(
                &Record::new("summary")
                    .field("M", Val::S(report.modulus.clone()))
                    .field("sieve_limit", Val::U(report.sieve_limit))
                    .field("classes", Val::U(report.classes))
                    .field("confirmed", Val::U(report.confirmed))
                    .field("unconfirmed", Val::U(report.unconfirmed))
                    .field("contradictions", Val::U(report.contradictions.len() as u64)),
            );
            report.is_clean()
        }

        Command::ConstructT2 {
            epsilon,
            y,
            theta,
            p_primes,
            q_primes,
            r_primes,
            exclusion_check,
            measure_fraction,
            exclusion_cap,
        } => {
            let explicit = !p_primes.is_empty() || !q_primes.is_empty() || !r_primes.is_empty();
            let instance = if explicit {
                Theorem2Instance::from_parts(p_primes, q_primes, r_primes, y.unwrap_or(3), theta)?
            } else {
                let epsilon = epsilon.ok_or_else(|| {
                    anyhow!("give --epsilon and --y, or explicit --p-primes/--q-primes")
                })?;
                let y = y.ok_or_else(|| anyhow!("--y is required with --epsilon"))?;
                constructions::assemble(epsilon, y, theta, DEFAULT_LIST_CAP)?.0
            };
            let diag = instance.diagnostics();
            printer.emit(
                &Record::new("instance")
                    .field("p_list", Val::List(to_strings(&instance.p_list)))
                    .field("q_list", Val::List(to_strings(&instance.q_list)))
                    .field("r_list", Val::List(to_strings(&instance.r_list)))
                    .field("D", Val::U(instance.d))
                    .field("y", Val::U(instance.y))
                    .field("theta", Val::F(instance.theta))
                    .field("m", Val::S(instance.m.to_string()))
                    .field("n", Val::S(instance.n.to_string())),
            );
            printer.emit(
                &Record::new("diagnostics")
                    .field("r_count", Val::U(diag.r_count as u64))
                    .field("n_bound_log", Val::F(diag.n_bound_log))
                    .field("n_bound", Val::F(diag.n_bound))
                    .field("lemma5_expectation", Val::F(diag.lemma5_expectation))
                    .field("eq4_product_p", Val::F(diag.eq4_product_p))
                    .field("eq4_product_q", Val::F(diag.eq4_product_q)),
            );
            let mut clean = true;
            if exclusion_check {
                let report = constructions::exclusion_check(&instance, exclusion_cap)?;
                for v in &report.violations {
                    printer.emit(
                        &Record::new("exclusion-violation")
                            .field("a", Val::U(v.a))
                            .field("k", Val::U(v.k))
                            .field("x", Val::U(v.x))
                            .field("broken", Val::S(v.broken.clone())),
                    );
                }
                printer.emit(
                    &Record::new("exclusion-report")
                        .field("m", Val::U(report.m))
                        .field("condition5_classes", Val::U(report.condition5_classes))
                        .field("solvable_condition5", Val::U(report.solvable_condition5))
                        .field("solvable_fraction", Val::F(report.solvable_fraction))
                        .field("checked_solutions", Val::U(report.checked_solutions))
                        .field("violations", Val::U(report.violations.len() as u64)),
                );
                clean &= report.violations.is_empty();
            }
            if measure_fraction {
                let fr = constructions::measured_free_fraction(
                    &classifier,
                    &instance,
                    cli.class_scan_cap,
                )?;
                printer.emit(
                    &Record::new("free-fraction")
                        .field("M", Val::S(fr.modulus))
                        .field("classes", Val::U(fr.classes))
                        .field("totient_free", Val::U(fr.totient_free))
                        .field("fraction", Val::F(fr.fraction)),
                );
            }
            clean
        }

        Command::GoodScan { from, to } => {
            let report = goodness::good_scan(&classifier, from, to)?;
            for &(m, a) in &report.failing {
                printer.emit(
                    &Record::new("not-good")
                        .field("m", Val::U(m))
                        .field("failing_a", Val::U(a)),
                );
            }
            printer.emit(
                &Record::new("summary")
                    .field("from", Val::U(report.from))
                    .field("to", Val::U(report.to))
                    .field("odd_moduli", Val::U(report.odd_count))
                    .field("good", Val::U(report.good_count))
                    .field("good_fraction", Val::F(report.good_fraction)),
            );
            true
        }

        Command::ForbiddenScan { x } => {
            let report = goodness::forbidden_scan(x)?;
            for &m in &report.forbidden {
                printer.emit(&Record::new("forbidden").field("m", Val::U(m)));
            }
            printer.emit(
                &Record::new("summary")
                    .field("x", Val::U(report.x))
                    .field("range", Val::S(format!("({},{}]", report.x, 2 * report.x)))
                    .field("forbidden_count", Val::U(report.count))
                    .field("x_over_log5", Val::F(report.comparison)),
            );
            true
        }

        Command::LemmaCheck { lemma, max_s, max_k, max_prime, primes } => {
            let (cases, violations) = match lemma {
                1 => lemma1_suite(max_s as u32, max_k, &mut printer),
                2 => lemma2_suite(&primes, &mut printer),
                4 => lemma4_suite(max_prime.unwrap_or(199), &mut printer),
                8 => lemma8_suite(max_prime.unwrap_or(61), &mut printer)?,
                other => bail!("no property suite for lemma {other}; pick 1, 2, 4 or 8"),
            };
            printer.emit(
                &Record::new("summary")
                    .field("lemma", Val::U(lemma as u64))
                    .field("cases", Val::U(cases))
                    .field("violations", Val::U(violations)),
            );
            if violations == 0 && format == Format::Text {
                println!("all checks passed: 0 violations");
            }
            violations == 0
        }

        Command::QuestionScan { limit, cap } => {
            let entries = oracle::question_scan(limit, cap)?;
            for e in &entries {
                printer.emit(
                    &Record::new("candidate")
                        .field("a", Val::U(e.a))
                        .field(
                            "kind",
                            Val::S(
                                if e.preimages.is_empty() { "nontotient" } else { "prime-pair" }
                                    .to_string(),
                            ),
                        )
                        .field("preimages", Val::List(to_strings(&e.preimages))),
                );
            }
            printer.emit(
                &Record::new("summary")
                    .field("limit", Val::U(limit))
                    .field("candidates", Val::U(entries.len() as u64)),
            );
            true
        }

        Command::InversePhi { value, cap } => {
            let pre = oracle::inverse_phi(value, cap)?;
            printer.emit(
                &Record::new("preimages")
                    .field("value", Val::U(value))
                    .field("count", Val::U(pre.len() as u64))
                    .field("preimages", Val::List(to_strings(&pre))),
            );
            true
        }
    };

    store.flush()?;
    Ok(clean)
}

fn to_strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn classification_record(
    kind: &'static str,
    rc: &ResidueClass,
    c: &totient_classes::classifier::Classification,
) -> Record {
    let record = Record::new(kind)
        .field("a", Val::S(rc.residue().to_string()))
        .field("M", Val::S(rc.modulus().value().to_string()))
        .field("verdict", Val::S(c.verdict.kind().to_string()))
        .field("rationale", Val::S(c.rationale.as_str().to_string()));
    append_verdict_details(record, &c.verdict)
}

fn class_record(v: &ClassVerdict) -> Record {
    let record = Record::new("class")
        .field("a", Val::U(v.a))
        .field("verdict", Val::S(v.classification.verdict.kind().to_string()))
        .field("rationale", Val::S(v.classification.rationale.as_str().to_string()));
    append_verdict_details(record, &v.classification.verdict)
}

fn append_verdict_details(record: Record, verdict: &Verdict) -> Record {
    match verdict {
        Verdict::InfinitelyMany(Some(Witness { x, k, y })) => record
            .field("witness_x", Val::S(x.to_string()))
            .field("witness_k", Val::U(*k))
            .field("witness_y", Val::U(*y)),
        Verdict::ExactlyOne(v) => record.field("totient", Val::S(v.to_string())),
        _ => record,
    }
}

// Lemma 1: every a ≡ 2 (mod 4) lifts to y ≡ 3 (mod 4) mod 2^s.
fn lemma1_suite(max_s: u32, max_k: u64, printer: &mut Printer) -> (u64, u64) {
    let mut cases = 0;
    let mut violations = 0;
    for s in 1..=max_s {
        let q = 1u64 << s;
        let residues: Vec<u64> = if s >= 2 { (2..q).step_by(4).collect() } else { vec![0] };
        for a in residues {
            for k in 1..=max_k {
                cases += 1;
                let ok = match lemma1_lift(a, k, s) {
                    Ok(y) => {
                        y % 4 == 3 && (mod_pow(y, k, q) + q - mod_pow(y, k - 1, q)) % q == a % q
                    }
                    Err(_) => false,
                };
                if !ok {
                    violations += 1;
                    printer.emit(
                        &Record::new("violation")
                            .field("s", Val::U(s as u64))
                            .field("a", Val::U(a))
                            .field("k", Val::U(k)),
                    );
                }
            }
        }
    }
    (cases, violations)
}

// Lemma 2: the Hensel construction hits p^k - p^(k-1) mod p^l, cross-checked
// against an exhaustive unit scan for small prime powers.
fn lemma2_suite(primes: &[u64], printer: &mut Printer) -> (u64, u64) {
    let mut cases = 0;
    let mut violations = 0;
    for &p in primes {
        for k in 2..=5u32 {
            for l in 1..=6u32 {
                cases += 1;
                if !check_lemma2_case(p, k, l) {
                    violations += 1;
                    printer.emit(
                        &Record::new("violation")
                            .field("p", Val::U(p))
                            .field("k", Val::U(k as u64))
                            .field("l", Val::U(l as u64)),
                    );
                }
            }
        }
    }
    (cases, violations)
}

fn check_lemma2_case(p: u64, k: u32, l: u32) -> bool {
    let Some(q) = p.checked_pow(l) else { return false };
    let Ok(x) = modmath::hensel_lemma2(p, k, l) else { return false };
    let rhs = (mod_pow(p, k as u64, q) + q - mod_pow(p, (k - 1) as u64, q)) % q;
    let value = (mod_pow(x, k as u64, q) + q - mod_pow(x, (k - 1) as u64, q)) % q;
    if value != rhs || x % p == 0 {
        return false;
    }
    if q <= 10_000 {
        // the unit scan must agree that x is a solution
        let scan: Vec<u64> = (1..q)
            .filter(|u| u % p != 0)
            .filter(|&u| (mod_pow(u, k as u64, q) + q - mod_pow(u, (k - 1) as u64, q)) % q == rhs)
            .collect();
        if !scan.contains(&x) {
            return false;
        }
    }
    true
}

// Lemma 4: brute collision count equals r - gcd(r-1,k) - gcd(r-1,k-1) and the
// distinct-value count stays below r - sqrt(r/2).
fn lemma4_suite(max_prime: u64, printer: &mut Printer) -> (u64, u64) {
    let mut cases = 0;
    let mut violations = 0;
    for r in modmath::primes_up_to(max_prime) {
        if r < 5 {
            continue;
        }
        for k in 2..=r - 2 {
            cases += 1;
            let c = collision_count(r, k).expect("valid range");
            let formula = r - modmath::gcd(r - 1, k) - modmath::gcd(r - 1, k - 1);
            let bound = r as f64 - (r as f64 / 2.0).sqrt();
            if c.ordered_pairs != formula || c.distinct as f64 >= bound {
                violations += 1;
                printer.emit(
                    &Record::new("violation")
                        .field("r", Val::U(r))
                        .field("k", Val::U(k))
                        .field("brute", Val::U(c.ordered_pairs))
                        .field("formula", Val::U(formula))
                        .field("distinct", Val::U(c.distinct)),
                );
            }
        }
    }
    (cases, violations)
}

// Lemma 8: the Möbius sum over unit point counts equals the brute
// primitive-root count, and affine counts satisfy the curve bound.
fn lemma8_suite(max_prime: u64, printer: &mut Printer) -> anyhow::Result<(u64, u64)> {
    let mut cases = 0;
    let mut violations = 0;
    for p in modmath::primes_up_to(max_prime) {
        if p < 3 {
            continue;
        }
        for cap_l in 1..=3u64 {
            for l in 1..=cap_l {
                for a in 1..p {
                    cases += 1;
                    let r = goodness::lemma8_ie_check(p, a, l, cap_l, DEFAULT_IE_BRUTE_CAP)?;
                    if !r.identity_holds() || !r.bounds_hold() {
                        violations += 1;
                        printer.emit(
                            &Record::new("violation")
                                .field("p", Val::U(p))
                                .field("a", Val::U(a))
                                .field("l", Val::U(l))
                                .field("L", Val::U(cap_l))
                                .field("brute", Val::U(r.brute_count))
                                .field("ie_sum", Val::U(r.ie_sum)),
                        );
                    }
                }
            }
        }
    }
    Ok((cases, violations))
}
