//! `latdsp`: command-line front end for lattice signal processing.
//!
//! Exit codes: 0 on success, 1 for usage and parse errors, 2 for domain
//! errors (structure checks, mismatched inputs, failed cross-checks).

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lattice_dsp::concepts::{attach_signal_weighted, build_concept_lattice};
use lattice_dsp::dot::{to_dot, DotOptions};
use lattice_dsp::fast::FastPlan;
use lattice_dsp::filtering::{
    convolve, filter_from_response, freq_response, frequency_order, lowpass_filter, shift, total_variation_with,
    trivial_filter, Norm,
};
use lattice_dsp::io::{self, CsvScalar, EdgePolicy};
use lattice_dsp::multiset::{build_multiset_lattice, synth_bidder, BidderType, MultisetSpec};
use lattice_dsp::sampling::{fourier_support, make_plan, support_of_spectrum};
use lattice_dsp::transforms::Dlt;
use lattice_dsp::wiener::{sigma_for_snr, EnergyShift, WienerModel};
use lattice_dsp::{ElementSet, Filter, FrequencyResponse, Lattice, Signal, Spectrum, Structure, Variant, Verdict};
use num_complex::Complex64;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Lib(#[from] lattice_dsp::Error),
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use lattice_dsp::Error as E;
        match self {
            CliError::Usage(_) | CliError::Read { .. } | CliError::Io(_) => 1,
            CliError::Lib(E::Parse { .. } | E::Io(_) | E::Json(_) | E::Csv(_)) => 1,
            CliError::Domain(_) | CliError::Lib(_) => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "latdsp",
    version,
    about = "Signal processing on finite meet/join semilattices"
)]
struct Cli {
    /// Significant digits for numeric output.
    #[arg(long, global = true, default_value_t = 17)]
    precision: usize,
    /// Write output to this file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Reduce lattice edges to covers instead of rejecting implied edges.
    #[arg(long, global = true)]
    reduce: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Meet,
    Join,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Meet => Variant::Meet,
            VariantArg::Join => Variant::Join,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RequireArg {
    Meet,
    Join,
    Lattice,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    L1,
    L2,
}

#[derive(Args)]
struct Spectral {
    /// Lattice file (text or JSON).
    lattice: PathBuf,
    #[arg(long, value_enum)]
    variant: VariantArg,
}

#[derive(Args)]
struct TransformFlags {
    /// Use the generator-pass transform.
    #[arg(long)]
    fast: bool,
    /// Compute both transforms and fail if they disagree.
    #[arg(long)]
    check: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the order structure and report its basic facts.
    Validate {
        lattice: PathBuf,
        /// Structure that must hold; by default either semilattice suffices.
        #[arg(long, value_enum)]
        require: Option<RequireArg>,
    },
    /// Fourier transform of a signal.
    Dlt {
        #[command(flatten)]
        spectral: Spectral,
        signal: PathBuf,
        #[command(flatten)]
        flags: TransformFlags,
    },
    /// Inverse Fourier transform of a spectrum.
    Idlt {
        #[command(flatten)]
        spectral: Spectral,
        spectrum: PathBuf,
        #[command(flatten)]
        flags: TransformFlags,
    },
    /// Frequency response of a filter.
    Freqresp {
        #[command(flatten)]
        spectral: Spectral,
        filter: PathBuf,
    },
    /// Filter coefficients from a response, or a built-in filter.
    Filter {
        #[command(flatten)]
        spectral: Spectral,
        #[arg(long, conflicts_with_all = ["lowpass", "trivial"], required_unless_present_any = ["lowpass", "trivial"])]
        response: Option<PathBuf>,
        #[arg(long, conflicts_with = "trivial")]
        lowpass: bool,
        #[arg(long)]
        trivial: bool,
    },
    /// Shift a signal by an element.
    Shift {
        #[command(flatten)]
        spectral: Spectral,
        signal: PathBuf,
        #[arg(long)]
        by: String,
    },
    /// Apply a filter to a signal.
    Convolve {
        #[command(flatten)]
        spectral: Spectral,
        filter: PathBuf,
        signal: PathBuf,
    },
    /// Total variation of a signal, or the frequency ordering.
    Tv {
        #[command(flatten)]
        spectral: Spectral,
        /// Signal to measure; omit to list all frequencies by variation.
        signal: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "l2")]
        norm: NormArg,
    },
    /// Fourier support of a signal, one id per line.
    Support {
        #[command(flatten)]
        spectral: Spectral,
        input: PathBuf,
        /// The input is already a spectrum.
        #[arg(long)]
        spectrum: bool,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Values of a signal on a support.
    Sample {
        #[command(flatten)]
        spectral: Spectral,
        signal: PathBuf,
        #[arg(long)]
        support: PathBuf,
    },
    /// Rebuild a signal from its samples on a support.
    Reconstruct {
        #[command(flatten)]
        spectral: Spectral,
        samples: PathBuf,
        /// Support file the samples were taken on.
        #[arg(long)]
        plan: PathBuf,
    },
    /// Concept lattice of a formal context.
    Fcl {
        context: PathBuf,
        /// Object labels; emits the mean-label signal.
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Where to write the signal (requires --labels).
        #[arg(long, requires = "labels")]
        signal_out: Option<PathBuf>,
        /// Merge objects with identical rows.
        #[arg(long)]
        clarify: bool,
    },
    /// Multiset (product of chains) lattices.
    #[command(subcommand)]
    Multiset(MultisetCommand),
    /// Wiener filtering with the energy-preserving shift.
    #[command(subcommand)]
    Wiener(WienerCommand),
    /// White complex noise, optionally added to a signal.
    Noise {
        #[command(flatten)]
        spectral: Spectral,
        #[arg(long)]
        seed: u64,
        #[arg(
            long,
            required_unless_present = "snr",
            conflicts_with = "snr",
            allow_negative_numbers = true
        )]
        sigma: Option<f64>,
        /// Target frequency-domain SNR in dB (requires --signal).
        #[arg(long, requires = "signal", allow_negative_numbers = true)]
        snr: Option<f64>,
        #[arg(long)]
        signal: Option<PathBuf>,
    },
    /// Hasse diagram in Graphviz DOT.
    ExportDot {
        lattice: PathBuf,
        /// CSV whose value column is shown in node labels verbatim.
        #[arg(long)]
        values: Option<PathBuf>,
        /// Point edges from upper to lower covers.
        #[arg(long)]
        dual: bool,
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Subcommand)]
enum MultisetCommand {
    /// Write the lattice of all `0 ≤ y ≤ m`.
    Gen {
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<usize>,
    },
    /// Synthetic Fourier-sparse bidder values.
    Bidder {
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<usize>,
        #[arg(long = "type")]
        kind: BidderType,
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum WienerCommand {
    /// Fit polynomial coefficients on a (noisy, clean) reference pair.
    Fit {
        #[command(flatten)]
        spectral: Spectral,
        #[arg(long)]
        order: usize,
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        noisy: PathBuf,
    },
    /// Apply a fitted model to a signal.
    Apply {
        #[command(flatten)]
        spectral: Spectral,
        #[arg(long)]
        model: PathBuf,
        signal: PathBuf,
    },
}

struct Ctx {
    precision: usize,
    output: Option<PathBuf>,
    policy: EdgePolicy,
}

impl Ctx {
    fn read(&self, path: &Path) -> Result<String> {
        fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_owned(),
            source,
        })
    }

    fn lattice(&self, path: &Path) -> Result<Lattice> {
        Ok(io::parse_lattice(&self.read(path)?, self.policy)?)
    }

    fn values<T: CsvScalar + Clone>(&self, path: &Path, lattice: &Lattice) -> Result<Vec<T>> {
        Ok(io::parse_values(&self.read(path)?, lattice)?)
    }

    fn ids(&self, path: &Path, lattice: &Lattice) -> Result<ElementSet> {
        Ok(ElementSet::from_ids(lattice, &io::parse_id_list(&self.read(path)?))?)
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.output {
            Some(path) => fs::write(path, text)?,
            None => std::io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn emit_values<T: CsvScalar>(&self, lattice: &Lattice, values: &[T]) -> Result<()> {
        self.emit(&io::values_to_csv(lattice, values, self.precision))
    }
}

fn close(a: &[f64], b: &[f64]) -> bool {
    let scale = a.iter().chain(b).fold(1.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-9 * scale)
}

fn transform(ctx: &Ctx, sp: &Spectral, input: &Path, flags: &TransformFlags, inverse: bool) -> Result<()> {
    let l = ctx.lattice(&sp.lattice)?;
    let v = sp.variant.into();
    let values = ctx.values::<f64>(input, &l)?;
    let naive = || -> Result<Vec<f64>> {
        let t = Dlt::new(&l, v)?;
        Ok(if inverse {
            t.inverse(&Spectrum::new(&l, values.clone())?)?.into_values()
        } else {
            t.forward(&Signal::new(&l, values.clone())?)?.into_values()
        })
    };
    let fast = || -> Result<Vec<f64>> {
        let plan = FastPlan::new(&l, v)?;
        Ok(if inverse {
            plan.idlt(&Spectrum::new(&l, values.clone())?)?.into_values()
        } else {
            plan.dlt(&Signal::new(&l, values.clone())?)?.into_values()
        })
    };
    let out = if flags.check {
        let (a, b) = (naive()?, fast()?);
        if !close(&a, &b) {
            return Err(CliError::Domain("fast and direct transforms disagree".into()));
        }
        if flags.fast {
            b
        } else {
            a
        }
    } else if flags.fast {
        fast()?
    } else {
        naive()?
    };
    ctx.emit_values(&l, &out)
}

fn validate(ctx: &Ctx, path: &Path, require: Option<RequireArg>) -> Result<()> {
    let l = ctx.lattice(path)?;
    let kind = l.kind();
    let names = |xs: &[usize]| -> String {
        if xs.is_empty() {
            "(none)".into()
        } else {
            xs.iter().map(|&x| l.id(x)).collect::<Vec<_>>().join(",")
        }
    };
    let mut report = format!(
        "{}; {} element{}\n",
        kind.structure(),
        l.len(),
        if l.len() == 1 { "" } else { "s" }
    );
    for v in [Variant::Meet, Variant::Join] {
        if kind.has(v) {
            report += &format!("{v} generators: {}\n", names(l.generators(v)));
        }
    }
    report += &format!("maximal: {}\n", names(&l.maximal_elements()));
    report += &format!("minimal: {}\n", names(&l.minimal_elements()));
    let failed: Option<Variant> = match require {
        None if kind.meet || kind.join => None,
        None | Some(RequireArg::Meet) if !kind.meet => Some(Variant::Meet),
        Some(RequireArg::Join) if !kind.join => Some(Variant::Join),
        Some(RequireArg::Lattice) if !kind.meet => Some(Variant::Meet),
        Some(RequireArg::Lattice) if !kind.join => Some(Variant::Join),
        _ => None,
    };
    if let Some(v) = failed {
        let verdict = match v {
            Variant::Meet => l.check_meet_semilattice(),
            Variant::Join => l.check_join_semilattice(),
        };
        if let Verdict::Witness(a, b) = verdict {
            report += &format!("witness: ({},{}) have no {v}\n", l.id(a), l.id(b));
        }
        ctx.emit(&report)?;
        let wanted = match require {
            Some(RequireArg::Lattice) => Structure::Lattice,
            _ => Structure::for_variant(v),
        };
        return Err(CliError::Domain(format!("not a {wanted}")));
    }
    ctx.emit(&report)
}

fn frequency_table(ctx: &Ctx, l: &Lattice, v: Variant) -> Result<()> {
    let order = frequency_order(l, v)?;
    let rows: Vec<(String, String)> = order
        .entries
        .iter()
        .map(|e| (l.id(e.element).to_string(), io::fmt_g(e.tv.stv, ctx.precision)))
        .collect();
    ctx.emit(&csv_rows("frequency", "stv", rows))
}

fn csv_rows(a: &str, b: &str, rows: Vec<(String, String)>) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record([a, b]).expect("in-memory write");
    for (x, y) in rows {
        w.write_record([x, y]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn run(cli: Cli) -> Result<()> {
    let ctx = Ctx {
        precision: cli.precision,
        output: cli.output,
        policy: if cli.reduce {
            EdgePolicy::Reduce
        } else {
            EdgePolicy::Strict
        },
    };
    match cli.command {
        Command::Validate { lattice, require } => validate(&ctx, &lattice, require),
        Command::Dlt {
            spectral,
            signal,
            flags,
        } => transform(&ctx, &spectral, &signal, &flags, false),
        Command::Idlt {
            spectral,
            spectrum,
            flags,
        } => transform(&ctx, &spectral, &spectrum, &flags, true),
        Command::Freqresp { spectral, filter } => {
            let l = ctx.lattice(&spectral.lattice)?;
            let h = Filter::new(&l, ctx.values::<f64>(&filter, &l)?)?;
            let r = freq_response(&l, &h, spectral.variant.into())?;
            ctx.emit_values(&l, r.values())
        }
        Command::Filter {
            spectral,
            response,
            lowpass,
            trivial,
        } => {
            let l = ctx.lattice(&spectral.lattice)?;
            let v = spectral.variant.into();
            let h = match response {
                Some(path) => {
                    let r = FrequencyResponse::new(&l, ctx.values::<f64>(&path, &l)?)?;
                    filter_from_response(&l, &r, v)?
                }
                None if lowpass => lowpass_filter(&l, v)?,
                None => {
                    debug_assert!(trivial);
                    trivial_filter(&l, v)?
                }
            };
            ctx.emit_values(&l, h.values())
        }
        Command::Shift { spectral, signal, by } => {
            let l = ctx.lattice(&spectral.lattice)?;
            let s = Signal::new(&l, ctx.values::<f64>(&signal, &l)?)?;
            let out = shift(&l, &s, l.index_of(&by)?, spectral.variant.into())?;
            ctx.emit_values(&l, out.values())
        }
        Command::Convolve {
            spectral,
            filter,
            signal,
        } => {
            let l = ctx.lattice(&spectral.lattice)?;
            let h = Filter::new(&l, ctx.values::<f64>(&filter, &l)?)?;
            let s = Signal::new(&l, ctx.values::<f64>(&signal, &l)?)?;
            let out = convolve(&l, &h, &s, spectral.variant.into())?;
            ctx.emit_values(&l, out.values())
        }
        Command::Tv { spectral, signal, norm } => {
            let l = ctx.lattice(&spectral.lattice)?;
            let v = spectral.variant.into();
            let Some(signal) = signal else {
                return frequency_table(&ctx, &l, v);
            };
            let s = Signal::new(&l, ctx.values::<f64>(&signal, &l)?)?;
            let norm = match norm {
                NormArg::L1 => Norm::L1,
                NormArg::L2 => Norm::L2,
            };
            let tv = total_variation_with(&l, &s, v, norm)?;
            let mut rows: Vec<(String, String)> = tv
                .generators
                .iter()
                .zip(&tv.components)
                .map(|(&g, &c)| (l.id(g).to_string(), io::fmt_g(c, ctx.precision)))
                .collect();
            rows.push(("stv".into(), io::fmt_g(tv.stv, ctx.precision)));
            ctx.emit(&csv_rows("generator", "variation", rows))
        }
        Command::Support {
            spectral,
            input,
            spectrum,
            tol,
        } => {
            let l = ctx.lattice(&spectral.lattice)?;
            let values = ctx.values::<f64>(&input, &l)?;
            let supp = if spectrum {
                support_of_spectrum(&l, &Spectrum::new(&l, values)?, tol)?
            } else {
                fourier_support(&l, &Signal::new(&l, values)?, spectral.variant.into(), tol)?
            };
            ctx.emit(&io::id_list_to_text(&supp.ids(&l)))
        }
        Command::Sample {
            spectral,
            signal,
            support,
        } => {
            let l = ctx.lattice(&spectral.lattice)?;
            let s = Signal::new(&l, ctx.values::<f64>(&signal, &l)?)?;
            let plan = make_plan(&l, &ctx.ids(&support, &l)?, spectral.variant.into())?;
            let rows = plan
                .support_ids()
                .into_iter()
                .zip(plan.sample(&s)?)
                .map(|(id, v)| (id.to_string(), io::fmt_g(v, ctx.precision)))
                .collect();
            ctx.emit(&csv_rows("element", "value", rows))
        }
        Command::Reconstruct {
            spectral,
            samples,
            plan,
        } => {
            let l = ctx.lattice(&spectral.lattice)?;
            let plan = make_plan(&l, &ctx.ids(&plan, &l)?, spectral.variant.into())?;
            let pairs = io::parse_pairs(&ctx.read(&samples)?)?;
            let mut values = vec![None; plan.len()];
            for (line, id, value) in pairs {
                let x = l.index_of(&id)?;
                let slot =
                    plan.support().iter().position(|&b| b == x).ok_or_else(|| {
                        CliError::Domain(format!("line {line}: `{id}` is not in the sampling support"))
                    })?;
                let v = <f64 as CsvScalar>::parse(&value).map_err(|msg| lattice_dsp::Error::Parse { line, msg })?;
                if values[slot].replace(v).is_some() {
                    return Err(CliError::Usage(format!("line {line}: duplicate sample for `{id}`")));
                }
            }
            let values = plan
                .support()
                .iter()
                .zip(values)
                .map(|(&b, v)| v.ok_or_else(|| CliError::Domain(format!("no sample for `{}`", l.id(b)))))
                .collect::<Result<Vec<f64>>>()?;
            ctx.emit_values(&l, plan.reconstruct(&values)?.values())
        }
        Command::Fcl {
            context,
            labels,
            signal_out,
            clarify,
        } => {
            let original = io::parse_context(&ctx.read(&context)?)?;
            let (cx, groups) = if clarify {
                original.clarify()
            } else {
                let singletons = (0..original.objects().len()).map(|o| vec![o]).collect();
                (original.clone(), singletons)
            };
            let cl = build_concept_lattice(&cx);
            let l = cl.lattice();
            let notes: Vec<String> = (0..l.len()).map(|i| cl.describe(i)).collect();
            ctx.emit(&io::lattice_to_text(l, Some(&notes)))?;
            eprintln!(
                "{} objects, {} attributes, {} concepts, {} covers",
                cx.objects().len(),
                cx.attributes().len(),
                l.len(),
                l.covers().len()
            );
            if let Some(path) = labels {
                let labels = io::parse_labels(&ctx.read(&path)?)?;
                let label_of = |name: &str| {
                    labels
                        .iter()
                        .find(|(k, _)| k == name)
                        .map(|(_, v)| *v)
                        .ok_or_else(|| lattice_dsp::Error::MissingLabel(name.to_string()))
                };
                // Each clarified object carries its group's mean, weighted by group size.
                let mut values = Vec::with_capacity(groups.len());
                for g in &groups {
                    let mut sum = 0.0;
                    for &o in g {
                        sum += label_of(&original.objects()[o])?;
                    }
                    values.push(sum / g.len() as f64);
                }
                let weights: Vec<f64> = groups.iter().map(|g| g.len() as f64).collect();
                let attached = attach_signal_weighted(&cl, &values, &weights)?;
                let csv = io::values_to_csv(l, attached.signal.values(), ctx.precision);
                match signal_out {
                    Some(out) => fs::write(out, csv)?,
                    None => eprint!("{csv}"),
                }
            }
            Ok(())
        }
        Command::Multiset(MultisetCommand::Gen { m }) => {
            let spec = MultisetSpec::new(m)?;
            ctx.emit(&io::lattice_to_text(&build_multiset_lattice(&spec)?, None))
        }
        Command::Multiset(MultisetCommand::Bidder { m, kind, variant, seed }) => {
            let spec = MultisetSpec::new(m)?;
            let l = build_multiset_lattice(&spec)?;
            let b = synth_bidder(&spec, kind, variant.into(), seed)?;
            ctx.emit_values(&l, b.values.values())
        }
        Command::Wiener(WienerCommand::Fit {
            spectral,
            order,
            reference,
            noisy,
        }) => {
            let l = ctx.lattice(&spectral.lattice)?;
            let e = EnergyShift::new(&l, spectral.variant.into())?;
            let s_ref = Signal::new(&l, ctx.values::<Complex64>(&reference, &l)?)?;
            let y = Signal::new(&l, ctx.values::<Complex64>(&noisy, &l)?)?;
            let fit = e.fit(&y, &s_ref, order)?;
            eprintln!("training residual {}", io::fmt_g(fit.residual, ctx.precision));
            ctx.emit(&(fit.model.to_json() + "\n"))
        }
        Command::Wiener(WienerCommand::Apply {
            spectral,
            model,
            signal,
        }) => {
            let l = ctx.lattice(&spectral.lattice)?;
            let e = EnergyShift::new(&l, spectral.variant.into())?;
            let model = WienerModel::from_json(&ctx.read(&model)?)?;
            let y = Signal::new(&l, ctx.values::<Complex64>(&signal, &l)?)?;
            ctx.emit_values(&l, e.apply_model(&model, &y)?.values())
        }
        Command::Noise {
            spectral,
            seed,
            sigma,
            snr,
            signal,
        } => {
            let l = ctx.lattice(&spectral.lattice)?;
            let e = EnergyShift::new(&l, spectral.variant.into())?;
            let s = match &signal {
                Some(path) => Signal::new(&l, ctx.values::<Complex64>(path, &l)?)?,
                None => Signal::zeros(&l),
            };
            let sigma = match (sigma, snr) {
                (Some(sigma), _) => sigma,
                (None, Some(db)) => sigma_for_snr(&e.dlt(&s)?, db),
                (None, None) => unreachable!("clap requires one of --sigma, --snr"),
            };
            let noise = e.white_noise(sigma, seed)?;
            let out: Vec<Complex64> = s.iter().zip(noise.iter()).map(|(a, b)| a + b).collect();
            ctx.emit_values(&l, &out)
        }
        Command::ExportDot {
            lattice,
            values,
            dual,
            name,
        } => {
            let l = ctx.lattice(&lattice)?;
            let labels = match values {
                Some(path) => Some(raw_values(&ctx, &path, &l)?),
                None => None,
            };
            let opts = DotOptions {
                values: labels.as_deref(),
                dual,
                name: name.as_deref(),
            };
            ctx.emit(&to_dot(&l, &opts)?)
        }
    }
}

/// Value column of an `element,value` CSV as written, in lattice order.
fn raw_values(ctx: &Ctx, path: &Path, l: &Lattice) -> Result<Vec<String>> {
    let mut out = vec![None; l.len()];
    for (line, id, value) in io::parse_pairs(&ctx.read(path)?)? {
        let x = l.index_of(&id)?;
        if out[x].replace(value).is_some() {
            return Err(CliError::Usage(format!("line {line}: duplicate value for `{id}`")));
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(x, v)| v.ok_or_else(|| CliError::Domain(format!("no value for `{}`", l.id(x)))))
        .collect()
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
