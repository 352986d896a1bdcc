use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use ozawa_core::folner::{FolnerProvider, FolnerStrategy};
use ozawa_core::verifier::{verify_property_o, Kernel, KernelTag, SampleSpec, VerifyOptions};
use ozawa_core::{Group, GroupKind, DEFAULT_ELEMENT_BUDGET};

use crate::config::{LevelRange, OutputFormat, RunConfig, DEFAULT_NMAX, DEFAULT_SAMPLE_RADIUS};
use crate::document::CertificateDocument;
use crate::tables::{BallTable, DefectCurve};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "ozawa", version, about = "Exact Ozawa kernel computations and Property O certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ball sizes |B(k)| for k = 0..=n.
    Ball {
        /// Group descriptor, e.g. free:2, abelian:2, heisenberg, cyclic:5.
        group: String,
        n: usize,
        /// Also list the sphere at each radius.
        #[arg(long)]
        elements: bool,
        /// Output format (default csv).
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
        #[arg(long, default_value_t = DEFAULT_ELEMENT_BUDGET)]
        budget: usize,
    },
    /// Exact kernel value u_n(x, y).
    Kernel {
        group: String,
        /// tree, folner:box, folner:ball or folner:whole.
        kernel: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[arg(long)]
        n: usize,
        /// Output format (default: the bare value).
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
        #[arg(long, default_value_t = DEFAULT_ELEMENT_BUDGET)]
        budget: usize,
    },
    /// Følner defect |gG_n △ G_n| / |G_n| over a range of levels.
    Defect {
        group: String,
        /// box, ball or whole (a `folner:` prefix is accepted).
        provider: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
        /// Level or inclusive range a..b.
        #[arg(long)]
        n: String,
        /// Output format (default csv).
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
        #[arg(long, default_value_t = DEFAULT_ELEMENT_BUDGET)]
        budget: usize,
    },
    /// Search for N and certify the three kernel conditions for (E, ε).
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub group: Option<String>,
    pub kernel: Option<String>,
    /// ball:r (ball of radius r without e) or list:x,y,...
    #[arg(long = "E")]
    pub e: Option<String>,
    /// Exact rational p/q.
    #[arg(long)]
    pub eps: Option<String>,
    /// Largest level scanned by the Følner search.
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long)]
    pub sample_radius: Option<usize>,
    /// Number of extra random sample points.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub budget: Option<usize>,
    /// json (the certificate) or csv (the residual table).
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write the JSON certificate here as well.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl VerifyArgs {
    fn as_config(&self) -> RunConfig {
        RunConfig {
            group: self.group.clone(),
            kernel: self.kernel.clone(),
            n: None,
            e: self.e.clone(),
            eps: self.eps.clone(),
            nmax: self.nmax,
            sample_radius: self.sample_radius,
            random: self.random,
            seed: self.seed,
            format: self.format,
            budget: self.budget,
        }
    }
}

fn make_group(descriptor: &str, budget: usize) -> anyhow::Result<Group> {
    let kind: GroupKind = descriptor
        .parse()
        .with_context(|| format!("bad group descriptor `{descriptor}`"))?;
    Ok(Group::with_budget(kind, budget)?)
}

/// Runs one command, writing its report to `out`. Returns the exit code;
/// errors map to [`EXIT_USAGE`].
pub fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<u8> {
    match cli.command {
        Command::Ball {
            group,
            n,
            elements,
            format,
            budget,
        } => {
            let g = make_group(&group, budget)?;
            let table = BallTable::build(&g, n, elements)?;
            out.write_all(table.render(format.unwrap_or(OutputFormat::Csv)).as_bytes())?;
            Ok(EXIT_PASS)
        }
        Command::Kernel {
            group,
            kernel,
            x,
            y,
            n,
            format,
            budget,
        } => {
            let g = make_group(&group, budget)?;
            let tag: KernelTag = kernel.parse()?;
            let k = Kernel::new(&g, tag)?;
            let (x, y) = (g.parse_element(&x)?, g.parse_element(&y)?);
            let value = k.value(&x, &y, n)?;
            match format {
                None => writeln!(out, "{value}")?,
                Some(OutputFormat::Csv) => writeln!(out, "x,y,n,value\n{x},{y},{n},{value}")?,
                Some(OutputFormat::Json) => {
                    let doc = serde_json::json!({
                        "group": g.kind().to_string(),
                        "kernel": tag.to_string(),
                        "x": x.to_string(),
                        "y": y.to_string(),
                        "n": n,
                        "value": value.to_string(),
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
                }
            }
            Ok(EXIT_PASS)
        }
        Command::Defect {
            group,
            provider,
            g: elem,
            n,
            format,
            budget,
        } => {
            let g = make_group(&group, budget)?;
            let strategy: FolnerStrategy = provider.strip_prefix("folner:").unwrap_or(&provider).parse()?;
            let p = FolnerProvider::new(&g, strategy)?;
            let levels: LevelRange = n.parse()?;
            let x = g.parse_element(&elem)?;
            let curve = DefectCurve::build(&p, &x, levels)?;
            out.write_all(curve.render(format.unwrap_or(OutputFormat::Csv)).as_bytes())?;
            Ok(EXIT_PASS)
        }
        Command::Verify(args) => verify(&args, out),
    }
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> anyhow::Result<u8> {
    let flags = args.as_config();
    let cfg = match &args.config {
        Some(path) => RunConfig::load(path)?.merged_with(&flags),
        None => flags,
    };
    cfg.validate()?;
    if cfg.n.is_some() {
        bail!("`n` is chosen by the parameter search and cannot be set for verify");
    }
    let Some(group) = cfg.group.as_deref() else {
        bail!("verify needs a group (argument or `group` in the config file)");
    };
    let Some(kernel) = cfg.kernel.as_deref() else {
        bail!("verify needs a kernel (argument or `kernel` in the config file)");
    };
    let g = make_group(group, cfg.budget.unwrap_or(DEFAULT_ELEMENT_BUDGET))?;
    let k = Kernel::new(&g, kernel.parse()?)?;
    let e_set = cfg.element_set()?.resolve(&g)?;
    let eps = cfg.epsilon()?;
    let spec = SampleSpec {
        radius: cfg.sample_radius.unwrap_or(DEFAULT_SAMPLE_RADIUS),
        random: cfg.random.unwrap_or(0),
        seed: cfg.seed.unwrap_or(0),
        ..SampleSpec::default()
    };
    let options = VerifyOptions::with_n_max(cfg.nmax.unwrap_or(DEFAULT_NMAX));
    let cert = verify_property_o(&k, &e_set, &eps, &spec, &options)?;
    let doc = CertificateDocument::from_certificate(&cert, options.tolerance);
    let json = doc.to_json()? + "\n";
    if let Some(path) = &args.output {
        std::fs::write(path, &json).with_context(|| format!("cannot write {}", path.display()))?;
    }
    match cfg.format.unwrap_or_default() {
        OutputFormat::Json => out.write_all(json.as_bytes())?,
        OutputFormat::Csv => {
            writeln!(out, "z,residual")?;
            for (z, r) in &cert.residuals {
                writeln!(out, "\"{z}\",{r}")?;
            }
        }
    }
    Ok(if doc.passed() { EXIT_PASS } else { EXIT_FAIL })
}
