use std::io::Read as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use riordan_core::decompose::{
    commutator, commutator_decompose, factor_involutions, in_generated_by_involutions,
};
use riordan_core::fps::parse_rational;
use riordan_core::involution::{
    build_involution, is_involution, klein, InvolutionSpec, KleinElement, Sign,
};
use riordan_core::RiordanMatrix;

use crate::error::CliError;
use crate::format::{
    certificate_doc, exact_series_arg, read_matrix, render_matrix, series_arg, to_json,
    CommutatorDoc, Format, MatrixDoc,
};

/// Exact arithmetic on truncated Riordan matrices.
///
/// Matrices are read and written as JSON documents; a path of `-` reads
/// standard input. Series arguments are generating-function expressions
/// when they mention `x` and comma-separated coefficients otherwise.
#[derive(Debug, Parser)]
#[command(name = "riordan", version)]
pub struct Cli {
    /// Write the result here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct MatrixOut {
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct CheckKind {
    /// M·M = I
    #[arg(long)]
    pub involution: bool,
    /// h2² = h1·h3
    #[arg(long)]
    pub omega0: bool,
    /// M lies in the group generated by involutions
    #[arg(long)]
    pub membership: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The matrix (d, h) truncated at order n.
    Build {
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(short = 'n')]
        n: usize,
        #[command(flatten)]
        out: MatrixOut,
    },
    /// Product of two or more matrices, left to right.
    Mul {
        #[arg(num_args = 2.., required = true)]
        paths: Vec<PathBuf>,
        #[command(flatten)]
        out: MatrixOut,
    },
    Inv {
        path: PathBuf,
        #[command(flatten)]
        out: MatrixOut,
    },
    /// Drops the last row, or keeps rows 0..=k with --to.
    Project {
        path: PathBuf,
        #[arg(long)]
        to: Option<usize>,
        #[command(flatten)]
        out: MatrixOut,
    },
    /// Prints true or false.
    Check {
        #[command(flatten)]
        kind: CheckKind,
        path: PathBuf,
    },
    /// The nontrivial involution with the given sign and free entries.
    Involution {
        #[arg(long, allow_hyphen_values = true)]
        sign: Sign,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(short = 'n')]
        n: usize,
        #[command(flatten)]
        out: MatrixOut,
    },
    /// Writes a unit-diagonal M as A·B·A⁻¹·B⁻¹ with A = (1, r·x).
    Commutator {
        path: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
    },
    /// Factors M into at most four involutions.
    Factor { path: PathBuf },
    /// pascal, identity or klein:<I|NEG_I|IPLUS0|IMINUS0>.
    Named {
        name: String,
        #[arg(short = 'n')]
        n: usize,
        #[command(flatten)]
        out: MatrixOut,
    },
    /// Applies M to a series: d·(s∘h).
    Apply {
        path: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        series: String,
    },
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(io)
}

fn load(path: &Path) -> Result<RiordanMatrix, CliError> {
    read_matrix(&read_input(path)?)
}

fn named(name: &str, n: usize) -> Result<RiordanMatrix, CliError> {
    match name.to_ascii_lowercase().as_str() {
        "pascal" => return Ok(RiordanMatrix::pascal(n)),
        "identity" => return Ok(RiordanMatrix::identity(n)),
        _ => {}
    }
    let tag = name
        .split_once(':')
        .filter(|(head, _)| head.eq_ignore_ascii_case("klein"))
        .map(|(_, tag)| tag)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "unknown matrix {name:?} (expected pascal, identity or klein:<tag>)"
            ))
        })?;
    let k: KleinElement = tag.parse().map_err(|e| CliError::Usage(format!("{e}")))?;
    Ok(klein(k, n))
}

/// Runs one subcommand and returns what it prints.
pub fn execute(cmd: &Command) -> Result<String, CliError> {
    Ok(match cmd {
        Command::Build { d, h, n, out } => {
            let m = RiordanMatrix::from_dh(series_arg(d, *n)?, series_arg(h, *n)?)?;
            render_matrix(&m, out.format)
        }
        Command::Mul { paths, out } => {
            let mut acc = load(&paths[0])?;
            for p in &paths[1..] {
                acc = acc.mul(&load(p)?)?;
            }
            render_matrix(&acc, out.format)
        }
        Command::Inv { path, out } => render_matrix(&load(path)?.inverse(), out.format),
        Command::Project { path, to, out } => {
            let m = load(path)?;
            let p = match to {
                Some(k) => m.project_to(*k)?,
                None => m.project()?,
            };
            render_matrix(&p, out.format)
        }
        Command::Check { kind, path } => {
            let m = load(path)?;
            let ok = if kind.involution {
                is_involution(&m)
            } else if kind.omega0 {
                m.is_omega0()
            } else {
                in_generated_by_involutions(&m)
            };
            format!("{ok}\n")
        }
        Command::Involution {
            sign,
            alpha,
            n,
            out,
        } => {
            let spec = InvolutionSpec {
                sign: *sign,
                alpha: series_arg(alpha, n.saturating_sub(1))?,
            };
            render_matrix(&build_involution(&spec, *n)?, out.format)
        }
        Command::Commutator { path, r } => {
            let m = load(path)?;
            let r = parse_rational(r)?;
            let (a, b) = commutator_decompose(&m, &r)?;
            let verified = commutator(&a, &b)? == m;
            if !verified {
                return Err(CliError::Internal(
                    "[A, B] does not reproduce the input".into(),
                ));
            }
            to_json(&CommutatorDoc {
                a: MatrixDoc::new(&a),
                b: MatrixDoc::new(&b),
                verified,
            })
        }
        Command::Factor { path } => {
            let cert = factor_involutions(&load(path)?)?;
            if !cert.verified {
                return Err(CliError::Internal("certificate failed verification".into()));
            }
            to_json(&certificate_doc(&cert))
        }
        Command::Named { name, n, out } => render_matrix(&named(name, *n)?, out.format),
        Command::Apply { path, series } => {
            let m = load(path)?;
            let s = exact_series_arg(series, m.order())?;
            format!("{}\n", m.act(&s)?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn named_matrices() {
        assert_eq!(named("pascal", 3).unwrap(), RiordanMatrix::pascal(3));
        assert!(named("klein:iplus0", 2).unwrap().rows()[1][1] == riordan_core::int(-1));
        assert!(matches!(named("klein:J", 2), Err(CliError::Usage(_))));
        assert!(matches!(named("catalan", 2), Err(CliError::Usage(_))));
    }

    #[test]
    fn involution_with_short_alpha() {
        let cmd = Command::Involution {
            sign: Sign::Plus,
            alpha: "1".into(),
            n: 3,
            out: MatrixOut {
                format: Format::Triangle,
            },
        };
        assert_eq!(execute(&cmd).unwrap(), "1\n1 -1\n0 0 1\n0 0 -1 -1\n");
    }
}
