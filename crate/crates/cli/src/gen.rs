//! `sgs gen`: graph files from the built-in generators.

use anyhow::{bail, Result};
use clap::{Subcommand, ValueEnum};
use sgs_core::generators::{ball_truncation, grid, make_basic, make_radial_family, BasicKind, Host, RadialFamilySpec};
use sgs_core::{Graph, Potential};

use crate::graph_file::GraphFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HostKind {
    RegularTree,
    Radial,
}

#[derive(Debug, Clone, Subcommand)]
pub enum GenKind {
    /// Path on n vertices.
    Path {
        #[arg(long)]
        n: usize,
    },
    /// Cycle on n vertices.
    Cycle {
        #[arg(long)]
        n: usize,
    },
    /// Complete graph on n vertices.
    Complete {
        #[arg(long)]
        n: usize,
    },
    /// Square m × m grid.
    Grid {
        #[arg(long)]
        m: usize,
    },
    /// Star with the given number of leaves.
    Star {
        #[arg(long)]
        leaves: usize,
    },
    /// Antitree with the given sphere sizes.
    Antitree {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
    },
    /// Radial tree family truncated at a depth; short sequences repeat their
    /// last entry.
    Tree {
        #[arg(long, value_delimiter = ',', required = true)]
        beta: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        gamma: Vec<usize>,
        #[arg(long)]
        depth: usize,
    },
    /// Ball around the root of an infinite host, with host degrees on the
    /// outer sphere.
    Ball {
        #[arg(long, value_enum)]
        host: HostKind,
        /// Degree of the regular tree.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        radius: usize,
        #[arg(long, value_delimiter = ',')]
        beta: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        gamma: Vec<usize>,
    },
}

pub fn build(kind: &GenKind) -> Result<Graph> {
    Ok(match kind {
        GenKind::Path { n } => make_basic(&BasicKind::Path(*n))?,
        GenKind::Cycle { n } => make_basic(&BasicKind::Cycle(*n))?,
        GenKind::Complete { n } => make_basic(&BasicKind::Complete(*n))?,
        GenKind::Grid { m } => grid(*m, *m)?,
        GenKind::Star { leaves } => make_basic(&BasicKind::Star(*leaves))?,
        GenKind::Antitree { sizes } => make_basic(&BasicKind::Antitree(sizes.clone()))?,
        GenKind::Tree { beta, gamma, depth } => {
            make_radial_family(&RadialFamilySpec::new(beta.clone(), gamma.clone(), *depth))?
        }
        GenKind::Ball {
            host,
            d,
            radius,
            beta,
            gamma,
        } => {
            let host = match host {
                HostKind::RegularTree => match d {
                    Some(d) => Host::RegularTree(*d),
                    None => bail!("--host regular-tree needs --d"),
                },
                HostKind::Radial => {
                    if beta.is_empty() || gamma.is_empty() {
                        bail!("--host radial needs --beta and --gamma");
                    }
                    Host::RadialFamily {
                        beta: beta.clone(),
                        gamma: gamma.clone(),
                    }
                }
            };
            ball_truncation(&host, *radius)?
        }
    })
}

pub fn generate(kind: &GenKind, q: f64) -> Result<GraphFile> {
    if !q.is_finite() {
        bail!("--q must be finite");
    }
    let g = build(kind)?;
    let n = g.vertex_count();
    Ok(GraphFile::from_core(&g, &Potential::constant(n, q), None))
}
