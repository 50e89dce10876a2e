use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "drg-walk",
    version,
    about = "Random-walk quantities on distance-regular graphs from their intersection arrays"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Exactly one graph source, plus options every verb accepts.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Intersection array "b0,b1,...;c1,c2,...".
    #[arg(long, required_unless_present = "family", conflicts_with = "family")]
    pub array: Option<String>,
    /// Named family, e.g. "petersen", "hamming:7,2", "johnson:8,3".
    #[arg(long)]
    pub family: Option<String>,
    /// Membership in the exceptional class Γ: in, out or unknown.
    #[arg(long, default_value = "unknown")]
    pub gamma: String,
    /// CSV instead of JSON (potentials and tvcurve only).
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureKind {
    TwoPoint,
    ThreePoint,
    Clique,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimMode {
    Hitting,
    Cover,
    Visits,
    Distinct,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derived counts, a_i, bipartiteness and array warnings.
    Info {
        #[command(flatten)]
        common: Common,
        /// Print the explicit graph as an edge list instead.
        #[arg(long)]
        edges: bool,
    },
    /// Biggs potentials, resistances, C(G,k) and the regularity verdicts.
    Potentials {
        #[command(flatten)]
        common: Common,
    },
    /// Effective resistance and commute time per distance.
    Resistance {
        #[command(flatten)]
        common: Common,
    },
    /// Expected hitting times with the (n-1) bracket.
    Hitting {
        #[command(flatten)]
        common: Common,
    },
    /// Hitting times, second moments, variances and their brackets.
    Moments {
        #[command(flatten)]
        common: Common,
    },
    /// Matthews and closed-form cover-time bounds.
    Cover {
        #[command(flatten)]
        common: Common,
    },
    /// F(u), tau_0, mixing-parameter bounds and the mixing time.
    Mixing {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        /// Holding probability of the lazy walk, "p/q" or decimal.
        #[arg(long, default_value = "0")]
        laziness: String,
    },
    /// Visit statistics for a triple "d(v,u),d(w,u),d(v,w)" and distinct-visit counts.
    Visits {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        distances: Option<String>,
    },
    /// Hitting-time generating function, its derivative at 1 and series.
    Genfun {
        #[command(flatten)]
        common: Common,
        /// Evaluation point in [-1, 1].
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        /// Series coefficients per distance.
        #[arg(long, default_value_t = 15)]
        terms: usize,
    },
    /// Eigenvalues, multiplicities and left/right eigenvectors of the intersection matrix.
    Spectrum {
        #[command(flatten)]
        common: Common,
    },
    /// Total-variation distance to stationarity for t = 0..=t-max.
    Tvcurve {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 30)]
        t_max: u64,
        #[arg(long, default_value = "0")]
        laziness: String,
    },
    /// Green's function of the sphere of radius alpha.
    Greens {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        alpha: usize,
        /// Query radius; every r < alpha when omitted.
        #[arg(long)]
        r: Option<usize>,
    },
    /// Harmonic measure of the first boundary point.
    Measure {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        kind: MeasureKind,
        /// Boundary distances: "h", "d(u,v),d(u,w),d(v,w)" or the clique distance "d".
        #[arg(long)]
        boundary: String,
        /// Distances from z to each boundary point, in boundary order.
        #[arg(long)]
        distances: String,
    },
    /// Harnack deviation against its bound, for one query or a full sweep.
    Harnack {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "two-point")]
        kind: MeasureKind,
        /// "h" for two-point, clique distance "d" for cliques.
        #[arg(long)]
        boundary: Option<String>,
        /// Boundary values, e.g. "1,0" or "1/2,-1,3".
        #[arg(long, allow_hyphen_values = true)]
        values: Option<String>,
        #[arg(long)]
        distances: Option<String>,
        /// Check every boundary distance and every triangle-consistent query.
        #[arg(long)]
        sweep: bool,
    },
    /// Compare every formula with its explicit-graph oracle.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Monte Carlo samples per statistic; 0 skips simulation.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Seeded Monte Carlo estimate next to the exact value.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        mode: SimMode,
        /// hitting: "d"; visits: "d(v,u),d(w,u),d(v,w)"; distinct: "h".
        #[arg(long)]
        distances: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Info { common, .. }
            | Command::Potentials { common }
            | Command::Resistance { common }
            | Command::Hitting { common }
            | Command::Moments { common }
            | Command::Cover { common }
            | Command::Mixing { common, .. }
            | Command::Visits { common, .. }
            | Command::Genfun { common, .. }
            | Command::Spectrum { common }
            | Command::Tvcurve { common, .. }
            | Command::Greens { common, .. }
            | Command::Measure { common, .. }
            | Command::Harnack { common, .. }
            | Command::Verify { common, .. }
            | Command::Simulate { common, .. } => common,
        }
    }

    pub fn supports_csv(&self) -> bool {
        matches!(self, Command::Potentials { .. } | Command::Tvcurve { .. })
    }
}
