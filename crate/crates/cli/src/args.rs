//! Flag definitions and their conversion into core configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polybesov::experiments::ExperimentOptions;
use polybesov::norms::{QuadOptions, SpaceKind, SpaceSpec};
use polybesov::weights::{AngularProfile, ConditionGrid, RadialProfile, WeightSpec};
use polybesov::Domain;

#[derive(Debug, Parser)]
#[command(
    name = "polybesov",
    version,
    about = "Weighted polyanalytic Bergman, Dirichlet and Besov norms and dilatation experiments",
    long_about = None
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Norm of a function: CSV `full_norm,seminorm,point_term,flags`.
    Norm(NormArgs),
    /// Dilatation errors `‖f_r - f‖`: CSV `r,err_seminorm,err_fullnorm`.
    Converge(ConvergeArgs),
    /// Dilated against undilated derivative integrals:
    /// CSV `r,lhs_dz,lhs_dzbar,rhs_dz,rhs_dzbar`.
    LimsupCheck(LimsupArgs),
    /// Truncations of `f_r` as polyanalytic polynomials: CSV `r,m,error`.
    Approx(ApproxArgs),
    /// Grid certificate for `r^k w(z/r) <= C w(z)`: CSV `k,C,r0,grid_size,z_re,z_im,r`.
    CheckWeight(CheckWeightArgs),
    /// Full fixture matrix, one CSV row per cell.
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SpaceArg {
    Bergman,
    Dirichlet,
    Besov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainArg {
    Disk,
    Halfplane,
}

impl From<DomainArg> for Domain {
    fn from(d: DomainArg) -> Domain {
        match d {
            DomainArg::Disk => Domain::UnitDisk,
            DomainArg::Halfplane => Domain::UpperHalfPlane,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WeightTag {
    Uniform,
    ExpAbsPow,
    ExpRePow,
    ExpAbs,
    AngularPoly,
    Product,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RadialTag {
    PowerLaw,
    ExpAbsPow,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AngularTag {
    Uniform,
    AngularPoly,
}

/// Weight selection. Parameters not used by the chosen weight are ignored.
#[derive(Debug, Clone, Args)]
pub struct WeightArgs {
    #[arg(long, value_enum, default_value = "uniform")]
    pub weight: WeightTag,
    /// β of exp-abs-pow / exp-re-pow (also the radial exp-abs-pow of a product).
    #[arg(long = "weight-beta", default_value_t = 1.0)]
    pub weight_beta: f64,
    /// Exponent n of exp-abs-pow (default 2) / exp-re-pow (default 1).
    #[arg(long)]
    pub n: Option<u32>,
    /// α of angular-poly.
    #[arg(long = "weight-alpha", default_value_t = 1.0)]
    pub weight_alpha: f64,
    /// γ of the power-law radial profile of a product weight.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// θ_max of angular-poly; defaults to the domain's angular span.
    #[arg(long = "theta-max")]
    pub theta_max: Option<f64>,
    #[arg(long, value_enum, default_value = "power-law")]
    pub radial: RadialTag,
    #[arg(long, value_enum, default_value = "angular-poly")]
    pub angular: AngularTag,
}

impl WeightArgs {
    pub fn to_weight(&self, domain: Domain) -> WeightSpec<f64> {
        let theta_max = self.theta_max.unwrap_or_else(|| domain.angular_span());
        let angular_poly = AngularProfile::AngularPoly {
            alpha: self.weight_alpha,
            theta_max,
        };
        match self.weight {
            WeightTag::Uniform => WeightSpec::Uniform,
            WeightTag::ExpAbsPow => WeightSpec::ExpAbsPow {
                beta: self.weight_beta,
                n: self.n.unwrap_or(2),
            },
            WeightTag::ExpRePow => WeightSpec::ExpRePow {
                beta: self.weight_beta,
                n: self.n.unwrap_or(1),
            },
            WeightTag::ExpAbs => WeightSpec::ExpAbs,
            WeightTag::AngularPoly => WeightSpec::AngularPoly {
                alpha: self.weight_alpha,
                theta_max,
            },
            WeightTag::Product => WeightSpec::Product {
                radial: match self.radial {
                    RadialTag::PowerLaw => RadialProfile::PowerLaw { gamma: self.gamma },
                    RadialTag::ExpAbsPow => RadialProfile::ExpAbsPow {
                        beta: self.weight_beta,
                        n: self.n.unwrap_or(2),
                    },
                },
                angular: match self.angular {
                    AngularTag::Uniform => AngularProfile::Uniform,
                    AngularTag::AngularPoly => angular_poly,
                },
            },
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct QuadArgs {
    /// Radial nodes of the base grid.
    #[arg(long = "quad-nr", default_value_t = 128)]
    pub n_r: usize,
    /// Angular nodes of the base grid.
    #[arg(long = "quad-ntheta", default_value_t = 256)]
    pub n_theta: usize,
    /// Half-plane truncation radius; required when --beta is 0.
    #[arg(long = "quad-R")]
    pub radius: Option<f64>,
    /// Relative change between refinement levels accepted as converged.
    #[arg(long = "quad-rel-tol", default_value_t = 1e-9)]
    pub rel_tol: f64,
    /// Grid doublings allowed after the base grid.
    #[arg(long = "quad-max-level", default_value_t = 1)]
    pub max_level: u32,
}

impl QuadArgs {
    pub fn to_options(&self) -> QuadOptions<f64> {
        QuadOptions {
            n_r: self.n_r,
            n_theta: self.n_theta,
            radius: self.radius,
            rel_tol: self.rel_tol,
            max_level: self.max_level,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SpaceArgs {
    #[arg(long, value_enum)]
    pub space: SpaceArg,
    #[arg(long, value_enum, default_value = "disk")]
    pub domain: DomainArg,
    #[arg(long)]
    pub p: f64,
    /// Half-plane exponent of Im z (required iff --domain halfplane).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Half-plane Gaussian rate (required iff --domain halfplane).
    #[arg(long)]
    pub beta: Option<f64>,
    #[command(flatten)]
    pub weight: WeightArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
}

impl SpaceArgs {
    pub fn to_spec(&self) -> Result<SpaceSpec<f64>, String> {
        let kind = match self.space {
            SpaceArg::Bergman => SpaceKind::Bergman,
            SpaceArg::Dirichlet => SpaceKind::Dirichlet,
            SpaceArg::Besov => SpaceKind::Besov,
        };
        let domain = Domain::from(self.domain);
        let weight = self.weight.to_weight(domain);
        let spec = match (self.domain, self.alpha, self.beta) {
            (DomainArg::Disk, None, None) => SpaceSpec::disk(kind, self.p, weight),
            (DomainArg::Disk, _, _) => {
                return Err("--alpha/--beta only apply to --domain halfplane".into())
            }
            (DomainArg::Halfplane, Some(alpha), Some(beta)) => {
                if beta == 0.0 && self.quad.radius.is_none() {
                    return Err(
                        "--beta 0 leaves the half-plane integrals untruncated; pass --quad-R <radius>"
                            .into(),
                    );
                }
                SpaceSpec::halfplane(kind, self.p, weight, alpha, beta)
            }
            (DomainArg::Halfplane, _, _) => {
                return Err("--domain halfplane requires both --alpha and --beta".into())
            }
        };
        spec.map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write CSV here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Function file (`q <int>` header, then `k j re im` lines).
    #[arg(long)]
    pub function: PathBuf,
    /// Also estimate seminorm^p by Monte Carlo with this many samples.
    #[arg(long = "mc-samples")]
    pub mc_samples: Option<usize>,
    /// Seed of the Monte Carlo cross-check.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn default_r_grid() -> Vec<f64> {
    polybesov::experiments::default_r_grid()
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long)]
    pub function: PathBuf,
    /// Increasing dilation factors in (0, 1).
    #[arg(long = "r-grid", value_delimiter = ',', default_values_t = default_r_grid())]
    pub r_grid: Vec<f64>,
    /// Converged when the last error is at most this fraction of ‖f‖.
    #[arg(long, default_value_t = 0.02)]
    pub threshold: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LimsupArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long)]
    pub function: PathBuf,
    #[arg(long = "r-grid", value_delimiter = ',', default_values_t = default_r_grid())]
    pub r_grid: Vec<f64>,
    /// Certified when LHS <= RHS (1 + tolerance) at every r.
    #[arg(long, default_value_t = 1e-3)]
    pub tolerance: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ApproxArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long)]
    pub function: PathBuf,
    #[arg(long)]
    pub r: f64,
    /// Increasing truncation degrees in z.
    #[arg(long = "m-grid", value_delimiter = ',', required = true)]
    pub m_grid: Vec<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CheckWeightArgs {
    #[arg(long, value_enum, default_value = "disk")]
    pub domain: DomainArg,
    #[command(flatten)]
    pub weight: WeightArgs,
    /// Exponent to certify; without it the smallest k <= --k-max is searched.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long = "k-max", default_value_t = 4)]
    pub k_max: u32,
    #[arg(long, default_value_t = 0.5)]
    pub r0: f64,
    #[arg(long = "n-r", default_value_t = 64)]
    pub n_r: usize,
    #[arg(long = "n-z", default_value_t = 4096)]
    pub n_z: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

impl CheckWeightArgs {
    pub fn grid(&self) -> ConditionGrid<f64> {
        ConditionGrid {
            n_r: self.n_r,
            n_z: self.n_z,
            ..Default::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[arg(long = "r-grid", value_delimiter = ',', default_values_t = default_r_grid())]
    pub r_grid: Vec<f64>,
    #[arg(long, default_value_t = 0.02)]
    pub threshold: f64,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

pub fn experiment_options(quad: &QuadArgs) -> ExperimentOptions<f64> {
    ExperimentOptions {
        quad: quad.to_options(),
        ..Default::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Command {
        let mut argv = vec!["polybesov"];
        argv.extend(args);
        Cli::try_parse_from(argv).unwrap().command
    }

    fn space_of(args: &[&str]) -> Result<SpaceSpec<f64>, String> {
        match parse(args) {
            Command::Norm(a) => a.space.to_spec(),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn weight_defaults_follow_the_domain() {
        let spec = space_of(&[
            "norm",
            "--space",
            "dirichlet",
            "--domain",
            "halfplane",
            "--alpha",
            "1",
            "--beta",
            "2",
            "--p",
            "3",
            "--weight",
            "angular-poly",
            "--function",
            "f.pf",
        ])
        .unwrap();
        assert_eq!(
            *spec.weight(),
            WeightSpec::AngularPoly {
                alpha: 1.0,
                theta_max: std::f64::consts::PI
            }
        );
        assert_eq!(spec.halfplane_params().unwrap().beta, 2.0);

        let spec = space_of(&[
            "norm",
            "--space",
            "bergman",
            "--p",
            "2",
            "--weight",
            "exp-re-pow",
            "--weight-beta",
            "0.5",
            "--function",
            "f.pf",
        ])
        .unwrap();
        assert_eq!(*spec.weight(), WeightSpec::ExpRePow { beta: 0.5, n: 1 });
    }

    #[test]
    fn product_weight_profiles() {
        let spec = space_of(&[
            "norm",
            "--space",
            "bergman",
            "--p",
            "2",
            "--weight",
            "product",
            "--radial",
            "exp-abs-pow",
            "--n",
            "3",
            "--angular",
            "uniform",
            "--function",
            "f.pf",
        ])
        .unwrap();
        assert_eq!(
            *spec.weight(),
            WeightSpec::Product {
                radial: RadialProfile::ExpAbsPow { beta: 1.0, n: 3 },
                angular: AngularProfile::Uniform
            }
        );
    }

    #[test]
    fn grids_split_on_commas() {
        match parse(&[
            "converge",
            "--space",
            "besov",
            "--p",
            "2",
            "--function",
            "f",
            "--r-grid",
            "0.5,0.75",
        ]) {
            Command::Converge(a) => assert_eq!(a.r_grid, [0.5, 0.75]),
            other => panic!("unexpected {other:?}"),
        }
        match parse(&[
            "converge",
            "--space",
            "besov",
            "--p",
            "2",
            "--function",
            "f",
        ]) {
            Command::Converge(a) => assert_eq!(a.r_grid, [0.5, 0.9, 0.99, 0.999]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn quadrature_flag_defaults() {
        match parse(&["suite"]) {
            Command::Suite(a) => {
                let q = a.quad.to_options();
                assert_eq!(
                    (q.n_r, q.n_theta, q.radius, q.rel_tol),
                    (128, 256, None, 1e-9)
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn halfplane_parameter_rules() {
        let base = ["norm", "--space", "bergman", "--p", "2", "--function", "f"];
        let with = |extra: &[&str]| {
            let mut v = base.to_vec();
            v.extend(extra);
            space_of(&v)
        };
        assert!(with(&["--alpha", "1"]).is_err());
        assert!(with(&["--domain", "halfplane", "--alpha", "1"]).is_err());
        assert!(with(&["--domain", "halfplane", "--alpha", "1", "--beta", "0"]).is_err());
        assert!(with(&[
            "--domain",
            "halfplane",
            "--alpha",
            "1",
            "--beta",
            "0",
            "--quad-R",
            "5"
        ])
        .is_ok());
    }
}
