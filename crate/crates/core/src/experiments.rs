//! Dilatation experiments: convergence `‖f_r - f‖ → 0`, the limsup bounds on
//! the dilated derivative integrals, truncation to polyanalytic polynomials,
//! and the fixture matrix that runs them across domains, spaces and weights.

use std::fmt;

use num_complex::Complex;
use rayon::prelude::*;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::norms::{NormEvaluator, NormResult, QuadFlags, QuadOptions, SpaceKind, SpaceSpec};
use crate::polyfun::{DilationFactor, PolyFunction, PowerSeries};
use crate::scalar::{lit, Scalar};
use crate::weights::{find_min_k, AngularProfile, ConditionGrid, RadialProfile, WeightSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Converged,
    NotConverged,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Converged => "converged",
            Verdict::NotConverged => "not_converged",
        }
    }

    pub fn is_converged(self) -> bool {
        self == Verdict::Converged
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentOptions<T> {
    pub quad: QuadOptions<T>,
    /// Convergence needs `‖f_r - f‖ <= threshold · ‖f‖` at the last `r`.
    pub threshold: T,
    /// Limsup certificate allows `LHS <= RHS · (1 + limsup_tol)`.
    pub limsup_tol: T,
    /// Truncation is exhausted when the error is within this fraction of `‖f - f_r‖`.
    pub approx_slack: T,
}

impl<T: Scalar> Default for ExperimentOptions<T> {
    fn default() -> Self {
        ExperimentOptions {
            quad: QuadOptions::default(),
            threshold: lit(0.02),
            limsup_tol: lit(1e-3),
            approx_slack: lit(0.1),
        }
    }
}

pub fn default_r_grid<T: Scalar>() -> Vec<T> {
    [0.5, 0.9, 0.99, 0.999].into_iter().map(lit).collect()
}

fn check_r_grid<T: Scalar>(r_grid: &[T]) -> Result<()> {
    if r_grid.is_empty() {
        return Err(Error::InvalidParameter("r grid is empty".into()));
    }
    if let Some(r) = r_grid.iter().find(|&&r| !(r > T::zero() && r < T::one())) {
        return Err(Error::InvalidParameter(format!("r = {r} is not in (0, 1)")));
    }
    if r_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter(
            "r grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

fn dilation<T: Scalar>(r: T) -> Result<DilationFactor<T>> {
    DilationFactor::new(r)
}

/// `q=<q>;zdeg=<max z-degree>;terms=<nonzero monomials>`
pub fn describe_function<T: Scalar>(f: &PolyFunction<T>) -> String {
    format!(
        "q={};zdeg={};terms={}",
        f.q(),
        f.z_degree(),
        f.monomials().count()
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow<T> {
    pub r: T,
    pub err_seminorm: T,
    pub err_fullnorm: T,
    /// `|f_r(base) - f(base)|^p`
    pub point_term: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport<T> {
    pub rows: Vec<ConvergenceRow<T>>,
    pub spec: SpaceSpec<T>,
    pub function: String,
    /// Norm of `f` itself.
    pub reference: NormResult<T>,
    pub threshold: T,
    pub verdict: Verdict,
    pub flags: QuadFlags<T>,
}

impl<T: Scalar> ConvergenceReport<T> {
    /// Last error is small relative to `‖f‖` and no larger than the first
    /// (strictly smaller unless both vanish).
    fn judge(rows: &[ConvergenceRow<T>], reference: T, threshold: T) -> Verdict {
        let (Some(first), Some(last)) = (rows.first(), rows.last()) else {
            return Verdict::NotConverged;
        };
        let small = last.err_fullnorm <= threshold * reference;
        let decreasing = if first.err_fullnorm == T::zero() {
            last.err_fullnorm == T::zero()
        } else {
            last.err_fullnorm < first.err_fullnorm
        };
        if small && decreasing {
            Verdict::Converged
        } else {
            Verdict::NotConverged
        }
    }

    pub fn is_decreasing(&self) -> bool {
        match (self.rows.first(), self.rows.last()) {
            (Some(a), Some(b)) => b.err_fullnorm <= a.err_fullnorm,
            _ => false,
        }
    }
}

/// `‖f_r - f‖` for every `r` in the grid.
pub fn dilatation_convergence<T: Scalar>(
    f: &PolyFunction<T>,
    spec: &SpaceSpec<T>,
    r_grid: &[T],
    opts: &ExperimentOptions<T>,
) -> Result<ConvergenceReport<T>> {
    let evaluator = NormEvaluator::new(*spec, &opts.quad)?;
    convergence_with(&evaluator, f, r_grid, opts.threshold)
}

fn convergence_with<T: Scalar>(
    evaluator: &NormEvaluator<T>,
    f: &PolyFunction<T>,
    r_grid: &[T],
    threshold: T,
) -> Result<ConvergenceReport<T>> {
    check_r_grid(r_grid)?;
    let reference = evaluator.norm(f)?;
    let mut flags = reference.flags;
    let mut rows = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        let fr = f.dilate(&dilation(r)?);
        let n = evaluator.norm_of_difference(&fr, f)?;
        flags = flags.merge(n.flags);
        rows.push(ConvergenceRow {
            r,
            err_seminorm: n.seminorm,
            err_fullnorm: n.full_norm,
            point_term: n.point_term,
        });
    }
    let verdict = ConvergenceReport::judge(&rows, reference.full_norm, threshold);
    Ok(ConvergenceReport {
        rows,
        spec: *evaluator.spec(),
        function: describe_function(f),
        reference,
        threshold,
        verdict,
        flags,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimsupRow<T> {
    pub r: T,
    /// `∫ |∂_z f_r|^p dμ`
    pub lhs_dz: T,
    /// `∫ |∂_z̄ f_r|^p dμ`
    pub lhs_dzbar: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimsupReport<T> {
    pub rows: Vec<LimsupRow<T>>,
    pub rhs_dz: T,
    pub rhs_dzbar: T,
    /// `max_r (LHS(r) - RHS)` per part.
    pub margin_dz: T,
    pub margin_dzbar: T,
    pub tolerance: T,
    pub certified: bool,
    pub flags: QuadFlags<T>,
}

/// Dilated derivative integrals against their undilated counterparts, for a
/// Dirichlet or Besov space.
pub fn limsup_check<T: Scalar>(
    f: &PolyFunction<T>,
    spec: &SpaceSpec<T>,
    r_grid: &[T],
    opts: &ExperimentOptions<T>,
) -> Result<LimsupReport<T>> {
    if spec.kind() == SpaceKind::Bergman {
        return Err(Error::InvalidParameter(
            "limsup check needs a dirichlet or besov space".into(),
        ));
    }
    check_r_grid(r_grid)?;
    let evaluator = NormEvaluator::new(*spec, &opts.quad)?;
    let rhs = evaluator.derivative_integrals(f)?;
    let mut flags = rhs.flags;
    let mut rows = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        let lhs = evaluator.derivative_integrals(&f.dilate(&dilation(r)?))?;
        flags = flags.merge(lhs.flags);
        rows.push(LimsupRow {
            r,
            lhs_dz: lhs.dz,
            lhs_dzbar: lhs.dzbar,
        });
    }
    let margin = |pick: fn(&LimsupRow<T>) -> T, rhs: T| {
        rows.iter()
            .map(|row| pick(row) - rhs)
            .fold(T::neg_infinity(), T::max)
    };
    let margin_dz = margin(|row| row.lhs_dz, rhs.dz);
    let margin_dzbar = margin(|row| row.lhs_dzbar, rhs.dzbar);
    let bound = T::one() + opts.limsup_tol;
    let certified = rows
        .iter()
        .all(|row| row.lhs_dz <= rhs.dz * bound && row.lhs_dzbar <= rhs.dzbar * bound);
    Ok(LimsupReport {
        rows,
        rhs_dz: rhs.dz,
        rhs_dzbar: rhs.dzbar,
        margin_dz,
        margin_dzbar,
        tolerance: opts.limsup_tol,
        certified,
        flags,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxRow<T> {
    pub r: T,
    pub m: usize,
    /// `‖f - truncate(f_r, m)‖`
    pub error: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxReport<T> {
    pub rows: Vec<ApproxRow<T>>,
    pub spec: SpaceSpec<T>,
    /// `‖f - f_r‖`, the floor the truncation errors approach.
    pub dilation_error: T,
    pub slack: T,
    pub verdict: Verdict,
    pub flags: QuadFlags<T>,
}

/// Approximates `f` by the polyanalytic polynomials `truncate(f_r, m)`.
pub fn poly_approx<T: Scalar>(
    f: &PolyFunction<T>,
    spec: &SpaceSpec<T>,
    r: T,
    m_grid: &[usize],
    opts: &ExperimentOptions<T>,
) -> Result<ApproxReport<T>> {
    check_r_grid(&[r])?;
    if m_grid.is_empty() {
        return Err(Error::InvalidParameter("m grid is empty".into()));
    }
    if m_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "m grid must be strictly increasing".into(),
        ));
    }
    let evaluator = NormEvaluator::new(*spec, &opts.quad)?;
    let fr = f.dilate(&dilation(r)?);
    let floor = evaluator.norm_of_difference(f, &fr)?;
    let mut flags = floor.flags;
    let mut rows = Vec::with_capacity(m_grid.len());
    for &m in m_grid {
        let n = evaluator.norm_of_difference(f, &fr.truncate(m))?;
        flags = flags.merge(n.flags);
        rows.push(ApproxRow {
            r,
            m,
            error: n.full_norm,
        });
    }
    let last = rows.last().expect("nonempty m grid").error;
    let verdict = if (last - floor.full_norm).abs() <= opts.approx_slack * floor.full_norm {
        Verdict::Converged
    } else {
        Verdict::NotConverged
    };
    Ok(ApproxReport {
        rows,
        spec: *spec,
        dilation_error: floor.full_norm,
        slack: opts.approx_slack,
        verdict,
        flags,
    })
}

/// Degree of the Taylor truncation used for transcendental fixture components.
pub const TAYLOR_DEGREE: usize = 30;

/// Named test function of the fixture matrix.
#[derive(Debug, Clone)]
pub struct NamedFunction<T> {
    pub name: &'static str,
    pub function: PolyFunction<T>,
}

/// Analytic, purely antiholomorphic and mixed fixtures:
/// `e^z`, `z̄²`, `z̄ e^z` (exponentials truncated at [`TAYLOR_DEGREE`]).
pub fn fixture_functions<T: Scalar>() -> Vec<NamedFunction<T>> {
    let exp = PowerSeries::<T>::exp_taylor(TAYLOR_DEGREE);
    let one = Complex::new(T::one(), T::zero());
    vec![
        NamedFunction {
            name: "analytic:exp(z)",
            function: PolyFunction::analytic(exp.clone()),
        },
        NamedFunction {
            name: "antiholomorphic:zbar^2",
            function: PolyFunction::antiholomorphic_times(2, PowerSeries::constant(one), 3)
                .expect("k < q"),
        },
        NamedFunction {
            name: "mixed:zbar*exp(z)",
            function: PolyFunction::antiholomorphic_times(1, exp, 2).expect("k < q"),
        },
    ]
}

/// Broader corpus for invariant checks: the fixture functions plus low-degree
/// polyanalytic polynomials with complex coefficients.
pub fn corpus_functions<T: Scalar>() -> Vec<NamedFunction<T>> {
    let c = |re: f64, im: f64| Complex::new(lit::<T>(re), lit::<T>(im));
    type Terms<'a> = &'a [((usize, usize), (f64, f64))];
    let poly = |name: &'static str, terms: Terms, q: usize| NamedFunction {
        name,
        function: PolyFunction::from_monomials(
            terms.iter().map(|&(kj, (re, im))| (kj, c(re, im))),
            q,
        )
        .expect("corpus monomials are valid"),
    };
    let mut out = fixture_functions::<T>();
    out.extend([
        poly("constant", &[((0, 0), (2.0, -1.0))], 1),
        poly("z", &[((0, 1), (1.0, 0.0))], 1),
        poly("zbar", &[((1, 0), (1.0, 0.0))], 2),
        poly("zbar*z", &[((1, 1), (1.0, 0.0))], 2),
        poly("zbar*z^2", &[((1, 2), (0.5, 0.5))], 2),
        poly(
            "cubic",
            &[
                ((0, 3), (1.0, 1.0)),
                ((1, 1), (-2.0, 0.0)),
                ((0, 0), (0.0, 0.5)),
            ],
            2,
        ),
        poly(
            "zbar^2*z+zbar^3",
            &[
                ((2, 1), (0.25, 0.0)),
                ((3, 0), (0.0, -1.0)),
                ((0, 2), (1.0, 0.0)),
            ],
            4,
        ),
        NamedFunction {
            name: "zbar^2*exp(z)/4",
            function: PolyFunction::antiholomorphic_times(
                2,
                PowerSeries::<T>::exp_taylor(TAYLOR_DEGREE).scale(&c(0.25, 0.0)),
                3,
            )
            .expect("k < q"),
        },
    ]);
    out
}

/// Weight catalog used by the fixture matrix on `domain`.
pub fn fixture_weights<T: Scalar>(domain: Domain) -> Vec<WeightSpec<T>> {
    let theta_max = domain.angular_span::<T>();
    let one = T::one();
    vec![
        WeightSpec::Uniform,
        WeightSpec::ExpAbsPow { beta: one, n: 2 },
        WeightSpec::ExpRePow { beta: one, n: 1 },
        WeightSpec::ExpAbs,
        WeightSpec::AngularPoly {
            alpha: one,
            theta_max,
        },
        WeightSpec::Product {
            radial: RadialProfile::PowerLaw { gamma: one },
            angular: AngularProfile::AngularPoly {
                alpha: one,
                theta_max,
            },
        },
    ]
}

/// Half-plane measure parameters used by the fixture matrix.
pub fn fixture_halfplane_params<T: Scalar>() -> (T, T) {
    (T::one(), T::one())
}

/// One `(space, function)` case of the fixture matrix.
#[derive(Debug, Clone)]
pub struct SuiteCell<T> {
    pub id: String,
    pub spec: SpaceSpec<T>,
    pub function_name: &'static str,
    pub function: PolyFunction<T>,
}

impl<T: Scalar> SuiteCell<T> {
    pub fn new(spec: SpaceSpec<T>, function: NamedFunction<T>) -> Self {
        let id = format!(
            "{}/{}/p={}/{}/{}",
            spec.domain(),
            spec.kind(),
            spec.p(),
            spec.weight().tag(),
            function.name
        );
        SuiteCell {
            id,
            spec,
            function_name: function.name,
            function: function.function,
        }
    }
}

/// {disk, half-plane} × {Dirichlet p = 1, 2, 3; Besov p = 2, 3, 4; Bergman p = 2}
/// × the weight catalog × the three fixture functions.
pub fn fixture_matrix<T: Scalar>() -> Result<Vec<SuiteCell<T>>> {
    let spaces: [(SpaceKind, f64); 7] = [
        (SpaceKind::Dirichlet, 1.0),
        (SpaceKind::Dirichlet, 2.0),
        (SpaceKind::Dirichlet, 3.0),
        (SpaceKind::Besov, 2.0),
        (SpaceKind::Besov, 3.0),
        (SpaceKind::Besov, 4.0),
        (SpaceKind::Bergman, 2.0),
    ];
    let (alpha, beta) = fixture_halfplane_params::<T>();
    let mut cells = Vec::new();
    for domain in [Domain::UnitDisk, Domain::UpperHalfPlane] {
        for &(kind, p) in &spaces {
            for weight in fixture_weights::<T>(domain) {
                let spec = match domain {
                    Domain::UnitDisk => SpaceSpec::disk(kind, lit(p), weight)?,
                    Domain::UpperHalfPlane => {
                        SpaceSpec::halfplane(kind, lit(p), weight, alpha, beta)?
                    }
                };
                for f in fixture_functions::<T>() {
                    cells.push(SuiteCell::new(spec, f));
                }
            }
        }
    }
    Ok(cells)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteRow<T> {
    pub id: String,
    pub domain: Domain,
    pub kind: SpaceKind,
    pub p: T,
    pub weight: String,
    pub function: &'static str,
    pub norm: T,
    pub err_first: T,
    pub err_last: T,
    /// `err_last / norm`
    pub ratio: T,
    pub decreasing: bool,
    pub verdict: Verdict,
    pub flags: String,
    /// Smallest growth-condition exponent found and its grid constant.
    pub condition: Option<(u32, T)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteSummary<T> {
    pub rows: Vec<SuiteRow<T>>,
}

impl<T> SuiteSummary<T> {
    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.verdict == Verdict::Converged)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteRow<T>> {
        self.rows.iter().filter(|r| r.verdict != Verdict::Converged)
    }
}

/// Largest `k` tried when attaching growth-condition witnesses to suite rows.
const SUITE_K_MAX: u32 = 4;

/// Runs [`dilatation_convergence`] for every cell; rows come back sorted by id.
/// A cell whose evaluation errors is reported as not converged with the
/// error text in its flags.
pub fn run_matrix_suite<T: Scalar>(
    cells: &[SuiteCell<T>],
    r_grid: &[T],
    opts: &ExperimentOptions<T>,
) -> Result<SuiteSummary<T>> {
    check_r_grid(r_grid)?;
    let r0: T = lit(0.5);
    let grid = ConditionGrid::default();

    let mut weights: Vec<(Domain, WeightSpec<T>)> = Vec::new();
    for cell in cells {
        let key = (cell.spec.domain(), *cell.spec.weight());
        if !weights.contains(&key) {
            weights.push(key);
        }
    }
    type Keyed<T> = ((Domain, WeightSpec<T>), Option<(u32, T)>);
    let witnesses: Vec<Keyed<T>> = weights
        .into_par_iter()
        .map(|(domain, w)| {
            let found = find_min_k(&w, domain, SUITE_K_MAX, r0, &grid)
                .ok()
                .flatten()
                .map(|wit| (wit.k, wit.c));
            ((domain, w), found)
        })
        .collect();

    let mut rows: Vec<SuiteRow<T>> = cells
        .par_iter()
        .map(|cell| {
            let condition = witnesses
                .iter()
                .find(|(key, _)| *key == (cell.spec.domain(), *cell.spec.weight()))
                .and_then(|(_, c)| *c);
            let outcome = dilatation_convergence(&cell.function, &cell.spec, r_grid, opts);
            let mut row = SuiteRow {
                id: cell.id.clone(),
                domain: cell.spec.domain(),
                kind: cell.spec.kind(),
                p: cell.spec.p(),
                weight: cell.spec.weight().to_string(),
                function: cell.function_name,
                norm: T::nan(),
                err_first: T::nan(),
                err_last: T::nan(),
                ratio: T::nan(),
                decreasing: false,
                verdict: Verdict::NotConverged,
                flags: String::new(),
                condition,
            };
            match outcome {
                Ok(report) => {
                    row.norm = report.reference.full_norm;
                    row.err_first = report.rows[0].err_fullnorm;
                    row.err_last = report.rows[report.rows.len() - 1].err_fullnorm;
                    row.ratio = if row.norm > T::zero() {
                        row.err_last / row.norm
                    } else {
                        T::zero()
                    };
                    row.decreasing = report.is_decreasing();
                    row.verdict = report.verdict;
                    row.flags = report.flags.describe();
                }
                Err(e) => row.flags = format!("error: {e}"),
            }
            row
        })
        .collect();
    rows.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(SuiteSummary { rows })
}
