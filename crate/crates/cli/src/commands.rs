use crate::report::{ChernRow, QuadEntry, ResidualStat, RunReport, SweepRow};
use hypvortex::gauge_holonomy::{holonomy_parameter, loop_connection_integral, MonodromyFamily};
use hypvortex::instanton::{chern2, curvature_densities, singular_points, Duality};
use hypvortex::potentials::{
    biharmonic_log4, harmonic_residual4, harmonic_residual_hyp, lift_potential, reduce_potential, Domain,
};
use hypvortex::tolerances::Tolerances;
use hypvortex::vortex::{chern1, vortex_residuals};
use hypvortex::{Complex64, CoreError, Cut, HyperPoint, Kind, Model, QuadConfig, QuadResult, SuperPotential};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Failure before any verdict: bad input.
#[derive(Debug)]
pub struct Usage(pub String);

impl From<CoreError> for Usage {
    fn from(e: CoreError) -> Self {
        Usage(e.to_string())
    }
}

pub struct Grid {
    pub points: usize,
    pub seed: u64,
    /// Radius of the 4-ball sampled for potentials on R⁴.
    pub ball_radius: f64,
    /// Points closer than this to a declared singularity are resampled.
    pub exclusion: f64,
    /// Radius of the disc sampled for hyperbolic potentials.
    pub disc_radius: f64,
}

fn ball_point(r: &mut ChaCha8Rng, g: &Grid, sing: &[[f64; 4]]) -> [f64; 4] {
    loop {
        let x: [f64; 4] = std::array::from_fn(|_| r.gen_range(-g.ball_radius..g.ball_radius));
        let n2: f64 = x.iter().map(|v| v * v).sum();
        let far = sing
            .iter()
            .all(|s| (0..4).map(|i| (x[i] - s[i]).powi(2)).sum::<f64>() >= g.exclusion * g.exclusion);
        if n2 <= g.ball_radius * g.ball_radius && far {
            return x;
        }
    }
}

fn disc_point(r: &mut ChaCha8Rng, g: &Grid) -> Complex64 {
    loop {
        let w = Complex64::new(r.gen_range(-g.disc_radius..g.disc_radius), r.gen_range(-g.disc_radius..g.disc_radius));
        if w.norm() <= g.disc_radius {
            return w;
        }
    }
}

pub fn verify(
    pot: &SuperPotential,
    duality: Duality,
    kind: Kind,
    grid: &Grid,
    tol: &Tolerances,
    report: &mut RunReport,
) -> Result<(), Usage> {
    if grid.points == 0 {
        return Err(Usage("--points must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
    let mut skipped = 0usize;
    // bounded so that a potential undefined almost everywhere cannot loop forever
    let max_draws = grid.points * 50;
    match pot.domain() {
        Domain::R4 => {
            let sing = singular_points(pot);
            let harmonic = pot.is_harmonic();
            let (mut off, mut lap, mut ident, mut control) = (vec![], vec![], vec![], vec![]);
            let mut draws = 0;
            while off.len() < grid.points && draws < max_draws {
                draws += 1;
                let x = ball_point(&mut rng, grid, &sing);
                let Ok((p, m)) = curvature_densities(pot, x, duality) else {
                    skipped += 1;
                    continue;
                };
                let (on_d, off_d) = match duality {
                    Duality::SD => (p, m),
                    Duality::ASD => (m, p),
                };
                let l = harmonic_residual4(pot, x).map_err(Usage::from)?;
                off.push(off_d);
                lap.push(l.abs());
                if harmonic {
                    if let Ok(bh) = biharmonic_log4(pot, x) {
                        if on_d > 0.0 {
                            ident.push((on_d + 0.25 * bh).abs() / on_d);
                        }
                    }
                } else {
                    let want = 0.375 * (l / pot.value4(x).map_err(Usage::from)?).powi(2);
                    if want > 0.0 {
                        control.push((off_d - want).abs() / want);
                    }
                }
            }
            report
                .residuals
                .push(ResidualStat::from_values("off_duality_density", &off, Some(tol.duality_residual)));
            report.residuals.push(ResidualStat::from_values("laplacian", &lap, None));
            if harmonic {
                if ident.is_empty() {
                    report.notes.push("density identity not evaluated: fourth derivatives unavailable".into());
                } else {
                    report.residuals.push(ResidualStat::from_values(
                        "density_identity_rel",
                        &ident,
                        Some(tol.density_identity_relative),
                    ));
                }
            } else {
                report.notes.push(
                    "potential is not harmonic; off-duality density compared with (3/8)(Δρ/ρ)²".into(),
                );
                report.residuals.push(ResidualStat::from_values(
                    "off_duality_vs_laplacian_rel",
                    &control,
                    Some(tol.control_relative),
                ));
            }
        }
        Domain::Hyperbolic(model) => {
            let (mut r1, mut r2, mut lap) = (vec![], vec![], vec![]);
            let mut draws = 0;
            while r1.len() < grid.points && draws < max_draws {
                draws += 1;
                let p = HyperPoint::disc(disc_point(&mut rng, grid)).to_model(model);
                let Ok((a, b)) = vortex_residuals(pot, p, kind) else {
                    skipped += 1;
                    continue;
                };
                r1.push(a);
                r2.push(b);
                lap.push(harmonic_residual_hyp(pot, p).map_err(Usage::from)?.abs());
            }
            let t = Some(tol.vortex_residual);
            report.residuals.push(ResidualStat::from_values("higgs_holomorphy", &r1, t));
            report.residuals.push(ResidualStat::from_values("curvature_equation", &r2, t));
            report.residuals.push(ResidualStat::from_values("hyperbolic_laplacian", &lap, None));
        }
    }
    if skipped > 0 {
        report
            .notes
            .push(format!("{skipped} sample points skipped (pole, branch cut or symmetry axis)"));
    }
    Ok(())
}

fn entry(name: &str, res: hypvortex::Result<QuadResult>, expected: Option<f64>, tolerance: f64) -> Result<QuadEntry, Usage> {
    let (value, error, converged) = match res {
        Ok(r) => (r.value, r.error, r.converged),
        Err(CoreError::QuadratureNotConverged { value, error }) => (value, error, false),
        Err(e) => return Err(e.into()),
    };
    Ok(QuadEntry {
        name: name.into(),
        value,
        error,
        converged,
        expected,
        tolerance: Some(tolerance),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Which {
    C1,
    C2,
}

#[allow(clippy::too_many_arguments)]
pub fn chern(
    label: &str,
    pot: &SuperPotential,
    which: Which,
    duality: Duality,
    model: Model,
    expected: Option<f64>,
    cfg: &QuadConfig,
    tol: &Tolerances,
    report: &mut RunReport,
) -> Result<ChernRow, Usage> {
    cfg.validate()?;
    let e = match which {
        Which::C1 => {
            let phi = match pot.domain() {
                Domain::R4 => reduce_potential(pot)?,
                Domain::Hyperbolic(_) => pot.clone(),
            };
            entry("c1", chern1(&phi, cfg, model), expected, tol.c1_absolute)?
        }
        Which::C2 => {
            let rho = lift_potential(pot);
            entry("c2", chern2(&rho, duality, cfg), expected, tol.c2_absolute)?
        }
    };
    let row = ChernRow {
        potential: label.to_string(),
        which: e.name.clone(),
        value: e.value,
        error: e.error,
        converged: e.converged,
        expected: e.expected,
        tolerance: e.tolerance.unwrap_or(f64::NAN),
    };
    report.quadrature.push(e);
    Ok(row)
}

pub fn sweep(
    cs: &[f64],
    radii: &[f64],
    loop_points: usize,
    cfg: &QuadConfig,
    tol: &Tolerances,
    report: &mut RunReport,
) -> Result<Vec<SweepRow>, Usage> {
    cfg.validate()?;
    if cs.is_empty() || radii.is_empty() {
        return Err(Usage("sweep needs at least one c and one radius".into()));
    }
    if let Some(c) = cs.iter().find(|c| **c == 0.0 || !c.is_finite()) {
        return Err(Usage(format!("c = {c} is excluded from the family")));
    }
    if let Some(r) = radii.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return Err(Usage(format!("radius {r} must lie in (0, 1)")));
    }
    let mut rows = Vec::new();
    for &c in cs {
        let phi = SuperPotential::disc_family(c, Complex64::new(1.0, 0.0), Cut::P2)?;
        let e = entry(&format!("c1(c={c})"), chern1(&phi, cfg, Model::Disc), Some(c - 1.0), tol.c1_absolute)?;
        let fam = MonodromyFamily::new(c)?;
        let lim = fam.eps;
        let mut hol_err = Vec::new();
        for &r in radii {
            let l = loop_connection_integral(&fam, r, loop_points)?;
            let hol = fam.eps * Complex64::from_polar(1.0, l.value);
            hol_err.push((r, (hol - lim).norm()));
            rows.push(SweepRow {
                c,
                r,
                loop_integral: l.value,
                re_hol: hol.re,
                im_hol: hol.im,
                alpha: holonomy_parameter(c),
                c1: e.value,
                c1_expected: c - 1.0,
                c1_error: e.error,
                converged: e.converged && l.converged,
                tolerance: tol.c1_absolute,
            });
        }
        hol_err.sort_by(|a, b| b.0.total_cmp(&a.0));
        let errs: Vec<f64> = hol_err.iter().map(|h| h.1).collect();
        report.residuals.push(ResidualStat::from_values(
            &format!("|hol - e^(2πic)| (c={c}, r={})", hol_err.last().map_or(0.0, |h| h.0)),
            &errs[errs.len() - 1..],
            None,
        ));
        if errs.windows(2).any(|w| w[1] > w[0]) {
            report.notes.push(format!("c = {c}: holonomy error not decreasing with r: {errs:?}"));
        }
        report.quadrature.push(e);
    }
    Ok(rows)
}
