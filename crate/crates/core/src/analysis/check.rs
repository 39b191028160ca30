use std::collections::BTreeMap;

use super::majorant::{abs_coeffs, check_radius, norm_coeffs, weighted_scalar_sum, weighted_sum};
use super::{
    boundary_distance_liminf, psi_peak, rotated_coeffs, rotated_real_part, spherical_distance, thm2_radius,
    thm3_radius, CheckOptions, ExteriorInstance, Instance, InstanceData, SubordinateInstance, TailBound, TheoremId,
    TheoremReport,
};
use crate::error::{Error, Result};
use crate::linalg::{abs_value, lambda_min_hermitian, operator_norm, Matrix};
use crate::series::{HarmonicSeries, HoloSeries};

/// Slack allowed when comparing `r` with a stated radius.
const RADIUS_SLACK: f64 = 1e-12;

pub const T4_RADIUS: f64 = 0.171_572_875_253_809_9; // 3 - 2 sqrt(2)

type Side = BTreeMap<String, f64>;

struct Outcome {
    margin: f64,
    scale: f64,
    side: Side,
}

fn loewner(lhs: &Matrix, rhs: &Matrix, mut side: Side) -> Result<Outcome> {
    let margin = lambda_min_hermitian(&(rhs - lhs).hermitian_part())?;
    let rhs_norm = operator_norm(rhs)?;
    side.insert("lhs_norm".into(), operator_norm(lhs)?);
    side.insert("rhs_norm".into(), rhs_norm);
    Ok(Outcome { margin, scale: rhs_norm.max(1.0), side })
}

fn scalar(lhs: f64, rhs: f64, mut side: Side) -> Outcome {
    side.insert("lhs".into(), lhs);
    side.insert("rhs".into(), rhs);
    Outcome { margin: rhs - lhs, scale: rhs.abs().max(1.0), side }
}

fn mismatch(id: TheoremId, inst: &Instance) -> Error {
    Error::Contract(format!("{id} cannot be checked on a {} instance", inst.data.kind()))
}

fn within(id: TheoremId, r: f64, limit: f64, opts: &CheckOptions) -> Result<()> {
    check_radius(r)?;
    if r > limit + RADIUS_SLACK && !opts.force {
        return Err(Error::Domain(format!("{id} is stated for r <= {limit}, got {r}")));
    }
    Ok(())
}

fn id_matrix_scaled(d: usize, x: f64) -> Matrix {
    Matrix::identity(d).scale_real(x)
}

/// Checks one inequality at one radius.
pub fn check_theorem(
    id: TheoremId,
    instance: &Instance,
    r: f64,
    mu: Option<f64>,
    opts: &CheckOptions,
) -> Result<TheoremReport> {
    Ok(check_theorem_radii(id, instance, &[r], mu, opts)?.remove(0))
}

/// Checks one inequality at several radii, sharing the `r`-independent work.
pub fn check_theorem_radii(
    id: TheoremId,
    instance: &Instance,
    rs: &[f64],
    mu: Option<f64>,
    opts: &CheckOptions,
) -> Result<Vec<TheoremReport>> {
    opts.tol.validate()?;
    if rs.is_empty() {
        return Err(Error::InvalidInput("no radii given".into()));
    }
    let outcomes = match (id, &instance.data) {
        (TheoremId::L1, InstanceData::Sequence(h)) => cauchy_schwarz_majorant(h, rs, opts)?,
        (TheoremId::T1i | TheoremId::T1ii | TheoremId::T1iii, InstanceData::Harmonic { series, tail }) => {
            harmonic(id, series, *tail, rs, mu.unwrap_or(0.0), opts)?
        }
        (TheoremId::E55, InstanceData::Holo { series, tail }) => e55(series, *tail, rs)?,
        (TheoremId::T2, InstanceData::Exterior(ext)) => exterior(ext, rs, opts)?,
        (TheoremId::E17, InstanceData::Triples(t)) => rs.iter().map(|_| triples(t)).collect::<Result<_>>()?,
        (
            TheoremId::T3a | TheoremId::T3b | TheoremId::L2a | TheoremId::L2b | TheoremId::T4a | TheoremId::T4b,
            InstanceData::Subordinate(s),
        ) => subordinate(id, s, rs, opts)?,
        _ => return Err(mismatch(id, instance)),
    };
    let mu_out = match id {
        TheoremId::T1i | TheoremId::T1ii => Some(mu.unwrap_or(0.0)),
        _ => mu,
    };
    Ok(rs
        .iter()
        .zip(outcomes)
        .map(|(&r, o)| TheoremReport {
            theorem_id: id,
            r,
            mu: mu_out,
            passed: o.margin >= -opts.tol.psd_tol * o.scale,
            margin: o.margin,
            scale: o.scale,
            witness: instance.witness.clone(),
            side_values: o.side,
        })
        .collect())
}

fn cauchy_schwarz_majorant(h: &[Matrix], rs: &[f64], opts: &CheckOptions) -> Result<Vec<Outcome>> {
    if h.is_empty() {
        return Err(Error::InvalidInput("empty sequence".into()));
    }
    let k = opts.lemma_k;
    let d = h[0].dim();
    let abs = abs_coeffs(h)?;
    let mut sq = Matrix::zeros(d, d);
    for m in h.iter().skip(k) {
        sq += &(m.adjoint() * m);
    }
    rs.iter()
        .map(|&r| {
            check_radius(r)?;
            let s = if k < h.len() { weighted_sum(&abs, r, k)? } else { Matrix::zeros(d, d) };
            let lhs = (&s * &s).hermitian_part();
            let rhs = sq.scale_real(r.powi(2 * k as i32) / (1.0 - r * r));
            let mut side = Side::new();
            side.insert("k".into(), k as f64);
            loewner(&lhs, &rhs, side)
        })
        .collect()
}

fn harmonic(
    id: TheoremId,
    h: &HarmonicSeries,
    tail: TailBound,
    rs: &[f64],
    mu: f64,
    opts: &CheckOptions,
) -> Result<Vec<Outcome>> {
    let d = h.dim();
    let n = h.order();
    match id {
        TheoremId::T1i | TheoremId::T1ii => {
            let p = rotated_coeffs(h, mu).padded(d);
            if opts.normal_variant {
                for (i, pn) in p.iter().enumerate().skip(1) {
                    let s = operator_norm(pn)?.max(1.0);
                    if pn.normality_defect() > opts.tol.eq_tol * s * s {
                        return Err(Error::Contract(format!("P_{i} is not normal")));
                    }
                }
            }
            let re_a0 = rotated_real_part(h, mu);
            if id == TheoremId::T1i {
                let t = abs_value(&re_a0)?;
                let abs_p = abs_coeffs(&p)?;
                let t_norm = operator_norm(&t)?;
                rs.iter()
                    .map(|&r| {
                        within(id, r, 1.0, opts)?;
                        let pen = tail.tail(r, n);
                        let lhs = &(&t + &weighted_sum(&abs_p, r, 1)?) + &id_matrix_scaled(d, pen);
                        let bound = if opts.normal_variant {
                            ((1.0 + r * r) / (1.0 - r * r)).sqrt()
                        } else {
                            psi_peak(r)?.1
                        };
                        let (x0, peak) = psi_peak(r)?;
                        let mut side = Side::new();
                        side.insert("x0".into(), x0);
                        side.insert("psi_peak".into(), peak);
                        side.insert("bound".into(), bound);
                        side.insert("t_norm".into(), t_norm);
                        side.insert("tail".into(), pen);
                        loewner(&lhs, &id_matrix_scaled(d, bound), side)
                    })
                    .collect()
            } else {
                let limit = if opts.normal_variant { 1.0 / 3.0 } else { 0.2 };
                let rhs = operator_norm(&(&Matrix::identity(d) - &re_a0))?;
                let norms = norm_coeffs(&p)?;
                rs.iter()
                    .map(|&r| {
                        within(id, r, limit, opts)?;
                        let pen = tail.tail(r, n);
                        let mut side = Side::new();
                        side.insert("tail".into(), pen);
                        Ok(scalar(weighted_scalar_sum(&norms, r, 1) + pen, rhs, side))
                    })
                    .collect()
            }
        }
        _ => {
            let abs_a = abs_coeffs(h.analytic())?;
            let mut abs_sum: Vec<Matrix> = Vec::with_capacity(n + 1);
            abs_sum.push(Matrix::zeros(d, d));
            for (k, a) in abs_a.iter().enumerate().skip(1) {
                abs_sum.push(a + &abs_value(&h.b(k).adjoint())?);
            }
            rs.iter()
                .map(|&r| {
                    within(id, r, 1.0 / 3.0, opts)?;
                    let pen = tail.tail(r, n);
                    let lhs = &weighted_sum(&abs_sum, r, 1)? + &id_matrix_scaled(d, pen);
                    let mut side = Side::new();
                    side.insert("tail".into(), pen);
                    loewner(&lhs, &id_matrix_scaled(d, 0.5), side)
                })
                .collect()
        }
    }
}

fn e55(f: &HoloSeries, tail: TailBound, rs: &[f64]) -> Result<Vec<Outcome>> {
    let d = f.dim();
    let abs = abs_coeffs(f.coeffs())?;
    rs.iter()
        .map(|&r| {
            check_radius(r)?;
            let pen = tail.tail(r, f.order());
            let lhs = &weighted_sum(&abs, r, 0)? + &id_matrix_scaled(d, pen);
            let mut side = Side::new();
            side.insert("tail".into(), pen);
            loewner(&lhs, &id_matrix_scaled(d, 1.0 / (1.0 - r * r).sqrt()), side)
        })
        .collect()
}

/// Normal instances are judged on the spherical-distance inequality and both
/// majorant bounds; others on the majorant bounds only. The reported margin is
/// the smallest of the component margins, each divided by `max(1, rhs)`.
fn exterior(ext: &ExteriorInstance, rs: &[f64], opts: &CheckOptions) -> Result<Vec<Outcome>> {
    let f = &ext.series;
    let a0 = &f.coeffs()[0];
    let radius = thm2_radius(a0, &opts.tol)?;
    let gamma = operator_norm(a0)?;
    let norms = norm_coeffs(f.coeffs())?;
    rs.iter()
        .map(|&r| {
            within(TheoremId::T2, r, radius.radius, opts)?;
            let pen = ext.tail.tail(r, f.order());
            let alpha = weighted_scalar_sum(&norms, r, 0) + pen;
            let lam_lhs = spherical_distance(alpha, gamma);
            let lam_rhs = spherical_distance(gamma, 1.0);
            let b15 = (ext.log_norm * (1.0 + r) / (1.0 - r)).exp();
            let b16 = gamma * gamma;
            let m15 = (b15 - alpha) / b15.max(1.0);
            let m16 = (b16 - alpha) / b16.max(1.0);
            let m_lam = lam_rhs - lam_lhs;
            let margin = if ext.normal { m_lam.min(m15).min(m16) } else { m15.min(m16) };
            let mut side = Side::new();
            side.insert("alpha".into(), alpha);
            side.insert("lambda_lhs".into(), lam_lhs);
            side.insert("lambda_rhs".into(), lam_rhs);
            side.insert("bound_exp".into(), b15);
            side.insert("bound_sq".into(), b16);
            side.insert("l".into(), radius.l);
            side.insert("radius".into(), radius.radius);
            side.insert("tail".into(), pen);
            side.insert("normal".into(), if ext.normal { 1.0 } else { 0.0 });
            Ok(Outcome { margin, scale: 1.0, side })
        })
        .collect()
}

fn triples(t: &[[f64; 3]]) -> Result<Outcome> {
    let mut worst = f64::INFINITY;
    for &[alpha, beta, gamma] in t {
        if !(0.0 <= gamma && gamma <= alpha && alpha <= beta) {
            return Err(Error::Contract(format!("triple ({alpha}, {beta}, {gamma}) is not ordered")));
        }
        worst = worst.min(spherical_distance(beta, gamma) - spherical_distance(alpha, gamma));
    }
    let mut side = Side::new();
    side.insert("count".into(), t.len() as f64);
    Ok(Outcome { margin: worst, scale: 1.0, side })
}

fn subordinate(id: TheoremId, s: &SubordinateInstance, rs: &[f64], opts: &CheckOptions) -> Result<Vec<Outcome>> {
    let f = &s.f;
    let g = &s.g;
    let d = f.dim();
    let n = g.order();
    if f.order() < 1 {
        return Err(Error::Contract("f needs a linear coefficient".into()));
    }
    let a1 = &f.coeffs()[1];
    let limit = match id {
        TheoremId::T3a => thm3_radius(a1)?,
        TheoremId::T4a | TheoremId::T4b => T4_RADIUS,
        _ => 1.0 / 3.0,
    };
    if matches!(id, TheoremId::T4a | TheoremId::T4b) {
        let off = operator_norm(&f.coeffs()[0])?.max(operator_norm(&(a1 - &Matrix::identity(d)))?);
        if off > opts.tol.eq_tol {
            return Err(Error::Contract(format!("f is not normalized (defect {off:.3e})")));
        }
    }
    let liminf = match id {
        TheoremId::T3a | TheoremId::T4a => {
            let b = s.boundary.as_ref().ok_or_else(|| Error::Contract("closed form of f required".into()))?;
            let base = if id == TheoremId::T3a { f.coeffs()[0].clone() } else { Matrix::zeros(d, d) };
            Some(boundary_distance_liminf(b.as_ref(), &base, opts.liminf_grid)?.estimate)
        }
        _ => None,
    };
    let loewner_lhs = matches!(id, TheoremId::T3b | TheoremId::L2a | TheoremId::T4b);
    let abs_b = if loewner_lhs { abs_coeffs(g.coeffs())? } else { Vec::new() };
    let norms_b = norm_coeffs(g.coeffs())?;
    let norms_a = norm_coeffs(f.coeffs())?;
    let rhs_t3b = if id == TheoremId::T3b { abs_value(a1)?.scale_real(0.5) } else { Matrix::zeros(d, d) };
    rs.iter()
        .map(|&r| {
            within(id, r, limit, opts)?;
            let pen = s.g_tail.tail(r, n);
            let mut side = Side::new();
            side.insert("tail".into(), pen);
            side.insert("radius".into(), limit);
            if let Some(l) = liminf {
                side.insert("liminf".into(), l);
            }
            if loewner_lhs {
                let lhs = &weighted_sum(&abs_b, r, 1)? + &id_matrix_scaled(d, pen);
                let rhs = match id {
                    TheoremId::T3b => rhs_t3b.clone(),
                    TheoremId::L2a => id_matrix_scaled(d, weighted_scalar_sum(&norms_a, r, 1)),
                    _ => id_matrix_scaled(d, 0.25),
                };
                loewner(&lhs, &rhs, side)
            } else {
                let lhs = weighted_scalar_sum(&norms_b, r, 1) + pen;
                let rhs = match id {
                    TheoremId::L2b => weighted_scalar_sum(&norms_a, r, 1),
                    _ => liminf.expect("set above"),
                };
                Ok(scalar(lhs, rhs, side))
            }
        })
        .collect()
}
