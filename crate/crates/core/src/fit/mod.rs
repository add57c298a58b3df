//! Multinomial maximum-likelihood fitting of the model families to binned
//! counts, Hellinger scoring, mean prediction, and the 3D parameter
//! embedding.
//!
//! A fit maximizes `L(params) = sum_t h[t] * ln f[t; params]` where `f` is
//! the discretized model over the histogram's observed bin range
//! `0..=K`. The search runs Nelder-Mead in log-parameter space (the
//! LogNormal location stays linear) from several deterministic starts:
//! method-of-moments and regression initializers for the two-parameter
//! families, and for the generalized Gamma a coarse profile grid over
//! `beta` plus the fitted Gamma and Weibull optima mapped into the family.
//! Seeding from the fitted submodels means the generalized-Gamma
//! log-likelihood can never fall below theirs. Everything here is pure and
//! deterministic: the same histogram always produces the same `FitResult`.

pub mod simplex;

use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dist::{ModelFamily, ModelParams};
use simplex::{minimize, SimplexOptions};

/// Masses below this floor are clamped before taking logs so empty model
/// bins yield a huge but finite penalty instead of `-inf`.
const MASS_FLOOR: f64 = 1e-300;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("{family} needs at least {needed} nonempty bins, histogram has {got}")]
    Underdetermined { family: ModelFamily, needed: usize, got: usize },
    #[error("histogram has no mass")]
    EmptyHistogram,
    #[error("negative mass {0} in input")]
    NegativeMass(f64),
    #[error("non-finite count {0} in input")]
    NonFiniteCount(f64),
    #[error("length mismatch: {left} vs {right} bins")]
    LengthMismatch { left: usize, right: usize },
    #[error("embedding requires generalized-Gamma fits, `{name}` is {family}")]
    NotGenGamma { name: String, family: ModelFamily },
}

/// Hellinger distance `H = 1/2 sqrt( sum_t (sqrt h[t] - sqrt f[t])^2 )`
/// between two mass vectors over a common bin range.
///
/// Both inputs are normalized internally, so raw counts are fine. The
/// distance is symmetric and bounded by `1/sqrt(2)`, attained exactly on
/// disjoint supports.
pub fn hellinger(h: &[f64], f: &[f64]) -> Result<f64, FitError> {
    if h.len() != f.len() {
        return Err(FitError::LengthMismatch { left: h.len(), right: f.len() });
    }
    let total = |v: &[f64]| -> Result<f64, FitError> {
        let mut sum = 0.0;
        for &x in v {
            if !x.is_finite() {
                return Err(FitError::NonFiniteCount(x));
            }
            if x < 0.0 {
                return Err(FitError::NegativeMass(x));
            }
            sum += x;
        }
        if sum <= 0.0 {
            return Err(FitError::EmptyHistogram);
        }
        Ok(sum)
    };
    let (th, tf) = (total(h)?, total(f)?);
    let sum_sq: f64 = h
        .iter()
        .zip(f)
        .map(|(&a, &b)| {
            let d = (a / th).sqrt() - (b / tf).sqrt();
            d * d
        })
        .sum();
    Ok(0.5 * sum_sq.sqrt())
}

/// Outcome of fitting one family to one histogram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub family: ModelFamily,
    pub params: ModelParams,
    pub log_likelihood: f64,
    pub hellinger: f64,
    pub iterations: usize,
    pub converged: bool,
    #[serde(rename = "K")]
    pub k_max: usize,
}

/// Fits `family` to counts indexed by integer bin (`counts[t]` observed at
/// distance/time `t`, starting at 0). Identifiability requires at least
/// one more nonempty bin than free parameters. Optimizer non-convergence
/// is not an error: the best parameters found are returned with
/// `converged = false`.
pub fn fit(counts: &[f64], family: ModelFamily) -> Result<FitResult, FitError> {
    let total = validate_counts(counts)?;
    let nonzero = counts.iter().filter(|&&c| c > 0.0).count();
    let needed = family.n_params() + 1;
    if nonzero < needed {
        return Err(FitError::Underdetermined { family, needed, got: nonzero });
    }
    let probs: Vec<f64> = counts.iter().map(|&c| c / total).collect();
    let k_max = counts.len() - 1;

    let starts = match family {
        ModelFamily::Gamma => gamma_starts(&probs),
        ModelFamily::Weibull => weibull_starts(&probs),
        ModelFamily::LogNormal => log_normal_starts(&probs),
        ModelFamily::GenGamma => gen_gamma_starts(counts, &probs),
    };

    let opts = SimplexOptions::default();
    let mut winner: Option<simplex::SimplexOutcome> = None;
    for start in &starts {
        let outcome = minimize(
            |x| neg_log_likelihood(&probs, &params_from_log(family, x)),
            &params_to_log(start),
            &opts,
        );
        let better = match &winner {
            None => true,
            Some(best) => outcome.fx < best.fx,
        };
        if better {
            winner = Some(outcome);
        }
    }
    let winner = winner.expect("at least one start");
    let params = params_from_log(family, &winner.x);
    let masses = params.discretize(k_max);
    let log_likelihood: f64 = counts
        .iter()
        .zip(masses.masses())
        .filter(|(&c, _)| c > 0.0)
        .map(|(&c, &m)| c * m.max(MASS_FLOOR).ln())
        .sum();
    let hell = hellinger(&probs, masses.masses()).expect("aligned normalized inputs");
    Ok(FitResult {
        family,
        params,
        log_likelihood,
        hellinger: hell,
        iterations: winner.iterations,
        converged: winner.converged,
        k_max,
    })
}

/// All four families fitted to the same histogram, plus the winner by
/// Hellinger distance (exact ties go to the family with fewer
/// parameters). Per-family failures never abort the other families.
#[derive(Debug, Clone)]
pub struct FamilyFits {
    pub fits: Vec<(ModelFamily, Result<FitResult, FitError>)>,
    pub best: Option<ModelFamily>,
}

pub fn fit_all(counts: &[f64]) -> FamilyFits {
    let fits: Vec<(ModelFamily, Result<FitResult, FitError>)> = ModelFamily::ALL
        .iter()
        .map(|&family| (family, fit(counts, family)))
        .collect();
    let mut best: Option<(ModelFamily, f64, usize)> = None;
    for (family, result) in &fits {
        if let Ok(r) = result {
            let candidate = (*family, r.hellinger, family.n_params());
            best = match best {
                None => Some(candidate),
                Some(cur) => {
                    if candidate.1 < cur.1 || (candidate.1 == cur.1 && candidate.2 < cur.2) {
                        Some(candidate)
                    } else {
                        Some(cur)
                    }
                }
            };
        }
    }
    FamilyFits { fits, best: best.map(|(f, _, _)| f) }
}

impl FamilyFits {
    pub fn get(&self, family: ModelFamily) -> Option<&FitResult> {
        self.fits
            .iter()
            .find(|(f, _)| *f == family)
            .and_then(|(_, r)| r.as_ref().ok())
    }
}

/// Model mean for a fitted result; `flagged` marks estimates from fits
/// that stopped on the iteration budget rather than the tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanPrediction {
    pub mean: f64,
    pub flagged: bool,
}

pub fn predict_mean(result: &FitResult) -> MeanPrediction {
    MeanPrediction { mean: result.params.mean(), flagged: !result.converged }
}

/// One network's coordinates in the (sigma, alpha, beta) embedding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingPoint {
    pub name: String,
    pub sigma: f64,
    pub alpha: f64,
    pub beta: f64,
    pub hellinger: f64,
}

/// Projects named generalized-Gamma fits to embedding points,
/// order-preserving. Any non-GenGamma fit is an error.
pub fn embed(fits: &[(String, FitResult)]) -> Result<Vec<EmbeddingPoint>, FitError> {
    fits.iter()
        .map(|(name, r)| match r.params {
            ModelParams::GenGamma { sigma, alpha, beta } => Ok(EmbeddingPoint {
                name: name.clone(),
                sigma,
                alpha,
                beta,
                hellinger: r.hellinger,
            }),
            _ => Err(FitError::NotGenGamma { name: name.clone(), family: r.family }),
        })
        .collect()
}

pub fn write_embedding_csv<W: Write>(points: &[EmbeddingPoint], mut w: W) -> io::Result<()> {
    writeln!(w, "name,sigma,alpha,beta,hellinger")?;
    for p in points {
        writeln!(w, "{},{},{},{},{}", p.name, p.sigma, p.alpha, p.beta, p.hellinger)?;
    }
    Ok(())
}

fn validate_counts(counts: &[f64]) -> Result<f64, FitError> {
    let mut total = 0.0;
    for &c in counts {
        if !c.is_finite() {
            return Err(FitError::NonFiniteCount(c));
        }
        if c < 0.0 {
            return Err(FitError::NegativeMass(c));
        }
        total += c;
    }
    if total <= 0.0 {
        return Err(FitError::EmptyHistogram);
    }
    Ok(total)
}

fn neg_log_likelihood(probs: &[f64], params: &ModelParams) -> f64 {
    let masses = params.discretize(probs.len() - 1);
    -probs
        .iter()
        .zip(masses.masses())
        .filter(|(&p, _)| p > 0.0)
        .map(|(&p, &m)| p * m.max(MASS_FLOOR).ln())
        .sum::<f64>()
}

/// Log-space coordinates keep the positive parameters unconstrained for
/// the simplex; the LogNormal location is already unconstrained and stays
/// linear. Coordinates are clamped to +-40 (e^40 ~ 2.4e17) so wandering
/// probes cannot overflow the special functions.
fn params_to_log(p: &ModelParams) -> Vec<f64> {
    match *p {
        ModelParams::Gamma { theta, eta } => vec![theta.ln(), eta.ln()],
        ModelParams::Weibull { lambda, kappa } => vec![lambda.ln(), kappa.ln()],
        ModelParams::LogNormal { mu, xi } => vec![mu, xi.ln()],
        ModelParams::GenGamma { sigma, alpha, beta } => {
            vec![sigma.ln(), alpha.ln(), beta.ln()]
        }
    }
}

fn params_from_log(family: ModelFamily, x: &[f64]) -> ModelParams {
    let e = |v: f64| v.clamp(-40.0, 40.0).exp();
    match family {
        ModelFamily::Gamma => ModelParams::Gamma { theta: e(x[0]), eta: e(x[1]) },
        ModelFamily::Weibull => ModelParams::Weibull { lambda: e(x[0]), kappa: e(x[1]) },
        ModelFamily::LogNormal => {
            ModelParams::LogNormal { mu: x[0].clamp(-1e6, 1e6), xi: e(x[1]) }
        }
        ModelFamily::GenGamma => {
            ModelParams::GenGamma { sigma: e(x[0]), alpha: e(x[1]), beta: e(x[2]) }
        }
    }
}

/// Mean and variance of `transform(t)` under normalized bin weights.
fn weighted_moments(probs: &[f64], transform: impl Fn(f64) -> f64) -> (f64, f64) {
    let mean: f64 = probs
        .iter()
        .enumerate()
        .map(|(t, &p)| p * transform(t as f64))
        .sum();
    let var: f64 = probs
        .iter()
        .enumerate()
        .map(|(t, &p)| {
            let d = transform(t as f64) - mean;
            p * d * d
        })
        .sum();
    (mean, var)
}

fn gamma_starts(probs: &[f64]) -> Vec<ModelParams> {
    let (m, v) = weighted_moments(probs, |t| t);
    let m = m.max(1e-3);
    let v = v.max(1e-3);
    let moment = ModelParams::Gamma {
        theta: (v / m).clamp(1e-6, 1e9),
        eta: (m * m / v).clamp(1e-3, 1e6),
    };
    vec![moment, ModelParams::Gamma { theta: m, eta: 1.0 }]
}

fn weibull_starts(probs: &[f64]) -> Vec<ModelParams> {
    let (m, _) = weighted_moments(probs, |t| t);
    let m = m.max(1e-3);
    let fallback = ModelParams::Weibull { lambda: m, kappa: 1.0 };
    // Regression on ln(-ln(1 - F)) against ln t over interior bins.
    let mut cum = probs[0];
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for (t, &p) in probs.iter().enumerate().skip(1) {
        cum += p;
        if cum > 1e-9 && cum < 1.0 - 1e-9 {
            pts.push(((t as f64).ln(), (-(1.0 - cum).ln()).ln()));
        }
    }
    if pts.len() < 2 {
        return vec![fallback];
    }
    let (slope, intercept) = least_squares(&pts);
    let kappa = slope.clamp(0.05, 50.0);
    let lambda = (-intercept / kappa).exp().clamp(1e-6, 1e9);
    vec![ModelParams::Weibull { lambda, kappa }, fallback]
}

fn log_normal_starts(probs: &[f64]) -> Vec<ModelParams> {
    let (m, _) = weighted_moments(probs, |t| t);
    let fallback = ModelParams::LogNormal { mu: m.max(1e-3).ln(), xi: 1.0 };
    let positive: f64 = probs.iter().skip(1).sum();
    if positive <= 0.0 {
        return vec![fallback];
    }
    let mu: f64 = probs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(t, &p)| p / positive * (t as f64).ln())
        .sum();
    let var: f64 = probs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(t, &p)| {
            let d = (t as f64).ln() - mu;
            p / positive * d * d
        })
        .sum();
    let xi = var.sqrt().max(1e-2);
    vec![ModelParams::LogNormal { mu, xi }, fallback]
}

/// Profile grid over beta: for fixed beta, `t^beta` is Gamma distributed,
/// so moment matching in the transformed variable gives (sigma, alpha).
fn gen_gamma_starts(counts: &[f64], probs: &[f64]) -> Vec<ModelParams> {
    const BETA_GRID: [f64; 6] = [0.25, 0.5, 1.0, 1.5, 2.0, 3.0];
    let mut best: Option<(f64, ModelParams)> = None;
    for &beta in &BETA_GRID {
        let (mu_u, var_u) = weighted_moments(probs, |t| t.powf(beta));
        let mu_u = mu_u.max(1e-6);
        let var_u = var_u.max(1e-6);
        let shape_u = (mu_u * mu_u / var_u).clamp(1e-3, 1e6);
        let scale_u = (var_u / mu_u).clamp(1e-9, 1e12);
        let candidate = ModelParams::GenGamma {
            sigma: scale_u.powf(1.0 / beta).clamp(1e-6, 1e9),
            alpha: (beta * shape_u).clamp(1e-2, 1e4),
            beta,
        };
        let score = neg_log_likelihood(probs, &candidate);
        if best.as_ref().is_none_or(|(s, _)| score < *s) {
            best = Some((score, candidate));
        }
    }
    let mut starts = vec![best.expect("nonempty grid").1];
    // Submodel optima mapped into the family: the simplex only ever
    // improves on its best start, so the fitted generalized Gamma cannot
    // score below the fitted Gamma or Weibull.
    if let Ok(g) = fit(counts, ModelFamily::Gamma) {
        if let ModelParams::Gamma { theta, eta } = g.params {
            starts.push(ModelParams::GenGamma { sigma: theta, alpha: eta, beta: 1.0 });
        }
    }
    if let Ok(w) = fit(counts, ModelFamily::Weibull) {
        if let ModelParams::Weibull { lambda, kappa } = w.params {
            starts.push(ModelParams::GenGamma { sigma: lambda, alpha: kappa, beta: kappa });
        }
    }
    starts
}

fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return (1.0, 0.0);
    }
    let slope = (n * sxy - sx * sy) / denom;
    (slope, (sy - slope * sx) / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn synthetic_counts(params: &ModelParams, k_max: usize, total: f64) -> Vec<f64> {
        params
            .discretize(k_max)
            .masses()
            .iter()
            .map(|&m| m * total)
            .collect()
    }

    /// Same, but rounded to whole counts like a real histogram.
    fn synthetic_integer_counts(params: &ModelParams, k_max: usize, total: f64) -> Vec<f64> {
        synthetic_counts(params, k_max, total)
            .into_iter()
            .map(f64::round)
            .collect()
    }

    #[test]
    fn hellinger_identical_is_zero() {
        let h = [0.25, 0.5, 0.25];
        assert_eq!(hellinger(&h, &h).unwrap(), 0.0);
    }

    #[test]
    fn hellinger_disjoint_supports_hit_the_bound() {
        let h = [1.0, 0.0];
        let f = [0.0, 1.0];
        assert!((hellinger(&h, &f).unwrap() - FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn hellinger_two_bin_hand_value() {
        let got = hellinger(&[1.0, 0.0], &[0.5, 0.5]).unwrap();
        assert!((got - 0.38268).abs() < 1e-5, "{got}");
    }

    #[test]
    fn hellinger_normalizes_and_is_symmetric() {
        let h = [2.0, 6.0, 2.0];
        let f = [1.0, 1.0, 2.0];
        let a = hellinger(&h, &f).unwrap();
        let b = hellinger(&f, &h).unwrap();
        assert_eq!(a, b);
        let scaled: Vec<f64> = h.iter().map(|&x| x * 1000.0).collect();
        assert_eq!(hellinger(&scaled, &f).unwrap(), a);
    }

    #[test]
    fn hellinger_rejects_bad_input() {
        assert!(matches!(
            hellinger(&[1.0], &[0.5, 0.5]),
            Err(FitError::LengthMismatch { .. })
        ));
        assert!(matches!(hellinger(&[-1.0, 2.0], &[0.5, 0.5]), Err(FitError::NegativeMass(_))));
        assert!(matches!(hellinger(&[0.0, 0.0], &[0.5, 0.5]), Err(FitError::EmptyHistogram)));
    }

    #[test]
    fn recovers_gen_gamma_from_its_own_discretization() {
        let truth = ModelParams::gen_gamma(5.0, 4.0, 2.0).unwrap();
        let counts = synthetic_counts(&truth, 30, 1e6);
        let fitted = fit(&counts, ModelFamily::GenGamma).unwrap();
        let ModelParams::GenGamma { sigma, alpha, beta } = fitted.params else {
            panic!("wrong family")
        };
        assert!((sigma - 5.0).abs() / 5.0 < 1e-3, "sigma {sigma}");
        assert!((alpha - 4.0).abs() / 4.0 < 1e-3, "alpha {alpha}");
        assert!((beta - 2.0).abs() / 2.0 < 1e-3, "beta {beta}");
        assert!(fitted.hellinger < 1e-6, "H = {}", fitted.hellinger);
        assert!(fitted.converged);
    }

    #[test]
    fn underdetermined_histograms_are_rejected() {
        // two nonempty bins: too few for any family
        let counts = [0.0, 10.0, 5.0];
        assert!(matches!(
            fit(&counts, ModelFamily::GenGamma),
            Err(FitError::Underdetermined { needed: 4, got: 2, .. })
        ));
        assert!(matches!(
            fit(&counts, ModelFamily::Gamma),
            Err(FitError::Underdetermined { needed: 3, got: 2, .. })
        ));
        // three nonempty: enough for 2-parameter families, not for GG
        let counts = [0.0, 10.0, 5.0, 2.0];
        assert!(fit(&counts, ModelFamily::Gamma).is_ok());
        assert!(fit(&counts, ModelFamily::GenGamma).is_err());
        assert!(matches!(fit(&[0.0, 0.0], ModelFamily::Gamma), Err(FitError::EmptyHistogram)));
    }

    #[test]
    fn fitted_likelihood_dominates_the_truth() {
        let truth = ModelParams::gen_gamma(5.0, 4.0, 2.0).unwrap();
        let counts = synthetic_counts(&truth, 30, 1e5);
        let fitted = fit(&counts, ModelFamily::GenGamma).unwrap();
        let truth_ll: f64 = counts
            .iter()
            .zip(truth.discretize(30).masses())
            .filter(|(&c, _)| c > 0.0)
            .map(|(&c, &m)| c * m.max(1e-300).ln())
            .sum();
        assert!(fitted.log_likelihood >= truth_ll - 1e-6);
    }

    #[test]
    fn gen_gamma_nests_gamma_and_weibull() {
        // A histogram that is none of the families exactly.
        let counts = [0.0, 120.0, 400.0, 310.0, 90.0, 40.0, 20.0, 12.0];
        let all = fit_all(&counts);
        let gg = all.get(ModelFamily::GenGamma).unwrap().log_likelihood;
        let ga = all.get(ModelFamily::Gamma).unwrap().log_likelihood;
        let wb = all.get(ModelFamily::Weibull).unwrap().log_likelihood;
        assert!(gg >= ga.max(wb) - 1e-6, "gg {gg} ga {ga} wb {wb}");
    }

    #[test]
    fn exponential_data_ties_the_nested_families() {
        let truth = ModelParams::gen_gamma(1.0, 1.0, 1.0).unwrap();
        let counts = synthetic_counts(&truth, 20, 1e5);
        let all = fit_all(&counts);
        let gg = all.get(ModelFamily::GenGamma).unwrap().hellinger;
        let ga = all.get(ModelFamily::Gamma).unwrap().hellinger;
        let wb = all.get(ModelFamily::Weibull).unwrap().hellinger;
        assert!((ga - gg).abs() < 1e-6, "gamma {ga} vs gg {gg}");
        assert!((wb - gg).abs() < 1e-6, "weibull {wb} vs gg {gg}");
        assert!(all.best.is_some());
    }

    #[test]
    fn best_family_is_self_consistent() {
        let truth = ModelParams::gen_gamma(4.0, 3.0, 1.8).unwrap();
        let counts = synthetic_counts(&truth, 25, 1e6);
        let all = fit_all(&counts);
        assert_eq!(all.best, Some(ModelFamily::GenGamma));
    }

    #[test]
    fn scaling_counts_leaves_parameters_unchanged() {
        // Integer counts: scaling them is exact in f64, the normalized
        // proportions come out bit-identical, and so does the whole fit.
        let truth = ModelParams::gen_gamma(5.0, 4.0, 2.0).unwrap();
        let counts = synthetic_integer_counts(&truth, 20, 2e4);
        let scaled: Vec<f64> = counts.iter().map(|&c| c * 3.0).collect();
        for family in ModelFamily::ALL {
            let a = fit(&counts, family).unwrap();
            let b = fit(&scaled, family).unwrap();
            let (pa, pb) = (params_to_log(&a.params), params_to_log(&b.params));
            for (x, y) in pa.iter().zip(&pb) {
                assert!((x - y).abs() < 1e-9, "{family}: {pa:?} vs {pb:?}");
            }
        }
    }

    #[test]
    fn fits_are_bitwise_deterministic() {
        let counts = [0.0, 50.0, 180.0, 260.0, 150.0, 60.0, 14.0];
        for family in ModelFamily::ALL {
            let a = fit(&counts, family).unwrap();
            let b = fit(&counts, family).unwrap();
            assert_eq!(a, b, "{family}");
        }
    }

    #[test]
    fn hellinger_of_fits_is_within_bounds() {
        let counts = [0.0, 5.0, 80.0, 30.0, 11.0, 2.0];
        for family in ModelFamily::ALL {
            let r = fit(&counts, family).unwrap();
            assert!(r.hellinger >= 0.0);
            assert!(r.hellinger <= FRAC_1_SQRT_2 + 1e-12);
        }
    }

    #[test]
    fn predicted_mean_matches_wide_exponential_data() {
        // Wide exponential so integer binning does not bias the mean.
        let truth = ModelParams::gen_gamma(20.0, 1.0, 1.0).unwrap();
        let counts = synthetic_counts(&truth, 400, 1e6);
        let total: f64 = counts.iter().sum();
        let empirical: f64 = counts
            .iter()
            .enumerate()
            .map(|(t, &c)| t as f64 * c)
            .sum::<f64>()
            / total;
        let fitted = fit(&counts, ModelFamily::GenGamma).unwrap();
        let predicted = predict_mean(&fitted);
        assert!(!predicted.flagged);
        assert!(
            (predicted.mean - empirical).abs() / empirical < 1e-3,
            "predicted {} empirical {}",
            predicted.mean,
            empirical
        );
    }

    #[test]
    fn embed_projects_and_validates() {
        let truth = ModelParams::gen_gamma(5.0, 4.0, 2.0).unwrap();
        let counts = synthetic_counts(&truth, 30, 1e5);
        let gg = fit(&counts, ModelFamily::GenGamma).unwrap();
        let ga = fit(&counts, ModelFamily::Gamma).unwrap();

        let points = embed(&[("net-a".into(), gg.clone()), ("net-b".into(), gg.clone())]).unwrap();
        assert_eq!(points.len(), 2);
        assert_eq!(points[0].name, "net-a");
        let ModelParams::GenGamma { sigma, .. } = gg.params else { unreachable!() };
        assert_eq!(points[1].sigma, sigma);

        assert!(matches!(
            embed(&[("bad".into(), ga)]),
            Err(FitError::NotGenGamma { .. })
        ));
    }

    #[test]
    fn embedding_csv_shape() {
        let p = EmbeddingPoint {
            name: "n1".into(),
            sigma: 5.0,
            alpha: 4.0,
            beta: 2.0,
            hellinger: 0.01,
        };
        let mut buf = Vec::new();
        write_embedding_csv(&[p], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "name,sigma,alpha,beta,hellinger\nn1,5,4,2,0.01\n"
        );
    }

    #[test]
    fn fit_result_serializes_with_bin_key() {
        let truth = ModelParams::gen_gamma(5.0, 4.0, 2.0).unwrap();
        let counts = synthetic_counts(&truth, 12, 1e4);
        let r = fit(&counts, ModelFamily::Weibull).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains(r#""K":12"#), "{json}");
        assert!(json.contains(r#""family":"weibull""#));
        let back: FitResult = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
