use serde::{Deserialize, Serialize};

use super::{
    build_design_matrix, estimate_derivatives, solve_nnls, LearnError, LearningConfig,
    SeriesData,
};
use crate::ode::{integrate, compare, OdeProblem, SolverConfig};
use crate::reactions::ReactionSystem;

/// A sparse subset of a reaction library with fitted non-negative rates.
#[derive(Debug, Clone)]
pub struct LearnedModel {
    /// The full library with fitted rates written in (pruned entries zeroed).
    pub system: ReactionSystem,
    /// Fitted rate per library reaction, pruned entries zeroed.
    pub rates: Vec<f64>,
    /// Library indices with a rate above the (relative) prune threshold.
    pub support: Vec<usize>,
    /// `‖A·K − b‖₂` of the NNLS solution before pruning.
    pub residual: f64,
    pub config: LearningConfig,
}

impl LearnedModel {
    /// The learned model as a reaction system containing only the supported
    /// reactions.
    pub fn support_system(&self) -> ReactionSystem {
        self.system
            .subsystem(&self.support)
            .expect("support indices come from the library")
    }
}

/// Reaction set shared by a family of scenario fits: the union of their
/// supports over one library.
#[derive(Debug, Clone)]
pub struct UnionModel {
    pub library: ReactionSystem,
    /// Sorted library indices in the union.
    pub support: Vec<usize>,
}

impl UnionModel {
    /// The union reactions as a system with the given rates (aligned with
    /// `support`).
    pub fn system_with_rates(&self, rates: &[f64]) -> Result<ReactionSystem, LearnError> {
        let sub = self.library.subsystem(&self.support)?;
        Ok(sub.with_rates(rates)?)
    }

    pub fn reaction_labels(&self) -> Vec<String> {
        self.support.iter().map(|&i| self.library.reaction_label(i)).collect()
    }
}

/// Rates obtained by refitting a union model on one scenario's data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RefitModel {
    /// One rate per union reaction, aligned with the union's support order.
    pub rates: Vec<f64>,
    pub residual: f64,
}

/// Full learning pipeline for one series: subsample, estimate derivatives,
/// assemble the design matrix, solve NNLS, prune.
pub fn learn_model(
    library: &ReactionSystem,
    series: &SeriesData,
    config: &LearningConfig,
) -> Result<LearnedModel, LearnError> {
    let sub = series.subsample(config.stride)?;
    let derivatives = estimate_derivatives(&sub, config.derivative, config.kalman_noise_ratio)?;
    let dm = build_design_matrix(library, &sub, &derivatives)?;
    let sol = solve_nnls(&dm.matrix, &dm.target)?;

    let mut rates: Vec<f64> = sol.coefficients.iter().copied().collect();
    let max_rate = rates.iter().copied().fold(0.0_f64, f64::max);
    let cutoff = config.prune_threshold * max_rate;
    let mut support = Vec::new();
    for (i, k) in rates.iter_mut().enumerate() {
        if *k > cutoff && *k > 0.0 {
            support.push(i);
        } else {
            *k = 0.0;
        }
    }
    let system = library.with_rates(&rates)?;
    Ok(LearnedModel { system, rates, support, residual: sol.residual, config: *config })
}

/// Union of the supports of several fits over one shared library.
pub fn union_model(models: &[LearnedModel]) -> Result<UnionModel, LearnError> {
    let first = models.first().ok_or(LearnError::NoModels)?;
    let mut union: Vec<usize> = Vec::new();
    for model in models {
        if !model.system.structure_eq(&first.system) {
            return Err(LearnError::MixedLibraries);
        }
        for &i in &model.support {
            if !union.contains(&i) {
                union.push(i);
            }
        }
    }
    union.sort_unstable();
    Ok(UnionModel { library: first.system.clone(), support: union })
}

/// NNLS restricted to the union's columns on one scenario's series.
pub fn refit(
    union: &UnionModel,
    series: &SeriesData,
    config: &LearningConfig,
) -> Result<RefitModel, LearnError> {
    if union.support.is_empty() {
        return Err(LearnError::EmptyUnion);
    }
    let sub = series.subsample(config.stride)?;
    let derivatives = estimate_derivatives(&sub, config.derivative, config.kalman_noise_ratio)?;
    let dm = build_design_matrix(&union.library, &sub, &derivatives)?;
    let restricted = dm.matrix.select_columns(union.support.iter());
    let sol = solve_nnls(&restricted, &dm.target)?;
    Ok(RefitModel { rates: sol.coefficients.iter().copied().collect(), residual: sol.residual })
}

/// Integrates a rated system from the series' initial state across its grid
/// and reports the RMSE per species against the series.
///
/// Integration uses fixed-step RK4 matched to the series grid so comparison
/// needs no interpolation.
pub fn score_model(system: &ReactionSystem, series: &SeriesData) -> Result<Vec<f64>, LearnError> {
    let dt = series.dt()?;
    let t0 = series.times[0];
    let t1 = *series.times.last().unwrap();
    let y0 = series.initial_state().iter().map(|v| v.max(0.0)).collect();
    let problem = OdeProblem::new(system.clone(), y0, (t0, t1))?;
    let solution = integrate(&problem, &SolverConfig::FixedRk4 { step: dt })?;
    Ok(compare(&solution, series)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learning::DerivativeMethod;
    use crate::reactions::{curated_preset, PRESET_UNION_12};

    /// Series generated by exactly evaluating a known system's flow with
    /// RK4 on a fine grid.
    fn synthetic_series(system: &ReactionSystem, y0: Vec<f64>, t1: f64, dt: f64) -> SeriesData {
        let problem = OdeProblem::new(system.clone(), y0, (0.0, t1)).unwrap();
        let sol = integrate(&problem, &SolverConfig::FixedRk4 { step: dt }).unwrap();
        let n_species = system.species().len();
        let values = (0..n_species)
            .map(|s| sol.states.iter().map(|st| st[s]).collect())
            .collect();
        SeriesData { times: sol.times, values }
    }

    fn three_reaction_truth() -> (ReactionSystem, Vec<f64>) {
        // C -> 2C, 2C -> C, C + H -> 2H inside the union library
        let lib = curated_preset(PRESET_UNION_12).unwrap();
        let mut rates = vec![0.0; 12];
        rates[0] = 0.8;
        rates[4] = 1.2;
        rates[7] = 0.6;
        (lib.with_rates(&rates).unwrap(), rates)
    }

    #[test]
    fn exact_derivatives_recover_exact_support_and_rates() {
        let (truth, true_rates) = three_reaction_truth();
        let series = synthetic_series(&truth, vec![0.1, 0.4, 0.05], 10.0, 0.01);
        // bypass numerical differentiation: use the RHS itself
        let sub = series.subsample(10).unwrap();
        let mut derivs = vec![vec![0.0; sub.n_samples()]; 3];
        for t in 0..sub.n_samples() {
            let y: Vec<f64> = (0..3).map(|s| sub.values[s][t]).collect();
            let dy = truth.mass_action_rhs(&y).unwrap();
            for s in 0..3 {
                derivs[s][t] = dy[s];
            }
        }
        let lib = curated_preset(PRESET_UNION_12).unwrap();
        let dm = build_design_matrix(&lib, &sub, &derivs).unwrap();
        let sol = solve_nnls(&dm.matrix, &dm.target).unwrap();
        for (i, &k) in true_rates.iter().enumerate() {
            assert!(
                (sol.coefficients[i] - k).abs() < 1e-6,
                "rate {i}: {} vs {k}",
                sol.coefficients[i]
            );
        }
    }

    #[test]
    fn learn_model_on_numerical_derivatives_is_close() {
        let (truth, true_rates) = three_reaction_truth();
        let series = synthetic_series(&truth, vec![0.1, 0.4, 0.05], 10.0, 0.01);
        let lib = curated_preset(PRESET_UNION_12).unwrap();
        let config = LearningConfig {
            stride: 10,
            derivative: DerivativeMethod::Central,
            prune_threshold: 1e-3,
            ..LearningConfig::default()
        };
        let model = learn_model(&lib, &series, &config).unwrap();
        assert_eq!(model.support, vec![0, 4, 7]);
        for &i in &model.support {
            let rel = (model.rates[i] - true_rates[i]).abs() / true_rates[i];
            assert!(rel < 0.05, "rate {i}: rel err {rel:.4}");
        }
    }

    #[test]
    fn all_zero_series_learns_the_zero_model() {
        let lib = curated_preset(PRESET_UNION_12).unwrap();
        let times: Vec<f64> = (0..101).map(|i| i as f64 * 0.01).collect();
        let series = SeriesData { times, values: vec![vec![0.0; 101]; 3] };
        let model = learn_model(&lib, &series, &LearningConfig::default()).unwrap();
        assert!(model.rates.iter().all(|&k| k == 0.0));
        assert!(model.support.is_empty());
    }

    #[test]
    fn union_is_the_set_union_of_supports() {
        let (truth, _) = three_reaction_truth();
        let lib = curated_preset(PRESET_UNION_12).unwrap();
        let series = synthetic_series(&truth, vec![0.1, 0.4, 0.05], 5.0, 0.01);
        let config = LearningConfig { prune_threshold: 1e-3, ..LearningConfig::default() };
        let m1 = learn_model(&lib, &series, &config).unwrap();
        let mut m2 = m1.clone();
        m2.support = vec![4, 9];
        let mut m3 = m1.clone();
        m3.support = vec![0, 7];
        let union = union_model(&[m2, m3]).unwrap();
        assert_eq!(union.support, vec![0, 4, 7, 9]);

        let identical = union_model(&[m1.clone(), m1.clone()]).unwrap();
        assert_eq!(identical.support, m1.support);
    }

    #[test]
    fn union_rejects_mixed_libraries() {
        let (truth, _) = three_reaction_truth();
        let lib = curated_preset(PRESET_UNION_12).unwrap();
        let series = synthetic_series(&truth, vec![0.1, 0.4, 0.05], 2.0, 0.01);
        let config = LearningConfig { prune_threshold: 1e-3, ..LearningConfig::default() };
        let m1 = learn_model(&lib, &series, &config).unwrap();
        let other_lib =
            crate::reactions::curated_preset(crate::reactions::PRESET_CONSTRAINED_DEFAULT)
                .unwrap();
        let two = SeriesData {
            times: series.times.clone(),
            values: series.values.clone(),
        };
        let m2 = learn_model(&other_lib, &two, &config).unwrap();
        assert!(matches!(union_model(&[m1, m2]), Err(LearnError::MixedLibraries)));
    }

    #[test]
    fn refit_matches_or_beats_the_original_residual() {
        let (truth, _) = three_reaction_truth();
        let lib = curated_preset(PRESET_UNION_12).unwrap();
        let series = synthetic_series(&truth, vec![0.1, 0.4, 0.05], 10.0, 0.01);
        let config = LearningConfig { prune_threshold: 1e-3, ..LearningConfig::default() };
        let model = learn_model(&lib, &series, &config).unwrap();
        let union = union_model(std::slice::from_ref(&model)).unwrap();
        let refitted = refit(&union, &series, &config).unwrap();
        assert!(refitted.residual <= model.residual + 1e-12);
    }

    #[test]
    fn score_of_self_generated_data_is_tiny() {
        let (truth, _) = three_reaction_truth();
        let series = synthetic_series(&truth, vec![0.1, 0.4, 0.05], 5.0, 0.01);
        let rmse = score_model(&truth, &series).unwrap();
        assert!(rmse.iter().all(|&e| e < 1e-8), "{rmse:?}");
    }

    #[test]
    fn zero_model_scores_rms_deviation_from_initial_value() {
        let (truth, _) = three_reaction_truth();
        let series = synthetic_series(&truth, vec![0.1, 0.4, 0.05], 5.0, 0.01);
        let zero = truth.with_rates(&vec![0.0; 12]).unwrap();
        let rmse = score_model(&zero, &series).unwrap();
        for s in 0..3 {
            let y0 = series.values[s][0];
            let expected = (series.values[s].iter().map(|v| (v - y0) * (v - y0)).sum::<f64>()
                / series.n_samples() as f64)
                .sqrt();
            assert!((rmse[s] - expected).abs() < 1e-12);
        }
    }
}
