use nalgebra::{DMatrix, DVector};

use super::{LearnError, SeriesData};
use crate::reactions::ReactionSystem;

/// Mass-action regression problem: `matrix · K ≈ target`.
///
/// Rows are stacked species-major (all samples of species 0, then species 1,
/// …); column `j` holds the ν-weighted unit propensity of library reaction
/// `j` along the data, so the residual at the true rate vector of
/// synthetic data is zero by construction.
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    pub matrix: DMatrix<f64>,
    pub target: DVector<f64>,
    pub n_samples: usize,
    pub n_species: usize,
}

/// Assembles the design matrix and stacked derivative target for a library
/// over a (typically subsampled) series with pre-estimated derivatives.
pub fn build_design_matrix(
    library: &ReactionSystem,
    series: &SeriesData,
    derivatives: &[Vec<f64>],
) -> Result<DesignMatrix, LearnError> {
    series.validate()?;
    let n_species = library.species().len();
    if series.n_species() != n_species {
        return Err(LearnError::SpeciesMismatch {
            expected: n_species,
            got: series.n_species(),
        });
    }
    if derivatives.len() != n_species {
        return Err(LearnError::SpeciesMismatch {
            expected: n_species,
            got: derivatives.len(),
        });
    }
    let n_samples = series.n_samples();
    for d in derivatives {
        if d.len() != n_samples {
            return Err(LearnError::RaggedSeries(format!(
                "{} derivative samples against {} data samples",
                d.len(),
                n_samples
            )));
        }
    }

    let n_rows = n_species * n_samples;
    let n_cols = library.len();
    let mut matrix = DMatrix::zeros(n_rows, n_cols);
    let mut y = vec![0.0; n_species];
    for t in 0..n_samples {
        for (s, slot) in y.iter_mut().enumerate() {
            *slot = series.values[s][t];
        }
        for (j, reaction) in library.reactions().iter().enumerate() {
            let a = reaction.unit_propensity(&y);
            if a == 0.0 {
                continue;
            }
            for (s, nu) in reaction.stoich_vector().iter().enumerate() {
                if *nu != 0 {
                    matrix[(s * n_samples + t, j)] = *nu as f64 * a;
                }
            }
        }
    }
    let mut target = DVector::zeros(n_rows);
    for (s, d) in derivatives.iter().enumerate() {
        for (t, &v) in d.iter().enumerate() {
            target[s * n_samples + t] = v;
        }
    }
    Ok(DesignMatrix { matrix, target, n_samples, n_species })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reactions::{curated_preset, Reaction, SpeciesSet, PRESET_UNION_12};

    #[test]
    fn single_reaction_column_layout() {
        // C -> 2C over data c = (1, 2): column stacks (1, 2 | 0, 0 | 0, 0)
        let species = SpeciesSet::cancer_healthy_immune();
        let lib = ReactionSystem::new(
            species,
            vec![Reaction::new(vec![1, 0, 0], vec![2, 0, 0], 0.0).unwrap()],
        )
        .unwrap();
        let series = SeriesData {
            times: vec![0.0, 1.0],
            values: vec![vec![1.0, 2.0], vec![0.0, 0.0], vec![0.0, 0.0]],
        };
        let derivs = vec![vec![0.0; 2]; 3];
        let dm = build_design_matrix(&lib, &series, &derivs).unwrap();
        assert_eq!(dm.matrix.nrows(), 6);
        assert_eq!(dm.matrix.ncols(), 1);
        let col: Vec<f64> = dm.matrix.column(0).iter().copied().collect();
        assert_eq!(col, vec![1.0, 2.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn residual_of_true_rates_is_zero_by_construction() {
        let lib = curated_preset(PRESET_UNION_12).unwrap();
        let rates: Vec<f64> = (0..12).map(|i| 0.1 + 0.05 * i as f64).collect();
        let sys = lib.with_rates(&rates).unwrap();
        // data and exact derivatives straight from the RHS
        let states = [
            [0.2, 0.3, 0.05],
            [0.4, 0.25, 0.1],
            [0.7, 0.1, 0.2],
            [0.9, 0.05, 0.15],
        ];
        let times: Vec<f64> = (0..states.len()).map(|i| i as f64).collect();
        let mut values = vec![vec![0.0; states.len()]; 3];
        let mut derivs = vec![vec![0.0; states.len()]; 3];
        for (t, y) in states.iter().enumerate() {
            let dy = sys.mass_action_rhs(y).unwrap();
            for s in 0..3 {
                values[s][t] = y[s];
                derivs[s][t] = dy[s];
            }
        }
        let series = SeriesData { times, values };
        let dm = build_design_matrix(&lib, &series, &derivs).unwrap();
        let k = DVector::from_vec(rates);
        let residual = (&dm.matrix * k - &dm.target).norm();
        assert!(residual < 1e-12, "residual {residual:.3e}");
        assert_eq!(dm.matrix.ncols(), 12);
        assert_eq!(dm.matrix.nrows(), 3 * states.len());
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let lib = curated_preset(PRESET_UNION_12).unwrap();
        let series =
            SeriesData { times: vec![0.0, 1.0], values: vec![vec![0.0, 1.0]; 2] };
        let derivs = vec![vec![0.0; 2]; 2];
        assert!(matches!(
            build_design_matrix(&lib, &series, &derivs),
            Err(LearnError::SpeciesMismatch { expected: 3, got: 2 })
        ));
    }
}
