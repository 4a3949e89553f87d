use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::statistics::Statistics;

use super::AnalysisError;

/// Accuracy (percent) of each model on one benchmark; `None` where the
/// model was not scored.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScoreTable {
    pub benchmark: String,
    pub scores: BTreeMap<String, Option<f64>>,
}

impl ScoreTable {
    pub fn new(benchmark: &str, scores: impl IntoIterator<Item = (String, Option<f64>)>) -> Self {
        ScoreTable {
            benchmark: benchmark.to_string(),
            scores: scores.into_iter().collect(),
        }
    }

    pub fn validate(&self) -> Result<(), AnalysisError> {
        for (model, v) in &self.scores {
            if let Some(v) = *v {
                if !(0.0..=100.0).contains(&v) {
                    return Err(AnalysisError::InvalidScore {
                        model: model.clone(),
                        value: v,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Several benchmarks scored over the same models, one row per model.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScoreSheet {
    pub benchmarks: Vec<String>,
    pub models: Vec<String>,
    /// `rows[m][b]`
    pub rows: Vec<Vec<Option<f64>>>,
}

impl ScoreSheet {
    pub fn column(&self, benchmark: &str) -> Option<ScoreTable> {
        let b = self.benchmarks.iter().position(|x| x == benchmark)?;
        Some(ScoreTable::new(
            benchmark,
            self.models
                .iter()
                .cloned()
                .zip(self.rows.iter().map(|r| r[b])),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcurrenceResult {
    pub pearson: f64,
    /// Tie-adjusted Kendall rank correlation (tau-b).
    pub kendall: f64,
    pub n_models: usize,
}

/// Correlation between two benchmarks over the models scored on both.
pub fn concurrence(a: &ScoreTable, b: &ScoreTable) -> Result<ConcurrenceResult, AnalysisError> {
    a.validate()?;
    b.validate()?;
    let (x, y): (Vec<f64>, Vec<f64>) = a
        .scores
        .iter()
        .filter_map(|(model, va)| Some(((*va)?, b.scores.get(model).copied().flatten()?)))
        .unzip();
    if x.len() < 3 {
        return Err(AnalysisError::InsufficientModels { found: x.len() });
    }
    let pearson = x.iter().covariance(y.iter()) / (x.iter().std_dev() * y.iter().std_dev());
    let (kendall, _) = kendalls::tau_b_with_comparator(&x, &y, |p: &f64, q: &f64| p.total_cmp(q))
        .map_err(|_| AnalysisError::InsufficientModels { found: x.len() })?;
    Ok(ConcurrenceResult {
        pearson,
        kendall,
        n_models: x.len(),
    })
}


#[cfg(test)]
mod fixture_tests {
    use super::*;
    use crate::io::read_score_sheet;

    const SCORES: &str = include_str!("../../tests/fixtures/concurrence_scores.csv");

    #[test]
    fn fixture_against_squad() {
        let sheet = read_score_sheet(SCORES.as_bytes()).unwrap();
        let squad = sheet.column("SQuAD").unwrap();
        let t7 = concurrence(&squad, &sheet.column("mix(T7)").unwrap()).unwrap();
        assert_eq!(t7.n_models, 19);
        assert!((t7.pearson - 0.92).abs() <= 0.01, "{t7:?}");
        assert!((t7.kendall - 0.78).abs() <= 0.02, "{t7:?}");
        let t2 = concurrence(&squad, &sheet.column("mix(T2)").unwrap()).unwrap();
        assert_eq!(t2.n_models, 20);
        assert!((t2.pearson - 0.48).abs() <= 0.01, "{t2:?}");
        assert!((t2.kendall - 0.51).abs() <= 0.02, "{t2:?}");
    }

    #[test]
    fn concurrence_is_symmetric() {
        let sheet = read_score_sheet(SCORES.as_bytes()).unwrap();
        let a = sheet.column("SQuAD").unwrap();
        let b = sheet.column("babi task 2").unwrap();
        let ab = concurrence(&a, &b).unwrap();
        let ba = concurrence(&b, &a).unwrap();
        assert!((ab.pearson - ba.pearson).abs() < 1e-12);
        assert!((ab.kendall - ba.kendall).abs() < 1e-12);
    }
}
