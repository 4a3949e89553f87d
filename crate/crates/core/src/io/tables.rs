//! Delimited-text tables: predictions, benchmark scores and breakdowns.

use std::io::{Read, Write};

use crate::analysis::{BreakdownRow, Predictions, ScoreSheet};

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("row {row}: {reason}")]
    Malformed { row: usize, reason: String },
}

#[derive(serde::Deserialize, serde::Serialize)]
struct PredictionRow {
    id: usize,
    prediction: String,
}

/// Reads `id,prediction` rows (with that header).
pub fn read_predictions(input: impl Read) -> Result<Predictions, TableError> {
    let mut out = Predictions::new();
    for (i, row) in csv::Reader::from_reader(input)
        .deserialize::<PredictionRow>()
        .enumerate()
    {
        let row = row?;
        if out.insert(row.id, row.prediction).is_some() {
            return Err(TableError::Malformed {
                row: i + 1,
                reason: format!("duplicate id {}", row.id),
            });
        }
    }
    Ok(out)
}

pub fn write_predictions(preds: &Predictions, output: impl Write) -> Result<(), TableError> {
    let mut w = csv::Writer::from_writer(output);
    for (&id, prediction) in preds {
        w.serialize(PredictionRow {
            id,
            prediction: prediction.clone(),
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a header of benchmark names after a first `model` column, then
/// one row per model. `-` or an empty cell marks a missing score.
pub fn read_score_sheet(input: impl Read) -> Result<ScoreSheet, TableError> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = r.headers()?.clone();
    let mut sheet = ScoreSheet {
        benchmarks: header.iter().skip(1).map(str::to_string).collect(),
        ..ScoreSheet::default()
    };
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let mut cells = rec.iter();
        let model = cells.next().unwrap_or_default().to_string();
        let mut row = Vec::with_capacity(sheet.benchmarks.len());
        for cell in cells {
            let v = match cell {
                "" | "-" => None,
                s => Some(s.parse::<f64>().map_err(|_| TableError::Malformed {
                    row: i + 1,
                    reason: format!("not a number: {s:?}"),
                })?),
            };
            row.push(v);
        }
        sheet.models.push(model);
        sheet.rows.push(row);
    }
    Ok(sheet)
}

pub fn write_breakdown(rows: &[BreakdownRow], output: impl Write) -> Result<(), TableError> {
    let mut w = csv::Writer::from_writer(output);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predictions_round_trip() {
        let preds: Predictions = [(0, "park".to_string()), (1, "a, b".to_string())].into();
        let mut buf = Vec::new();
        write_predictions(&preds, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "id,prediction\n0,park\n1,\"a, b\"\n"
        );
        assert_eq!(read_predictions(&buf[..]).unwrap(), preds);
    }

    #[test]
    fn duplicate_prediction_ids_are_rejected() {
        let text = "id,prediction\n0,park\n0,kitchen\n";
        assert!(matches!(
            read_predictions(text.as_bytes()),
            Err(TableError::Malformed { row: 2, .. })
        ));
    }

    #[test]
    fn score_sheet_marks_missing_cells() {
        let text = "model,A,B\nm1,10.5,-\nm2, 20 ,30\n";
        let sheet = read_score_sheet(text.as_bytes()).unwrap();
        assert_eq!(sheet.benchmarks, vec!["A", "B"]);
        assert_eq!(
            sheet.rows,
            vec![vec![Some(10.5), None], vec![Some(20.0), Some(30.0)]]
        );
        assert!(read_score_sheet("model,A\nm1,x\n".as_bytes()).is_err());
    }
}
