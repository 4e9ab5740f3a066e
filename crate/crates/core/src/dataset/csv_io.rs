use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{Dataset, FeatureKind, FeatureSpec};
use crate::matrix::Matrix;
use crate::{Error, Result};

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads a headed CSV file. Every column other than `label_column` becomes a
/// feature; columns named in `categorical_columns` are categorical with
/// categories in first-appearance order, the rest must parse as numbers.
pub fn load_csv(
    path: impl AsRef<Path>,
    label_column: &str,
    positive_label: &str,
    categorical_columns: &[&str],
) -> Result<Dataset> {
    read_csv(open(path.as_ref())?, label_column, positive_label, categorical_columns)
}

/// Loads a CSV against a known feature schema (typically a trained model's).
///
/// Category labels the schema does not know are appended after the known
/// ones, so the result still passes [`Dataset::check_conforms`].
pub fn load_csv_with_schema(
    path: impl AsRef<Path>,
    label_column: &str,
    positive_label: &str,
    schema: &[FeatureSpec],
) -> Result<Dataset> {
    read_csv_with_schema(open(path.as_ref())?, label_column, positive_label, schema)
}

struct RawTable {
    header: Vec<String>,
    records: Vec<Vec<String>>,
}

fn read_raw<R: Read>(reader: R) -> Result<RawTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(Error::EmptyFile);
    }
    let mut records = Vec::new();
    for rec in rdr.records() {
        records.push(rec?.iter().map(str::to_owned).collect());
    }
    if records.is_empty() {
        return Err(Error::InvalidDataset("no data rows".into()));
    }
    Ok(RawTable { header, records })
}

fn column_index(header: &[String], name: &str) -> Result<usize> {
    header
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| Error::MissingColumn(name.to_owned()))
}

fn cell<'a>(rec: &'a [String], row: usize, col: usize, name: &str) -> Result<&'a str> {
    match rec.get(col).map(String::as_str) {
        Some(v) if !v.is_empty() => Ok(v),
        _ => Err(Error::MissingValue {
            row,
            column: name.to_owned(),
        }),
    }
}

fn parse_labels(table: &RawTable, label_col: usize, positive: &str) -> Result<Vec<u8>> {
    let name = &table.header[label_col];
    let mut distinct: Vec<String> = Vec::new();
    let mut labels = Vec::with_capacity(table.records.len());
    for (i, rec) in table.records.iter().enumerate() {
        let v = cell(rec, i, label_col, name)?;
        if !distinct.iter().any(|d| d == v) {
            distinct.push(v.to_owned());
        }
        labels.push(u8::from(v == positive));
    }
    if distinct.len() > 2 {
        return Err(Error::LabelCardinality {
            found: distinct.len(),
            values: distinct,
        });
    }
    if distinct.len() == 2 && !distinct.iter().any(|d| d == positive) {
        return Err(Error::UnknownPositiveLabel(positive.to_owned()));
    }
    Ok(labels)
}

fn parse_number(v: &str, row: usize, column: &str) -> Result<f64> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(Error::NotNumeric {
            row,
            column: column.to_owned(),
            value: v.to_owned(),
        }),
    }
}

fn build(
    table: &RawTable,
    label_col: usize,
    positive: &str,
    columns: Vec<(usize, FeatureSpec)>,
) -> Result<Dataset> {
    let labels = parse_labels(table, label_col, positive)?;
    let n = table.records.len();
    let p = columns.len();
    let mut specs = Vec::with_capacity(p);
    let mut features = Matrix::zeros(n, p);
    for (j, (col, mut spec)) in columns.into_iter().enumerate() {
        match spec.kind {
            FeatureKind::Continuous => {
                for (i, rec) in table.records.iter().enumerate() {
                    let v = cell(rec, i, col, &spec.name)?;
                    features.set(i, j, parse_number(v, i, &spec.name)?);
                }
            }
            FeatureKind::Categorical => {
                let mut index: HashMap<String, usize> = spec
                    .categories
                    .iter()
                    .enumerate()
                    .map(|(k, c)| (c.clone(), k))
                    .collect();
                for (i, rec) in table.records.iter().enumerate() {
                    let v = cell(rec, i, col, &spec.name)?;
                    let k = match index.get(v) {
                        Some(&k) => k,
                        None => {
                            spec.categories.push(v.to_owned());
                            index.insert(v.to_owned(), spec.categories.len() - 1);
                            spec.categories.len() - 1
                        }
                    };
                    features.set(i, j, k as f64);
                }
            }
        }
        specs.push(spec);
    }
    Dataset::new(specs, features, labels)
}

pub fn read_csv<R: Read>(
    reader: R,
    label_column: &str,
    positive_label: &str,
    categorical_columns: &[&str],
) -> Result<Dataset> {
    let table = read_raw(reader)?;
    let label_col = column_index(&table.header, label_column)?;
    for c in categorical_columns {
        column_index(&table.header, c)?;
    }
    let columns = table
        .header
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_col)
        .map(|(i, h)| {
            let spec = if categorical_columns.contains(&h.as_str()) {
                FeatureSpec {
                    name: h.clone(),
                    kind: FeatureKind::Categorical,
                    categories: Vec::new(),
                }
            } else {
                FeatureSpec::continuous(h.clone())
            };
            (i, spec)
        })
        .collect();
    build(&table, label_col, positive_label, columns)
}

pub fn read_csv_with_schema<R: Read>(
    reader: R,
    label_column: &str,
    positive_label: &str,
    schema: &[FeatureSpec],
) -> Result<Dataset> {
    let table = read_raw(reader)?;
    let label_col = column_index(&table.header, label_column)?;
    if table.header.len() != schema.len() + 1 {
        return Err(Error::SchemaMismatch(format!(
            "expected {} feature columns plus `{label_column}`, found {} columns",
            schema.len(),
            table.header.len()
        )));
    }
    let columns = schema
        .iter()
        .map(|s| {
            column_index(&table.header, &s.name)
                .map_err(|_| Error::SchemaMismatch(format!("column `{}` is missing", s.name)))
                .map(|i| (i, s.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    build(&table, label_col, positive_label, columns)
}

/// Writes `d` as CSV: feature columns in schema order, then the label column
/// holding `0`/`1`. Categorical cells are written by category name.
pub fn write_csv<W: Write>(d: &Dataset, writer: W, label_column: &str) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = d.specs().iter().map(|s| s.name.as_str()).collect();
    header.push(label_column);
    w.write_record(&header)?;
    let mut record = Vec::with_capacity(header.len());
    for i in 0..d.n() {
        record.clear();
        for (spec, &x) in d.specs().iter().zip(d.row(i)) {
            record.push(match spec.kind {
                FeatureKind::Continuous => x.to_string(),
                FeatureKind::Categorical => spec.categories[x as usize].clone(),
            });
        }
        record.push(d.labels()[i].to_string());
        w.write_record(&record)?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}
