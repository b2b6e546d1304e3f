//! CSV connector: UTF-8, comma-separated, first row is the header,
//! RFC 4180 quoting (delegated to the `csv` crate).

use super::{parse_cell, ConnectorError, Row, SourceDescriptor, SourceRows, Value};

/// Read a CSV source into typed rows, in file order. The header must carry
/// exactly the declared schema columns (order-insensitive). Unparseable
/// cells become null and are recorded as warnings.
pub fn read_csv(descriptor: &SourceDescriptor) -> Result<SourceRows, ConnectorError> {
    let text = descriptor.location.read(&descriptor.id)?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| ConnectorError::Malformed {
            source_id: descriptor.id.clone(),
            message: e.to_string(),
        })?
        .iter()
        .map(str::to_owned)
        .collect();

    let declared: Vec<&str> = descriptor.columns.iter().map(|(n, _)| n.as_str()).collect();
    let missing: Vec<String> =
        declared.iter().filter(|c| !headers.iter().any(|h| h == *c)).map(|c| c.to_string()).collect();
    let extra: Vec<String> =
        headers.iter().filter(|h| !declared.contains(&h.as_str())).cloned().collect();
    if !missing.is_empty() || !extra.is_empty() {
        return Err(ConnectorError::HeaderMismatch {
            source_id: descriptor.id.clone(),
            missing,
            extra,
        });
    }

    let mut out = SourceRows::default();
    for (index, record) in reader.records().enumerate() {
        let record = record.map_err(|e| ConnectorError::Malformed {
            source_id: descriptor.id.clone(),
            message: e.to_string(),
        })?;
        let mut row = Row::new();
        for (header, raw) in headers.iter().zip(record.iter()) {
            let ty = descriptor.column_type(header).expect("header checked against schema");
            match parse_cell(raw, ty) {
                Ok(value) => row.set(header.clone(), value),
                Err(()) => {
                    out.warnings.push(format!(
                        "{}: row {}: cell {:?} is not a valid {:?}, treated as null",
                        descriptor.id,
                        index + 1,
                        raw,
                        ty
                    ));
                    row.set(header.clone(), Value::Null);
                }
            }
        }
        out.rows.push(row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectors::{ColumnType, SourceKind, SourceLocation};

    fn descriptor(csv: &str) -> SourceDescriptor {
        SourceDescriptor::new(
            "plants",
            SourceKind::Csv,
            SourceLocation::Inline(csv.to_owned()),
            vec![
                ("plant_id".into(), ColumnType::Integer),
                ("plant_name".into(), ColumnType::String),
                ("city".into(), ColumnType::String),
            ],
            vec!["plant_id".into()],
            None,
        )
        .unwrap()
    }

    #[test]
    fn two_data_rows_give_two_typed_rows() {
        let src = descriptor("plant_id,plant_name,city\n12,Plant A,Belgrade\n13,Plant B,Belgrade\n");
        let result = read_csv(&src).unwrap();
        assert_eq!(result.rows.len(), 2);
        assert_eq!(result.rows[0].get("plant_id"), &Value::Integer(12));
        assert_eq!(result.rows[1].get("plant_name"), &Value::String("Plant B".into()));
        assert!(result.warnings.is_empty());
    }

    #[test]
    fn header_only_file_gives_empty_stream() {
        let src = descriptor("plant_id,plant_name,city\n");
        let result = read_csv(&src).unwrap();
        assert!(result.rows.is_empty());
    }

    #[test]
    fn unparseable_integer_cell_becomes_null_with_warning() {
        let src = descriptor("plant_id,plant_name,city\nabc,Plant A,Belgrade\n");
        let result = read_csv(&src).unwrap();
        assert_eq!(result.rows[0].get("plant_id"), &Value::Null);
        assert_eq!(result.warnings.len(), 1);
        assert!(result.warnings[0].contains("abc"));
    }

    #[test]
    fn header_mismatch_lists_missing_and_extra_columns() {
        let src = descriptor("plant_id,nickname\n1,x\n");
        let err = read_csv(&src).unwrap_err();
        match err {
            ConnectorError::HeaderMismatch { missing, extra, .. } => {
                assert_eq!(missing, vec!["plant_name".to_string(), "city".to_string()]);
                assert_eq!(extra, vec!["nickname".to_string()]);
            }
            other => panic!("expected header mismatch, got {other}"),
        }
    }

    #[test]
    fn reading_twice_is_deterministic() {
        let src = descriptor("plant_id,plant_name,city\n12,Plant A,Belgrade\n");
        assert_eq!(read_csv(&src).unwrap().rows, read_csv(&src).unwrap().rows);
    }

    #[test]
    fn rfc4180_quoted_fields_are_supported() {
        let src = descriptor("plant_id,plant_name,city\n12,\"Plant, the \"\"A\"\"\",Belgrade\n");
        let result = read_csv(&src).unwrap();
        assert_eq!(result.rows[0].get("plant_name"), &Value::String("Plant, the \"A\"".into()));
    }
}
