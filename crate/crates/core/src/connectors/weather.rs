//! Weather JSON connector. The document is an array of observation objects
//! with fields ts, lat, lon, city, temp_c, wind_speed_ms, ghi_wm2; only ts
//! is mandatory.

use serde_json::Value as Json;

use super::{parse_timestamp, ConnectorError, Row, SourceDescriptor, SourceRows, Value};

pub fn read_weather_json(descriptor: &SourceDescriptor) -> Result<SourceRows, ConnectorError> {
    let text = descriptor.location.read(&descriptor.id)?;
    let malformed = |message: String| ConnectorError::Malformed {
        source_id: descriptor.id.clone(),
        message,
    };

    let document: Json =
        serde_json::from_str(&text).map_err(|e| malformed(format!("invalid JSON: {e}")))?;
    let Json::Array(objects) = document else {
        return Err(malformed("root element must be an array of observations".into()));
    };

    let mut out = SourceRows::default();
    for (index, object) in objects.iter().enumerate() {
        let Json::Object(fields) = object else {
            return Err(malformed(format!("element {index} is not an object")));
        };
        let ts_raw = fields
            .get("ts")
            .and_then(Json::as_str)
            .ok_or_else(|| malformed(format!("element {index} is missing mandatory ts")))?;
        let ts = parse_timestamp(ts_raw)
            .ok_or_else(|| malformed(format!("element {index}: ts {ts_raw:?} is not ISO-8601")))?;

        let mut row = Row::new();
        row.set("ts", Value::Timestamp(ts));
        for (column, _) in descriptor.columns.iter().filter(|(name, _)| name != "ts") {
            let value = match fields.get(column) {
                Some(Json::String(s)) => Value::String(s.clone()),
                Some(Json::Number(n)) => {
                    Value::decimal(n.to_string()).unwrap_or(Value::Null)
                }
                Some(Json::Null) | None => Value::Null,
                Some(other) => {
                    out.warnings.push(format!(
                        "{}: element {index}: field {column} has unsupported value {other}, treated as null",
                        descriptor.id
                    ));
                    Value::Null
                }
            };
            row.set(column.clone(), value);
        }
        out.rows.push(row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectors::{standard_sources_from, SourceLocation};

    fn weather_descriptor(json: &str) -> SourceDescriptor {
        let json = json.to_owned();
        standard_sources_from(move |name| {
            if name == "weather.json" {
                SourceLocation::Inline(json.clone())
            } else {
                SourceLocation::Inline(String::new())
            }
        })
        .into_iter()
        .find(|d| d.id == "weather")
        .unwrap()
    }

    #[test]
    fn fixture_of_24_observations_gives_24_rows() {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/sources/weather.json");
        let json = std::fs::read_to_string(path).unwrap();
        let result = read_weather_json(&weather_descriptor(&json)).unwrap();
        assert_eq!(result.rows.len(), 24);
        assert_eq!(result.rows[0].get("city"), &Value::String("Belgrade".into()));
        assert!(result.rows[0].get("ghi_wm2").as_f64().is_some());
    }

    #[test]
    fn empty_array_gives_empty_stream() {
        let result = read_weather_json(&weather_descriptor("[]")).unwrap();
        assert!(result.rows.is_empty());
    }

    #[test]
    fn missing_wind_speed_becomes_null() {
        let json = r#"[{"ts": "2021-05-20T00:00:00Z", "city": "Belgrade", "temp_c": 10.0}]"#;
        let result = read_weather_json(&weather_descriptor(json)).unwrap();
        assert_eq!(result.rows.len(), 1);
        assert!(result.rows[0].get("wind_speed_ms").is_null());
    }

    #[test]
    fn missing_ts_is_a_document_error() {
        let json = r#"[{"city": "Belgrade"}]"#;
        assert!(read_weather_json(&weather_descriptor(json)).is_err());
    }

    #[test]
    fn non_array_root_is_a_document_error() {
        assert!(read_weather_json(&weather_descriptor("{}")).is_err());
    }
}
