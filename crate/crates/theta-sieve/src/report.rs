//! Replayable run records and canonical output formatting for the CLI.

use serde::Serialize;
use serde_json::Value;

/// Record of one CLI invocation. Primary outputs stay deterministic
/// (identical flags produce byte-identical stdout); wall time lives only
/// here, on the diagnostic channel.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub wall_time_ms: f64,
    pub version: String,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value, outputs: Value, wall_time_ms: f64) -> Self {
        RunReport {
            command: command.to_string(),
            inputs,
            outputs,
            wall_time_ms,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// Canonical JSON: serde_json already emits object keys in sorted order
/// (BTreeMap-backed maps), so serialization is deterministic.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(&serde_json::to_value(value).expect("serializable"))
        .expect("serializable")
}

/// Format with a fixed number of significant digits (scientific notation),
/// locale-independent; keeps numeric CSV/JSON comparisons scriptable.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    assert!(digits >= 1);
    format!("{:.*e}", digits - 1, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_json_sorts_keys() {
        let v: Value = serde_json::from_str(r#"{"z": 1, "a": 2, "m": 3}"#).unwrap();
        assert_eq!(to_canonical_json(&v), r#"{"a":2,"m":3,"z":1}"#);
    }

    #[test]
    fn sig_formatting() {
        assert_eq!(fmt_sig(0.4191927352, 10), "4.191927352e-1");
        assert_eq!(fmt_sig(1.0, 4), "1.000e0");
        assert_eq!(fmt_sig(-0.75, 3), "-7.50e-1");
    }
}
