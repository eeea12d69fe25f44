//! Flat JSON configuration layered under command-line flags.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Values from an optional JSON object whose keys are the long flag names
/// with `-` replaced by `_`.
#[derive(Debug, Clone, Default)]
pub struct Layer {
    json: Map<String, Value>,
}

impl Layer {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        match serde_json::from_str::<Value>(text)? {
            Value::Object(json) => {
                if let Some((k, _)) = json.iter().find(|(_, v)| v.is_object()) {
                    return Err(Error::Configuration(format!(
                        "config key `{k}` holds an object; keys must be flat"
                    )));
                }
                Ok(Self { json })
            }
            _ => Err(Error::Configuration("config file must hold a JSON object".into())),
        }
    }

    /// The flag value if given, else the JSON value under `key`.
    pub fn get<T: DeserializeOwned>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.json.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => serde_json::from_value(v.clone())
                .map(Some)
                .map_err(|e| Error::Configuration(format!("config key `{key}`: {e}"))),
        }
    }

    pub fn or<T: DeserializeOwned>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        Ok(self.get(flag, key)?.unwrap_or(default))
    }

    /// Angle from the flag or JSON, where JSON may hold a number or a string
    /// such as `"pi/4"`.
    pub fn angle(&self, flag: Option<f64>, key: &str, default: f64) -> Result<f64> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.json.get(key) {
            None | Some(Value::Null) => Ok(default),
            Some(Value::String(s)) => {
                parse_angle(s).map_err(|e| Error::Configuration(format!("config key `{key}`: {e}")))
            }
            Some(v) => {
                serde_json::from_value(v.clone()).map_err(|e| Error::Configuration(format!("config key `{key}`: {e}")))
            }
        }
    }

    pub fn angles(&self, flag: Option<Vec<f64>>, key: &str) -> Result<Option<Vec<f64>>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.json.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| match v {
                    Value::String(s) => parse_angle(s),
                    Value::Number(n) => n.as_f64().ok_or_else(|| format!("bad number {n}")),
                    other => Err(format!("expected an angle, got {other}")),
                })
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(Some)
                .map_err(|e| Error::Configuration(format!("config key `{key}`: {e}"))),
            Some(other) => Err(Error::Configuration(format!(
                "config key `{key}`: expected a list, got {other}"
            ))),
        }
    }
}

/// Parses `0.5`, `pi`, `pi/4`, `2pi/3`, `2*pi/3`.
pub fn parse_angle(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim().to_ascii_lowercase().replace(' ', "");
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let Some(pos) = t.find("pi") else {
        return Err(format!("cannot parse angle `{s}`"));
    };
    let coef = t[..pos].trim_end_matches('*');
    let coef: f64 = if coef.is_empty() {
        1.0
    } else {
        coef.parse().map_err(|_| format!("cannot parse angle `{s}`"))?
    };
    let rest = &t[pos + 2..];
    let div: f64 = if rest.is_empty() {
        1.0
    } else if let Some(d) = rest.strip_prefix('/') {
        d.parse().map_err(|_| format!("cannot parse angle `{s}`"))?
    } else {
        return Err(format!("cannot parse angle `{s}`"));
    };
    Ok(coef * std::f64::consts::PI / div)
}
