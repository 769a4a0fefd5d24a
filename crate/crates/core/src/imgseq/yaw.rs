use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum YawSpecError {
    #[error("yaw spec {0:?} must have the form start:step:end")]
    Shape(String),
    #[error("yaw spec field {field} is not an integer: {value:?}")]
    NotInteger { field: &'static str, value: String },
    #[error("yaw spec step must be positive, got {0}")]
    Step(i32),
    #[error("yaw spec end {end} is below start {start}")]
    Order { start: i32, end: i32 },
    #[error("yaw spec range {start}..{end} is not a multiple of step {step}")]
    Divisibility { start: i32, step: i32, end: i32 },
}

/// An evenly spaced yaw sweep `start:step:end` in whole degrees, endpoints inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct YawSpec {
    start: i32,
    step: i32,
    end: i32,
}

impl YawSpec {
    pub fn new(start: i32, step: i32, end: i32) -> Result<Self, YawSpecError> {
        if step <= 0 {
            return Err(YawSpecError::Step(step));
        }
        if end < start {
            return Err(YawSpecError::Order { start, end });
        }
        if (i64::from(end) - i64::from(start)) % i64::from(step) != 0 {
            return Err(YawSpecError::Divisibility { start, step, end });
        }
        Ok(Self { start, step, end })
    }

    pub fn start(&self) -> i32 {
        self.start
    }

    pub fn step(&self) -> i32 {
        self.step
    }

    pub fn end(&self) -> i32 {
        self.end
    }

    pub fn len(&self) -> usize {
        ((i64::from(self.end) - i64::from(self.start)) / i64::from(self.step)) as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn angles(&self) -> Vec<i32> {
        (0..self.len()).map(|k| self.start + k as i32 * self.step).collect()
    }

    pub fn contains(&self, yaw: i32) -> bool {
        yaw >= self.start && yaw <= self.end && (yaw - self.start) % self.step == 0
    }
}

impl FromStr for YawSpec {
    type Err = YawSpecError;

    /// Accepts `-90:2:38` as well as the degree-annotated `−90°:2°:38°`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let normalized: String = text
            .trim()
            .chars()
            .filter(|&c| c != '°')
            .map(|c| if c == '\u{2212}' { '-' } else { c })
            .collect();
        let fields: Vec<&str> = normalized.split(':').collect();
        let [start, step, end] = fields.as_slice() else {
            return Err(YawSpecError::Shape(text.to_string()));
        };
        let parse = |field: &'static str, value: &str| {
            value.trim().parse::<i32>().map_err(|_| YawSpecError::NotInteger {
                field,
                value: value.to_string(),
            })
        };
        Self::new(parse("start", start)?, parse("step", step)?, parse("end", end)?)
    }
}

impl fmt::Display for YawSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.step, self.end)
    }
}

impl TryFrom<String> for YawSpec {
    type Error = YawSpecError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<YawSpec> for String {
    fn from(spec: YawSpec) -> Self {
        spec.to_string()
    }
}
