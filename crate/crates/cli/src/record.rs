//! One line of a report.

use std::fmt;
use std::str::FromStr;

use chaoskit::levy::MCStat;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A real or complex reported quantity. Complex values print as `re+imi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scalar {
    Real(f64),
    Complex(Complex64),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Real(x) => write!(f, "{x}"),
            Scalar::Complex(z) => write!(
                f,
                "{}{}{}i",
                z.re,
                if z.im.is_sign_negative() { "" } else { "+" },
                z.im
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseScalarError(String);

impl fmt::Display for ParseScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a real or complex number: {:?}", self.0)
    }
}

impl std::error::Error for ParseScalarError {}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(s.to_string());
        let Some(body) = s.strip_suffix('i') else {
            return s.parse().map(Scalar::Real).map_err(|_| err());
        };
        // the sign between the parts is the last one not following an exponent marker
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'))
            .ok_or_else(err)?;
        let re: f64 = body[..split].parse().map_err(|_| err())?;
        let im: f64 = body[split..]
            .trim_start_matches('+')
            .parse()
            .map_err(|_| err())?;
        Ok(Scalar::Complex(Complex64::new(re, im)))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Real(x)
    }
}

impl From<Complex64> for Scalar {
    fn from(z: Complex64) -> Self {
        Scalar::Complex(z)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Outcome of one check. `runtime_ms` is kept out of the report files so that
/// reports of identical runs are byte-identical; it goes to the timings sidecar.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub check_id: String,
    pub status: Status,
    pub value: Scalar,
    pub expected: Scalar,
    pub tolerance: f64,
    pub standard_error: Option<f64>,
    pub note: Option<String>,
    #[serde(skip)]
    pub runtime_ms: f64,
}

impl CheckRecord {
    fn new(check_id: &str, pass: bool, value: Scalar, expected: Scalar, tolerance: f64) -> Self {
        CheckRecord {
            suite: String::new(),
            check_id: check_id.to_string(),
            status: if pass { Status::Pass } else { Status::Fail },
            value,
            expected,
            tolerance,
            standard_error: None,
            note: None,
            runtime_ms: 0.0,
        }
    }

    /// Passes when `0 <= value <= tolerance`; used for residuals.
    pub fn bound(check_id: &str, value: f64, tolerance: f64) -> Self {
        Self::new(
            check_id,
            (0.0..=tolerance).contains(&value),
            value.into(),
            0.0.into(),
            tolerance,
        )
    }

    /// Passes when `|value - expected| <= tolerance`.
    pub fn close(
        check_id: &str,
        value: impl Into<Scalar>,
        expected: impl Into<Scalar>,
        tolerance: f64,
    ) -> Self {
        let (v, e) = (value.into(), expected.into());
        let diff = (as_complex(v) - as_complex(e)).norm();
        Self::new(check_id, diff <= tolerance, v, e, tolerance)
    }

    /// Passes when `lo <= value <= hi`; expected is the midpoint, tolerance the half-width.
    pub fn within_range(check_id: &str, value: f64, range: [f64; 2]) -> Self {
        let [lo, hi] = range;
        Self::new(
            check_id,
            (lo..=hi).contains(&value),
            value.into(),
            (0.5 * (lo + hi)).into(),
            0.5 * (hi - lo),
        )
    }

    /// Passes when the estimate lies within `sigmas` standard errors of `expected`.
    pub fn monte_carlo(check_id: &str, stat: &MCStat, expected: Complex64, sigmas: f64) -> Self {
        Self::estimate(
            check_id,
            stat.mean,
            stat.se(),
            stat.n_paths,
            expected,
            sigmas,
        )
    }

    /// Passes when `|mean - expected| ≤ sigmas · se`.
    pub fn estimate(
        check_id: &str,
        mean: Complex64,
        se: f64,
        n_paths: usize,
        expected: Complex64,
        sigmas: f64,
    ) -> Self {
        let pass = (mean - expected).norm() <= sigmas * se;
        let mut r = Self::new(check_id, pass, mean.into(), expected.into(), sigmas * se);
        r.standard_error = Some(se);
        r.note = Some(format!("{n_paths} paths"));
        r
    }

    /// Passes when the predicate holds; value and expected are recorded as given.
    pub fn predicate(
        check_id: &str,
        pass: bool,
        value: impl Into<Scalar>,
        expected: impl Into<Scalar>,
    ) -> Self {
        Self::new(check_id, pass, value.into(), expected.into(), 0.0)
    }

    /// A check that could not run.
    pub fn error(check_id: &str, err: impl fmt::Display) -> Self {
        let mut r = Self::new(check_id, false, f64::NAN.into(), f64::NAN.into(), 0.0);
        r.note = Some(err.to_string());
        r
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn as_complex(s: Scalar) -> Complex64 {
    match s {
        Scalar::Real(x) => Complex64::new(x, 0.0),
        Scalar::Complex(z) => z,
    }
}
