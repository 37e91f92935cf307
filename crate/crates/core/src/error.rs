use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ErfbpError {
    #[error("mass {name} = {value} is below the floor {floor:e}")]
    MassOutOfRange { name: &'static str, value: f64, floor: f64 },
    #[error("invalid masses: {0}")]
    InvalidMasses(String),
    #[error("primary configuration cannot be oriented (m1 carries the whole mass)")]
    DegenerateK,
    #[error("position ({x}, {y}) is within the collision tolerance of primary {primary}")]
    CollisionSingularity { x: f64, y: f64, primary: usize },
    #[error("equilibrium count not stable under grid refinement: {counts:?}")]
    GridTooCoarse { counts: Vec<usize> },
    #[error("label ambiguity: {0}")]
    LabelAmbiguity(String),
    #[error("equilibrium is not linearly stable (c2 = {c2}, c0 = {c0})")]
    NotStable { c2: f64, c0: f64 },
    #[error("family {label} lost at masses ({m1}, {m2})")]
    FamilyLost { label: String, m1: f64, m2: f64 },
    #[error("extracted curve is not closed inside the scanned region")]
    OpenCurveWarning,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("output error: {0}")]
    Output(String),
}

impl From<std::io::Error> for ErfbpError {
    fn from(e: std::io::Error) -> Self {
        ErfbpError::Output(e.to_string())
    }
}

impl From<csv::Error> for ErfbpError {
    fn from(e: csv::Error) -> Self {
        ErfbpError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for ErfbpError {
    fn from(e: serde_json::Error) -> Self {
        ErfbpError::Output(e.to_string())
    }
}

impl ErfbpError {
    /// True for errors caused by bad user input rather than numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            ErfbpError::MassOutOfRange { .. }
                | ErfbpError::InvalidMasses(_)
                | ErfbpError::InvalidInput(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, ErfbpError>;
