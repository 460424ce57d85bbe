use thiserror::Error;

/// Everything that can go wrong inside the recognition pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("frame at t={t} has no torso keypoint (shoulders or hips)")]
    MissingTorso { t: f64 },
    #[error("gesture has no measurable motion (extent {extent:e})")]
    DegenerateExtent { extent: f64 },
    #[error("keypoint `{id}` has {count} observations, need at least 2")]
    EmptyPath { id: String, count: usize },
    #[error("shape is degenerate: {0}")]
    DegenerateShape(&'static str),
    #[error("image has no stroke pixels")]
    EmptyImage,
    #[error("convex hull needs at least 3 non-collinear points")]
    DegenerateHull,
    #[error("invalid Zernike order n={n}, m={m}")]
    InvalidOrder { n: i32, m: i32 },
    #[error("contour has vanishing first harmonic")]
    DegenerateContour,
    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("label `{0}` already defined in the language")]
    DuplicateLabel(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported format version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("none of the salient keypoints {0:?} were observed")]
    MissingSalient(Vec<String>),
    #[error("gesture language is empty")]
    EmptyLanguage,
    #[error("no reference gesture could be compared against the recording")]
    AllReferencesMissing,
    #[error("label `{0}` is not part of the language")]
    UnknownLabel(String),
    #[error("cannot evaluate an empty sample set")]
    EmptySamples,
    #[error("event at t={t} precedes previous event at t={prev}")]
    OutOfOrder { t: f64, prev: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
