//! One-shot, training-free gesture recognition from pose keypoint trajectories.
//!
//! A demonstration is normalized to the torso, its salient keypoint paths are
//! simplified and rasterized, and the resulting shape is summarized by Hu,
//! Zernike and Fourier descriptors plus four geometric metrics. Recognition is
//! a seven-way nearest-reference vote over those descriptors.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod augment;
pub mod demos;
pub mod descriptors;
pub mod error;
pub mod geom;
pub mod language;
pub mod metrics;
pub mod recognizer;
pub mod session;
pub mod shape;
pub mod trajectory;

pub use augment::{augment, make_dataset, AugmentConfig};
pub use descriptors::{describe, DescriptorConfig, DescriptorSet};
pub use error::{Error, Result};
pub use geom::{BoundingBox, Point, Polyline2D};
pub use language::{define_gesture, GestureLanguage, ReferenceGesture};
pub use metrics::SecondaryMetrics;
pub use recognizer::{evaluate, recognize, recognize_with, Evaluation, RecognitionResult, RecognizerConfig, Vote, Voter};
pub use session::{segment_stream, KeypointStream, SessionConfig, SessionState, StreamEvent, StreamHeader};
pub use shape::{rasterize, RasterConfig, ShapeImage};
pub use trajectory::{normalize, GestureTrajectory, Keypoint, KeypointFrame};
