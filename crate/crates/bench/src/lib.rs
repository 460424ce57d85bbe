//! Shared fixtures for the pipeline benchmarks.

use osg_core::demos::{demonstration, LARGE_VOCABULARY};
use osg_core::{define_gesture, GestureLanguage, GestureTrajectory};

/// Language built from every scripted demonstration.
pub fn large_language() -> GestureLanguage {
    LARGE_VOCABULARY.iter().fold(GestureLanguage::default(), |lang, name| {
        let demo = demonstration(name, osg_core::demos::DEFAULT_FRAMES).expect("scripted gesture");
        define_gesture(&demo, name, &lang).expect("distinct labels")
    })
}

/// A long recording of `name`.
pub fn recording(name: &str, frames: usize) -> GestureTrajectory {
    demonstration(name, frames).expect("scripted gesture")
}
