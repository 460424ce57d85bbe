//! Stream segmentation and augmentation properties.

use std::f64::consts::PI;

use osg_core::demos::{demonstration, demonstration_stream, LARGE_VOCABULARY};
use osg_core::trajectory::torso_relative_extent;
use osg_core::{augment, make_dataset, segment_stream, AugmentConfig, KeypointFrame, KeypointStream, SessionConfig, StreamEvent};
use proptest::prelude::*;

#[derive(Debug, Clone)]
enum Step {
    Frame(f64),
    Trigger(f64),
}

fn script() -> impl Strategy<Value = Vec<Step>> {
    prop::collection::vec((prop::bool::weighted(0.15), 0.01f64..0.4), 0..120).prop_map(|v| {
        let mut t = 0.0;
        v.into_iter()
            .map(|(trigger, dt)| {
                t += dt;
                if trigger { Step::Trigger(t) } else { Step::Frame(t) }
            })
            .collect()
    })
}

fn events(steps: &[Step]) -> Vec<StreamEvent> {
    steps
        .iter()
        .map(|s| match *s {
            Step::Frame(t) => StreamEvent::Frame(KeypointFrame::new(t).with("right_wrist", t * 10.0, -t)),
            Step::Trigger(t) => StreamEvent::Trigger { t },
        })
        .collect()
}

/// Reference segmentation: the frame times of every kept recording.
fn expected(steps: &[Step], cfg: SessionConfig) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut current: Option<Vec<f64>> = None;
    let mut quiet_until = f64::NEG_INFINITY;
    for s in steps {
        match *s {
            Step::Frame(t) => {
                if let Some(c) = current.as_mut() {
                    c.push(t);
                }
            }
            Step::Trigger(t) if t >= quiet_until => {
                quiet_until = t + cfg.debounce;
                match current.take() {
                    None => current = Some(Vec::new()),
                    Some(c) if c.len() >= cfg.min_frames => out.push(c),
                    Some(_) => {}
                }
            }
            Step::Trigger(_) => {}
        }
    }
    out
}

fn frame_times(segs: &[osg_core::GestureTrajectory]) -> Vec<Vec<f64>> {
    segs.iter().map(|g| g.frames().iter().map(|f| f.t).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn segmentation_keeps_every_frame(steps in script(), debounce in 0.0f64..1.0, min_frames in 1usize..6) {
        let cfg = SessionConfig { debounce, min_frames };
        let segs = segment_stream(&events(&steps), cfg).unwrap();
        prop_assert_eq!(frame_times(&segs), expected(&steps, cfg));
    }

    #[test]
    fn idle_frames_are_absorbed(steps in script(), extra in prop::collection::vec(0usize..200, 0..20)) {
        let cfg = SessionConfig::default();
        let base = segment_stream(&events(&steps), cfg).unwrap();
        // Duplicate frames that arrive while idle.
        let mut idle = true;
        let mut quiet_until = f64::NEG_INFINITY;
        let mut padded = Vec::new();
        for (i, s) in steps.iter().enumerate() {
            padded.push(s.clone());
            match *s {
                Step::Frame(t) if idle && extra.contains(&i) => padded.push(Step::Frame(t)),
                Step::Trigger(t) if t >= quiet_until => {
                    quiet_until = t + cfg.debounce;
                    idle = !idle;
                }
                _ => {}
            }
        }
        prop_assert_eq!(segment_stream(&events(&padded), cfg).unwrap(), base);
    }

    #[test]
    fn replay_is_deterministic(steps in script()) {
        let stream = KeypointStream { header: Default::default(), events: events(&steps) };
        let text = stream.to_jsonl();
        let a = segment_stream(&KeypointStream::parse(&text).unwrap().events, SessionConfig::default()).unwrap();
        let b = segment_stream(&KeypointStream::parse(&text).unwrap().events, SessionConfig::default()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn dataset_samples_match_direct_augmentation(n in 1usize..5, seed in 0u64..1000) {
        let demos: Vec<_> = LARGE_VOCABULARY[..3]
            .iter()
            .map(|l| (l.to_string(), demonstration(l, 30).unwrap()))
            .collect();
        let cfg = AugmentConfig { seed, ..Default::default() };
        let ds = make_dataset(&demos, n, &cfg).unwrap();
        prop_assert_eq!(ds.len(), 3 * n);
        for (j, (traj, label)) in ds.iter().enumerate() {
            let (l, i) = (j / n, j % n);
            prop_assert_eq!(label, &demos[l].0);
            prop_assert_eq!(traj, &augment(&demos[l].1, &cfg, (l * n + i) as u64).unwrap());
        }
    }
}

#[test]
fn demonstration_streams_round_trip() {
    for name in LARGE_VOCABULARY {
        let s = demonstration_stream(name, 40).unwrap();
        let parsed = KeypointStream::parse(&s.to_jsonl()).unwrap();
        assert_eq!(parsed, s);
        let segs = segment_stream(&parsed.events, SessionConfig::default()).unwrap();
        assert_eq!(segs.len(), 1);
    }
}

#[test]
fn noise_has_rayleigh_mean_displacement() {
    let traj = demonstration("circle", 120).unwrap();
    let sigma = 0.02;
    let cfg = AugmentConfig::identity(77).with_noise(sigma);
    let noisy = augment(&traj, &cfg, 0).unwrap();
    let mut total = 0.0;
    let mut count = 0usize;
    for (a, b) in traj.frames().iter().zip(noisy.frames()) {
        for (id, k) in &a.keypoints {
            total += k.pos.distance(b.get(id).unwrap());
            count += 1;
        }
    }
    assert!(count >= 1000);
    let mean = total / count as f64;
    let expected = sigma * torso_relative_extent(&traj).unwrap() * (PI / 2.0).sqrt();
    assert!((mean - expected).abs() <= 0.1 * expected, "{mean} vs {expected}");
}
