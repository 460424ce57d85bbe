//! Trigger-delimited segmentation of a keypoint stream, plus the JSON Lines
//! stream file format.
//!
//! A trigger starts a recording, the next trigger outside the debounce
//! window stops it and emits the buffered frames as one gesture.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::trajectory::{GestureTrajectory, Keypoint, KeypointFrame};

pub const STREAM_VERSION: u32 = 1;
/// Slack allowed for timestamp regressions between consecutive events.
const ORDER_SLACK: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub enum StreamEvent {
    Frame(KeypointFrame),
    Trigger { t: f64 },
}

impl StreamEvent {
    pub fn t(&self) -> f64 {
        match self {
            StreamEvent::Frame(f) => f.t,
            StreamEvent::Trigger { t } => *t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SessionConfig {
    /// Seconds after a trigger during which further triggers are ignored.
    pub debounce: f64,
    /// Recordings shorter than this are dropped by [`segment_stream`].
    pub min_frames: usize,
}

impl Default for SessionConfig {
    fn default() -> Self {
        Self { debounce: 0.75, min_frames: 5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Idle,
    Recording,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SessionState {
    pub phase: Phase,
    pub buffer: Vec<KeypointFrame>,
    pub debounce_until: f64,
    last_t: Option<f64>,
    config: SessionConfig,
}

impl Default for SessionState {
    fn default() -> Self {
        Self::new(SessionConfig::default())
    }
}

impl SessionState {
    pub fn new(config: SessionConfig) -> Self {
        Self {
            phase: Phase::Idle,
            buffer: Vec::new(),
            debounce_until: f64::NEG_INFINITY,
            last_t: None,
            config,
        }
    }

    /// Advance by one event; returns the next state and a finished gesture, if any.
    pub fn step(mut self, ev: StreamEvent) -> Result<(Self, Option<GestureTrajectory>)> {
        let t = ev.t();
        if let Some(prev) = self.last_t {
            if t < prev - ORDER_SLACK {
                return Err(Error::OutOfOrder { t, prev });
            }
        }
        let now = self.last_t.map_or(t, |p| t.max(p));
        self.last_t = Some(now);

        let mut emitted = None;
        match (self.phase, ev) {
            (Phase::Idle, StreamEvent::Frame(_)) => {}
            (Phase::Recording, StreamEvent::Frame(mut f)) => {
                f.t = now;
                self.buffer.push(f);
            }
            (_, StreamEvent::Trigger { .. }) if now < self.debounce_until => {
                log::debug!("trigger at t={now} ignored (debounce)");
            }
            (Phase::Idle, StreamEvent::Trigger { .. }) => {
                self.phase = Phase::Recording;
                self.buffer.clear();
                self.debounce_until = now + self.config.debounce;
            }
            (Phase::Recording, StreamEvent::Trigger { .. }) => {
                self.phase = Phase::Idle;
                self.debounce_until = now + self.config.debounce;
                let frames = std::mem::take(&mut self.buffer);
                if frames.is_empty() {
                    log::warn!("recording stopped at t={now} without any frames");
                } else {
                    emitted = Some(GestureTrajectory::new(frames)?);
                }
            }
        }
        Ok((self, emitted))
    }
}

/// Replay a whole stream and collect every complete recording with at least
/// `min_frames` frames.
pub fn segment_stream(events: &[StreamEvent], config: SessionConfig) -> Result<Vec<GestureTrajectory>> {
    let mut state = SessionState::new(config);
    let mut out = Vec::new();
    for ev in events {
        let (next, emitted) = state.step(ev.clone())?;
        state = next;
        if let Some(g) = emitted {
            if g.len() < config.min_frames {
                log::warn!("dropping {}-frame recording (minimum {})", g.len(), config.min_frames);
            } else {
                out.push(g);
            }
        }
    }
    if state.phase == Phase::Recording {
        log::warn!("discarding unterminated recording of {} frames", state.buffer.len());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StreamHeader {
    pub version: u32,
    pub width: u32,
    pub height: u32,
}

impl Default for StreamHeader {
    fn default() -> Self {
        Self { version: STREAM_VERSION, width: 640, height: 480 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KeypointStream {
    pub header: StreamHeader,
    pub events: Vec<StreamEvent>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum Line {
    Header { version: u32, width: u32, height: u32 },
    Frame { t: f64, keypoints: BTreeMap<String, Vec<f64>> },
    Event { name: String, t: f64 },
}

impl KeypointStream {
    pub fn new(header: StreamHeader, events: Vec<StreamEvent>) -> Self {
        Self { header, events }
    }

    /// Parse the JSON Lines stream format. The first non-blank line must be the header.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header = None;
        let mut events = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let raw = raw.trim();
            if raw.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: lineno, msg };
            let line: Line = serde_json::from_str(raw).map_err(|e| err(e.to_string()))?;
            match (line, header.is_some()) {
                (Line::Header { version, width, height }, false) => {
                    if version != STREAM_VERSION {
                        return Err(Error::VersionMismatch { found: version, expected: STREAM_VERSION });
                    }
                    header = Some(StreamHeader { version, width, height });
                }
                (Line::Header { .. }, true) => return Err(err("duplicate header".into())),
                (_, false) => return Err(err("first line must be the stream header".into())),
                (Line::Frame { t, keypoints }, true) => {
                    if !(t.is_finite() && t >= 0.0) {
                        return Err(err(format!("invalid timestamp {t}")));
                    }
                    let mut frame = KeypointFrame::new(t);
                    for (id, v) in keypoints {
                        let kp = match v.as_slice() {
                            [x, y] => Keypoint { pos: Point::new(*x, *y), confidence: None },
                            [x, y, c] => Keypoint { pos: Point::new(*x, *y), confidence: Some(*c) },
                            _ => return Err(err(format!("keypoint `{id}` must be [x, y] or [x, y, c]"))),
                        };
                        if !kp.pos.is_finite() {
                            return Err(err(format!("keypoint `{id}` is not finite")));
                        }
                        frame.keypoints.insert(id, kp);
                    }
                    events.push(StreamEvent::Frame(frame));
                }
                (Line::Event { name, t }, true) => {
                    if name == "trigger" {
                        events.push(StreamEvent::Trigger { t });
                    } else {
                        log::debug!("line {lineno}: ignoring event `{name}`");
                    }
                }
            }
        }
        let header = header.ok_or(Error::Parse { line: 1, msg: "empty stream".into() })?;
        Ok(Self { header, events })
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let h = self.header;
        let mut push = |l: &Line| {
            out.push_str(&serde_json::to_string(l).expect("stream line serializes"));
            out.push('\n');
        };
        push(&Line::Header { version: h.version, width: h.width, height: h.height });
        for ev in &self.events {
            match ev {
                StreamEvent::Frame(f) => push(&Line::Frame {
                    t: f.t,
                    keypoints: f
                        .keypoints
                        .iter()
                        .map(|(id, k)| {
                            let mut v = vec![k.pos.x, k.pos.y];
                            v.extend(k.confidence);
                            (id.clone(), v)
                        })
                        .collect(),
                }),
                StreamEvent::Trigger { t } => push(&Line::Event { name: "trigger".into(), t: *t }),
            }
        }
        out
    }

    /// Wrap a single recording in start/stop triggers.
    pub fn bracket(traj: &GestureTrajectory, header: StreamHeader, lead: f64) -> Self {
        let frames = traj.frames();
        let t0 = frames[0].t;
        let shift = lead - t0;
        let mut events = vec![StreamEvent::Trigger { t: 0.0 }];
        for f in frames {
            let mut g = f.clone();
            g.t += shift;
            events.push(StreamEvent::Frame(g));
        }
        let end = frames.last().unwrap().t + shift;
        events.push(StreamEvent::Trigger { t: end + lead });
        Self { header, events }
    }
}
