//! Seven-voter majority classification of a recording against a language.
//!
//! Every reference is compared independently: the recording is filtered to
//! that reference's salient keypoints, simplified, rendered and described,
//! and each voter (three descriptors, four scalar metrics) casts one vote for
//! the reference it finds closest. The label with the most votes wins.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::descriptors::{descriptor_distance, DescriptorSet};
use crate::error::{Error, Result};
use crate::language::{canonical_descriptors, simplified_paths, GestureLanguage, ReferenceGesture};
use crate::shape::RasterConfig;
use crate::trajectory::{normalize, GestureTrajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Voter {
    Hu,
    Zernike,
    Fourier,
    AspectRatio,
    Solidity,
    Circularity,
    PathComplexity,
}

impl Voter {
    pub const ALL: [Voter; 7] = [
        Voter::Hu,
        Voter::Zernike,
        Voter::Fourier,
        Voter::AspectRatio,
        Voter::Solidity,
        Voter::Circularity,
        Voter::PathComplexity,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Voter::Hu => "hu",
            Voter::Zernike => "zernike",
            Voter::Fourier => "fourier",
            Voter::AspectRatio => "aspect_ratio",
            Voter::Solidity => "solidity",
            Voter::Circularity => "circularity",
            Voter::PathComplexity => "path_complexity",
        }
    }
}

impl fmt::Display for Voter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Per-voter distances from a recording to one reference, in [`Voter::ALL`] order.
pub type VoterDistances = [f64; 7];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vote {
    pub voter: Voter,
    pub chosen_label: String,
    /// Infinite distances (unusable references) serialize as `null`.
    pub distances: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecognitionResult {
    pub predicted: String,
    pub tie_broken: bool,
    pub tally: BTreeMap<String, usize>,
    pub votes: Vec<Vote>,
}

/// Voter weights; all equal by default, which is plain majority voting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecognizerConfig {
    pub weights: [f64; 7],
}

impl Default for RecognizerConfig {
    fn default() -> Self {
        Self { weights: [1.0; 7] }
    }
}

fn distances_between(rec: &DescriptorSet, reference: &DescriptorSet) -> Result<VoterDistances> {
    let (ma, mb) = (rec.metrics.as_array(), reference.metrics.as_array());
    Ok([
        descriptor_distance(&rec.hu.0, &reference.hu.0)?,
        descriptor_distance(&rec.zernike.0, &reference.zernike.0)?,
        descriptor_distance(&rec.fourier.0, &reference.fourier.0)?,
        (ma[0] - mb[0]).abs(),
        (ma[1] - mb[1]).abs(),
        (ma[2] - mb[2]).abs(),
        (ma[3] - mb[3]).abs(),
    ])
}

/// Salient keypoints of `reference` that the recording observed at least twice.
fn observed_salient(norm: &GestureTrajectory, reference: &ReferenceGesture) -> Vec<String> {
    reference
        .salient_keypoints
        .iter()
        .filter(|id| norm.frames().iter().filter(|f| f.keypoints.contains_key(id.as_str())).count() >= 2)
        .cloned()
        .collect()
}

fn reference_descriptors(reference: &ReferenceGesture, raster: RasterConfig) -> Result<DescriptorSet> {
    match &reference.descriptors {
        Some(d) => Ok(d.clone()),
        None => canonical_descriptors(&reference.ordered_polylines(), raster),
    }
}

/// Per-voter distances between a normalized recording and one reference.
pub fn score_against(
    norm: &GestureTrajectory,
    reference: &ReferenceGesture,
    raster: RasterConfig,
    rdp_epsilon: f64,
) -> Result<VoterDistances> {
    let ids = observed_salient(norm, reference);
    if ids.is_empty() {
        return Err(Error::MissingSalient(reference.salient_keypoints.clone()));
    }
    let polys = simplified_paths(norm, &ids, rdp_epsilon)?;
    let rec = canonical_descriptors(&polys, raster)?;
    distances_between(&rec, &reference_descriptors(reference, raster)?)
}

/// Classify with equal voter weights.
pub fn recognize(traj: &GestureTrajectory, lang: &GestureLanguage) -> Result<RecognitionResult> {
    recognize_with(traj, lang, &RecognizerConfig::default())
}

pub fn recognize_with(
    traj: &GestureTrajectory,
    lang: &GestureLanguage,
    cfg: &RecognizerConfig,
) -> Result<RecognitionResult> {
    if lang.is_empty() {
        return Err(Error::EmptyLanguage);
    }
    let norm = normalize(traj)?;

    // References sharing a salient set share one rendering of the recording.
    let mut cache: HashMap<Vec<String>, Result<DescriptorSet>> = HashMap::new();
    let mut table: Vec<(&str, VoterDistances)> = Vec::with_capacity(lang.len());
    let mut usable = 0usize;
    for reference in &lang.gestures {
        let ids = observed_salient(&norm, reference);
        let dist = if ids.is_empty() {
            log::debug!("`{}`: no salient keypoint observed", reference.label);
            None
        } else {
            let rec = cache.entry(ids.clone()).or_insert_with(|| {
                simplified_paths(&norm, &ids, lang.rdp_epsilon)
                    .and_then(|p| canonical_descriptors(&p, lang.raster_config))
            });
            match rec {
                Ok(rec) => reference_descriptors(reference, lang.raster_config)
                    .and_then(|r| distances_between(rec, &r))
                    .map_err(|e| log::debug!("`{}`: {e}", reference.label))
                    .ok(),
                Err(e) => {
                    log::debug!("`{}`: recording unusable: {e}", reference.label);
                    None
                }
            }
        };
        if dist.is_some() {
            usable += 1;
        }
        table.push((reference.label.as_str(), dist.unwrap_or([f64::INFINITY; 7])));
    }
    if usable == 0 {
        return Err(Error::AllReferencesMissing);
    }
    Ok(tally_votes(&table, cfg))
}

/// Cast one vote per voter and resolve the majority. Ties within a voter go
/// to the lexicographically smallest label; ties in the final tally go to the
/// lowest sum of per-voter distance ranks, then to the smallest label.
pub fn tally_votes(table: &[(&str, VoterDistances)], cfg: &RecognizerConfig) -> RecognitionResult {
    let mut votes = Vec::with_capacity(7);
    let mut tally: BTreeMap<String, usize> = table.iter().map(|(l, _)| (l.to_string(), 0)).collect();
    let mut score: BTreeMap<&str, f64> = table.iter().map(|(l, _)| (*l, 0.0)).collect();
    let mut rank_sum: BTreeMap<&str, usize> = table.iter().map(|(l, _)| (*l, 0)).collect();

    for (v, voter) in Voter::ALL.iter().enumerate() {
        let chosen = table
            .iter()
            .min_by(|a, b| a.1[v].total_cmp(&b.1[v]).then_with(|| a.0.cmp(b.0)))
            .map(|(l, _)| *l)
            .expect("non-empty table");
        *tally.get_mut(chosen).unwrap() += 1;
        *score.get_mut(chosen).unwrap() += cfg.weights[v];
        for (label, d) in table {
            let rank = 1 + table.iter().filter(|(_, o)| o[v] < d[v]).count();
            *rank_sum.get_mut(label).unwrap() += rank;
        }
        votes.push(Vote {
            voter: *voter,
            chosen_label: chosen.to_string(),
            distances: table.iter().map(|(l, d)| (l.to_string(), d[v])).collect(),
        });
    }

    let best = score.values().copied().fold(f64::NEG_INFINITY, f64::max);
    let leaders: Vec<&str> = score.iter().filter(|(_, &s)| s == best).map(|(l, _)| *l).collect();
    let tie_broken = leaders.len() > 1;
    let predicted = leaders
        .iter()
        .min_by(|a, b| rank_sum[*a].cmp(&rank_sum[*b]).then_with(|| a.cmp(b)))
        .unwrap()
        .to_string();
    RecognitionResult { predicted, tie_broken, tally, votes }
}

/// Confusion matrix over the language's labels: rows are true labels,
/// columns predicted labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<usize>>,
    pub total: usize,
    pub correct: usize,
    pub accuracy: f64,
}

impl Evaluation {
    /// Largest off-diagonal cell as `(true, predicted, count)`; `None` when
    /// every sample was classified correctly.
    pub fn max_off_diagonal(&self) -> Option<(&str, &str, usize)> {
        let mut best: Option<(&str, &str, usize)> = None;
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if i != j && c > 0 && best.is_none_or(|b| c > b.2) {
                    best = Some((&self.labels[i], &self.labels[j], c));
                }
            }
        }
        best
    }

    pub fn per_label_accuracy(&self) -> Vec<(&str, f64)> {
        self.labels
            .iter()
            .zip(&self.matrix)
            .enumerate()
            .map(|(i, (l, row))| {
                let n: usize = row.iter().sum();
                (l.as_str(), if n == 0 { f64::NAN } else { row[i] as f64 / n as f64 })
            })
            .collect()
    }
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.labels.iter().map(|l| l.len()).max().unwrap_or(4).max(6);
        write!(f, "{:>w$}", "true\\pred")?;
        for l in &self.labels {
            write!(f, " {l:>w$}")?;
        }
        writeln!(f)?;
        for (l, row) in self.labels.iter().zip(&self.matrix) {
            write!(f, "{l:>w$}")?;
            for c in row {
                write!(f, " {c:>w$}")?;
            }
            writeln!(f)?;
        }
        write!(f, "accuracy {:.4} ({}/{})", self.accuracy, self.correct, self.total)
    }
}

/// Recognize every sample and accumulate a confusion matrix. With
/// `threads > 1` samples are processed on a dedicated rayon pool; the result
/// does not depend on the thread count.
pub fn evaluate(
    samples: &[(GestureTrajectory, String)],
    lang: &GestureLanguage,
    threads: usize,
) -> Result<Evaluation> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let labels: Vec<String> = lang.labels().into_iter().map(String::from).collect();
    let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    if let Some((_, l)) = samples.iter().find(|(_, l)| !index.contains_key(l.as_str())) {
        return Err(Error::UnknownLabel(l.clone()));
    }

    let run = |s: &(GestureTrajectory, String)| recognize(&s.0, lang).map(|r| r.predicted);
    let predictions: Vec<String> = if threads > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(|| samples.par_iter().map(run).collect::<Result<Vec<_>>>())?
    } else {
        samples.iter().map(run).collect::<Result<Vec<_>>>()?
    };

    let mut matrix = vec![vec![0usize; labels.len()]; labels.len()];
    for ((_, truth), pred) in samples.iter().zip(&predictions) {
        matrix[index[truth.as_str()]][index[pred.as_str()]] += 1;
    }
    let correct = (0..labels.len()).map(|i| matrix[i][i]).sum();
    Ok(Evaluation {
        labels,
        matrix,
        total: samples.len(),
        correct,
        accuracy: correct as f64 / samples.len() as f64,
    })
}
