use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use osg_bench::{large_language, recording};
use osg_core::language::{select_salient, simplified_paths};
use osg_core::{describe, normalize, rasterize, recognize, DescriptorConfig, RasterConfig};

fn pipeline(c: &mut Criterion) {
    let lang = large_language();
    let rec = recording("circle", 300);
    let norm = normalize(&rec).unwrap();
    let ids = select_salient(&norm, lang.salience_alpha).unwrap();
    let polys = simplified_paths(&norm, &ids, lang.rdp_epsilon).unwrap();
    let raster = RasterConfig::default();

    c.bench_function("recognize_300_frames_8_refs", |b| b.iter(|| recognize(black_box(&rec), &lang).unwrap()));
    c.bench_function("normalize_300_frames", |b| b.iter(|| normalize(black_box(&rec)).unwrap()));
    c.bench_function("rasterize_256", |b| b.iter(|| rasterize(black_box(&polys), raster).unwrap()));
    c.bench_function("describe_256", |b| {
        b.iter(|| describe(black_box(&polys), raster, &DescriptorConfig::default()).unwrap())
    });
}

criterion_group!(benches, pipeline);
criterion_main!(benches);
