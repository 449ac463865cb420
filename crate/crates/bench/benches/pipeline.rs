use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use tieup_bench::{long_document, long_sentence, shipped_extractor};
use tieup_core::discourse::lcs_length;
use tieup_core::pattern::match_sentence;
use tieup_core::token::{group_segments, recognize_names};

fn lcs(c: &mut Criterion) {
    let mut g = c.benchmark_group("lcs_length");
    for n in [8usize, 32, 128] {
        let a: String = "日本電信電話株式会社".chars().cycle().take(n).collect();
        let b: String = "電電公社エヌ・ティ・ティ".chars().cycle().take(n).collect();
        g.bench_with_input(BenchmarkId::from_parameter(n), &(a, b), |bch, (a, b)| {
            bch.iter(|| lcs_length(black_box(a), black_box(b)))
        });
    }
    g.finish();
}

fn matcher(c: &mut Criterion) {
    let extractor = shipped_extractor();
    let doc = group_segments(&recognize_names(&long_sentence(), &extractor.designators));
    let sentence = &doc.sentences[0];
    c.bench_function("match_sentence", |b| b.iter(|| match_sentence(black_box(sentence), &extractor.rules)));
}

fn extract(c: &mut Criterion) {
    let extractor = shipped_extractor();
    let mut g = c.benchmark_group("extract");
    for copies in [1usize, 4, 16] {
        let doc = long_document(copies);
        g.throughput(Throughput::Elements(doc.token_count() as u64));
        g.bench_with_input(BenchmarkId::from_parameter(copies), &doc, |b, doc| {
            b.iter(|| extractor.extract(black_box(doc)))
        });
    }
    g.finish();
}

criterion_group!(benches, lcs, matcher, extract);
criterion_main!(benches);
