use histosynth::exemplar::bundled_exemplar;
use histosynth::patch::{
    find_match, reconstruct, reconstruct_with, seams, Cell, FillState, GridSpec, MatchQuery, PatchDataset,
    ReconstructOptions, Side,
};
use histosynth::rng::rng_from_seed;
use histosynth::{FlipAxis, LabeledPair};
use rand::seq::SliceRandom;
use rand::Rng;

fn small_exemplar() -> LabeledPair {
    bundled_exemplar().crop(96, 40, 64, 64).unwrap()
}

/// Float mean squared error over the strips of every materialized tile, then
/// the same no-flip preference and lowest-index tie break.
fn exhaustive_match(dataset: &PatchDataset, query: &MatchQuery, priority_factor: f64) -> usize {
    let mse: Vec<f64> = (0..dataset.len())
        .map(|i| {
            let tile = dataset.tile(i);
            let mut sum = 0.0;
            let mut count = 0.0;
            for s in &query.strips {
                for dy in 0..s.h {
                    for dx in 0..s.w {
                        let have = tile.image().get(s.x0 + dx, s.y0 + dy);
                        for c in 0..3 {
                            let want = s.pixels[(dy * s.w + dx) * 3 + c];
                            sum += (have[c] as f64 - want as f64).powi(2);
                            count += 1.0;
                        }
                    }
                }
            }
            sum / count
        })
        .collect();
    let best_in = |range: std::ops::Range<usize>| {
        range
            .min_by(|&a, &b| mse[a].partial_cmp(&mse[b]).unwrap().then(a.cmp(&b)))
            .unwrap()
    };
    let unflipped = best_in(0..dataset.group_len());
    let best = best_in(0..dataset.len());
    assert_eq!(dataset.entry(unflipped).flip, FlipAxis::None);
    if mse[unflipped] <= priority_factor * mse[best] {
        unflipped
    } else {
        best
    }
}

/// Partially filled canvases and the queries of their open cells that touch
/// at least one filled neighbour.
fn random_queries(dataset: &PatchDataset, spec: &GridSpec, count: usize, seed: u64) -> Vec<MatchQuery> {
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let mut state = FillState::new(*spec, rng.gen());
        let mut cells: Vec<Cell> = spec.cells().collect();
        cells.shuffle(&mut rng);
        let filled = rng.gen_range(1..cells.len());
        for &c in &cells[..filled] {
            let layer = state.blend_tile(dataset, c, rng.gen_range(0..dataset.len()));
            state.blend_mask(dataset, layer);
        }
        for &c in &cells[filled..] {
            let q = state.query(c);
            if q.is_constrained() && out.len() < count {
                out.push(q);
            }
        }
    }
    out
}

#[test]
fn find_match_equals_exhaustive_scan() {
    let spec = GridSpec::new(64, 5, 5).unwrap();
    let dataset = PatchDataset::build(&small_exemplar(), &spec, 10).unwrap();
    assert!(dataset.len() <= 500);
    let mut rng = rng_from_seed(0);
    for factor in [1.0, 1.1, 2.0] {
        for q in random_queries(&dataset, &spec, 100, 17) {
            let got = find_match(&dataset, &q, factor, &mut rng).unwrap();
            assert_eq!(got.index, exhaustive_match(&dataset, &q, factor), "{:?}", q.constrained_sides());
        }
    }
}

#[test]
fn strips_never_overlap() {
    let spec = GridSpec::new(64, 5, 5).unwrap();
    let dataset = PatchDataset::build(&small_exemplar(), &spec, 10).unwrap();
    for q in random_queries(&dataset, &spec, 50, 3) {
        let mut hit = vec![false; q.window.0 * q.window.1];
        for s in &q.strips {
            for y in s.y0..s.y0 + s.h {
                for x in s.x0..s.x0 + s.w {
                    assert!(!hit[y * q.window.0 + x]);
                    hit[y * q.window.0 + x] = true;
                }
            }
        }
    }
}

#[test]
fn four_by_four_on_the_exemplar() {
    let ex = bundled_exemplar();
    let spec = GridSpec::new(256, 4, 5).unwrap();
    let r = reconstruct_with(&ex, &spec, &ReconstructOptions::default(), 3).unwrap();
    assert_eq!(r.placements.len(), 16);
    assert!(r.placements.iter().all(|p| p.image_entry == p.mask_entry));
    assert_eq!(r.placements[0].mse, None);
    // A cell visited before all of its neighbours is matched freely.
    let mut filled = std::collections::HashSet::new();
    for p in &r.placements {
        let touches = Side::ALL
            .iter()
            .any(|&s| spec.neighbor(p.cell, s).is_some_and(|n| filled.contains(&n)));
        assert_eq!(p.mse.is_some(), touches, "{:?}", p.cell);
        filled.insert(p.cell);
    }
    assert_eq!((r.pair.width(), r.pair.height()), (256, 256));
    assert!(r.pair.mask().data().iter().all(|&v| v <= 1));
}

#[test]
fn single_cell_output_is_a_flipped_exemplar() {
    let ex = bundled_exemplar();
    let spec = GridSpec::new(256, 1, 5).unwrap();
    for seed in 0..6 {
        let out = reconstruct(&ex, &spec, seed).unwrap();
        assert!(FlipAxis::ALL.iter().any(|&f| ex.flip(f) == out));
    }
}

#[test]
fn blending_does_not_worsen_seams_on_average() {
    let ex = bundled_exemplar();
    let spec = GridSpec::new(256, 6, 5).unwrap();
    let dataset = PatchDataset::build(&ex, &spec, 5).unwrap();
    let runs = 12;
    let mut sums = vec![(0.0, 0.0); 2 * 6 * 5];
    for seed in 0..runs {
        let r = histosynth::patch::reconstruct_from_dataset(&dataset, &spec, 1.1, seed).unwrap();
        let report = seams::seam_report(r.pair.image(), &dataset, &spec, &r.placements);
        assert_eq!(report.len(), sums.len());
        for (acc, m) in sums.iter_mut().zip(&report) {
            acc.0 += m.blended;
            acc.1 += m.unblended;
        }
    }
    for (i, (b, u)) in sums.iter().enumerate() {
        assert!(b <= u, "boundary {i}: {} > {}", b / runs as f64, u / runs as f64);
    }
}

#[test]
fn seam_lines_face_each_other() {
    let ex = bundled_exemplar();
    let spec = GridSpec::new(256, 2, 5).unwrap();
    let out = reconstruct(&ex, &spec, 8).unwrap();
    let a = Cell { col: 0, row: 0 };
    let d = seams::seam_difference(out.image(), &spec, a, Side::Right).unwrap();
    let mut manual = 0.0;
    for y in 0..128 {
        let (l, r) = (out.image().get(127, y), out.image().get(128, y));
        manual += (0..3).map(|c| (l[c] as f64 - r[c] as f64).abs()).sum::<f64>();
    }
    assert!((d - manual / (128.0 * 3.0)).abs() < 1e-12);
    assert!(seams::seam_difference(out.image(), &spec, a, Side::Left).is_none());
}
