use analysis::{elbow, kmeans, AnalysisError, Clustering};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn blobs(centers: &[[f64; 3]], per: usize, sd: f64, seed: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, sd).unwrap();
    let mut pts = Vec::new();
    let mut truth = Vec::new();
    for (c, center) in centers.iter().enumerate() {
        while pts.len() < (c + 1) * per {
            let a = center[0] + noise.sample(&mut rng);
            let b = center[1] + noise.sample(&mut rng);
            let p = vec![a, b, 1.0 - a - b];
            if p.iter().all(|&v| v >= 0.0) {
                pts.push(p);
                truth.push(c);
            }
        }
    }
    (pts, truth)
}

fn sse(points: &[Vec<f64>], labels: &[usize], k: usize) -> f64 {
    (0..k)
        .map(|c| {
            let members: Vec<&Vec<f64>> = points.iter().zip(labels).filter(|(_, &l)| l == c).map(|(p, _)| p).collect();
            if members.is_empty() {
                return 0.0;
            }
            let d = members[0].len();
            let mean: Vec<f64> = (0..d).map(|j| members.iter().map(|p| p[j]).sum::<f64>() / members.len() as f64).collect();
            members.iter().map(|p| p.iter().zip(&mean).map(|(x, m)| (x - m).powi(2)).sum::<f64>()).sum()
        })
        .sum()
}

/// Exact 2-means on planar data: an optimal partition is cut by a line, and
/// some optimal line passes through two data points; trying every pair and
/// every side for the two points on the line covers all such cuts.
fn brute_two_means(points: &[Vec<f64>]) -> (f64, Vec<usize>) {
    let xy: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
    let n = xy.len();
    let mut best = (f64::INFINITY, Vec::new());
    for i in 0..n {
        for j in i + 1..n {
            let (dx, dy) = (xy[j].0 - xy[i].0, xy[j].1 - xy[i].1);
            let side: Vec<f64> = xy.iter().map(|&(x, y)| dx * (y - xy[i].1) - dy * (x - xy[i].0)).collect();
            for mask in 0..4 {
                let labels: Vec<usize> = (0..n)
                    .map(|t| {
                        if t == i {
                            mask & 1
                        } else if t == j {
                            (mask >> 1) & 1
                        } else {
                            usize::from(side[t] > 0.0)
                        }
                    })
                    .collect();
                if labels.iter().all(|&l| l == labels[0]) {
                    continue;
                }
                let e = sse(points, &labels, 2);
                if e < best.0 {
                    best = (e, labels);
                }
            }
        }
    }
    best
}

fn check_fixed_point(points: &[Vec<f64>], c: &Clustering) {
    for (k, centroid) in c.centroids.iter().enumerate() {
        let members: Vec<&Vec<f64>> = points.iter().zip(&c.assignment).filter(|(_, &a)| a == k).map(|(p, _)| p).collect();
        assert_eq!(members.len(), c.sizes[k]);
        for j in 0..centroid.len() {
            let m = members.iter().map(|p| p[j]).sum::<f64>() / members.len() as f64;
            assert!((m - centroid[j]).abs() < 1e-12);
        }
    }
    assert!((sse(points, &c.assignment, c.k) - c.total_error).abs() < 1e-9);
    assert!(c.history.windows(2).all(|w| w[1] <= w[0] + 1e-12));
}

#[test]
fn identical_points() {
    let pts = vec![vec![0.2, 0.3, 0.5]; 9];
    let c = kmeans(&pts, 1, 10, 0).unwrap();
    assert!(c.centroids[0].iter().zip([0.2, 0.3, 0.5]).all(|(a, b)| (a - b).abs() < 1e-15));
    assert!(c.total_error < 1e-30);
    assert_eq!(c.sizes, vec![9]);
    assert!(matches!(kmeans(&pts, 2, 10, 0), Err(AnalysisError::Invalid(_))));
}

#[test]
fn two_blobs_match_brute_force() {
    // radius ~ 2 sd = 0.03, separation 0.3
    let (pts, truth) = blobs(&[[0.3, 0.3, 0.4], [0.3, 0.6, 0.1]], 20, 0.015, 5);
    let c = kmeans(&pts, 2, 50, 1).unwrap();
    check_fixed_point(&pts, &c);
    let (oracle, labels) = brute_two_means(&pts);
    assert!((c.total_error - oracle).abs() < 1e-12, "{} vs {oracle}", c.total_error);
    let same = |a: &[usize], b: &[usize]| (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])));
    assert!(same(&c.assignment, &labels));
    assert!(same(&c.assignment, &truth));
}

#[test]
fn deterministic_under_seed() {
    let (pts, _) = blobs(&[[0.2, 0.2, 0.6], [0.5, 0.4, 0.1], [0.1, 0.7, 0.2]], 30, 0.1, 9);
    let a = kmeans(&pts, 4, 200, 77).unwrap();
    let b = kmeans(&pts, 4, 200, 77).unwrap();
    assert_eq!(a, b);
    check_fixed_point(&pts, &a);
    assert_eq!(a.restarts, 200);
    assert!(a.centroids.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn more_restarts_never_worse() {
    let (pts, _) = blobs(&[[0.2, 0.2, 0.6], [0.5, 0.4, 0.1]], 40, 0.2, 3);
    let few = kmeans(&pts, 5, 1, 4).unwrap();
    let many = kmeans(&pts, 5, 100, 4).unwrap();
    // restart 0 is shared, so the best of 100 includes it
    assert!(many.total_error <= few.total_error);
}

const SEVEN: [[f64; 3]; 7] = [
    [0.85, 0.075, 0.075],
    [0.075, 0.85, 0.075],
    [0.075, 0.075, 0.85],
    [0.45, 0.45, 0.1],
    [0.45, 0.1, 0.45],
    [0.1, 0.45, 0.45],
    [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
];

#[test]
fn seven_blobs_elbow_at_seven() {
    let (pts, _) = blobs(&SEVEN, 30, 0.02, 11);
    let e = elbow(&pts, 2..=15, 100, 3).unwrap();
    assert_eq!(e.ks, (2..=15).collect::<Vec<_>>());
    assert_eq!(e.suggested, 7, "errors {:?}", e.errors);
    assert!(e.errors.windows(2).all(|w| w[1] < w[0]), "{:?}", e.errors);
    let line = e.polyline();
    assert_eq!(line.len(), 14);
    assert_eq!(line[5], [7.0, e.errors[5]]);
}

#[test]
fn errors_strictly_decrease_on_spread_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let pts: Vec<Vec<f64>> = (0..60).map(|_| game_core::sample::uniform_simplex(&mut rng, 3)).collect();
    let e = elbow(&pts, 2..=15, 60, 5).unwrap();
    assert!(e.errors.windows(2).all(|w| w[1] < w[0]), "{:?}", e.errors);
    assert!((2..=15).contains(&e.suggested));
}

#[test]
fn elbow_caps_k_at_distinct_points() {
    let pts = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.5, 0.5], vec![0.5, 0.5]];
    let e = elbow(&pts, 2..=15, 5, 0).unwrap();
    assert_eq!(e.ks, vec![2, 3]);
    assert_eq!(e.errors[1], 0.0);
}

#[test]
fn empty_cluster_is_reseeded() {
    // uneven duplicates make some starts collapse a centroid
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut pts = vec![vec![0.0, 1.0]; 30];
    pts.extend((0..10).map(|_| {
        let a: f64 = rng.random_range(0.6..1.0);
        vec![a, 1.0 - a]
    }));
    let c = kmeans(&pts, 4, 300, 2).unwrap();
    assert!(c.sizes.iter().all(|&s| s > 0));
    check_fixed_point(&pts, &c);
}

#[test]
fn bad_input() {
    assert!(kmeans(&[], 1, 1, 0).is_err());
    assert!(kmeans(&[vec![1.0]], 1, 0, 0).is_err());
    assert!(kmeans(&[vec![1.0, 0.0], vec![1.0]], 1, 1, 0).is_err());
    assert!(kmeans(&[vec![f64::NAN, 0.0]], 1, 1, 0).is_err());
}
