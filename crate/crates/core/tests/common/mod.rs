#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use revloc::clustering::{attempt_seed, initial_centers};
use revloc::config::PipelineConfig;
use revloc::vsm::ReducedDataSet;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_dataset(rng: &mut ChaCha8Rng, m: usize, dim: usize) -> ReducedDataSet {
    let points: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect())
        .collect();
    ReducedDataSet::from_points((0..m).map(|i| format!("d{i:02}")).collect(), points).unwrap()
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    s
}

/// Plain Lloyd's k-means: same initial centers and visit order as the
/// library, nearest centroid with ties to the lower index, and an empty
/// cluster re-seeded at the point farthest from the remaining centroids.
/// Runs ending with an empty cluster restart from the next derived seed.
pub fn lloyd(points: &[Vec<f64>], k: usize, seed: u64, max_iter: usize, restarts: usize) -> Option<Vec<usize>> {
    for attempt in 0..=restarts {
        let init = initial_centers(points.len(), k, attempt_seed(seed, attempt));
        let mut cents: Vec<Vec<f64>> = init.iter().map(|&i| points[i].clone()).collect();
        let mut prev: Option<Vec<usize>> = None;
        for _ in 0..max_iter {
            let mut labels = Vec::with_capacity(points.len());
            for p in points {
                let mut best = 0;
                for j in 1..k {
                    if dist2(p, &cents[j]) < dist2(p, &cents[best]) {
                        best = j;
                    }
                }
                labels.push(best);
            }
            let mut counts = vec![0usize; k];
            let mut sums = vec![vec![0.0; points[0].len()]; k];
            for (p, &l) in points.iter().zip(&labels) {
                counts[l] += 1;
                for d in 0..p.len() {
                    sums[l][d] += p[d];
                }
            }
            for j in 0..k {
                if counts[j] > 0 {
                    cents[j] = sums[j].iter().map(|s| s / counts[j] as f64).collect();
                }
            }
            let mut taken = Vec::new();
            for j in 0..k {
                if counts[j] > 0 {
                    continue;
                }
                let mut far = None::<(f64, usize)>;
                for (i, p) in points.iter().enumerate() {
                    if taken.contains(&i) {
                        continue;
                    }
                    let near = (0..k)
                        .filter(|&c| counts[c] > 0)
                        .map(|c| dist2(p, &cents[c]))
                        .fold(f64::INFINITY, f64::min);
                    if far.is_none_or(|(d, _)| near > d) {
                        far = Some((near, i));
                    }
                }
                if let Some((_, i)) = far {
                    taken.push(i);
                    cents[j] = points[i].clone();
                }
            }
            let done = prev.as_ref() == Some(&labels);
            prev = Some(labels);
            if done {
                break;
            }
        }
        let labels = prev.unwrap();
        if (0..k).all(|j| labels.contains(&j)) {
            return Some(labels);
        }
    }
    None
}

pub const TOPICS: [(&str, [&str; 2], [&str; 6], &str); 3] = [
    (
        "BatteryMonitor.java",
        ["battery", "drain"],
        ["overheat", "charger", "percent", "idle", "overnight", "standby"],
        "power",
    ),
    (
        "CameraController.java",
        ["camera", "focus"],
        ["photo", "lens", "zoom", "flash", "blurry", "selfie"],
        "picture",
    ),
    (
        "NotificationCenter.java",
        ["notification", "sound"],
        ["ringtone", "vibrate", "badge", "silent", "alert", "chime"],
        "message",
    ),
];

/// A synthetic app with three disjoint topics: ten reviews per topic, one
/// source file per topic, and commits tagging each file with its topic's
/// words. Returns the config and the planted topic of each document id.
pub struct Planted {
    pub dir: tempfile::TempDir,
    pub config: PipelineConfig,
    pub truth: Vec<(String, usize)>,
}

impl Planted {
    pub fn out(&self) -> &Path {
        &self.config.output_dir
    }
}

pub fn planted_fixture() -> Planted {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    let mut r = rng(2024);
    let mut reviews = String::new();
    let mut truth = Vec::new();
    let mut order: Vec<(usize, usize)> = (0..3).flat_map(|t| (0..10).map(move |i| (t, i))).collect();
    // Interleave topics so the file order carries no signal.
    for i in (1..order.len()).rev() {
        let j = r.gen_range(0..=i);
        order.swap(i, j);
    }
    for (n, &(t, i)) in order.iter().enumerate() {
        let (_, core, extra, _) = TOPICS[t];
        // One extra word per review keeps the core pair the only frequent bigram.
        let a = extra[(i + r.gen_range(0..2)) % extra.len()];
        let text = format!("The {} {} {} again", core[0], core[1], a);
        let id = format!("p{n:02}");
        reviews.push_str(&format!(
            "{{\"id\": \"{id}\", \"app_id\": \"planted\", \"text\": \"{text}\", \"timestamp\": \"2022-06-{:02}T12:00:00Z\", \"category\": \"problem_discovery\"}}\n",
            1 + n % 28
        ));
        truth.push((format!("{id}#0"), t));
    }
    fs::write(root.join("reviews.jsonl"), reviews).unwrap();

    let src = root.join("repo/src");
    fs::create_dir_all(&src).unwrap();
    let mut commits = String::new();
    let mut truth_json = serde_json::Map::new();
    for (t, (file, core, extra, field)) in TOPICS.iter().enumerate() {
        let class = file.trim_end_matches(".java");
        let body = format!(
            "/** Handles {} {} events. */\npublic class {class} {{\n    private int {field}Level;\n\n    /** Reacts to {} and {}. */\n    public void handle{}() {{\n    }}\n}}\n",
            core[0], core[1], extra[0], extra[1], capitalize(core[1])
        );
        fs::write(src.join(file), body).unwrap();
        for (c, pair) in extra.chunks(2).enumerate() {
            commits.push_str(&format!(
                "{{\"sha\": \"t{t}c{c}\", \"title\": \"Fix {} {} issue\", \"description\": \"{} {} handling\", \"timestamp\": \"2022-0{}-10T08:00:00Z\", \"files\": [\"src/{file}\"]}}\n",
                core[0], pair[0], pair[1], core[1], c + 1
            ));
        }
        for (id, topic) in &truth {
            if *topic == t {
                let review = id.trim_end_matches("#0");
                truth_json.insert(review.to_string(), serde_json::json!([format!("src/{file}")]));
            }
        }
    }
    fs::write(root.join("commits.jsonl"), commits).unwrap();
    fs::write(root.join("truth.json"), serde_json::to_string_pretty(&truth_json).unwrap()).unwrap();

    // Five must-links inside topics and five cannot-links across them.
    let of = |t: usize, k: usize| truth.iter().filter(|(_, x)| *x == t).nth(k).unwrap().0.clone();
    let must: Vec<[String; 2]> = vec![
        [of(0, 0), of(0, 1)],
        [of(0, 2), of(0, 3)],
        [of(1, 0), of(1, 1)],
        [of(1, 2), of(1, 3)],
        [of(2, 0), of(2, 1)],
    ];
    let cannot: Vec<[String; 2]> = vec![
        [of(0, 4), of(1, 4)],
        [of(1, 5), of(2, 5)],
        [of(2, 6), of(0, 6)],
        [of(0, 7), of(2, 7)],
        [of(1, 8), of(0, 8)],
    ];
    fs::write(
        root.join("constraints.json"),
        serde_json::to_string_pretty(&serde_json::json!({"must": must, "cannot": cannot})).unwrap(),
    )
    .unwrap();

    let config_text = r#"
output_dir = "out"
[paths]
reviews = "reviews.jsonl"
commits = "commits.jsonl"
source_tree = "repo"
constraints = "constraints.json"
ground_truth = "truth.json"
[parameters]
top_k = [1, 3]
"#;
    let cfg_path = root.join("config.toml");
    fs::write(&cfg_path, config_text).unwrap();
    let config = PipelineConfig::load(&cfg_path).unwrap();
    Planted { dir, config, truth }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

pub fn with_output(cfg: &PipelineConfig, out: PathBuf) -> PipelineConfig {
    let mut c = cfg.clone();
    c.output_dir = out;
    c
}
