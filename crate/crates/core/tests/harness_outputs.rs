mod common;

use std::path::Path;
use std::process::Command;

use common::{column, oracle_median, polyline_point_counts, read_plain_csv};
use neatbird::env::WorldConfig;
use neatbird::harness::{emit_line_chart, run_sweep, SweepSpec, SUMMARY_HEADER};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn neatbird(args: &[&str], out: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_neatbird"))
        .args(args)
        .env("NEATBIRD_OUT", out)
        .output()
        .unwrap()
}

fn small_world_file(dir: &Path) -> String {
    let path = dir.join("world.txt");
    std::fs::write(&path, "# short episodes\nmax_score_cap = 40\n").unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn summary_medians_recompute_from_run_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let spec = SweepSpec {
        population_sizes: vec![8, 12, 16],
        generations: 6,
        seeds: vec![1, 2, 3, 4],
        world: WorldConfig {
            max_score_cap: 40,
            ..WorldConfig::default()
        },
        ..SweepSpec::default()
    };
    run_sweep(&spec, dir.path(), |_| {}).unwrap();

    let (header, rows) = read_plain_csv(&dir.path().join("summary.csv"));
    assert_eq!(header.join(","), SUMMARY_HEADER);
    assert_eq!(rows.len(), 3);
    for (row, &population) in rows.iter().zip(&spec.population_sizes) {
        let mut averages = Vec::new();
        let mut maxima = Vec::new();
        let mut spikes = Vec::new();
        for seed in &spec.seeds {
            let (h, r) = read_plain_csv(&dir.path().join(format!("pop{population}_seed{seed}.csv")));
            assert_eq!(r.len(), 6);
            let avg = column(&h, &r, "average_score");
            averages.push(avg.iter().sum::<f64>() / avg.len() as f64);
            maxima.push(column(&h, &r, "max_score").into_iter().fold(0.0, f64::max));
            let spike = avg.iter().position(|&a| a > 0.0 && a >= 5.0 * avg[0]);
            spikes.push(spike.map_or(f64::INFINITY, |g| g as f64));
        }
        let spike = oracle_median(spikes);
        let expected = format!(
            "{population},{:.6},{:.6},{}",
            oracle_median(averages),
            oracle_median(maxima),
            if spike.is_finite() { spike.to_string() } else { "NA".to_string() }
        );
        assert_eq!(row.join(","), expected);
    }
}

#[test]
fn chart_has_one_point_per_data_row() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for case in 0..50 {
        let rows = rng.random_range(1..200);
        let series = rng.random_range(1..5);
        let mut text = String::from("x");
        for s in 0..series {
            text.push_str(&format!(",s{s}"));
        }
        text.push('\n');
        for r in 0..rows {
            text.push_str(&r.to_string());
            for _ in 0..series {
                text.push_str(&format!(",{:.3}", rng.random_range(-50.0..500.0)));
            }
            text.push('\n');
        }
        let csv = dir.path().join(format!("c{case}.csv"));
        std::fs::write(&csv, text).unwrap();
        let columns: Vec<String> = (0..series).map(|s| format!("s{s}")).collect();
        let svg_path = dir.path().join(format!("c{case}.svg"));
        emit_line_chart(&csv, &columns, None, &svg_path).unwrap();
        let svg = std::fs::read_to_string(&svg_path).unwrap();
        assert_eq!(polyline_point_counts(&svg), vec![rows; series]);
    }
}

#[test]
fn run_is_byte_identical_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let world = small_world_file(dir.path());
    let args = |out: &str| {
        vec![
            "run".to_string(),
            "--population".into(),
            "30".into(),
            "--generations".into(),
            "8".into(),
            "--master-seed".into(),
            "7".into(),
            "--world".into(),
            world.clone(),
            "--out".into(),
            dir.path().join(out).to_string_lossy().into_owned(),
        ]
    };
    for out in ["a", "b"] {
        let a: Vec<String> = args(out);
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        let result = neatbird(&a, dir.path());
        assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    }
    for file in ["run.csv", "run.svg", "champion.txt"] {
        let a = std::fs::read(dir.path().join("a").join(file)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file} differs");
    }
    let csv = std::fs::read_to_string(dir.path().join("a/run.csv")).unwrap();
    assert_eq!(csv.lines().count(), 9);

    let champion = dir.path().join("a/champion.txt");
    let text = std::fs::read_to_string(&champion).unwrap();
    let recorded = text
        .lines()
        .find_map(|l| l.strip_prefix("# score: "))
        .unwrap()
        .to_string();
    let replay = neatbird(&["replay", "--champion", champion.to_str().unwrap()], dir.path());
    assert!(replay.status.success());
    let stdout = String::from_utf8_lossy(&replay.stdout);
    assert!(stdout.contains(&format!("score {recorded} ")), "{stdout}");
    assert!(stdout.contains("matches recorded score"), "{stdout}");
}

#[test]
fn sweep_writes_documented_layout() {
    let dir = tempfile::tempdir().unwrap();
    let world = small_world_file(dir.path());
    let out = neatbird(
        &[
            "sweep", "--generations", "2", "--seeds", "1", "--world", &world, "--sweep-id", "s1",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let sweep = dir.path().join("s1");
    let (_, rows) = read_plain_csv(&sweep.join("summary.csv"));
    let populations: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(populations, ["20", "40", "60", "80", "100", "120", "140", "160"]);
    let count = |ext: &str, prefix: &str| {
        std::fs::read_dir(&sweep)
            .unwrap()
            .filter(|e| {
                let name = e.as_ref().unwrap().file_name().to_string_lossy().into_owned();
                name.starts_with(prefix) && name.ends_with(ext)
            })
            .count()
    };
    assert_eq!(count(".csv", "pop"), 8);
    assert_eq!(count(".svg", "pop"), 8);
    assert_eq!(count(".txt", "champion_pop"), 8);
    assert!(sweep.join("summary.svg").is_file());
}

#[test]
fn errors_name_the_input_and_use_distinct_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_world = dir.path().join("bad_world.txt");
    std::fs::write(&bad_world, "gravity = 1\n").unwrap();
    let bad_champion = dir.path().join("bad_champion.txt");
    std::fs::write(&bad_champion, "nodes 0:input:0\n").unwrap();

    let cases: [(&[&str], i32, &str); 5] = [
        (&["run", "--no-such-flag"], 2, "--no-such-flag"),
        (&["run", "--world", bad_world.to_str().unwrap()], 2, "gravity"),
        (&["run", "--world", "/nonexistent/world.txt"], 2, "/nonexistent/world.txt"),
        (&["replay", "--champion", bad_champion.to_str().unwrap()], 2, "bad_champion.txt"),
        (&["run", "--population", "1"], 2, "population_size"),
    ];
    for (args, code, needle) in cases {
        let out = neatbird(args, dir.path());
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains(needle), "{args:?}: {stderr}");
    }

    let blocker = dir.path().join("file_not_dir");
    std::fs::write(&blocker, "").unwrap();
    let world = small_world_file(dir.path());
    let out = neatbird(
        &["run", "--population", "4", "--generations", "1", "--world", &world, "--out", blocker.join("x").to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn dry_run_prints_configuration_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("never");
    let out = neatbird(
        &["run", "--dry-run", "--population", "64", "--out", out_dir.to_str().unwrap()],
        dir.path(),
    );
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("population_size = 64"));
    assert!(stdout.contains("pipe_gap = 320"));
    assert!(!out_dir.exists());
}
