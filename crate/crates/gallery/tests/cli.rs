use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fractal_conjugacy::raster::{quantize, Raster};
use tempfile::TempDir;

fn gallery(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fractal-gallery"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = gallery(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn read_raster(path: &Path) -> Raster {
    Raster::read(&fs::read(path).unwrap()[..]).unwrap()
}

fn write_raster(path: &Path, r: &Raster) {
    let mut buf = Vec::new();
    r.write(&mut buf).unwrap();
    fs::write(path, buf).unwrap();
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

/// Row of the first black pixel in each column.
fn dark_rows(r: &Raster) -> Vec<Option<usize>> {
    (0..r.width)
        .map(|c| (0..r.height).find(|&row| r.pixel(c, row)[0] == 0))
        .collect()
}

fn dir_str(d: &TempDir, sub: &str) -> String {
    d.path().join(sub).to_string_lossy().into_owned()
}

#[test]
fn self_composition_of_fg2_is_the_diagonal() {
    let d = TempDir::new().unwrap();
    ok(&["graph", "--pair", "FG2", "--out", &dir_str(&d, "one")]);
    ok(&["graph", "--pair", "FG2+FG2", "--out", &dir_str(&d, "two")]);
    let one = read_raster(&d.path().join("one/graph.pgm"));
    let two = read_raster(&d.path().join("two/graph.pgm"));
    let n = two.width;
    let on_diagonal = dark_rows(&two)
        .iter()
        .enumerate()
        .filter(|(c, r)| r.is_some_and(|r| (r as isize - (n - 1 - c) as isize).abs() <= 1))
        .count();
    assert!(on_diagonal as f64 >= 0.999 * n as f64, "{on_diagonal}/{n}");
    assert_ne!(one.samples, two.samples);
}

#[test]
fn identity_graph_is_exact_diagonal() {
    let d = TempDir::new().unwrap();
    ok(&["graph", "--pair", "identity", "--n", "256", "--out", &dir_str(&d, "g")]);
    let r = read_raster(&d.path().join("g/graph.pgm"));
    assert_eq!((r.width, r.height), (256, 256));
    for (c, row) in dark_rows(&r).into_iter().enumerate() {
        assert_eq!(row, Some(255 - c));
    }
    let (header, rows) = read_csv(&d.path().join("g/graph.csv"));
    assert_eq!(header, ["x", "y"]);
    assert!(rows.iter().all(|r| (r[0] - r[1]).abs() < 1e-14));
}

#[test]
fn cantor_graph_is_nondecreasing() {
    let d = TempDir::new().unwrap();
    ok(&["graph", "--pair", "cantor", "--n", "729", "--out", &dir_str(&d, "c")]);
    let (_, rows) = read_csv(&d.path().join("c/graph.csv"));
    let ys: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    assert!(ys.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    assert!(ys[0] < 0.01 && ys[ys.len() - 1] > 0.99);
    // constant across the middle gap
    let mid: Vec<f64> = rows.iter().filter(|r| r[0] > 0.34 && r[0] < 0.66).map(|r| r[1]).collect();
    assert!(mid.iter().all(|&y| (y - 0.5).abs() < 1e-9));
    let img = read_raster(&d.path().join("c/graph.pgm"));
    let rows_px: Vec<usize> = dark_rows(&img).into_iter().map(Option::unwrap).collect();
    assert!(rows_px.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn graph_output_is_deterministic_and_stamped() {
    let d = TempDir::new().unwrap();
    ok(&["graph", "--pair", "koch", "--n", "128", "--out", &dir_str(&d, "a")]);
    let a = fs::read(d.path().join("a/graph.pgm")).unwrap();
    let serial = Command::new(env!("CARGO_BIN_EXE_fractal-gallery"))
        .args(["graph", "--pair", "koch", "--n", "128", "--out", &dir_str(&d, "a")])
        .env("FRACTAL_THREADS", "1")
        .output()
        .unwrap();
    assert!(serial.status.success());
    assert_eq!(a, fs::read(d.path().join("a/graph.pgm")).unwrap());
    let r = read_raster(&d.path().join("a/graph.pgm"));
    assert!(r.comments.iter().any(|c| c.starts_with("command: fractal-gallery graph")));
    assert!(r.comments.contains(&"seed: 7".to_string()));
    assert!(r.comments.contains(&"depth: 48".to_string()));
    let (header, _) = read_csv(&d.path().join("a/graph.csv"));
    assert_eq!(header, ["x", "y1", "y2"]);
}

#[test]
fn usage_errors_exit_with_two() {
    let d = TempDir::new().unwrap();
    for args in [
        vec!["graph", "--pair", "nope"],
        vec!["graph", "--pair", "lamina"],
        vec!["graph", "--pair", "hilbert+FG1"],
        vec!["series", "--function", "sine"],
        vec!["series", "--basis", "cosine"],
        vec!["check", "--suite", "everything"],
        vec!["frobnicate"],
        vec!["graph", "--n", "many"],
    ] {
        let mut full = args.clone();
        let out = dir_str(&d, "x");
        full.extend(["--out", &out]);
        assert_eq!(gallery(&full).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn rms_errors_of_classical_and_fractal_sums_agree() {
    let d = TempDir::new().unwrap();
    let mut rms = Vec::new();
    for basis in ["sine", "fractal_sine_G1"] {
        let out = dir_str(&d, basis);
        ok(&["series", "--function", "constant", "--basis", basis, "--terms", "10,50,100", "--out", &out]);
        let (header, rows) = read_csv(&d.path().join(basis).join("series_rms.csv"));
        assert_eq!(header, ["terms", "rms"]);
        rms.push(rows.iter().map(|r| r[1]).collect::<Vec<_>>());
    }
    for (c, f) in rms[0].iter().zip(&rms[1]) {
        assert!((c - f).abs() / c < 0.01, "{c} vs {f}");
    }
}

/// `T_{G₁F}` from the explicit inverse branches of `interval_G1`.
fn t_g1f(y: f64) -> f64 {
    let mut z = y;
    let mut x = 0.0;
    let mut w = 0.5;
    for _ in 0..48 {
        if z <= 0.5 {
            z = 1.0 - 2.0 * z;
        } else {
            x += w;
            z = 2.0 * z - 1.0;
        }
        w *= 0.5;
    }
    x
}

fn step_sum(x: f64, terms: usize) -> f64 {
    (1..=terms)
        .map(|n| {
            let n = n as f64;
            2.0 / PI * (1.0 - (n * PI / 2.0).cos()) / n * (n * PI * x).sin()
        })
        .sum()
}

#[test]
fn step_series_near_the_jump() {
    let d = TempDir::new().unwrap();
    for basis in ["fractal_sine_G1", "sine"] {
        let out = dir_str(&d, basis);
        ok(&["series", "--function", "step", "--basis", basis, "--terms", "100,500", "--out", &out]);
        let (header, rows) = read_csv(&d.path().join(basis).join("series.csv"));
        assert_eq!(header, ["x", "target", "approx_100", "approx_500"]);
        assert_eq!(rows.len(), 4096);
        let (left, right) = (&rows[2047], &rows[2048]);
        for (j, terms) in [(2, 100), (3, 500)] {
            for r in [left, right] {
                let x = if basis == "sine" { r[0] } else { t_g1f(r[0]) };
                assert!((r[j] - step_sum(x, terms)).abs() < 1e-8, "{basis} {terms} at {}", r[0]);
            }
            if basis == "sine" {
                let mid = 0.5 * (left[1] + right[1]);
                assert!(left[j] > mid && right[j] < mid);
                assert!((0.5 * (left[j] + right[j]) - mid).abs() < 0.05);
            }
        }
    }
}

#[test]
fn identity_approximants_converge_to_the_transform() {
    let d = TempDir::new().unwrap();
    let out = dir_str(&d, "s");
    ok(&["series", "--function", "identity", "--basis", "fractal_sine_G1", "--terms", "10,30,100", "--out", &out]);
    let (_, rows) = read_csv(&d.path().join("s/series.csv"));
    for r in rows.iter().step_by(97) {
        assert!((r[1] - t_g1f(r[0])).abs() < 1e-12);
    }
    let (_, rms) = read_csv(&d.path().join("s/series_rms.csv"));
    assert!(rms[0][1] > rms[1][1] && rms[1][1] > rms[2][1], "{rms:?}");
}

/// Classic Hilbert curve index to cell.
fn d2xy(side: usize, mut d: usize) -> (usize, usize) {
    let (mut x, mut y) = (0, 0);
    let mut s = 1;
    while s < side {
        let rx = 1 & (d / 2);
        let ry = 1 & (d ^ rx);
        if ry == 0 {
            if rx == 1 {
                x = s - 1 - x;
                y = s - 1 - y;
            }
            std::mem::swap(&mut x, &mut y);
        }
        x += s * rx;
        y += s * ry;
        d /= 4;
        s *= 2;
    }
    (x, y)
}

fn sine_image(side: usize) -> Raster {
    let f = |i: usize| (PI * (i as f64 + 0.5) / side as f64).sin();
    let px = (0..side * side).map(|k| quantize(f(k / side) * f(k % side), 0.0, 1.0)).collect();
    Raster::gray(side, side, px).unwrap()
}

#[test]
fn hilbert_strip_of_sine_product() {
    let d = TempDir::new().unwrap();
    let input = d.path().join("sin.pgm");
    write_raster(&input, &sine_image(256));
    let strip = d.path().join("strip.pgm");
    ok(&[
        "hilbert-image",
        "--input",
        input.to_str().unwrap(),
        "--direction",
        "2d_to_strip",
        "--out",
        strip.to_str().unwrap(),
    ]);
    let s = read_raster(&strip);
    assert_eq!((s.width, s.height), (65536, 1));
    let f = |i: usize| (PI * (i as f64 + 0.5) / 256.0).sin();
    for j in 0..65536 {
        let (x, y) = d2xy(256, j);
        let expected = i32::from(quantize(f(x) * f(y), 0.0, 1.0));
        assert!((i32::from(s.samples[j]) - expected).abs() <= 1, "cell {j}");
    }
    assert!(s.comments.iter().any(|c| c == "depth: 8"));
}

#[test]
fn constant_image_gives_constant_strip() {
    let d = TempDir::new().unwrap();
    let input = d.path().join("c.pgm");
    write_raster(&input, &Raster::gray(32, 32, vec![77; 1024]).unwrap());
    let strip = d.path().join("s.pgm");
    ok(&["hilbert-image", "--input", input.to_str().unwrap(), "--out", strip.to_str().unwrap()]);
    let s = read_raster(&strip);
    assert_eq!(s.width, 1024);
    assert!(s.samples.iter().all(|&v| v == 77));
}

#[test]
fn hilbert_round_trip_is_a_bijection() {
    let d = TempDir::new().unwrap();
    let input = d.path().join("id.pgm");
    let ids: Vec<u16> = (0..256).map(|k| (k * 131 % 256) as u16 * 7).collect();
    write_raster(&input, &Raster::new(16, 16, 1, 2000, ids.clone()).unwrap());
    let strip = d.path().join("s.pgm");
    let back = d.path().join("b.pgm");
    ok(&["hilbert-image", "--input", input.to_str().unwrap(), "--out", strip.to_str().unwrap()]);
    ok(&[
        "hilbert-image",
        "--input",
        strip.to_str().unwrap(),
        "--direction",
        "strip_to_2d",
        "--out",
        back.to_str().unwrap(),
    ]);
    let s = read_raster(&strip);
    let mut sorted = s.samples.clone();
    sorted.sort_unstable();
    let mut expected = ids.clone();
    expected.sort_unstable();
    assert_eq!(sorted, expected);
    let b = read_raster(&back);
    assert_eq!((b.width, b.height, b.maxval), (16, 16, 2000));
    assert_eq!(b.samples, ids);

    let rgb = d.path().join("rgb.ppm");
    let samples: Vec<u16> = (0..3 * 64).map(|k| (k % 251) as u16).collect();
    write_raster(&rgb, &Raster::new(8, 8, 3, 255, samples.clone()).unwrap());
    ok(&["hilbert-image", "--input", rgb.to_str().unwrap(), "--out", strip.to_str().unwrap()]);
    ok(&[
        "hilbert-image",
        "--input",
        strip.to_str().unwrap(),
        "--direction",
        "strip-to-2d",
        "--out",
        back.to_str().unwrap(),
    ]);
    assert_eq!(read_raster(&back).samples, samples);
}

#[test]
fn hilbert_image_rejects_bad_inputs() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("o.pgm");
    let odd = d.path().join("odd.pgm");
    write_raster(&odd, &Raster::gray(12, 12, vec![0; 144]).unwrap());
    let junk = d.path().join("junk.pgm");
    fs::write(&junk, b"P5\n4 4\n255\n\x00").unwrap();
    let wide = d.path().join("wide.pgm");
    write_raster(&wide, &Raster::gray(8, 1, vec![0; 8]).unwrap());
    for (input, dir) in [(&odd, "2d_to_strip"), (&junk, "2d_to_strip"), (&wide, "strip_to_2d")] {
        let status = gallery(&[
            "hilbert-image",
            "--input",
            input.to_str().unwrap(),
            "--direction",
            dir,
            "--out",
            out.to_str().unwrap(),
        ])
        .status;
        assert_eq!(status.code(), Some(2), "{input:?}");
    }
}

#[test]
fn check_reports_and_exit_codes() {
    let d = TempDir::new().unwrap();
    let out = dir_str(&d, "k");
    let run = ok(&["check", "--suite", "haar", "--seed", "7", "--out", &out]);
    assert!(String::from_utf8_lossy(&run.stdout).contains("reading_k=l"));
    let text = fs::read_to_string(d.path().join("k/check_haar.csv")).unwrap();
    assert!(text.starts_with("statistic,value,threshold,pass\n"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));

    ok(&["check", "--suite", "flows", "--n", "200000", "--out", &out]);
    let text = fs::read_to_string(d.path().join("k/check_flows.csv")).unwrap();
    assert!(text.contains("group_law_max_dev") && text.contains("conjugated_ks"));

    let failing = gallery(&["check", "--suite", "isometry", "--n", "1000", "--out", &out]);
    assert_eq!(failing.status.code(), Some(1));
    let text = fs::read_to_string(d.path().join("k/check_isometry.csv")).unwrap();
    assert!(text.contains(",false"));
}

#[test]
fn flow_strip_layout() {
    let d = TempDir::new().unwrap();
    let out = dir_str(&d, "f");
    ok(&["flow-strip", "--pair", "FG1", "--function", "tent", "--n", "128", "--out", &out]);
    let img = read_raster(&d.path().join("f/flow_strip.pgm"));
    // two blocks of 9 strips, 8 gaps each, one double gap between blocks
    assert_eq!((img.width, img.height), (128, 2 * (9 * 16 + 8 * 4) + 8));
    assert!(img.comments.iter().any(|c| c == "times: 0 1 2 3 4 5 6 7 100"));
    let (header, rows) = read_csv(&d.path().join("f/flow_strip.csv"));
    assert_eq!(header, ["conjugated", "t", "x", "value"]);
    assert_eq!(rows.len(), 2 * 9 * 128);
    for r in rows.iter().take(128) {
        assert_eq!(r[3], r[2].min(1.0 - r[2]));
    }
    // t = 100 moves by 100/16 = 6.25 periods
    let t100: Vec<&Vec<f64>> = rows.iter().filter(|r| r[0] == 0.0 && r[1] == 100.0).collect();
    for r in t100 {
        let x = (r[2] - 0.25).rem_euclid(1.0);
        assert!((r[3] - x.min(1.0 - x)).abs() < 1e-12);
    }
}
