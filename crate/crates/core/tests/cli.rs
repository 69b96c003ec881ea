//! End-to-end runs of the `anline` binary: stdout, exit codes and files.

use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_anline");

fn fixtures() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/site.txt").display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn anline")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn series_norm_of_one_plus_t() {
    let o = run(&["series", "norm", "0:1 1:1", "r=2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "norm=3 radius=2");
}

#[test]
fn series_split_reports_both_halves() {
    let o = run(&["series", "split", "1:1 0:1 -1:1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("norm_h=5 norm_f=3 norm_g=2"), "{s}");
    assert!(s.contains("f_le_h=true g_le_h=true"), "{s}");
}

#[test]
fn series_divide_meets_bound() {
    let o = run(&["series", "divide", "1:1 | 0:-1", "r=1/2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("c[0]=0:1"), "{s}");
    assert!(s.contains("bound=3 within_bound=true"), "{s}");
}

#[test]
fn bad_subcommand_is_usage_error() {
    assert_eq!(run(&["series", "bogus", "0:1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["axioms", "--inner", "2"]).status.code(), Some(2));
}

#[test]
fn axioms_default_suite_has_no_counterexample() {
    let o = run(&["--grid-step", "1/8", "--random-points", "500", "axioms"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("status=ok counterexamples=0"));
}

#[test]
fn negated_item_six_is_caught() {
    let o = run(&["--grid-step", "1/8", "--random-points", "0", "axioms", "--negate", "6"]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(s.contains("item=6 verdict=counterexample"), "{s}");
}

#[test]
fn empty_sampler_is_vacuous() {
    let o = run(&["--grid-step", "0", "--random-points", "0", "axioms"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("vacuous=true"));
}

fn read_ppm(path: &Path) -> (usize, usize, Vec<u8>) {
    let bytes = std::fs::read(path).unwrap();
    let header_end = bytes
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == b'\n')
        .nth(2)
        .map(|(i, _)| i + 1)
        .unwrap();
    let header = std::str::from_utf8(&bytes[..header_end]).unwrap();
    let dims: Vec<usize> = header.lines().nth(1).unwrap().split(' ').map(|x| x.parse().unwrap()).collect();
    (dims[0], dims[1], bytes[header_end..].to_vec())
}

fn pixel(data: &[u8], w: usize, col: usize, row: usize) -> [u8; 3] {
    let i = 3 * (row * w + col);
    [data[i], data[i + 1], data[i + 2]]
}

#[test]
fn plot_disc_center_is_member() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("disc.ppm");
    let o = run(&["--window", "-2,-2,2,2", "--grid-step", "1/16", "--out", out.to_str().unwrap(), "plot", "|T| <= 1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (w, h, data) = read_ppm(&out);
    assert_eq!((w, h), (65, 65));
    assert_eq!(pixel(&data, w, 32, 32), anline::plot::MEMBER);
    assert_eq!(pixel(&data, w, 0, 0), anline::plot::NONMEMBER);
}

#[test]
fn plot_empty_region_is_uniform() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("empty.ppm");
    let o = run(&["--grid-step", "1/4", "--out", out.to_str().unwrap(), "plot", "|T| <= 1 & |T| >= 2"]);
    assert_eq!(o.status.code(), Some(0));
    let (_, _, data) = read_ppm(&out);
    assert!(data.chunks(3).all(|c| c == anline::plot::NONMEMBER));
}

#[test]
fn plot_svg_circle_band() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("band.svg");
    let o = run(&[
        "--window",
        "-2,-2,2,2",
        "--grid-step",
        "1/4",
        "--out",
        out.to_str().unwrap(),
        "plot",
        "|T| <= 1 & |T| >= 1",
        "--style",
        "svg",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(&out).unwrap();
    assert_eq!(svg.matches("fill=\"#1f5ea8\"").count(), 4);
}

#[test]
fn plot_unwritable_output_is_io_error() {
    let o = run(&["--grid-step", "1/2", "--out", "/nonexistent/dir/x.ppm", "plot", "|T| <= 1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn site_covers_have_two_members() {
    let o = run(&["site", "covers", &fixtures()]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let first: Vec<&str> = s.lines().take(3).collect();
    assert!(first[0].starts_with("line=2 cover=two-piece:T"), "{s}");
    assert!(first[1].starts_with("member=0") && first[2].starts_with("member=1"));
}

#[test]
fn site_cover_refines_itself() {
    let o = run(&["site", "refine", &fixtures()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.starts_with("refine a=2 b=2 refines=true assignment=0->0,1->1")));
}

#[test]
fn site_spa_membership_inline() {
    let o = run(&[
        "site",
        "spa",
        "ring=C[T] cover=two-piece:T localize=T;1 then=1;T",
        "--valuation",
        "order:0:1/2",
        "--subset",
        "T;1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("spa=member"));
}

#[test]
fn site_missing_fixture_is_io_error() {
    assert_eq!(run(&["site", "covers", "/nonexistent/site.txt"]).status.code(), Some(3));
}

#[test]
fn scaled_down_selftest_passes() {
    let o = run(&["--cap", "4", "--grid-step", "1/4", "--random-points", "200", "selftest", "--trials", "20"]);
    let s = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{s}");
    assert!(s.trim_end().ends_with("selftest status=pass criteria=10"), "{s}");
}

#[test]
fn selftest_corrupt_fixture_dir_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("site.txt"), "ring=C[T] cover=two-piece:@@@\n").unwrap();
    let o = run(&["--cap", "4", "selftest", "--fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let empty = tempfile::tempdir().unwrap();
    let o = run(&["--cap", "4", "selftest", "--fixtures", empty.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    let report = dir.path().join("report.txt");
    std::fs::write(&cfg, format!("grid-step = 0\nrandom-points = 0\nout = {}\n", report.display())).unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "axioms"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&report).unwrap().contains("vacuous=true"));

    let o = run(&["--config", cfg.to_str().unwrap(), "--random-points", "50", "axioms"]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.contains("samples=50") && !text.contains("vacuous=true"), "{text}");

    std::fs::write(&cfg, "colour = red\n").unwrap();
    assert_eq!(run(&["--config", cfg.to_str().unwrap(), "axioms"]).status.code(), Some(2));
}
