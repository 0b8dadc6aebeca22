use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rotelast::field_io::{read_field, write_field, FieldData};
use rotelast::grid::{Field, GridSpec};
use rotelast::sampling::{rng, smooth_spinor_field};
use rotelast::{Axis, Coframe, FourMomentum, PlaneWave, Spinor};
use serde_json::Value;

fn rotelast(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotelast")).args(args).env_remove("ROTELAST_THREADS").output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_spinor(path: &Path, f: Field<Spinor>) {
    write_field(path, &FieldData::Spinor(f)).unwrap();
}

#[test]
fn planewave_solve_reports_unit_moduli_speeds() {
    let out = rotelast(&["planewave", "solve", "--set", "p0=1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["command"], "planewave solve");
    assert_eq!(r["results"]["speeds"]["v1"].as_f64().unwrap(), 2f64.sqrt());
    assert_eq!(r["results"]["speeds"]["v2"].as_f64().unwrap(), 1.0);
    assert_eq!(r["results"]["families"].as_array().unwrap().len(), 2);
    assert_eq!(r["library_version"], rotelast::VERSION);
    assert_eq!(r["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn planewave_check_flags_non_solutions() {
    let on = rotelast(&["planewave", "check", "-s", "p=0,0,0.7071067811865475", "-s", "p0=1"]);
    assert_eq!(on.status.code(), Some(0), "{}", stderr(&on));
    let off = rotelast(&["planewave", "check", "-s", "p=0.3,0,0.1"]);
    assert_eq!(off.status.code(), Some(1));
    assert_eq!(report(&off)["checks"]["is_solution"], false);
}

#[test]
fn verify_lemma2_default_passes() {
    let out = rotelast(&["verify", "lemma2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(report(&out)["pass"], true);
    let out = rotelast(&["verify", "lemma1", "-s", "count=3", "-s", "n=6"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn weyl_theorem2_requires_axial_moduli() {
    let out = rotelast(&["weyl", "theorem2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("axial"));
    let out = rotelast(&["weyl", "theorem2", "-s", "c_ax=0.75", "-s", "c_vec=0", "-s", "c_ten=0", "-s", "lattice=21"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn weyl_theorem3_and_control() {
    let axial = ["weyl", "theorem3", "-s", "c_ax=0.75", "-s", "c_vec=0", "-s", "c_ten=0", "-s", "n=8", "-s", "n_t=8"];
    let out = rotelast(&axial);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = rotelast(&["weyl", "theorem3", "-s", "n=8", "-s", "n_t=8"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(report(&out)["residuals"]["f_max"].as_f64().unwrap() > 1e-2);
    let out = rotelast(&["weyl", "check", "-s", "n=8", "-s", "n_t=8", "-s", "sign=minus"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["results"]["satisfied"], serde_json::json!(["minus"]));
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# unit moduli except c_vec\nc_vec = 0\np0 = 2\n").unwrap();
    let c = cfg.to_str().unwrap();
    let r = report(&rotelast(&["--config", c, "planewave", "solve"]));
    assert_eq!(r["inputs"]["p0"], 2.0);
    assert_eq!(r["inputs"]["moduli"]["c_vec"], 0.0);
    let r2 = report(&rotelast(&["--config", c, "planewave", "solve", "--set", "p0=3"]));
    assert_eq!(r2["inputs"]["p0"], 3.0);
    assert_ne!(r["config_sha256"], r2["config_sha256"]);

    fs::write(&cfg, "p0 = 1\nspeed = 3\n").unwrap();
    let out = rotelast(&["--config", c, "planewave", "solve"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("run.cfg:2") && stderr(&out).contains("speed"));
    let out = rotelast(&["planewave", "solve", "--set", "c_ax=-1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rotelast(&["planewave", "solve", "--set", "p0=zero"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn convert_constant_spinor_to_identity_coframe_and_back() {
    let dir = tempfile::tempdir().unwrap();
    let g = GridSpec::cube(4, 1.0).unwrap();
    let src = dir.path().join("xi.json");
    write_spinor(&src, Field::constant(g, Spinor::from_reals(1.0, 0.0, 0.0, 0.0)));
    let frames = dir.path().join("frames.json");
    let out = rotelast(&["convert", "-i", src.to_str().unwrap(), "-s", &format!("field_output={}", frames.display())]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    match read_field(&frames).unwrap() {
        FieldData::Coframe { frames, density } => {
            assert!(frames.data.iter().all(|c| *c == Coframe::identity()));
            assert!(density.unwrap().data.iter().all(|r| *r == 1.0));
        }
        other => panic!("got {}", other.kind()),
    }
    let back = dir.path().join("back.json");
    let out = rotelast(&["convert", "-i", frames.to_str().unwrap(), "-s", &format!("field_output={}", back.display())]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read(&src).unwrap(), fs::read(&back).unwrap());
}

#[test]
fn convert_names_vanishing_points() {
    let dir = tempfile::tempdir().unwrap();
    let g = GridSpec::cube(4, 1.0).unwrap();
    let mut f = Field::constant(g, Spinor::from_reals(0.0, 1.0, 0.0, 0.0));
    f.data[37] = Spinor::ZERO;
    let src = dir.path().join("xi.json");
    write_spinor(&src, f);
    let out = rotelast(&["convert", "-i", src.to_str().unwrap(), "-s", "field_output=/dev/null"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("flat index 37"), "{}", stderr(&out));
    fs::write(&src, "{\"grid\": 1}").unwrap();
    let out = rotelast(&["convert", "-i", src.to_str().unwrap(), "-s", "field_output=/dev/null"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn field_commands_on_a_plane_wave() {
    let dir = tempfile::tempdir().unwrap();
    let wave = PlaneWave::new(Spinor::from_reals(0.6, 0.0, 0.0, 0.8), FourMomentum::new(1.0, [1.0, 0.0, 2.0])).unwrap();
    let src = dir.path().join("wave.json");
    write_spinor(&src, wave.sample(wave.periodic_grid(4, 8).unwrap()));
    let s = src.to_str().unwrap();
    let l_out = dir.path().join("l.json");
    let out = rotelast(&["lagrangian", "-i", s, "-s", "derivative=exact", "-s", "p=1,0,2", "-s", &format!("field_output={}", l_out.display())]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(matches!(read_field(&l_out).unwrap(), FieldData::Scalar(_)));
    let out = rotelast(&["energy", "-i", s, "-s", "derivative=spectral"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = rotelast(&["decompose", "-i", s, "-s", "derivative=spectral"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&out);
    assert!(r["residuals"]["dual_path_gap"].as_f64().unwrap() < 1e-10);
    let out = rotelast(&["weyl", "check", "-i", s]);
    assert_eq!(out.status.code(), Some(1));
    let spatial = dir.path().join("spatial.json");
    write_spinor(&spatial, Field::constant(GridSpec::cube(4, 1.0).unwrap(), Spinor::from_reals(1.0, 0.0, 0.0, 0.0)));
    let out = rotelast(&["energy", "-i", spatial.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let g = GridSpec::spacetime(Axis::new(6, 2.0), [6; 3], [2.0; 3]).unwrap();
    let src = dir.path().join("xi.json");
    write_spinor(&src, smooth_spinor_field(&mut rng(4), g, 3, 0.2, 1));
    let s = src.to_str().unwrap();
    let strip = |out: Output| {
        assert!(out.status.success(), "{}", stderr(&out));
        let mut v = report(&out);
        v.as_object_mut().unwrap().remove("wall_time_s");
        serde_json::to_string(&v).unwrap()
    };
    for args in [vec!["verify", "eulerlagrange", "-i", s], vec!["energy", "-i", s]] {
        let one = strip(rotelast(&[&args[..], &["--threads", "1"]].concat()));
        let four = strip(rotelast(&[&args[..], &["--threads", "4"]].concat()));
        let env = Command::new(env!("CARGO_BIN_EXE_rotelast")).args(&args).env("ROTELAST_THREADS", "3").output().unwrap();
        assert_eq!(one, four);
        assert_eq!(one, strip(env));
    }
    let bad = Command::new(env!("CARGO_BIN_EXE_rotelast"))
        .args(["planewave", "solve"])
        .env("ROTELAST_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("speeds.csv");
    let out = rotelast(&["sweep", "speeds", "-s", "sweep_param=c_ten", "-s", "sweep_values=0,2,5", "-s", "c_vec=0", "-s", &format!("csv_output={}", csv.display())]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.starts_with("c_ten,v1,v2,case"));
    let out = rotelast(&["sweep", "speeds", "-s", "sweep_param=c_kin", "-s", "sweep_values=-1,1,3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_goes_to_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = rotelast(&["planewave", "solve", "-o", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
}
