use std::path::Path;

use mmwchan::cli::{run, EXIT_DATA, EXIT_PASS, EXIT_USAGE, EXIT_VALIDATION_FAIL};
use mmwchan::io::{CirFile, PdpFile, Polarization};
use mmwchan::{ChannelImpulseResponse, MultipathComponent, PowerDelayProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn mmwchan(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv: Vec<String> = std::iter::once("mmwchan").chain(args.iter().copied()).map(String::from).collect();
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_pdp(dir: &Path, name: &str, loc: &str, pol: Polarization, bins: &[(usize, f64)]) -> String {
    let mut powers = vec![0.0; bins.iter().map(|b| b.0).max().unwrap() + 5];
    for &(i, p) in bins {
        powers[i] = p;
    }
    let f = PdpFile {
        location_id: loc.into(),
        frequency_ghz: 28.0,
        polarization: pol,
        pdp: PowerDelayProfile::new(2.5, powers, 1e-9).unwrap(),
    };
    let path = dir.join(name);
    f.write(&path).unwrap();
    path.display().to_string()
}

fn extract_summary(dir: &Path, pdps: &[String]) -> Value {
    let table = dir.join("lsp.csv");
    let table_s = table.display().to_string();
    let mut args = vec!["extract", "--out", table_s.as_str(), "--pdp"];
    args.extend(pdps.iter().map(String::as_str));
    let (code, _, err) = mmwchan(&args);
    assert_eq!(code, EXIT_PASS, "{err}");
    let text = std::fs::read_to_string(&table).unwrap();
    assert!(text.starts_with("# mmw-lsp v1\n"));
    serde_json::from_str(&std::fs::read_to_string(table.with_extension("json")).unwrap()).unwrap()
}

#[test]
fn extract_single_tap_has_zero_delay_spread() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_pdp(dir.path(), "a.txt", "L1", Polarization::Vv, &[(3, 1.0)]);
    let s = extract_summary(dir.path(), &[p]);
    let loc = &s["locations"][0];
    assert_eq!(loc["record"]["rms_ds_ns"].as_f64(), Some(0.0));
    assert!(loc["record"]["k_factor_db"].is_null());
}

#[test]
fn extract_two_equal_taps_100_ns_apart() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_pdp(dir.path(), "a.txt", "L1", Polarization::Vv, &[(0, 1.0), (40, 1.0)]);
    let s = extract_summary(dir.path(), &[p]);
    let ds = s["locations"][0]["record"]["rms_ds_ns"].as_f64().unwrap();
    assert!((ds - 50.0).abs() < 1e-6, "{ds}");
    let k = s["locations"][0]["record"]["k_factor_db"].as_f64().unwrap();
    assert!(k.abs() < 1e-9);
}

#[test]
fn extract_xpr_from_co_and_cross_polarized_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let vv = write_pdp(dir.path(), "vv.txt", "L1", Polarization::Vv, &[(2, 1e-3), (9, 4e-4)]);
    let vh = write_pdp(dir.path(), "vh.txt", "L1", Polarization::Vh, &[(2, 1e-4), (9, 4e-5)]);
    let s = extract_summary(dir.path(), &[vv, vh]);
    let x = s["locations"][0]["xpr_mean_db"].as_f64().unwrap();
    assert!((x - 10.0).abs() < 1e-6, "{x}");
    assert_eq!(s["locations"][0]["num_profiles"].as_u64(), Some(2));
}

fn planted_cir(dir: &Path) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut paths = Vec::new();
    for c in 0..3 {
        for _ in 0..8 {
            let mut j = || rng.random_range(-1.5..1.5);
            paths.push(MultipathComponent {
                delay_ns: 20.0 + 80.0 * c as f64 + j(),
                power_mw: 0.2 + 0.2 * (j() + 1.5),
                aod_azimuth_deg: 10.0 + 120.0 * c as f64 + j(),
                aod_elevation_deg: j(),
                aoa_azimuth_deg: 40.0 + 120.0 * c as f64 + j(),
                aoa_elevation_deg: j(),
                xpr_db: 12.0,
            });
        }
    }
    // clusters are 80 ns apart, so delay order keeps them in blocks of 8
    paths.sort_by(|a, b| a.delay_ns.total_cmp(&b.delay_ns));
    let n = paths.len();
    let cir = ChannelImpulseResponse::from_paths("measured", paths, vec![0; n]).unwrap();
    let f = CirFile { index: None, seed: None, config_hash: None, cir };
    let path = dir.join("paths.txt");
    f.write(&path).unwrap();
    path.display().to_string()
}

#[test]
fn cluster_recovers_planted_groups() {
    let dir = tempfile::tempdir().unwrap();
    let paths = planted_cir(dir.path());
    for method in ["kpm", "tcsl"] {
        let (code, out, err) = mmwchan(&["cluster", "--paths", &paths, "--method", method, "--restarts", "10"]);
        assert_eq!(code, EXIT_PASS, "{err}");
        let r: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(r["num_clusters"].as_u64(), Some(3), "{method}");
        let labels: Vec<u64> = r["labels"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
        for c in 0..3 {
            assert!(labels[c * 8..(c + 1) * 8].iter().all(|l| *l == labels[c * 8]), "{method}: {labels:?}");
        }
    }
}

#[test]
fn tcsl_splits_two_bursts() {
    let dir = tempfile::tempdir().unwrap();
    let mk = |delay: f64, power: f64| MultipathComponent {
        delay_ns: delay,
        power_mw: power,
        aod_azimuth_deg: 0.0,
        aod_elevation_deg: 0.0,
        aoa_azimuth_deg: 90.0,
        aoa_elevation_deg: 0.0,
        xpr_db: 10.0,
    };
    let paths = vec![mk(0.0, 1.0), mk(2.5, 0.5), mk(7.5, 0.2), mk(60.0, 0.3), mk(62.5, 0.1)];
    let cir = ChannelImpulseResponse::from_paths("measured", paths, vec![0; 5]).unwrap();
    let file = dir.path().join("bursts.txt");
    CirFile { index: None, seed: None, config_hash: None, cir }.write(&file).unwrap();
    let report = dir.path().join("report.json");
    let (code, out, err) = mmwchan(&[
        "cluster",
        "--paths",
        &file.display().to_string(),
        "--method",
        "tcsl",
        "--out",
        &report.display().to_string(),
    ]);
    assert_eq!(code, EXIT_PASS, "{err}");
    assert!(out.contains("2 clusters"));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["labels"], serde_json::json!([0, 0, 0, 1, 1]));
    assert!(r["version"].is_string() && r["config_hash"].is_string() && r["seed"].is_u64());
}

#[test]
fn single_realization_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for run in ["a", "b"] {
        let d = dir.path().join(run).display().to_string();
        let (code, _, err) = mmwchan(&["generate", "--scenario", "28GHz-LOS", "--count", "1", "--seed", "77", "--out", &d]);
        assert_eq!(code, EXIT_PASS, "{err}");
        files.push(std::fs::read_to_string(dir.path().join(run).join("cir_000000.txt")).unwrap());
    }
    assert_eq!(files[0], files[1]);
    for name in ["delay_power.csv", "angle_power.csv"] {
        let text = std::fs::read_to_string(dir.path().join("a").join(name)).unwrap();
        assert!(text.contains("# version = ") && text.contains("# config_hash = ") && text.contains("# seed = 77"));
    }
}

#[test]
fn cluster_rejects_k_one() {
    let dir = tempfile::tempdir().unwrap();
    let paths = planted_cir(dir.path());
    let (code, _, err) = mmwchan(&["cluster", "--paths", &paths, "--k-range", "1..5"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("K=1"), "{err}");
}

#[test]
fn generate_then_validate() {
    let dir = tempfile::tempdir().unwrap();
    let ens = dir.path().join("ens");
    let ens_s = ens.display().to_string();
    let (code, out, err) =
        mmwchan(&["--threads", "2", "generate", "--scenario", "28GHz-NLOS", "--count", "2000", "--seed", "5", "--out", &ens_s]);
    assert_eq!(code, EXIT_PASS, "{err}");
    assert!(out.contains("2000 impulse responses"));
    assert!(ens.join("manifest.json").exists() && ens.join("cir_001999.txt").exists());

    let (code, out, err) = mmwchan(&["validate", "--ensemble", &ens_s]);
    assert_eq!(code, EXIT_PASS, "{out}{err}");
    let report: Value = serde_json::from_str(&std::fs::read_to_string(ens.join("validation.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], Value::Bool(true));
    assert_eq!(report["seed"].as_u64(), Some(5));
    assert!(report["rows"].as_array().unwrap().iter().any(|r| r["name"] == "num_clusters"));

    let (code, _, _) = mmwchan(&["validate", "--ensemble", &ens_s, "--tolerance-scale", "0.001"]);
    assert_eq!(code, EXIT_VALIDATION_FAIL);

    // a scenario at another carrier frequency can never pass
    let (code, out, _) = mmwchan(&["validate", "--ensemble", &ens_s, "--scenario", "73GHz-NLOS"]);
    assert_eq!(code, EXIT_VALIDATION_FAIL);
    assert!(out.lines().any(|l| l.starts_with("num_clusters") && l.ends_with("FAIL")), "{out}");
    let report: Value = serde_json::from_str(&std::fs::read_to_string(ens.join("validation.json")).unwrap()).unwrap();
    assert!(report["warnings"].as_array().unwrap().iter().any(|w| w.as_str().unwrap().contains("GHz")));
}

#[test]
fn usage_and_data_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x").display().to_string();
    assert_eq!(mmwchan(&["generate", "--scenario", "nowhere", "--count", "2", "--out", &out]).0, EXIT_USAGE);
    assert_eq!(mmwchan(&["generate", "--scenario", "28GHz-NLOS", "--count", "0", "--out", &out]).0, EXIT_USAGE);
    assert_eq!(mmwchan(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(mmwchan(&["validate", "--ensemble", &out]).0, EXIT_DATA);
    let empty = dir.path().join("empty");
    std::fs::create_dir(&empty).unwrap();
    assert_eq!(mmwchan(&["validate", "--ensemble", &empty.display().to_string()]).0, EXIT_DATA);
    assert!(!empty.join("validation.json").exists());

    let bad = dir.path().join("bad.txt");
    std::fs::write(
        &bad,
        "# mmw-pdp v1\n# bin_width_ns = 2.5\n# noise_floor_dbm = -90\n# location_id = L\n# frequency_ghz = 28\n\
         # polarization = VV\nbin_index,power_dbm\n0,-40\n1,-40,7\n",
    )
    .unwrap();
    let table = dir.path().join("t.csv").display().to_string();
    let (code, _, err) = mmwchan(&["extract", "--pdp", &bad.display().to_string(), "--out", &table]);
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains(":9:"), "{err}");
}

fn check_against_schema(value: &Value, schema: &Value, at: &str) {
    let types: Vec<&str> = match &schema["type"] {
        Value::String(t) => vec![t.as_str()],
        Value::Array(ts) => ts.iter().map(|t| t.as_str().unwrap()).collect(),
        _ => vec![],
    };
    let matches = |t: &str| match t {
        "object" => value.is_object(),
        "array" => value.is_array(),
        "string" => value.is_string(),
        "number" => value.is_number(),
        "integer" => value.is_u64() || value.is_i64(),
        "boolean" => value.is_boolean(),
        "null" => value.is_null(),
        _ => false,
    };
    assert!(types.is_empty() || types.iter().any(|t| matches(t)), "{at}: {value} is not {types:?}");
    if let (Some(obj), Some(props)) = (value.as_object(), schema["properties"].as_object()) {
        for key in schema["required"].as_array().unwrap() {
            assert!(obj.contains_key(key.as_str().unwrap()), "{at}: missing {key}");
        }
        for (k, v) in obj {
            let sub = props.get(k).unwrap_or_else(|| panic!("{at}: unexpected key {k}"));
            check_against_schema(v, sub, &format!("{at}.{k}"));
        }
    }
    if let Some(items) = value.as_array() {
        for (i, v) in items.iter().enumerate() {
            check_against_schema(v, &schema["items"], &format!("{at}[{i}]"));
        }
    }
}

#[test]
fn report_matches_shipped_schema() {
    let dir = tempfile::tempdir().unwrap();
    let ens = dir.path().join("ens").display().to_string();
    assert_eq!(mmwchan(&["generate", "--scenario", "73GHz-LOS", "--count", "50", "--out", &ens]).0, EXIT_PASS);
    mmwchan(&["validate", "--ensemble", &ens]);
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(Path::new(&ens).join("validation.json")).unwrap()).unwrap();
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/validation-report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    check_against_schema(&report, &schema, "report");
}
