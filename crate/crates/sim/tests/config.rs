use std::io::Write;

use dpod_sim::config::{desk, desk_fading, parse_snr_range, table1, AlgorithmKind, ChannelSpec, Preset, SimConfig};
use dpod_sim::receiver::Placement;

#[test]
fn presets() {
    for name in ["table1", "desk", "desk-fading"] {
        Preset::parse(name).unwrap().config().validate().unwrap();
    }
    assert!(Preset::parse("fig9").is_err());
    let t = table1();
    assert_eq!((t.fft_size, t.data_size, t.lower_guard, t.upper_guard), (4096, 3240, 428, 428));
    assert_eq!((t.qam_order, t.backoff_db, t.oversampling), (256, 6.0, 3));
    assert_eq!(t.sweep.snr_db, (0..9).map(|i| 20.0 + 2.0 * i as f64).collect::<Vec<_>>());
    let d = desk();
    assert_eq!((d.fft_size, d.data_size, d.qam_order), (1024, 768, 64));
    assert_eq!(d.channel, ChannelSpec::Awgn {});
    assert_eq!(d.algorithms.len(), 8);
    assert!(desk_fading().channel.profile().is_some());
}

#[test]
fn toml_overrides_merge_over_the_preset() {
    let text = r#"
preset = "desk-fading"
seed = 42
qam_order = 16

[sweep]
snr_db = [5.0, 6.0]

[[algorithms]]
id = "v"
kind = "volterra"
placement = "dft-s-domain"
memory = [-1, 0, 1]
degree = 3
"#;
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    let cfg = SimConfig::load(f.path(), None).unwrap();
    assert_eq!(cfg.seed, 42);
    assert_eq!(cfg.qam_order, 16);
    assert_eq!(cfg.sweep.snr_db, vec![5.0, 6.0]);
    // keys absent from the [sweep] table keep the preset values
    assert_eq!(cfg.sweep.trials, desk_fading().sweep.trials);
    assert_eq!(cfg.channel, desk_fading().channel);
    assert_eq!(cfg.algorithms.len(), 1);
    assert_eq!(cfg.algorithms[0].kind, AlgorithmKind::Volterra);
    assert_eq!(cfg.algorithms[0].placement, Placement::DftSDomain);
    assert_eq!(cfg.algorithms[0].memory.len(), 3);

    // an explicit base wins over the named preset
    let over = SimConfig::from_toml_str(text, Some(Preset::Desk)).unwrap();
    assert_eq!(over.channel, ChannelSpec::Awgn {});
}

#[test]
fn invalid_configs_are_rejected() {
    for text in [
        "fft_size = 100",
        "qam_order = 32",
        "colour = 1",
        "preset = 3",
        "preset = \"nope\"",
        "[sweep]\ntrials = 0",
        "[training]\nnum_symbols = 0",
        "[[algorithms]]\nid = \"a\"\nkind = \"kernel\"\nplacement = \"time-domain-eq\"\nrho = 0.0",
        "[[algorithms]]\nid = \"a\"\nkind = \"none\"\nplacement = \"time-domain-eq\"\n[[algorithms]]\nid = \"a\"\nkind = \"none\"\nplacement = \"time-domain-eq\"",
        "[[algorithms]]\nid = \"a\"\nkind = \"volterra\"\nplacement = \"time-domain-eq\"\ndegree = 4",
        "[channel]\nkind = \"pdp\"\ndelays = [0, 2000]\npowers_db = [0.0, -3.0]",
    ] {
        assert!(SimConfig::from_toml_str(text, None).is_err(), "{text}");
    }
    assert!(SimConfig::load(std::path::Path::new("/nonexistent.toml"), None).is_err());
    let mut cfg = desk();
    assert!(cfg.select_algorithms(&["nope".into()]).is_err());
    cfg.select_algorithms(&["time-mp-sym".into(), "no-pa".into()]).unwrap();
    assert_eq!(cfg.algorithms.iter().map(|a| a.id.as_str()).collect::<Vec<_>>(), ["time-mp-sym", "no-pa"]);
}

#[test]
fn snr_ranges() {
    assert_eq!(parse_snr_range("20:2:24").unwrap(), vec![20.0, 22.0, 24.0]);
    assert_eq!(parse_snr_range("7.5").unwrap(), vec![7.5]);
    assert_eq!(parse_snr_range("0:0.1:0.3").unwrap().len(), 4);
    for bad in ["", "1:2", "5:0:10", "10:1:5", "a:1:2"] {
        assert!(parse_snr_range(bad).is_err(), "{bad}");
    }
}
