#![no_main]

use libfuzzer_sys::fuzz_target;
use qcluster_cli::{parse_lambda, parse_sequence};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(ks) = parse_sequence(&[text]) {
        let joined: Vec<String> = ks.iter().map(|k| (k + 1).to_string()).collect();
        assert_eq!(parse_sequence(&[joined.join(",")]).unwrap(), ks);
    }
    if let Ok(m) = parse_lambda(text) {
        assert_eq!(m.rows(), m.cols());
    }
});
