#![no_main]

use libfuzzer_sys::fuzz_target;
use vtqg::harness::{parse_results, report_summary, results_to_string, OutputFormat};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for format in [OutputFormat::Csv, OutputFormat::Json] {
        if let Ok(records) = parse_results(text, format) {
            let _ = report_summary(&records);
            if records.iter().all(|r| [r.mag, r.sx, r.sy, r.sz, r.ideal, r.wall_ms].iter().all(|x| x.is_finite())) {
                let again = parse_results(&results_to_string(&records, format).unwrap(), format).unwrap();
                assert_eq!(again, records);
            }
        }
    }
});
