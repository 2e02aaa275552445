#![no_main]

use libfuzzer_sys::fuzz_target;
use recon_afem::report::{read_csv, write_csv};

fuzz_target!(|data: &[u8]| {
    if let Ok(records) = read_csv(data) {
        let mut out = Vec::new();
        write_csv(&records, &mut out).expect("writing to memory succeeds");
        let again = read_csv(out.as_slice()).expect("written CSV parses");
        assert_eq!(again.len(), records.len());
    }
});
