#![no_main]

use libfuzzer_sys::fuzz_target;
use recon_afem::report::Cli;

// NUL-separated argument list; the program name is prepended.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let args = std::iter::once("recon-afem").chain(text.split('\0').filter(|a| !a.is_empty()));
    if let Ok(cli) = Cli::parse_args(args) {
        let _ = cli.resolve();
    }
});
