fn main() {
    std::process::exit(recon_afem::report::cli_main(std::env::args_os()));
}
