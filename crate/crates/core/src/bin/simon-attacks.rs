fn main() {
    std::process::exit(simon_attacks::harness::run_cli(std::env::args_os()));
}
