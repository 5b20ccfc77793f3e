fn main() {
    std::process::exit(qd_hom::cli::run_cli(std::env::args_os()));
}
