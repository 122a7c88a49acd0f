fn main() {
    std::process::exit(roadwheel_cli::run_cli(std::env::args_os()));
}
