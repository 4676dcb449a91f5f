fn main() {
    std::process::exit(lcm_cli::run(std::env::args_os()));
}
