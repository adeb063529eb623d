fn main() {
    std::process::exit(bergman_model::cli::run(std::env::args_os()));
}
