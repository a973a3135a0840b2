fn main() {
    std::process::exit(vsqueeze::output::cli::run(std::env::args_os()));
}
