fn main() {
    dirac_time::configure_threads_from_env();
    std::process::exit(dirac_time::cli::run(std::env::args_os()));
}
