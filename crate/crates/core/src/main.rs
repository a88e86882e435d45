fn main() {
    env_logger::init();
    mpinc::cli::configure_threads();
    let code = mpinc::cli::run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
