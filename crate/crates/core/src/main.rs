fn main() {
    std::process::exit(hisign::cli::run(std::env::args_os()));
}
