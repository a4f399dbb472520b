fn main() {
    std::process::exit(cis::cli::run(std::env::args_os()));
}
