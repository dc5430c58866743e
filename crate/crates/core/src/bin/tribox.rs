fn main() {
    std::process::exit(tribox::cli::run(std::env::args_os()));
}
