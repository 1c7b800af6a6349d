fn main() {
    std::process::exit(jfts::cli::run(std::env::args_os()));
}
