fn main() {
    std::process::exit(cfg_testset::cli::run(std::env::args()));
}
