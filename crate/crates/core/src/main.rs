fn main() {
    std::process::exit(acc_treekit::cli::run(std::env::args_os()));
}
