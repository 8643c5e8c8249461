fn main() {
    std::process::exit(qfreq::cli::main_with_args(std::env::args_os()));
}
