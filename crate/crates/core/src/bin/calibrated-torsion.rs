fn main() {
    std::process::exit(calibrated_torsion::cli::main_with_args(std::env::args_os()));
}
