fn main() {
    let (code, _report) = normone_cli::run_args(std::env::args_os());
    std::process::exit(code);
}
