fn main() {
    std::process::exit(lhvcert::run(std::env::args_os()));
}
