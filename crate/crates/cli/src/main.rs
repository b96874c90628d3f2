fn main() {
    std::process::exit(freelat::run(std::env::args_os()));
}
