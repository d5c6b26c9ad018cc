fn main() {
    std::process::exit(fracgs::runner::dispatch(std::env::args_os()));
}
