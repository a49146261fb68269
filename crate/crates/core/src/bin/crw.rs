fn main() {
    std::process::exit(crw::cli::dispatch(std::env::args_os()));
}
