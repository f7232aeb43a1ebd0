fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    std::process::exit(threegen::cli_io::run_command(&args));
}
