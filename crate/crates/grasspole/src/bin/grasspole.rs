fn main() {
    std::process::exit(grasspole::cli_main());
}
