fn main() {
    std::process::exit(fracwave::cli::cli_main(std::env::args_os()));
}
